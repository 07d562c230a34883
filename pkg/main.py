from framelab.clique_homology import clique_complex, homology
from framelab.config import get_settings
from framelab.exact_counts import d_count, euler_frame
from framelab.garland_bounds import vanishing_prediction
from framelab.orthogonality_graph import build_graph, components, walks_matrix
from framelab.spectrum import spectrum_formula


def main():
    settings = get_settings()
    n, q = 3, 3

    g = build_graph(n, q)
    print("vertices:", g.num_vertices, "expected:", d_count(n + 1, q))
    print("degree:", g.degree, "expected:", d_count(n, q))
    print("components:", components(g))
    print("walks of length 3:", walks_matrix(g, 3).to_dict())
    print("spectrum:", spectrum_formula(n, q))

    K = clique_complex(g)
    report = homology(K, settings.primes)
    print("f-vector:", K.f_vector)
    print("betti:", report.betti, "euler:", euler_frame(n, q))
    print("predicted vanishing:", vanishing_prediction(n, q).degrees)


main()
