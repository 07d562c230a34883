"""
团复形与同调测试
"""
import pytest

from framelab.clique_homology import (
    SimComplex,
    betti,
    clique_complex,
    collapse_doublehat,
    collapse_hat,
    collapsed_clique_complex,
    homology,
    is_pure,
    torsion2_count,
)
from framelab.errors import InstanceTooLargeError, NotCollapsibleError
from framelab.exact_counts import euler_frame, frame_count
from framelab.orthogonality_graph import build_graph

# 6 顶点的射影平面
RP2 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1), (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]


def test_from_maximal():
    K = SimComplex.from_maximal([(0, 1, 2), (2, 3)])
    assert K.f_vector == [4, 4, 1]
    assert K.dim == 2
    assert K.reduced_euler() == 0


def test_hollow_triangle(primes):
    K = SimComplex.from_maximal([(0, 1), (1, 2), (0, 2)])
    assert betti(K, 0, primes) == [0, 1]
    assert betti(K, 3) == [0, 1]


def test_projective_plane(primes):
    K = SimComplex.from_maximal(RP2)
    assert K.f_vector == [6, 15, 10]
    assert K.boundary_squares_zero()
    assert betti(K, 0, primes) == [0, 0, 0]
    assert betti(K, 2) == [0, 1, 1]
    assert betti(K, 3) == [0, 0, 0]
    assert torsion2_count(K, 1, primes) == 1
    assert torsion2_count(K, 0, primes) == 0


def test_torsion_without_smith_form(primes):
    K = SimComplex.from_maximal(RP2)
    assert torsion2_count(K, 1, primes, snf_max=5) == 1


def test_homology_report(primes):
    K = SimComplex.from_maximal(RP2)
    report = homology(K, primes, mod_primes=(2,), torsion_degrees=(0, 1))
    assert report.betti == [0, 0, 0]
    assert report.betti_mod[2] == [0, 1, 1]
    assert report.torsion2 == {0: 0, 1: 1}
    assert report.euler_from_betti == K.reduced_euler()
    data = report.to_dict()
    assert data["torsion2"] == {"0": "0", "1": "1"}


@pytest.mark.parametrize("n,q", [(2, 3), (3, 2), (3, 3), (4, 2)])
def test_f_vector_matches_frame_counts(n, q):
    K = clique_complex(build_graph(n, q))
    assert K.f_vector == [frame_count(n, q, m) for m in range(1, n + 1)]
    assert K.reduced_euler() == euler_frame(n, q)
    assert K.meta == {"n": n, "q": q}


@pytest.mark.parametrize(
    "n,q,expected", [(2, 2, [0, 0]), (2, 3, [2, 0]), (3, 2, [3, 0, 0]), (3, 3, [0, 64, 0]), (4, 2, [0, 81, 0, 0])]
)
def test_frame_complex_betti(n, q, expected, primes):
    K = clique_complex(build_graph(n, q))
    assert K.boundary_squares_zero()
    report = homology(K, primes)
    assert report.betti == expected
    assert report.euler_from_betti == euler_frame(n, q)


@pytest.mark.slow
def test_frame_complex_betti_4_3(primes):
    K = clique_complex(build_graph(4, 3))
    assert K.f_vector == [540, 17010, 34020, 8505]
    assert homology(K, primes).betti == [0, 70, 9114, 0]


@pytest.mark.slow
def test_two_torsion_6_2(primes):
    K = clique_complex(build_graph(6, 2), max_dim=2)
    assert K.truncated
    report = homology(K, primes, torsion_degrees=(1,))
    assert report.betti[1] == 0
    assert report.torsion2[1] == 2


def test_truncated_complex(primes, graph_3_3):
    K = clique_complex(graph_3_3, max_dim=1)
    assert K.truncated
    assert K.f_vector == [63, 189]
    assert betti(K, 0, primes) == [0]


def test_simplex_cap(graph_4_2):
    with pytest.raises(InstanceTooLargeError):
        clique_complex(graph_4_2, max_simplices=100)


def test_purity(graph_3_3, graph_4_2):
    assert is_pure(graph_3_3)
    assert is_pure(graph_4_2)


def test_boundary_matrix(graph_3_2):
    K = clique_complex(graph_3_2)
    assert K.boundary_matrix(1).shape == (12, 12)
    assert K.boundary_matrix(2).shape == (12, 4)
    assert K.to_text().startswith("dim 0 count 12\n")


def test_collapse_hat(graph_3_3):
    K = clique_complex(graph_3_3)
    hat = collapse_hat(K)
    assert hat.f_vector == [63, 126]
    assert hat.reduced_euler() == K.reduced_euler()
    assert hat.meta["hat"] == 1


def test_collapse_doublehat(graph_4_2):
    K = clique_complex(graph_4_2)
    double = collapse_doublehat(K)
    assert double.f_vector == [40, 120]
    assert double.reduced_euler() == -81


def test_doublehat_needs_q2(graph_3_3):
    with pytest.raises(ValueError):
        collapse_doublehat(clique_complex(graph_3_3))


def test_collapse_rejects_shared_face():
    K = SimComplex.from_maximal([(0, 1, 2), (1, 2, 3)])
    with pytest.raises(NotCollapsibleError):
        collapse_hat(K)


def test_collapse_rejects_truncated(graph_3_3):
    with pytest.raises(NotCollapsibleError):
        collapse_hat(clique_complex(graph_3_3, max_dim=1))


@pytest.mark.parametrize("n,q", [(3, 2), (3, 3), (4, 2)])
def test_collapse_preserves_homology(n, q, primes):
    K = clique_complex(build_graph(n, q))
    degrees = list(range(K.dim))
    expected = homology(K, primes, torsion_degrees=degrees)
    collapsed = [collapse_hat(K)]
    if q == 2:
        collapsed.append(collapse_doublehat(K))
    for L in collapsed:
        report = homology(L, primes, torsion_degrees=degrees)
        assert report.betti == expected.betti
        assert report.torsion2 == expected.torsion2


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)])
def test_collapsed_complex_matches_explicit_collapse(n, q):
    g = build_graph(n, q)
    K = clique_complex(g)
    explicit = collapse_doublehat(K) if q == 2 and K.dim >= 2 else collapse_hat(K)
    direct = collapsed_clique_complex(g)
    assert direct.layers == explicit.layers
    assert direct.meta == explicit.meta
    assert not direct.truncated


def test_collapsed_complex_sizes():
    # hat 保留 f_{n-1} - f_n 个 (n-1)-标架，double-hat 保留 f_{n-2} - f_{n-1} + f_n 个 (n-2)-标架
    f = [frame_count(3, 3, m) for m in range(1, 4)]
    assert collapsed_clique_complex(build_graph(3, 3)).f_vector == [f[0], f[1] - f[2]]
    f = [frame_count(4, 2, m) for m in range(1, 5)]
    assert collapsed_clique_complex(build_graph(4, 2)).f_vector == [f[0], f[1] - f[2] + f[3]]


def test_collapsed_complex_betti(primes, graph_3_3, graph_4_2):
    assert homology(collapsed_clique_complex(graph_3_3), primes).betti == [0, 64, 0]
    assert homology(collapsed_clique_complex(graph_4_2), primes).betti == [0, 81, 0, 0]


def test_collapsed_complex_truncates_below_top(graph_4_2):
    K = collapsed_clique_complex(graph_4_2, max_dim=0)
    assert K.truncated
    assert K.f_vector == [40]
    assert "doublehat" not in K.meta


@pytest.mark.slow
def test_collapsed_complex_6_2_fits_default_cap():
    f = [frame_count(6, 2, m) for m in range(1, 7)]
    K = collapsed_clique_complex(build_graph(6, 2))
    assert K.f_vector == [f[0], f[1], f[2], f[3] - f[4] + f[5]]
    assert max(K.f_vector) < 2_000_000
    assert K.reduced_euler() == euler_frame(6, 2)
