"""
谱测试：极小多项式零化、重数、迹恒等式、强正则参数
"""
from fractions import Fraction

import pytest

from framelab.errors import InstanceTooLargeError
from framelab.orthogonality_graph import build_graph
from framelab.spectrum import (
    annihilates,
    candidate_eigenvalues,
    eigen_values_all,
    expected_srg,
    laplacian_spectrum,
    minpoly_coeffs,
    multiplicities_rank,
    smallest_positive_laplacian,
    spectrum_formula,
    spectrum_report,
    srg_parameters,
    trace_identities,
    verify_annihilation,
)


def test_spectrum_known_values():
    assert spectrum_formula(3, 2) == {2: 4, -1: 8}
    assert spectrum_formula(4, 2) == {12: 1, 2: 24, -4: 15}
    assert spectrum_formula(2, 3) == {1: 3, -1: 3}


def test_eigenvalues():
    assert eigen_values_all(4, 3) == (63, 9, 3, -9)
    assert eigen_values_all(3, 3) == (6, 3, -1, -3)


@pytest.mark.parametrize("n,q", [(3, 3), (3, 4), (4, 3), (5, 2), (5, 3), (6, 2), (7, 4), (8, 2)])
def test_trace_identities(n, q):
    assert all(trace_identities(n, q).values())


def test_minpoly_roots():
    for n, q in [(3, 3), (4, 2), (5, 3)]:
        c0, c1, c2, c3 = minpoly_coeffs(n, q)
        for mu in eigen_values_all(n, q):
            assert mu ** 4 + c3 * mu ** 3 + c2 * mu ** 2 + c1 * mu + c0 == 0
    with pytest.raises(ValueError):
        minpoly_coeffs(2, 3)


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2), (3, 3), (3, 4), (4, 2), (5, 2)])
def test_annihilation(n, q):
    assert verify_annihilation(build_graph(n, q))


def test_annihilates_rejects_wrong_polynomial(graph_3_3):
    assert not annihilates(graph_3_3, [0, 1])
    assert not annihilates(graph_3_3, [-1, 0, 1])


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2), (3, 3), (3, 4), (4, 2), (5, 2)])
def test_rank_multiplicities(n, q):
    g = build_graph(n, q)
    assert multiplicities_rank(g) == spectrum_formula(n, q)


def test_rank_multiplicities_cap(graph_4_2):
    with pytest.raises(InstanceTooLargeError):
        multiplicities_rank(graph_4_2, max_vertices=10)


def test_candidate_eigenvalues():
    assert candidate_eigenvalues(2, 5) == [1, -1]
    assert candidate_eigenvalues(3, 3) == [6, 3, -1, -3]


def test_laplacian():
    # 链环的谱隙：(3,3) 给出 1 - 3/6
    assert laplacian_spectrum(3, 3) == [Fraction(0), Fraction(1, 2), Fraction(7, 6), Fraction(3, 2)]
    assert smallest_positive_laplacian(3, 3) == Fraction(1, 2)
    assert smallest_positive_laplacian(4, 3) == Fraction(6, 7)


def test_strongly_regular(graph_4_2):
    assert expected_srg(4, 2) == (40, 12, 2, 4)
    assert srg_parameters(graph_4_2) == (40, 12, 2, 4)
    assert expected_srg(4, 3) is None


@pytest.mark.parametrize("n", [4, 5])
def test_srg_parameters_q2(n):
    g = build_graph(n, 2)
    assert srg_parameters(g) == expected_srg(n, 2)


def test_not_strongly_regular(graph_3_3):
    assert srg_parameters(graph_3_3) is None


def test_spectrum_report(graph_4_2):
    report = spectrum_report(graph_4_2)
    assert report.annihilation_ok
    assert report.rank_multiplicities == spectrum_formula(4, 2)
    assert report.srg == (40, 12, 2, 4)
    assert all(report.extra.values())
    data = report.to_dict()
    assert data["eigenvalues"] == ["12", "2", "-4"]
    assert len(data["minpoly_coeffs"]) == 5
