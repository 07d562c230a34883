"""
偏序集拓扑测试
"""
import numpy as np
import pytest

from framelab.errors import DegenerateMemberError, InstanceTooLargeError, NotAChainError
from framelab.exact_counts import euler_decomp_poset, euler_nondeg_poset
from framelab.hermitian_space import HermSpace
from framelab.poset_topology import (
    FinPoset,
    build_decomp_poset,
    build_doublehat_poset,
    build_hat_poset,
    build_nondeg_poset,
    decomposition_map,
    fiber_check,
    interval_checks,
    partition_lattice,
    poset_betti,
    reduced_euler,
)


def chain(k):
    return FinPoset.from_relation(list(range(k)), lambda a, b: a <= b)


def antichain(k):
    return FinPoset(list(range(k)), np.eye(k, dtype=bool))


def test_chain_is_contractible():
    P = chain(3)
    assert reduced_euler(P) == 0
    assert P.covers() == [(0, 1), (1, 2)]
    assert P.order_complex().f_vector == [3, 3, 1]
    assert P.components() == 1


def test_antichain():
    P = antichain(3)
    assert P.mobius_from_bottom() == [-1, -1, -1]
    assert reduced_euler(P) == 2
    assert P.components() == 3


def test_linear_extension_order():
    # 元素顺序与输入无关：下集小的在前
    P = FinPoset.from_relation(["top", "a", "b"], lambda x, y: y == "top")
    assert P.elements[-1] == "top"
    assert P.down_set(2, strict=True) == [0, 1]
    assert P.up_set(0) == [0, 2]


def test_relation_validation():
    with pytest.raises(ValueError):
        FinPoset(["a", "b"], np.ones((2, 2), dtype=bool))
    with pytest.raises(ValueError):
        FinPoset(["a"], np.ones((2, 2), dtype=bool))


def test_partition_lattice():
    P = partition_lattice(3)
    assert len(P) == 5
    assert len(P.covers()) == 6
    assert len(partition_lattice(4)) == 15


@pytest.mark.parametrize("n,q,size", [(2, 2, 2), (2, 3, 6), (3, 2, 24)])
def test_nondeg_poset(n, q, size):
    P = build_nondeg_poset(n, q)
    assert len(P) == size
    assert reduced_euler(P) == euler_nondeg_poset(n, q)


@pytest.mark.parametrize("n,q,size", [(2, 3, 3), (3, 2, 16)])
def test_decomp_poset(n, q, size):
    D = build_decomp_poset(n, q)
    assert len(D) == size
    assert reduced_euler(D) == euler_decomp_poset(n, q)
    assert len(build_decomp_poset(n, q, include_top=True)) == size + 1


def test_poset_size_cap():
    with pytest.raises(InstanceTooLargeError):
        build_nondeg_poset(4, 3, max_poset=100)
    with pytest.raises(InstanceTooLargeError):
        build_decomp_poset(4, 3, max_poset=100)


def test_decomposition_map():
    sp = HermSpace.canonical(3, 2)
    e1 = sp.span([(1, 0, 0)])
    e12 = sp.span([(1, 0, 0), (0, 1, 0)])
    assert len(decomposition_map(sp, [e1])) == 2
    blocks = decomposition_map(sp, [e1, e12])
    assert blocks == (((0, 0, 1),), ((0, 1, 0),), ((1, 0, 0),))


def test_decomposition_map_errors():
    sp = HermSpace.canonical(3, 2)
    e1 = sp.span([(1, 0, 0)])
    e2 = sp.span([(0, 1, 0)])
    with pytest.raises(DegenerateMemberError):
        decomposition_map(sp, [sp.span([(1, 1, 0)])])
    with pytest.raises(NotAChainError):
        decomposition_map(sp, [e1, e2])
    with pytest.raises(NotAChainError):
        decomposition_map(sp, [])


@pytest.mark.parametrize("n,q", [(2, 3), (3, 2)])
def test_fiber_property(n, q):
    result = fiber_check(n, q)
    assert result.ok
    assert result.chains > 0


@pytest.mark.parametrize("n,q", [(2, 3), (3, 2)])
def test_intervals(n, q):
    assert interval_checks(n, q) == {"upper": True, "lower": True}


def test_hat_poset_3_3(graph_3_3, primes):
    P = build_hat_poset(graph_3_3)
    assert len(P) == 126
    assert poset_betti(P, primes) == [0, 64]


def test_hat_poset_3_2(graph_3_2, primes):
    P = build_hat_poset(graph_3_2)
    assert len(P) == 16
    assert poset_betti(P, primes) == [3, 0]


def test_doublehat_poset(graph_4_2, primes):
    P = build_doublehat_poset(graph_4_2)
    assert len(P) == 80
    assert poset_betti(P, primes) == [0, 81]


def test_doublehat_needs_q2(graph_3_3):
    with pytest.raises(ValueError):
        build_doublehat_poset(graph_3_3)


def test_poset_text(graph_3_2):
    text = build_hat_poset(graph_3_2).to_text()
    assert text.startswith("element 0 ")
    assert text.count("cover ") == 12
