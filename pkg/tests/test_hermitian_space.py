"""
酉空间测试：Gram 矩阵校验、子空间运算、直线枚举与相对位置
"""
import numpy as np
import pytest

from framelab.errors import DimensionMismatchError
from framelab.exact_counts import d_count, d_rad, iso_count
from framelab.galois_field import field_new
from framelab.hermitian_space import POSITIONS, HermSpace, Line, Position


def test_canonical_space_is_unitary():
    sp = HermSpace.canonical(3, 3)
    assert sp.n == 3
    assert sp.rad_dim == 0
    assert sp.is_unitary


def test_non_hermitian_gram_rejected():
    F = field_new(2)
    # τ(α) = α^2 ≠ α
    with pytest.raises(ValueError):
        HermSpace(F, [[0, 2], [2, 0]])


def test_ragged_gram_rejected():
    with pytest.raises(DimensionMismatchError):
        HermSpace(field_new(2), [[1, 0], [0]])


def test_vector_length_checked():
    sp = HermSpace.canonical(3, 2)
    with pytest.raises(DimensionMismatchError):
        sp.form_eval((1, 0), (1, 0, 0))


@pytest.mark.parametrize("q", [2, 3])
def test_form_is_hermitian(q):
    sp = HermSpace.canonical(2, q)
    F = sp.field
    vecs = [(a, b) for a in range(F.order) for b in range(F.order)]
    for v in vecs[:: max(1, len(vecs) // 20)]:
        for w in vecs[:: max(1, len(vecs) // 15)]:
            assert sp.form_eval(v, w) == F.frobenius(sp.form_eval(w, v))


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)])
def test_line_and_isotropic_counts(n, q):
    sp = HermSpace.canonical(n, q)
    lines = sp.enum_lines()
    assert len(lines) == d_count(n + 1, q)
    assert sp.enum_isotropic() == iso_count(n, q)
    assert all(line.norm_value != 0 for line in lines)
    assert [line.rep for line in lines] == sorted(line.rep for line in lines)


@pytest.mark.parametrize("q,entries,R", [(2, [1, 1, 0], 1), (3, [1, 1, 0], 1), (2, [1, 1, 0, 0], 2), (3, [1, 2, 0], 1)])
def test_degenerate_space_counts(q, entries, R):
    sp = HermSpace.diagonal(q, entries)
    n = len(entries)
    assert sp.rad_dim == R
    assert len(sp.enum_lines()) == d_rad(n + 1, q, R)
    assert sp.enum_isotropic() == iso_count(n, q, R)


def test_radical_and_quotient():
    sp = HermSpace.diagonal(3, [1, 1, 0])
    rad = sp.radical()
    assert rad.dim == 1
    assert rad.basis == ((0, 0, 1),)
    quotient = sp.nondegenerate_quotient()
    assert quotient.n == 2
    assert quotient.is_unitary


def test_subspace_operations():
    sp = HermSpace.canonical(4, 2)
    S = sp.span([(1, 0, 0, 0), (0, 1, 0, 0)])
    W = sp.span([(0, 1, 0, 0), (0, 0, 1, 0)])
    assert S.dim == 2
    assert sp.intersect(S, W).dim == 1
    assert sp.subspace_sum(S, W).dim == 3
    perp = sp.orth_complement(S)
    assert perp.dim == 2
    assert sp.intersect(S, perp).dim == 0
    assert sp.is_nondegenerate(S)
    assert sp.whole().dim == 4
    assert len(list(sp.vectors_of(S))) == 16


def test_isotropic_span_is_degenerate():
    sp = HermSpace.canonical(2, 2)
    # 1 + 1 = 0 in characteristic 2
    S = sp.span([(1, 1)])
    assert not sp.is_nondegenerate(S)
    assert sp.radical(S).dim == 1


def test_lines_in_subspace():
    sp = HermSpace.canonical(3, 3)
    S = sp.span([(1, 0, 0), (0, 1, 0)])
    assert len(sp.lines_in(S)) == d_count(3, 3)
    assert len(sp.lines_in(sp.whole())) == d_count(4, 3)


def test_relative_positions():
    sp = HermSpace.canonical(3, 2)
    e1 = Line((1, 0, 0), 1)
    e2 = Line((0, 1, 0), 1)
    diag = Line((1, 1, 1), 1)
    assert sp.rel_position(e1, e1) == Position.EQ
    assert sp.rel_position(e1, e2) == Position.PERP
    assert sp.rel_position(e1, diag) == Position.D


@pytest.mark.parametrize("n,q", [(3, 2), (3, 3)])
def test_position_matrix_matches_pairwise(n, q):
    sp = HermSpace.canonical(n, q)
    lines = sp.enum_lines()
    pos = sp.position_matrix(lines)
    assert np.all(np.diag(pos) == 0)
    assert np.array_equal(pos, pos.T)
    for i in range(0, len(lines), 5):
        for j in range(0, len(lines), 7):
            assert POSITIONS[pos[i, j]] == sp.rel_position(lines[i], lines[j])
    if q == 2:
        assert not np.any(pos == POSITIONS.index(Position.ND))


def test_eta_matrices_match_counts():
    sp = HermSpace.canonical(3, 3)
    lines = sp.enum_lines()
    eta = sp.eta_matrices(lines)
    for i, j in [(0, 1), (0, 5), (3, 40), (10, 10)]:
        counts = sp.eta_counts(lines[i], lines[j], lines)
        assert tuple(int(eta[k][i, j]) for k in range(4)) == counts
        assert sp.eta_brute(2, lines[i], lines[j], lines) == counts[2]
    with pytest.raises(ValueError):
        sp.eta_brute(4, lines[0], lines[1], lines)
