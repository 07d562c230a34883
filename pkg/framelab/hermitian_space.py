"""
埃尔米特空间 - GF(q^2) 上（可能退化的）埃尔米特型的向量与子空间运算
包括型求值、根基、正交补、非退化直线枚举和直线对的相对位置分类
"""
import itertools
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from framelab.errors import DimensionMismatchError, InstanceTooLargeError
from framelab.galois_field import FieldElem, FieldTable, field_new

Vec = Tuple[FieldElem, ...]

# 全向量枚举的上限（q^{2n}）
MAX_ENUM_VECTORS = 2_000_000
# 成对型矩阵按行分块计算
PAIR_BLOCK = 1024


class Position(Enum):
    """直线对的相对位置"""
    EQ = "eq"
    PERP = "perp"
    ND = "nd"
    D = "d"


# position_matrix 中的整数编码顺序
POSITIONS = [Position.EQ, Position.PERP, Position.ND, Position.D]


@dataclass(frozen=True)
class Line:
    """非退化一维子空间，rep 的首个非零坐标为 1"""
    rep: Vec
    norm_value: FieldElem


@dataclass(frozen=True)
class Subspace:
    """以简化行阶梯形基表示的子空间"""
    basis: Tuple[Vec, ...]
    n: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def key(self) -> Tuple[Vec, ...]:
        return self.basis


def row_reduce(field: FieldTable, rows: Iterable[Sequence[FieldElem]], ncols: int) -> Tuple[Vec, ...]:
    """
    简化行阶梯形（去掉零行）

    Args:
        field: 有限域
        rows: 行向量
        ncols: 列数

    Returns:
        唯一的 RREF 基
    """
    m = [list(r) for r in rows]
    for r in m:
        if len(r) != ncols:
            raise DimensionMismatchError(f"row of length {len(r)}, expected {ncols}")
    mul, add, neg = field._mul, field._add, field._neg
    rank = 0
    for c in range(ncols):
        if rank == len(m):
            break
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = field.inv(m[rank][c])
        prow = [mul[inv][x] for x in m[rank]]
        m[rank] = prow
        for i in range(len(m)):
            f = m[i][c]
            if i != rank and f:
                nf = neg[f]
                m[i] = [add[a][mul[nf][b]] for a, b in zip(m[i], prow)]
        rank += 1
    return tuple(tuple(r) for r in m[:rank])


def nullspace(field: FieldTable, rows: Sequence[Sequence[FieldElem]], ncols: int) -> List[Vec]:
    """{x : rows·x = 0} 的一组基"""
    rref = row_reduce(field, rows, ncols)
    pivots = [next(c for c, x in enumerate(r) if x) for r in rref]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for r, pc in zip(rref, pivots):
            x[pc] = field.neg(r[f])
        basis.append(tuple(x))
    return basis


class HermSpace:
    """带埃尔米特 Gram 矩阵的 n 维 GF(q^2) 空间"""

    def __init__(self, field: FieldTable, gram: Sequence[Sequence[FieldElem]]):
        self.field = field
        self.n = len(gram)
        self.gram: Tuple[Vec, ...] = tuple(tuple(row) for row in gram)
        for i, row in enumerate(self.gram):
            if len(row) != self.n:
                raise DimensionMismatchError(f"Gram row {i} has length {len(row)}, expected {self.n}")
        for i in range(self.n):
            for j in range(self.n):
                if self.gram[i][j] != field.frobenius(self.gram[j][i]):
                    raise ValueError(f"Gram matrix is not Hermitian at ({i}, {j})")

    @classmethod
    def canonical(cls, n: int, q: int) -> "HermSpace":
        """标准型 Ψ(v,w) = Σ v_i τ(w_i)"""
        field = field_new(q)
        gram = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        return cls(field, gram)

    @classmethod
    def diagonal(cls, q: int, entries: Sequence[int]) -> "HermSpace":
        """对角 Gram 矩阵，entries 为素域整数（0 产生根基方向）"""
        field = field_new(q)
        n = len(entries)
        gram = [[field.from_int(entries[i]) if i == j else 0 for j in range(n)] for i in range(n)]
        return cls(field, gram)

    def __repr__(self) -> str:
        return f"HermSpace(n={self.n}, q={self.field.q}, rad_dim={self.rad_dim})"

    @cached_property
    def rad_dim(self) -> int:
        return self.n - len(row_reduce(self.field, self.gram, self.n))

    @property
    def is_unitary(self) -> bool:
        return self.rad_dim == 0

    def _check_vec(self, v: Sequence[FieldElem]) -> None:
        if len(v) != self.n:
            raise DimensionMismatchError(f"vector of length {len(v)} in a space of dimension {self.n}")

    def _apply_gram(self, v: Sequence[FieldElem]) -> Vec:
        """u = v·G"""
        F = self.field
        out = []
        for j in range(self.n):
            acc = 0
            for i in range(self.n):
                if v[i]:
                    acc = F._add[acc][F._mul[v[i]][self.gram[i][j]]]
            out.append(acc)
        return tuple(out)

    def form_eval(self, v: Sequence[FieldElem], w: Sequence[FieldElem]) -> FieldElem:
        """Ψ(v,w) = Σ v_i g_ij τ(w_j)"""
        self._check_vec(v)
        self._check_vec(w)
        F = self.field
        u = self._apply_gram(v)
        acc = 0
        for uj, wj in zip(u, w):
            if uj and wj:
                acc = F._add[acc][F._mul[uj][F._tau[wj]]]
        return acc

    # 子空间运算
    def span(self, vectors: Iterable[Sequence[FieldElem]]) -> Subspace:
        vectors = list(vectors)
        for v in vectors:
            self._check_vec(v)
        return Subspace(row_reduce(self.field, vectors, self.n), self.n)

    def whole(self) -> Subspace:
        return self.span([tuple(1 if i == j else 0 for j in range(self.n)) for i in range(self.n)])

    def subspace_sum(self, S: Subspace, W: Subspace) -> Subspace:
        return self.span(list(S.basis) + list(W.basis))

    def intersect(self, S: Subspace, W: Subspace) -> Subspace:
        """Zassenhaus 算法求 S ∩ W"""
        n = self.n
        zeros = (0,) * n
        rows = [tuple(u) + tuple(u) for u in S.basis] + [tuple(w) + zeros for w in W.basis]
        rref = row_reduce(self.field, rows, 2 * n)
        inter = [r[n:] for r in rref if not any(r[:n])]
        return self.span(inter)

    def orth_complement(self, S: Subspace) -> Subspace:
        """S^⊥ = {w : Ψ(s,w) = 0 对所有 s ∈ S}"""
        if S.n != self.n:
            raise DimensionMismatchError(f"subspace of ambient dimension {S.n}, expected {self.n}")
        F = self.field
        rows = [self._apply_gram(s) for s in S.basis]
        if not rows:
            return self.whole()
        sols = nullspace(F, rows, self.n)
        return self.span([tuple(F._tau[x] for x in sol) for sol in sols])

    def radical(self, S: Optional[Subspace] = None) -> Subspace:
        """Rad(S) = S ∩ S^⊥"""
        S = S if S is not None else self.whole()
        return self.intersect(S, self.orth_complement(S))

    def is_nondegenerate(self, S: Subspace) -> bool:
        return self.radical(S).dim == 0

    def vectors_of(self, S: Subspace) -> Iterable[Vec]:
        """子空间中的全部向量"""
        F = self.field
        if F.order ** S.dim > MAX_ENUM_VECTORS:
            raise InstanceTooLargeError(f"{F.order}^{S.dim} vectors exceed the enumeration cap")
        for coeffs in itertools.product(range(F.order), repeat=S.dim):
            v = [0] * self.n
            for c, b in zip(coeffs, S.basis):
                if c:
                    v = [F._add[a][F._mul[c][x]] for a, x in zip(v, b)]
            yield tuple(v)

    def lines_in(self, S: Subspace) -> List[Line]:
        """S 中的非退化直线"""
        lines = []
        for v in self.vectors_of(S):
            lead = next((x for x in v if x), 0)
            if lead == 1:
                norm = self.form_eval(v, v)
                if norm:
                    lines.append(Line(v, norm))
        return sorted(lines, key=lambda line: line.rep)

    def line_space(self, line: Line) -> Subspace:
        return self.span([line.rep])

    # 枚举
    def _all_vectors(self) -> np.ndarray:
        total = self.field.order ** self.n
        if total > MAX_ENUM_VECTORS:
            raise InstanceTooLargeError(f"{total} vectors exceed the enumeration cap {MAX_ENUM_VECTORS}")
        return np.array(list(itertools.product(range(self.field.order), repeat=self.n)), dtype=np.int64).reshape(
            total, self.n
        )

    def _gram_rows(self, vecs: np.ndarray) -> np.ndarray:
        """批量计算 v·G"""
        A, M = self.field.add_table, self.field.mul_table
        G = np.array(self.gram, dtype=np.int64)
        out = np.zeros_like(vecs)
        for j in range(self.n):
            acc = np.zeros(len(vecs), dtype=np.int64)
            for i in range(self.n):
                acc = A[acc, M[vecs[:, i], G[i, j]]]
            out[:, j] = acc
        return out

    def _norms(self, vecs: np.ndarray) -> np.ndarray:
        A, M, T = self.field.add_table, self.field.mul_table, self.field.tau_table
        u = self._gram_rows(vecs)
        acc = np.zeros(len(vecs), dtype=np.int64)
        for j in range(self.n):
            acc = A[acc, M[u[:, j], T[vecs[:, j]]]]
        return acc

    def enum_lines(self) -> List[Line]:
        """全部非退化直线，按代表元字典序排列"""
        vecs = self._all_vectors()
        nonzero = vecs.any(axis=1)
        lead_idx = np.argmax(vecs != 0, axis=1)
        lead = vecs[np.arange(len(vecs)), lead_idx]
        canon = vecs[nonzero & (lead == 1)]
        norms = self._norms(canon)
        keep = norms != 0
        lines = [Line(tuple(int(x) for x in row), int(nv)) for row, nv in zip(canon[keep], norms[keep])]
        logger.debug(f"Enumerated {len(lines)} non-degenerate lines in {self!r}")
        return lines

    def enum_isotropic(self) -> int:
        """非零迷向向量个数"""
        vecs = self._all_vectors()
        norms = self._norms(vecs)
        return int(np.count_nonzero(norms == 0)) - 1

    def pair_form_matrix(self, left: Sequence[Line], right: Sequence[Line]) -> np.ndarray:
        """矩阵 [Ψ(s,w)]，行对应 left，列对应 right"""
        A, M, T = self.field.add_table, self.field.mul_table, self.field.tau_table
        L = np.array([line.rep for line in left], dtype=np.int64).reshape(len(left), self.n)
        R = np.array([line.rep for line in right], dtype=np.int64).reshape(len(right), self.n)
        u = self._gram_rows(L)
        tr = T[R]
        out = np.zeros((len(left), len(right)), dtype=np.int64)
        for start in range(0, len(left), PAIR_BLOCK):
            stop = min(start + PAIR_BLOCK, len(left))
            acc = np.zeros((stop - start, len(right)), dtype=np.int64)
            for j in range(self.n):
                acc = A[acc, M[u[start:stop, j][:, None], tr[None, :, j]]]
            out[start:stop] = acc
        return out

    # 相对位置
    def rel_position(self, S: Line, W: Line) -> Position:
        if S.rep == W.rep:
            return Position.EQ
        if self.form_eval(S.rep, W.rep) == 0:
            return Position.PERP
        if self.radical(self.span([S.rep, W.rep])).dim > 0:
            return Position.D
        return Position.ND

    def position_matrix(self, lines: Sequence[Line]) -> np.ndarray:
        """
        所有直线对的相对位置编码（POSITIONS 中的下标）

        两条不同且不正交的非退化直线之和退化，当且仅当
        Gram 行列式 |s||w| - N(Ψ(s,w)) 为零
        """
        F = self.field
        psi = self.pair_form_matrix(lines, lines)
        norms = np.array([line.norm_value for line in lines], dtype=np.int64)
        prod = F.mul_table[norms[:, None], norms[None, :]]
        degenerate = F.norm_table[psi] == prod
        pos = np.full(psi.shape, POSITIONS.index(Position.ND), dtype=np.int64)
        pos[degenerate] = POSITIONS.index(Position.D)
        pos[psi == 0] = POSITIONS.index(Position.PERP)
        np.fill_diagonal(pos, POSITIONS.index(Position.EQ))
        return pos

    def eta_counts(self, S: Line, W: Line, lines: Optional[Sequence[Line]] = None) -> Tuple[int, int, int, int]:
        """
        (η0, η1, η2, η3)，对 G(S^⊥) 中的直线 T 逐一分类

        Args:
            S: 直线
            W: 直线
            lines: 预先枚举的直线（可选）
        """
        lines = lines if lines is not None else self.enum_lines()
        counts = [0, 0, 0, 0]
        for T in lines:
            if self.form_eval(S.rep, T.rep) != 0:
                continue
            pos = self.rel_position(T, W)
            if pos == Position.D:
                counts[3] += 1
                continue
            counts[0] += 1
            if pos == Position.PERP:
                counts[1] += 1
            elif pos == Position.ND:
                counts[2] += 1
        return tuple(counts)

    def eta_brute(self, i: int, S: Line, W: Line, lines: Optional[Sequence[Line]] = None) -> int:
        """|E_i(S,W)|，i ∈ {0,1,2,3}"""
        if i not in (0, 1, 2, 3):
            raise ValueError(f"eta index must be 0..3, got {i}")
        return self.eta_counts(S, W, lines)[i]

    def eta_matrices(self, lines: Sequence[Line]) -> Dict[int, np.ndarray]:
        """全部直线对的 η_i，通过邻接矩阵与位置指示矩阵相乘"""
        pos = self.position_matrix(lines)
        adj = (pos == POSITIONS.index(Position.PERP)).astype(np.int64)
        ind = {p: (pos == POSITIONS.index(p)).astype(np.int64) for p in POSITIONS}
        by_class = {p: adj @ ind[p] for p in POSITIONS}
        return {
            0: by_class[Position.EQ] + by_class[Position.PERP] + by_class[Position.ND],
            1: by_class[Position.PERP],
            2: by_class[Position.ND],
            3: by_class[Position.D],
        }

    def nondegenerate_quotient(self) -> "HermSpace":
        """V/Rad(V)，以根基的一个补空间上的限制型表示"""
        rad = self.radical()
        basis = list(rad.basis)
        complement: List[Vec] = []
        for i in range(self.n):
            e = tuple(1 if j == i else 0 for j in range(self.n))
            if len(row_reduce(self.field, basis + complement + [e], self.n)) > len(basis) + len(complement):
                complement.append(e)
        gram = [[self.form_eval(a, b) for b in complement] for a in complement]
        return HermSpace(self.field, gram)
