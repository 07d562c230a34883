"""
团复形同调 - 构造标架复形 F(V)，执行 hat / double-hat 坍缩，计算 Betti 数与 2-挠
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from loguru import logger
from scipy.sparse import coo_matrix, csc_matrix

from framelab.errors import InstanceTooLargeError, NotCollapsibleError
from framelab.orthogonality_graph import OrthGraph
from framelab.sparse_rank import (
    SparseColumn,
    columns_to_bits,
    rank_gf2,
    rank_mod_p,
    rational_rank,
    smith_invariants,
)

Simplex = Tuple[int, ...]


class SimComplex:
    """按维数分层存储的单纯复形，每层按字典序排列"""

    def __init__(self, layers: Sequence[Sequence[Simplex]], truncated: bool = False, meta: Optional[Dict[str, int]] = None):
        self.layers: List[List[Simplex]] = [list(layer) for layer in layers]
        while self.layers and not self.layers[-1]:
            self.layers.pop()
        self.index: List[Dict[Simplex, int]] = [{s: i for i, s in enumerate(layer)} for layer in self.layers]
        # truncated 表示只构造到某个维数，最高维之上可能还有单形
        self.truncated = truncated
        self.meta = dict(meta or {})

    @classmethod
    def from_maximal(cls, facets: Sequence[Simplex]) -> "SimComplex":
        """由极大单形生成向下封闭的复形"""
        faces: Dict[int, set] = {}
        for facet in facets:
            facet = tuple(sorted(facet))
            for mask in range(1, 1 << len(facet)):
                face = tuple(v for b, v in enumerate(facet) if mask >> b & 1)
                faces.setdefault(len(face) - 1, set()).add(face)
        top = max(faces) if faces else -1
        return cls([sorted(faces.get(k, ())) for k in range(top + 1)])

    def __repr__(self) -> str:
        return f"SimComplex(f={self.f_vector})"

    @property
    def dim(self) -> int:
        return len(self.layers) - 1

    @property
    def f_vector(self) -> List[int]:
        return [len(layer) for layer in self.layers]

    def reduced_euler(self) -> int:
        return -1 + sum((-1) ** k * f for k, f in enumerate(self.f_vector))

    def boundary_columns(self, k: int) -> List[SparseColumn]:
        """∂_k 的列（k 维单形），行为 k-1 维单形"""
        if k <= 0 or k > self.dim:
            return []
        rows = self.index[k - 1]
        cols = []
        for s in self.layers[k]:
            col = {}
            for i in range(len(s)):
                col[rows[s[:i] + s[i + 1:]]] = -1 if i % 2 else 1
            cols.append(col)
        return cols

    def boundary_matrix(self, k: int) -> csc_matrix:
        rows, cols, vals = [], [], []
        for j, col in enumerate(self.boundary_columns(k)):
            for r, v in col.items():
                rows.append(r)
                cols.append(j)
                vals.append(v)
        shape = (len(self.layers[k - 1]) if 0 < k <= self.dim else 0, len(self.layers[k]) if 0 <= k <= self.dim else 0)
        return coo_matrix((np.array(vals, dtype=np.int64), (rows, cols)), shape=shape).tocsc()

    def boundary_squares_zero(self) -> bool:
        for k in range(2, self.dim + 1):
            prod = self.boundary_matrix(k - 1) @ self.boundary_matrix(k)
            if prod.count_nonzero():
                return False
        return True

    def to_text(self) -> str:
        out = []
        for k, layer in enumerate(self.layers):
            out.append(f"dim {k} count {len(layer)}")
            out.extend(" ".join(str(v) for v in s) for s in layer)
        return "\n".join(out) + "\n"


def enumerate_cliques(
    bits: Sequence[int],
    max_dim: Optional[int] = None,
    max_simplices: int = 2_000_000,
    collapse_top: bool = False,
) -> Tuple[List[List[Simplex]], bool]:
    """
    由邻居位集逐层枚举团，每层按字典序排列

    Args:
        bits: 每个顶点的邻居位集
        max_dim: 枚举到的最高维数，None 表示全部
        max_simplices: 每一维的单形数上限
        collapse_top: 在 max_dim 层只保留公共邻居都小于最大顶点的团

    Returns:
        (各层单形, 是否截断)
    """
    def free(s: Simplex, common: int) -> bool:
        return common.bit_length() <= s[-1]

    layer = [(v,) for v in range(len(bits))]
    commons = list(bits)
    if collapse_top and max_dim == 0:
        layer = [s for s, c in zip(layer, commons) if free(s, c)]
    layers = [layer]
    while layer and (max_dim is None or len(layers) <= max_dim):
        last = collapse_top and len(layers) == max_dim
        nxt, nxt_commons = [], []
        for s, common in zip(layer, commons):
            c = common >> (s[-1] + 1) << (s[-1] + 1)
            while c:
                low = c & -c
                j = low.bit_length() - 1
                c ^= low
                joint = common & bits[j]
                if last and not free(s + (j,), joint):
                    continue
                nxt.append(s + (j,))
                nxt_commons.append(joint)
            if len(nxt) > max_simplices:
                raise InstanceTooLargeError(f"more than {max_simplices} simplices in dimension {len(layers)}")
        if not nxt:
            break
        layers.append(nxt)
        layer, commons = nxt, nxt_commons
        logger.debug(f"Clique layer {len(layers) - 1}: {len(nxt)} simplices")
    truncated = (
        not collapse_top
        and bool(layer)
        and max_dim is not None
        and any(c >> (s[-1] + 1) for s, c in zip(layer, commons))
    )
    return layers, truncated


def clique_complex(g: OrthGraph, max_dim: Optional[int] = None, max_simplices: int = 2_000_000) -> SimComplex:
    """G(V) 的团复形"""
    layers, truncated = enumerate_cliques(g.neighbor_bits, max_dim, max_simplices)
    K = SimComplex(layers, truncated=truncated, meta={"n": g.n, "q": g.q})
    logger.info(f"Built clique complex of {g!r}: f={K.f_vector}")
    return K


def collapsed_clique_complex(
    g: OrthGraph, max_dim: Optional[int] = None, max_simplices: int = 2_000_000
) -> SimComplex:
    """
    直接枚举坍缩后的标架复形：q=2 用 double-hat，其余用 hat

    非退化空间上逐层等于 collapse_hat / collapse_doublehat 作用于整个团复形的结果，
    但不必构造被删去的高维单形。max_dim 低于坍缩后的顶维时返回截断的团复形，
    两者在这些维数上相同。退化空间不坍缩。

    Args:
        g: 正交图
        max_dim: 枚举到的最高维数，None 表示全部
        max_simplices: 每一维的单形数上限

    Returns:
        与 F(V) 同伦等价的复形
    """
    if g.space.rad_dim:
        return clique_complex(g, max_dim, max_simplices)
    double = g.q == 2 and g.n >= 3
    top = g.n - 3 if double else g.n - 2
    if max_dim is not None and max_dim < top:
        return clique_complex(g, max_dim, max_simplices)
    layers, _ = enumerate_cliques(g.neighbor_bits, top, max_simplices, collapse_top=True)
    meta = {"n": g.n, "q": g.q, "full_dim": g.n - 1, "hat": 1}
    if double:
        meta["doublehat"] = 1
    K = SimComplex(layers, meta=meta)
    logger.info(f"Built {'double-hat' if double else 'hat'} collapsed complex of {g!r}: f={K.f_vector}")
    return K


def is_pure(g: OrthGraph) -> bool:
    """全部极大团大小为 n - rad_dim"""
    target = g.n - g.space.rad_dim
    return all(len(c) == target for c in nx.find_cliques(g.to_networkx()))


def _coface_counts(faces_of: Sequence[Simplex]) -> Dict[Simplex, int]:
    counts: Dict[Simplex, int] = {}
    for s in faces_of:
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            counts[f] = counts.get(f, 0) + 1
    return counts


def _remove_pairs(K: SimComplex, pairs: List[Tuple[Simplex, Simplex]], meta_key: str) -> SimComplex:
    """删除 (自由面, 唯一上面) 对，先校验每个自由面恰有一个上面"""
    if not pairs:
        return K
    top_dim = len(pairs[0][1]) - 1
    counts = _coface_counts(K.layers[top_dim])
    seen = set()
    for face, coface in pairs:
        if coface not in K.index[top_dim]:
            raise NotCollapsibleError(f"simplex {coface} is not in the complex")
        if counts.get(face, 0) != 1:
            raise NotCollapsibleError(f"face {face} has {counts.get(face, 0)} cofaces, expected 1")
        if face in seen:
            raise NotCollapsibleError(f"face {face} paired twice")
        seen.add(face)
    removed_top = {c for _, c in pairs}
    layers = [list(layer) for layer in K.layers]
    layers[top_dim] = [s for s in layers[top_dim] if s not in removed_top]
    layers[top_dim - 1] = [s for s in layers[top_dim - 1] if s not in seen]
    meta = dict(K.meta)
    meta.setdefault("full_dim", K.dim)
    meta[meta_key] = 1
    out = SimComplex(layers, truncated=K.truncated, meta=meta)
    logger.debug(f"Collapsed {len(pairs)} pairs: f={K.f_vector} -> {out.f_vector}")
    return out


def collapse_hat(K: SimComplex) -> SimComplex:
    """每个最高维单形 τ 与 τ 去掉最大顶点配对"""
    if K.dim < 1:
        raise NotCollapsibleError("hat collapse needs a complex of dimension >= 1")
    if K.truncated:
        raise NotCollapsibleError("cannot collapse a truncated complex")
    pairs = [(t[:-1], t) for t in K.layers[K.dim]]
    return _remove_pairs(K, pairs, "hat")


def collapse_doublehat(K: SimComplex) -> SimComplex:
    """
    q=2 时再降一维：对最高维单形 τ 与 v ≠ max(τ)，
    将 τ-{v} 与 τ-{v, max(τ)} 配对
    """
    if K.meta.get("q") != 2:
        raise ValueError("double-hat collapse is defined over GF(4) only")
    if K.dim < 2:
        raise NotCollapsibleError("double-hat collapse needs a complex of dimension >= 2")
    tops = list(K.layers[K.dim])
    once = collapse_hat(K)
    pairs = []
    for t in tops:
        v0 = t[-1]
        for v in t[:-1]:
            rho = tuple(x for x in t if x != v)
            pairs.append((tuple(x for x in rho if x != v0), rho))
    return _remove_pairs(once, pairs, "doublehat")


@dataclass
class HomologyReport:
    """约化同调：有理 Betti 数、模 p Betti 数和 2-挠个数"""
    f_vector: List[int]
    betti: List[int]
    betti_mod: Dict[int, List[int]] = field(default_factory=dict)
    torsion2: Dict[int, int] = field(default_factory=dict)
    ranks: Dict[int, int] = field(default_factory=dict)

    @property
    def euler_from_betti(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))

    def to_dict(self) -> Dict[str, object]:
        return {
            "f_vector": [str(x) for x in self.f_vector],
            "betti": [str(x) for x in self.betti],
            "betti_mod": {str(p): [str(x) for x in bs] for p, bs in self.betti_mod.items()},
            "torsion2": {str(k): str(v) for k, v in self.torsion2.items()},
        }


def _betti_from_ranks(K: SimComplex, ranks: Dict[int, int]) -> List[int]:
    f = K.f_vector
    top = K.dim - 1 if K.truncated else K.dim
    out = []
    for k in range(top + 1):
        r_k = ranks.get(k, 0) if k > 0 else (1 if f[0] else 0)
        out.append(f[k] - r_k - ranks.get(k + 1, 0))
    if not K.truncated:
        # 坍缩删去的维数上同调为零
        out.extend([0] * (K.meta.get("full_dim", K.dim) - K.dim))
    return out


def boundary_ranks(
    K: SimComplex,
    coefficients: int = 0,
    primes: Sequence[int] = (),
    threads: int = 1,
) -> Dict[int, int]:
    """
    rank ∂_k，k = 1..dim

    Args:
        coefficients: 0 表示有理数（需 primes），否则为素数 p
        primes: 有理秩使用的大素数
        threads: 并行度
    """
    ranks: Dict[int, int] = {}
    prev = 1 if K.f_vector and K.f_vector[0] else 0
    for k in range(1, K.dim + 1):
        cols = K.boundary_columns(k)
        bound = K.f_vector[k - 1] - prev
        if coefficients == 0:
            r = rational_rank(cols, K.f_vector[k - 1], primes, threads=threads, bound=bound)
        elif coefficients == 2:
            r = rank_gf2(columns_to_bits(cols), bound=bound)
        else:
            r = rank_mod_p(cols, coefficients, bound=bound)
        ranks[k] = r
        prev = r
        logger.info(f"rank ∂_{k} over {'Q' if coefficients == 0 else f'GF({coefficients})'}: {r}")
    return ranks


def betti(K: SimComplex, coefficients: int = 0, primes: Sequence[int] = (), threads: int = 1) -> List[int]:
    """约化 Betti 数；截断复形只给出到 dim-1"""
    return _betti_from_ranks(K, boundary_ranks(K, coefficients, primes, threads))


def torsion2_count(
    K: SimComplex,
    degree: int,
    primes: Sequence[int],
    threads: int = 1,
    snf_max: int = 60,
    rational_ranks: Optional[Dict[int, int]] = None,
) -> int:
    """
    H_degree 中偶数阶循环直和项的个数

    小矩阵用 Smith 标准形；否则为 rank_Q ∂_{d+1} - rank_F2 ∂_{d+1}
    """
    k = degree + 1
    if k > K.dim:
        return 0
    cols = K.boundary_columns(k)
    rows = K.f_vector[k - 1]
    if rows <= snf_max and len(cols) <= snf_max:
        return sum(1 for x in smith_invariants(cols, rows, snf_max) if x % 2 == 0)
    if rational_ranks is not None and k in rational_ranks:
        r_q = rational_ranks[k]
    else:
        r_q = rational_rank(cols, rows, primes, threads=threads)
    r_2 = rank_gf2(columns_to_bits(cols))
    return r_q - r_2


def homology(
    K: SimComplex,
    primes: Sequence[int],
    threads: int = 1,
    mod_primes: Sequence[int] = (),
    torsion_degrees: Sequence[int] = (),
    snf_max: int = 60,
) -> HomologyReport:
    ranks = boundary_ranks(K, 0, primes, threads)
    report = HomologyReport(f_vector=K.f_vector, betti=_betti_from_ranks(K, ranks), ranks=ranks)
    for p in mod_primes:
        report.betti_mod[p] = betti(K, p)
    for d in torsion_degrees:
        report.torsion2[d] = torsion2_count(K, d, primes, threads, snf_max, rational_ranks=ranks)
    return report
