"""
偏序集拓扑 - 非退化子空间偏序集 S̊(V)、正交分解偏序集 D(V)、标架偏序集
提供序复形、Möbius 函数、分解映射及其纤维性质、区间结构检查
"""
from dataclasses import dataclass
from math import prod
from typing import Callable, Dict, FrozenSet, Hashable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np
from loguru import logger
from sympy.utilities.iterables import multiset_partitions

from framelab.clique_homology import SimComplex, betti, clique_complex, enumerate_cliques
from framelab.errors import DegenerateMemberError, InstanceTooLargeError, NotAChainError
from framelab.exact_counts import decomp_type_count, partition_types, subspace_count
from framelab.hermitian_space import HermSpace, Subspace, Vec
from framelab.orthogonality_graph import OrthGraph, build_graph

DEFAULT_MAX_POSET = 20_000

SubspaceKey = Tuple[Vec, ...]
DecompKey = Tuple[SubspaceKey, ...]


class FinPoset:
    """
    有限偏序集，元素按线性扩张排列（下集大小升序）

    leq[i, j] 为 True 当且仅当 元素 i <= 元素 j
    """

    def __init__(self, elements: Sequence[Hashable], leq: np.ndarray):
        leq = np.asarray(leq, dtype=bool)
        if leq.shape != (len(elements), len(elements)):
            raise ValueError(f"relation of shape {leq.shape} for {len(elements)} elements")
        order = sorted(range(len(elements)), key=lambda i: (int(leq[:, i].sum()), i))
        self.elements: List[Hashable] = [elements[i] for i in order]
        self.leq: np.ndarray = leq[np.ix_(order, order)]
        self.index = {key: i for i, key in enumerate(self.elements)}
        # 构造时使用的子空间缓存（分解偏序集）
        self.cache: Optional["_SubspaceCache"] = None
        less = self.less
        if np.any(less & less.T):
            raise ValueError("relation is not antisymmetric")

    @classmethod
    def from_relation(cls, elements: Sequence[Hashable], le: Callable[[Hashable, Hashable], bool]) -> "FinPoset":
        n = len(elements)
        leq = np.zeros((n, n), dtype=bool)
        for i, a in enumerate(elements):
            for j, b in enumerate(elements):
                leq[i, j] = i == j or le(a, b)
        return cls(elements, leq)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"FinPoset(size={len(self)})"

    @property
    def less(self) -> np.ndarray:
        return self.leq & ~np.eye(len(self), dtype=bool)

    def down_set(self, i: int, strict: bool = False) -> List[int]:
        col = self.less[:, i] if strict else self.leq[:, i]
        return [int(j) for j in np.flatnonzero(col)]

    def up_set(self, i: int, strict: bool = False) -> List[int]:
        row = self.less[i] if strict else self.leq[i]
        return [int(j) for j in np.flatnonzero(row)]

    def subposet(self, indices: Sequence[int]) -> "FinPoset":
        idx = list(indices)
        return FinPoset([self.elements[i] for i in idx], self.leq[np.ix_(idx, idx)])

    def hasse(self) -> nx.DiGraph:
        """覆盖关系组成的有向图（边由小指向大）"""
        G = nx.DiGraph()
        G.add_nodes_from(range(len(self)))
        rows, cols = np.nonzero(self.less)
        G.add_edges_from(zip(rows.tolist(), cols.tolist()))
        return nx.transitive_reduction(G)

    def covers(self) -> List[Tuple[int, int]]:
        return sorted(self.hasse().edges())

    def order_complex(self, max_dim: Optional[int] = None, max_simplices: int = 2_000_000) -> SimComplex:
        """链构成的单纯复形"""
        less = self.less
        bits = [sum(1 << int(j) for j in np.flatnonzero(less[i])) for i in range(len(self))]
        layers, truncated = enumerate_cliques(bits, max_dim, max_simplices)
        if not len(self):
            layers = []
        return SimComplex(layers, truncated=truncated)

    def mobius_from_bottom(self) -> List[int]:
        """添加形式最小元 0̂ 后的 μ(0̂, x)"""
        mu: List[int] = []
        less = self.less
        for x in range(len(self)):
            mu.append(-1 - sum(mu[y] for y in np.flatnonzero(less[:, x])))
        return mu

    def components(self) -> int:
        """比较图的连通分支数"""
        G = nx.Graph()
        G.add_nodes_from(range(len(self)))
        rows, cols = np.nonzero(self.less)
        G.add_edges_from(zip(rows.tolist(), cols.tolist()))
        return nx.number_connected_components(G)

    def to_text(self) -> str:
        out = [f"element {i} {_format_key(key)}" for i, key in enumerate(self.elements)]
        out.extend(f"cover {a} {b}" for a, b in self.covers())
        return "\n".join(out) + "\n"


def _format_key(key: Hashable) -> str:
    return str(key).replace(" ", "")


def reduced_euler(P: FinPoset) -> int:
    """χ̃(Δ(P)) = μ_{P̂}(0̂, 1̂) = -(1 + Σ μ(0̂, x))"""
    return -(1 + sum(P.mobius_from_bottom()))


def _check_size(expected: int, max_poset: int) -> None:
    if expected > max_poset:
        raise InstanceTooLargeError(f"poset with {expected} elements exceeds the cap {max_poset}")


class _SubspaceCache:
    """子空间 RREF 键 -> 向量集合"""

    def __init__(self, sp: HermSpace):
        self.sp = sp
        self._vectors: Dict[SubspaceKey, FrozenSet[Vec]] = {}

    def key_of(self, rows: Sequence[Vec]) -> SubspaceKey:
        return self.sp.span(rows).key

    def vectors(self, key: SubspaceKey) -> FrozenSet[Vec]:
        vs = self._vectors.get(key)
        if vs is None:
            vs = frozenset(self.sp.vectors_of(Subspace(key, self.sp.n)))
            self._vectors[key] = vs
        return vs

    def contains(self, small: SubspaceKey, big: SubspaceKey) -> bool:
        big_vs = self.vectors(big)
        return all(v in big_vs for v in small)


def _frames(g: OrthGraph, sizes: Sequence[int]) -> Dict[int, List[Tuple[int, ...]]]:
    K = clique_complex(g, max_dim=max(sizes) - 1)
    return {m: (K.layers[m - 1] if m - 1 <= K.dim else []) for m in sizes}


def build_nondeg_poset(n: int, q: int, max_poset: int = DEFAULT_MAX_POSET) -> FinPoset:
    """S̊(V)：真非零非退化子空间，按包含排序"""
    _check_size(sum(subspace_count(n, m, q) for m in range(1, n)), max_poset)
    g = build_graph(n, q)
    cache = _SubspaceCache(g.space)
    keys: List[SubspaceKey] = []
    seen: Set[SubspaceKey] = set()
    if n > 1:
        for m, frames in _frames(g, range(1, n)).items():
            for frame in frames:
                key = cache.key_of([g.vertices[v].rep for v in frame])
                if key not in seen:
                    seen.add(key)
                    keys.append(key)
    P = FinPoset.from_relation(keys, lambda a, b: len(a) < len(b) and cache.contains(a, b))
    logger.info(f"Built non-degenerate subspace poset at (n={n}, q={q}): {len(P)} elements")
    return P


def _decomp_leq(cache: _SubspaceCache) -> Callable[[DecompKey, DecompKey], bool]:
    """π <= σ 当且仅当 π 的每个块含于 σ 的某个块"""
    def le(pi: DecompKey, sigma: DecompKey) -> bool:
        if len(pi) < len(sigma):
            return False
        return all(any(cache.contains(block, big) for big in sigma) for block in pi)
    return le


def build_decomp_poset(
    n: int, q: int, include_top: bool = False, max_poset: int = DEFAULT_MAX_POSET
) -> FinPoset:
    """
    D(V)：正交分解按加细排序（更细者更小）

    Args:
        include_top: 是否包含平凡分解 {V}；默认给出 D̊(V)
    """
    types = [T for T in partition_types(n) if include_top or len(T) > 1]
    _check_size(sum(decomp_type_count(n, q, T) for T in types), max_poset)
    g = build_graph(n, q) if n > 1 else None
    sp = g.space if g is not None else HermSpace.canonical(n, q)
    cache = _SubspaceCache(sp)
    full = _frames(g, [n])[n] if g is not None else [(0,)]
    reps = [line.rep for line in g.vertices] if g is not None else [tuple([1])]
    keys: List[DecompKey] = []
    seen: Set[DecompKey] = set()
    for frame in full:
        for parts in multiset_partitions(list(frame)):
            if len(parts) == 1 and not include_top:
                continue
            key = tuple(sorted(cache.key_of([reps[v] for v in block]) for block in parts))
            if key not in seen:
                seen.add(key)
                keys.append(key)
    P = FinPoset.from_relation(keys, _decomp_leq(cache))
    P.cache = cache
    logger.info(f"Built decomposition poset at (n={n}, q={q}): {len(P)} elements")
    return P


def build_frame_poset(g: OrthGraph, excluded_sizes: Sequence[int] = ()) -> FinPoset:
    """非空部分标架按包含排序，可去掉若干大小层"""
    K = clique_complex(g)
    simplices = [s for layer in K.layers for s in layer if len(s) not in excluded_sizes]
    masks = {s: sum(1 << v for v in s) for s in simplices}
    return FinPoset.from_relation(
        simplices, lambda a, b: len(a) < len(b) and masks[a] & ~masks[b] == 0
    )


def build_hat_poset(g: OrthGraph) -> FinPoset:
    """F̂(V)：去掉大小为 n-1 的标架"""
    return build_frame_poset(g, excluded_sizes=(g.n - 1,))


def build_doublehat_poset(g: OrthGraph) -> FinPoset:
    """q=2 时去掉大小为 n-1 与 n-2 的标架"""
    if g.q != 2:
        raise ValueError("the double-hat poset is defined for q = 2 only")
    return build_frame_poset(g, excluded_sizes=(g.n - 1, g.n - 2))


def decomposition_map(sp: HermSpace, chain: Sequence[Subspace]) -> DecompKey:
    """
    链 S_0 < ... < S_r 映到分解 S_0 ⊕ (S_1 ∩ S_0^⊥) ⊕ ... ⊕ S_r^⊥

    Raises:
        DegenerateMemberError: 链中有退化子空间
        NotAChainError: 不是严格递增链
    """
    if not chain:
        raise NotAChainError("empty chain")
    for S in chain:
        if S.dim == 0 or not sp.is_nondegenerate(S):
            raise DegenerateMemberError(f"subspace {S.basis} is zero or degenerate")
    for a, b in zip(chain, chain[1:]):
        if not (a.dim < b.dim and sp.intersect(a, b).dim == a.dim):
            raise NotAChainError(f"{a.basis} is not properly contained in {b.basis}")
    blocks = [chain[0]]
    for prev, cur in zip(chain, chain[1:]):
        blocks.append(sp.intersect(cur, sp.orth_complement(prev)))
    top = sp.orth_complement(chain[-1])
    if top.dim:
        blocks.append(top)
    return tuple(sorted(b.key for b in blocks))


@dataclass
class FiberCheck:
    decompositions: int
    chains: int
    failures: int

    @property
    def ok(self) -> bool:
        return self.failures == 0


def fiber_check(n: int, q: int, max_poset: int = DEFAULT_MAX_POSET) -> FiberCheck:
    """
    对每个 π ∈ D̊(V)，验证 {链 c : g(c) >= π} 恰为 S_π 的链，
    其中 S_π 为 π 的块之和构成的真子空间
    """
    S = build_nondeg_poset(n, q, max_poset)
    D = build_decomp_poset(n, q, max_poset=max_poset)
    sp = HermSpace.canonical(n, q)
    cache = D.cache
    le = _decomp_leq(cache)
    chains = [c for layer in S.order_complex().layers for c in layer]
    images = [decomposition_map(sp, [Subspace(S.elements[i], n) for i in c]) for c in chains]
    failures = 0
    for pi in D.elements:
        sums = set()
        for mask in range(1, (1 << len(pi)) - 1):
            rows = [v for b, block in enumerate(pi) if mask >> b & 1 for v in block]
            sums.add(cache.key_of(rows))
        for c, image in zip(chains, images):
            in_fiber = le(pi, image)
            in_s_pi = all(S.elements[i] in sums for i in c)
            if in_fiber != in_s_pi:
                failures += 1
    if failures:
        logger.error(f"Fiber property failed {failures} times at (n={n}, q={q})")
    return FiberCheck(len(D), len(chains), failures)


def partition_lattice(r: int) -> FinPoset:
    """Π_r：{0..r-1} 的集合划分按加细排序"""
    parts = [tuple(sorted(tuple(b) for b in p)) for p in multiset_partitions(list(range(r)))]

    def le(a, b):
        return all(any(set(x) <= set(y) for y in b) for x in a)
    return FinPoset.from_relation(parts, le)


def _total_decompositions(dim: int, q: int) -> int:
    return sum(decomp_type_count(dim, q, T) for T in partition_types(dim))


def interval_checks(n: int, q: int, max_poset: int = DEFAULT_MAX_POSET) -> Dict[str, bool]:
    """
    上区间 D_{>=π} 与划分格 Π_r 同构；下区间 D_{<=π} 经限制映射
    同构于各块分解偏序集之积
    """
    D = build_decomp_poset(n, q, include_top=True, max_poset=max_poset)
    cache = D.cache
    lattices: Dict[int, nx.DiGraph] = {}
    upper_ok = True
    lower_ok = True
    for i, pi in enumerate(D.elements):
        r = len(pi)
        if r not in lattices:
            lattices[r] = partition_lattice(r).hasse()
        up = D.subposet(D.up_set(i))
        if not nx.is_isomorphic(up.hasse(), lattices[r]):
            upper_ok = False
            logger.error(f"Upper interval above {pi} is not a partition lattice")

        down = D.down_set(i)

        def restrict(x: DecompKey) -> Tuple[Tuple[SubspaceKey, ...], ...]:
            return tuple(tuple(sorted(b for b in x if cache.contains(b, block))) for block in pi)

        images = [restrict(D.elements[j]) for j in down]
        expected = prod(_total_decompositions(len(block), q) for block in pi)
        if len(set(images)) != len(images) or len(images) != expected:
            lower_ok = False
            logger.error(f"Lower interval below {pi} has {len(images)} elements, expected {expected}")
            continue
        for a, ja in enumerate(down):
            for b, jb in enumerate(down):
                factor_le = all(
                    all(any(cache.contains(x, y) for y in yb) for x in xa)
                    for xa, yb in zip(images[a], images[b])
                )
                if factor_le != bool(D.leq[ja, jb]):
                    lower_ok = False
    return {"upper": upper_ok, "lower": lower_ok}


def poset_betti(P: FinPoset, primes: Sequence[int], threads: int = 1) -> List[int]:
    """序复形的约化有理 Betti 数"""
    return betti(P.order_complex(), 0, primes, threads)
