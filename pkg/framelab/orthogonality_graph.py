"""
正交图 G(V) - 顶点为非退化直线，正交即相邻
负责建图、按位置类统计长度 <= 4 的行走数、闭式行走表以及连通性检查
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from loguru import logger

from framelab.errors import ClassNotConstantError, InstanceTooLargeError, UndefinedClassError
from framelab.exact_counts import d_count, d_rad, iso_count
from framelab.hermitian_space import POSITIONS, HermSpace, Line, Position

MAX_WALK_LENGTH = 4
# 超过该值的矩阵幂改用 Python 大整数
INT64_SAFE = 2 ** 62


@dataclass
class WalkTable:
    """长度为 k 的行走数，按位置类给出（类为空时为 None）"""
    k: int
    values: Dict[Position, Optional[int]]

    def to_dict(self) -> Dict[str, Optional[str]]:
        return {p.value: (None if v is None else str(v)) for p, v in self.values.items()}


class OrthGraph:
    """正交图，顶点按规范代表元字典序排列"""

    def __init__(self, space: HermSpace, vertices: List[Line]):
        self.space = space
        self.vertices = vertices
        self.index = {line.rep: i for i, line in enumerate(vertices)}
        psi = space.pair_form_matrix(vertices, vertices)
        adj = psi == 0
        np.fill_diagonal(adj, False)
        self.adjacency: np.ndarray = adj
        degrees = adj.sum(axis=1)
        if len(degrees) and not np.all(degrees == degrees[0]):
            logger.warning(f"Orthogonality graph of {space!r} is not regular")
        self.degree = int(degrees[0]) if len(degrees) else 0

    @classmethod
    def from_space(cls, space: HermSpace, max_vertices: Optional[int] = None) -> "OrthGraph":
        """任意（可能退化的）Gram 矩阵上的正交图"""
        expected = d_rad(space.n + 1, space.field.q, space.rad_dim)
        if max_vertices is not None and expected > max_vertices:
            raise InstanceTooLargeError(f"{expected} vertices exceed the cap {max_vertices}")
        graph = cls(space, space.enum_lines())
        logger.info(f"Built orthogonality graph: {graph.num_vertices} vertices, degree {graph.degree}")
        return graph

    def __repr__(self) -> str:
        return f"OrthGraph(n={self.n}, q={self.q}, vertices={self.num_vertices}, degree={self.degree})"

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def q(self) -> int:
        return self.space.field.q

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return int(self.adjacency.sum()) // 2

    @cached_property
    def neighbor_bits(self) -> List[int]:
        """每个顶点的邻居位集（第 j 位表示与顶点 j 相邻）"""
        return [sum(1 << int(j) for j in np.flatnonzero(row)) for row in self.adjacency]

    @cached_property
    def positions(self) -> np.ndarray:
        return self.space.position_matrix(self.vertices)

    def edges(self) -> List[Tuple[int, int]]:
        rows, cols = np.nonzero(np.triu(self.adjacency, k=1))
        return [(int(i), int(j)) for i, j in zip(rows, cols)]

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.num_vertices))
        G.add_edges_from(self.edges())
        return G

    def to_edge_list(self) -> str:
        lines = [f"# n={self.n} q={self.q} vertices={self.num_vertices} degree={self.degree}"]
        lines.extend(f"{i} {j}" for i, j in self.edges())
        return "\n".join(lines) + "\n"

    def matrix_powers(self, kmax: int, entry_bound: Optional[int] = None) -> List[np.ndarray]:
        """
        A^0..A^kmax 的精确值

        Args:
            kmax: 最高次数
            entry_bound: 后续运算中元素绝对值的上界，默认 degree^kmax

        Returns:
            矩阵列表；可能溢出 int64 时使用 object 数组（Python 大整数）
        """
        bound = entry_bound if entry_bound is not None else max(self.degree, 1) ** max(kmax, 1)
        safe = bound < INT64_SAFE
        dtype = np.int64 if safe else object
        A = self.adjacency.astype(np.int64).astype(dtype)
        powers = [np.eye(self.num_vertices, dtype=np.int64).astype(dtype)]
        for _ in range(kmax):
            powers.append(powers[-1] @ A)
        return powers


def build_graph(n: int, q: int, max_vertices: Optional[int] = None) -> OrthGraph:
    """标准型下的 G(V)"""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return OrthGraph.from_space(HermSpace.canonical(n, q), max_vertices=max_vertices)


def walks_table_from_power(g: OrthGraph, power: np.ndarray, k: int) -> WalkTable:
    """按位置类读出 A^k 的取值，类内不恒定时报错"""
    values: Dict[Position, Optional[int]] = {}
    for code, pos in enumerate(POSITIONS):
        entries = power[g.positions == code]
        if len(entries) == 0:
            values[pos] = None
            continue
        distinct = set(int(x) for x in np.unique(entries))
        if len(distinct) != 1:
            raise ClassNotConstantError(f"walks of length {k} in class {pos.value} take values {sorted(distinct)}")
        values[pos] = distinct.pop()
    return WalkTable(k, values)


def walks_matrix(g: OrthGraph, k: int) -> WalkTable:
    """由邻接矩阵幂得到的行走表"""
    if k < 0 or k > MAX_WALK_LENGTH:
        raise ValueError(f"walk length must be in 0..{MAX_WALK_LENGTH}, got {k}")
    return walks_table_from_power(g, g.matrix_powers(k)[k], k)


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def eta_formula(n: int, q: int, cls: Position) -> Tuple[int, int, int]:
    """(η1, η2, η3) 的闭式，依赖于 (S,W) 的位置类"""
    d = lambda k: d_count(k, q)  # noqa: E731
    if cls == Position.EQ:
        return (d(n), 0, 0)
    if cls == Position.PERP:
        i2 = iso_count(n - 2, q)
        return (d(n - 1), d(n) - d(n - 1) - i2 - 1, i2)
    if cls == Position.ND:
        return (d(n - 1), d(n) - d(n - 1) * (q + 2), d(n - 1) * (q + 1))
    return (d_rad(n - 1, q, 1), q ** (2 * n - 4) - 2 * q ** (2 * n - 5), q ** (2 * n - 5))


def _l3_raw(n: int, q: int, cls: Position) -> int:
    d = lambda k: d_count(k, q)  # noqa: E731
    base = d(n) * d(n - 1)
    if cls == Position.EQ:
        return base
    tail = q ** (3 * n - 8) * _sign(n)
    if cls == Position.D:
        return base + tail
    if cls == Position.ND:
        return base + tail - q ** (2 * n - 6)
    return base + tail - q ** (2 * n - 6) + q ** (2 * n - 4)


def walks_formula(n: int, q: int, k: int, cls: Position, strict: bool = False) -> int:
    """
    长度 k 的行走数闭式

    Args:
        n: 维数（k >= 3 时要求 n >= 3）
        q: 域参数
        k: 1..4
        cls: 位置类
        strict: q=2 时 ND 类是否报错（默认按约定返回 0）
    """
    if cls == Position.ND and q == 2:
        if strict:
            raise UndefinedClassError("class ND is empty when q = 2")
        return 0
    if k == 1:
        return 1 if cls == Position.PERP else 0
    if k == 2:
        if cls == Position.EQ:
            return d_count(n, q)
        if cls == Position.D:
            return d_rad(n - 1, q, 1) if n >= 3 else 0
        return d_count(n - 1, q)
    if n < 3:
        raise ValueError(f"closed forms for walks of length {k} need n >= 3")
    if k == 3:
        return _l3_raw(n, q, cls)
    if k == 4:
        eta1, eta2, eta3 = eta_formula(n, q, cls)
        value = eta1 * _l3_raw(n, q, Position.PERP) + eta2 * _l3_raw(n, q, Position.ND) + eta3 * _l3_raw(n, q, Position.D)
        if cls == Position.PERP:
            value += _l3_raw(n, q, Position.EQ)
        return value
    raise ValueError(f"walk length must be in 1..{MAX_WALK_LENGTH}, got {k}")


def components(g: OrthGraph) -> int:
    return nx.number_connected_components(g.to_networkx())


def diameter(g: OrthGraph) -> List[int]:
    """每个连通分支的直径（按最小顶点排序）"""
    G = g.to_networkx()
    comps = sorted(nx.connected_components(G), key=min)
    return [nx.diameter(G.subgraph(c)) for c in comps]


def expected_connectivity(n: int, q: int) -> Tuple[int, int]:
    """
    连通性定理给出的 (分支数, 直径)；不连通时直径指每个分支的直径
    """
    if n == 1:
        return (1, 0)
    if n == 2:
        return (1, 1) if q == 2 else (q * (q - 1) // 2, 1)
    if n == 3:
        return (4, 1) if q == 2 else (1, 3)
    return (1, 2)


def l2_spot_check(g: OrthGraph, pairs: Sequence[Tuple[int, int]]) -> bool:
    """(A^2)[S][W] 等于 (S+W)^⊥ 中非退化直线的个数"""
    sp = g.space
    A2 = g.matrix_powers(2)[2]
    for i, j in pairs:
        s, w = g.vertices[i], g.vertices[j]
        comp = sp.orth_complement(sp.span([s.rep, w.rep]))
        if int(A2[i, j]) != len(sp.lines_in(comp)):
            logger.error(f"l2 mismatch at pair ({i}, {j})")
            return False
    return True
