"""
谱 - 邻接矩阵的极小多项式、特征值、重数和归一化拉普拉斯特征值的精确验证
全部计算为整数或有理数，不使用浮点特征值求解
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np
from loguru import logger

from framelab.errors import InstanceTooLargeError
from framelab.exact_counts import d_count, d_rad
from framelab.orthogonality_graph import OrthGraph
from framelab.sparse_rank import bareiss_rank, dense_rank_mod


@dataclass
class SpectrumReport:
    """谱检查结果"""
    n: int
    q: int
    eigenvalues: List[int]
    multiplicities: List[int]
    minpoly_coeffs: Tuple[int, ...]
    annihilation_ok: bool
    rank_multiplicities: Optional[Dict[int, int]] = None
    srg: Optional[Tuple[int, int, int, int]] = None
    extra: Dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        return {
            "eigenvalues": [str(x) for x in self.eigenvalues],
            "multiplicities": [str(x) for x in self.multiplicities],
            "minpoly_coeffs": [str(x) for x in self.minpoly_coeffs],
            "annihilation_ok": self.annihilation_ok,
            "rank_multiplicities": (
                None if self.rank_multiplicities is None
                else {str(k): str(v) for k, v in self.rank_multiplicities.items()}
            ),
            "srg": None if self.srg is None else [str(x) for x in self.srg],
        }


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def _qpow(q: int, e: int) -> Fraction:
    return Fraction(q) ** e


def _as_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise ValueError(f"expected an integer, got {x}")
    return int(x)


def minpoly_coeffs(n: int, q: int) -> Tuple[int, int, int, int]:
    """
    m(n,q) = X^4 + c3 X^3 + c2 X^2 + c1 X + c0 的系数 (c0, c1, c2, c3)，要求 n >= 3
    """
    if n < 3:
        raise ValueError(f"minimal polynomial coefficients need n >= 3, got {n}")
    d = d_count(n, q)
    s = _sign(n)
    c0 = -d * _qpow(q, 3 * n - 7) * s
    c1 = d * _qpow(q, 2 * n - 4) + _qpow(q, 3 * n - 7) * s
    c2 = d * _qpow(q, n - 3) * s - _qpow(q, 2 * n - 4)
    c3 = -d - _qpow(q, n - 3) * s
    return tuple(_as_int(c) for c in (c0, c1, c2, c3))


def eigen_values_all(n: int, q: int) -> Tuple[int, int, int, int]:
    """(μ1, μ2, μ3, μ4)"""
    d = d_count(n, q)
    return (d, _as_int(_qpow(q, n - 2)), _as_int(_sign(n) * _qpow(q, n - 3)), _as_int(-_qpow(q, n - 2)))


def _alphas(n: int, q: int) -> Tuple[int, int, int]:
    dn, dn1, dp1 = d_count(n, q), d_count(n - 1, q), d_count(n + 1, q)
    s = _sign(n)
    base = Fraction(dn * dp1) / (2 * _qpow(q, 2 * n - 3))
    a2 = base * Fraction(q * q - q - 1 - s, q - 1)
    a3 = Fraction(dn * dn1) / (_qpow(q, 2 * n - 8) * (q - 1))
    a4 = base * Fraction(q * q - q - 1 + s, q - 1)
    return _as_int(a2), _as_int(a3), _as_int(a4)


def spectrum_formula(n: int, q: int) -> Dict[int, int]:
    """
    特征值 -> 重数（只含正重数），按 μ1..μ4 顺序

    n=2 时图是完美匹配，特征值 ±1 各有 q(q-1)/2 重
    """
    if n < 2:
        raise ValueError(f"spectrum needs n >= 2, got {n}")
    if n == 2:
        half = q * (q - 1) // 2
        return {1: half, -1: half}
    mu1, mu2, mu3, mu4 = eigen_values_all(n, q)
    if q == 2 and n == 3:
        return {mu1: 4, mu3: 8}
    a2, a3, a4 = _alphas(n, q)
    if q != 2:
        rows = [(mu1, 1), (mu2, a2), (mu3, a3), (mu4, a4)]
    elif n % 2 == 0:
        rows = [(mu1, 1), (mu2, 0), (mu3, a3), (mu4, a2 + a4)]
    else:
        rows = [(mu1, 1), (mu2, a2 + a4), (mu3, a3), (mu4, 0)]
    out: Dict[int, int] = {}
    for mu, mult in rows:
        if mult:
            out[mu] = out.get(mu, 0) + mult
    return out


def eigen_list(n: int, q: int) -> List[int]:
    return list(spectrum_formula(n, q).keys())


def multiplicities_formula(n: int, q: int) -> List[int]:
    return list(spectrum_formula(n, q).values())


def trace_identities(n: int, q: int) -> Dict[str, bool]:
    """重数之和、迹、A^2 的迹"""
    spec = spectrum_formula(n, q)
    vertices, degree = d_count(n + 1, q), d_count(n, q)
    return {
        "count": sum(spec.values()) == vertices,
        "trace": sum(mu * m for mu, m in spec.items()) == 0,
        "trace_square": sum(mu * mu * m for mu, m in spec.items()) == vertices * degree,
    }


def annihilates(g: OrthGraph, coeffs: Sequence[int]) -> bool:
    """Σ coeffs[i] A^i 是否为零矩阵（coeffs 低次在前）"""
    k = len(coeffs) - 1
    bound = sum(abs(c) * max(g.degree, 1) ** i for i, c in enumerate(coeffs)) + 1
    powers = g.matrix_powers(k, entry_bound=bound)
    total = sum(c * powers[i] for i, c in enumerate(coeffs) if c)
    return not np.any(total)


def verify_annihilation(g: OrthGraph) -> bool:
    """m(n,q)(A) = 0；n=2 时检查 A^2 - I = 0"""
    if g.n == 2:
        return annihilates(g, [-1, 0, 1])
    c0, c1, c2, c3 = minpoly_coeffs(g.n, g.q)
    ok = annihilates(g, [c0, c1, c2, c3, 1])
    logger.info(f"Annihilation check at (n={g.n}, q={g.q}): {ok}")
    return ok


def candidate_eigenvalues(n: int, q: int) -> List[int]:
    """极小多项式的全部根（去重）"""
    if n == 2:
        return [1, -1]
    return list(dict.fromkeys(eigen_values_all(n, q)))


def multiplicities_rank(g: OrthGraph, max_vertices: int = 700) -> Dict[int, int]:
    """
    重数 = N - rank(A - μI)，逐个候选特征值计算

    先用模素数的稠密秩；模 p 零化度不小于有理零化度，候选特征值取遍极小多项式的根，
    故零化度之和为 N 时二者一致，否则退回 Bareiss 精确消元
    """
    N = g.num_vertices
    if N > max_vertices:
        raise InstanceTooLargeError(f"{N} vertices exceed the rank oracle cap {max_vertices}")
    A = g.adjacency.astype(np.int64)
    eye = np.eye(N, dtype=np.int64)
    candidates = candidate_eigenvalues(g.n, g.q)
    nullity = {mu: N - dense_rank_mod(A - mu * eye) for mu in candidates}
    if sum(nullity.values()) != N:
        logger.warning(f"Modular nullities sum to {sum(nullity.values())} != {N}, using exact elimination")
        nullity = {mu: N - bareiss_rank((A - mu * eye).tolist()) for mu in candidates}
    return {mu: m for mu, m in nullity.items() if m}


def laplacian_spectrum(n: int, q: int) -> List[Fraction]:
    """归一化拉普拉斯特征值 1 - μ/d_n（去重，升序）"""
    d = d_count(n, q)
    return sorted({1 - Fraction(mu, d) for mu in eigen_list(n, q)})


def smallest_positive_laplacian(n: int, q: int) -> Fraction:
    return min(x for x in laplacian_spectrum(n, q) if x > 0)


def common_neighbor_census(g: OrthGraph) -> Tuple[Set[int], Set[int]]:
    """相邻对与不相邻（不同）顶点对的公共邻居数集合"""
    A = g.adjacency.astype(np.int64)
    A2 = A @ A
    off = ~np.eye(g.num_vertices, dtype=bool)
    adjacent = set(int(x) for x in np.unique(A2[g.adjacency]))
    non_adjacent = set(int(x) for x in np.unique(A2[off & ~g.adjacency]))
    return adjacent, non_adjacent


def srg_parameters(g: OrthGraph) -> Optional[Tuple[int, int, int, int]]:
    """强正则时返回 (v, k, λ, μ)，否则 None"""
    adjacent, non_adjacent = common_neighbor_census(g)
    if len(adjacent) != 1 or len(non_adjacent) != 1:
        return None
    return (g.num_vertices, g.degree, adjacent.pop(), non_adjacent.pop())


def expected_srg(n: int, q: int) -> Optional[Tuple[int, int, int, int]]:
    """q=2, n>=4 时的强正则参数"""
    if q != 2 or n < 4:
        return None
    return (d_count(n + 1, q), d_count(n, q), d_count(n - 1, q), d_rad(n - 1, q, 1))


def spectrum_report(g: OrthGraph, max_rank_vertices: int = 700) -> SpectrumReport:
    spec = spectrum_formula(g.n, g.q)
    coeffs = minpoly_coeffs(g.n, g.q) + (1,) if g.n >= 3 else (-1, 0, 1)
    report = SpectrumReport(
        n=g.n,
        q=g.q,
        eigenvalues=list(spec.keys()),
        multiplicities=list(spec.values()),
        minpoly_coeffs=coeffs,
        annihilation_ok=verify_annihilation(g),
    )
    if g.num_vertices <= max_rank_vertices:
        report.rank_multiplicities = multiplicities_rank(g, max_rank_vertices)
    report.srg = srg_parameters(g)
    report.extra.update(trace_identities(g.n, g.q))
    return report
