"""
Garland 界 - 链环上的归一化拉普拉斯谱隙、P_j / Q_n 界以及同调消失预测
所有比较均为精确有理数比较
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from loguru import logger

from framelab.errors import LinkDisconnectedError
from framelab.exact_counts import _exact_div
from framelab.orthogonality_graph import expected_connectivity


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


@dataclass
class GarlandVerdict:
    """单个度数 i 上 Garland 条件的判定"""
    n: int
    q: int
    i: int
    lambda_min: Optional[Fraction]
    threshold: Fraction
    passes: bool
    reason: str = ""

    @property
    def predicted_vanishing(self) -> List[int]:
        return [self.i] if self.passes else []

    def to_dict(self) -> Dict[str, object]:
        return {
            "n": str(self.n),
            "q": str(self.q),
            "i": str(self.i),
            "lambda_min": None if self.lambda_min is None else str(self.lambda_min),
            "threshold": str(self.threshold),
            "passes": self.passes,
            "reason": self.reason,
        }


@dataclass
class VanishingPrediction:
    """预测消失的约化同调度数，以及每条规则各自给出的度数"""
    n: int
    q: int
    degrees: List[int] = field(default_factory=list)
    rules: Dict[str, List[int]] = field(default_factory=dict)

    def add(self, rule: str, top: int):
        """规则断言 0..top 度消失（top < 0 时不产生度数）"""
        if top < 0:
            return
        self.rules[rule] = list(range(top + 1))
        self.degrees = sorted(set(self.degrees) | set(range(top + 1)))

    def to_dict(self) -> Dict[str, object]:
        return {
            "degrees": [str(d) for d in self.degrees],
            "rules": {k: [str(d) for d in v] for k, v in self.rules.items()},
        }


def lambda_min_link(n: int, q: int, i: int) -> Fraction:
    """
    i-1 维单形链环（维数 m = n-i 的框架复形）的 1-骨架上最小正归一化拉普拉斯特征值

    Args:
        n: 空间维数
        q: 域参数
        i: 同调度数，要求链环连通；q=2 时还要求 i <= n-4

    Returns:
        精确有理数
    """
    m = n - i
    if i < 0 or m < 2:
        raise ValueError(f"degree i={i} out of range for n={n}")
    if expected_connectivity(m, q)[0] != 1:
        raise LinkDisconnectedError(f"links of dimension {m} over GF({q}^2) are disconnected")
    if q != 2:
        return 1 - Fraction(q + 1, q ** (m - 1) - _sign(m - 1))
    if m < 4:
        raise ValueError(f"q = 2 needs i <= n - 4, got i={i}, n={n}")
    if m % 2 == 0:
        return 1 - Fraction(q + 1, q * (q ** (m - 1) + 1))
    return 1 - Fraction(q + 1, q ** (m - 1) - 1)


def garland_verdict(n: int, q: int, i: int) -> GarlandVerdict:
    """λ_min > i/(i+1) 时 Garland 方法给出 H̃_i = 0"""
    threshold = Fraction(i, i + 1)
    try:
        lam = lambda_min_link(n, q, i)
    except (LinkDisconnectedError, ValueError) as e:
        logger.debug(f"Garland not applicable at (n={n}, q={q}, i={i}): {e}")
        return GarlandVerdict(n, q, i, None, threshold, False, reason=str(e))
    passes = lam > threshold
    return GarlandVerdict(n, q, i, lam, threshold, passes, reason="" if passes else "spectral gap too small")


def q_bound(n: int, q: int, i: int) -> int:
    """
    Q_n(q, i)，取正值当且仅当 Garland 条件在度数 i 成立

    q=2 时按 n-i 的奇偶分两种形式，要求 0 <= i <= n-4
    """
    m = n - i
    if q != 2:
        return _exact_div(q ** (m - 1) - _sign(m - 1), q + 1) - i - 1
    if i < 0 or m < 4:
        raise ValueError(f"Q_n(2, i) needs 0 <= i <= n-4, got n={n}, i={i}")
    if m % 2 == 0:
        return _exact_div(q * (q ** (m - 1) + 1), q + 1) - i - 1
    return _exact_div(q ** (m - 1) - 1, q + 1) - i - 1


def q2_bound(n: int, i: int) -> int:
    return q_bound(n, 2, i)


def p_bound(j: int, q: int) -> int:
    """P_j(q)：P_j(q) > n 推出 (n-j)-连通"""
    if q != 2:
        if j < 3:
            raise ValueError(f"P_j(q) needs j >= 3, got {j}")
        return _exact_div(q ** (j - 1) - _sign(j - 1), q + 1) + j - 1
    if j < 4:
        raise ValueError(f"P_j(2) needs j >= 4, got {j}")
    if j % 2 == 0:
        return _exact_div(2 ** j - 1, 3) + j
    return _exact_div(2 ** (j - 1) - 1, 3) + j - 1


def is_monotone(n: int, q: int) -> bool:
    """
    Q_n(q, i) 关于 i 递减：q≠2 时严格递减；
    q=2 时 n-i 为偶数的一步严格递减，n-i 为奇数的一步取等
    """
    top = n - 4 if q == 2 else n - 3
    values = [q_bound(n, q, i) for i in range(0, top + 1)]
    steps = list(zip(range(top), values, values[1:]))
    if q != 2:
        return all(a > b for _, a, b in steps)
    return all(a > b if (n - i) % 2 == 0 else a == b for i, a, b in steps)


def vanishing_prediction(n: int, q: int) -> VanishingPrediction:
    """
    框架复形 F(V) 的约化有理同调消失度数，记录每条生效的规则
    """
    if n < 2:
        raise ValueError(f"vanishing prediction needs n >= 2, got {n}")
    pred = VanishingPrediction(n, q)
    if n < q + 1:
        pred.add("n<q+1", n - 3)
    if q >= 3:
        for j in range(3, n + 1):
            if p_bound(j, q) > n:
                pred.add(f"P_{j}(q)>n", n - j)
        if 4 <= n < q * q - q + 4:
            pred.add("4<=n<q^2-q+4", n - 4)
        if n in (4, 5, 6):
            if n <= q:
                pred.add("n in {4,5,6}, n<=q", n - 3)
            else:
                pred.add("n in {4,5,6}, q<n", n - 4)
        if n >= 7:
            pred.add("n>=7", n // 2)
    elif n >= 4:
        for j in range(4, n + 1):
            if p_bound(j, 2) <= n:
                continue
            if j % 2 == 0:
                pred.add(f"P_{j}(2)>n, j even", n - j)
            elif p_bound(j - 1, 2) == p_bound(j, 2):
                pred.add(f"P_{j}(2)=P_{j - 1}(2)>n, j odd", n - j + 1)
        if n >= 11 or n in (7, 8):
            pred.add("q=2, n>=11 or n in {7,8}", n // 2)
    logger.debug(f"Vanishing prediction (n={n}, q={q}): {pred.degrees} via {list(pred.rules)}")
    return pred


def poset_vanishing_prediction(n: int, q: int) -> Dict[str, VanishingPrediction]:
    """非退化子空间偏序集与正交分解偏序集（去掉顶）的消失预测，后者继承前者的连通度"""
    rules: List[Tuple[str, int]] = []
    if n < q + 1:
        rules.append(("n<q+1, Cohen-Macaulay", n - 3))
    elif n < 2 * (q + 1):
        rules.append(("q+1<=n<2(q+1)", n - 4))
    if q >= 3 and n >= 7:
        rules.append(("q>=3, n>=7", n // 2))
    if q == 2:
        if n in (5, 6):
            rules.append(("q=2, n in {5,6}", 1))
        elif 7 <= n <= 10:
            rules.append(("q=2, 7<=n<=10", n // 2 - 1))
        elif n >= 11:
            rules.append(("q=2, n>=11", n // 2))
    preds = {"nondeg": VanishingPrediction(n, q), "decomp": VanishingPrediction(n, q)}
    for pred in preds.values():
        for rule, top in rules:
            pred.add(rule, top)
    return preds


def garland_table(n: int, q: int) -> List[GarlandVerdict]:
    """度数 0..n-2 上的逐一判定"""
    return [garland_verdict(n, q, i) for i in range(0, max(n - 1, 0))]
