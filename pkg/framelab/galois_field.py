"""
有限域 GF(q^2) - 离散对数表实现的精确算术
元素编码: 0 表示零元, k>0 表示本原元的 k-1 次幂
"""
from functools import lru_cache
from typing import Dict, List, Optional

import numpy as np
from loguru import logger
from sympy import Poly, factorint, primefactors, symbols

from framelab.errors import FieldDivisionByZero, NotPrimePowerError, UnsupportedSizeError

FieldElem = int

MAX_Q = 16
# 穷举检查域公理的上限
EXHAUSTIVE_AXIOM_Q = 5

_X = symbols("x")


def _digits(code: int, p: int, length: int) -> List[int]:
    out = []
    for _ in range(length):
        out.append(code % p)
        code //= p
    return out


def _undigits(digits: List[int], p: int) -> int:
    code = 0
    for d in reversed(digits):
        code = code * p + d
    return code


def _lowest_irreducible(p: int, degree: int) -> List[int]:
    """
    字典序最小的首一不可约多项式

    Returns:
        系数列表（低次在前，长度 degree+1）
    """
    for low in range(p ** degree):
        coeffs = _digits(low, p, degree) + [1]
        if coeffs[0] == 0:
            continue
        if Poly(list(reversed(coeffs)), _X, modulus=p).is_irreducible:
            return coeffs
    raise NotPrimePowerError(f"no irreducible polynomial of degree {degree} over GF({p})")


def _poly_mulmod(a: List[int], b: List[int], modulus: List[int], p: int) -> List[int]:
    degree = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # 首一模多项式的长除法
    for top in range(len(prod) - 1, degree - 1, -1):
        c = prod[top]
        if c:
            shift = top - degree
            for k in range(degree + 1):
                prod[shift + k] = (prod[shift + k] - c * modulus[k]) % p
    return (prod + [0] * degree)[:degree]


def _poly_pow(a: List[int], e: int, modulus: List[int], p: int) -> List[int]:
    degree = len(modulus) - 1
    result = [1] + [0] * (degree - 1)
    base = a
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, modulus, p)
        base = _poly_mulmod(base, base, modulus, p)
        e >>= 1
    return result


class FieldTable:
    """GF(q^2) 的查表算术，构造后不可变"""

    def __init__(self, q: int):
        factors = factorint(q) if q >= 2 else {}
        if len(factors) != 1:
            raise NotPrimePowerError(f"q={q} is not a prime power")
        if q > MAX_Q:
            raise UnsupportedSizeError(f"q={q} exceeds the supported maximum {MAX_Q}")
        (p, e), = factors.items()
        self.q = q
        self.p = int(p)
        self.order = q * q
        self.degree = 2 * int(e)
        self.modulus = _lowest_irreducible(self.p, self.degree)
        self.group_order = self.order - 1

        one = [1] + [0] * (self.degree - 1)
        alpha = self._find_primitive(one)
        self.primitive_poly = _undigits(alpha, self.p)

        # 多项式编码 <-> 元素编码
        poly_of: List[int] = [0] * self.order
        code_of: Dict[int, int] = {0: 0}
        cur = one
        for k in range(self.group_order):
            poly_code = _undigits(cur, self.p)
            poly_of[k + 1] = poly_code
            code_of[poly_code] = k + 1
            cur = _poly_mulmod(cur, alpha, self.modulus, self.p)
        self._poly_of = poly_of
        self._code_of = code_of

        n = self.order
        N = self.group_order
        add = [[0] * n for _ in range(n)]
        for x in range(n):
            dx = _digits(poly_of[x], self.p, self.degree)
            for y in range(x, n):
                dy = _digits(poly_of[y], self.p, self.degree)
                s = code_of[_undigits([(a + b) % self.p for a, b in zip(dx, dy)], self.p)]
                add[x][y] = s
                add[y][x] = s
        self._add = add
        self._mul = [[0 if (x == 0 or y == 0) else (x - 1 + y - 1) % N + 1 for y in range(n)] for x in range(n)]
        self._tau = [0] + [((x - 1) * q) % N + 1 for x in range(1, n)]
        self._neg = [row.index(0) for row in add]
        self._inv = [0] + [(-(x - 1)) % N + 1 for x in range(1, n)]
        self._norm = [0] + [((x - 1) * (q + 1)) % N + 1 for x in range(1, n)]

        # 向量化运算用的 numpy 表
        self.add_table = np.array(add, dtype=np.int64)
        self.mul_table = np.array(self._mul, dtype=np.int64)
        self.tau_table = np.array(self._tau, dtype=np.int64)
        self.neg_table = np.array(self._neg, dtype=np.int64)
        self.norm_table = np.array(self._norm, dtype=np.int64)

        self.zero = 0
        self.one = 1
        self.minus_one = self._neg[1]
        self.fixed_field = [0] + [x for x in range(1, n) if (x - 1) % (q + 1) == 0]
        logger.debug(f"GF({q}^2) built: modulus={self.modulus}, primitive={alpha}")

    def _find_primitive(self, one: List[int]) -> List[int]:
        """编码最小的本原元"""
        N = self.order - 1
        exponents = [N // r for r in primefactors(N)]
        for code in range(1, self.order):
            cand = _digits(code, self.p, self.degree)
            if all(_poly_pow(cand, e, self.modulus, self.p) != one for e in exponents):
                return cand
        raise NotPrimePowerError(f"no primitive element found for q={self.q}")

    def __repr__(self) -> str:
        return f"FieldTable(q={self.q})"

    # 标量运算
    def add(self, x: FieldElem, y: FieldElem) -> FieldElem:
        return self._add[x][y]

    def sub(self, x: FieldElem, y: FieldElem) -> FieldElem:
        return self._add[x][self._neg[y]]

    def neg(self, x: FieldElem) -> FieldElem:
        return self._neg[x]

    def mul(self, x: FieldElem, y: FieldElem) -> FieldElem:
        return self._mul[x][y]

    def inv(self, x: FieldElem) -> FieldElem:
        if x == 0:
            raise FieldDivisionByZero("inverse of zero in GF(q^2)")
        return self._inv[x]

    def div(self, x: FieldElem, y: FieldElem) -> FieldElem:
        return self._mul[x][self.inv(y)]

    def power(self, x: FieldElem, e: int) -> FieldElem:
        if x == 0:
            if e < 0:
                raise FieldDivisionByZero("negative power of zero")
            return 1 if e == 0 else 0
        return ((x - 1) * e) % self.group_order + 1

    def frobenius(self, x: FieldElem) -> FieldElem:
        """τ(x) = x^q"""
        return self._tau[x]

    def norm(self, x: FieldElem) -> FieldElem:
        """x·τ(x)，落在不动域 GF(q) 中"""
        return self._norm[x]

    def trace(self, x: FieldElem) -> FieldElem:
        return self._add[x][self._tau[x]]

    def is_fixed(self, x: FieldElem) -> bool:
        return self._tau[x] == x

    def from_int(self, k: int) -> FieldElem:
        """素域中整数 k 对应的元素"""
        return self._code_of[k % self.p]

    def norm_preimages(self, c: FieldElem) -> List[FieldElem]:
        return [x for x in range(self.order) if self._norm[x] == c]

    def verify_axioms(self, sample_size: Optional[int] = None, seed: int = 0) -> bool:
        """
        检查域公理

        Args:
            sample_size: 抽样三元组数量；None 时 q<=5 穷举，否则抽样 20000 组
            seed: 抽样随机种子

        Returns:
            全部成立时为 True
        """
        n = self.order
        A, M = self.add_table, self.mul_table
        if sample_size is None and self.q <= EXHAUSTIVE_AXIOM_Q:
            grid = np.indices((n, n, n)).reshape(3, -1)
            x, y, z = grid[0], grid[1], grid[2]
        else:
            rng = np.random.default_rng(seed)
            size = sample_size or 20000
            x, y, z = rng.integers(0, n, size=(3, size))
        checks = [
            np.array_equal(A[A[x, y], z], A[x, A[y, z]]),
            np.array_equal(M[M[x, y], z], M[x, M[y, z]]),
            np.array_equal(M[x, A[y, z]], A[M[x, y], M[x, z]]),
            np.array_equal(A[x, y], A[y, x]),
            np.array_equal(M[x, y], M[y, x]),
            np.array_equal(A[x, 0], x),
            np.array_equal(M[x, 1], x),
            bool(np.all(A[np.arange(n), self.neg_table] == 0)),
            all(self._mul[u][self._inv[u]] == 1 for u in range(1, n)),
        ]
        return all(checks)


@lru_cache(maxsize=None)
def field_new(q: int) -> FieldTable:
    """构造（并缓存）GF(q^2)"""
    return FieldTable(q)
