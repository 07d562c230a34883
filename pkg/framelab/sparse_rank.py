"""
精确秩 - 稀疏模素数消元、GF(2) 位集消元、稠密模素数秩、Bareiss 无分数消元和 Smith 标准形
"""
import concurrent.futures
from typing import Dict, List, Optional, Sequence

import numpy as np
from loguru import logger
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from framelab.errors import InstanceTooLargeError, PrimeCollisionError

# 稠密 numpy 消元的素数，乘积不超过 int64
DENSE_PRIME = 2 ** 31 - 1
# Bareiss 升级的元素数上限（行数 x 列数）
BAREISS_MAX_ENTRIES = 250_000

SparseColumn = Dict[int, int]


def rank_mod_p(columns: Sequence[SparseColumn], p: int, bound: Optional[int] = None) -> int:
    """
    稀疏矩阵模 p 的秩，按列做最低主元消去

    Args:
        columns: 每列为 {行号: 系数}
        p: 素数
        bound: 已知的秩上界，达到后提前结束

    Returns:
        秩
    """
    pivots: Dict[int, SparseColumn] = {}
    rank = 0
    for col in columns:
        if bound is not None and rank >= bound:
            break
        work = {r: v % p for r, v in col.items() if v % p}
        while work:
            low = max(work)
            piv = pivots.get(low)
            if piv is None:
                inv = pow(work[low], -1, p)
                pivots[low] = {r: v * inv % p for r, v in work.items()}
                rank += 1
                break
            f = work[low]
            for r, v in piv.items():
                nv = (work.get(r, 0) - f * v) % p
                if nv:
                    work[r] = nv
                else:
                    work.pop(r, None)
    logger.debug(f"rank mod {p}: {rank} ({len(columns)} columns)")
    return rank


def rank_gf2(columns: Sequence[int], bound: Optional[int] = None) -> int:
    """GF(2) 上的秩，列以 Python 整数位集表示，以最高位为主元"""
    pivots: Dict[int, int] = {}
    for col in columns:
        if bound is not None and len(pivots) >= bound:
            break
        while col:
            high = col.bit_length() - 1
            piv = pivots.get(high)
            if piv is None:
                pivots[high] = col
                break
            col ^= piv
    return len(pivots)


def columns_to_bits(columns: Sequence[SparseColumn]) -> List[int]:
    out = []
    for col in columns:
        bits = 0
        for r, v in col.items():
            if v % 2:
                bits |= 1 << r
        out.append(bits)
    return out


def dense_rank_mod(matrix: np.ndarray, p: int = DENSE_PRIME) -> int:
    """稠密矩阵模 p 的秩（numpy 向量化行消元），要求 p < 2^31"""
    A = np.array(matrix, dtype=np.int64) % p
    if A.ndim != 2:
        raise ValueError("expected a 2-dimensional matrix")
    rows, cols = A.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.flatnonzero(A[rank:, c])
        if len(nz) == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            A[[rank, piv]] = A[[piv, rank]]
        inv = pow(int(A[rank, c]), -1, p)
        A[rank] = A[rank] * inv % p
        below = A[rank + 1:, c]
        hit = np.flatnonzero(below)
        if len(hit):
            idx = rank + 1 + hit
            A[idx] = (A[idx] - np.outer(A[idx, c], A[rank]) % p) % p
        rank += 1
    return rank


def bareiss_rank(matrix: Sequence[Sequence[int]]) -> int:
    """整数矩阵的精确秩（Bareiss 无分数消元）"""
    M = [list(map(int, row)) for row in matrix]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    rank = 0
    prev = 1
    for c in range(cols):
        if rank == rows:
            break
        piv = next((i for i in range(rank, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        pr = M[rank]
        for i in range(rank + 1, rows):
            row = M[i]
            a = row[c]
            for j in range(c + 1, cols):
                row[j] = (row[j] * pr[c] - a * pr[j]) // prev
            row[c] = 0
        prev = pr[c]
        rank += 1
    return rank


def columns_to_dense(columns: Sequence[SparseColumn], num_rows: int) -> List[List[int]]:
    dense = [[0] * len(columns) for _ in range(num_rows)]
    for j, col in enumerate(columns):
        for r, v in col.items():
            dense[r][j] = v
    return dense


def rational_rank(
    columns: Sequence[SparseColumn],
    num_rows: int,
    primes: Sequence[int],
    threads: int = 1,
    bound: Optional[int] = None,
) -> int:
    """
    有理数域上的秩：多个大素数分别求秩，一致时采纳

    不一致时若矩阵足够小则升级为 Bareiss 精确消元，否则抛出 PrimeCollisionError
    """
    if threads > 1 and len(primes) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=min(threads, len(primes))) as pool:
            futures = [pool.submit(rank_mod_p, columns, p, bound) for p in primes]
            ranks = [f.result() for f in futures]
    else:
        ranks = [rank_mod_p(columns, p, bound) for p in primes]
    if len(set(ranks)) == 1:
        return ranks[0]
    logger.warning(f"Modular ranks disagree: {dict(zip(primes, ranks))}")
    if num_rows * len(columns) <= BAREISS_MAX_ENTRIES:
        return bareiss_rank(columns_to_dense(columns, num_rows))
    raise PrimeCollisionError(f"modular ranks {ranks} disagree on a {num_rows}x{len(columns)} matrix")


def smith_invariants(columns: Sequence[SparseColumn], num_rows: int, snf_max: int) -> List[int]:
    """
    Smith 标准形的非零不变因子

    Args:
        columns: 稀疏列
        num_rows: 行数
        snf_max: 行数和列数的上限
    """
    if num_rows > snf_max or len(columns) > snf_max:
        raise InstanceTooLargeError(f"{num_rows}x{len(columns)} matrix exceeds the Smith normal form cap {snf_max}")
    if num_rows == 0 or not columns:
        return []
    snf = smith_normal_form(Matrix(columns_to_dense(columns, num_rows)), domain=ZZ)
    diag = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    return [x for x in diag if x]
