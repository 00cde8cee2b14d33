"""Pure numpy implementations of the hot kernels.

Same signatures and results as the compiled ``_kernels`` module; used when
the extension is not built or ``LEVELONE_PURE=1`` is set.
"""
from __future__ import annotations

from itertools import combinations, islice

import numpy as np

_CHUNK = 1 << 15


def wht(values) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform: out[S] = sum_i v[i] (-1)^{|i & S|}."""
    out = np.array(values, dtype=np.float64, copy=True)
    size = out.shape[0]
    if size & (size - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < size:
        view = out.reshape(-1, 2, h)
        lo = view[:, 0, :].copy()
        hi = view[:, 1, :]
        view[:, 0, :] += hi
        view[:, 1, :] = lo - hi
        h *= 2
    return out


def _point_vectors(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return (1 - 2 * ((idx[:, None] >> np.arange(n)) & 1)).astype(np.int64)


def subset_search(n: int, m: int, fix_origin: bool, cap: int, target: int,
                  lo: int = 0, hi: int = -1):
    """Enumerate m-subsets of the cube's 2^n points.

    For every subset the integer column sums ``s_j = sum_{x in A} x_j`` are
    formed; ``4^n W_1 = sum_j s_j^2`` and ``2^n max_j |f_j| = max_j |s_j|``.
    With ``fix_origin`` only subsets containing point 0 are visited.  ``lo``
    and ``hi`` restrict the smallest freely chosen point to ``[lo, hi)``,
    which lets callers split the enumeration into independent chunks.

    Returns ``(table, masks, truncated)``: ``table[k]`` is the best sum of
    squares among subsets with ``max|s_j| == k`` (-1 if none); ``masks`` are
    bitmasks of subsets attaining the best value overall (``target < 0``) or
    among those with ``max|s_j| == target``, at most ``cap`` of them.
    """
    npts = 1 << n
    if hi < 0:
        hi = npts
    table = np.full(m + 1, -1, dtype=np.int64)
    vec = _point_vectors(n)
    base = np.zeros(n, dtype=np.int64)
    base_mask = 0
    start = 0
    k = m
    if fix_origin and m > 0:
        base = vec[0].copy()
        base_mask = 1
        start = 1
        k = m - 1
    best = -1
    masks: list[int] = []
    truncated = False

    def consume(sums: np.ndarray, combos: np.ndarray) -> None:
        nonlocal best, truncated, masks
        sq = np.einsum("ij,ij->i", sums, sums)
        mx = np.abs(sums).max(axis=1) if n > 0 else np.zeros(len(sums), dtype=np.int64)
        np.maximum.at(table, mx, sq)
        sel = sq if target < 0 else np.where(mx == target, sq, -1)
        top = int(sel.max())
        if top < 0 or top < best:
            return
        if top > best:
            best = top
            masks = []
            truncated = False
        for row in np.flatnonzero(sel == top):
            if len(masks) >= cap:
                truncated = True
                break
            bits = base_mask
            for p in combos[row]:
                bits |= 1 << int(p)
            masks.append(bits)

    if k == 0:
        if lo == 0:
            consume(base[None, :], np.zeros((1, 0), dtype=np.int64))
        return table, masks, truncated

    # the first free point p0 ranges over [max(start, lo), hi)
    for p0 in range(max(start, lo), min(hi, npts)):
        rest = combinations(range(p0 + 1, npts), k - 1)
        head = base + vec[p0]
        while True:
            block = list(islice(rest, _CHUNK))
            if not block and k > 1:
                break
            combos = np.array(block, dtype=np.int64).reshape(len(block) if k > 1 else 1, k - 1)
            sums = head + vec[combos].sum(axis=1) if k > 1 else head[None, :]
            full = np.concatenate([np.full((len(combos), 1), p0), combos], axis=1)
            consume(sums, full)
            if k == 1:
                break
    return table, masks, truncated
