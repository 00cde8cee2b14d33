# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot kernels in ``_purepy``."""
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

import numpy as np

cdef enum:
    MAXN = 6
    MAXPTS = 64


def wht(values):
    """Unnormalized Walsh-Hadamard transform (in-place butterfly on a copy)."""
    arr = np.array(values, dtype=np.float64, copy=True)
    cdef double[::1] out = arr
    cdef Py_ssize_t size = out.shape[0]
    cdef Py_ssize_t h = 1, i, j
    cdef double x, y
    if size & (size - 1):
        raise ValueError("length must be a power of two")
    with nogil:
        while h < size:
            i = 0
            while i < size:
                for j in range(i, i + h):
                    x = out[j]
                    y = out[j + h]
                    out[j] = x + y
                    out[j + h] = x - y
                i += 2 * h
            h *= 2
    return arr


cdef struct Search:
    int n
    int npts
    int k
    int target
    int cap
    int vec[MAXPTS][MAXN]
    int64_t* table
    int64_t best
    uint64_t* masks
    int nmasks
    int truncated


cdef inline void _leaf(Search* st, int* s, uint64_t bits) noexcept nogil:
    cdef int j, a
    cdef int64_t sq = 0
    cdef int mx = 0
    cdef int64_t sel
    for j in range(st.n):
        a = s[j]
        sq += a * a
        if a < 0:
            a = -a
        if a > mx:
            mx = a
    if sq > st.table[mx]:
        st.table[mx] = sq
    if st.target < 0:
        sel = sq
    elif mx == st.target:
        sel = sq
    else:
        return
    if sel > st.best:
        st.best = sel
        st.nmasks = 0
        st.truncated = 0
    if sel == st.best:
        if st.nmasks < st.cap:
            st.masks[st.nmasks] = bits
            st.nmasks += 1
        else:
            st.truncated = 1


cdef void _dfs(Search* st, int start, int stop, int depth, int* sums,
               uint64_t bits) noexcept nogil:
    cdef int p, j
    cdef int* cur = sums + depth * MAXN
    cdef int* nxt = cur + MAXN
    cdef int last = st.npts - (st.k - depth)
    if stop - 1 < last:
        last = stop - 1
    for p in range(start, last + 1):
        for j in range(st.n):
            nxt[j] = cur[j] + st.vec[p][j]
        if depth + 1 == st.k:
            _leaf(st, nxt, bits | ((<uint64_t>1) << p))
        else:
            _dfs(st, p + 1, st.npts, depth + 1, sums, bits | ((<uint64_t>1) << p))


def subset_search(int n, int m, bint fix_origin, int cap, int target,
                  int lo=0, int hi=-1):
    """See ``levelone._purepy.subset_search``; identical contract and output."""
    if n < 0 or n > MAXN:
        raise ValueError(f"compiled search supports n <= {MAXN}")
    cdef Search st
    cdef int npts = 1 << n
    cdef int p, j, start = 0
    cdef uint64_t base_bits = 0
    cdef int sums[(MAXPTS + 2) * MAXN]
    if hi < 0:
        hi = npts
    table = np.full(m + 1, -1, dtype=np.int64)
    cdef int64_t[::1] tv = table
    st.n = n
    st.npts = npts
    st.target = target
    st.cap = cap
    st.best = -1
    st.nmasks = 0
    st.truncated = 0
    st.table = &tv[0]
    for p in range(npts):
        for j in range(n):
            st.vec[p][j] = 1 - 2 * ((p >> j) & 1)
    for j in range(MAXN):
        sums[j] = 0
    st.k = m
    if fix_origin and m > 0:
        for j in range(n):
            sums[j] = st.vec[0][j]
        base_bits = 1
        start = 1
        st.k = m - 1
    st.masks = <uint64_t*> malloc(max(cap, 1) * sizeof(uint64_t))
    if st.masks == NULL:
        raise MemoryError()
    try:
        if st.k == 0:
            if lo == 0:
                _leaf(&st, sums, base_bits)
        else:
            if lo > start:
                start = lo
            with nogil:
                _dfs(&st, start, hi, 0, sums, base_bits)
        masks = [int(st.masks[j]) for j in range(st.nmasks)]
    finally:
        free(st.masks)
    return table, masks, bool(st.truncated)
