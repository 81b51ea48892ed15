"""Numba kernels for the linear-time sweeps over sorted observation times."""

import numba
import numpy as np


@numba.njit(cache=True, nogil=True)
def refresh_times(t1, t2):
    # strict successor recursion: T_k = max(first t1 > T_{k-1}, first t2 > T_{k-1})
    n1, n2 = t1.shape[0], t2.shape[0]
    out = np.empty(min(n1, n2), dtype=np.float64)
    out[0] = 0.0
    k = 1
    i = 1
    j = 1
    last = 0.0
    while True:
        while i < n1 and t1[i] <= last:
            i += 1
        while j < n2 and t2[j] <= last:
            j += 1
        if i >= n1 or j >= n2:
            break
        last = max(t1[i], t2[j])
        out[k] = last
        k += 1
    return out[:k]


@numba.njit(cache=True, nogil=True)
def hy_sweep(t1, x1, m1, t2, x2, m2):
    """Sum of overlapping increment products over intervals 1..m1 and 1..m2.

    Pairs are accumulated in (i, j) lexicographic order, the same order a
    literal double loop visits them, so the result is bit-identical to the
    brute-force sum. Cost is O(m1 + m2 + number of overlapping pairs), and
    the number of overlapping pairs is at most m1 + m2 - 1.
    """
    total = 0.0
    jlo = 1
    for i in range(1, m1 + 1):
        a, b = t1[i - 1], t1[i]
        # first interval of grid 2 that can overlap (a, b]: t2[j] > a
        while jlo <= m2 and t2[jlo] <= a:
            jlo += 1
        dx1 = x1[i] - x1[i - 1]
        j = jlo
        while j <= m2 and t2[j - 1] < b:
            total += dx1 * (x2[j] - x2[j - 1])
            j += 1
    return total


@numba.njit(cache=True, nogil=True)
def hy_abs_tail(t1, x1, m1, t2, x2, m2, cut):
    # sum |dX1 dX2| over overlapping pairs whose later right end exceeds `cut`
    total = 0.0
    jlo = 1
    for i in range(1, m1 + 1):
        a, b = t1[i - 1], t1[i]
        while jlo <= m2 and t2[jlo] <= a:
            jlo += 1
        dx1 = abs(x1[i] - x1[i - 1])
        j = jlo
        while j <= m2 and t2[j - 1] < b:
            if max(b, t2[j]) > cut:
                total += dx1 * abs(x2[j] - x2[j - 1])
            j += 1
    return total


@numba.njit(cache=True, nogil=True)
def sequential_sum(terms):
    total = 0.0
    for k in range(terms.shape[0]):
        total += terms[k]
    return total
