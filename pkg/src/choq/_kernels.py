"""Numba kernels: incremental quadtree cover costs along descending thresholds.

A Choquet integral needs the dyadic content of every superlevel set of the
integrand.  Rebuilding the quadtree per threshold would cost
O(#thresholds * 4^L); instead cells are inserted one by one in descending
value order and only the O(L) ancestors of the touched leaf are recomputed.
The final quadtree state after a batch of inserts is order-independent, and
child sums always use the fixed association ((c00 + c10) + c01) + c11, so
results are bit-identical with the batch recursion in :mod:`choq.content`.

The flat node layout stores level ``l`` at offset ``(4^l - 1) / 3`` with node
``(l, i, j)`` at ``offset[l] + (i << l) + j``; a zero entry means the subtree
is empty (occupied costs are strictly positive).
"""

from __future__ import annotations

import numpy as np
from numba import njit


def level_offsets(level: int) -> np.ndarray:
    offs = np.empty(level + 1, dtype=np.int64)
    offs[0] = 0
    for l in range(1, level + 1):
        offs[l] = offs[l - 1] + 4 ** (l - 1)
    return offs


@njit(cache=True, nogil=True, inline="always")
def _insert(level, costs, offs, tree, i, j):
    idx = offs[level] + (i << level) + j
    if tree[idx] != 0.0:
        return tree[0]
    tree[idx] = costs[level]
    ii = i
    jj = j
    for l in range(level - 1, -1, -1):
        ii >>= 1
        jj >>= 1
        o = offs[l + 1]
        sh = l + 1
        ci = ii << 1
        cj = jj << 1
        s = (
            (tree[o + (ci << sh) + cj] + tree[o + ((ci + 1) << sh) + cj])
            + tree[o + (ci << sh) + (cj + 1)]
        ) + tree[o + ((ci + 1) << sh) + (cj + 1)]
        sc = costs[l]
        nc = sc if sc < s else s
        pidx = offs[l] + (ii << l) + jj
        if tree[pidx] == nc:
            break
        tree[pidx] = nc
    return tree[0]


@njit(cache=True, nogil=True)
def superlevel_roots(level, costs, offs, vals_desc, ci, cj):
    """Content of the inserted set after each cell, cells in descending value order."""
    tree = np.zeros(offs[level] + (1 << (2 * level)), dtype=np.float64)
    m = vals_desc.size
    roots = np.empty(m, dtype=np.float64)
    for k in range(m):
        roots[k] = _insert(level, costs, offs, tree, ci[k], cj[k])
    return roots


@njit(cache=True, nogil=True)
def layer_cake(level, costs, offs, vals_desc, ci, cj, q):
    """``sum_k H_k * (t_k^q - t_{k+1}^q)`` over descending distinct thresholds.

    ``H_k`` is the content of the cells whose value is >= the k-th distinct
    value; equals the Choquet integral of ``vals^q`` for ``q >= 1`` thresholds.
    """
    m = vals_desc.size
    if m == 0:
        return 0.0
    tree = np.zeros(offs[level] + (1 << (2 * level)), dtype=np.float64)
    total = 0.0
    root = 0.0
    cur = vals_desc[0]
    for k in range(m):
        d = vals_desc[k]
        if d != cur:
            total += root * (cur**q - d**q)
            cur = d
        if d == 0.0:
            return total
        root = _insert(level, costs, offs, tree, ci[k], cj[k])
    total += root * cur**q
    return total


@njit(cache=True, nogil=True)
def shift_objective(level, costs, offs, u_asc, ci, cj, b, q):
    """Layer-cake value of ``|u - b|^q`` without materializing or sorting.

    ``u_asc`` is sorted ascending once by the caller; for any shift ``b`` the
    cells ordered by descending ``|u - b|`` stream out of a two-pointer merge
    from both ends.
    """
    n = u_asc.size
    if n == 0:
        return 0.0
    tree = np.zeros(offs[level] + (1 << (2 * level)), dtype=np.float64)
    lo = 0
    hi = n - 1
    total = 0.0
    root = 0.0
    first = True
    cur = 0.0
    while lo <= hi:
        dlo = u_asc[lo] - b
        if dlo < 0.0:
            dlo = -dlo
        dhi = u_asc[hi] - b
        if dhi < 0.0:
            dhi = -dhi
        if dlo >= dhi:
            d = dlo
            i = ci[lo]
            j = cj[lo]
            lo += 1
        else:
            d = dhi
            i = ci[hi]
            j = cj[hi]
            hi -= 1
        if first:
            cur = d
            first = False
        elif d != cur:
            total += root * (cur**q - d**q)
            cur = d
        if d == 0.0:
            return total
        root = _insert(level, costs, offs, tree, i, j)
    total += root * cur**q
    return total
