"""Compiled inner loops.

Everything here works on plain numpy arrays; the public wrappers live in
``core`` and ``oracle``.
"""

import numpy as np
from numba import njit

INF = 1 << 40

_ONE = np.uint64(1)
_ZERO = np.uint64(0)


@njit(cache=True)
def edge_costs(n, order):
    """Cost of every edge of a temporally ordered edge list."""
    done = np.zeros(n, dtype=np.int64)
    out = np.empty(order.shape[0], dtype=np.int64)
    for p in range(order.shape[0]):
        f = order[p, 0]
        t = order[p, 1]
        out[p] = done[f] + 1 + done[t]
        done[f] += 1
    return out


@njit(cache=True)
def greedy_refine(adj, reverse):
    """Min-retiring-cost refinement of a tournament.

    Returns the temporal order (earliest first) and the retiring cost of each
    edge at the moment it was retired. Ties go to the lexicographically
    smallest (src, dst), or the largest when ``reverse`` is set.
    """
    n = adj.shape[0]
    live = adj.astype(np.uint8)
    left = np.zeros(n, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            left[i] += live[i, j]
    # best[i]: smallest remaining row length among i's unretired targets
    best = np.full(n, INF, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if live[i, j] and left[j] < best[i]:
                best[i] = left[j]
    total = 0
    for i in range(n):
        total += left[i]
    order = np.empty((total, 2), dtype=np.int64)
    cost = np.empty(total, dtype=np.int64)

    for step in range(total):
        key = INF
        f = -1
        if reverse:
            for i in range(n - 1, -1, -1):
                if left[i] > 0 and left[i] + best[i] < key:
                    key = left[i] + best[i]
                    f = i
        else:
            for i in range(n):
                if left[i] > 0 and left[i] + best[i] < key:
                    key = left[i] + best[i]
                    f = i
        b = best[f]
        t = -1
        if reverse:
            for j in range(n - 1, -1, -1):
                if live[f, j] and left[j] == b:
                    t = j
                    break
        else:
            for j in range(n):
                if live[f, j] and left[j] == b:
                    t = j
                    break

        live[f, t] = 0
        left[f] -= 1
        pos = total - 1 - step
        order[pos, 0] = f
        order[pos, 1] = t
        cost[pos] = key

        m = INF
        for j in range(n):
            if live[f, j] and left[j] < m:
                m = left[j]
        best[f] = m
        lf = left[f]
        for g in range(n):
            if live[g, f] and lf < best[g]:
                best[g] = lf
    return order, cost


@njit(cache=True)
def _ctz(x):
    k = 0
    if (x & np.uint64(0xFFFFFFFF)) == _ZERO:
        k += 32
        x >>= np.uint64(32)
    if (x & np.uint64(0xFFFF)) == _ZERO:
        k += 16
        x >>= np.uint64(16)
    if (x & np.uint64(0xFF)) == _ZERO:
        k += 8
        x >>= np.uint64(8)
    if (x & np.uint64(0xF)) == _ZERO:
        k += 4
        x >>= np.uint64(4)
    if (x & np.uint64(0x3)) == _ZERO:
        k += 2
        x >>= np.uint64(2)
    if (x & _ONE) == _ZERO:
        k += 1
    return k


@njit(cache=True)
def _push_eligible(i, th, unretired, below, marked, adj, stack, top):
    words = unretired.shape[1]
    for w in range(words):
        fresh = unretired[i, w] & below[th, w] & ~marked[i, w]
        while fresh != _ZERO:
            low = fresh & (~fresh + _ONE)
            j = w * 64 + _ctz(low)
            fresh ^= low
            marked[i, w] |= low
            marked[j, i >> 6] |= _ONE << np.uint64(i & 63)
            if adj[i, j]:
                stack[top, 0] = i
                stack[top, 1] = j
            else:
                stack[top, 0] = j
                stack[top, 1] = i
            top += 1
    return top


@njit(cache=True)
def threshold_refine(adj, limit):
    """Refine by retiring any edge whose retiring cost is at most ``limit``.

    Retiring costs only ever decrease, so an edge stays eligible once it is.
    Returns (ok, order, cost); ``order`` is only complete when ``ok``.
    """
    n = adj.shape[0]
    words = (n + 63) // 64
    left = np.zeros(n, dtype=np.int64)
    unretired = np.zeros((n, words), dtype=np.uint64)
    for i in range(n):
        for j in range(n):
            if adj[i, j]:
                left[i] += 1
                unretired[i, j >> 6] |= _ONE << np.uint64(j & 63)
                unretired[j, i >> 6] |= _ONE << np.uint64(i & 63)
    # below[v]: sites whose remaining row length is at most v
    below = np.zeros((n + 1, words), dtype=np.uint64)
    for i in range(n):
        for v in range(left[i], n + 1):
            below[v, i >> 6] |= _ONE << np.uint64(i & 63)
    marked = np.zeros((n, words), dtype=np.uint64)
    total = 0
    for i in range(n):
        total += left[i]
    stack = np.empty((total, 2), dtype=np.int64)
    order = np.empty((total, 2), dtype=np.int64)
    cost = np.empty(total, dtype=np.int64)

    top = 0
    for i in range(n):
        th = limit - left[i]
        if th >= 0:
            top = _push_eligible(i, min(th, n), unretired, below, marked, adj, stack, top)

    done = 0
    while top > 0:
        top -= 1
        f = stack[top, 0]
        t = stack[top, 1]
        pos = total - 1 - done
        order[pos, 0] = f
        order[pos, 1] = t
        cost[pos] = left[f] + left[t]
        done += 1
        unretired[f, t >> 6] &= ~(_ONE << np.uint64(t & 63))
        unretired[t, f >> 6] &= ~(_ONE << np.uint64(f & 63))
        left[f] -= 1
        v = left[f]
        below[v, f >> 6] |= _ONE << np.uint64(f & 63)
        th = limit - v
        if th >= 0:
            top = _push_eligible(f, min(th, n), unretired, below, marked, adj, stack, top)
    return done == total, order, cost


@njit(cache=True)
def oracle_sync_range(n, lo, hi, pair_i, pair_j, bound):
    """Smallest greedy cost over tournaments whose bitmask lies in [lo, hi).

    Tournaments that cannot beat the running best are abandoned early.
    Returns (best cost, first mask achieving it); cost is ``bound`` and mask
    -1 if nothing in range beats ``bound``.
    """
    m = pair_i.shape[0]
    src = np.empty(m, dtype=np.int64)
    dst = np.empty(m, dtype=np.int64)
    alive = np.empty(m, dtype=np.uint8)
    left = np.empty(n, dtype=np.int64)
    best = bound
    best_mask = -1
    for mask in range(lo, hi):
        for v in range(n):
            left[v] = 0
        for b in range(m):
            if (mask >> b) & 1:
                src[b] = pair_j[b]
                dst[b] = pair_i[b]
            else:
                src[b] = pair_i[b]
                dst[b] = pair_j[b]
            left[src[b]] += 1
            alive[b] = 1
        worst = 0
        for step in range(m):
            key = INF
            pick = -1
            for b in range(m):
                if alive[b]:
                    k = left[src[b]] + left[dst[b]]
                    if k < key:
                        key = k
                        pick = b
            if key > worst:
                worst = key
                if worst >= best:
                    break
            alive[pick] = 0
            left[src[pick]] -= 1
        if worst < best:
            best = worst
            best_mask = mask
    return best, best_mask


@njit(cache=True)
def sr_cells(n, u, c, upper_rows, upper_len, gap, pad):
    """Two-group layout cells; ``upper_rows`` holds HalfInTurn_u padded."""
    cells = np.full((n, c), pad, dtype=np.int64)
    lengths = np.zeros(n, dtype=np.int64)
    queried_by = np.zeros((c, u), dtype=np.uint8)
    k = 0
    for i in range(c):
        r = u + i
        slots = (i + 1) // 2
        for s in range(slots):
            x = (k + s) % u
            cells[r, s] = x
            queried_by[i, x] = 1
        k += slots
        p = slots
        for x in range(n - 1, r, -1):
            cells[r, p] = x
            p += 1
        lengths[r] = p
    for i in range(u):
        h = upper_len[i]
        for s in range(h):
            cells[i, s] = upper_rows[i, s]
        need = 0
        for l in range(c):
            if not queried_by[l, i]:
                need += 1
        if need > c - h:
            return cells, lengths, i
        for s in range(h, c - need):
            cells[i, s] = gap
        p = c - need
        for l in range(c - 1, -1, -1):
            if not queried_by[l, i]:
                cells[i, p] = u + l
                p += 1
        lengths[i] = c
    return cells, lengths, -1


@njit(cache=True)
def reverse_suffix_from(cells, lengths, u):
    """Reverse, in every row, the trailing run of targets ``>= u``."""
    out = cells.copy()
    for i in range(cells.shape[0]):
        end = lengths[i]
        start = end
        while start > 0 and out[i, start - 1] >= u:
            start -= 1
        a = start
        b = end - 1
        while a < b:
            tmp = out[i, a]
            out[i, a] = out[i, b]
            out[i, b] = tmp
            a += 1
            b -= 1
    return out
