"""Compiled float prefilter over the mixed-radix stream of trivalent types.

Type ``idx`` is decoded exactly as :func:`tropcurves.enumeration.type_edges`
does: leaf ``k >= 3`` is inserted into edge ``c_k`` with the last leaf as the
least significant digit.  Every type gets a status code; only candidates
(accepted, near a wall, or possibly consistent while singular) are
re-examined exactly by the caller.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - pure Python fallback, very slow
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


REJECT = 0
ACCEPT = 1
NEAR_WALL = 2
SINGULAR_SUSPECT = 3

PIVOT_TOL = 1e-9
MARGIN = 1e-7


@njit(cache=True, nogil=True)
def _decode(idx, n, radices, eu, ev):
    eu[0] = n
    ev[0] = 0
    eu[1] = n
    ev[1] = 1
    eu[2] = n
    ev[2] = 2
    n_edges = 3
    next_inner = n + 1
    # digits: radices[k] for leaf k; last leaf least significant
    rem = idx
    digits = np.empty(n, np.int64)
    for k in range(n - 1, 2, -1):
        digits[k] = rem % radices[k]
        rem //= radices[k]
    for k in range(3, n):
        c = digits[k]
        a = eu[c]
        b = ev[c]
        w = next_inner
        next_inner += 1
        ev[c] = w
        eu[n_edges] = w
        ev[n_edges] = b
        n_edges += 1
        eu[n_edges] = w
        ev[n_edges] = k
        n_edges += 1
    return n_edges


@njit(cache=True, nogil=True)
def classify_range(start, stop, n, r, radices, delta, func, row_label, rhs, out):
    """Fill ``out[idx - start]`` with a status code for each type in range."""
    n_vert = 2 * n - 2
    n_edges_total = 2 * n - 3
    n_unknowns = n - 3 + r
    eu = np.empty(n_edges_total, np.int64)
    ev = np.empty(n_edges_total, np.int64)
    adj = np.empty((n_vert, 3), np.int64)
    deg = np.empty(n_vert, np.int64)
    parent = np.empty(n_vert, np.int64)
    order = np.empty(n_vert, np.int64)
    sub = np.empty((n_vert, r), np.float64)
    col = np.empty(n_vert, np.int64)
    a = np.empty((n_unknowns, n_unknowns), np.float64)
    b = np.empty(n_unknowns, np.float64)
    x = np.empty(n_unknowns, np.float64)
    pivcol = np.empty(n_unknowns, np.int64)
    scale = 1.0
    for i in range(n_unknowns):
        if abs(rhs[i]) > scale:
            scale = abs(rhs[i])
    for idx in range(start, stop):
        _decode(idx, n, radices, eu, ev)
        for v in range(n_vert):
            deg[v] = 0
        for e in range(n_edges_total):
            u = eu[e]
            w = ev[e]
            adj[u, deg[u]] = w
            deg[u] += 1
            adj[w, deg[w]] = u
            deg[w] += 1
        root = adj[0, 0]
        # DFS order from root
        parent[root] = -1
        order[0] = root
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            for t in range(deg[v]):
                w = adj[v, t]
                if w != parent[v]:
                    parent[w] = v
                    order[tail] = w
                    tail += 1
        # subtree direction sums, children before parents
        for t in range(tail - 1, -1, -1):
            v = order[t]
            if v < n:
                for k in range(r):
                    sub[v, k] = delta[v, k]
            else:
                for k in range(r):
                    sub[v, k] = 0.0
                for s in range(deg[v]):
                    w = adj[v, s]
                    if w != parent[v]:
                        for k in range(r):
                            sub[v, k] += sub[w, k]
        # bounded edges: inner vertices other than root, in BFS order
        ncol = r
        for t in range(tail):
            v = order[t]
            if v >= n and v != root:
                col[v] = ncol
                ncol += 1
            else:
                col[v] = -1
        # condition matrix
        for i in range(n_unknowns):
            lab = row_label[i]
            for j in range(n_unknowns):
                a[i, j] = 0.0
            for k in range(r):
                a[i, k] = func[i, k]
            w = parent[lab]
            while w != root:
                s = 0.0
                for k in range(r):
                    s += func[i, k] * sub[w, k]
                a[i, col[w]] = s
                w = parent[w]
            b[i] = rhs[i]
        # elimination with partial pivoting, skipping empty columns
        rank = 0
        for j in range(n_unknowns):
            best = rank
            bestval = 0.0
            for i in range(rank, n_unknowns):
                if abs(a[i, j]) > bestval:
                    bestval = abs(a[i, j])
                    best = i
            if bestval < PIVOT_TOL:
                continue
            if best != rank:
                for m in range(n_unknowns):
                    tmp = a[rank, m]
                    a[rank, m] = a[best, m]
                    a[best, m] = tmp
                tmp = b[rank]
                b[rank] = b[best]
                b[best] = tmp
            for i in range(rank + 1, n_unknowns):
                f = a[i, j] / a[rank, j]
                if f != 0.0:
                    for m in range(j, n_unknowns):
                        a[i, m] -= f * a[rank, m]
                    b[i] -= f * b[rank]
            pivcol[rank] = j
            rank += 1
        if rank < n_unknowns:
            status = REJECT
            for i in range(rank, n_unknowns):
                if abs(b[i]) < MARGIN * scale:
                    status = SINGULAR_SUSPECT
            # only suspicious if every leftover row is near zero
            if status == SINGULAR_SUSPECT:
                for i in range(rank, n_unknowns):
                    if abs(b[i]) >= MARGIN * scale:
                        status = REJECT
            out[idx - start] = status
            continue
        for i in range(n_unknowns - 1, -1, -1):
            s = b[i]
            for m in range(i + 1, n_unknowns):
                s -= a[i, m] * x[m]
            x[i] = s / a[i, i]
        lo = 1e300
        for i in range(r, n_unknowns):
            if x[i] < lo:
                lo = x[i]
        if lo > MARGIN * scale:
            out[idx - start] = ACCEPT
        elif lo > -MARGIN * scale:
            out[idx - start] = NEAR_WALL
        else:
            out[idx - start] = REJECT
    return 0
