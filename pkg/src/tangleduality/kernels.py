"""Hot numeric kernels over bitmask-encoded vertex sets.

Every kernel exists twice: a loop version compiled with numba (``*_nb``) and a
numpy/pure-python fallback (``*_np``).  The public names at the bottom of the
module are bound to one or the other according to :mod:`._accel`.  Vertex sets
are ``uint64`` words, so graphs are limited to 63 vertices; the table kernels
pack an oriented separation ``(A, B)`` into one word and need ``n <= 31``.
"""

from itertools import combinations

import numpy as np

from ._accel import HAVE_NUMBA, njit

MAX_N = 63
MAX_TABLE_N = 31


@njit
def popcount_nb(x):
    x = np.uint64(x)
    c = 0
    while x:
        x &= x - np.uint64(1)
        c += 1
    return c


def popcount_np(x):
    return int(x).bit_count() if hasattr(int, "bit_count") else bin(int(x)).count("1")


def popcount_array(a):
    """Vectorised popcount of a uint64 array."""
    a = np.asarray(a, dtype=np.uint64)
    out = np.zeros(a.shape, dtype=np.int64)
    for shift in range(0, 64, 8):
        out += _BYTE_POP[((a >> np.uint64(shift)) & np.uint64(0xFF)).astype(np.intp)]
    return out


_BYTE_POP = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


# ---------------------------------------------------------------------------
# separation enumeration


@njit
def _components_nb(adj, n, allowed):
    """Connected components of G[allowed] as a list of masks (array, count)."""
    comps = np.zeros(n, dtype=np.uint64)
    count = 0
    rest = allowed
    one = np.uint64(1)
    while rest:
        low = rest & (~rest + one)
        comp = low
        frontier = low
        while frontier:
            nxt = np.uint64(0)
            f = frontier
            while f:
                b = f & (~f + one)
                v = 0
                t = b
                while t > one:
                    t >>= one
                    v += 1
                nxt |= adj[v]
                f ^= b
            nxt &= allowed & ~comp
            comp |= nxt
            frontier = nxt
        comps[count] = comp
        count += 1
        rest &= ~comp
    return comps, count


@njit
def _enumerate_nb(adj, n, k, seps):
    full = (np.uint64(1) << np.uint64(n)) - np.uint64(1) if n < 64 else ~np.uint64(0)
    # first pass: count
    total = 0
    for X in seps:
        comps, c = _components_nb(adj, n, full & ~X)
        total += 1 << c
    A = np.empty(total, dtype=np.uint64)
    B = np.empty(total, dtype=np.uint64)
    pos = 0
    for X in seps:
        comps, c = _components_nb(adj, n, full & ~X)
        for assign in range(1 << c):
            a = X
            b = X
            for i in range(c):
                if (assign >> i) & 1:
                    a |= comps[i]
                else:
                    b |= comps[i]
            A[pos] = a
            B[pos] = b
            pos += 1
    return A, B


def _components_py(adj, n, allowed):
    comps = []
    rest = allowed
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                nxt |= adj[b.bit_length() - 1]
                f ^= b
            nxt &= allowed & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        rest &= ~comp
    return comps


def _enumerate_np(adj, n, k, seps):
    adj = [int(a) for a in adj]
    full = (1 << n) - 1
    A, B = [], []
    for X in seps:
        X = int(X)
        comps = _components_py(adj, n, full & ~X)
        c = len(comps)
        for assign in range(1 << c):
            a = b = X
            for i, comp in enumerate(comps):
                if assign >> i & 1:
                    a |= comp
                else:
                    b |= comp
            A.append(a)
            B.append(b)
    return np.array(A, dtype=np.uint64), np.array(B, dtype=np.uint64)


def separator_candidates(n, k):
    """All vertex sets of size < k as uint64 masks, by size then lexicographically."""
    out = []
    for size in range(min(k, n + 1)):
        for combo in combinations(range(n), size):
            m = 0
            for v in combo:
                m |= 1 << v
            out.append(m)
    return np.array(out, dtype=np.uint64)


# ---------------------------------------------------------------------------
# order relation and corner tables


@njit
def _leq_nb(A, B):
    N = A.shape[0]
    out = np.zeros((N, N), dtype=np.bool_)
    for i in range(N):
        ai = A[i]
        bi = B[i]
        for j in range(N):
            if (ai & ~A[j]) == 0 and (B[j] & ~bi) == 0:
                out[i, j] = True
    return out


def _leq_np(A, B):
    A = A.astype(np.uint64)
    B = B.astype(np.uint64)
    return ((A[:, None] & ~A[None, :]) == 0) & ((B[None, :] & ~B[:, None]) == 0)


@njit
def _lookup_nb(keys_sorted, order, q):
    lo = 0
    hi = keys_sorted.shape[0]
    while lo < hi:
        mid = (lo + hi) // 2
        if keys_sorted[mid] < q:
            lo = mid + 1
        else:
            hi = mid
    if lo < keys_sorted.shape[0] and keys_sorted[lo] == q:
        return order[lo]
    return -1


@njit
def _corners_nb(A, B, n, keys_sorted, perm):
    N = A.shape[0]
    join = np.full((N, N), -1, dtype=np.int32)
    meet = np.full((N, N), -1, dtype=np.int32)
    sh = np.uint64(n)
    for i in range(N):
        for j in range(i, N):
            a = A[i] | A[j]
            b = B[i] & B[j]
            r = _lookup_nb(keys_sorted, perm, (a << sh) | b)
            join[i, j] = r
            join[j, i] = r
            a = A[i] & A[j]
            b = B[i] | B[j]
            r = _lookup_nb(keys_sorted, perm, (a << sh) | b)
            meet[i, j] = r
            meet[j, i] = r
    return join, meet


def _lookup_np(keys_sorted, perm, q):
    pos = np.searchsorted(keys_sorted, q)
    pos = np.minimum(pos, keys_sorted.shape[0] - 1)
    hit = keys_sorted[pos] == q
    return np.where(hit, perm[pos], -1).astype(np.int32)


def _corners_np(A, B, n, keys_sorted, perm):
    sh = np.uint64(n)
    ja = (A[:, None] | A[None, :]) << sh | (B[:, None] & B[None, :])
    ma = (A[:, None] & A[None, :]) << sh | (B[:, None] | B[None, :])
    return _lookup_np(keys_sorted, perm, ja), _lookup_np(keys_sorted, perm, ma)


def pack_keys(A, B, n):
    if n > MAX_TABLE_N:
        raise ValueError(f"corner tables need n <= {MAX_TABLE_N}, got {n}")
    keys = (A.astype(np.uint64) << np.uint64(n)) | B.astype(np.uint64)
    perm = np.argsort(keys, kind="stable").astype(np.int32)
    return keys[perm], perm


# ---------------------------------------------------------------------------
# emulation


@njit
def _emulation_nb(leq, join, inv, eligible):
    N = leq.shape[0]
    out = np.zeros((N, N), dtype=np.bool_)
    up = np.empty(N, dtype=np.int64)
    for r in range(N):
        if not eligible[r]:
            continue
        m = 0
        for x in range(N):
            if leq[r, x] and x != inv[r]:
                up[m] = x
                m += 1
        for s in range(N):
            if not leq[r, s]:
                continue
            ok = True
            for t in range(m):
                if join[up[t], s] < 0:
                    ok = False
                    break
            out[r, s] = ok
    return out


def _emulation_np(leq, join, inv, eligible):
    N = leq.shape[0]
    out = np.zeros((N, N), dtype=bool)
    for r in np.flatnonzero(eligible):
        up = leq[r].copy()
        up[inv[r]] = False
        closed = (join[up] >= 0).all(axis=0)
        out[r] = closed & leq[r]
    return out


# ---------------------------------------------------------------------------
# pairwise local vertex connectivity (unit-capacity max-flow, vertex splitting)


@njit
def _local_connectivity_nb(adj, n, cap):
    """kappa[u, v] = min(cap, size of a minimum u-v vertex cut); adjacent pairs get cap."""
    one = np.uint64(1)
    kappa = np.full((n, n), cap, dtype=np.int64)
    # flow network: node 2v = v_in, 2v+1 = v_out; arcs v_in->v_out (cap 1), u_out->w_in (cap inf)
    M = 2 * n
    capm = np.zeros((M, M), dtype=np.int64)
    big = n + 1
    parent = np.empty(M, dtype=np.int64)
    queue = np.empty(M, dtype=np.int64)
    for u in range(n):
        for v in range(u + 1, n):
            if (adj[u] >> np.uint64(v)) & one:
                continue
            capm[:, :] = 0
            for w in range(n):
                capm[2 * w, 2 * w + 1] = 1
                nb = adj[w]
                for x in range(n):
                    if (nb >> np.uint64(x)) & one:
                        capm[2 * w + 1, 2 * x] = big
            src = 2 * u + 1
            dst = 2 * v
            flow = 0
            while flow < cap:
                for i in range(M):
                    parent[i] = -1
                parent[src] = src
                head = 0
                tail = 0
                queue[tail] = src
                tail += 1
                while head < tail and parent[dst] < 0:
                    a = queue[head]
                    head += 1
                    for b in range(M):
                        if parent[b] < 0 and capm[a, b] > 0:
                            parent[b] = a
                            queue[tail] = b
                            tail += 1
                if parent[dst] < 0:
                    break
                b = dst
                while b != src:
                    a = parent[b]
                    capm[a, b] -= 1
                    capm[b, a] += 1
                    b = a
                flow += 1
            kappa[u, v] = flow
            kappa[v, u] = flow
    return kappa


def _local_connectivity_np(adj, n, cap):
    adj = [int(a) for a in adj]
    kappa = np.full((n, n), cap, dtype=np.int64)
    big = n + 1
    for u in range(n):
        for v in range(u + 1, n):
            if adj[u] >> v & 1:
                continue
            capm = np.zeros((2 * n, 2 * n), dtype=np.int64)
            for w in range(n):
                capm[2 * w, 2 * w + 1] = 1
                for x in range(n):
                    if adj[w] >> x & 1:
                        capm[2 * w + 1, 2 * x] = big
            src, dst = 2 * u + 1, 2 * v
            flow = 0
            while flow < cap:
                parent = np.full(2 * n, -1, dtype=np.int64)
                parent[src] = src
                frontier = [src]
                while frontier and parent[dst] < 0:
                    nxt = []
                    for a in frontier:
                        for b in np.flatnonzero((capm[a] > 0) & (parent < 0)):
                            parent[b] = a
                            nxt.append(int(b))
                    frontier = nxt
                if parent[dst] < 0:
                    break
                b = dst
                while b != src:
                    a = parent[b]
                    capm[a, b] -= 1
                    capm[b, a] += 1
                    b = a
                flow += 1
            kappa[u, v] = kappa[v, u] = flow
    return kappa


# ---------------------------------------------------------------------------
# exact tree-width: dynamic programme over vertex subsets (elimination orderings)


@njit
def _q_size_nb(adj, n, S, v):
    """|Q(S, v)|: vertices outside S + v reachable from v through S."""
    one = np.uint64(1)
    seen = (one << np.uint64(v)) | np.uint64(0)
    frontier = seen
    inside = S
    reach = np.uint64(0)
    while frontier:
        nxt = np.uint64(0)
        f = frontier
        while f:
            b = f & (~f + one)
            w = 0
            t = b
            while t > one:
                t >>= one
                w += 1
            nxt |= adj[w]
            f ^= b
        nxt &= ~seen
        seen |= nxt
        reach |= nxt & ~inside
        frontier = nxt & inside
    return popcount_nb(reach)


@njit
def _treewidth_dp_nb(adj, n, upper):
    """Minimum over elimination orderings of the max |Q|; values > upper are pruned."""
    size = 1 << n
    INF = 127
    tw = np.full(size, INF, dtype=np.int8)
    tw[0] = -1
    for S in range(1, size):
        best = INF
        rest = S
        while rest:
            low = rest & -rest
            v = 0
            t = low
            while t > 1:
                t >>= 1
                v += 1
            prev = tw[S ^ low]
            if prev < best and prev <= upper:
                q = _q_size_nb(adj, n, np.uint64(S ^ low), v)
                val = prev if prev > q else q
                if val < best:
                    best = val
            rest ^= low
        tw[S] = best if best <= upper else INF
    return tw[size - 1]


def _q_size_py(adj, S, v):
    seen = 1 << v
    frontier = seen
    reach = 0
    while frontier:
        nxt = 0
        f = frontier
        while f:
            b = f & -f
            nxt |= adj[b.bit_length() - 1]
            f ^= b
        nxt &= ~seen
        seen |= nxt
        reach |= nxt & ~S
        frontier = nxt & S
    return bin(reach).count("1")


def _treewidth_dp_np(adj, n, upper):
    adj = [int(a) for a in adj]
    INF = 127
    tw = np.full(1 << n, INF, dtype=np.int16)
    tw[0] = -1
    for S in range(1, 1 << n):
        best = INF
        rest = S
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            prev = int(tw[S ^ low])
            if prev < best and prev <= upper:
                q = _q_size_py(adj, S ^ low, v)
                val = max(prev, q)
                best = min(best, val)
            rest ^= low
        tw[S] = best if best <= upper else INF
    return int(tw[-1])


# ---------------------------------------------------------------------------
# public bindings

if HAVE_NUMBA:
    enumerate_separations = _enumerate_nb
    leq_matrix = _leq_nb
    _corners_impl = _corners_nb
    emulation_table = _emulation_nb
    local_connectivity = _local_connectivity_nb
    treewidth_dp = _treewidth_dp_nb
else:
    enumerate_separations = _enumerate_np
    leq_matrix = _leq_np
    _corners_impl = _corners_np
    emulation_table = _emulation_np
    local_connectivity = _local_connectivity_np
    treewidth_dp = _treewidth_dp_np


def corner_tables(A, B, n):
    """Index tables of joins and meets inside the system; -1 where the corner leaves it."""
    keys, perm = pack_keys(A, B, n)
    return _corners_impl(A.astype(np.uint64), B.astype(np.uint64), n, keys, perm)


NUMBA_KERNELS = {
    "enumerate_separations": (_enumerate_nb, _enumerate_np),
    "leq_matrix": (_leq_nb, _leq_np),
    "corners": (_corners_nb, _corners_np),
    "emulation_table": (_emulation_nb, _emulation_np),
    "local_connectivity": (_local_connectivity_nb, _local_connectivity_np),
    "treewidth_dp": (_treewidth_dp_nb, _treewidth_dp_np),
}
