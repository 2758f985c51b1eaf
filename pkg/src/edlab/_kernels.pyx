# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: exhaustive r-cut, pattern search, irregularity scan.

Bit-for-bit equivalent to the pure-Python reference in ``edlab._pykernels``
(same enumeration orders, same tie-breaking); hosts are limited to 64
vertices so adjacency rows fit one machine word each.
"""

from libc.stdint cimport uint64_t, int64_t

BACKEND = "cython"

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    static inline int edlab_popcount64(unsigned long long x) { return __builtin_popcountll(x); }
    #else
    static inline int edlab_popcount64(unsigned long long x) {
        int c = 0;
        while (x) { x &= x - 1; c++; }
        return c;
    }
    #endif
    """
    int edlab_popcount64(unsigned long long x) nogil

cdef inline int _bit_index(uint64_t low) nogil:
    # index of the single set bit in ``low``
    cdef int i = 0
    while not (low & 1):
        low >>= 1
        i += 1
    return i


def max_rcut(int n, rows, int r):
    """See ``edlab._pykernels.max_rcut``; identical contract and sweep order."""
    cdef uint64_t adj[64]
    cdef int cnt[64][8]
    cdef int digits[64]
    cdef int offset[64]
    cdef int focus[65]
    cdef int assign[64]
    cdef int best_assign[64]
    cdef int v, c, j, u, old, new, x, t, i
    cdef long long m = 0, uncut, best_uncut
    cdef uint64_t w, low, row
    if n > 64:
        raise ValueError("host too large for kernel (max 64 vertices)")
    if r > 8:
        raise ValueError("class count too large for kernel (max 8)")
    if n == 0:
        return 0, []
    if r < 1:
        raise ValueError("class count must be >= 1")
    for v in range(n):
        adj[v] = <uint64_t> rows[v]
        m += edlab_popcount64(adj[v])
    m //= 2
    if r == 1 or n == 1:
        return 0, [0] * n
    for v in range(n):
        for c in range(r):
            cnt[v][c] = 0
        cnt[v][0] = edlab_popcount64(adj[v])
        assign[v] = 0
        best_assign[v] = 0
    uncut = m
    best_uncut = uncut
    t = n - 1
    for j in range(t):
        digits[j] = 0
        offset[j] = 1
    for j in range(t + 1):
        focus[j] = j
    with nogil:
        while True:
            j = focus[0]
            focus[0] = 0
            if j == t:
                break
            old = digits[j]
            new = old + offset[j]
            digits[j] = new
            u = j + 1
            row = adj[u]
            uncut += cnt[u][new] - cnt[u][old]
            assign[u] = new
            w = row
            while w:
                low = w & (~w + 1)
                x = _bit_index(low)
                cnt[x][old] -= 1
                cnt[x][new] += 1
                w ^= low
            if new == 0 or new == r - 1:
                offset[j] = -offset[j]
                focus[j] = focus[j + 1]
                focus[j + 1] = j + 1
            if uncut < best_uncut:
                best_uncut = uncut
                for i in range(n):
                    best_assign[i] = assign[i]
    return m - best_uncut, [best_assign[i] for i in range(n)]


def find_embedding(int n, rows, int k, prows, domains):
    """See ``edlab._pykernels.find_embedding``; identical contract."""
    cdef uint64_t adj[64]
    cdef uint64_t dom[64]
    cdef uint64_t below[64]
    cdef uint64_t cand[65]
    cdef int assign[64]
    cdef int i, pos, v, nxt, pv
    cdef uint64_t used, low, c, w, lw
    if k == 0:
        return []
    if k > n:
        return None
    if n > 64 or k > 64:
        raise ValueError("host too large for kernel (max 64 vertices)")
    for i in range(n):
        adj[i] = <uint64_t> rows[i]
    for i in range(k):
        dom[i] = <uint64_t> domains[i]
        below[i] = (<uint64_t> prows[i]) & ((<uint64_t> 1 << i) - 1)
        assign[i] = -1
        cand[i] = 0
    cand[0] = dom[0]
    used = 0
    pos = 0
    with nogil:
        while True:
            if cand[pos] == 0:
                pos -= 1
                if pos < 0:
                    break
                used ^= <uint64_t> 1 << assign[pos]
                continue
            low = cand[pos] & (~cand[pos] + 1)
            cand[pos] ^= low
            v = _bit_index(low)
            assign[pos] = v
            if pos == k - 1:
                break
            used |= low
            nxt = pos + 1
            c = dom[nxt] & ~used
            w = below[nxt]
            while w and c:
                lw = w & (~w + 1)
                pv = _bit_index(lw)
                c &= adj[assign[pv]]
                w ^= lw
            cand[nxt] = c
            pos = nxt
    if pos < 0:
        return None
    return [assign[i] for i in range(k)]


def find_hom(int n, rows, int k, prows):
    """See ``edlab._pykernels.find_hom``; identical contract."""
    cdef uint64_t adj[64]
    cdef uint64_t below[64]
    cdef uint64_t cand[65]
    cdef int assign[64]
    cdef int i, pos, nxt, pv
    cdef uint64_t full, low, c, w, lw
    if k == 0:
        return []
    if n == 0:
        return None
    if n > 64 or k > 64:
        raise ValueError("host too large for kernel (max 64 vertices)")
    full = (<uint64_t> 0xFFFFFFFFFFFFFFFF) if n == 64 else ((<uint64_t> 1 << n) - 1)
    for i in range(n):
        adj[i] = <uint64_t> rows[i]
    for i in range(k):
        below[i] = (<uint64_t> prows[i]) & ((<uint64_t> 1 << i) - 1)
        assign[i] = -1
        cand[i] = 0
    cand[0] = full
    pos = 0
    with nogil:
        while True:
            if cand[pos] == 0:
                pos -= 1
                if pos < 0:
                    break
                continue
            low = cand[pos] & (~cand[pos] + 1)
            cand[pos] ^= low
            assign[pos] = _bit_index(low)
            if pos == k - 1:
                break
            nxt = pos + 1
            c = full
            w = below[nxt]
            while w and c:
                lw = w & (~w + 1)
                pv = _bit_index(lw)
                c &= adj[assign[pv]]
                w ^= lw
            cand[nxt] = c
            pos = nxt
    if pos < 0:
        return None
    return [assign[i] for i in range(k)]


def irregularity_scan(int a, int b, cols):
    """See ``edlab._pykernels.irregularity_scan``; identical contract."""
    cdef int colarr[12]
    cdef int colcnt[12]
    cdef int e_arr[4096]
    cdef int j, sa, sb, e
    cdef long long total = 0, ab
    cdef long long best_num = 0, best_den = 1
    cdef long long s_num, s_den, d_num, d_den, c_num, c_den
    cdef int best_am = 0, best_bm = 0
    cdef int amask, bmask, low, lim_a, lim_b
    cdef bint violated = False
    if a > 12 or b > 12:
        raise ValueError("sides too large for kernel (max 12)")
    if a < 1 or b < 1:
        raise ValueError("sides must be nonempty")
    for j in range(b):
        colarr[j] = <int> cols[j]
        total += edlab_popcount64(<uint64_t> colarr[j])
    ab = a * b
    lim_a = 1 << a
    lim_b = 1 << b
    with nogil:
        for amask in range(1, lim_a):
            sa = edlab_popcount64(<uint64_t> amask)
            for j in range(b):
                colcnt[j] = edlab_popcount64(<uint64_t> (colarr[j] & amask))
            e_arr[0] = 0
            for bmask in range(1, lim_b):
                low = bmask & (-bmask)
                j = _bit_index(<uint64_t> low)
                e = e_arr[bmask ^ low] + colcnt[j]
                e_arr[bmask] = e
                sb = edlab_popcount64(<uint64_t> bmask)
                if sa * b <= sb * a:
                    s_num = sa
                    s_den = a
                else:
                    s_num = sb
                    s_den = b
                d_num = e * ab - total * sa * sb
                if d_num < 0:
                    d_num = -d_num
                d_den = (<long long> sa) * sb * ab
                if s_num * d_den <= d_num * s_den:
                    c_num = s_num
                    c_den = s_den
                else:
                    c_num = d_num
                    c_den = d_den
                if c_num * best_den > best_num * c_den:
                    best_num = c_num
                    best_den = c_den
                    best_am = amask
                    best_bm = bmask
        if best_num > 0:
            for amask in range(1, lim_a):
                sa = edlab_popcount64(<uint64_t> amask)
                if sa * best_den < best_num * a:
                    continue
                for j in range(b):
                    colcnt[j] = edlab_popcount64(<uint64_t> (colarr[j] & amask))
                e_arr[0] = 0
                for bmask in range(1, lim_b):
                    low = bmask & (-bmask)
                    j = _bit_index(<uint64_t> low)
                    e = e_arr[bmask ^ low] + colcnt[j]
                    e_arr[bmask] = e
                    sb = edlab_popcount64(<uint64_t> bmask)
                    if sb * best_den < best_num * b:
                        continue
                    d_num = e * ab - total * sa * sb
                    if d_num < 0:
                        d_num = -d_num
                    if d_num * best_den > best_num * ((<long long> sa) * sb * ab):
                        violated = True
                        break
                if violated:
                    break
    return best_num, best_den, not violated, best_am, best_bm
