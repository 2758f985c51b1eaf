"""Pure-Python reference implementations of the hot kernels.

Same contracts as the compiled extension ``edlab._kernels``; selected at
import time by ``edlab.kernels`` when the extension is unavailable or
``EDLAB_PURE_PYTHON=1``.  These are deliberately straightforward loops: the
compiled module must agree with them bit for bit.

All graphs arrive as bitmask rows (``rows[v]`` = neighbor mask of ``v``);
hosts are capped at 64 vertices by the callers so the compiled twin can use
single machine words.
"""

BACKEND = "python"


def max_rcut(n, rows, r):
    """Maximum r-cut by exhaustive enumeration.

    Returns ``(crossing_edges, assignment)`` where ``assignment[v]`` is the
    class of vertex v in a maximizing partition into at most r classes.
    Vertex 0 is pinned to class 0 (classes are interchangeable), and the
    remaining vertices are swept in mixed-radix reflected Gray order so each
    step moves a single vertex; the first maximum in sweep order is returned.
    """
    m = sum(row.bit_count() for row in rows) // 2
    if n == 0:
        return 0, []
    if r < 1:
        raise ValueError("class count must be >= 1")
    if r == 1 or n == 1:
        return 0, [0] * n
    # cnt[v][c]: neighbors of v currently in class c
    cnt = [[0] * r for _ in range(n)]
    for v in range(n):
        cnt[v][0] = rows[v].bit_count()
    assign = [0] * n
    uncut = m
    best_uncut = uncut
    best_assign = assign[:]
    t = n - 1  # digits for vertices 1..n-1
    digits = [0] * t
    offset = [1] * t  # direction per digit
    focus = list(range(t + 1))
    while True:
        j = focus[0]
        focus[0] = 0
        if j == t:
            break
        old = digits[j]
        new = old + offset[j]
        digits[j] = new
        u = j + 1
        row = rows[u]
        uncut += cnt[u][new] - cnt[u][old]
        assign[u] = new
        w = row
        while w:
            low = w & -w
            x = low.bit_length() - 1
            cnt[x][old] -= 1
            cnt[x][new] += 1
            w ^= low
        if new == 0 or new == r - 1:
            offset[j] = -offset[j]
            focus[j] = focus[j + 1]
            focus[j + 1] = j + 1
        if uncut < best_uncut:
            best_uncut = uncut
            best_assign = assign[:]
    return m - best_uncut, best_assign


def find_embedding(n, rows, k, prows, domains):
    """Injective edge-preserving map of the k-vertex pattern into the host.

    ``domains[i]`` is a bitmask of host vertices allowed for pattern vertex
    i.  Pattern vertices are assigned in index order (callers pre-order
    them); the lexicographically first embedding in that order is returned
    as a list, or None.
    """
    if k == 0:
        return []
    if k > n:
        return None
    below = [prows[i] & ((1 << i) - 1) for i in range(k)]
    assign = [-1] * k
    cand = [0] * k
    cand[0] = domains[0]
    used = 0
    pos = 0
    while True:
        if cand[pos] == 0:
            pos -= 1
            if pos < 0:
                return None
            used ^= 1 << assign[pos]
            continue
        low = cand[pos] & -cand[pos]
        cand[pos] ^= low
        v = low.bit_length() - 1
        assign[pos] = v
        if pos == k - 1:
            return assign[:]
        used |= low
        nxt = pos + 1
        c = domains[nxt] & ~used
        w = below[nxt]
        while w and c:
            lw = w & -w
            c &= rows[assign[lw.bit_length() - 1]]
            w ^= lw
        cand[nxt] = c
        pos = nxt


def find_hom(n, rows, k, prows):
    """Edge-preserving (not necessarily injective) map of the pattern into the host."""
    if k == 0:
        return []
    if n == 0:
        return None
    full = (1 << n) - 1
    below = [prows[i] & ((1 << i) - 1) for i in range(k)]
    assign = [-1] * k
    cand = [0] * k
    cand[0] = full
    pos = 0
    while True:
        if cand[pos] == 0:
            pos -= 1
            if pos < 0:
                return None
            continue
        low = cand[pos] & -cand[pos]
        cand[pos] ^= low
        assign[pos] = low.bit_length() - 1
        if pos == k - 1:
            return assign[:]
        nxt = pos + 1
        c = full
        w = below[nxt]
        while w and c:
            lw = w & -w
            c &= rows[assign[lw.bit_length() - 1]]
            w ^= lw
        cand[nxt] = c
        pos = nxt


def irregularity_scan(a, b, cols):
    """Exact irregularity threshold of a bipartite pair by full subset enumeration.

    ``cols[j]`` is the bitmask over the A side (size a) of B-vertex j's
    neighbors.  Over all nonempty A' x B' the scan maximizes
    min(size-ratio, density-deviation) where size-ratio =
    min(|A'|/a, |B'|/b) and deviation = |d(A',B') - d(A,B)|; the result T is
    the threshold above which the pair is regular.  Returns
    ``(num, den, regular_at_threshold, amask, bmask)`` with T = num/den in
    lowest terms not required (caller normalizes), the attainment flag
    (whether the pair is T-regular at T itself), and one maximizing pair.
    """
    total = sum(col.bit_count() for col in cols)
    ab = a * b
    best_num, best_den = 0, 1
    best_am, best_bm = 0, 0
    colcnt = [0] * b
    for amask in range(1, 1 << a):
        sa = amask.bit_count()
        for j in range(b):
            colcnt[j] = (cols[j] & amask).bit_count()
        e_arr = [0] * (1 << b)
        for bmask in range(1, 1 << b):
            low = bmask & -bmask
            j = low.bit_length() - 1
            e = e_arr[bmask ^ low] + colcnt[j]
            e_arr[bmask] = e
            sb = bmask.bit_count()
            # s = min(sa/a, sb/b); dev = |e*ab - total*sa*sb| / (sa*sb*ab)
            if sa * b <= sb * a:
                s_num, s_den = sa, a
            else:
                s_num, s_den = sb, b
            d_num = e * ab - total * sa * sb
            if d_num < 0:
                d_num = -d_num
            d_den = sa * sb * ab
            # candidate = min(s, dev)
            if s_num * d_den <= d_num * s_den:
                c_num, c_den = s_num, s_den
            else:
                c_num, c_den = d_num, d_den
            if c_num * best_den > best_num * c_den:
                best_num, best_den = c_num, c_den
                best_am, best_bm = amask, bmask
    # attainment: does some pair violate regularity at gamma = T exactly?
    violated = False
    if best_num > 0:
        for amask in range(1, 1 << a):
            sa = amask.bit_count()
            if sa * best_den < best_num * a:
                continue
            for j in range(b):
                colcnt[j] = (cols[j] & amask).bit_count()
            e_arr = [0] * (1 << b)
            for bmask in range(1, 1 << b):
                low = bmask & -bmask
                j = low.bit_length() - 1
                e = e_arr[bmask ^ low] + colcnt[j]
                e_arr[bmask] = e
                sb = bmask.bit_count()
                if sb * best_den < best_num * b:
                    continue
                d_num = e * ab - total * sa * sb
                if d_num < 0:
                    d_num = -d_num
                if d_num * best_den > best_num * sa * sb * ab:
                    violated = True
                    break
            if violated:
                break
    return best_num, best_den, not violated, best_am, best_bm
