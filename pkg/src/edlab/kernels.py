"""Backend selection and friendly wrappers around the hot kernels.

At import time this module picks the compiled extension ``edlab._kernels``
when it is importable, falling back to the pure-Python reference
``edlab._pykernels``.  Setting the environment variable
``EDLAB_PURE_PYTHON=1`` forces the fallback (useful for parity testing and
benchmarks).  Both backends implement identical contracts, including
enumeration order and tie-breaking, so results never depend on the backend.

The wrappers here add the pattern-ordering heuristics and size guards that
both backends rely on.
"""

import os

from . import _pykernels
from .errors import SizeLimitExceeded

_FORCE_PURE = os.environ.get("EDLAB_PURE_PYTHON", "") not in ("", "0")

if _FORCE_PURE:
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on build environment
        _impl = _pykernels

BACKEND = _impl.BACKEND

MAX_HOST_VERTICES = 64
MAX_SCAN_SIDE = 12
RCUT_STEP_BUDGET = 50_000_000


def backend_name():
    """Name of the active kernel backend ('cython' or 'python')."""
    return BACKEND


def get_backends():
    """All importable backends as (name, module) pairs, compiled first."""
    out = []
    if _impl is not _pykernels:
        out.append((_impl.BACKEND, _impl))
    else:
        try:
            from . import _kernels  # type: ignore[attr-defined]

            out.append((_kernels.BACKEND, _kernels))
        except ImportError:
            pass
    out.append((_pykernels.BACKEND, _pykernels))
    return out


def _check_host(n):
    if n > MAX_HOST_VERTICES:
        raise SizeLimitExceeded(
            "host graph too large for the bitmask kernels",
            cap_name="kernel-host-vertices",
            limit=MAX_HOST_VERTICES,
            actual=n,
        )


def max_rcut(n, rows, r, *, impl=None):
    """Maximum number of crossing edges over partitions into at most r classes.

    Exhaustive and exact; enumeration cost is r**(n-1) single-vertex moves,
    guarded by a fixed step budget.  Returns ``(crossing, assignment)``.
    """
    _check_host(n)
    if r < 1:
        raise ValueError("class count must be >= 1")
    if r > 8 and n > 1:
        raise SizeLimitExceeded(
            "exhaustive r-cut supports at most 8 classes",
            cap_name="rcut-classes",
            limit=8,
            actual=r,
        )
    if n > 1 and r > 1:
        steps = r ** (n - 1)
        if steps > RCUT_STEP_BUDGET:
            raise SizeLimitExceeded(
                "exhaustive r-cut enumeration over budget",
                cap_name="rcut-steps",
                limit=RCUT_STEP_BUDGET,
                actual=steps,
            )
    mod = impl if impl is not None else _impl
    cut, assign = mod.max_rcut(n, list(rows), min(r, max(1, n)))
    return cut, list(assign)


def _pattern_order(k, prows):
    """BFS order from a maximum-degree vertex, visiting high-degree first.

    Keeps each newly assigned pattern vertex adjacent to an earlier one
    whenever the pattern is connected, which keeps candidate sets small.
    """
    if k == 0:
        return []
    deg = [prows[i].bit_count() for i in range(k)]
    seen = [False] * k
    order = []
    remaining = sorted(range(k), key=lambda i: (-deg[i], i))
    for root in remaining:
        if seen[root]:
            continue
        queue = [root]
        seen[root] = True
        while queue:
            queue.sort(key=lambda i: (-deg[i], i))
            v = queue.pop(0)
            order.append(v)
            w = prows[v]
            while w:
                low = w & -w
                u = low.bit_length() - 1
                if not seen[u]:
                    seen[u] = True
                    queue.append(u)
                w ^= low
    return order


def _relabel_pattern(k, prows, order):
    """Rows of the pattern relabeled so order[i] becomes vertex i."""
    pos = [0] * k
    for i, v in enumerate(order):
        pos[v] = i
    new_rows = [0] * k
    for v in range(k):
        w = prows[v]
        mask = 0
        while w:
            low = w & -w
            mask |= 1 << pos[low.bit_length() - 1]
            w ^= low
        new_rows[pos[v]] = mask
    return new_rows


def find_embedding(n, rows, k, prows, domains=None, *, impl=None):
    """Injective edge-preserving map of the pattern into the host.

    ``domains`` optionally restricts each pattern vertex to a bitmask of
    allowed host vertices.  Returns a list ``image`` with ``image[i]`` the
    host vertex of pattern vertex i, or None if no embedding exists.
    """
    _check_host(n)
    if k == 0:
        return []
    if k > n:
        return None
    full = (1 << n) - 1
    if domains is None:
        doms = [full] * k
    else:
        doms = [d & full for d in domains]
    host_deg = [rows[v].bit_count() for v in range(n)]
    order = _pattern_order(k, prows)
    p2 = _relabel_pattern(k, prows, order)
    d2 = [0] * k
    for i, v in enumerate(order):
        need = prows[v].bit_count()
        allowed = doms[v]
        mask = 0
        w = allowed
        while w:
            low = w & -w
            hv = low.bit_length() - 1
            if host_deg[hv] >= need:
                mask |= low
            w ^= low
        d2[i] = mask
    mod = impl if impl is not None else _impl
    res = mod.find_embedding(n, list(rows), k, p2, d2)
    if res is None:
        return None
    image = [0] * k
    for i, v in enumerate(order):
        image[v] = res[i]
    return image


def find_hom(n, rows, k, prows, *, impl=None):
    """Edge-preserving map (vertices may merge) of the pattern into the host."""
    _check_host(n)
    if k == 0:
        return []
    if n == 0:
        return None
    order = _pattern_order(k, prows)
    p2 = _relabel_pattern(k, prows, order)
    mod = impl if impl is not None else _impl
    res = mod.find_hom(n, list(rows), k, p2)
    if res is None:
        return None
    image = [0] * k
    for i, v in enumerate(order):
        image[v] = res[i]
    return image


def irregularity_scan(a, b, cols, *, impl=None):
    """Exact irregularity threshold of a bipartite pair (sides up to 12).

    Returns ``(num, den, regular_at_threshold, amask, bmask)``.
    """
    if a > MAX_SCAN_SIDE or b > MAX_SCAN_SIDE:
        raise SizeLimitExceeded(
            "exhaustive irregularity scan over budget",
            cap_name="scan-side",
            limit=MAX_SCAN_SIDE,
            actual=max(a, b),
        )
    if a < 1 or b < 1:
        raise ValueError("sides must be nonempty")
    mod = impl if impl is not None else _impl
    return mod.irregularity_scan(a, b, list(cols))
