"""Micro-benchmarks comparing the compiled and pure-Python kernel backends.

Kernel cases run on every importable backend; the end-to-end case exercises
the full exact oracle on whichever backend is active.  Timings take the
best of ``repeats`` runs to damp scheduler noise.
"""

import random
import time
from dataclasses import dataclass

from . import kernels
from .exact import edit_distance_value
from .families import ForbiddenFamily
from .graphs import Graph
from .selfcheck import random_graph


@dataclass(frozen=True)
class BenchRow:
    name: str
    seconds: dict
    speedup: float = None


@dataclass(frozen=True)
class BenchReport:
    rows: tuple
    active_backend: str

    def to_text(self):
        names = sorted({k for row in self.rows for k in row.seconds})
        header = ["case"] + [f"{n} (s)" for n in names] + ["speedup"]
        lines = ["  ".join(f"{h:>16}" for h in header)]
        for row in self.rows:
            cells = [f"{row.name:>16}"]
            for n in names:
                val = row.seconds.get(n)
                cells.append(f"{val:>16.4f}" if val is not None else f"{'-':>16}")
            cells.append(
                f"{row.speedup:>16.1f}x" if row.speedup is not None else f"{'-':>16}"
            )
            lines.append("  ".join(cells))
        lines.append(f"active backend: {self.active_backend}")
        return "\n".join(lines) + "\n"


def _time_best(fn, repeats):
    best = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def run_benchmarks(repeats=2, seed=7):
    rng = random.Random(seed)
    g13 = random_graph(13, 0.5, rng)
    g18 = random_graph(18, 0.5, rng)
    # K5-free host: the embedding search must exhaust before reporting a miss.
    g32 = Graph.complete_multipartite([8, 8, 8, 8])
    g12 = random_graph(12, 0.5, rng)
    k5 = Graph.complete(5)
    scan_a, scan_b = 9, 9
    scan_cols = [rng.randrange(1 << scan_a) for _ in range(scan_b)]
    backends = kernels.get_backends()
    rows = []

    kernel_cases = [
        ("rcut r=3 n=13", lambda mod: kernels.max_rcut(13, list(g13.rows), 3, impl=mod)),
        ("rcut r=2 n=18", lambda mod: kernels.max_rcut(18, list(g18.rows), 2, impl=mod)),
        (
            "embed K5 miss n=32",
            lambda mod: kernels.find_embedding(g32.n, g32.rows, k5.n, k5.rows, impl=mod),
        ),
        (
            "scan 9x9",
            lambda mod: kernels.irregularity_scan(scan_a, scan_b, scan_cols, impl=mod),
        ),
    ]
    for name, call in kernel_cases:
        seconds = {}
        for bname, mod in backends:
            seconds[bname] = _time_best(lambda m=mod: call(m), repeats)
        speedup = None
        if "cython" in seconds and "python" in seconds and seconds["cython"] > 0:
            speedup = seconds["python"] / seconds["cython"]
        rows.append(BenchRow(name=name, seconds=seconds, speedup=speedup))

    fam = ForbiddenFamily.clique_at_least(3)
    seconds = {
        kernels.backend_name(): _time_best(
            lambda: edit_distance_value(g12, fam), repeats
        )
    }
    rows.append(BenchRow(name="oracle n=12", seconds=seconds))
    return BenchReport(rows=tuple(rows), active_backend=kernels.backend_name())
