"""Compare the compiled row-reduction kernel against the pure-Python one.

The compiled kernel does 64-bit rational arithmetic and automatically falls
back to the pure kernel on overflow, so it pays off exactly on the matrices
this library actually reduces: bar-differential matrices, whose entries stay
tiny.  The benchmark therefore times the two kernels head to head on real
differential matrices harvested from a bar model, then times a full Ext
computation under each backend.  Run from the repository root:

    python3 benchmarks/bench_rref.py
"""

import time
from fractions import Fraction

from quiveralg import linalg
from quiveralg import _kernels_py
from quiveralg.barmodel import BarModel
from quiveralg.dsl import parse_text

try:
    from quiveralg import _kernels
except ImportError:
    _kernels = None

TWO_LOOPS = """\
nodes: 1
arrow x: 0 -> 0 deg 1
arrow y: 0 -> 0 deg 1
rel c: x*y - y*x
"""

THREE_LOOPS = """\
nodes: 1
arrow x: 0 -> 0 deg 1
arrow y: 0 -> 0 deg 1
arrow z: 0 -> 0 deg 1
rel a: x*y - y*x
rel b: x*z - z*x
rel c: y*z - z*y
"""


def harvest_matrices(text, max_degree):
    """Dense bar-differential matrices of a model, largest first."""
    model = BarModel(parse_text(text).presentation(), max_degree)
    quiver = model.quiver
    out = []
    for d in range(1, max_degree + 1):
        for i in range(quiver.node_count):
            for j in range(quiver.node_count):
                for t in range(2, d + 1):
                    cols = len(model.words(d, i, j, t - 1))
                    sparse = model.dmat(d, i, j, t)
                    if not sparse or not cols:
                        continue
                    rows = [
                        [Fraction(row.get(c, 0)) for c in range(cols)]
                        for row in sparse
                    ]
                    out.append(rows)
    out.sort(key=lambda rows: -(len(rows) * len(rows[0])))
    return out


def best_of(fn, repeats):
    times = []
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def bench_kernels():
    print("bar-differential matrices, dense RREF, best of 3:")
    print(f"{'model':>12} {'matrices':>9} {'pure (s)':>10} "
          f"{'compiled (s)':>13} {'speedup':>8}")
    for tag, text, max_degree, top in [
        ("two-loop", TWO_LOOPS, 7, 40),
        ("three-loop", THREE_LOOPS, 5, 40),
    ]:
        batch = harvest_matrices(text, max_degree)[:top]

        def run(kernel):
            results = []
            for rows in batch:
                results.append(kernel(
                    [list(r) for r in rows], len(rows[0])
                ))
            return results

        t_pure, out_pure = best_of(lambda: run(_kernels_py.rref_dense), 3)
        if _kernels is None:
            print(f"{tag:>12} {len(batch):>9} {t_pure:>10.4f} {'n/a':>13}")
            continue
        t_fast, out_fast = best_of(lambda: run(_kernels.rref_dense), 3)
        assert out_pure == out_fast, "backends disagree"
        print(f"{tag:>12} {len(batch):>9} {t_pure:>10.4f} "
              f"{t_fast:>13.4f} {t_pure / t_fast:>7.1f}x")


def bench_end_to_end():
    from quiveralg.ainf import ext_groups

    print("\nend to end: Ext groups of the three-loop algebra to "
          "degree 5:")
    presentation = parse_text(THREE_LOOPS).presentation()
    for backend in ("pure", "compiled"):
        if backend == "compiled" and _kernels is None:
            print("  compiled: extension not built, skipped")
            continue
        linalg.BACKEND = backend
        start = time.perf_counter()
        bimod = ext_groups(presentation, 5)
        elapsed = time.perf_counter() - start
        dims = tuple(bimod.total_dim(k) for k in range(4))
        print(f"  {backend:>8}: {elapsed:.3f} s (dims {dims})")
    linalg.BACKEND = (
        "compiled" if (_kernels is not None and not linalg.PURE) else "pure"
    )


if __name__ == "__main__":
    print(f"default backend: {linalg.BACKEND}")
    bench_kernels()
    bench_end_to_end()
