"""Times the compiled kernels against the numpy fallback on real workloads.

The tree product and vertex batch come from an actual tessellation frame, so
sizes and sparsity match what CharacteristicMap construction runs.  Invoke as
a script; needs the package importable (editable install or PYTHONPATH=src).
"""

import argparse
import time

import numpy as np

from fareyshear._kernels import pure
from fareyshear.farey import shared_tessellation
from fareyshear.shear import _cocycle_frame, _translation_batch

try:
    from fareyshear._kernels import _fast
except ImportError:
    _fast = None


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _workloads(levels, seed):
    rng = np.random.default_rng(seed)
    tess = shared_tessellation(levels)
    frame = _cocycle_frame(tess)
    # +-0.5 keeps every determinant safely positive at the default 15 levels;
    # larger shears push a handful of deep zigzag products past float64.
    tvals = rng.uniform(-0.5, 0.5, size=len(frame["edges"]))
    tmats = _translation_batch(frame["coords"], tvals)
    tmats[0] = np.eye(2)
    mats = pure.tree_cocycles(frame["parents"], tmats)[frame["vtri"]]
    n = mats.shape[0]
    quads = rng.normal(size=(n, 4, 2))
    return [
        ("tree_cocycles", len(frame["edges"]),
         lambda impl: impl.tree_cocycles(frame["parents"], tmats)),
        ("apply_proj_batch", n,
         lambda impl: impl.apply_proj_batch(mats, frame["vpts"])),
        ("shear_quads", n,
         lambda impl: impl.shear_quads(quads)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, default=15,
                    help="tessellation levels for the frame (default 15)")
    ap.add_argument("--repeat", type=int, default=5,
                    help="repetitions per measurement; best is kept")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if _fast is None:
        print("compiled kernels unavailable; timing the fallback only")
    rows = []
    for name, n, run in _workloads(args.levels, args.seed):
        tp = _best(lambda: run(pure), args.repeat)
        if _fast is not None:
            tf = _best(lambda: run(_fast), args.repeat)
            rows.append((name, n, tp, tf, tp / tf))
        else:
            rows.append((name, n, tp, None, None))

    head = f"{'kernel':<18} {'n':>8} {'pure ms':>10} {'compiled ms':>12} {'speedup':>8}"
    print(head)
    print("-" * len(head))
    for name, n, tp, tf, sp in rows:
        if tf is None:
            print(f"{name:<18} {n:>8} {tp * 1e3:>10.3f} {'-':>12} {'-':>8}")
        else:
            print(f"{name:<18} {n:>8} {tp * 1e3:>10.3f} {tf * 1e3:>12.3f} {sp:>7.1f}x")


if __name__ == "__main__":
    main()
