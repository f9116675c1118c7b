"""Compare the compiled and numpy depth kernels.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from socialfov import _kernels_py

try:
    from socialfov import _kernels
except ImportError:
    _kernels = None


def cases(rng):
    data = rng.integers(0, 8000, (720, 1280)).astype(np.uint16)
    data[rng.random(data.shape) < 0.2] = 0
    us = rng.integers(0, 1280, 17)
    vs = rng.integers(0, 720, 17)
    many = list(zip(rng.integers(0, 1280, 1000).tolist(), rng.integers(0, 720, 1000).tolist()))
    centers = rng.uniform(0, 1280, 15), rng.uniform(0, 720, 15)
    depths = rng.integers(500, 6000, 15)
    return {
        "disk_min x1000": lambda m: [m.disk_min(data, u, v, 5) for u, v in many],
        "disk_min_many (17 joints)": lambda m: m.disk_min_many(data, us, vs, 5),
        "render_disks 1280x720": lambda m: m.render_disks(np.full((720, 1280), 10000, np.uint16), *centers, depths, 8.0),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5, help="timing repeats, best is reported (default 5)")
    args = ap.parse_args()
    mods = {"python": _kernels_py}
    if _kernels is not None:
        mods["cython"] = _kernels
    else:
        print("compiled extension not built; timing the numpy fallback only")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<28}" + "".join(f"{n:>14}" for n in mods) + ("   speedup" if len(mods) == 2 else ""))
    for name, fn in cases(rng).items():
        best = {n: min(timeit.repeat(lambda: fn(m), number=20, repeat=args.repeat)) / 20 for n, m in mods.items()}
        row = f"{name:<28}" + "".join(f"{best[n] * 1e6:>11.1f} us" for n in mods)
        if len(mods) == 2:
            row += f"   {best['python'] / best['cython']:7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
