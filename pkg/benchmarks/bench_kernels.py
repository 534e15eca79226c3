"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--points 4096]

Each kernel is timed with timeit (best of ``repeat``); the last row times a
full imaginary-time ground-state solve of the bundled preset with the
selected backend swapped in.
"""
import argparse
import timeit

import numpy as np

from qpcavity import kernels
from qpcavity.config import load_preset
from qpcavity.ground import solve_ground_state


def _best(fn, number, repeat):
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def bench(name, points, repeat):
    mod = kernels.get_backend(name)
    rng = np.random.default_rng(0)
    psi0 = rng.random(points)
    V = rng.random(points)
    f = np.empty(points)
    x = np.linspace(-20, 5, points)
    E = np.linspace(1.0, 400.0, points)
    out = {}

    def step():
        psi = psi0.copy()
        mod.potential_half_step(psi, V, 50.0, 5e-4, f)
        mod.apply_factor_normalize(psi, f, 0.01)

    out["potential_half_step+normalize"] = _best(step, 200, repeat)
    ai, aip = np.empty(points), np.empty(points)
    out["airy_pair"] = _best(lambda: mod.airy_pair(x, ai, aip), 20, repeat)
    res = np.empty(points)
    out["spectrum_condition"] = _best(lambda: mod.spectrum_condition(E, 700.0, res), 20, repeat)

    cfg = load_preset()
    sc = cfg.scales()
    saved = kernels._impl
    kernels._impl = mod
    try:
        out["ground_state_solve"] = _best(
            lambda: solve_ground_state(cfg.trap, sc, cfg.grid.grid(sc), cfg.grid.options()),
            1, max(1, repeat // 2))
    finally:
        kernels._impl = saved
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=4096)
    args = ap.parse_args(argv)
    names = kernels.available_backends()
    results = {n: bench(n, args.points, args.repeat) for n in names}
    keys = list(results[names[0]])
    print(f"{'kernel':32s}" + "".join(f"{n:>14s}" for n in names)
          + ("     speedup" if "python" in names and len(names) > 1 else ""))
    for k in keys:
        row = f"{k:32s}" + "".join(f"{results[n][k] * 1e6:12.1f}us" for n in names)
        if "python" in names and "cython" in names:
            row += f"{results['python'][k] / results['cython'][k]:11.2f}x"
        print(row)


if __name__ == "__main__":
    main()
