"""Compare the compiled quadrature kernels with the numpy fallback.

Times three workloads under each backend and checks that both return the
same numbers:

* adaptive   -- one regularized transit-time integral per call
* transit    -- transit_time over a set of random quartic potentials
* profile    -- building a peaked periodic profile (many small panels)

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--seed S]
"""

import argparse
import timeit

import numpy as np

from travwave import _kernels_py, profile, quad
from travwave.classify import classify_level
from travwave.potential import Potential

try:
    from travwave import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def use(backend):
    quad.kernels = backend
    profile.kernels = backend


def random_cases(seed, n=20):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        c = [0] + list(rng.integers(-5, 6, size=4))
        if c[-1] == 0:
            continue
        F = Potential(c)
        for h in (0.5, 1.0, 2.0):
            ivs = [iv for iv in F.admissible_intervals(h) if iv.kind == "interior"]
            if ivs:
                out.append((F, h, ivs[0]))
                break
    return out


def workloads(cases):
    b_sq = quad.turning_map(Potential([0, 0, 1]), 1.0, 1.0, "left")

    def adaptive():
        b_sq.integrate(0.0, b_sq.s_of_u(0.0), 1e-12)

    def transit():
        return [quad.transit_time(quad.SpeedBranch.make(F, h), *iv.bounds, interval=iv).value for F, h, iv in cases]

    F = Potential([0, -1, 1])
    wave = classify_level(F, 0)[0]

    def build():
        profile.build_profile(F, 0, wave)

    return {"adaptive": adaptive, "transit": transit, "profile": build}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args(argv)

    backends = [("python", _kernels_py)]
    if _kernels_c is not None:
        backends.insert(0, ("cython", _kernels_c))
    else:
        print("compiled kernels not built; timing the fallback only")

    cases = random_cases(args.seed)
    results, values = {}, {}
    for name, mod in backends:
        use(mod)
        w = workloads(cases)
        values[name] = np.array(w["transit"]())
        for key, fn in w.items():
            n = 20 if key == "adaptive" else 1
            t = min(timeit.repeat(fn, number=n, repeat=args.repeat)) / n
            results[(name, key)] = t
    use(_kernels_c or _kernels_py)

    print(f"{'workload':<10} " + " ".join(f"{n:>12}" for n, _ in backends) + ("     speedup" if len(backends) > 1 else ""))
    for key in ("adaptive", "transit", "profile"):
        row = [results[(n, key)] for n, _ in backends]
        line = f"{key:<10} " + " ".join(f"{t * 1e3:10.3f}ms" for t in row)
        if len(row) > 1:
            line += f"  {row[1] / row[0]:9.1f}x"
        print(line)
    if len(backends) > 1:
        diff = float(np.max(np.abs(values["cython"] - values["python"])))
        print(f"max transit-time difference between backends: {diff:.3e}")


if __name__ == "__main__":
    main()
