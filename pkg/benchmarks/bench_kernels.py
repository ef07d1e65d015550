"""Compare the compiled and numpy refinement kernels.

Runs a micro-benchmark of the per-trial kernels (project, project_grad) at
several array sizes and an end-to-end estimate workload with each backend
patched in.  Usage::

    python3 benchmarks/bench_kernels.py [--repeat 2000] [--trials 100]
"""
import argparse
import timeit

import numpy as np

import hfce.estimator as est
from hfce import kernels
from hfce.channel import SystemConfig, fresnel_coefficients, sample_scene
from hfce.dictionary import build_hybrid_dictionary
from hfce.observation import PilotConfig, observe


def micro(backends, sizes, repeat):
    rng = np.random.default_rng(0)
    print(f"{'N':>6s} {'kernel':>14s} " + " ".join(f"{name:>12s}" for name in backends) + "   speedup")
    for n in sizes:
        lin, quad = fresnel_coefficients(SystemConfig(n_antennas=n, distance_range=(0.5, 500.0)))
        r = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        for label, call in (("project", lambda k: k.project(lin, quad, 0.3, 0.01, r)),
                            ("project_grad", lambda k: k.project_grad(lin, quad, 0.3, 0.01, r, 0))):
            times = {name: min(timeit.repeat(lambda: call(mod), number=repeat, repeat=3)) / repeat
                     for name, mod in backends.items()}
            speed = times["python"] / times["cython"] if "cython" in times else float("nan")
            print(f"{n:6d} {label:>14s} " + " ".join(f"{t * 1e6:10.2f}us" for t in times.values())
                  + f"   {speed:6.2f}x")


def workload(backends, trials):
    cfg = SystemConfig(n_antennas=256, n_paths=10)
    d = build_hybrid_dictionary(cfg, 256, 256, 1)
    scenes = [sample_scene(cfg, k) for k in range(trials)]
    obs = [observe(s.channel, PilotConfig(1, s.power / 100), 1000 + k) for k, s in enumerate(scenes)]
    original = est.kernels
    results = {}
    try:
        for name, mod in backends.items():
            est.kernels = mod
            runs = [lambda y=y: est.estimate(y, d, est.EstimatorParams(epsilon=y.pilot.noise_variance), cfg)
                    for y in obs]
            t = min(timeit.repeat(lambda: [f() for f in runs], number=1, repeat=3))
            results[name] = t / trials
    finally:
        est.kernels = original
    print(f"\nestimate() at N=256, Q=512, 20 dB, {trials} scenes:")
    for name, t in results.items():
        print(f"  {name:>8s}: {t * 1e3:8.3f} ms per call")
    if "cython" in results:
        print(f"  speedup: {results['python'] / results['cython']:.2f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=2000)
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--sizes", type=int, nargs="+", default=[64, 256, 1024])
    args = parser.parse_args()
    backends = kernels.backends()
    print(f"default backend: {kernels.BACKEND}; available: {', '.join(backends)}\n")
    micro(backends, args.sizes, args.repeat)
    workload(backends, args.trials)


if __name__ == "__main__":
    main()
