"""Command-line entry point: ``hfce {generate,estimate,sweep,complexity}``."""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from .baselines import empirical_covariance
from .channel import sample_scene
from .dictionary import build_hybrid_dictionary
from .harness import complexity as cx
from .harness.config import ConfigError, load_sweep_spec
from .harness.metrics import nmse, to_db
from .harness.persistence import load_scene, plot_data_path, save_scene, write_results
from .harness.sweep import RUNNERS, SCHEMES, _Context, run_sweep, trial_seed
from .observation import PilotConfig, observe, sigma_for_snr


def _spec_from_args(args, **overrides):
    return load_sweep_spec(args.config, args.profile, **overrides)


def cmd_generate(args):
    spec = _spec_from_args(args)
    scene = sample_scene(spec.system, args.seed)
    save_scene(scene, args.out)
    kinds = [p.kind.value for p in scene.paths]
    print(f"wrote {args.out}: N={spec.system.n_antennas} paths={len(kinds)} "
          f"(far={kinds.count('far')} near={kinds.count('near')} los={kinds.count('los')})")


def cmd_estimate(args):
    scene = load_scene(args.scene)
    spec = _spec_from_args(args, system=scene.config)
    system = scene.config
    if args.sigma2 is not None:
        var = args.sigma2
    else:
        # SNR is referred to this realization's own per-antenna power
        var = sigma_for_snr(args.snr, spec.pilot_length, scene.power / system.n_antennas)
    obs = observe(scene.channel, PilotConfig(spec.pilot_length, var), args.seed)
    dictionary = build_hybrid_dictionary(system, spec.q_far, spec.q_angle, spec.n_rings)
    cov = None
    if args.scheme == "mmse":
        train = [sample_scene(system, trial_seed(args.seed, 2, k)) for k in range(spec.n_train)]
        cov = empirical_covariance(train)
    h_hat, iterations = RUNNERS[args.scheme](obs, _Context(spec, dictionary, cov))
    err = nmse(h_hat, scene.channel)
    print(f"scheme={args.scheme} sigma2={var:.6g} nmse={err:.6e} nmse_db={to_db(err):.3f} "
          f"iterations={iterations}")


def cmd_sweep(args):
    overrides = {}
    if args.trials is not None:
        overrides["n_trials"] = args.trials
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.no_timing:
        overrides["timing"] = False
    spec = _spec_from_args(args, **overrides)
    output = args.output or spec.output_path or "results.csv"
    spec = replace(spec, output_path=output)
    result = run_sweep(spec)
    write_results(result, output)
    for r in result.rows:
        print(f"{r.scheme:>14s} {r.snr_db:6.1f} dB  nmse={to_db(r.mean_nmse):8.3f} dB  "
              f"iters={r.mean_iterations:5.2f}  t={r.mean_runtime_s:.3e} s  failures={r.failures}")
    print(f"wrote {output} and {plot_data_path(output)}")


def _parse_params(items):
    params = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"expected KEY=VALUE, got {item!r}")
        v = float(value)
        params[key.strip()] = int(v) if v.is_integer() else v
    return params


def cmd_complexity(args):
    params = _parse_params(args.params)
    schemes = sorted(cx.FORMULAS) if args.scheme == "all" else [args.scheme]
    for s in schemes:
        try:
            value = cx.complexity_eval(s, params)
        except ValueError as exc:
            if args.scheme != "all":
                raise
            print(f"{s:>16s}  skipped ({exc})")
            continue
        print(f"{s:>16s}  {value:.0f}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hfce", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("--config", help="INI file (see hfce.harness.config)")
        p.add_argument("--profile", choices=("table1", "desk"), help="built-in base profile")

    p = sub.add_parser("generate", help="sample one scene and write it as JSON")
    add_config(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("estimate", help="run one scheme on one noisy observation of a scene")
    add_config(p)
    p.add_argument("--scene", required=True)
    p.add_argument("--scheme", choices=SCHEMES, default="eps-omp-ssigw")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--snr", type=float, default=10.0, help="SNR in dB (default 10)")
    g.add_argument("--sigma2", type=float, help="noise variance, overrides --snr")
    p.add_argument("--seed", type=int, default=0, help="noise seed")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("sweep", help="Monte-Carlo NMSE sweep to CSV + plot data")
    add_config(p)
    p.add_argument("--output")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--no-timing", action="store_true", help="record zero runtimes (byte-stable output)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("complexity", help="evaluate operation-count formulas")
    p.add_argument("--scheme", choices=sorted(cx.FORMULAS) + ["all"], default="all")
    p.add_argument("params", nargs="*", metavar="KEY=VALUE", help="e.g. N=256 Q=512 i=10 B=1 N_iter=5")
    p.set_defaults(func=cmd_complexity)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ConfigError, ValueError, KeyError, OSError, np.linalg.LinAlgError) as exc:
        print(f"hfce: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
