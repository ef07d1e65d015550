"""Monte-Carlo NMSE-versus-SNR sweeps."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from ..baselines import empirical_covariance, ff_omp, hf_omp_gamma, ls_estimate, mmse_estimate
from ..channel import Scene, SystemConfig, sample_scene
from ..dictionary import HybridDictionary, build_hybrid_dictionary
from ..estimator import EstimatorParams, estimate
from ..observation import PilotConfig, observe, sigma_for_snr
from .metrics import nmse

SCHEMES = ("eps-omp-ssigw", "eps-omp", "ls", "mmse", "ff-omp", "hf-omp-gamma")

# stream tags for the seed-splitting rule SeedSequence([seed, tag, index])
_SCENE, _NOISE, _TRAIN = 0, 1, 2


@dataclass(frozen=True)
class SweepSpec:
    system: SystemConfig
    estimator_params: EstimatorParams
    snr_grid_db: tuple[float, ...]
    n_trials: int
    schemes: tuple[str, ...] = ("eps-omp-ssigw",)
    seed: int = 0
    output_path: str | None = None
    q_far: int = 256
    q_angle: int = 256
    n_rings: int = 1
    pilot_length: int = 1
    # epsilon = epsilon_scale * sigma^2 per SNR point; None uses estimator_params.epsilon as is
    epsilon_scale: float | None = 1.0
    n_train: int = 1000
    timing: bool = True
    # "array": SNR = tau*E||h||^2/sigma^2 (post-combining); "antenna": tau*E||h||^2/(N*sigma^2)
    snr_reference: str = "array"
    scene_fn: Callable[[SystemConfig, np.random.SeedSequence], Scene] = field(default=sample_scene, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "snr_grid_db", tuple(float(s) for s in self.snr_grid_db))
        object.__setattr__(self, "schemes", tuple(self.schemes))
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")
        if not self.snr_grid_db:
            raise ValueError("SNR grid must not be empty")
        unknown = [s for s in self.schemes if s not in SCHEMES]
        if unknown:
            raise ValueError(f"unknown schemes {unknown}; choose from {list(SCHEMES)}")
        if len(set(self.schemes)) != len(self.schemes):
            raise ValueError("schemes must be unique")
        if self.n_train < 2:
            raise ValueError("n_train must be >= 2")
        if self.snr_reference not in ("array", "antenna"):
            raise ValueError(f"snr_reference must be 'array' or 'antenna', got {self.snr_reference!r}")


@dataclass(frozen=True)
class SweepRow:
    scheme: str
    snr_db: float
    mean_nmse: float
    mean_iterations: float
    mean_runtime_s: float
    trials: int
    stderr_nmse: float = 0.0
    failures: int = 0


@dataclass
class SweepResult:
    rows: list[SweepRow]

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda r: (r.scheme, r.snr_db))

    def row(self, scheme: str, snr_db: float) -> SweepRow:
        for r in self.rows:
            if r.scheme == scheme and r.snr_db == snr_db:
                return r
        raise KeyError((scheme, snr_db))

    def curve(self, scheme: str, key: str = "mean_nmse") -> list[float]:
        return [getattr(r, key) for r in self.rows if r.scheme == scheme]


@dataclass
class _Context:
    spec: SweepSpec
    dictionary: HybridDictionary
    covariance: object = None


def _run_eps(obs, ctx, n_iter=None):
    params = ctx.spec.estimator_params
    if ctx.spec.epsilon_scale is not None:
        params = replace(params, epsilon=ctx.spec.epsilon_scale * obs.pilot.noise_variance)
    if n_iter is not None:
        params = replace(params, n_refine_iters=n_iter)
    res = estimate(obs, ctx.dictionary, params, ctx.spec.system)
    return res.h_hat, res.iterations


def _run_ff_omp(obs, ctx):
    res = ff_omp(obs, ctx.dictionary, ctx.spec.system.n_paths)
    return res.h_hat, res.iterations


def _run_hf_omp(obs, ctx):
    system = ctx.spec.system
    res = hf_omp_gamma(obs, ctx.dictionary, system.n_paths, system.ff_ratio)
    return res.h_hat, res.iterations


RUNNERS = {
    "eps-omp-ssigw": _run_eps,
    "eps-omp": lambda obs, ctx: _run_eps(obs, ctx, n_iter=0),
    "ls": lambda obs, ctx: (ls_estimate(obs), 0),
    "mmse": lambda obs, ctx: (mmse_estimate(obs, ctx.covariance), 0),
    "ff-omp": _run_ff_omp,
    "hf-omp-gamma": _run_hf_omp,
}


def trial_seed(seed: int, stream: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, stream, index])


def calibrate(spec: SweepSpec):
    """Training scenes: the reference signal power (for SNR) and the LMMSE covariance.

    The power is the mean per-antenna power ``E||h||^2/N`` for the
    ``"antenna"`` reference and the full ``E||h||^2`` for ``"array"``.
    """
    train = [sample_scene(spec.system, trial_seed(spec.seed, _TRAIN, k)) for k in range(spec.n_train)]
    avg_power = float(np.mean([s.power for s in train]))
    if spec.snr_reference == "antenna":
        avg_power /= spec.system.n_antennas
    cov = empirical_covariance(train) if "mmse" in spec.schemes else None
    return avg_power, cov


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Run every scheme on identical observations at every SNR point.

    Scenes depend only on ``(seed, trial)`` and the unit noise draw only on
    ``(seed, trial)`` as well, so all SNR points share realizations.  A
    scheme that raises is counted in ``failures`` and excluded from means.
    """
    system = spec.system
    dictionary = build_hybrid_dictionary(system, spec.q_far, spec.q_angle, spec.n_rings)
    avg_power, cov = calibrate(spec)
    ctx = _Context(spec, dictionary, cov)
    sigmas = [sigma_for_snr(snr, spec.pilot_length, avg_power) for snr in spec.snr_grid_db]

    acc = {(s, k): ([], [], [], [0]) for s in spec.schemes for k in range(len(sigmas))}
    for t in range(spec.n_trials):
        scene = spec.scene_fn(system, trial_seed(spec.seed, _SCENE, t))
        noise_seed = trial_seed(spec.seed, _NOISE, t)
        for k, var in enumerate(sigmas):
            obs = observe(scene.channel, PilotConfig(spec.pilot_length, var), noise_seed)
            for scheme in spec.schemes:
                errs, iters, times, failed = acc[scheme, k]
                start = time.perf_counter() if spec.timing else 0.0
                try:
                    h_hat, n_it = RUNNERS[scheme](obs, ctx)
                except Exception:  # recorded per row; the sweep keeps going
                    failed[0] += 1
                    continue
                times.append(time.perf_counter() - start if spec.timing else 0.0)
                errs.append(nmse(h_hat, scene.channel))
                iters.append(n_it)

    rows = []
    for (scheme, k), (errs, iters, times, failed) in acc.items():
        n = len(errs)
        mean = float(np.mean(errs)) if n else math.nan
        stderr = float(np.std(errs, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
        rows.append(SweepRow(
            scheme=scheme,
            snr_db=spec.snr_grid_db[k],
            mean_nmse=mean,
            mean_iterations=float(np.mean(iters)) if n else math.nan,
            mean_runtime_s=float(np.mean(times)) if n else math.nan,
            trials=n,
            stderr_nmse=stderr,
            failures=failed[0],
        ))
    return SweepResult(rows)
