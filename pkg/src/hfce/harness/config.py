"""INI sweep configuration.

Sections and keys (symbols follow the usual notation)::

    [system]     N, f_c, d, L, gamma, kappa, r_min, r_max, theta_min, theta_max
    [dictionary] Q_F, q_angle, n_rings
    [estimator]  epsilon, i_max, n_iter, zeta_theta, zeta_rho, zeta_th, tau_th
    [pilot]      tau
    [sweep]      snr_db, snr_reference, trials, schemes, seed, output, n_train, timing

``epsilon`` is either a number or a multiple of the noise variance written
``sigma2`` / ``0.9*sigma2``.  ``snr_reference`` is ``array`` (SNR is
``tau*E||h||^2/sigma^2``) or ``antenna`` (the same divided by N).
"""
from __future__ import annotations

import configparser
import re
from importlib import resources
from pathlib import Path

from ..channel import SystemConfig
from ..estimator import EstimatorParams
from .sweep import SweepSpec

PROFILES = ("table1", "desk")

_SIGMA = re.compile(r"^\s*(?:([0-9.eE+-]+)\s*\*\s*)?sigma2\s*$")


class ConfigError(ValueError):
    pass


def parse_epsilon(text: str) -> tuple[float | None, float]:
    """Return ``(scale, absolute)``; exactly one is meaningful."""
    m = _SIGMA.match(text)
    if m:
        return (float(m.group(1)) if m.group(1) else 1.0), 0.0
    try:
        return None, float(text)
    except ValueError:
        raise ConfigError(f"epsilon must be a number or '<k>*sigma2', got {text!r}") from None


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.replace(",", " ").split())


def profile_path(name: str) -> Path:
    if name not in PROFILES:
        raise ConfigError(f"unknown profile {name!r}; choose from {PROFILES}")
    return Path(str(resources.files("hfce") / "profiles" / f"{name}.ini"))


def read_parser(path=None, profile: str | None = None) -> configparser.ConfigParser:
    parser = configparser.ConfigParser()
    parser.optionxform = str  # keys are case sensitive (Q_F, N, ...)
    if profile is not None:
        parser.read(profile_path(profile))
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            parser.read(path)
        except configparser.Error as exc:
            raise ConfigError(f"malformed config {path}: {exc}") from exc
    return parser


def system_from_parser(p: configparser.ConfigParser) -> SystemConfig:
    s = p["system"] if p.has_section("system") else {}
    d = s.get("d")
    return SystemConfig(
        n_antennas=int(s.get("N", 256)),
        carrier_freq=float(s.get("f_c", 30e9)),
        element_spacing=float(d) if d not in (None, "", "auto") else None,
        n_paths=int(s.get("L", 10)),
        ff_ratio=float(s.get("gamma", 0.5)),
        rician_kappa=float(s.get("kappa", 0.0)),
        distance_range=(float(s.get("r_min", 10.0)), float(s.get("r_max", 500.0))),
        angle_range=(float(s.get("theta_min", -1.0)), float(s.get("theta_max", 1.0))),
    )


def estimator_from_parser(p: configparser.ConfigParser) -> tuple[EstimatorParams, float | None]:
    e = p["estimator"] if p.has_section("estimator") else {}
    scale, absolute = parse_epsilon(e.get("epsilon", "sigma2"))
    params = EstimatorParams(
        epsilon=absolute,
        max_outer_iters=int(e.get("i_max", 20)),
        n_refine_iters=int(e.get("n_iter", 5)),
        step_theta=float(e.get("zeta_theta", 5e-4)),
        step_rho=float(e.get("zeta_rho", 5e-4)),
        step_floor=float(e.get("zeta_th", 1e-5)),
        gain_tol=float(e.get("tau_th", 1e-1)),
    )
    return params, scale


def load_sweep_spec(path=None, profile: str | None = None, **overrides) -> SweepSpec:
    """Build a :class:`SweepSpec` from a profile and/or an INI file (file keys win)."""
    if path is None and profile is None:
        profile = "table1"
    p = read_parser(path, profile)
    try:
        system = system_from_parser(p)
        params, scale = estimator_from_parser(p)
        dic = p["dictionary"] if p.has_section("dictionary") else {}
        sw = p["sweep"] if p.has_section("sweep") else {}
        pilot = p["pilot"] if p.has_section("pilot") else {}
        q_far = int(dic.get("Q_F", system.n_antennas))
        kwargs = dict(
            system=system,
            estimator_params=params,
            snr_grid_db=_floats(sw.get("snr_db", "0 5 10 15 20")),
            n_trials=int(sw.get("trials", 100)),
            schemes=tuple(sw.get("schemes", "eps-omp-ssigw").replace(",", " ").split()),
            seed=int(sw.get("seed", 0)),
            output_path=sw.get("output") or None,
            q_far=q_far,
            q_angle=int(dic.get("q_angle", q_far)),
            n_rings=int(dic.get("n_rings", 1)),
            pilot_length=int(pilot.get("tau", 1)),
            epsilon_scale=scale,
            n_train=int(sw.get("n_train", 1000)),
            timing=str(sw.get("timing", "true")).lower() in ("1", "true", "yes", "on"),
            snr_reference=sw.get("snr_reference", "array"),
        )
        kwargs.update(overrides)
        return SweepSpec(**kwargs)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad configuration: {exc}") from exc
