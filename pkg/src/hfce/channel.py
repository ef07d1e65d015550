"""Hybrid-field ULA channel model.

Sign convention: every steering model in this module uses the far-field
phase sign ``exp(-j*pi*(n-1)*theta)``.  The near-field models (exact spherical
and second-order Fresnel) place element ``n`` at the centered position
``delta_n = (n - 1 - (N - 1)/2) * d`` and are oriented so that their
``rho -> 0`` limit is the far-field vector at the *same* angle, up to a global
unit-modulus phase.  Angles are always sine-of-angle values in [-1, 1].
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

SPEED_OF_LIGHT = 3e8


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class SystemConfig:
    """Array geometry, carrier and scene-generation ranges.

    ``n_paths``, ``ff_ratio`` and the sampling ranges are only used to draw
    synthetic scenes; estimators never see them.
    """

    n_antennas: int = 256
    carrier_freq: float = 30e9
    element_spacing: float | None = None
    n_paths: int = 10
    ff_ratio: float = 0.5
    rician_kappa: float = 0.0
    distance_range: tuple[float, float] = (10.0, 500.0)
    angle_range: tuple[float, float] = (-1.0, 1.0)

    def __post_init__(self):
        if self.n_antennas < 2:
            raise ValueError(f"n_antennas must be >= 2, got {self.n_antennas}")
        if not self.carrier_freq > 0:
            raise ValueError("carrier_freq must be positive")
        if self.element_spacing is None:
            object.__setattr__(self, "element_spacing", self.wavelength / 2)
        elif not self.element_spacing > 0:
            raise ValueError("element_spacing must be positive")
        if self.n_paths < 1:
            raise ValueError(f"n_paths must be >= 1, got {self.n_paths}")
        if not 0.0 <= self.ff_ratio <= 1.0:
            raise ValueError(f"ff_ratio must lie in [0, 1], got {self.ff_ratio}")
        if self.rician_kappa < 0:
            raise ValueError("rician_kappa must be nonnegative")
        r_min, r_max = self.distance_range
        if not (0 < r_min <= r_max):
            raise ValueError(f"invalid distance_range {self.distance_range}")
        t_min, t_max = self.angle_range
        if not (-1.0 <= t_min <= t_max <= 1.0):
            raise ValueError(f"angle_range must be a sub-interval of [-1, 1], got {self.angle_range}")
        object.__setattr__(self, "distance_range", (float(r_min), float(r_max)))
        object.__setattr__(self, "angle_range", (float(t_min), float(t_max)))

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_freq

    @property
    def wavenumber(self) -> float:
        return 2 * np.pi / self.wavelength

    @property
    def n_far(self) -> int:
        return round_half_up(self.ff_ratio * self.n_paths)

    @property
    def n_near(self) -> int:
        return self.n_paths - self.n_far


class PathKind(str, enum.Enum):
    FAR_FIELD = "far"
    NEAR_FIELD = "near"
    LINE_OF_SIGHT = "los"


@dataclass(frozen=True)
class PathComponent:
    kind: PathKind
    gain: complex
    angle: float
    distance: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", PathKind(self.kind))
        object.__setattr__(self, "gain", complex(self.gain))
        _check_angle(self.angle)
        if self.kind is PathKind.NEAR_FIELD and self.distance is None:
            raise ValueError("near-field paths need a distance")
        if self.distance is not None and not self.distance > 0:
            raise ValueError(f"distance must be positive, got {self.distance}")


@dataclass(frozen=True)
class Scene:
    paths: tuple[PathComponent, ...]
    channel: np.ndarray = field(repr=False)
    config: SystemConfig

    @property
    def power(self) -> float:
        return float(np.vdot(self.channel, self.channel).real)


def _check_angle(angle):
    if not -1.0 <= angle <= 1.0:
        raise ValueError(f"angle must be a sine value in [-1, 1], got {angle}")


def element_offsets(config: SystemConfig) -> np.ndarray:
    """Centered element positions in meters."""
    n = config.n_antennas
    return (np.arange(n) - (n - 1) / 2) * config.element_spacing


@lru_cache(maxsize=64)
def far_coefficients(n_antennas: int) -> tuple[np.ndarray, np.ndarray]:
    """(linear, quadratic) phase coefficients of the far-field steering model."""
    lin = np.pi * np.arange(n_antennas, dtype=float)
    lin.setflags(write=False)
    quad = np.zeros(n_antennas)
    quad.setflags(write=False)
    return lin, quad


@lru_cache(maxsize=64)
def fresnel_coefficients(config: SystemConfig) -> tuple[np.ndarray, np.ndarray]:
    """(linear, quadratic) phase coefficients of the Fresnel near-field model.

    Element phase is ``lin*theta + quad*(1 - theta**2)*rho``.
    """
    k = config.wavenumber
    delta = element_offsets(config)
    lin = k * delta
    quad = k * delta**2 / 2
    lin.setflags(write=False)
    quad.setflags(write=False)
    return lin, quad


def far_steering(angle: float, n_antennas: int) -> np.ndarray:
    """Planar-wave ULA response ``exp(-j*pi*(n-1)*angle)``, norm ``sqrt(N)``."""
    _check_angle(angle)
    if n_antennas < 1:
        raise ValueError("n_antennas must be >= 1")
    lin, _ = far_coefficients(n_antennas)
    return np.exp(-1j * (lin * angle))


def near_steering_exact(angle: float, distance: float, config: SystemConfig) -> np.ndarray:
    """Spherical-wave response from the exact element-to-source distances."""
    _check_angle(angle)
    if not distance > 0:
        raise ValueError(f"distance must be positive, got {distance}")
    delta = element_offsets(config)
    # r_n - r computed without cancellation: (r_n^2 - r^2) / (r_n + r)
    num = 2 * distance * delta * angle + delta**2
    r_n = np.sqrt(distance**2 + num)
    return np.exp(-1j * config.wavenumber * (num / (r_n + distance)))


def near_steering_fresnel(angle: float, inv_distance: float, config: SystemConfig) -> np.ndarray:
    """Second-order (Fresnel) near-field response parametrized by ``rho = 1/r``.

    ``rho = 0`` gives the far-field vector up to a global phase.
    """
    _check_angle(angle)
    if inv_distance < 0:
        raise ValueError(f"inv_distance must be nonnegative, got {inv_distance}")
    lin, quad = fresnel_coefficients(config)
    return np.exp(-1j * (lin * angle + quad * ((1.0 - angle * angle) * inv_distance)))


def rayleigh_distance(config: SystemConfig) -> float:
    aperture = (config.n_antennas - 1) * config.element_spacing
    return 2 * aperture**2 / config.wavelength


def path_steering(path: PathComponent, config: SystemConfig) -> np.ndarray:
    n = config.n_antennas
    if path.kind is PathKind.FAR_FIELD:
        return far_steering(path.angle, n)
    if path.kind is PathKind.NEAR_FIELD:
        return near_steering_exact(path.angle, path.distance, config)
    # LoS falls back to the planar model beyond the Rayleigh distance
    if path.distance is None or path.distance >= rayleigh_distance(config):
        return far_steering(path.angle, n)
    return near_steering_exact(path.angle, path.distance, config)


def synthesize_channel(paths, config: SystemConfig) -> np.ndarray:
    """Superpose LoS and scattered paths into the length-N channel.

    Path gains already carry their Rician weighting (see :func:`sample_scene`),
    so the channel is ``sum(g_los * a_los) + sqrt(1/L) * sum(alpha_l * a_l)``
    with ``L`` the number of scattered (FF + NF) paths.
    """
    paths = tuple(paths)
    if not paths:
        raise ValueError("need at least one path")
    h = np.zeros(config.n_antennas, dtype=complex)
    nlos = [p for p in paths if p.kind is not PathKind.LINE_OF_SIGHT]
    for p in paths:
        if p.kind is PathKind.LINE_OF_SIGHT:
            h += p.gain * path_steering(p, config)
    if nlos:
        scatter = np.zeros(config.n_antennas, dtype=complex)
        for p in nlos:
            scatter += p.gain * path_steering(p, config)
        h += np.sqrt(1.0 / len(nlos)) * scatter
    return h


def sample_scene(config: SystemConfig, rng_seed) -> Scene:
    """Draw a random hybrid-field scene.

    ``round(ff_ratio * n_paths)`` far-field paths and the rest near-field, with
    near-field distances uniform below the Rayleigh distance.  Scattered gains
    are CN(0, 1/(kappa+1)); for ``kappa > 0`` a LoS path of gain
    ``sqrt(kappa/(kappa+1))`` is added.
    """
    rng = np.random.default_rng(rng_seed)
    kappa = config.rician_kappa
    t_lo, t_hi = config.angle_range
    r_lo, r_hi = config.distance_range
    d_ray = rayleigh_distance(config)
    n_far, n_near = config.n_far, config.n_near
    nf_hi = min(r_hi, d_ray)
    if n_near > 0 and not nf_hi > r_lo:
        raise ValueError(
            f"empty near-field distance interval: Rayleigh distance {d_ray:.4g} m "
            f"is below r_min {r_lo:.4g} m"
        )

    nlos_scale = np.sqrt(1.0 / (kappa + 1) / 2)
    paths = []
    for _ in range(n_far):
        angle = rng.uniform(t_lo, t_hi)
        gain = nlos_scale * complex(*rng.standard_normal(2))
        paths.append(PathComponent(PathKind.FAR_FIELD, gain, angle))
    for _ in range(n_near):
        angle = rng.uniform(t_lo, t_hi)
        dist = rng.uniform(r_lo, nf_hi)
        gain = nlos_scale * complex(*rng.standard_normal(2))
        paths.append(PathComponent(PathKind.NEAR_FIELD, gain, angle, dist))
    if kappa > 0:
        angle = rng.uniform(t_lo, t_hi)
        dist = rng.uniform(r_lo, r_hi)
        paths.append(PathComponent(PathKind.LINE_OF_SIGHT, np.sqrt(kappa / (kappa + 1)), angle, dist))

    paths = tuple(paths)
    return Scene(paths=paths, channel=synthesize_channel(paths, config), config=config)
