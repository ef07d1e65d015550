"""Column-normalized hybrid angular/polar dictionaries."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .channel import SystemConfig, far_steering, near_steering_fresnel


class Domain(str, enum.Enum):
    ANGULAR = "angular"
    POLAR = "polar"


@dataclass(frozen=True)
class AtomMeta:
    domain: Domain
    angle: float
    inv_distance: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "domain", Domain(self.domain))
        if self.domain is Domain.ANGULAR and self.inv_distance != 0.0:
            raise ValueError("angular atoms have inv_distance == 0")
        if self.domain is Domain.POLAR and not self.inv_distance > 0.0:
            raise ValueError("polar atoms need inv_distance > 0")


@dataclass(frozen=True)
class HybridDictionary:
    """``A = [U, V]``: ``q_far`` angular columns followed by ``q_near`` polar ones."""

    columns: np.ndarray = field(repr=False)
    meta: tuple[AtomMeta, ...]
    q_far: int
    q_near: int

    def __post_init__(self):
        if self.columns.ndim != 2 or self.columns.shape[1] != self.q_far + self.q_near:
            raise ValueError("column count does not match q_far + q_near")
        if len(self.meta) != self.columns.shape[1]:
            raise ValueError("one AtomMeta per column is required")
        self.columns.setflags(write=False)

    @property
    def n_atoms(self) -> int:
        return self.q_far + self.q_near

    @property
    def n_antennas(self) -> int:
        return self.columns.shape[0]

    @property
    def angular_block(self) -> slice:
        return slice(0, self.q_far)

    @property
    def polar_block(self) -> slice:
        return slice(self.q_far, self.q_far + self.q_near)


def grid_angles(count: int) -> np.ndarray:
    """Cell-centered uniform grid on the sine axis."""
    if count < 1:
        raise ValueError(f"grid size must be >= 1, got {count}")
    q = np.arange(count)
    return -1.0 + (2 * q + 1) / count


def ring_inv_distances(n_rings: int, r_min: float) -> np.ndarray:
    if n_rings < 1:
        raise ValueError(f"n_rings must be >= 1, got {n_rings}")
    if not r_min > 0:
        raise ValueError(f"r_min must be positive, got {r_min}")
    rho_max = 1.0 / r_min
    return (np.arange(1, n_rings + 1) - 0.5) * rho_max / n_rings


def build_angular_dictionary(q_far: int, config: SystemConfig):
    n = config.n_antennas
    angles = grid_angles(q_far)
    cols = np.empty((n, q_far), dtype=complex)
    for j, theta in enumerate(angles):
        cols[:, j] = far_steering(theta, n) / np.sqrt(n)
    meta = [AtomMeta(Domain.ANGULAR, float(theta)) for theta in angles]
    return cols, meta


def build_polar_dictionary(q_angle: int, n_rings: int, config: SystemConfig):
    """Angle-major polar grid: for each grid angle, ``n_rings`` atoms uniform in 1/r."""
    n = config.n_antennas
    angles = grid_angles(q_angle)
    rhos = ring_inv_distances(n_rings, config.distance_range[0])
    cols = np.empty((n, q_angle * n_rings), dtype=complex)
    meta = []
    j = 0
    for theta in angles:
        for rho in rhos:
            cols[:, j] = near_steering_fresnel(theta, rho, config) / np.sqrt(n)
            meta.append(AtomMeta(Domain.POLAR, float(theta), float(rho)))
            j += 1
    return cols, meta


def build_hybrid_dictionary(config: SystemConfig, q_far: int, q_angle: int = 0, n_rings: int = 1) -> HybridDictionary:
    """Concatenate angular and polar blocks; ``q_angle=0`` gives a far-field-only dictionary."""
    n = config.n_antennas
    blocks, meta = [], []
    if q_far > 0:
        u, mu = build_angular_dictionary(q_far, config)
        blocks.append(u)
        meta += mu
    if q_angle > 0:
        v, mv = build_polar_dictionary(q_angle, n_rings, config)
        blocks.append(v)
        meta += mv
    if not blocks:
        raise ValueError("dictionary needs at least one block")
    if any(b.shape[0] != n for b in blocks):
        raise ValueError("block row counts differ")
    q_near = q_angle * n_rings if q_angle > 0 else 0
    return HybridDictionary(np.hstack(blocks), tuple(meta), max(q_far, 0), q_near)


def atom_meta(dictionary: HybridDictionary, index: int) -> AtomMeta:
    if not 0 <= index < dictionary.n_atoms:
        raise IndexError(f"atom index {index} out of range [0, {dictionary.n_atoms})")
    return dictionary.meta[index]


def atom_from_meta(meta: AtomMeta, config: SystemConfig) -> np.ndarray:
    """Rebuild the normalized column described by ``meta``."""
    n = config.n_antennas
    if meta.domain is Domain.ANGULAR:
        return far_steering(meta.angle, n) / np.sqrt(n)
    return near_steering_fresnel(meta.angle, meta.inv_distance, config) / np.sqrt(n)
