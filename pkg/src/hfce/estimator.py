"""Residual-stopped OMP with single-column scalar gridless refinement.

The estimator never receives the number of paths or the far/near split.  It
keeps selecting dictionary atoms until the residual mean-square energy drops
to ``epsilon`` (normally the noise variance), refining each freshly selected
atom's angle (and inverse distance, for polar atoms) by backtracked scalar
gradient steps before its contribution is removed from the residual.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .channel import SystemConfig, far_coefficients, fresnel_coefficients
from .dictionary import Domain, HybridDictionary
from .observation import Observation

UNIT_NORM_TOL = 1e-10


class ZeroResidualError(ValueError):
    """Raised when atom selection is asked to explain an all-zero residual."""


@dataclass(frozen=True)
class EstimatorParams:
    epsilon: float
    max_outer_iters: int = 20
    n_refine_iters: int = 5
    step_theta: float = 5e-4
    step_rho: float = 5e-4
    step_floor: float = 1e-5
    gain_tol: float = 1e-1

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.max_outer_iters < 0 or self.n_refine_iters < 0:
            raise ValueError("iteration limits must be nonnegative")
        if not (self.step_theta > 0 and self.step_rho > 0 and self.step_floor > 0 and self.gain_tol > 0):
            raise ValueError("step sizes and gain tolerance must be positive")
        if not (self.step_floor < self.step_theta and self.step_floor < self.step_rho):
            raise ValueError("step_floor must be below both initial step sizes")


@dataclass(frozen=True)
class SelectedAtom:
    source_index: int
    domain: Domain
    angle: float
    inv_distance: float
    gain: complex
    column: np.ndarray = field(repr=False)


@dataclass
class OpCounters:
    correlations: int = 0
    refinement_rounds: int = 0
    trial_steps: int = 0
    accepted_steps: int = 0

    @property
    def mean_backtracks(self) -> float:
        """Average Armijo trials per refinement round (the ``B`` of the cost model)."""
        if self.refinement_rounds == 0:
            return 0.0
        return self.trial_steps / self.refinement_rounds


@dataclass
class EstimateResult:
    h_hat: np.ndarray = field(repr=False)
    atoms: list[SelectedAtom]
    iterations: int
    residual_mse_history: list[float]
    op_counters: OpCounters

    @property
    def final_mse(self) -> float:
        return self.residual_mse_history[-1]

    @property
    def gains(self) -> np.ndarray:
        return np.array([a.gain for a in self.atoms], dtype=complex)


def residual_mse(residual) -> float:
    r = np.asarray(residual)
    return float(np.vdot(r, r).real) / r.shape[0]


def select_atom(dictionary: HybridDictionary, residual, block: slice | None = None, exclude=()) -> int:
    """Index of the column with the largest ``|A^H r|^2`` (lowest index on ties).

    ``block`` restricts the search to a contiguous column range and
    ``exclude`` lists absolute indices to skip; both are for the baselines.
    """
    r = np.asarray(residual)
    if r.shape != (dictionary.n_antennas,):
        raise ValueError(f"residual must have length {dictionary.n_antennas}")
    if not np.any(r):
        raise ZeroResidualError("residual is identically zero")
    block = block or slice(0, dictionary.n_atoms)
    corr = dictionary.columns[:, block].conj().T @ r
    energy = corr.real**2 + corr.imag**2
    start = block.start or 0
    for idx in exclude:
        if start <= idx < block.stop:
            energy[idx - start] = -np.inf
    best = int(np.argmax(energy))
    if not np.isfinite(energy[best]):
        raise ValueError("no selectable atom left in block")
    return start + best


def compute_gain(atom, residual) -> complex:
    """Scalar least-squares gain ``a^H r`` of a unit-norm atom."""
    atom = np.asarray(atom)
    if abs(np.linalg.norm(atom) - 1.0) > UNIT_NORM_TOL:
        raise ValueError("atom must have unit Euclidean norm")
    return complex(np.vdot(atom, residual))


def cost_and_projected_energy(atom, residual) -> tuple[float, float]:
    z = complex(np.vdot(atom, residual))
    energy = z.real**2 + z.imag**2
    return float(np.vdot(residual, residual).real) - energy, energy


def _coefficients(domain: Domain, config: SystemConfig):
    if domain is Domain.ANGULAR:
        return far_coefficients(config.n_antennas)
    return fresnel_coefficients(config)


def atom_derivative(atom, which: str, config: SystemConfig) -> np.ndarray:
    """Derivative of the normalized atom w.r.t. ``"theta"`` or ``"rho"``.

    ``atom`` is anything with ``domain``, ``angle`` and ``inv_distance``.
    """
    domain = Domain(atom.domain)
    if which not in ("theta", "rho"):
        raise ValueError(f"which must be 'theta' or 'rho', got {which!r}")
    if which == "rho" and domain is Domain.ANGULAR:
        raise ValueError("angular atoms have no inverse-distance parameter")
    lin, quad = _coefficients(domain, config)
    theta, rho = atom.angle, atom.inv_distance
    a = kernels.atom(lin, quad, theta, rho)
    if which == "theta":
        dphi = lin - 2.0 * theta * rho * quad
    else:
        dphi = quad * (1.0 - theta * theta)
    return -1j * dphi * a


def scalar_gradient(atom, d_atom, residual) -> float:
    """``dL/du = -2 Re{conj(a^H r) * (da/du)^H r}``."""
    z = np.vdot(atom, residual)
    w = np.vdot(d_atom, residual)
    return float(-2.0 * (z.conjugate() * w).real)


def _backtrack(lin, quad, theta, rho, r, which, step, floor, bounds, z_best, counters):
    """One Armijo block on a single parameter; returns (theta, rho, z, accepted)."""
    z, w = kernels.project_grad(lin, quad, theta, rho, r, which)
    grad = -2.0 * (z.conjugate() * w).real
    best_energy = z.real**2 + z.imag**2
    if grad == 0.0:
        return theta, rho, z_best, False
    current = theta if which == 0 else rho
    lo, hi = bounds
    zeta = step
    while zeta > floor:
        trial = min(max(current - zeta * grad, lo), hi)
        counters.trial_steps += 1
        if trial != current:
            t_try, r_try = (trial, rho) if which == 0 else (theta, trial)
            z_try = kernels.project(lin, quad, t_try, r_try, r)
            # ||r - a z||^2 = ||r||^2 - |z|^2 for unit-norm atoms
            if z_try.real**2 + z_try.imag**2 > best_energy:
                counters.accepted_steps += 1
                return t_try, r_try, z_try, True
        zeta /= 2
    return theta, rho, z_best, False


def refine_atom(atom: SelectedAtom, residual, params: EstimatorParams, config: SystemConfig,
                counters: OpCounters | None = None) -> SelectedAtom:
    """Gridless refinement of one atom against ``residual``.

    ``residual`` must still contain the atom's own contribution (it is the
    observation minus all previously accepted atoms).  Each round takes at
    most one accepted Armijo step in theta and then, for polar atoms, one in
    rho; rounds stop early once the gain moves by less than ``gain_tol``.
    """
    counters = counters if counters is not None else OpCounters()
    r = np.ascontiguousarray(residual, dtype=complex)
    lin, quad = _coefficients(atom.domain, config)
    polar = atom.domain is Domain.POLAR
    rho_max = 1.0 / config.distance_range[0]
    theta, rho, z = atom.angle, atom.inv_distance, complex(atom.gain)
    moved = False
    h_prev = 0.0
    for _ in range(params.n_refine_iters):
        counters.refinement_rounds += 1
        theta, rho, z, ok = _backtrack(lin, quad, theta, rho, r, 0, params.step_theta,
                                       params.step_floor, (-1.0, 1.0), z, counters)
        moved |= ok
        if polar:
            theta, rho, z, ok = _backtrack(lin, quad, theta, rho, r, 1, params.step_rho,
                                           params.step_floor, (0.0, rho_max), z, counters)
            moved |= ok
        if abs(z - h_prev) < params.gain_tol:
            break
        h_prev = z
    if not moved:
        return atom
    return replace(atom, angle=float(theta), inv_distance=float(rho), gain=complex(z),
                   column=kernels.atom(lin, quad, theta, rho))


def estimate(y: Observation, dictionary: HybridDictionary, params: EstimatorParams,
             config: SystemConfig) -> EstimateResult:
    """Run the estimator on one correlated observation.

    ``residual_mse_history[0]`` is the MSE of ``y/sqrt(tau)`` itself; entry
    ``i`` is the MSE after the ``i``-th atom was removed.  Up to
    ``max_outer_iters + 1`` atoms are taken, mirroring the ``i <= I_max`` loop
    guard.
    """
    if y.n_antennas != dictionary.n_antennas:
        raise ValueError("observation and dictionary disagree on N")
    counters = OpCounters()
    r = y.normalized().astype(complex)
    mse = residual_mse(r)
    history = [mse]
    atoms: list[SelectedAtom] = []
    i = 0
    while mse > params.epsilon and i <= params.max_outer_iters:
        try:
            idx = select_atom(dictionary, r)
        except ZeroResidualError:
            break
        counters.correlations += 1
        i += 1
        meta = dictionary.meta[idx]
        column = dictionary.columns[:, idx]
        selected = SelectedAtom(idx, meta.domain, meta.angle, meta.inv_distance,
                                complex(np.vdot(column, r)), column)
        selected = refine_atom(selected, r, params, config, counters)
        atoms.append(selected)
        r = r - selected.column * selected.gain
        mse = residual_mse(r)
        history.append(mse)

    if atoms:
        h_hat = np.column_stack([a.column for a in atoms]) @ np.array([a.gain for a in atoms])
    else:
        h_hat = np.zeros(dictionary.n_antennas, dtype=complex)
    return EstimateResult(h_hat=h_hat, atoms=atoms, iterations=i, residual_mse_history=history,
                          op_counters=counters)
