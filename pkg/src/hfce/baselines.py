"""Reference estimators: LS, LMMSE, FF-OMP and HF-OMP with known split."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.linalg import solve_triangular

from .channel import round_half_up
from .dictionary import HybridDictionary
from .estimator import EstimateResult, OpCounters, SelectedAtom, residual_mse, select_atom
from .observation import Observation

RANK_TOL = 1e-10


class RankDeficientError(np.linalg.LinAlgError):
    pass


def ls_estimate(y: Observation) -> np.ndarray:
    return y.normalized()


@dataclass(frozen=True)
class CovarianceModel:
    matrix: np.ndarray = field(repr=False)
    n_train: int

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("covariance must be square")
        if not np.allclose(m, m.conj().T, atol=1e-10, rtol=0):
            raise ValueError("covariance must be Hermitian")

    @cached_property
    def eig(self):
        w, v = np.linalg.eigh(self.matrix)
        return np.clip(w, 0.0, None), v


def empirical_covariance(scenes) -> CovarianceModel:
    """Sample second-moment matrix ``(1/K) sum h_k h_k^H`` of the scene channels."""
    hs = [s.channel if hasattr(s, "channel") else np.asarray(s) for s in scenes]
    if len(hs) < 2:
        raise ValueError("need at least two training channels")
    H = np.stack(hs, axis=1)
    R = (H @ H.conj().T) / H.shape[1]
    R = (R + R.conj().T) / 2
    return CovarianceModel(R, H.shape[1])


def mmse_estimate(y: Observation, cov: CovarianceModel) -> np.ndarray:
    """Linear MMSE ``sqrt(tau) R (tau R + sigma^2 I)^-1 y`` via the eigenbasis of R."""
    tau, var = y.pilot.pilot_length, y.pilot.noise_variance
    w, v = cov.eig
    if var == 0 and np.any(w <= RANK_TOL * max(w.max(), 1.0)):
        raise np.linalg.LinAlgError("singular LMMSE system: noiseless observation with rank-deficient covariance")
    shrink = np.sqrt(tau) * w / (tau * w + var)
    return v @ (shrink * (v.conj().T @ y.y))


def ls_solve(columns, y) -> np.ndarray:
    """Dense least squares ``argmin_g ||y - columns g||`` through a QR factorization."""
    columns = np.asarray(columns)
    if columns.ndim == 1:
        columns = columns[:, None]
    n, k = columns.shape
    if k > n:
        raise RankDeficientError(f"{k} columns exceed {n} rows")
    q, r = np.linalg.qr(columns, mode="reduced")
    diag = np.abs(np.diag(r))
    if k and diag.min() <= RANK_TOL * max(diag.max(), 1.0):
        raise RankDeficientError("active columns are linearly dependent")
    return solve_triangular(r, q.conj().T @ y)


def _staged_omp(y: Observation, dictionary: HybridDictionary, stages) -> EstimateResult:
    """OMP whose rounds are split into (block, rounds) stages; gains re-solved jointly."""
    target = y.normalized()
    r = target.copy()
    counters = OpCounters()
    chosen: list[int] = []
    gains = np.zeros(0, dtype=complex)
    history = [residual_mse(r)]
    for block, rounds in stages:
        if rounds > block.stop - block.start:
            raise ValueError(f"{rounds} rounds requested from a block of {block.stop - block.start} atoms")
        for _ in range(rounds):
            if not np.any(r):
                break
            # duplicate picks fall through to the next-best unselected atom
            idx = select_atom(dictionary, r, block=block, exclude=chosen)
            counters.correlations += 1
            chosen.append(idx)
            active = dictionary.columns[:, chosen]
            gains = ls_solve(active, target)
            r = target - active @ gains
            history.append(residual_mse(r))
    atoms = []
    for idx, g in zip(chosen, gains):
        meta = dictionary.meta[idx]
        atoms.append(SelectedAtom(idx, meta.domain, meta.angle, meta.inv_distance, complex(g),
                                  dictionary.columns[:, idx]))
    h_hat = dictionary.columns[:, chosen] @ gains if chosen else np.zeros_like(target)
    return EstimateResult(h_hat=h_hat, atoms=atoms, iterations=len(chosen),
                          residual_mse_history=history, op_counters=counters)


def ff_omp(y: Observation, dictionary: HybridDictionary, n_paths: int) -> EstimateResult:
    """Classical OMP over the angular block with the true path count."""
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    if dictionary.q_far == 0:
        raise ValueError("dictionary has no angular block")
    return _staged_omp(y, dictionary, [(dictionary.angular_block, n_paths)])


def hf_omp_gamma(y: Observation, dictionary: HybridDictionary, n_paths: int, gamma: float) -> EstimateResult:
    """Far-field stage of ``round(gamma*L)`` rounds, then near-field rounds on the polar block."""
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    n_far = round_half_up(gamma * n_paths)
    n_near = n_paths - n_far
    stages = []
    if n_far:
        if dictionary.q_far == 0:
            raise ValueError("dictionary has no angular block")
        stages.append((dictionary.angular_block, n_far))
    if n_near:
        if dictionary.q_near == 0:
            raise ValueError("dictionary has no polar block")
        stages.append((dictionary.polar_block, n_near))
    return _staged_omp(y, dictionary, stages)
