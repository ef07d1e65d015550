"""Hybrid-field (far + near field) channel estimation for large uniform linear arrays."""
from .baselines import (CovarianceModel, empirical_covariance, ff_omp, hf_omp_gamma, ls_estimate,
                        ls_solve, mmse_estimate)
from .channel import (PathComponent, PathKind, Scene, SystemConfig, far_steering, near_steering_exact,
                      near_steering_fresnel, rayleigh_distance, sample_scene, synthesize_channel)
from .dictionary import (AtomMeta, Domain, HybridDictionary, atom_meta, build_angular_dictionary,
                         build_hybrid_dictionary, build_polar_dictionary)
from .estimator import (EstimateResult, EstimatorParams, OpCounters, SelectedAtom, atom_derivative,
                        compute_gain, cost_and_projected_energy, estimate, refine_atom, residual_mse,
                        scalar_gradient, select_atom)
from .kernels import BACKEND as KERNEL_BACKEND
from .observation import Observation, PilotConfig, observe, sigma_for_snr

__version__ = "0.1.0"

__all__ = [
    "CovarianceModel", "empirical_covariance", "ff_omp", "hf_omp_gamma", "ls_estimate", "ls_solve",
    "mmse_estimate",
    "PathComponent", "PathKind", "Scene", "SystemConfig", "far_steering", "near_steering_exact",
    "near_steering_fresnel", "rayleigh_distance", "sample_scene", "synthesize_channel",
    "AtomMeta", "Domain", "HybridDictionary", "atom_meta", "build_angular_dictionary",
    "build_hybrid_dictionary", "build_polar_dictionary",
    "EstimateResult", "EstimatorParams", "OpCounters", "SelectedAtom", "atom_derivative", "compute_gain",
    "cost_and_projected_energy", "estimate", "refine_atom", "residual_mse", "scalar_gradient",
    "select_atom",
    "KERNEL_BACKEND", "Observation", "PilotConfig", "observe", "sigma_for_snr", "__version__",
]
