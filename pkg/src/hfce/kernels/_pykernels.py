"""Numpy implementation of the parametric-atom kernels.

Every atom handled by the estimator has unit-modulus entries with phase

    phi_n = lin[n] * theta + quad[n] * (1 - theta**2) * rho

so that ``atom[n] = exp(-1j * phi_n) / sqrt(N)``.  Far-field atoms use
``quad = 0``.
"""
import numpy as np


def phase(lin, quad, theta, rho):
    return lin * theta + quad * ((1.0 - theta * theta) * rho)


def atom(lin, quad, theta, rho):
    n = lin.shape[0]
    return np.exp(-1j * phase(lin, quad, theta, rho)) / np.sqrt(n)


def project(lin, quad, theta, rho, r):
    """Return ``a^H r`` without materializing the conjugated atom twice."""
    n = lin.shape[0]
    return complex(np.dot(np.exp(1j * phase(lin, quad, theta, rho)), r)) / np.sqrt(n)


def project_grad(lin, quad, theta, rho, r, which):
    """Return ``(a^H r, (da/du)^H r)`` for ``u`` = theta (which=0) or rho (which=1)."""
    n = lin.shape[0]
    conj_atom = np.exp(1j * phase(lin, quad, theta, rho)) / np.sqrt(n)
    if which == 0:
        dphi = lin - 2.0 * theta * rho * quad
    else:
        dphi = quad * (1.0 - theta * theta)
    weighted = conj_atom * r
    z = complex(weighted.sum())
    w = 1j * complex(np.dot(dphi, weighted))
    return z, w
