# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the parametric-atom kernels (see ``_pykernels``)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, sqrt

cnp.import_array()


def atom(const double[::1] lin, const double[::1] quad, double theta, double rho):
    cdef Py_ssize_t n = lin.shape[0], i
    cdef double curv = (1.0 - theta * theta) * rho
    cdef double scale = 1.0 / sqrt(<double>n)
    cdef double ph
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    for i in range(n):
        ph = lin[i] * theta + quad[i] * curv
        o[i] = scale * cos(ph) - 1j * (scale * sin(ph))
    return out


def project(const double[::1] lin, const double[::1] quad, double theta, double rho,
            const double complex[::1] r):
    cdef Py_ssize_t n = lin.shape[0], i
    cdef double curv = (1.0 - theta * theta) * rho
    cdef double ph, c, s, re = 0.0, im = 0.0
    for i in range(n):
        ph = lin[i] * theta + quad[i] * curv
        c = cos(ph)
        s = sin(ph)
        # (c + js) * (x + jy)
        re += c * r[i].real - s * r[i].imag
        im += c * r[i].imag + s * r[i].real
    cdef double scale = 1.0 / sqrt(<double>n)
    return complex(re * scale, im * scale)


def project_grad(const double[::1] lin, const double[::1] quad, double theta, double rho,
                 const double complex[::1] r, int which):
    cdef Py_ssize_t n = lin.shape[0], i
    cdef double curv = (1.0 - theta * theta) * rho
    cdef double two_tr = 2.0 * theta * rho
    cdef double one_m_t2 = 1.0 - theta * theta
    cdef double ph, c, s, pr, pi, dphi
    cdef double zr = 0.0, zi = 0.0, wr = 0.0, wi = 0.0
    for i in range(n):
        ph = lin[i] * theta + quad[i] * curv
        c = cos(ph)
        s = sin(ph)
        pr = c * r[i].real - s * r[i].imag
        pi = c * r[i].imag + s * r[i].real
        zr += pr
        zi += pi
        if which == 0:
            dphi = lin[i] - two_tr * quad[i]
        else:
            dphi = quad[i] * one_m_t2
        wr += dphi * pr
        wi += dphi * pi
    cdef double scale = 1.0 / sqrt(<double>n)
    # w = j * sum(dphi * conj(a) * r)
    return complex(zr * scale, zi * scale), complex(-wi * scale, wr * scale)
