# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Chebyshev recurrence kernel for the tridiagonal propagator."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def chebyshev_apply(const double[::1] diag,
                    const double complex[::1] lower,
                    const double complex[::1] coeffs,
                    const double complex[::1] psi):
    """Evaluate sum_k coeffs[k] * T_k(H) @ psi for a Hermitian tridiagonal H.

    diag is the (real) diagonal, lower the subdiagonal; the superdiagonal is
    conj(lower).  H must already be rescaled so its spectrum sits in [-1, 1].
    """
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t kmax = coeffs.shape[0]
    cdef Py_ssize_t i, k

    out_arr = np.empty(n, dtype=np.complex128)
    phi0_arr = np.empty(n, dtype=np.complex128)
    phi1_arr = np.empty(n, dtype=np.complex128)
    phi2_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef double complex[::1] phi0 = phi0_arr
    cdef double complex[::1] phi1 = phi1_arr
    cdef double complex[::1] phi2 = phi2_arr
    cdef double complex[::1] tmp
    cdef double complex c

    for i in range(n):
        phi0[i] = psi[i]
        out[i] = coeffs[0] * psi[i]
    if kmax == 1:
        return out_arr

    # phi1 = H psi, one fused pass per site
    c = coeffs[1]
    if n == 1:
        phi1[0] = diag[0] * psi[0]
        out[0] = out[0] + c * phi1[0]
    else:
        phi1[0] = diag[0] * psi[0] + lower[0].conjugate() * psi[1]
        for i in range(1, n - 1):
            phi1[i] = diag[i] * psi[i] + lower[i - 1] * psi[i - 1] \
                + lower[i].conjugate() * psi[i + 1]
        phi1[n - 1] = diag[n - 1] * psi[n - 1] + lower[n - 2] * psi[n - 2]
        for i in range(n):
            out[i] = out[i] + c * phi1[i]

    for k in range(2, kmax):
        # phi2 = 2 H phi1 - phi0, same fused pass
        c = coeffs[k]
        if n == 1:
            phi2[0] = 2.0 * diag[0] * phi1[0] - phi0[0]
            out[0] = out[0] + c * phi2[0]
        else:
            phi2[0] = 2.0 * (diag[0] * phi1[0] + lower[0].conjugate() * phi1[1]) - phi0[0]
            for i in range(1, n - 1):
                phi2[i] = 2.0 * (diag[i] * phi1[i] + lower[i - 1] * phi1[i - 1]
                                 + lower[i].conjugate() * phi1[i + 1]) - phi0[i]
            phi2[n - 1] = 2.0 * (diag[n - 1] * phi1[n - 1]
                                 + lower[n - 2] * phi1[n - 2]) - phi0[n - 1]
            for i in range(n):
                out[i] = out[i] + c * phi2[i]
        tmp = phi0
        phi0 = phi1
        phi1 = phi2
        phi2 = tmp

    return out_arr
