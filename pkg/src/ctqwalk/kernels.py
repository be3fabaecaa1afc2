"""Hot-loop kernels: compiled extension when available, numpy fallback otherwise.

The only performance-critical operation in the package is the Chebyshev
three-term recurrence over a Hermitian tridiagonal matrix.  Both backends
implement the identical contract; the compiled one is selected at import time
when the extension built.  Set CTQWALK_FORCE_PYTHON_KERNEL=1 to force the
numpy path (used by the benchmark and the cross-backend tests).
"""

from __future__ import annotations

import os

import numpy as np


def chebyshev_apply_numpy(
    diag: np.ndarray,
    lower: np.ndarray,
    coeffs: np.ndarray,
    psi: np.ndarray,
) -> np.ndarray:
    """sum_k coeffs[k] * T_k(H) @ psi for rescaled Hermitian tridiagonal H."""

    def matvec(x: np.ndarray) -> np.ndarray:
        y = diag * x
        y[1:] += lower * x[:-1]
        y[:-1] += np.conj(lower) * x[1:]
        return y

    phi0 = psi
    out = coeffs[0] * psi
    if len(coeffs) == 1:
        return out
    phi1 = matvec(psi)
    out += coeffs[1] * phi1
    for k in range(2, len(coeffs)):
        phi2 = 2.0 * matvec(phi1) - phi0
        out += coeffs[k] * phi2
        phi0, phi1 = phi1, phi2
    return out


try:
    from ._chebcore import chebyshev_apply as chebyshev_apply_compiled
except ImportError:  # extension not built; pure-python install still works
    chebyshev_apply_compiled = None

if chebyshev_apply_compiled is None or os.environ.get("CTQWALK_FORCE_PYTHON_KERNEL"):
    chebyshev_apply = chebyshev_apply_numpy
    BACKEND = "python"
else:
    chebyshev_apply = chebyshev_apply_compiled
    BACKEND = "compiled"


def available_backends() -> dict[str, object]:
    backends: dict[str, object] = {"python": chebyshev_apply_numpy}
    if chebyshev_apply_compiled is not None:
        backends["compiled"] = chebyshev_apply_compiled
    return backends
