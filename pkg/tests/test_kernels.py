import numpy as np
import pytest

from ctqwalk.kernels import available_backends, chebyshev_apply_numpy
from ctqwalk.model import DefectSpec, SiteGrid, build_defective
from ctqwalk.propagator import ChebyshevEngine, PropagatorConfig


def _setup(half_width=40, t=7.0):
    grid = SiteGrid(half_width)
    h = build_defective(grid, 1.0, 0.1, DefectSpec(-1.4, 0.7, -2.3))
    engine = ChebyshevEngine(h, PropagatorConfig())
    coeffs = engine._coefficients(t)
    rng = np.random.default_rng(42)
    psi = rng.standard_normal(grid.n_sites) + 1j * rng.standard_normal(grid.n_sites)
    psi /= np.linalg.norm(psi)
    return engine, coeffs, np.ascontiguousarray(psi)


def _dense_reference(engine, coeffs, psi):
    n = len(engine.diag_scaled)
    h = np.diag(engine.diag_scaled.astype(complex))
    idx = np.arange(n - 1)
    h[idx + 1, idx] = engine.lower_scaled
    h[idx, idx + 1] = np.conj(engine.lower_scaled)
    phi0, phi1 = psi, h @ psi
    out = coeffs[0] * phi0 + coeffs[1] * phi1
    for k in range(2, len(coeffs)):
        phi0, phi1 = phi1, 2.0 * (h @ phi1) - phi0
        out += coeffs[k] * phi1
    return out


def test_numpy_kernel_matches_dense_polynomial():
    engine, coeffs, psi = _setup()
    out = chebyshev_apply_numpy(engine.diag_scaled, engine.lower_scaled, coeffs, psi)
    np.testing.assert_allclose(out, _dense_reference(engine, coeffs, psi), atol=1e-12)


def test_backends_agree_to_machine_precision():
    # the compiled loop may contract multiply-adds, so agreement is to a few
    # ulp rather than bitwise
    backends = available_backends()
    if "compiled" not in backends:
        pytest.skip("compiled extension not built")
    engine, coeffs, psi = _setup(half_width=200, t=23.0)
    out_py = backends["python"](engine.diag_scaled, engine.lower_scaled, coeffs, psi)
    out_c = backends["compiled"](engine.diag_scaled, engine.lower_scaled, coeffs, psi)
    np.testing.assert_allclose(np.asarray(out_c), out_py, rtol=0, atol=1e-14)


def test_kernel_single_coefficient():
    engine, coeffs, psi = _setup()
    for fn in available_backends().values():
        out = np.asarray(fn(engine.diag_scaled, engine.lower_scaled, coeffs[:1], psi))
        np.testing.assert_allclose(out, coeffs[0] * psi, atol=1e-15)


def test_kernel_single_site():
    diag = np.array([0.5])
    lower = np.zeros(0, dtype=complex)
    coeffs = np.array([1.0 + 0j, -1.0j, 0.25 + 0j])
    psi = np.array([1.0 + 0j])
    # T_0 + T_1 + T_2 at x=0.5: 1*c0 + 0.5*c1 + (2*0.25-1)*c2
    expected = coeffs[0] + 0.5 * coeffs[1] - 0.5 * coeffs[2]
    for fn in available_backends().values():
        out = np.asarray(fn(diag, lower, coeffs, psi))
        np.testing.assert_allclose(out, [expected], atol=1e-15)


def test_force_python_env(monkeypatch):
    import importlib

    import ctqwalk.kernels as kernels

    monkeypatch.setenv("CTQWALK_FORCE_PYTHON_KERNEL", "1")
    reloaded = importlib.reload(kernels)
    try:
        assert reloaded.BACKEND == "python"
        assert reloaded.chebyshev_apply is reloaded.chebyshev_apply_numpy
    finally:
        monkeypatch.delenv("CTQWALK_FORCE_PYTHON_KERNEL")
        importlib.reload(kernels)
