"""Compiled and NumPy kernels must implement the identical scheme."""

import numpy as np
import pytest

from fpkin import backends
from fpkin import kinetics as kin


def random_admissible(grid, k, seed):
    rng = np.random.default_rng(seed)
    cap = 1.0 / abs(k) if k < 0 else 2.0
    values = rng.uniform(0.0, 0.8 * cap, size=(grid.x_nodes, grid.v_nodes))
    values *= np.exp(-0.2 * grid.v**2)[None, :]
    return kin.DistributionField(values, k=k)


def test_fallback_always_available():
    assert "numpy" in backends.available_backends()


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        backends.get_backend("fortran")


def test_env_override(monkeypatch):
    monkeypatch.setenv("FPKIN_BACKEND", "numpy")
    assert backends.default_backend() is backends.get_backend("numpy")


@pytest.mark.skipif("cython" not in backends.available_backends(),
                    reason="compiled kernel not built")
@pytest.mark.parametrize("k", [-0.5, 0.0, 0.3])
@pytest.mark.parametrize("bc", [kin.BOUNCE_BACK, kin.PERIODIC])
def test_kernels_agree(k, bc):
    grid = kin.PhaseGrid(x_nodes=24, L=1.0, v_nodes=48, v_max=8.0)
    fld = random_admissible(grid, k, seed=17)
    dt = kin.cfl_limit(fld, grid)
    out = {}
    for name in ("numpy", "cython"):
        result = fld
        for _ in range(25):
            result = kin.step(result, grid, dt, bc=bc,
                              backend=backends.get_backend(name))
        out[name] = result.values
    scale = np.abs(out["numpy"]).max()
    assert np.allclose(out["numpy"], out["cython"], rtol=1e-12,
                       atol=1e-13 * scale)


@pytest.mark.skipif("cython" not in backends.available_backends(),
                    reason="compiled kernel not built")
def test_compiled_kernel_is_default():
    assert backends.default_backend().name == "cython"
