"""Stepping-kernel selection.

The compiled Cython kernel is preferred when its extension module built;
otherwise the NumPy implementation of the same scheme is used.  The
``FPKIN_BACKEND`` environment variable ("cython" or "numpy") overrides the
default, which is mainly useful for the parity tests and the benchmark.
"""

import os

from . import _step_numpy

try:
    from . import _step_cy
except ImportError:
    _step_cy = None

__all__ = ["available_backends", "get_backend", "default_backend"]

_BACKENDS = {"numpy": _step_numpy}
if _step_cy is not None:
    _BACKENDS["cython"] = _step_cy


def available_backends():
    """Names of the importable kernels, fallback first."""
    return tuple(_BACKENDS)


def get_backend(name):
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown backend {name!r}; available: {', '.join(_BACKENDS)}"
        ) from None


def default_backend():
    override = os.environ.get("FPKIN_BACKEND")
    if override:
        return get_backend(override)
    return _BACKENDS.get("cython", _step_numpy)
