"""NumPy implementation of the Strang-split time step.

This is the fallback backend used when the compiled extension is not
available.  Both backends implement the identical scheme:

  * half-step upwind transport in x (ghost cells from the boundary
    condition: periodic wrap, or bounce-back velocity mirroring),
  * full collision step in v in flux form with exponentially fitted
    two-point face fluxes and zero-flux walls,
  * second half-step transport.

The collision face flux between cells j and j+1 is

  J = [ B(-dphi) f_{j+1} (1 + k f_j) - B(dphi) f_j (1 + k f_{j+1}) ] / dv,

with B(x) = x / (e^x - 1) and dphi the potential increment across the
face.  Sampled Maxwellians make the bracket vanish identically, so they
are stationary states of the discrete collision operator by construction.
"""

import numpy as np

name = "numpy"
compiled = False


def strang_step(f, c, bp, bm, dt_over_dv, k, periodic, mirror):
    """One transport/collision/transport step; returns a new array.

    Parameters mirror the compiled kernel: ``f`` is the (nx, nv) field,
    ``c`` the per-column transport Courant numbers v * (dt/2) / dx,
    ``bp``/``bm`` the (nv-1,) upward/downward face factors B(+-dphi)/dv,
    ``dt_over_dv`` the collision update weight, ``mirror`` the index map
    j -> velocity-reversed j.
    """
    f1 = _transport_half(f, c, periodic, mirror)
    f2 = _collide(f1, bp, bm, dt_over_dv, k)
    return _transport_half(f2, c, periodic, mirror)


def _transport_half(f, c, periodic, mirror):
    if periodic:
        prev = np.concatenate((f[-1:, :], f[:-1, :]), axis=0)
        nxt = np.concatenate((f[1:, :], f[:1, :]), axis=0)
    else:  # bounce-back: incoming population mirrors the outgoing one
        prev = np.concatenate((f[:1, mirror], f[:-1, :]), axis=0)
        nxt = np.concatenate((f[1:, :], f[-1:, mirror]), axis=0)
    upwind = np.where(c[None, :] > 0.0, f - prev, nxt - f)
    return f - c[None, :] * upwind


def _collide(f, bp, bm, dt_over_dv, k):
    w = 1.0 + k * f
    flux = bm * f[:, 1:] * w[:, :-1] - bp * f[:, :-1] * w[:, 1:]
    out = f.copy()
    out[:, :-1] += dt_over_dv * flux
    out[:, 1:] -= dt_over_dv * flux
    return out
