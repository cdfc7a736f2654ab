# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Strang-split time step.

Same scheme as ``_step_numpy`` (upwind transport half-steps around one
exponentially fitted collision step in flux form); see that module for the
formulas.  The loops are fused per row so no temporaries beyond two work
arrays are allocated.
"""

import numpy as np

cimport numpy as cnp

name = "cython"
compiled = True


cdef void _transport_half(double[:, ::1] f, double[:, ::1] out, double[::1] c,
                          bint periodic, cnp.intp_t[::1] mirror) noexcept nogil:
    cdef Py_ssize_t nx = f.shape[0], nv = f.shape[1], i, j
    cdef double cc, up, down
    for i in range(nx):
        for j in range(nv):
            cc = c[j]
            if cc > 0.0:
                if i > 0:
                    up = f[i - 1, j]
                elif periodic:
                    up = f[nx - 1, j]
                else:
                    up = f[0, mirror[j]]
                out[i, j] = f[i, j] - cc * (f[i, j] - up)
            else:
                if i < nx - 1:
                    down = f[i + 1, j]
                elif periodic:
                    down = f[0, j]
                else:
                    down = f[nx - 1, mirror[j]]
                out[i, j] = f[i, j] - cc * (down - f[i, j])


cdef void _collide(double[:, ::1] f, double[:, ::1] out, double[::1] bp,
                   double[::1] bm, double r, double k) noexcept nogil:
    cdef Py_ssize_t nx = f.shape[0], nv = f.shape[1], i, j
    cdef double jleft, jright
    for i in range(nx):
        jleft = 0.0  # zero-flux wall at the lower velocity edge
        for j in range(nv - 1):
            jright = bm[j] * f[i, j + 1] * (1.0 + k * f[i, j]) \
                - bp[j] * f[i, j] * (1.0 + k * f[i, j + 1])
            out[i, j] = f[i, j] + r * (jright - jleft)
            jleft = jright
        out[i, nv - 1] = f[i, nv - 1] - r * jleft


def strang_step(double[:, ::1] f, double[::1] c, double[::1] bp,
                double[::1] bm, double dt_over_dv, double k, bint periodic,
                cnp.intp_t[::1] mirror):
    """One transport/collision/transport step; returns a new array."""
    out = np.empty((f.shape[0], f.shape[1]), dtype=np.float64)
    work = np.empty_like(out)
    cdef double[:, ::1] out_v = out
    cdef double[:, ::1] work_v = work
    with nogil:
        _transport_half(f, work_v, c, periodic, mirror)
        _collide(work_v, out_v, bp, bm, dt_over_dv, k)
        _transport_half(out_v, work_v, c, periodic, mirror)
    return work
