"""Phase-space solver (one space and one velocity dimension) and the
integral diagnostics attached to it: moments, entropy, free energy, the
free-energy gap to a reference Maxwellian, the Lyapunov value, and the
boundary fluxes of energy, mass and entropy.

The grid is cell-centered in both directions.  Velocity cells are placed
symmetrically about 0, so reversing v is an exact index permutation; this
makes the bounce-back wall fluxes cancel pairwise in floating point and
the scheme exactly conservative.  Phase-space integrals are equal-weight
cell sums (the trapezoidal rule for the periodic/decaying samples living
on this grid), which are exponentially accurate for the rapidly decaying
profiles the model produces.

The time stepper is Strang-split: half-step upwind transport, one
collision step in flux form with exponentially fitted face weights and
zero-flux velocity walls, half-step transport.  Sampled Maxwellians are
discrete stationary states by construction.  The admissibility constraints
f >= 0 and 1 + k f >= 0 are enforced by a post-step clamp whose adjusted
mass is accounted for in the diagnostics.

The diagnostics are pure functions; a run advances its own state and must
be driven from one thread at a time, but distinct runs are independent and
records are immutable values.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from . import backends
from .equilibrium import MaxwellianSpec

__all__ = [
    "BOUNCE_BACK",
    "PERIODIC",
    "StepSizeError",
    "AdmissibilityError",
    "MassMismatchError",
    "SimulationAborted",
    "PhaseGrid",
    "DistributionField",
    "DiagnosticRecord",
    "Moments",
    "BoundaryFluxes",
    "Classification",
    "SimulationConfig",
    "moments",
    "entropy",
    "free_energy",
    "divergence_from_equilibrium",
    "lyapunov_value",
    "boundary_fluxes",
    "classify",
    "fermion_bound_check",
    "sample_maxwellian",
    "solve_grid_maxwellian",
    "cfl_limit",
    "step",
    "run",
    "decay_flag",
    "count_decay_violations",
    "make_initial_field",
    "simulate",
]

BOUNCE_BACK = "bounce_back"
PERIODIC = "periodic"

# Pointwise guards realising the conventions f log f = 0 at f = 0 and
# (1 + k f) log(1 + k f) = 0 at 1 + k f = 0.
_LOG_FLOOR = 1e-300
# Post-step clamp tolerance on the admissibility constraints.
_CLAMP_TOL = 1e-14
# Density floor below which the mean velocity is reported as absent.
_RHO_FLOOR = 1e-14

_FLUX_TOL = 1e-12  # default |A| tolerance for the conservative/dissipative split


class StepSizeError(ValueError):
    """dt violates the stability contract of the split scheme."""


class AdmissibilityError(ValueError):
    """A field violates f >= 0 or 1 + k f >= 0 beyond the clamp tolerance."""


class MassMismatchError(ValueError):
    """Field and reference total masses differ beyond the allowed tolerance."""


class SimulationAborted(RuntimeError):
    """A step failed mid-run; carries the diagnostics recorded so far."""

    def __init__(self, message, records):
        super().__init__(message)
        self.records = records


@dataclass(frozen=True)
class PhaseGrid:
    """Cell-centered tensor grid over [0, L] x [-v_max, v_max]."""

    x_nodes: int
    L: float
    v_nodes: int
    v_max: float

    def __post_init__(self):
        if self.x_nodes < 2 or self.v_nodes < 2:
            raise ValueError("need at least 2 cells per direction")
        if self.L <= 0:
            raise ValueError(f"domain length must be positive, got {self.L}")
        if math.exp(-0.5 * self.v_max**2) >= 1e-12:
            raise ValueError(
                f"v_max = {self.v_max} truncates the velocity tails too "
                "early; need exp(-v_max^2/2) < 1e-12 (v_max >= 7.434)"
            )

    @property
    def dx(self):
        return self.L / self.x_nodes

    @property
    def dv(self):
        return 2.0 * self.v_max / self.v_nodes

    @property
    def cell_area(self):
        return self.dx * self.dv

    @property
    def x(self):
        return (np.arange(self.x_nodes) + 0.5) * self.dx

    @property
    def v(self):
        # Symmetric construction: v[j] == -v[mirror(j)] exactly in floats.
        return (np.arange(self.v_nodes) - 0.5 * (self.v_nodes - 1)) * self.dv

    @property
    def mirror(self):
        return np.arange(self.v_nodes - 1, -1, -1, dtype=np.intp)


@dataclass
class DistributionField:
    """Nonnegative phase-space samples with their quantum parameter.

    ``clamped_mass`` accumulates the |adjustment| the admissibility clamp
    applied over the field's history.
    """

    values: np.ndarray
    k: float
    clamped_mass: float = 0.0

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError("field values must be a 2D (x, v) array")
        validate_admissible(self.values, self.k)


def validate_admissible(values, k, tol=_CLAMP_TOL):
    if not np.all(np.isfinite(values)):
        raise AdmissibilityError("field contains non-finite values")
    vmin = float(values.min())
    if vmin < -tol:
        raise AdmissibilityError(f"field has negative values (min {vmin:.3e})")
    if k < 0.0:
        vmax = float(values.max())
        cap = 1.0 / (-k)
        if vmax > cap * (1.0 + 1e-9) + tol:
            raise AdmissibilityError(
                f"fermion saturation violated: max f = {vmax:.12g} exceeds "
                f"1/|k| = {cap:.12g} beyond the clamp tolerance"
            )


@dataclass(frozen=True)
class Moments:
    rho_x: np.ndarray
    rho_total: float
    u_x: np.ndarray  # NaN where the density is below the floor
    E_x: np.ndarray
    E_total: float


@dataclass(frozen=True)
class BoundaryFluxes:
    A: float  # energy
    B: float  # mass
    U: float  # entropy


@dataclass(frozen=True)
class Classification:
    dissipative: bool
    conservative: bool


@dataclass(frozen=True)
class DiagnosticRecord:
    """Per-output-time totals in the order of the CSV contract."""

    t: float
    rho: float
    E: float
    S: float
    F: float
    G: float
    Gtilde: float
    A: float
    B: float
    U: float
    mass_error: float
    u_profile: np.ndarray = field(repr=False, compare=False, default=None)
    decay_violation: bool = False

    CSV_HEADER = "t,rho,E,S,F,G,Gtilde,A,B,U,mass_error"

    def csv_row(self):
        cols = (self.t, self.rho, self.E, self.S, self.F, self.G,
                self.Gtilde, self.A, self.B, self.U, self.mass_error)
        return ",".join(f"{c:.17g}" for c in cols)


# ---------------------------------------------------------------------------
# integral diagnostics


def _xlogx(a):
    out = np.zeros_like(a)
    mask = a > _LOG_FLOOR
    out[mask] = a[mask] * np.log(a[mask])
    return out


def entropy_density(f, k):
    """Pointwise integrand of the entropy: f log f for k = 0, and
    f log f - (1/k)(1+kf) log(1+kf) + f otherwise, with the zero-argument
    conventions applied."""
    f = np.asarray(f, dtype=float)
    if k == 0.0:
        return _xlogx(f)
    return _xlogx(f) - _xlogx(1.0 + k * f) / k + f


def saturation_density(f, k):
    """r log r - (1/k)(1+kr) log(1+kr): the convex profile entering the
    fermion boundedness estimate (the entropy integrand minus f)."""
    f = np.asarray(f, dtype=float)
    return _xlogx(f) - _xlogx(1.0 + k * f) / k


def moments(fld: DistributionField, grid: PhaseGrid) -> Moments:
    """Velocity and space integrals of f, v f and |v|^2 f / 2.

    The mean velocity is NaN wherever the local density falls below the
    floor 1e-14.
    """
    f = fld.values
    dv, dx = grid.dv, grid.dx
    rho_x = f.sum(axis=1) * dv
    mom_x = f @ grid.v * dv
    E_x = f @ (0.5 * grid.v**2) * dv
    with np.errstate(invalid="ignore", divide="ignore"):
        u_x = np.where(rho_x > _RHO_FLOOR, mom_x / rho_x, np.nan)
    return Moments(
        rho_x=rho_x,
        rho_total=float(rho_x.sum() * dx),
        u_x=u_x,
        E_x=E_x,
        E_total=float(E_x.sum() * dx),
    )


def entropy(fld: DistributionField, grid: PhaseGrid) -> float:
    """S = -integral of the entropy density over phase space."""
    return float(-entropy_density(fld.values, fld.k).sum() * grid.cell_area)


def free_energy(fld: DistributionField, grid: PhaseGrid) -> float:
    """S - E."""
    return entropy(fld, grid) - moments(fld, grid).E_total


def divergence_from_equilibrium(fld: DistributionField, ref: MaxwellianSpec,
                                grid: PhaseGrid) -> float:
    """Free-energy gap F(M) - F(f) to the reference Maxwellian.

    Nonnegative for admissible fields of the same total mass and zero only
    when f equals the sampled Maxwellian; requires the total masses to
    agree within 1e-6 relative.
    """
    if ref.k != fld.k:
        raise ValueError("field and reference carry different quantum parameters")
    ref_field = DistributionField(sample_maxwellian(ref, grid), k=ref.k)
    mass_f = moments(fld, grid).rho_total
    mass_m = moments(ref_field, grid).rho_total
    if abs(mass_f - mass_m) > 1e-6 * abs(mass_m):
        raise MassMismatchError(
            f"total masses differ: field {mass_f:.12g} vs reference "
            f"{mass_m:.12g}; the gap is only a distance at equal mass"
        )
    return free_energy(ref_field, grid) - free_energy(fld, grid)


def lyapunov_value(fld: DistributionField, reference_level: float,
                   grid: PhaseGrid) -> float:
    """Lyapunov value: reference free-energy level minus F(f)."""
    return reference_level - free_energy(fld, grid)


def boundary_fluxes(fld: DistributionField, grid: PhaseGrid) -> BoundaryFluxes:
    """Outward boundary fluxes from the endpoint traces of the field.

    In one space dimension the surface integrals reduce to differences
    between the two endpoint slices:

        A = int (v^2/2) v [f(L,v) - f(0,v)] dv      (energy)
        B = int v [f(L,v) - f(0,v)] dv              (mass)
        U = -int v [Phi(f(L,v)) - Phi(f(0,v))] dv   (entropy)

    evaluated by the grid's quadrature.  x-uniform fields give exact zeros.
    """
    f0 = fld.values[0, :]
    fL = fld.values[-1, :]
    v, dv = grid.v, grid.dv
    diff = fL - f0
    A = float(np.dot(0.5 * v**2 * v, diff) * dv)
    B = float(np.dot(v, diff) * dv)
    phi_diff = entropy_density(fL, fld.k) - entropy_density(f0, fld.k)
    U = float(-np.dot(v, phi_diff) * dv)
    return BoundaryFluxes(A=A, B=B, U=U)


def _wall_fluxes(values, k, grid: PhaseGrid, bc) -> BoundaryFluxes:
    """Boundary fluxes of the discrete scheme: the upwind wall values that
    actually enter the transport budget.  Bounce-back and periodic walls
    cancel these identically."""
    v, dv = grid.v, grid.dv
    mirror = grid.mirror
    outgoing_left = v < 0.0
    if bc == PERIODIC:
        ghost_left = values[-1, :]
        ghost_right = values[0, :]
    else:
        ghost_left = values[0, mirror]
        ghost_right = values[-1, mirror]
    f_left = np.where(outgoing_left, values[0, :], ghost_left)
    f_right = np.where(outgoing_left, ghost_right, values[-1, :])

    half_v2 = 0.5 * v**2
    A = float((np.dot(half_v2 * v, f_right) - np.dot(half_v2 * v, f_left)) * dv)
    B = float((np.dot(v, f_right) - np.dot(v, f_left)) * dv)
    U = float(-(np.dot(v, entropy_density(f_right, k))
                - np.dot(v, entropy_density(f_left, k))) * dv)
    return BoundaryFluxes(A=A, B=B, U=U)


def classify(records, tol=_FLUX_TOL) -> Classification:
    """Dissipative: A >= -tol at every record; conservative: |A| <= tol at
    every record.  Conservative series are dissipative by construction."""
    if not records:
        raise ValueError("cannot classify an empty diagnostic series")
    a = np.array([r.A for r in records])
    conservative = bool(np.all(np.abs(a) <= tol))
    dissipative = bool(np.all(a >= -tol))
    return Classification(dissipative=dissipative, conservative=conservative)


def fermion_bound_check(fld: DistributionField, grid: PhaseGrid) -> float:
    """Worst-case slack of the fermion pointwise bound
    -|v|^2 f / 2 - s(f) <= e^{-|v|^2/2}, i.e. the grid minimum of
    e^{-|v|^2/2} + |v|^2 f / 2 + s(f).  Nonnegative (to within 1e-12) for
    every admissible field with k < 0."""
    if fld.k >= 0.0:
        raise ValueError("the saturation bound is a fermion (k < 0) statement")
    half_v2 = 0.5 * grid.v**2
    slack = (np.exp(-half_v2)[None, :]
             + half_v2[None, :] * fld.values
             + saturation_density(fld.values, fld.k))
    return float(slack.min())


# ---------------------------------------------------------------------------
# Maxwellian sampling


def sample_maxwellian(spec: MaxwellianSpec, grid: PhaseGrid) -> np.ndarray:
    """x-uniform grid samples of the Maxwellian profile."""
    g = spec.C * np.exp(-0.5 * grid.v**2)
    profile = g / (1.0 - spec.k * g)
    return np.tile(profile, (grid.x_nodes, 1))


def solve_grid_maxwellian(grid: PhaseGrid, k: float,
                          total_mass: float) -> MaxwellianSpec:
    """Maxwellian whose *grid* mass equals ``total_mass`` exactly.

    Matching in grid quadrature (rather than the continuum constraint)
    makes the free-energy gap to this reference exactly nonnegative for
    every same-mass grid field, which is what the Lyapunov diagnostics
    need.  The scalar equation is strictly monotone in C and solved by
    bracketing.
    """
    if total_mass <= 0:
        raise ValueError("total mass must be positive")
    ev = np.exp(-0.5 * grid.v**2)
    weight = grid.x_nodes * grid.cell_area

    def mass_of(C):
        g = C * ev
        return float(np.sum(g / (1.0 - k * g)) * weight)

    rough = total_mass / (weight * float(ev.sum()))  # classical guess
    if k > 0.0:
        cap = (1.0 - 1e-12) / (k * float(ev.max()))
        hi = cap
        if mass_of(hi) <= total_mass:
            raise ValueError(
                "no admissible grid Maxwellian reaches this mass below the "
                "critical point k*C = 1"
            )
        lo = 0.0
    else:
        lo, hi = 0.0, max(rough, 1e-30)
        for _ in range(300):
            if mass_of(hi) > total_mass:
                break
            hi *= 2.0
        else:
            raise RuntimeError("bracket expansion failed")
    C = brentq(lambda C: mass_of(C) - total_mass, lo, hi,
               xtol=1e-280, rtol=4 * np.finfo(float).eps, maxiter=300)
    return MaxwellianSpec(C=C, k=k)


# ---------------------------------------------------------------------------
# time stepping


def cfl_limit(fld: DistributionField, grid: PhaseGrid) -> float:
    """Largest admissible dt: 0.9 * min(dx / v_max, dv^2 / 2,
    dv / (v_max (1 + |k| max f)))."""
    f_max = float(fld.values.max(initial=0.0))
    denom = grid.v_max * (1.0 + abs(fld.k) * f_max)
    return 0.9 * min(grid.dx / grid.v_max, 0.5 * grid.dv**2, grid.dv / denom)


def _face_factors(grid: PhaseGrid):
    """Exponential fitting weights B(+-dphi)/dv at the interior v-faces."""
    v = grid.v
    dphi = 0.5 * (v[1:] + v[:-1]) * grid.dv  # potential increment per face
    return _bernoulli(dphi) / grid.dv, _bernoulli(-dphi) / grid.dv


def _bernoulli(x):
    # x / (e^x - 1), with the small-x limit series to avoid 0/0.
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-8
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - 0.5 * x, safe / np.expm1(safe))


class _Stepper:
    """Precomputed per-run arrays plus the chosen kernel."""

    def __init__(self, grid: PhaseGrid, k: float, dt: float, bc: str,
                 backend=None):
        if bc not in (BOUNCE_BACK, PERIODIC):
            raise ValueError(f"unknown boundary condition {bc!r}")
        self.grid = grid
        self.k = k
        self.dt = dt
        self.bc = bc
        self.backend = backend or backends.default_backend()
        self.c = grid.v * (0.5 * dt / grid.dx)
        bp, bm = _face_factors(grid)
        self.bp, self.bm = bp, bm
        self.dt_over_dv = dt / grid.dv
        self.mirror = grid.mirror
        if k < 0.0:
            self.cap = 1.0 / (-k) - _CLAMP_TOL
        else:
            self.cap = np.inf

    def advance(self, values):
        """One step; returns (new_values, clamped_mass)."""
        out = self.backend.strang_step(
            values, self.c, self.bp, self.bm, self.dt_over_dv, self.k,
            self.bc == PERIODIC, self.mirror,
        )
        out = np.asarray(out)
        if self.k < 0.0:
            overshoot = float(out.max(initial=0.0)) - 1.0 / (-self.k)
            if overshoot > 1e-9 / (-self.k):
                raise AdmissibilityError(
                    f"fermion saturation violated by {overshoot:.3e}; "
                    "beyond what the clamp may absorb"
                )
        clipped = np.clip(out, 0.0, self.cap)
        clamped = float(np.abs(out - clipped).sum() * self.grid.cell_area)
        return clipped, clamped


def step(fld: DistributionField, grid: PhaseGrid, dt: float,
         bc: str = BOUNCE_BACK, backend=None) -> DistributionField:
    """Advance one Strang-split step and return the new admissible field.

    Raises :class:`StepSizeError` when dt violates the stability contract
    and :class:`AdmissibilityError` if the fermion saturation bound is
    overrun beyond the clamp tolerance.
    """
    limit = cfl_limit(fld, grid)
    if dt > limit:
        raise StepSizeError(
            f"dt = {dt:.6g} exceeds the stability contract {limit:.6g}"
        )
    stepper = _Stepper(grid, fld.k, dt, bc, backend=backend)
    values, clamped = stepper.advance(fld.values)
    return DistributionField(values=values, k=fld.k,
                             clamped_mass=fld.clamped_mass + clamped)


def _diagnostic_record(values, k, grid, bc, t, c_ref, ref_field, rho0,
                       clamped_mass):
    fld = DistributionField(values, k=k, clamped_mass=clamped_mass)
    mom = moments(fld, grid)
    S = entropy(fld, grid)
    F = S - mom.E_total
    if ref_field is not None:
        G = free_energy(ref_field, grid) - F
    else:
        G = math.nan
    walls = _wall_fluxes(values, k, grid, bc)
    if rho0 > 0:
        # relative drift plus whatever the admissibility clamp adjusted
        mass_error = abs(mom.rho_total - rho0) / rho0 + clamped_mass / rho0
    else:
        mass_error = 0.0
    return DiagnosticRecord(
        t=t, rho=mom.rho_total, E=mom.E_total, S=S, F=F, G=G,
        Gtilde=c_ref - F, A=walls.A, B=walls.B, U=walls.U,
        mass_error=mass_error, u_profile=mom.u_x,
    )


def run(initial: DistributionField, grid: PhaseGrid, bc: str, dt: float,
        t_final: float, reference: MaxwellianSpec = None,
        output_interval: float = None, backend=None, decay_tol=1e-8,
        keep_final=False):
    """Advance to ``t_final``, recording diagnostics every output interval.

    The Lyapunov reference is ``reference`` when given, otherwise the
    Maxwellian whose grid mass matches the initial field.  Records whose
    Lyapunov decrement violates dG/dt <= U - A (within ``decay_tol``) are
    flagged.  A failed step aborts the run by raising
    :class:`SimulationAborted` with the partial series attached.
    With ``keep_final`` the return value is (records, final_field).
    """
    if output_interval is None:
        output_interval = t_final / 200.0 if t_final > 0 else 1.0
    values = initial.values.copy()
    k = initial.k
    rho0 = float(values.sum() * grid.cell_area)
    if reference is None:
        reference = solve_grid_maxwellian(grid, k, rho0)
    ref_field = DistributionField(sample_maxwellian(reference, grid), k=k)
    c_ref = free_energy(ref_field, grid)

    records = [_diagnostic_record(values, k, grid, bc, 0.0, c_ref, ref_field,
                                  rho0, initial.clamped_mass)]
    stepper = _Stepper(grid, k, dt, bc, backend=backend)
    clamped = initial.clamped_mass
    t = 0.0
    next_output = output_interval
    while t < t_final - 1e-12 * max(t_final, 1.0):
        dt_step = min(dt, t_final - t)
        try:
            fld_now = DistributionField(values, k=k, clamped_mass=clamped)
            limit = cfl_limit(fld_now, grid)
            if dt_step > limit:
                raise StepSizeError(
                    f"dt = {dt_step:.6g} exceeds the stability contract "
                    f"{limit:.6g} at t = {t:.6g}"
                )
            if dt_step < dt:
                final_stepper = _Stepper(grid, k, dt_step, bc, backend=backend)
                values, dclamp = final_stepper.advance(values)
            else:
                values, dclamp = stepper.advance(values)
        except (StepSizeError, AdmissibilityError) as exc:
            raise SimulationAborted(str(exc), records) from exc
        clamped += dclamp
        t += dt_step
        if t >= next_output - 1e-12 or t >= t_final - 1e-12:
            rec = _diagnostic_record(values, k, grid, bc, t, c_ref, ref_field,
                                     rho0, clamped)
            if decay_flag(records[-1], rec, tol=decay_tol):
                rec = replace(rec, decay_violation=True)
            records.append(rec)
            while next_output <= t + 1e-12:
                next_output += output_interval
    if keep_final:
        return records, DistributionField(values, k=k, clamped_mass=clamped)
    return records


def decay_flag(prev: DiagnosticRecord, rec: DiagnosticRecord, tol=1e-8):
    """True when the Lyapunov increment between two records exceeds what the
    decay inequality dG/dt <= U - A allows (within ``tol``).

    A positive entropy inflow U legitimises growth, so such records are not
    flagged.
    """
    span = rec.t - prev.t
    return rec.Gtilde - prev.Gtilde > (rec.U - rec.A) * span + tol


def count_decay_violations(records):
    return sum(1 for r in records if r.decay_violation)


# ---------------------------------------------------------------------------
# configured simulations (structured front end used by the CLI)


@dataclass(frozen=True)
class SimulationConfig:
    """Run description: grid, model, time controls, boundary kind and the
    initial-condition selector."""

    x_nodes: int = 128
    v_nodes: int = 128
    length: float = 1.0
    v_max: float = 8.0
    k: float = -0.5
    rho: float = 1.0
    dt: float = None  # None selects the stability-contract limit
    t_final: float = 20.0
    output_interval: float = 0.1
    boundary: str = BOUNCE_BACK
    initial: str = "modulated"  # maxwellian | modulated | shifted_gaussian
    amplitude: float = 0.3
    mode: int = 1
    v_shift: float = 0.0

    def grid(self) -> PhaseGrid:
        return PhaseGrid(x_nodes=self.x_nodes, L=self.length,
                         v_nodes=self.v_nodes, v_max=self.v_max)

    def metadata(self):
        """Key/value pairs recorded as comment lines in emitted CSV."""
        return {
            "x_nodes": self.x_nodes, "v_nodes": self.v_nodes,
            "length": self.length, "v_max": self.v_max, "k": self.k,
            "rho": self.rho, "dt": "auto" if self.dt is None else self.dt,
            "t_final": self.t_final, "output_interval": self.output_interval,
            "boundary": self.boundary, "initial": self.initial,
            "amplitude": self.amplitude, "mode": self.mode,
            "v_shift": self.v_shift,
        }


def make_initial_field(config: SimulationConfig, grid: PhaseGrid = None):
    """Build the configured initial condition, renormalised to the target
    total mass and validated for admissibility."""
    grid = grid or config.grid()
    spec = solve_grid_maxwellian(grid, config.k, config.rho)
    if config.initial == "maxwellian":
        values = sample_maxwellian(spec, grid)
    elif config.initial == "modulated":
        profile = 1.0 + config.amplitude * np.cos(
            2.0 * math.pi * config.mode * grid.x / grid.L)
        values = sample_maxwellian(spec, grid) * profile[:, None]
    elif config.initial == "shifted_gaussian":
        g = spec.C * np.exp(-0.5 * (grid.v - config.v_shift) ** 2)
        profile = g / (1.0 - config.k * g)
        values = np.tile(profile, (grid.x_nodes, 1))
    else:
        raise ValueError(f"unknown initial condition {config.initial!r}")
    mass = float(values.sum() * grid.cell_area)
    values *= config.rho / mass
    return DistributionField(values=values, k=config.k), spec


def simulate(config: SimulationConfig, backend=None):
    """Run a configured simulation; returns (records, final_field, grid).

    Step failures propagate as :class:`SimulationAborted`.
    """
    grid = config.grid()
    initial, spec = make_initial_field(config, grid)
    dt = config.dt if config.dt is not None else cfl_limit(initial, grid)
    records, final = run(initial, grid, config.boundary, dt, config.t_final,
                         reference=spec, output_interval=config.output_interval,
                         backend=backend, keep_final=True)
    return records, final, grid
