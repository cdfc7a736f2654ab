"""Global Maxwellian equilibria at fixed total density.

The stationary states of the kinetic model are velocity profiles

    M(v) = C e^{-|v|^2/2} / (1 - k C e^{-|v|^2/2}),

where k > 0 selects boson statistics, k < 0 fermion statistics and k = 0
the classical Gaussian.  The constant C is pinned by the total-density
constraint

    (2 pi)^{n/2} * V * C * L_{n/2}(k C) = rho,

a strictly monotone scalar equation solved here by bracketed root finding.
(C plays the role of e^{-mu} for the chemical potential mu.)  The module
also evaluates the closed forms for the equilibrium energy, entropy and
free energy, their small-k expansions, and the ordering inequalities
between the classical and quantum values that the test suite verifies
numerically.

Everything here is pure and stateless; sweep rows may be computed
concurrently.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import specfun

__all__ = [
    "SupercriticalDensityError",
    "SolverError",
    "ModelParams",
    "ClassicalReference",
    "MaxwellianSpec",
    "EquilibriumSolution",
    "AsymptoticSlopes",
    "SweepRow",
    "classical_reference",
    "normalization_residual",
    "solve_normalization",
    "maxwellian_value",
    "equilibrium_energy",
    "equilibrium_entropy",
    "equilibrium_free_energy",
    "asymptotic_predictions",
    "k_for_degeneracy",
    "sweep",
]

_RESIDUAL_RTOL = 1e-10  # contract: |residual| <= 1e-10 * rho for solutions
_BRACKET_EPS = 1e-12    # boson bracket stops at kC = 1 - eps


class SupercriticalDensityError(ValueError):
    """Boson density too large: no admissible constant below the critical
    point k*C = 1."""


class SolverError(RuntimeError):
    """The root finder failed to meet the residual contract."""


@dataclass(frozen=True)
class ModelParams:
    """Model inputs: quantum parameter, velocity dimension, domain volume
    and target total density."""

    k: float
    n: int = 1
    volume: float = 1.0
    rho: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"velocity dimension must be >= 1, got {self.n}")
        if self.volume <= 0:
            raise ValueError(f"domain volume must be positive, got {self.volume}")
        if self.rho <= 0:
            raise ValueError(f"total density must be positive, got {self.rho}")


@dataclass(frozen=True)
class ClassicalReference:
    """Classical (k = 0) constant, energy, entropy and free energy."""

    C0: float
    E: float
    S: float
    F: float


@dataclass(frozen=True)
class MaxwellianSpec:
    """Constant and quantum parameter of one admissible Maxwellian."""

    C: float
    k: float

    def __post_init__(self):
        if self.C <= 0:
            raise ValueError(f"constant must be positive, got {self.C}")
        if 1.0 - self.k * self.C <= 0:
            raise ValueError(
                f"inadmissible pair: need k*C < 1, got k*C = {self.k * self.C}"
            )


@dataclass(frozen=True)
class EquilibriumSolution:
    params: ModelParams
    C_k: float
    kC: float
    E_q: float
    S_q: float
    F_q: float
    classical: ClassicalReference
    residual: float

    @property
    def spec(self) -> MaxwellianSpec:
        return MaxwellianSpec(C=self.C_k, k=self.params.k)


@dataclass(frozen=True)
class AsymptoticSlopes:
    """First-order small-k coefficients of E_q - E_c, S_q - S_c, F_q - F_c."""

    dE: float
    dS: float
    dF: float


def classical_reference(params: ModelParams) -> ClassicalReference:
    """Closed-form classical quantities: C0 = (2 pi)^{-n/2} rho / V,
    E = n rho / 2, S = E - rho log C0, F = S - E."""
    n, volume, rho = params.n, params.volume, params.rho
    C0 = (2.0 * math.pi) ** (-n / 2.0) * rho / volume
    E = 0.5 * n * rho
    S = E - rho * math.log(C0)
    return ClassicalReference(C0=C0, E=E, S=S, F=S - E)


def normalization_residual(params: ModelParams, C: float) -> float:
    """(2 pi)^{n/2} V C L_{n/2}(k C) - rho, the defect of the density
    constraint at a trial constant."""
    prefactor = (2.0 * math.pi) ** (params.n / 2.0) * params.volume
    return prefactor * C * specfun.polylog(params.n / 2.0, params.k * C) - params.rho


def solve_normalization(params: ModelParams) -> EquilibriumSolution:
    """Solve the density constraint for the unique admissible constant.

    The left-hand side is strictly increasing in C on the admissible
    bracket, so a sign change pins the root: bosons are bracketed by
    (0, (1 - eps)/k) and fermions by (0, C_up) with C_up doubled until the
    constraint overshoots.  For bosons with n > 2 the solvability condition
    (2 pi)^{n/2} V L_{n/2}(1) > k rho is checked first; violating it raises
    :class:`SupercriticalDensityError`.

    The returned solution satisfies |residual| <= 1e-10 * rho.
    """
    k, n, volume, rho = params.k, params.n, params.volume, params.rho
    classical = classical_reference(params)

    if k == 0.0:
        C = classical.C0
        E = classical.E
        return EquilibriumSolution(
            params=params, C_k=C, kC=0.0, E_q=E, S_q=classical.S,
            F_q=classical.F, classical=classical, residual=0.0,
        )

    def constraint(C):
        return normalization_residual(params, C)

    if k > 0.0:
        if n > 2:
            critical = (2.0 * math.pi) ** (n / 2.0) * volume \
                * specfun.polylog(n / 2.0, 1.0)
            if critical <= k * rho:
                raise SupercriticalDensityError(
                    f"supercritical density: k*rho = {k * rho:.6g} reaches the "
                    f"solvability bound (2*pi)^(n/2)*V*L(1) = {critical:.6g}; "
                    "no admissible constant exists below the critical point "
                    "k*C = 1"
                )
        hi = (1.0 - _BRACKET_EPS) / k
        if constraint(hi) <= 0.0:
            # Mathematically solvable but the root sits within 1e-12 of the
            # critical point; refuse rather than return garbage.
            raise SupercriticalDensityError(
                "density is numerically indistinguishable from the critical "
                "point k*C = 1; cannot resolve the constant"
            )
    else:
        hi = classical.C0
        for _ in range(1200):
            if constraint(hi) > 0.0:
                break
            if hi > 1e300:
                # Deeply degenerate fermions need constants beyond double
                # range; refuse rather than overflow.
                raise SolverError(
                    "constant exceeds the double-precision range; the "
                    "density is too degenerate to represent"
                )
            hi *= 2.0
        else:
            raise SolverError("fermion bracket expansion failed to overshoot")

    C = brentq(constraint, 0.0, hi, xtol=1e-280, rtol=4 * np.finfo(float).eps,
               maxiter=300)
    residual = constraint(C)
    if abs(residual) > _RESIDUAL_RTOL * rho:
        raise SolverError(
            f"root residual {residual:.3e} exceeds {_RESIDUAL_RTOL:g} * rho"
        )

    kC = k * C
    E = _energy_from_constant(params, kC)
    S = _entropy_from_constant(params, C, E)
    return EquilibriumSolution(
        params=params, C_k=C, kC=kC, E_q=E, S_q=S, F_q=S - E,
        classical=classical, residual=residual,
    )


def _energy_from_constant(params: ModelParams, kC: float) -> float:
    n, rho = params.n, params.rho
    if params.k == 0.0:
        return 0.5 * n * rho
    ratio = specfun.polylog(n / 2.0 + 1.0, kC) / specfun.polylog(n / 2.0, kC)
    return 0.5 * n * rho * ratio


def _entropy_from_constant(params: ModelParams, C: float, E: float) -> float:
    # The k = 0 entropy uses the classical closed form directly; the quantum
    # expression has a removable 0/0 there.
    if params.k == 0.0:
        return E - params.rho * math.log(C)
    return (1.0 + 2.0 / params.n) * E - (1.0 + math.log(C)) * params.rho


def maxwellian_value(spec: MaxwellianSpec, v):
    """Maxwellian profile g / (1 - k g) with g = C e^{-|v|^2/2}.

    ``v`` is a velocity vector (last axis = components) or a scalar speed.
    """
    v = np.asarray(v, dtype=float)
    vsq = v * v if v.ndim == 0 else np.sum(v * v, axis=-1)
    g = spec.C * np.exp(-0.5 * vsq)
    return g / (1.0 - spec.k * g)


def equilibrium_energy(sol: EquilibriumSolution) -> float:
    """Total energy (n rho / 2) L_{n/2+1}(kC) / L_{n/2}(kC); the classical
    value n rho / 2 at k = 0."""
    return _energy_from_constant(sol.params, sol.kC)


def equilibrium_entropy(sol: EquilibriumSolution) -> float:
    """Equilibrium entropy (1 + 2/n) E_q - (1 + log C) rho for k != 0 and
    the classical form E - rho log C0 at k = 0."""
    E = _energy_from_constant(sol.params, sol.kC)
    return _entropy_from_constant(sol.params, sol.C_k, E)


def equilibrium_free_energy(sol: EquilibriumSolution) -> float:
    """Free energy S_q - E_q."""
    return equilibrium_entropy(sol) - equilibrium_energy(sol)


def asymptotic_predictions(params: ModelParams) -> AsymptoticSlopes:
    """First-order coefficients of the small-k expansions

        E_q - E_c = k * dE + O(k^2),   dE = -n rho C0 / (4 * 2^{n/2}),
        S_q - S_c = k * dS + O(k^2),   dS = -(n-2) rho C0 / (4 * 2^{n/2}),
        F_q - F_c = k * dF + O(k^2),   dF = rho C0 / (2 * 2^{n/2}).

    The entropy coefficient vanishes at n = 2.
    """
    n, rho = params.n, params.rho
    C0 = classical_reference(params).C0
    scale = rho * C0 / 2.0 ** (n / 2.0)
    return AsymptoticSlopes(
        dE=-n * scale / 4.0,
        dS=-(n - 2) * scale / 4.0,
        dF=scale / 2.0,
    )


def k_for_degeneracy(z: float, n: int = 1, volume: float = 1.0,
                     rho: float = 1.0) -> float:
    """Quantum parameter whose solved constant satisfies k C_k = z.

    Inverts the density constraint in closed form: given the target product
    z < 1, the constant is C = rho / ((2 pi)^{n/2} V L_{n/2}(z)) and
    k = z / C.  Useful for building sweeps that span a prescribed range of
    k C_k, including the fermion critical point z = -1.
    """
    if z >= 1.0:
        raise ValueError(f"degeneracy parameter must be < 1, got {z}")
    prefactor = (2.0 * math.pi) ** (n / 2.0) * volume
    C = rho / (prefactor * specfun.polylog(n / 2.0, z))
    return z / C


@dataclass(frozen=True)
class SweepRow:
    """One sweep entry: solved quantities plus per-inequality verdicts.

    Verdict fields are ``None`` where the corresponding inequality is not
    claimed (k = 0, outside the -1 <= kC < 1 window for the energy
    ordering, |k| above the small-k window for the entropy/free-energy
    orderings, or an empty premise in the constant bounds).
    """

    k: float
    status: str  # "ok" or "supercritical"
    C_k: float
    kC: float
    E_q: float
    S_q: float
    F_q: float
    C_0: float
    E_c: float
    S_c: float
    F_c: float
    residual: float
    in_window: bool
    energy_ok: bool | None
    bounds_ok: bool | None
    entropy_ok: bool | None
    free_energy_ok: bool | None

    def violations(self):
        """Names of the claimed inequalities this row violates."""
        out = []
        for name in ("energy_ok", "bounds_ok", "entropy_ok", "free_energy_ok"):
            if getattr(self, name) is False:
                out.append(name)
        return out


def sweep(k_values, n: int = 1, volume: float = 1.0, rho: float = 1.0,
          small_k: float = 0.05):
    """Solve the constraint for each k and evaluate the ordering verdicts.

    Returns one :class:`SweepRow` per k, in order.  Supercritical boson
    entries are reported with ``status = "supercritical"`` and NaN
    quantities rather than aborting the sweep.  ``small_k`` bounds the |k|
    window in which the entropy and free-energy orderings are claimed.
    """
    rows = []
    for k in k_values:
        params = ModelParams(k=float(k), n=n, volume=volume, rho=rho)
        cls = classical_reference(params)
        try:
            sol = solve_normalization(params)
        except SupercriticalDensityError:
            rows.append(SweepRow(
                k=float(k), status="supercritical", C_k=math.nan, kC=math.nan,
                E_q=math.nan, S_q=math.nan, F_q=math.nan, C_0=cls.C0,
                E_c=cls.E, S_c=cls.S, F_c=cls.F, residual=math.nan,
                in_window=False, energy_ok=None, bounds_ok=None,
                entropy_ok=None, free_energy_ok=None,
            ))
            continue
        rows.append(_verdict_row(sol, small_k))
    return rows


def _verdict_row(sol: EquilibriumSolution, small_k: float) -> SweepRow:
    p = sol.params
    cls = sol.classical
    k = p.k
    in_window = -1.0 <= sol.kC < 1.0

    energy_ok = None
    if k != 0.0 and in_window:
        energy_ok = sol.E_q < cls.E if k > 0 else sol.E_q > cls.E

    bounds_ok = None
    if k < 0.0:
        bounds_ok = sol.C_k > cls.C0
        if -1.0 < 2.0 * k * cls.C0 < 0.0:
            bounds_ok = bounds_ok and sol.C_k < 2.0 * cls.C0
    elif k > 0.0 and k * cls.C0 < 1.0:
        bounds_ok = sol.C_k < cls.C0

    entropy_ok = None
    if k != 0.0 and p.n > 2 and abs(k) <= small_k:
        entropy_ok = sol.S_q < cls.S if k > 0 else sol.S_q > cls.S

    free_energy_ok = None
    if k != 0.0 and abs(k) <= small_k:
        free_energy_ok = sol.F_q > cls.F if k > 0 else sol.F_q < cls.F

    return SweepRow(
        k=k, status="ok", C_k=sol.C_k, kC=sol.kC, E_q=sol.E_q, S_q=sol.S_q,
        F_q=sol.F_q, C_0=cls.C0, E_c=cls.E, S_c=cls.S, F_c=cls.F,
        residual=sol.residual, in_window=in_window, energy_ok=energy_ok,
        bounds_ok=bounds_ok, entropy_ok=entropy_ok,
        free_energy_ok=free_energy_ok,
    )
