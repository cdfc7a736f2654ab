"""Solver and diagnostics tests on small grids.

Cross-checks against the equilibrium module's closed forms, hand-built
quadrature of the flux integrands, and the extremal property of the grid
free energy.
"""

import math

import numpy as np
import pytest

from fpkin import equilibrium as eq
from fpkin import kinetics as kin


def small_grid(nx=24, nv=64, L=1.0, v_max=8.0):
    return kin.PhaseGrid(x_nodes=nx, L=L, v_nodes=nv, v_max=v_max)


def maxwellian_field(grid, k, mass=1.0):
    spec = kin.solve_grid_maxwellian(grid, k, mass)
    return kin.DistributionField(kin.sample_maxwellian(spec, grid), k=k), spec


def modulated_field(grid, k, mass=1.0, amplitude=0.3, mode=1):
    fld, spec = maxwellian_field(grid, k, mass)
    profile = 1.0 + amplitude * np.cos(2 * math.pi * mode * grid.x / grid.L)
    values = fld.values * profile[:, None]
    values *= mass / (values.sum() * grid.cell_area)
    return kin.DistributionField(values, k=k), spec


class TestPhaseGrid:
    def test_spacings(self):
        g = small_grid(nx=20, nv=50, L=2.0, v_max=10.0)
        assert g.dx == pytest.approx(0.1)
        assert g.dv == pytest.approx(0.4)

    def test_velocity_mirror_exact(self):
        g = small_grid(nv=37)
        assert np.array_equal(g.v, -g.v[g.mirror])

    def test_rejects_short_velocity_window(self):
        with pytest.raises(ValueError, match="v_max"):
            kin.PhaseGrid(x_nodes=8, L=1.0, v_nodes=16, v_max=3.0)


class TestMoments:
    def test_zero_field(self):
        g = small_grid()
        m = kin.moments(kin.DistributionField(np.zeros((g.x_nodes, g.v_nodes)),
                                              k=0.0), g)
        assert m.rho_total == 0.0
        assert m.E_total == 0.0
        assert np.all(np.isnan(m.u_x))  # mean velocity absent, not zero

    def test_maxwellian_mass(self):
        g = small_grid()
        fld, _ = maxwellian_field(g, k=-0.5, mass=1.0)
        m = kin.moments(fld, g)
        assert m.rho_total == pytest.approx(1.0, abs=1e-8)

    def test_continuum_solution_sampled_on_grid(self):
        # grid quadrature of the continuum-normalised profile recovers rho
        g = small_grid()
        sol = eq.solve_normalization(eq.ModelParams(k=-0.5, n=1,
                                                    volume=g.L, rho=1.0))
        fld = kin.DistributionField(kin.sample_maxwellian(sol.spec, g),
                                    k=-0.5)
        assert kin.moments(fld, g).rho_total == pytest.approx(1.0, abs=1e-8)

    def test_even_field_has_zero_mean_velocity(self):
        g = small_grid()
        rng = np.random.default_rng(0)
        half = rng.uniform(0.1, 1.0, size=(g.x_nodes, g.v_nodes // 2))
        values = np.concatenate([half, half[:, ::-1]], axis=1)
        m = kin.moments(kin.DistributionField(values, k=0.0), g)
        assert np.all(np.abs(m.u_x) <= 1e-12)


class TestEntropy:
    def test_zero_field_convention(self):
        g = small_grid()
        fld = kin.DistributionField(np.zeros((g.x_nodes, g.v_nodes)), k=0.0)
        assert kin.entropy(fld, g) == 0.0

    def test_classical_maxwellian_closed_form(self):
        g = small_grid(nx=16)
        fld, _ = maxwellian_field(g, k=0.0, mass=1.0)
        closed = eq.solve_normalization(
            eq.ModelParams(k=0.0, n=1, volume=g.L, rho=1.0)).S_q
        assert kin.entropy(fld, g) == pytest.approx(closed, rel=1e-6)

    def test_saturated_fermion_is_finite(self):
        g = small_grid()
        values = np.full((g.x_nodes, g.v_nodes), 0.25)
        values[:, : g.v_nodes // 2] = 1.0  # 1 + k f = 0 on half the grid
        fld = kin.DistributionField(values, k=-1.0)
        assert math.isfinite(kin.entropy(fld, g))

    def test_saturation_profile_convexity(self):
        # second difference of the convex profile matches 1/(r (1 + k r))
        h = 1e-4
        for k in (-1.0, 0.5):
            top = 1.0 / abs(k) - 0.01 if k < 0 else 3.0
            for r in np.linspace(0.05, top, 17):
                s = kin.saturation_density(np.array([r - h, r, r + h]), k)
                second = (s[0] - 2 * s[1] + s[2]) / h**2
                assert second > 0
                assert second == pytest.approx(1.0 / (r * (1 + k * r)),
                                               rel=1e-4)


class TestFreeEnergy:
    def test_zero_field(self):
        g = small_grid()
        fld = kin.DistributionField(np.zeros((g.x_nodes, g.v_nodes)), k=-1.0)
        assert kin.free_energy(fld, g) == 0.0

    @pytest.mark.parametrize("k", [-1.0, -0.3, 0.0, 0.2])
    def test_matches_equilibrium_closed_form(self, k):
        g = small_grid(nx=16)
        sol = eq.solve_normalization(eq.ModelParams(k=k, n=1, volume=g.L,
                                                    rho=1.0))
        fld = kin.DistributionField(kin.sample_maxwellian(sol.spec, g), k=k)
        assert kin.free_energy(fld, g) == pytest.approx(sol.F_q, rel=1e-6)

    @pytest.mark.parametrize("k", [-0.8, 0.0, 0.25])
    def test_maxwellian_maximises_free_energy(self, k):
        # mass-preserving admissible perturbations strictly lower F
        g = small_grid()
        fld, spec = maxwellian_field(g, k, mass=1.0)
        base = kin.free_energy(fld, g)
        mass = fld.values.sum()
        rng = np.random.default_rng(11)
        for _ in range(5):
            bump = rng.uniform(-0.3, 0.3, size=(g.x_nodes, g.v_nodes))
            values = fld.values * (1.0 + bump)
            values *= mass / values.sum()
            perturbed = kin.DistributionField(values, k=k)
            assert kin.free_energy(perturbed, g) < base


class TestDivergenceFromEquilibrium:
    def test_zero_at_reference(self):
        g = small_grid()
        fld, spec = maxwellian_field(g, -0.5)
        assert abs(kin.divergence_from_equilibrium(fld, spec, g)) <= 1e-9

    def test_positive_for_modulation(self):
        g = small_grid()
        fld, spec = modulated_field(g, -0.5)
        assert kin.divergence_from_equilibrium(fld, spec, g) > 0

    def test_positive_for_velocity_shift(self):
        g = small_grid()
        fld, spec = maxwellian_field(g, 0.2)
        shifted = np.roll(fld.values, 3, axis=1)
        shifted *= fld.values.sum() / shifted.sum()
        moved = kin.DistributionField(shifted, k=0.2)
        assert kin.divergence_from_equilibrium(moved, spec, g) > 0

    def test_mass_mismatch_rejected(self):
        g = small_grid()
        fld, spec = maxwellian_field(g, -0.5)
        heavier = kin.DistributionField(fld.values * 1.01, k=-0.5)
        with pytest.raises(kin.MassMismatchError):
            kin.divergence_from_equilibrium(heavier, spec, g)


class TestLyapunovValue:
    def test_zero_at_matching_maxwellian(self):
        g = small_grid()
        fld, spec = maxwellian_field(g, -0.5)
        ref_level = kin.free_energy(fld, g)
        assert kin.lyapunov_value(fld, ref_level, g) == 0.0

    def test_nonnegative_for_admissible_fields(self):
        g = small_grid()
        rng = np.random.default_rng(5)
        for k in (-1.0, 0.0, 0.3):
            cap = 1.0 / abs(k) if k < 0 else 2.0
            values = rng.uniform(0.0, 0.9 * cap, size=(g.x_nodes, g.v_nodes))
            values *= np.exp(-0.25 * g.v**2)[None, :]  # finite energy
            fld = kin.DistributionField(values, k=k)
            mass = kin.moments(fld, g).rho_total
            ref = kin.solve_grid_maxwellian(g, k, mass)
            level = kin.free_energy(
                kin.DistributionField(kin.sample_maxwellian(ref, g), k=k), g)
            assert kin.lyapunov_value(fld, level, g) >= 0.0


class TestBoundaryFluxes:
    def test_uniform_field_carries_nothing(self):
        g = small_grid()
        fld, _ = maxwellian_field(g, -0.5)
        fluxes = kin.boundary_fluxes(fld, g)
        assert abs(fluxes.A) <= 1e-12
        assert abs(fluxes.B) <= 1e-12
        assert abs(fluxes.U) <= 1e-12

    def test_velocity_even_endpoints_have_zero_energy_flux(self):
        g = small_grid()
        rng = np.random.default_rng(2)
        values = rng.uniform(0.1, 1.0, size=(g.x_nodes, g.v_nodes))
        even = 0.5 * (values + values[:, g.mirror])
        fluxes = kin.boundary_fluxes(kin.DistributionField(even, k=0.0), g)
        assert abs(fluxes.A) <= 1e-12

    def test_asymmetric_endpoints_match_hand_quadrature(self):
        g = small_grid()
        rng = np.random.default_rng(9)
        values = rng.uniform(0.1, 1.0, size=(g.x_nodes, g.v_nodes))
        fld = kin.DistributionField(values, k=0.4)
        fluxes = kin.boundary_fluxes(fld, g)
        v = g.v
        diff = values[-1] - values[0]
        assert fluxes.A == pytest.approx(np.sum(0.5 * v**3 * diff) * g.dv,
                                         rel=1e-12)
        assert fluxes.B == pytest.approx(np.sum(v * diff) * g.dv, rel=1e-12)
        phi = kin.entropy_density(values[-1], 0.4) \
            - kin.entropy_density(values[0], 0.4)
        assert fluxes.U == pytest.approx(-np.sum(v * phi) * g.dv, rel=1e-12)


class TestClassify:
    @staticmethod
    def records_with_A(values):
        return [kin.DiagnosticRecord(t=float(i), rho=1, E=1, S=1, F=0, G=0,
                                     Gtilde=0, A=a, B=0, U=0, mass_error=0)
                for i, a in enumerate(values)]

    def test_conservative_series(self):
        verdict = kin.classify(self.records_with_A([0.0, 1e-14, -1e-14]))
        assert verdict.conservative and verdict.dissipative

    def test_outflowing_series_is_dissipative_only(self):
        verdict = kin.classify(self.records_with_A([0.0, 0.5, 0.2]))
        assert verdict.dissipative and not verdict.conservative

    def test_inflowing_series_is_neither(self):
        verdict = kin.classify(self.records_with_A([0.0, -0.5]))
        assert not verdict.dissipative and not verdict.conservative

    def test_empty_series_rejected(self):
        with pytest.raises(ValueError):
            kin.classify([])


class TestFermionBound:
    def test_zero_field(self):
        g = small_grid()
        fld = kin.DistributionField(np.zeros((g.x_nodes, g.v_nodes)), k=-1.0)
        assert kin.fermion_bound_check(fld, g) >= 0.0
        # at v = 0 the slack is exactly e^0 = 1
        assert kin.saturation_density(np.array([0.0]), -1.0)[0] == 0.0

    def test_equilibrium_shape_profile(self):
        # the bound is tight on this profile, so the slack sits at roundoff
        g = small_grid()
        Z = 1.0 / (np.exp(0.5 * g.v**2) + 1.0)
        fld = kin.DistributionField(np.tile(Z, (g.x_nodes, 1)), k=-1.0)
        assert kin.fermion_bound_check(fld, g) >= -1e-12

    def test_random_admissible_fields(self):
        g = small_grid(nx=8)
        rng = np.random.default_rng(7)
        for _ in range(50):
            values = rng.uniform(0.0, 1.0 - 1e-9,
                                 size=(g.x_nodes, g.v_nodes))
            fld = kin.DistributionField(values, k=-1.0)
            assert kin.fermion_bound_check(fld, g) >= -1e-12

    def test_rejects_nonfermion(self):
        g = small_grid()
        fld = kin.DistributionField(np.zeros((g.x_nodes, g.v_nodes)), k=0.0)
        with pytest.raises(ValueError):
            kin.fermion_bound_check(fld, g)


class TestStep:
    @pytest.mark.parametrize("k", [-1.0, 0.0, 0.2])
    @pytest.mark.parametrize("bc", [kin.BOUNCE_BACK, kin.PERIODIC])
    def test_maxwellian_stationary(self, k, bc):
        g = small_grid()
        fld, _ = maxwellian_field(g, k)
        dt = kin.cfl_limit(fld, g)
        stepped = kin.step(fld, g, dt, bc=bc)
        rel = np.abs(stepped.values - fld.values).sum() / fld.values.sum()
        assert rel <= 1e-8

    def test_mass_conserved_per_step(self):
        g = small_grid()
        gauss = np.exp(-0.5 * (g.v - 1.0) ** 2)
        bump = 1.0 + 0.5 * np.sin(2 * math.pi * g.x / g.L)
        fld = kin.DistributionField(np.outer(bump, gauss), k=0.0)
        dt = kin.cfl_limit(fld, g)
        mass0 = fld.values.sum() * g.cell_area
        for bc in (kin.PERIODIC, kin.BOUNCE_BACK):
            out = kin.step(fld, g, dt, bc=bc)
            mass = out.values.sum() * g.cell_area
            assert abs(mass - mass0) <= 1e-12 * mass0

    def test_mass_conserved_long_run(self):
        g = small_grid(nx=16, nv=32)
        fld, _ = modulated_field(g, -0.5)
        dt = kin.cfl_limit(fld, g)
        values = fld.values
        mass0 = values.sum() * g.cell_area
        stepper = kin._Stepper(g, -0.5, dt, kin.BOUNCE_BACK)
        for _ in range(10_000):
            values, _clamp = stepper.advance(values)
        mass = values.sum() * g.cell_area
        assert abs(mass - mass0) <= 1e-8 * mass0

    def test_bounce_back_wall_mass_flux_vanishes(self):
        g = small_grid()
        fld, _ = modulated_field(g, -0.5)
        values = fld.values
        for _ in range(20):
            values, _ = kin._Stepper(g, -0.5, kin.cfl_limit(fld, g),
                                     kin.BOUNCE_BACK).advance(values)
            walls = kin._wall_fluxes(values, -0.5, g, kin.BOUNCE_BACK)
            assert abs(walls.B) <= 1e-10
            assert abs(walls.A) <= 1e-10

    def test_oversized_dt_rejected(self):
        g = small_grid()
        fld, _ = maxwellian_field(g, 0.0)
        with pytest.raises(kin.StepSizeError):
            kin.step(fld, g, 10.0 * kin.cfl_limit(fld, g))

    def test_admissibility_preserved(self):
        g = small_grid()
        rng = np.random.default_rng(13)
        values = rng.uniform(0.0, 0.9, size=(g.x_nodes, g.v_nodes))
        values *= np.exp(-0.3 * g.v**2)[None, :]
        fld = kin.DistributionField(values, k=-1.0)
        for _ in range(50):
            fld = kin.step(fld, g, kin.cfl_limit(fld, g), bc=kin.BOUNCE_BACK)
            assert fld.values.min() >= 0.0
            assert (1.0 + fld.k * fld.values).min() >= -1e-14


class TestRun:
    def test_stationary_run(self):
        g = small_grid()
        fld, spec = maxwellian_field(g, -0.5)
        dt = kin.cfl_limit(fld, g)
        records = kin.run(fld, g, kin.BOUNCE_BACK, dt, t_final=0.5,
                          reference=spec, output_interval=0.1)
        base = records[0]
        for rec in records:
            assert abs(rec.Gtilde) <= 1e-8
            assert rec.rho == pytest.approx(base.rho, rel=1e-8)
            assert rec.S == pytest.approx(base.S, rel=1e-8)
        assert kin.classify(records).conservative

    def test_modulated_run_decays_monotonically(self):
        g = small_grid(nx=32, nv=64)
        fld, spec = modulated_field(g, -0.5)
        dt = kin.cfl_limit(fld, g)
        records = kin.run(fld, g, kin.BOUNCE_BACK, dt, t_final=3.0,
                          reference=spec, output_interval=0.1)
        g_values = np.array([r.Gtilde for r in records])
        assert g_values[0] > 0
        assert np.all(np.diff(g_values) <= 1e-8)
        assert g_values[-1] < g_values[0] / 10
        assert kin.count_decay_violations(records) == 0
        assert kin.classify(records).conservative
        # stability: once below a level, stay below it (within tolerance)
        for i, rec in enumerate(records):
            assert np.all(g_values[i:] < rec.Gtilde + 1e-8)

    def test_gap_column_matches_lyapunov_for_matched_mass(self):
        g = small_grid()
        fld, spec = modulated_field(g, 0.2)
        records = kin.run(fld, g, kin.BOUNCE_BACK, kin.cfl_limit(fld, g),
                          t_final=0.2, reference=spec, output_interval=0.1)
        for rec in records:
            assert rec.G == pytest.approx(rec.Gtilde, abs=1e-10)

    def test_aborts_with_partial_series(self):
        g = small_grid()
        fld, spec = maxwellian_field(g, 0.0)
        dt = 100.0 * kin.cfl_limit(fld, g)
        with pytest.raises(kin.SimulationAborted) as excinfo:
            kin.run(fld, g, kin.BOUNCE_BACK, dt, t_final=1.0, reference=spec)
        assert len(excinfo.value.records) == 1  # the initial record survives

    def test_decay_flag_respects_entropy_inflow(self):
        # growth bounded by a positive U is legitimate, not a violation
        base = dict(rho=1, E=1, S=1, F=0, B=0, mass_error=0, G=0)
        prev = kin.DiagnosticRecord(t=0.0, Gtilde=1.0, A=0.0, U=0.0, **base)
        fed = kin.DiagnosticRecord(t=1.0, Gtilde=1.5, A=0.0, U=1.0, **base)
        assert not kin.decay_flag(prev, fed)
        runaway = kin.DiagnosticRecord(t=1.0, Gtilde=2.5, A=0.0, U=1.0, **base)
        assert kin.decay_flag(prev, runaway)


class TestInitialConditions:
    def test_modulated_mass_matches_target(self):
        config = kin.SimulationConfig(x_nodes=16, v_nodes=32, rho=0.7)
        fld, spec = kin.make_initial_field(config)
        grid = config.grid()
        assert kin.moments(fld, grid).rho_total == pytest.approx(0.7,
                                                                 rel=1e-12)

    def test_shifted_gaussian_admissible(self):
        config = kin.SimulationConfig(x_nodes=16, v_nodes=48, k=-1.0,
                                      initial="shifted_gaussian", v_shift=1.5)
        fld, _ = kin.make_initial_field(config)
        assert fld.values.min() >= 0
        assert (1.0 + fld.k * fld.values).min() > 0

    def test_unknown_kind_rejected(self):
        config = kin.SimulationConfig(initial="vortex")
        with pytest.raises(ValueError):
            kin.make_initial_field(config)
