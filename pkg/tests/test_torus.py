import math

import numpy as np
import pytest

from ltbounds import interp, torus
from ltbounds.spectral1d import negative_spectrum, riesz_mean

from oracles import riesz_mean_of, torus_constant_potential_eigs


class TestGeometry:
    def test_basic(self):
        geom = torus.TorusGeometry((0.25, 1.0))
        assert geom.d == 2
        assert geom.periods == (8.0 * math.pi, 2.0 * math.pi)
        assert geom.volume == pytest.approx(16.0 * math.pi**2)

    def test_validation(self):
        with pytest.raises(ValueError):
            torus.TorusGeometry((1.0,))
        with pytest.raises(ValueError):
            torus.TorusGeometry((0.5, 0.25, 1.0))  # not sorted
        with pytest.raises(ValueError):
            torus.TorusGeometry((0.5, 0.9))  # last ratio must be 1
        with pytest.raises(ValueError):
            torus.TorusGeometry((-0.5, 1.0))


class TestChooseBetas:
    def test_small_geometry_unit_regime(self):
        sel = torus.choose_betas(torus.TorusGeometry((0.5, 1.0)))
        assert sel.in_unit_regime
        assert sel.constant_factor == 1.0
        assert sel.delta == pytest.approx(0.25 * sel.betas[0], rel=1e-12)
        assert sel.delta < 0.839

    def test_d19_square_still_unit(self):
        sel = torus.choose_betas(torus.TorusGeometry((1.0,) * 19))
        assert sel.in_unit_regime
        assert sel.delta == pytest.approx(18.0 * sel.betas[0], rel=1e-12)
        assert sel.delta <= 0.839

    def test_d21_square_leaves_unit_regime(self):
        # delta0 ~ 20 * beta_star ~ 0.89 < 1: thresholds masses kept, K2 > 1.
        sel = torus.choose_betas(torus.TorusGeometry((1.0,) * 21))
        assert not sel.in_unit_regime
        assert sel.delta < 1.0
        assert sel.constant_factor > 1.0

    def test_d25_square_triggers_shrink(self):
        # delta0 ~ 24 * beta_star > 1: all masses shrink, delta capped below 1.
        sel = torus.choose_betas(torus.TorusGeometry((1.0,) * 25))
        assert not sel.in_unit_regime
        assert sel.delta < 1.0
        assert sel.constant_factor > 1.0
        bs = interp.beta_star(1e-6)
        assert sel.betas[0] < bs  # shrunk below the threshold

    def test_unit_regime_over_random_geometries(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            d = int(rng.integers(2, 20))
            alphas = np.sort(rng.uniform(0.0, 1.0, size=d - 1))
            alphas = np.clip(alphas, 1e-6, 1.0)
            geom = torus.TorusGeometry(tuple(alphas) + (1.0,))
            assert torus.choose_betas(geom).in_unit_regime


class TestConstantBound:
    def test_two_dim_unit_value(self):
        sel = torus.choose_betas(torus.TorusGeometry((1.0, 1.0)))
        assert torus.lt_constant_bound(1.0, sel, 2) == pytest.approx(math.pi / 24.0, rel=1e-12)

    def test_one_dim_analogue(self):
        sel = torus.BetaSelection(betas=(), delta=0.0, constant_factor=1.0, in_unit_regime=True)
        assert torus.lt_constant_bound(1.0, sel, 1) == pytest.approx(
            2.0 / (3.0 * math.sqrt(3.0)), rel=1e-12
        )

    def test_matches_unit_formula_up_to_19(self):
        for d in (2, 5, 12, 19):
            sel = torus.choose_betas(torus.TorusGeometry((1.0,) * d))
            expected = (math.pi / math.sqrt(3.0)) ** d * (
                torus.special.semiclassical_constant(1.5, d)
            )
            assert torus.lt_constant_bound(1.5, sel, d) == pytest.approx(expected, rel=1e-12)

    def test_gamma_validation(self):
        sel = torus.choose_betas(torus.TorusGeometry((1.0, 1.0)))
        with pytest.raises(ValueError):
            torus.lt_constant_bound(0.5, sel, 2)


class TestScalarPotential:
    def test_constant(self):
        pot = torus.ScalarPotentialD.constant(2, 2.0)
        vals = pot.values_on_grid((4, 4))
        assert np.allclose(vals, 2.0)

    def test_random_nonnegative_and_symmetric(self):
        pot = torus.ScalarPotentialD.random(2, 2, 1.0, 7)
        assert pot.bands == (4, 4)
        pot.validate()
        vals = pot.values_on_grid((40, 40))
        assert float(vals.min()) >= -1e-10 * max(1.0, float(vals.max()))

    def test_random_deterministic(self):
        a = torus.ScalarPotentialD.random(2, 1, 1.0, 3)
        b = torus.ScalarPotentialD.random(2, 1, 1.0, 3)
        assert np.array_equal(a.coeffs, b.coeffs)

    def test_power_integral_constant(self):
        pot = torus.ScalarPotentialD.constant(2, 2.0)
        geom = torus.TorusGeometry((1.0, 1.0))
        val = torus.potential_power_integral(pot, geom, 2.0, grid=(4, 4))
        assert val == pytest.approx(4.0 * math.pi**2 * 4.0, rel=1e-13)

    def test_power_integral_scales_with_volume(self):
        pot = torus.ScalarPotentialD.random(2, 1, 1.0, 9)
        small = torus.potential_power_integral(pot, torus.TorusGeometry((1.0, 1.0)), 2.0)
        big = torus.potential_power_integral(pot, torus.TorusGeometry((0.25, 1.0)), 2.0)
        assert big == pytest.approx(4.0 * small, rel=1e-12)


class TestAssembly:
    def test_constant_potential_enumeration(self):
        pot = torus.ScalarPotentialD.constant(2, 2.0)
        geom = torus.TorusGeometry((1.0, 1.0))
        a = torus.assemble_torus_operator(pot, geom, (5, 5))
        eigs = np.sort(np.linalg.eigvalsh(a))
        assert np.allclose(eigs, torus_constant_potential_eigs(2.0, (1.0, 1.0), 5), atol=1e-12)

    def test_zero_potential_spectral_floor(self):
        pot = torus.ScalarPotentialD.constant(2, 0.0)
        geom = torus.TorusGeometry((0.5, 1.0))
        a = torus.assemble_torus_operator(pot, geom, (4, 4))
        assert float(np.min(np.linalg.eigvalsh(a))) >= 1.0 - 1e-13

    def test_exact_hermiticity(self):
        pot = torus.ScalarPotentialD.random(2, 1, 1.0, 4)
        geom = torus.TorusGeometry((0.5, 1.0))
        a = torus.assemble_torus_operator(pot, geom, (6, 6))
        assert float(np.max(np.abs(a - a.conj().T))) == 0.0

    def test_mode_budget_guard(self):
        pot = torus.ScalarPotentialD.constant(2, 1.0)
        geom = torus.TorusGeometry((1.0, 1.0))
        with pytest.raises(ValueError):
            torus.assemble_torus_operator(pot, geom, (100, 100))

    def test_q_block_does_not_change_negative_spectrum(self):
        pot = torus.ScalarPotentialD.random(2, 1, 1.2, 15)
        geom = torus.TorusGeometry((0.5, 1.0))
        a_p = torus.assemble_torus_operator(pot, geom, (6, 6))
        a_full = torus.assemble_torus_operator(pot, geom, (6, 6), include_q_block=True)
        neg_p = negative_spectrum(a_p).negatives
        neg_full = negative_spectrum(a_full).negatives
        assert len(neg_p) == len(neg_full)
        assert np.allclose(neg_p, neg_full, atol=1e-11)


class TestVerifyBound:
    def test_constant_enumeration_case(self):
        pot = torus.ScalarPotentialD.constant(2, 2.0)
        geom = torus.TorusGeometry((1.0, 1.0))
        report = torus.verify_bound_torus(pot, geom, 1.0, n_modes=(8, 8))
        assert report.lhs == 2.0
        assert report.rhs == pytest.approx(2.0 * math.pi**3 / 3.0, rel=1e-12)
        assert report.passed
        assert report.metadata["unit_regime"] is True

    def test_elongated_constant(self):
        pot = torus.ScalarPotentialD.constant(2, 2.0)
        geom = torus.TorusGeometry((0.25, 1.0))
        report = torus.verify_bound_torus(pot, geom, 1.0, n_modes=(12, 4))
        # negative modes now include elongated-axis excitations
        expected_lhs = riesz_mean_of(torus_constant_potential_eigs(2.0, (0.25, 1.0), 12), 1.0)
        assert report.lhs == pytest.approx(expected_lhs, rel=1e-12)
        assert report.passed

    def test_alpha_robustness_fixed_potential(self):
        pot = torus.ScalarPotentialD.random(2, 1, 1.0, 5)
        for a1 in (1.0, 0.5, 0.25, 0.125):
            geom = torus.TorusGeometry((a1, 1.0))
            report = torus.verify_bound_torus(pot, geom, 1.0, n_modes=(14, 8))
            assert report.passed, report.to_json()

    def test_random_suite(self):
        for seed in range(6):
            gamma = (1.0, 2.0)[seed % 2]
            pot = torus.ScalarPotentialD.random(2, 1, 1.0, seed)
            geom = torus.TorusGeometry(((0.5, 1.0)[seed % 2], 1.0))
            report = torus.verify_bound_torus(pot, geom, gamma, n_modes=(8, 8), seed=seed)
            assert report.passed, report.to_json()

    def test_three_dimensional_instance(self):
        pot = torus.ScalarPotentialD.random(3, 1, 0.8, 1)
        geom = torus.TorusGeometry((0.5, 0.75, 1.0))
        report = torus.verify_bound_torus(pot, geom, 1.0, n_modes=(5, 5, 5), seed=1)
        assert report.passed
        assert report.metadata["d"] == 3
        assert report.metadata["unit_regime"] is True

    def test_three_dimensional_constant_enumeration(self):
        pot = torus.ScalarPotentialD.constant(3, 2.0)
        geom = torus.TorusGeometry((1.0, 1.0, 1.0))
        report = torus.verify_bound_torus(pot, geom, 1.0, n_modes=(4, 4, 4))
        expected_lhs = riesz_mean_of(
            torus_constant_potential_eigs(2.0, (1.0, 1.0, 1.0), 4), 1.0
        )
        assert report.lhs == pytest.approx(expected_lhs, rel=1e-13)
        assert report.passed

    def test_rayleigh_ritz_monotonicity_per_axis(self):
        pot = torus.ScalarPotentialD.random(2, 1, 1.5, 2)
        geom = torus.TorusGeometry((0.5, 1.0))
        means = []
        for n in ((3, 3), (6, 6), (12, 12)):
            a = torus.assemble_torus_operator(pot, geom, n)
            means.append(riesz_mean(negative_spectrum(a), 1.0))
        assert means[0] <= means[1] + 1e-12
        assert means[1] <= means[2] + 1e-12

    def test_metadata_echo(self):
        pot = torus.ScalarPotentialD.constant(2, 1.0)
        geom = torus.TorusGeometry((0.5, 1.0))
        report = torus.verify_bound_torus(pot, geom, 1.0, n_modes=(4, 4), seed=3)
        for key in ("d", "alphas", "betas", "delta", "unit_regime", "seed"):
            assert key in report.metadata
