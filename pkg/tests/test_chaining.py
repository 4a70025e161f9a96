import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bgl.chaining import (
    abs_sup,
    chained_product_bound,
    entropy_sum_bound,
    exact_sup,
    exp_orlicz_bound,
    generalized_pisier_bound,
    mri_chaining_bound,
    optimize_theta,
    pisier_bound,
    polynomial_entropy_check,
    series_S_beta,
)
from bgl.entropy import covering_profile, family_semimetric
from bgl.errors import DomainError, ModelMismatchError
from bgl.fixtures import disjoint_indicator_family, make_rng, random_nonneg_family
from bgl.measure import DiscreteMeasureSpace, FunctionFamily, SimpleFunction
from bgl.norms import MriNormSpec, bgl_norm, fundamental_function, lp_norm, natural_psi
from bgl.psi import PGrid, constant, doob_factor, power, product_psi


GRID = PGrid.log_spaced(1.05, 50, 64)


class TestExactSup:
    def test_single_member(self):
        fam = disjoint_indicator_family(1)
        assert np.array_equal(exact_sup(fam).values, fam.members[0].values)

    def test_f_and_minus_f(self):
        space = DiscreteMeasureSpace(np.ones(5))
        f = SimpleFunction(space, np.array([1.0, -2.0, 3.0, -4.0, 0.0]))
        fam = FunctionFamily(("f", "-f"), (f, -1.0 * f))
        assert np.array_equal(exact_sup(fam).values, np.abs(f.values))

    def test_matches_per_atom_loop(self):
        rng = make_rng(21)
        fam = random_nonneg_family(rng, 10, 32)
        mat = fam.values_matrix()
        oracle = np.array([max(mat[t, i] for t in range(10)) for i in range(32)])
        assert np.array_equal(exact_sup(fam).values, oracle)


class TestPisier:
    def test_disjoint_indicators_attain_equality(self):
        fam = disjoint_indicator_family(8)
        for p in [1.5, 2.0, 4.0]:
            r = pisier_bound(fam, p)
            assert r.bound == pytest.approx(r.exact, rel=1e-10)
            assert r.bound == pytest.approx(8.0 ** (1.0 / p), rel=1e-12)

    def test_identical_copies_slack(self):
        rng = make_rng(22)
        space = DiscreteMeasureSpace(np.full(16, 1.0 / 16))
        f = SimpleFunction(space, rng.uniform(0.1, 1.0, 16))
        fam = FunctionFamily(tuple("abcd"), (f, f, f, f))
        r = pisier_bound(fam, 2.0)
        assert r.exact == pytest.approx(lp_norm(f, 2.0), rel=1e-12)
        assert r.bound == pytest.approx(lp_norm(f, 2.0) * 2.0, rel=1e-12)

    def test_domination_on_random_families(self):
        rng = make_rng(23)
        for _ in range(50):
            fam = random_nonneg_family(rng, int(rng.integers(2, 16)), 32)
            for p in [1.5, 2.0, 4.0]:
                r = pisier_bound(fam, p)
                assert r.bound >= r.exact * (1.0 - 1e-12)
                assert r.exact >= r.exact_signed - 1e-12

    def test_p_below_one(self):
        with pytest.raises(DomainError):
            pisier_bound(disjoint_indicator_family(2), 0.5)


class TestGeneralizedPisier:
    def test_single_member(self):
        fam = disjoint_indicator_family(1)
        r = generalized_pisier_bound(fam, constant(), constant(), GRID)
        member = bgl_norm(fam.members[0], constant(), GRID).value
        assert r.bound == pytest.approx(member * r.fundamental_value, rel=1e-12)
        assert r.exact <= r.bound + 1e-12

    def test_disjoint_indicators(self):
        fam = disjoint_indicator_family(6)
        r = generalized_pisier_bound(fam, constant(), constant(), GRID)
        # phi(G(1), 6) on the grid sits at the low-p edge
        assert r.fundamental_value == pytest.approx(6.0 ** (1.0 / GRID.points[0]), rel=1e-9)
        assert r.exact <= r.bound + 1e-12

    def test_domination_random(self):
        rng = make_rng(24)
        psis = [(constant(), constant()), (power(1.0), doob_factor())]
        for _ in range(20):
            fam = random_nonneg_family(rng, int(rng.integers(2, 12)), 32)
            psis_all = psis + [(natural_psi(fam, GRID), power(1.0))]
            for psi, nu in psis_all:
                r = generalized_pisier_bound(fam, psi, nu, GRID)
                assert r.bound >= r.exact * (1.0 - 1e-8), (psi.label, nu.label)


class TestEntropySumBound:
    def test_single_member_closed_form(self):
        fam = disjoint_indicator_family(1)
        theta = 0.5
        rep = entropy_sum_bound(fam, 2.0, theta)
        assert rep.anchor == pytest.approx(1.0, rel=1e-12)
        assert rep.bound_value == pytest.approx(rep.anchor + 1.0 / (1.0 - theta), rel=1e-12)
        assert rep.dominates

    def test_two_point_family_hand_sum(self):
        # two members at L_p distance exactly 1: one level with N = 2
        space = DiscreteMeasureSpace(np.ones(2))
        f = SimpleFunction(space, np.array([2.0 ** -0.5, 0.0]))
        g = SimpleFunction(space, np.array([0.0, 2.0 ** -0.5]))
        fam = FunctionFamily(("f", "g"), (f, g))
        assert lp_norm(f - g, 2.0) == pytest.approx(1.0, rel=1e-14)
        theta = 0.5
        rep = entropy_sum_bound(fam, 2.0, theta)
        anchor = 2.0 ** -0.5
        hand = anchor + 2.0 ** 0.5 + theta * 2.0 ** 0.5 / (1.0 - theta)
        assert rep.bound_value == pytest.approx(hand, rel=1e-12)
        assert rep.dominates

    def test_domination_random(self):
        rng = make_rng(25)
        for _ in range(10):
            fam = random_nonneg_family(rng, 16, 32)
            for theta in [0.3, 0.5, 0.7]:
                rep = entropy_sum_bound(fam, 2.0, theta)
                assert rep.dominates, theta


class TestOptimizeTheta:
    def test_singleton_prefers_smallest_theta(self):
        fam = disjoint_indicator_family(1)
        thetas = [0.2, 0.4, 0.6, 0.8]
        rep = optimize_theta(fam, thetas, p=2.0)
        assert rep.theta_star == 0.2

    def test_matches_dense_scan(self):
        rng = make_rng(26)
        fam = random_nonneg_family(rng, 12, 32)
        thetas = np.linspace(0.1, 0.9, 33)
        rep = optimize_theta(fam, thetas, p=2.0)
        scan = min((entropy_sum_bound(fam, 2.0, float(t)).bound_value for t in thetas))
        assert rep.bound_value == pytest.approx(scan, rel=1e-12)

    def test_never_worse_than_half(self):
        rng = make_rng(27)
        fam = random_nonneg_family(rng, 8, 32)
        rep = optimize_theta(fam, [0.3, 0.5, 0.7], p=4.0)
        assert rep.bound_value <= entropy_sum_bound(fam, 4.0, 0.5).bound_value + 1e-12


class TestChainedProductBound:
    def test_single_member_closed_form(self):
        fam = disjoint_indicator_family(1)
        theta = 0.5
        rep = chained_product_bound(fam, constant(), constant(), GRID, theta)
        # phi(G(1), 1) = 1 at every level, so the sum collapses to 1/(1-theta)
        assert rep.bound_value == pytest.approx(rep.anchor + 1.0 / (1.0 - theta), rel=1e-9)
        assert rep.dominates

    def test_disjoint_indicators(self):
        fam = disjoint_indicator_family(6)
        rep = chained_product_bound(fam, constant(), constant(), GRID, 0.5)
        assert rep.dominates

    def test_domination_with_natural_psi(self):
        rng = make_rng(28)
        for _ in range(6):
            fam = random_nonneg_family(rng, 12, 32)
            psi0 = natural_psi(fam, GRID)
            for theta in [0.3, 0.5, 0.7]:
                rep = chained_product_bound(fam, psi0, power(1.0), GRID, theta)
                assert rep.dominates, theta
                assert rep.bound_value >= rep.exact_signed_norm

    def test_report_resummable(self):
        rng = make_rng(29)
        fam = random_nonneg_family(rng, 8, 32)
        rep = chained_product_bound(fam, constant(), power(1.0), GRID, 0.5)
        resum = rep.anchor + sum(t for _, t in rep.per_level_terms) + rep.tail_estimate
        assert rep.bound_value == pytest.approx(resum, rel=1e-15)


class TestPolynomialEntropy:
    @staticmethod
    def lipschitz_family(n_index=24, n_atoms=48):
        """Members Y_t(x) = 1 - |t - u(x)| on an index grid: d_p(t, s) ~ |t - s|."""
        space = DiscreteMeasureSpace(np.full(n_atoms, 1.0 / n_atoms))
        u = np.linspace(0.0, 1.0, n_atoms)
        ts = np.linspace(0.0, 1.0, n_index)
        rows = [1.0 - np.abs(t - u) for t in ts]
        return FunctionFamily.from_values(space, np.stack(rows))

    def test_lipschitz_index_spread_bounded(self):
        fam = self.lipschitz_family()
        psi = constant()
        metric = family_semimetric(fam, psi=psi, grid=GRID)
        profile = covering_profile(metric, 0.5, 16)
        p_grid = np.geomspace(2.0, 20.0, 8)
        rep = polynomial_entropy_check(fam, psi, 1.0, profile, p_grid, theta=0.5)
        assert rep.passed and rep.spread < 50.0

    def test_small_kappa_still_bounded(self):
        fam = self.lipschitz_family()
        psi = constant()
        metric = family_semimetric(fam, psi=psi, grid=GRID)
        profile = covering_profile(metric, 0.5, 16)
        p_grid = np.geomspace(5.0, 40.0, 6)
        rep = polynomial_entropy_check(fam, psi, 0.05, profile, p_grid, theta=0.5)
        assert rep.passed

    def test_single_member_constant_ratio(self):
        fam = disjoint_indicator_family(1)
        psi = constant()
        metric = family_semimetric(fam, psi=psi, grid=GRID)
        profile = covering_profile(metric, 0.5, 8)
        p_grid = np.geomspace(2.0, 20.0, 6)
        rep = polynomial_entropy_check(fam, psi, 0.01, profile, p_grid, theta=0.5)
        assert rep.passed and rep.c_fit == 1.0

    def test_model_mismatch_raises(self):
        fam = self.lipschitz_family()
        psi = constant()
        metric = family_semimetric(fam, psi=psi, grid=GRID)
        profile = covering_profile(metric, 0.5, 16)
        with pytest.raises(ModelMismatchError):
            polynomial_entropy_check(fam, psi, 6.0, profile,
                                     np.geomspace(8.0, 30.0, 4), theta=0.5)


class TestSeries:
    def test_geometric_closed_form(self):
        for q in [0.5, 0.7, 0.9, 0.99]:
            case = series_S_beta(q, 0.0)
            assert case.s_value == pytest.approx(q / (1.0 - q), rel=1e-12)
            assert case.constant_used <= 1.0 + 1e-12

    def test_derivative_closed_form(self):
        for q in [0.5, 0.7, 0.9, 0.99]:
            case = series_S_beta(q, 1.0)
            assert case.s_value == pytest.approx(q / (1.0 - q) ** 2, rel=1e-12)

    def test_polylog_oracle(self):
        # independent oracle: S_beta(q) = Li_{-beta}(q)
        for beta in [-2.0, -0.5, 0.5, 2.0]:
            for q in [0.5, 0.9]:
                oracle = float(mpmath.polylog(-beta, q))
                assert series_S_beta(q, beta).s_value == pytest.approx(oracle, rel=1e-10)

    def test_dilogarithm_value(self):
        case = series_S_beta(0.5, -2.0)
        assert case.s_value == pytest.approx(0.582240526465012, abs=1e-11)

    def test_log_case_is_exact(self):
        for q in [0.5, 0.7, 0.9]:
            case = series_S_beta(q, -1.0)
            assert case.constant_used == pytest.approx(1.0, rel=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            series_S_beta(0.4, 0.0)
        with pytest.raises(DomainError):
            series_S_beta(1.0, 0.0)


class TestExpOrlicz:
    def test_single_member_degenerate(self):
        fam = disjoint_indicator_family(1)
        rep = exp_orlicz_bound(fam, 1.0, 0.5, 1.0, 0.5)
        assert rep.degenerate_entropy and rep.bound == 0.0

    def test_two_member_hand_sum(self):
        space = DiscreteMeasureSpace(np.ones(2))
        fam = FunctionFamily.from_values(space, np.eye(2))
        theta, b1, b2 = 0.5, 0.5, 1.5
        rep = exp_orlicz_bound(fam, 1.0, b1, b2, theta)
        # diameter-anchored levels give N = 2 at level 1, then saturation:
        # sum = (log 2)^{b2-b1} / (1 - theta)
        hand = rep.max_member_norm * math.log(2.0) ** (b2 - b1) / (1.0 - theta)
        assert rep.bound == pytest.approx(hand, rel=1e-12)

    def test_slack_invariant_under_scaling(self):
        rng = make_rng(30)
        fam = random_nonneg_family(rng, 16, 32)
        rep1 = exp_orlicz_bound(fam, 1.0, 0.5, 1.5, 0.5)
        rep10 = exp_orlicz_bound(fam.scale(10.0), 1.0, 0.5, 1.5, 0.5)
        assert rep10.slack_ratio == pytest.approx(rep1.slack_ratio, rel=1e-9)

    def test_bad_exponent_order(self):
        with pytest.raises(DomainError):
            exp_orlicz_bound(disjoint_indicator_family(2), 1.0, 1.5, 0.5, 0.5)


class TestMriChaining:
    def test_single_node_reduces_to_entropy_sum(self):
        rng = make_rng(31)
        fam = random_nonneg_family(rng, 8, 32)
        spec = MriNormSpec(kind="quadrature", q=1.0, alpha=0.0,
                           nodes=np.array([2.0]), weights=np.array([1.0]))
        rep = mri_chaining_bound(fam, spec, 0.5)
        assert rep.bound == pytest.approx(
            entropy_sum_bound(fam, 2.0, 0.5).bound_value, rel=1e-12)
        assert rep.passed

    def test_sup_kind_domination(self):
        rng = make_rng(32)
        fam = random_nonneg_family(rng, 8, 32)
        grid = PGrid.log_spaced(1.5, 20, 12)
        spec = MriNormSpec(kind="sup", psi=constant(), grid=grid)
        rep = mri_chaining_bound(fam, spec, 0.5)
        assert rep.passed

    def test_weighted_quadrature_domination(self):
        rng = make_rng(33)
        fam = random_nonneg_family(rng, 10, 32)
        nodes = np.geomspace(1.5, 16.0, 8)
        spec = MriNormSpec(kind="quadrature", q=2.0, alpha=1.0,
                           nodes=nodes, weights=np.ones(8))
        rep = mri_chaining_bound(fam, spec, 0.5)
        assert rep.passed


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 1000), st.sampled_from([1.5, 2.0, 4.0, 8.0]),
       st.floats(0.05, 50.0))
def test_pisier_slack_scale_invariant(seed, p, c):
    rng = make_rng(seed)
    fam = random_nonneg_family(rng, 6, 16)
    base = pisier_bound(fam, p)
    scaled = pisier_bound(fam.scale(c), p)
    assert scaled.bound == pytest.approx(c * base.bound, rel=1e-9)
    assert scaled.slack_ratio == pytest.approx(base.slack_ratio, rel=1e-9)
