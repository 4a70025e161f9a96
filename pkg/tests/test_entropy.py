import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bgl.entropy import (
    EXACT_COVER_LIMIT,
    SemiMetric,
    covering_number,
    covering_profile,
    covering_with_centers,
    entropy_dimension,
    family_semimetric,
)
from bgl.errors import DomainError, EstimationError, SizeError
from bgl.fixtures import (
    make_rng,
    random_nonneg_family,
    random_plane_metric,
    unit_interval_metric,
    unit_square_metric,
)
from bgl.measure import DiscreteMeasureSpace, FunctionFamily
from bgl.norms import natural_psi
from bgl.psi import PGrid, constant, power


def brute_force_cover(metric, eps):
    """Exhaustive minimum cover over all center subsets (oracle, m <= 12)."""
    m = metric.size
    within = metric.d <= eps
    for k in range(1, m + 1):
        for centers in itertools.combinations(range(m), k):
            covered = np.zeros(m, dtype=bool)
            for c in centers:
                covered |= within[:, c]
            if covered.all():
                return k
    return m


def reference_greedy(metric, eps):
    """Plain greedy cover, written independently of the library internals."""
    m = metric.size
    within = metric.d <= eps
    covered = np.zeros(m, dtype=bool)
    count = 0
    while not covered.all():
        gains = within[~covered].sum(axis=0)
        j = int(np.argmax(gains))
        covered |= within[:, j]
        count += 1
    return count


class TestSemiMetric:
    def test_rejects_asymmetry(self):
        d = np.array([[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(DomainError):
            SemiMetric(d)

    def test_rejects_triangle_violation(self):
        d = np.array([[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]])
        with pytest.raises(DomainError):
            SemiMetric(d)

    def test_identical_functions_zero_matrix(self):
        space = DiscreteMeasureSpace(np.ones(4))
        fam = FunctionFamily.from_values(space, np.tile(np.arange(4.0), (3, 1)))
        metric = family_semimetric(fam, p=2.0)
        assert np.all(metric.d == 0.0) and metric.n_distinct() == 1

    def test_disjoint_indicators_distance(self):
        space = DiscreteMeasureSpace(np.ones(2))
        fam = FunctionFamily.from_values(space, np.eye(2))
        metric = family_semimetric(fam, p=2.0)
        assert metric.d[0, 1] == pytest.approx(math.sqrt(2.0), rel=1e-14)

    def test_natural_distances_bounded_by_two_sigma(self):
        rng = make_rng(12)
        fam = random_nonneg_family(rng, 10, 32)
        grid = PGrid.log_spaced(1.05, 40, 48)
        psi0 = natural_psi(fam, grid)
        metric = family_semimetric(fam, psi=psi0, grid=grid)
        assert metric.diameter <= 2.0 + 1e-9


class TestCoveringNumber:
    def test_three_collinear_points(self):
        metric = SemiMetric.from_points(np.array([[0.0], [1.0], [2.0]]))
        assert covering_number(metric, 0.5) == 3
        assert covering_number(metric, 1.0) == 1

    def test_exact_matches_brute_force(self):
        rng = make_rng(100)
        for trial in range(25):
            m = int(rng.integers(3, 13))
            metric = random_plane_metric(rng, m)
            eps = float(rng.uniform(0.05, 1.0)) * max(metric.diameter, 0.1)
            assert covering_number(metric, eps) == brute_force_cover(metric, eps)

    def test_greedy_never_below_exact(self):
        rng = make_rng(101)
        for trial in range(25):
            metric = random_plane_metric(rng, int(rng.integers(3, 13)))
            eps = float(rng.uniform(0.05, 0.8)) * max(metric.diameter, 0.1)
            exact = covering_number(metric, eps, "exact")
            greedy = covering_number(metric, eps, "greedy")
            assert exact <= greedy <= exact * (1 + math.log(metric.size)) + 1

    def test_greedy_usually_matches_exact(self):
        # greedy may exceed the optimum on adversarial instances; on random
        # plane metrics the excess should stay a rare event
        rng = make_rng(777)
        excess = 0
        for _ in range(200):
            metric = random_plane_metric(rng, int(rng.integers(3, 13)))
            eps = float(rng.uniform(0.05, 1.0)) * max(metric.diameter, 0.05)
            excess += (covering_number(metric, eps, "greedy")
                       > covering_number(metric, eps, "exact"))
        assert excess / 200 <= 0.1

    def test_size_error_beyond_exact_limit(self):
        metric = unit_interval_metric(EXACT_COVER_LIMIT + 1)
        with pytest.raises(SizeError):
            covering_number(metric, 0.1, "exact")

    def test_monotone_in_eps_and_extremes(self):
        rng = make_rng(102)
        metric = random_plane_metric(rng, 10)
        epss = np.linspace(0.01, metric.diameter * 1.01, 12)
        ns = [covering_number(metric, e) for e in epss]
        assert all(a >= b for a, b in zip(ns, ns[1:]))
        assert covering_number(metric, metric.diameter) == 1
        mp = metric.min_positive()
        assert covering_number(metric, mp * 0.999) == metric.n_distinct()

    def test_deterministic_greedy_ties(self):
        # gains tie between centers 1 and 2, then 2 and 3: lowest index wins
        metric = SemiMetric.from_points(np.array([[0.0], [1.0], [2.0], [3.0]]))
        n1, c1 = covering_with_centers(metric, 1.0, "greedy")
        n2, c2 = covering_with_centers(metric, 1.0, "greedy")
        assert (n1, c1) == (n2, c2) == (2, [1, 2])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 30), st.integers(3, 10), st.integers(1, 5))
def test_scaling_covariance(seed, m, k):
    # N(T, c*d, c*eps) == N(T, d, eps) exactly, for power-of-two scales
    rng = make_rng(seed)
    metric = random_plane_metric(rng, m)
    eps = 0.5 ** k
    for c in [0.25, 0.5, 2.0, 8.0]:
        assert (covering_number(metric.scaled(c), c * eps)
                == covering_number(metric, eps))


class TestRescalingInequality:
    def test_lp_balls_nest_in_bgl_balls(self):
        # d_p <= psi(p) d_psi pointwise, hence N(d_p, e) <= N(d_psi, e/psi(p))
        rng = make_rng(13)
        fam = random_nonneg_family(rng, 10, 32)
        grid = PGrid.log_spaced(1.5, 30, 24)
        psi = power(0.5)
        d_psi = family_semimetric(fam, psi=psi, grid=grid)
        for p in [grid.points[0], grid.points[10], grid.points[-1]]:
            d_p = family_semimetric(fam, p=float(p))
            for k in range(1, 5):
                eps = 0.5 ** k
                assert (covering_number(d_p, eps)
                        <= covering_number(d_psi, eps / float(psi(p))))


class TestProfile:
    def test_zero_diameter(self):
        space = DiscreteMeasureSpace(np.ones(3))
        fam = FunctionFamily.from_values(space, np.ones((4, 3)))
        metric = family_semimetric(fam, p=2.0)
        prof = covering_profile(metric, 0.5, 8)
        assert all(lv.n_balls == 1 for lv in prof.levels)

    def test_two_points_at_unit_distance(self):
        metric = SemiMetric(np.array([[0.0, 1.0], [1.0, 0.0]]))
        prof = covering_profile(metric, 0.5, 8)
        assert prof.levels[0].n_balls == 2  # eps = 0.5 < 1 already splits
        assert len(prof.levels) == 1  # saturated immediately

    def test_profile_matches_independent_greedy(self):
        metric = unit_square_metric(12)  # 144 points -> greedy mode
        prof = covering_profile(metric, 0.5, 8)
        for lv in prof.levels:
            assert lv.n_balls == reference_greedy(metric, lv.eps)

    def test_centers_cover_at_each_level(self):
        rng = make_rng(14)
        metric = random_plane_metric(rng, 14)
        prof = covering_profile(metric, 0.6, 10)
        for lv in prof.levels:
            covered = np.zeros(metric.size, dtype=bool)
            for c in lv.centers:
                covered |= metric.d[:, c] <= lv.eps
            assert covered.all()


class TestDimension:
    def test_unit_interval_dimension_one(self):
        metric = unit_interval_metric(256)
        prof = covering_profile(metric, 0.5, 12)
        kappa = entropy_dimension(prof)
        assert abs(kappa - 1.0) <= 0.2

    def test_circle_lattice_dimension_one(self):
        from bgl.fixtures import circle_lattice_metric

        prof = covering_profile(circle_lattice_metric(8), 0.5, 12)
        kappa = entropy_dimension(prof, fit_range=(2, 6))
        assert abs(kappa - 1.0) <= 0.2

    def test_square_lattice_dimension_two(self):
        from bgl.fixtures import torus_lattice_metric

        prof = covering_profile(torus_lattice_metric(6), 0.5, 8)
        kappa = entropy_dimension(prof, fit_range=(2, 4))
        assert abs(kappa - 2.0) <= 0.2

    def test_equidistant_points_have_no_informative_levels(self):
        # H jumps from 0 to log m at one scale: the fit refuses, and deep
        # levels show H / |log eps| -> 0, the finite-set limit
        metric = SemiMetric((np.ones((6, 6)) - np.eye(6)) * 0.4)
        prof = covering_profile(metric, 0.5, 10)
        with pytest.raises(EstimationError):
            entropy_dimension(prof)
        deep = covering_number(metric, 0.5 ** 20)
        assert math.log(deep) / abs(math.log(0.5 ** 20)) < 0.2

    def test_fit_range_restriction(self):
        metric = unit_interval_metric(128)
        prof = covering_profile(metric, 0.5, 12)
        ks = [lv.k for lv in prof.levels if 1 < lv.n_balls < 128]
        kappa = entropy_dimension(prof, fit_range=(ks[0], ks[-1]))
        assert abs(kappa - 1.0) <= 0.25
