import math

import numpy as np
import pytest
from scipy.integrate import quad

from bgl.errors import DomainError
from bgl.fixtures import make_rng, random_trig_coeffs
from bgl.fourier import (
    fourier_coefficients,
    maximal_partial_sum,
    maximal_partial_sums,
    maximal_ratio_check,
    partial_sum,
    sample_function,
    square_wave_sample,
    trig_poly_sample,
)
from bgl.norms import lp_norm
from bgl.psi import PGrid, constant

GIBBS = 1.178979744471914  # (2/pi) Si(pi)


class TestCoefficients:
    def test_constant_function(self):
        s = sample_function(lambda x: np.ones_like(x), 1024)
        c = fourier_coefficients(s, 4)
        assert c[4].real == pytest.approx(2.0 * math.pi, rel=1e-12)
        assert np.max(np.abs(np.delete(c, 4))) < 1e-12

    def test_cosine(self):
        s = sample_function(np.cos, 1024)
        c = fourier_coefficients(s, 3)
        assert c[2].real == pytest.approx(math.pi, rel=1e-12)
        assert c[4].real == pytest.approx(math.pi, rel=1e-12)
        others = np.delete(c, [2, 4])
        assert np.max(np.abs(others)) < 1e-10

    def test_square_wave_against_quad_oracle(self):
        # oracle: direct quadrature of exp(inx) sign(x); grid quadrature of a
        # jump carries an O(1/K) error, so compare at that scale
        k = 4096
        s = square_wave_sample(k)
        c = fourier_coefficients(s, 6)
        for n in [1, 2, 3, 5]:
            re = quad(lambda x: math.cos(n * x) * np.sign(x), -math.pi, math.pi)[0]
            im = quad(lambda x: math.sin(n * x) * np.sign(x), -math.pi, math.pi)[0]
            assert c[6 + n] == pytest.approx(complex(re, im), abs=4.0 * math.pi / k)

    def test_aliasing_guard(self):
        s = sample_function(np.cos, 64)
        with pytest.raises(DomainError):
            fourier_coefficients(s, 32)

    def test_trig_polynomial_roundtrip(self):
        # partial sums of degree >= deg reproduce the polynomial exactly
        rng = make_rng(41)
        a, b = random_trig_coeffs(rng, 12)
        s = trig_poly_sample(a, b, 1024)
        for m in [12, 20]:
            sm = partial_sum(s, m)
            assert np.max(np.abs(sm.values - s.values)) < 1e-10


class TestMaximalPartialSum:
    def test_constant_function(self):
        s = sample_function(lambda x: np.ones_like(x), 256)
        star = maximal_partial_sum(s, 8)
        assert np.allclose(star.values, 1.0, atol=1e-12)

    def test_cosine_gives_abs(self):
        s = sample_function(np.cos, 256)
        star = maximal_partial_sum(s, 5)
        assert np.allclose(star.values, np.abs(np.cos(s.x)), atol=1e-10)

    def test_gibbs_overshoot_near_jump(self):
        k = 4096
        s = square_wave_sample(k)
        star = maximal_partial_sum(s, 64)
        window = (s.x > 0) & (s.x <= 4.0 * math.pi / 64.0)
        near_jump = float(np.max(star.values[window]))
        assert near_jump == pytest.approx(GIBBS, abs=5e-3)
        # independent oracle: dense partial sums from analytic coefficients
        xs = np.linspace(1e-4, 4.0 * math.pi / 64.0, 20000)
        acc = np.zeros_like(xs)
        best = np.zeros_like(xs)
        for m in range(1, 65, 2):
            acc = acc + (4.0 / math.pi) * np.sin(m * xs) / m
            np.maximum(best, np.abs(acc), out=best)
        assert near_jump == pytest.approx(float(best.max()), abs=2e-3)

    def test_checkpoints_consistent_with_single_runs(self):
        s = square_wave_sample(1024)
        multi = maximal_partial_sums(s, [8, 16, 32])
        for m in [8, 16, 32]:
            single = maximal_partial_sum(s, m)
            assert np.array_equal(multi[m].values, single.values)

    def test_running_max_monotone_in_m(self):
        s = square_wave_sample(1024)
        multi = maximal_partial_sums(s, [4, 8, 16])
        assert np.all(multi[8].values >= multi[4].values)
        assert np.all(multi[16].values >= multi[8].values)


class TestMaximalRatio:
    def grid(self):
        return PGrid.log_spaced(1.1, 32, 20)

    def test_cosine_closed_form(self):
        s = sample_function(np.cos, 512)
        rep = maximal_ratio_check(s, constant(), self.grid(), [4, 8])
        for p, row in rep.rho:
            expected = (p - 1.0) ** 2 / p ** 4
            for _, r in row:
                assert r == pytest.approx(expected, rel=1e-10)
                assert r <= 1.0
        assert rep.passed

    def test_constant_function_closed_form(self):
        s = sample_function(lambda x: np.ones_like(x), 512)
        rep = maximal_ratio_check(s, constant(), self.grid(), [4, 8])
        for p, row in rep.rho:
            for _, r in row:
                assert r == pytest.approx((p - 1.0) ** 2 / p ** 4, rel=1e-10)

    def test_square_wave_saturates(self):
        s = square_wave_sample(1024)
        rep = maximal_ratio_check(s, constant(), self.grid(), [16, 32, 64, 128])
        assert rep.passed
        assert rep.norm_ratio > 0

    def test_random_trig_polys_saturate(self):
        rng = make_rng(42)
        for _ in range(3):
            a, b = random_trig_coeffs(rng, int(rng.integers(3, 12)))
            s = trig_poly_sample(a, b, 1024)
            rep = maximal_ratio_check(s, constant(), self.grid(), [16, 32, 64, 128])
            assert rep.passed
