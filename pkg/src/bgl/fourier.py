"""Fourier partial sums and the maximal partial-sum operator on [-pi, pi].

Functions are sampled on a uniform K-point grid carrying Lebesgue weights
2 pi / K; coefficients c(n) = int exp(inx) f(x) dx come from the trapezoid
rule, which on a uniform periodic grid reproduces trigonometric polynomials
of degree <= K/4 exactly.  The maximal operator sup_M |s_M| is not
computable; it is approximated by running maxima over M <= M_max with a
saturation check across increasing M_max.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .measure import DiscreteMeasureSpace, SimpleFunction
from .norms import bgl_norm, lp_norm
from .psi import PGrid, PsiFunction, psi_fourier

__all__ = [
    "FourierSample",
    "sample_function",
    "square_wave_sample",
    "trig_poly_sample",
    "fourier_coefficients",
    "partial_sum",
    "maximal_partial_sum",
    "maximal_partial_sums",
    "MaximalRatioReport",
    "maximal_ratio_check",
]


@dataclass(frozen=True)
class FourierSample:
    """f sampled on the uniform grid x_j = -pi + 2 pi j / K, j = 0..K-1."""

    x: np.ndarray
    values: np.ndarray
    space: DiscreteMeasureSpace

    def __post_init__(self):
        k = self.x.size
        if k % 2 != 0 or k < 8:
            raise DomainError("need an even grid size K >= 8")
        if self.values.shape != self.x.shape:
            raise DomainError("values must match the grid")

    @property
    def k_points(self) -> int:
        return int(self.x.size)

    def as_function(self) -> SimpleFunction:
        return SimpleFunction(self.space, self.values)


def sample_function(fn, k: int = 1024) -> FourierSample:
    x = -math.pi + 2.0 * math.pi * np.arange(k) / k
    values = np.asarray(fn(x), dtype=float)
    space = DiscreteMeasureSpace(np.full(k, 2.0 * math.pi / k))
    return FourierSample(x=x, values=values, space=space)


def square_wave_sample(k: int = 1024) -> FourierSample:
    return sample_function(np.sign, k)


def trig_poly_sample(coeffs_cos, coeffs_sin, k: int = 1024) -> FourierSample:
    """a_0/2 + sum_n a_n cos(nx) + b_n sin(nx) with a_n = coeffs_cos[n]."""
    a = np.asarray(coeffs_cos, dtype=float)
    b = np.asarray(coeffs_sin, dtype=float)

    def fn(x):
        out = np.full_like(x, 0.5 * a[0])
        for n in range(1, a.size):
            out += a[n] * np.cos(n * x)
        for n in range(1, b.size):
            out += b[n] * np.sin(n * x)
        return out

    return sample_function(fn, k)


def fourier_coefficients(sample: FourierSample, m: int) -> np.ndarray:
    """c(n) = int_{-pi}^{pi} exp(inx) f(x) dx for n = -m..m (trapezoid rule).

    Index j of the returned array holds c(j - m).  Requires m <= K/4 so the
    quadrature stays alias-free on the functions of interest.
    """
    if m > sample.k_points // 4:
        raise DomainError(
            f"m={m} too large for K={sample.k_points}; need m <= K/4 to avoid aliasing"
        )
    ns = np.arange(-m, m + 1)
    phase = np.exp(1j * np.outer(ns, sample.x))
    w = sample.space.weights
    return phase @ (w * sample.values)


def partial_sum(sample: FourierSample, m: int) -> SimpleFunction:
    """s_m[f](x) = (1/2pi) sum_{|n|<=m} c(n) exp(-inx), evaluated on the grid."""
    c = fourier_coefficients(sample, m)
    ns = np.arange(-m, m + 1)
    phase = np.exp(-1j * np.outer(sample.x, ns))
    vals = (phase @ c).real / (2.0 * math.pi)
    return SimpleFunction(sample.space, vals)


def _running_maxima(sample: FourierSample, checkpoints) -> dict:
    """Running max of |s_M| for M = 1..max(checkpoints), snapshotted at each
    checkpoint; one incremental pass over the coefficients."""
    m_top = max(checkpoints)
    c = fourier_coefficients(sample, m_top)
    mid = m_top  # index of c(0)
    s = np.full(sample.k_points, c[mid].real / (2.0 * math.pi))
    running = np.zeros(sample.k_points)
    out = {}
    todo = sorted(set(int(m) for m in checkpoints))
    for m in range(1, m_top + 1):
        term = (c[mid + m] * np.exp(-1j * m * sample.x)
                + c[mid - m] * np.exp(1j * m * sample.x)).real / (2.0 * math.pi)
        s = s + term
        np.maximum(running, np.abs(s), out=running)
        if todo and m == todo[0]:
            out[m] = SimpleFunction(sample.space, running.copy())
            todo.pop(0)
    return out


def maximal_partial_sum(sample: FourierSample, m_max: int) -> SimpleFunction:
    """Pointwise max over M = 1..m_max of |s_M[f]|."""
    if m_max < 1:
        raise DomainError("m_max must be >= 1")
    return _running_maxima(sample, [m_max])[m_max]


def maximal_partial_sums(sample: FourierSample, m_list) -> dict:
    return _running_maxima(sample, list(m_list))


@dataclass(frozen=True)
class MaximalRatioReport:
    rho: tuple                   # ((p, ((m, rho),...)), ...)
    saturation_ok: bool
    norm_ratio: float            # ||s*||_{G(psi_2)} / ||f||_{G(psi)}
    m_list: tuple

    @property
    def passed(self) -> bool:
        return self.saturation_ok


def maximal_ratio_check(sample: FourierSample, psi: PsiFunction, grid: PGrid,
                        m_list, growth_cap: float = 1.05) -> MaximalRatioReport:
    """Uniform control of the maximal partial-sum operator.

    rho(p, M) = |s*_{<=M}[f]|_p / (p^4 |f|_p / (p-1)^2) must show no growth
    trend in M (last value <= growth_cap times the running max); the report
    also carries ||s*||_{G(psi_2)} / ||f||_{G(psi)} with the p^4/(p-1)^2
    weight folded into psi_2.
    """
    m_list = sorted(set(int(m) for m in m_list))
    if not m_list:
        raise DomainError("empty M list")
    pts = grid.points
    if pts[0] <= 1.0:
        raise DomainError("the weight needs p > 1; start the grid above 1")
    f = sample.as_function()
    f_norms = lp_norm(f, pts)
    weight = pts ** 4 / (pts - 1.0) ** 2
    maxima = _running_maxima(sample, m_list)
    rho_rows = []
    ok = True
    for i, p in enumerate(pts):
        row = []
        for m in m_list:
            star_norm = lp_norm(maxima[m], float(p))
            row.append((m, star_norm / (weight[i] * f_norms[i])))
        values = [r for _, r in row]
        if len(values) >= 2:
            # growth test: the final value must not escape the earlier plateau
            ok = ok and (values[-1] <= growth_cap * max(values[:-1]))
        rho_rows.append((float(p), tuple(row)))
    psi2 = psi_fourier(psi)
    star = maxima[m_list[-1]]
    norm_ratio = (bgl_norm(star, psi2, grid).value
                  / bgl_norm(f, psi, grid).value)
    return MaximalRatioReport(rho=tuple(rho_rows), saturation_ok=ok,
                              norm_ratio=norm_ratio, m_list=tuple(m_list))
