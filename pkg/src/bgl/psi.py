"""Generating functions for grand Lebesgue norms.

A generating function psi lives on an open interval (a, b) with
1 <= a < b <= inf and satisfies psi(p) >= 1 there.  The norm built from it,
sup_p |f|_p / psi(p), only ever needs point evaluation, so a function is
stored as a vectorized evaluator plus its support endpoints.  Closed forms
(constant, power, p/(p-1), p/(p-kappa), tabulated) are provided as
constructors, and the transforms used by the maximal inequalities
(products, kappa corrections, the Doob and Fourier weight factors) return
new evaluators on the appropriately restricted support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError

__all__ = [
    "PsiFunction",
    "PGrid",
    "LogConvexityReport",
    "constant",
    "power",
    "doob_factor",
    "ratio",
    "from_table",
    "from_formula",
    "product_psi",
    "psi_kappa",
    "psi_kappa12",
    "psi_doob",
    "psi_fourier",
    "check_log_convex",
    "tabulate_psi",
]


@dataclass(frozen=True)
class PsiFunction:
    """A generating function: support endpoints plus a vectorized evaluator."""

    a: float
    b: float
    eval: Callable[[np.ndarray], np.ndarray]
    label: str = "psi"

    def __post_init__(self):
        if not (self.a >= 1.0):
            raise DomainError(f"lower endpoint a={self.a} must be >= 1")
        if not (self.b > self.a):
            raise DomainError(f"need a < b, got a={self.a}, b={self.b}")

    def __call__(self, p):
        """Evaluate at p (scalar or array), requiring p inside the open support."""
        arr = np.asarray(p, dtype=float)
        if np.any(arr <= self.a) or np.any(arr >= self.b):
            raise DomainError(
                f"p={p} outside open support ({self.a}, {self.b}) of {self.label}"
            )
        out = np.asarray(self.eval(arr), dtype=float)
        return float(out) if np.isscalar(p) or arr.ndim == 0 else out

    def contains_grid(self, grid: "PGrid") -> bool:
        pts = grid.points
        return bool(pts[0] > self.a and pts[-1] < self.b)


@dataclass(frozen=True)
class PGrid:
    """Finite p-grid used to discretize sup over the open interval.

    When the support is unbounded the grid stops at ``p_max_cap``; the true
    supremum may then be approached only in the limit p -> inf, which callers
    of edge-monotone quantities (e.g. delta^{1/p} with delta < 1) must expect.
    """

    points: np.ndarray
    p_max_cap: float = 200.0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if pts.size < 2:
            raise DomainError("a p-grid needs at least 2 points")
        if np.any(np.diff(pts) <= 0):
            raise DomainError("p-grid points must be strictly increasing")

    @staticmethod
    def log_spaced(lo: float, hi: float, n: int = 128, p_max_cap: float = 200.0) -> "PGrid":
        hi = min(hi, p_max_cap)
        if not (0 < lo < hi):
            raise DomainError(f"need 0 < lo < hi, got lo={lo}, hi={hi}")
        return PGrid(np.geomspace(lo, hi, n), p_max_cap=p_max_cap)

    @staticmethod
    def inside(psi: PsiFunction, n: int = 128, p_max_cap: float = 200.0,
               edge: float = 1e-3) -> "PGrid":
        """Log-spaced grid strictly inside the support of psi."""
        a, b = psi.a, psi.b
        if math.isinf(b):
            lo = a + edge * max(1.0, a)
            hi = p_max_cap
        else:
            lo = a + edge * (b - a)
            hi = b - edge * (b - a)
        return PGrid.log_spaced(lo, hi, n, p_max_cap=p_max_cap)

    def with_extra(self, extra) -> np.ndarray:
        """Grid points merged with extra candidates, sorted and deduplicated."""
        if extra is None:
            return self.points
        merged = np.union1d(self.points, np.asarray(extra, dtype=float))
        return merged


# ---------------------------------------------------------------------------
# constructors


def constant(value: float = 1.0, a: float = 1.0, b: float = math.inf) -> PsiFunction:
    if value < 1.0:
        raise DomainError("generating functions satisfy psi >= 1")
    return PsiFunction(a, b, lambda p: np.full_like(np.asarray(p, float), value),
                       label=f"const[{value:g}]")


def power(beta: float, a: float = 1.0, b: float = math.inf) -> PsiFunction:
    """psi(p) = p^beta.  With a >= 1 and beta >= 0 this stays >= 1."""
    return PsiFunction(a, b, lambda p: np.asarray(p, float) ** beta,
                       label=f"power[{beta:g}]")


def doob_factor(a: float = 1.0, b: float = math.inf) -> PsiFunction:
    """psi(p) = p/(p-1) on (max(a,1), b), the weight of the Doob inequality."""
    return PsiFunction(max(a, 1.0), b, lambda p: np.asarray(p, float) / (np.asarray(p, float) - 1.0),
                       label="doob_factor")


def ratio(kappa: float, b: float = math.inf) -> PsiFunction:
    """psi(p) = p/(p-kappa) on (max(kappa,1), b)."""
    if kappa <= 0:
        raise DomainError("ratio constructor needs kappa > 0")
    a = max(kappa, 1.0)
    if a >= b:
        raise DomainError(f"kappa={kappa} leaves no support below b={b}")
    return PsiFunction(a, b, lambda p: np.asarray(p, float) / (np.asarray(p, float) - kappa),
                       label=f"ratio[{kappa:g}]")


def from_table(points, values, a: float | None = None, b: float | None = None,
               label: str = "table") -> PsiFunction:
    """Piecewise-linear-in-log interpolation of tabulated values.

    Interpolates log psi linearly in p between the tabulated points and
    extends flat beyond them; the support defaults to the tabulated range.
    """
    pts = np.asarray(points, dtype=float)
    vals = np.asarray(values, dtype=float)
    if pts.size != vals.size or pts.size < 2:
        raise DomainError("table needs >= 2 matching points and values")
    if np.any(np.diff(pts) <= 0):
        raise DomainError("table points must be strictly increasing")
    if np.any(vals <= 0):
        raise DomainError("table values must be positive")
    logv = np.log(vals)
    a = pts[0] if a is None else a
    b = pts[-1] if b is None else b
    return PsiFunction(a, b, lambda p: np.exp(np.interp(np.asarray(p, float), pts, logv)),
                       label=label)


def from_formula(fn, a: float, b: float, label: str = "formula") -> PsiFunction:
    """Wrap an arbitrary vectorized formula as a generating function."""
    return PsiFunction(a, b, lambda p: np.asarray(fn(np.asarray(p, float)), dtype=float),
                       label=label)


# ---------------------------------------------------------------------------
# transforms


def _intersect(psi: PsiFunction, nu: PsiFunction) -> tuple[float, float]:
    a = max(psi.a, nu.a)
    b = min(psi.b, nu.b)
    if a >= b:
        raise DomainError(
            f"supports ({psi.a},{psi.b}) and ({nu.a},{nu.b}) have empty intersection"
        )
    return a, b


def product_psi(psi: PsiFunction, nu: PsiFunction) -> PsiFunction:
    """Pointwise product on the intersection of the supports."""
    a, b = _intersect(psi, nu)
    return PsiFunction(a, b, lambda p: psi.eval(np.asarray(p, float)) * nu.eval(np.asarray(p, float)),
                       label=f"({psi.label})*({nu.label})")


def psi_kappa(psi: PsiFunction, kappa: float) -> PsiFunction:
    """psi(p) * p/(p - kappa) on the support restricted to p > max(kappa, 1)."""
    if kappa <= 0:
        raise DomainError("psi_kappa needs kappa > 0")
    a = max(psi.a, kappa, 1.0)
    if a >= psi.b:
        raise DomainError(f"kappa={kappa} leaves no support inside ({psi.a},{psi.b})")
    return PsiFunction(
        a, psi.b,
        lambda p: psi.eval(np.asarray(p, float)) * np.asarray(p, float) / (np.asarray(p, float) - kappa),
        label=f"{psi.label}^({kappa:g})",
    )


def psi_kappa12(psi: PsiFunction, kappa1: float, kappa2: float) -> PsiFunction:
    """Correction for polynomial-times-logarithmic entropy growth.

    For kappa2 < kappa1 the factor is [p/(p-kappa1)]^(1-kappa2/kappa1); for
    kappa2 = kappa1 it is max(|log(p-kappa1)/log p|, 1); for kappa2 > kappa1
    no correction is needed and psi itself is returned.
    """
    if kappa1 <= 0:
        raise DomainError("psi_kappa12 needs kappa1 > 0")
    if kappa2 > kappa1:
        return psi
    a = max(psi.a, kappa1, 1.0)
    if a >= psi.b:
        raise DomainError(f"kappa1={kappa1} leaves no support inside ({psi.a},{psi.b})")
    if kappa2 == kappa1:
        def ev(p):
            p = np.asarray(p, float)
            z = np.abs(np.log(p - kappa1) / np.log(p))
            return np.maximum(z, 1.0) * psi.eval(p)
        lab = f"{psi.label}^(log;{kappa1:g})"
    else:
        expo = 1.0 - kappa2 / kappa1

        def ev(p):
            p = np.asarray(p, float)
            return (p / (p - kappa1)) ** expo * psi.eval(p)
        lab = f"{psi.label}^({kappa1:g},{kappa2:g})"
    return PsiFunction(a, psi.b, ev, label=lab)


def psi_doob(psi: PsiFunction) -> PsiFunction:
    """p * psi(p)/(p - 1) on the support intersected with (1, inf)."""
    a = max(psi.a, 1.0)
    if a >= psi.b:
        raise DomainError("no support above p = 1")
    return PsiFunction(
        a, psi.b,
        lambda p: np.asarray(p, float) * psi.eval(np.asarray(p, float)) / (np.asarray(p, float) - 1.0),
        label=f"doob({psi.label})",
    )


def psi_fourier(psi: PsiFunction) -> PsiFunction:
    """p^4 * psi(p)/(p - 1)^2, the weight for the Fourier maximal function."""
    a = max(psi.a, 1.0)
    if a >= psi.b:
        raise DomainError("no support above p = 1")
    return PsiFunction(
        a, psi.b,
        lambda p: np.asarray(p, float) ** 4 * psi.eval(np.asarray(p, float))
        / (np.asarray(p, float) - 1.0) ** 2,
        label=f"fourier({psi.label})",
    )


# ---------------------------------------------------------------------------
# diagnostics


@dataclass(frozen=True)
class LogConvexityReport:
    passed: bool
    worst_violation: float
    worst_triple: tuple[float, float, float] | None = None
    tol: float = 1e-9


def check_log_convex(psi: PsiFunction, grid: PGrid, tol: float = 1e-9) -> LogConvexityReport:
    """Midpoint log-convexity of psi in the variable u = 1/p over grid triples.

    Every moment function p -> |f|_p obeys Lyapunov's inequality
    |f|_r <= |f|_p^(1-lam) |f|_q^lam when 1/r = (1-lam)/p + lam/q, i.e. its
    log is convex in 1/p, and suprema of moment functions inherit this.  The
    check measures the worst relative excess of psi(r) over the interpolated
    geometric bound across all grid triples p_i < p_j < p_k.  Violations are
    reported, not raised: computed natural functions carry sampling noise.
    """
    pts = grid.points
    if not psi.contains_grid(grid):
        raise DomainError("grid not inside the support of psi")
    logv = np.log(psi.eval(pts))
    u = 1.0 / pts
    n = pts.size
    worst = -math.inf
    worst_triple = None
    for i in range(n - 2):
        for k in range(i + 2, n):
            js = np.arange(i + 1, k)
            lam = (u[js] - u[i]) / (u[k] - u[i])
            interp = (1.0 - lam) * logv[i] + lam * logv[k]
            excess = logv[js] - interp
            jmax = int(np.argmax(excess))
            if excess[jmax] > worst:
                worst = float(excess[jmax])
                worst_triple = (float(pts[i]), float(pts[js[jmax]]), float(pts[k]))
    violation = math.expm1(worst)
    return LogConvexityReport(passed=violation <= tol, worst_violation=violation,
                              worst_triple=worst_triple, tol=tol)


def tabulate_psi(psi: PsiFunction, grid: PGrid) -> np.ndarray:
    """Values of psi on the grid (for reports and serialization)."""
    return psi.eval(grid.points)
