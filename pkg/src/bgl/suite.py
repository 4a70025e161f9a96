"""The acceptance matrix: every top-level verification in one runnable suite.

Each criterion is a pure function of an explicit seed, producing one record
with pass/fail and the evidence needed to reproduce a violation in
isolation (seed, case index, parameters).  `run_suite` strings them into a
deterministic report: same seed, byte-identical structured output.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.special import zeta as riemann_zeta

from .chaining import (
    chained_product_bound,
    entropy_sum_bound,
    generalized_pisier_bound,
    pisier_bound,
    series_S_beta,
)
from .entropy import SemiMetric, covering_number, covering_profile, entropy_dimension, family_semimetric
from .fixtures import (
    circle_lattice_metric,
    disjoint_indicator_family,
    make_rng,
    random_nonneg_family,
    random_plane_metric,
    random_trig_coeffs,
    torus_lattice_metric,
)
from .fourier import maximal_ratio_check, sample_function, square_wave_sample, trig_poly_sample
from .martingale import (
    build_walk_ensemble,
    doob_check,
    martingale_block_check,
    norming_identity,
    norming_log,
    norming_log_loglog,
    summability_check,
)
from .measure import DiscreteMeasureSpace, SimpleFunction
from .norms import bgl_norm, fatou_check, indicator_norm_check, natural_psi
from .psi import PGrid, constant, doob_factor, power
from .report import Record, Report

__all__ = ["run_suite", "CRITERIA"]


def _grid(p_max: float, n: int = 64, lo: float = 1.05) -> PGrid:
    return PGrid.log_spaced(lo, p_max, n, p_max_cap=p_max)


# --- 1. finite maximal inequality: domination and sharpness -----------------


def criterion_pisier(seed: int, p_max: float) -> Record:
    rng = make_rng(seed)
    ps = [1.5, 2.0, 4.0, 8.0]
    violations = 0
    worst = math.inf
    checked = 0
    for _ in range(200):
        fam = random_nonneg_family(rng, int(rng.integers(2, 33)), 48)
        for p in ps:
            r = pisier_bound(fam, p)
            margin = (r.bound - r.exact) / max(r.exact, 1e-300)
            worst = min(worst, margin)
            violations += margin < -1e-10
            checked += 1
    eq = max(abs(pisier_bound(disjoint_indicator_family(m), p).bound
                 / pisier_bound(disjoint_indicator_family(m), p).exact - 1.0)
             for m in [4, 16, 32] for p in ps)
    ok = violations == 0 and eq <= 1e-10
    return Record("pisier_domination_and_sharpness", ok,
                  fields=dict(seed=seed, checked=checked, violations=violations,
                              worst_rel_margin=worst, equality_gap=eq))


# --- 2. product-space version with the fundamental function -----------------


def criterion_generalized_pisier(seed: int, p_max: float) -> Record:
    rng = make_rng(seed)
    grid = _grid(p_max)
    violations = 0
    worst = math.inf
    checked = 0
    for i in range(200):
        fam = random_nonneg_family(rng, int(rng.integers(2, 33)), 48)
        pairs = [
            (constant(), constant()),
            (power(1.0), doob_factor()),
            (natural_psi(fam, grid), power(1.0)),
        ]
        for psi, nu in pairs:
            r = generalized_pisier_bound(fam, psi, nu, grid)
            margin = (r.bound - r.exact) / max(r.exact, 1e-300)
            worst = min(worst, margin)
            violations += margin < -1e-8
            checked += 1
    return Record("generalized_pisier_domination", violations == 0,
                  fields=dict(seed=seed, checked=checked, violations=violations,
                              worst_rel_margin=worst))


# --- 3. chaining bound in the grand Lebesgue scale --------------------------


def criterion_chained_bound(seed: int, p_max: float) -> Record:
    rng = make_rng(seed)
    grid = _grid(p_max)
    thetas = [0.3, 0.5, 0.7]
    violations = 0
    worst = math.inf
    checked = 0
    for i in range(50):
        fam = random_nonneg_family(rng, int(rng.integers(4, 17)), 32)
        psi0 = natural_psi(fam, grid)
        metric = family_semimetric(fam, psi=psi0, grid=grid)
        for nu in [constant(), power(1.0)]:
            for theta in thetas:
                rep = chained_product_bound(fam, psi0, nu, grid, theta, metric=metric)
                margin = ((rep.bound_value - rep.exact_sup_norm)
                          / max(rep.exact_sup_norm, 1e-300))
                worst = min(worst, margin)
                violations += margin < -1e-8
                checked += 1
    return Record("chained_product_bound_domination", violations == 0,
                  fields=dict(seed=seed, checked=checked, violations=violations,
                              worst_rel_margin=worst))


# --- 4. fundamental function against a measure-space indicator --------------


def criterion_indicator(seed: int, p_max: float) -> Record:
    space = DiscreteMeasureSpace(np.full(256, 1.0 / 16.0))  # dyadic masses exact
    grid = _grid(p_max)
    psis = [constant(), power(0.5), power(2.0), doob_factor()]
    deltas = [0.25, 0.5, 1.0, 2.0, 4.0]
    worst = 0.0
    ok = True
    for delta in deltas:
        for psi in psis:
            rep = indicator_norm_check(space, delta, psi, grid, tol=1e-9)
            worst = max(worst, rep.rel_diff)
            ok = ok and rep.passed
    return Record("fundamental_function_consistency", ok,
                  fields=dict(pairs=len(deltas) * len(psis), worst_rel_diff=worst))


# --- 5. monotone norm convergence --------------------------------------------


def criterion_fatou(seed: int, p_max: float) -> Record:
    n = 1000
    space = DiscreteMeasureSpace(np.full(n, 1.0 / n))
    full = SimpleFunction(space, 2.0 ** -(np.arange(n) / 40.0))
    chain = []
    for k in range(50, n + 1, 50):
        v = np.zeros(n)
        v[:k] = full.values[:k]
        chain.append(SimpleFunction(space, v))
    rep = fatou_check(chain, full, doob_factor(), _grid(p_max, lo=1.1))
    ok = rep.monotone and 0.0 <= rep.terminal_gap < 1e-6
    return Record("fatou_monotone_convergence", ok,
                  fields=dict(chain_length=len(chain), terminal_gap=rep.terminal_gap,
                              monotone=rep.monotone))


# --- 6. covering numbers against exhaustive enumeration ---------------------


def _brute_force_cover(metric: SemiMetric, eps: float) -> int:
    m = metric.size
    within = metric.d <= eps
    masks = []
    for j in range(m):
        mask = 0
        for i in np.flatnonzero(within[:, j]):
            mask |= 1 << int(i)
        masks.append(mask)
    full = (1 << m) - 1
    for k in range(1, m + 1):
        for centers in itertools.combinations(range(m), k):
            acc = 0
            for c in centers:
                acc |= masks[c]
            if acc == full:
                return k
    return m


def criterion_covering_oracle(seed: int, p_max: float) -> Record:
    rng = make_rng(seed)
    mismatches = 0
    for i in range(200):
        m = int(rng.integers(3, 13))
        metric = random_plane_metric(rng, m)
        eps = float(rng.uniform(0.05, 1.1)) * max(metric.diameter, 0.05)
        if covering_number(metric, eps, "exact") != _brute_force_cover(metric, eps):
            mismatches += 1
    return Record("covering_exact_equals_bruteforce", mismatches == 0,
                  fields=dict(seed=seed, metrics=200, mismatches=mismatches))


# --- 7. entropy dimension of fine grids --------------------------------------


def criterion_dimension(seed: int, p_max: float) -> Record:
    # periodic lattices: the wraparound metric removes the boundary bias of
    # the centered-ball estimator, and dyadic alignment keeps the mid-range
    # covering numbers on the exact 2^k / 4^k ladder
    prof1 = covering_profile(circle_lattice_metric(8), 0.5, 12)
    kappa1 = entropy_dimension(prof1, fit_range=(2, 6))
    prof2 = covering_profile(torus_lattice_metric(6), 0.5, 8)
    kappa2 = entropy_dimension(prof2, fit_range=(2, 4))
    ok = abs(kappa1 - 1.0) <= 0.2 and abs(kappa2 - 2.0) <= 0.2
    return Record("entropy_dimension_of_grids", ok,
                  fields=dict(kappa_line=kappa1, kappa_square=kappa2))


# --- 8. the elementary series bounds -----------------------------------------


def criterion_series(seed: int, p_max: float) -> Record:
    qs = [0.5, 0.7, 0.9, 0.99]
    closed_ok = True
    worst_closed = 0.0
    for q in qs:
        e0 = abs(series_S_beta(q, 0.0).s_value - q / (1.0 - q)) / (q / (1.0 - q))
        e1 = abs(series_S_beta(q, 1.0).s_value - q / (1.0 - q) ** 2) / (q / (1.0 - q) ** 2)
        worst_closed = max(worst_closed, e0, e1)
        closed_ok = closed_ok and e0 <= 1e-12 and e1 <= 1e-12
    # fitted constants must sit within a factor 2 of the q -> 1 limits
    stable_ok = True
    details = []
    for beta in [-2.0, -1.0, -0.5, 0.5, 2.0]:
        ratios = [series_S_beta(q, beta).constant_used for q in qs]
        if beta > -1.0:
            limit = math.gamma(beta + 1.0)
        elif beta == -1.0:
            limit = 1.0
        else:
            limit = float(riemann_zeta(-beta))
        fitted = max(ratios)
        stable = limit / 2.0 <= fitted <= limit * (1.0 + 1e-9)
        stable_ok = stable_ok and stable
        details.append(fitted / limit)
    return Record("series_bounds", closed_ok and stable_ok,
                  fields=dict(worst_closed_form_error=worst_closed,
                              fitted_over_limit=details))


# --- 9. the Doob maximal inequality, exactly ---------------------------------


def criterion_doob(seed: int, p_max: float) -> Record:
    worst_slack = math.inf
    ok = True
    checked = 0
    for horizon in [10, 14]:
        ens = build_walk_ensemble(horizon)
        for p in [1.25, 2.0, 4.0]:
            cap = p / (p - 1.0)
            for n in range(1, horizon + 1):
                rep = doob_check(ens, p, n)
                ok = ok and rep.ratio <= cap
                worst_slack = min(worst_slack, cap - rep.ratio)
                checked += 1
    return Record("doob_ratio_under_cap", ok,
                  fields=dict(checked=checked, worst_slack=worst_slack))


# --- 10. the dyadic-block proof chain ----------------------------------------


def criterion_block_chain(seed: int, p_max: float) -> Record:
    ens = build_walk_ensemble(14)
    grid = PGrid.log_spaced(1.1, min(50.0, p_max), 48)
    ok = True
    ratios = []
    for v in [norming_identity(), norming_log_loglog(1.0)]:
        rep = martingale_block_check(ens, constant(), v, grid)
        ok = ok and rep.all_blocks_pass and rep.ratio <= 1.0 + 1e-9
        ok = ok and rep.condition.summable
        ratios.append(rep.ratio)
    log_flagged = not summability_check(norming_log()).summable
    ok = ok and log_flagged
    return Record("martingale_block_chain", ok,
                  fields=dict(ratios=ratios, log_flagged_nonsummable=log_flagged))


# --- 11. the Fourier maximal operator saturates ------------------------------


def criterion_fourier(seed: int, p_max: float) -> Record:
    rng = make_rng(seed)
    grid = PGrid.log_spaced(1.1, 32.0, 24)
    m_list = [16, 32, 64, 128]
    samples = [square_wave_sample(1024)]
    for _ in range(5):
        a, b = random_trig_coeffs(rng, int(rng.integers(3, 13)))
        samples.append(trig_poly_sample(a, b, 1024))
    ok = True
    worst_ratio = 0.0
    for s in samples:
        rep = maximal_ratio_check(s, constant(), grid, m_list)
        ok = ok and rep.saturation_ok
        worst_ratio = max(worst_ratio, rep.norm_ratio)
    return Record("fourier_maximal_saturation", ok,
                  fields=dict(seed=seed, samples=len(samples),
                              worst_norm_ratio=worst_ratio))


CRITERIA = [
    criterion_pisier,
    criterion_generalized_pisier,
    criterion_chained_bound,
    criterion_indicator,
    criterion_fatou,
    criterion_covering_oracle,
    criterion_dimension,
    criterion_series,
    criterion_doob,
    criterion_block_chain,
    criterion_fourier,
]


def run_suite(seed: int = 1, p_max: float = 200.0) -> Report:
    """Run every acceptance criterion; sub-seeds derive deterministically."""
    report = Report(meta={"kind": "suite", "seed": seed, "p_max": p_max})
    for i, criterion in enumerate(CRITERIA):
        report.records.append(criterion(seed * 1000 + i, p_max))
    return report
