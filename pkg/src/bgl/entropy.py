"""Semi-metrics on index sets, covering numbers, entropy, and dimension.

Covering numbers N(T, d, eps) count closed eps-balls centered at points of T
needed to cover T.  The exact mode solves the induced minimum set cover by
branch and bound (greedy upper bound, packing lower bound) and is guaranteed
optimal; it is capped at m <= 24 points so the worst case stays fast.  The
greedy mode is deterministic (ties break on the lowest index), never smaller
than the optimum, and within a factor 1 + ln m of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EstimationError, SizeError
from .measure import FunctionFamily
from .norms import lp_norm_matrix
from .psi import PGrid, PsiFunction

__all__ = [
    "SemiMetric",
    "CoverLevel",
    "CoveringProfile",
    "family_semimetric",
    "covering_number",
    "covering_with_centers",
    "covering_profile",
    "entropy_dimension",
    "EXACT_COVER_LIMIT",
]

EXACT_COVER_LIMIT = 24


@dataclass(frozen=True)
class SemiMetric:
    """Symmetric nonnegative matrix with zero diagonal and the triangle
    inequality (checked to 1e-9 absolute on construction; a violation signals
    a bug in the norm that produced the distances)."""

    d: np.ndarray
    triangle_tol: float = 1e-9
    trusted: bool = False  # metrics exact by construction may skip the O(m^3) check

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        object.__setattr__(self, "d", d)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise DomainError("distance matrix must be square")
        if not np.array_equal(d, d.T):
            raise DomainError("distance matrix must be exactly symmetric")
        if np.any(np.diag(d) != 0.0):
            raise DomainError("diagonal must be exactly zero")
        if np.any(d < 0) or not np.all(np.isfinite(d)):
            raise DomainError("distances must be finite and nonnegative")
        if not self.trusted:
            tol = self.triangle_tol
            for j in range(d.shape[0]):
                if np.max(d - (d[:, j][:, None] + d[j, :][None, :])) > tol:
                    raise DomainError(f"triangle inequality violated through point {j}")

    @property
    def size(self) -> int:
        return int(self.d.shape[0])

    @property
    def diameter(self) -> float:
        return float(self.d.max())

    def min_positive(self) -> float | None:
        pos = self.d[self.d > 0]
        return float(pos.min()) if pos.size else None

    def n_distinct(self) -> int:
        """Number of zero-distance equivalence classes."""
        m = self.size
        seen = np.zeros(m, dtype=bool)
        count = 0
        for i in range(m):
            if not seen[i]:
                seen[self.d[i] == 0.0] = True
                count += 1
        return count

    @staticmethod
    def from_points(points) -> "SemiMetric":
        """Euclidean distances of a point cloud; the triangle inequality holds
        by construction, so the exhaustive check is skipped."""
        x = np.atleast_2d(np.asarray(points, dtype=float))
        if x.shape[0] == 1 and x.shape[1] > 1 and x.ndim == 2 and np.asarray(points).ndim == 1:
            x = x.T
        diff = x[:, None, :] - x[None, :, :]
        d = np.sqrt(np.sum(diff * diff, axis=2))
        d = 0.5 * (d + d.T)
        np.fill_diagonal(d, 0.0)
        return SemiMetric(d, trusted=True)

    def scaled(self, c: float) -> "SemiMetric":
        return SemiMetric(self.d * float(c), trusted=True)


def family_semimetric(family: FunctionFamily, p: float | None = None,
                      psi: PsiFunction | None = None, grid: PGrid | None = None,
                      check_sigma: bool = True) -> SemiMetric:
    """Pairwise distances |Y(t) - Y(s)|_p or ||Y(t) - Y(s)||_{G(psi)}.

    The grand Lebesgue variant evaluates member and difference norms on the
    same grid without refinement, which keeps d <= 2 sigma and the triangle
    inequality exact up to rounding.  All pairs go through one batched norm
    evaluation.
    """
    if (p is None) == (psi is None):
        raise DomainError("pass exactly one of p= or psi=/grid=")
    values = family.values_matrix()
    weights = family.space.weights
    m = family.m
    iu, ju = np.triu_indices(m, k=1)
    diffs = values[iu] - values[ju]
    d = np.zeros((m, m))
    if p is not None:
        ps = np.atleast_1d(float(p))
        norms = lp_norm_matrix(values, weights, ps)[:, 0]
        if iu.size:
            d[iu, ju] = d[ju, iu] = lp_norm_matrix(diffs, weights, ps)[:, 0]
    else:
        if grid is None:
            raise DomainError("the grand Lebesgue variant needs a grid")
        if not psi.contains_grid(grid):
            raise DomainError("grid not inside the support of psi")
        psi_vals = psi.eval(grid.points)
        norms = (lp_norm_matrix(values, weights, grid.points) / psi_vals).max(axis=1)
        if iu.size:
            pair = (lp_norm_matrix(diffs, weights, grid.points) / psi_vals).max(axis=1)
            d[iu, ju] = d[ju, iu] = pair
    metric = SemiMetric(d)
    if check_sigma:
        sigma = float(norms.max())
        if metric.diameter > 2.0 * sigma * (1.0 + 1e-9) + 1e-15:
            raise DomainError(
                f"distance {metric.diameter} exceeds 2*sigma = {2 * sigma}"
            )
    return metric


# ---------------------------------------------------------------------------
# covering numbers


def _ball_masks(metric: SemiMetric, eps: float) -> list[int]:
    within = metric.d <= eps
    bits = np.packbits(within, axis=0, bitorder="little")
    return [int.from_bytes(bits[:, j].tobytes(), "little") for j in range(metric.size)]


def _greedy_cover(masks: list[int], full: int) -> tuple[int, list[int]]:
    covered = 0
    centers = []
    while covered != full:
        best_j, best_gain = -1, -1
        for j, mask in enumerate(masks):
            gain = (mask & ~covered).bit_count()
            if gain > best_gain:
                best_j, best_gain = j, gain
        if best_gain <= 0:
            raise DomainError("greedy cover stalled; balls do not cover the set")
        covered |= masks[best_j]
        centers.append(best_j)
    return len(centers), centers


def _greedy_cover_dense(within: np.ndarray) -> tuple[int, list[int]]:
    """Incremental greedy on the boolean ball matrix; O(m^2) per level total.
    Ties break on the lowest index (np.argmax picks the first maximum)."""
    m = within.shape[0]
    uncovered = np.ones(m, dtype=bool)
    gains = within.sum(axis=0).astype(np.int64)
    centers = []
    while uncovered.any():
        j = int(np.argmax(gains))
        if gains[j] <= 0:
            raise DomainError("greedy cover stalled; balls do not cover the set")
        newly = within[:, j] & uncovered
        centers.append(j)
        uncovered &= ~within[:, j]
        gains -= within[newly].sum(axis=0)
    return len(centers), centers


def _packing_lower_bound(masks: list[int], uncovered: int, m: int) -> int:
    """Greedy packing of points no ball covers in pairs: each needs its own ball."""
    covers_of = [0] * m
    for j, mask in enumerate(masks):
        for i in range(m):
            if mask >> i & 1:
                covers_of[i] |= 1 << j
    remaining = uncovered
    count = 0
    while remaining:
        i = (remaining & -remaining).bit_length() - 1
        count += 1
        # drop every point sharing a ball with i
        blocked = 0
        for j in range(m):
            if covers_of[i] >> j & 1:
                blocked |= masks[j]
        remaining &= ~blocked
        remaining &= ~(1 << i)
    return count


def _exact_cover(masks: list[int], m: int) -> tuple[int, list[int]]:
    full = (1 << m) - 1
    best_size, best_centers = _greedy_cover(masks, full)
    max_ball = max(x.bit_count() for x in masks)

    def dfs(covered: int, chosen: list[int]):
        nonlocal best_size, best_centers
        if covered == full:
            if len(chosen) < best_size:
                best_size, best_centers = len(chosen), list(chosen)
            return
        uncovered = full & ~covered
        n_unc = uncovered.bit_count()
        lb = max(-(-n_unc // max_ball), _packing_lower_bound(masks, uncovered, m))
        if len(chosen) + lb >= best_size:
            return
        # branch on the uncovered point with the fewest available balls
        best_i, best_opts = -1, None
        for i in range(m):
            if uncovered >> i & 1:
                opts = [j for j, mask in enumerate(masks) if mask >> i & 1]
                if best_opts is None or len(opts) < len(best_opts):
                    best_i, best_opts = i, opts
        opts = sorted(best_opts, key=lambda j: -(masks[j] & uncovered).bit_count())
        for j in opts:
            chosen.append(j)
            dfs(covered | masks[j], chosen)
            chosen.pop()

    dfs(0, [])
    return best_size, best_centers


def covering_with_centers(metric: SemiMetric, eps: float,
                          mode: str = "exact") -> tuple[int, list[int]]:
    if eps <= 0:
        raise DomainError("eps must be positive")
    m = metric.size
    if mode == "exact":
        if m > EXACT_COVER_LIMIT:
            raise SizeError(
                f"exact covering is limited to m <= {EXACT_COVER_LIMIT}; use mode='greedy'"
            )
        return _exact_cover(_ball_masks(metric, eps), m)
    if mode == "greedy":
        return _greedy_cover_dense(metric.d <= eps)
    raise DomainError(f"unknown covering mode {mode!r}")


def covering_number(metric: SemiMetric, eps: float, mode: str = "exact") -> int:
    return covering_with_centers(metric, eps, mode)[0]


@dataclass(frozen=True)
class CoverLevel:
    k: int
    eps: float
    n_balls: int
    entropy: float
    centers: tuple


@dataclass(frozen=True)
class CoveringProfile:
    theta: float
    levels: tuple
    n_points: int
    exact: bool
    dimension_estimate: float | None = None

    def level_count(self, k: int) -> int:
        for lv in self.levels:
            if lv.k == k:
                return lv.n_balls
        raise KeyError(k)


def covering_profile(metric: SemiMetric, theta: float, k_max: int,
                     mode: str | None = None) -> CoveringProfile:
    """Covering numbers at eps = theta^k, k = 1..k_max, stopping once the
    levels saturate (singleton balls: N equals the number of distinct points).
    Centers are recorded per level for reuse by the chaining bounds."""
    if not (0.0 < theta < 1.0):
        raise DomainError("theta must lie in (0, 1)")
    m = metric.size
    if mode is None:
        mode = "exact" if m <= EXACT_COVER_LIMIT else "greedy"
    n_distinct = metric.n_distinct()
    levels = []
    for k in range(1, k_max + 1):
        eps = theta ** k
        n, centers = covering_with_centers(metric, eps, mode=mode)
        levels.append(CoverLevel(k=k, eps=eps, n_balls=n, entropy=math.log(n),
                                 centers=tuple(centers)))
        if n >= n_distinct:
            break
    return CoveringProfile(theta=theta, levels=tuple(levels), n_points=m,
                           exact=(mode == "exact"))


def entropy_dimension(profile: CoveringProfile, fit_range=None) -> float:
    """Least-squares slope of H against |log eps| over informative levels
    (those with 1 < N < n_points), restricted to k in fit_range if given."""
    pts = []
    for lv in profile.levels:
        if lv.n_balls <= 1 or lv.n_balls >= profile.n_points:
            continue
        if fit_range is not None and not (fit_range[0] <= lv.k <= fit_range[1]):
            continue
        pts.append((abs(math.log(lv.eps)), lv.entropy))
    if len(pts) < 3:
        raise EstimationError(
            f"need >= 3 informative levels to fit a dimension, have {len(pts)}"
        )
    x, y = np.array(pts).T
    slope = np.polyfit(x, y, 1)[0]
    return float(slope)
