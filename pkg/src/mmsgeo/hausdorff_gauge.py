"""Gauge Hausdorff measure via covers by closed balls.

The gauge of a closed ball is m(ball)/(2r), a codimension-one surrogate;
the delta-stage measure is the cheapest cover of the target set by balls
of radius at most delta. Weighted geometric set cover is NP-hard, so the
stage value is approximated from above by a deterministic greedy cover
with a pruning pass; tiny instances are certified optimal by
branch-and-bound. Verdicts that would need a lower bound on the measure
are therefore flagged upper-bound-only unless the exact search ran.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.spatial import cKDTree

from . import parallel
from .perimeter_coarea import PerimeterParams, _edge_trapz, perimeter
from .report import Report
from .slope_semigroup import (
    asymptotic_lip,
    lipschitz_estimate,
    slope_scale,
)
from .space_core import (
    ResolutionError,
    SampledSpace,
    ScalarField,
    SetIndicator,
    measure,
)


@dataclass
class GaugeParams:
    radii_ratio: float = math.sqrt(2.0)
    exact_limit: int = 10
    delta_max: Optional[float] = None
    n_delta: int = 6
    delta_ratio: float = math.sqrt(2.0)
    clean_factor: float = 8.0


@dataclass
class GaugeCover:
    """Verified ball cover of a target set with its total gauge cost."""

    balls: list
    cost: float
    delta: float
    exact_flag: bool
    greedy_cost: float

    def summary_dict(self):
        return {"cost": self.cost, "delta": self.delta,
                "n_balls": len(self.balls), "exact": self.exact_flag,
                "greedy_cost": self.greedy_cost}


@dataclass
class HausdorffEstimate:
    """Stage costs over a decreasing delta grid and the value at the
    finest quantization-clean stage."""

    delta_grid: np.ndarray
    costs: np.ndarray
    extrapolated: float
    exact_flag: bool
    covers: list

    def summary_dict(self):
        return {"delta_grid": [float(d) for d in self.delta_grid],
                "costs": [float(c) for c in self.costs],
                "extrapolated": self.extrapolated,
                "exact": self.exact_flag}


def ball_gauge(space: SampledSpace, x: int, r: float) -> float:
    """Gauge of the closed ball at sample x: m(ball)/(2r)."""
    if r <= 0:
        raise ValueError("ball radius must be positive")
    members = space.ball_members(int(x), r, closed=True)
    return float(space.weights[members].sum()) / (2.0 * r)


def _coverage_lists(space, centers, s_points, r):
    """Per-center arrays of covered S positions (0..len(s_points)-1)."""
    if space.kind in ("grid", "cloud"):
        tree = cKDTree(space.coords[s_points])
        return tree.query_ball_point(space.coords[centers], r * (1 + 1e-9))
    if space.kind == "circle":
        out = []
        for c in centers:
            k = np.abs(s_points - c)
            k = np.minimum(k, space.n - k)
            out.append(np.flatnonzero(k * space.arc <= r * (1 + 1e-9)))
        return out
    # matrix
    out = []
    for c in centers:
        out.append(np.flatnonzero(space.dmat[c, s_points] <= r * (1 + 1e-9)))
    return out


def _candidates(space, s_idx, delta, params):
    """Deterministic candidate pool: (center, radius, cost, coverage)."""
    h = space.resolution_h
    radii = []
    r = delta
    while r >= 2.0 * h * (1 - 1e-9):
        radii.append(r)
        r /= params.radii_ratio
    # half-integer lattice radii make closed-ball masses exact multiples
    # of the spacing, removing the quantization bias of the gauge
    unit = None
    if space.kind == "grid":
        unit = min(space.cell_sizes)
    elif space.kind == "circle":
        unit = space.arc
    if unit is not None:
        k = np.maximum(np.round(np.asarray(radii) / unit - 0.5), 1.0)
        radii = list(np.minimum((k + 0.5) * unit, delta))
    radii = sorted(set(radii))
    marks = np.zeros(space.n, dtype=bool)
    marks[s_idx] = True
    d_s = space.dist_to_marks(marks)
    cands = []
    for r in radii:
        centers = np.flatnonzero(d_s <= r * (1 + 1e-9))
        masses = space.ball_masses(r)
        cover = _coverage_lists(space, centers, s_idx, r)
        for c, cov in zip(centers, cover):
            if len(cov) == 0:
                continue
            cost = float(masses[c]) / (2.0 * r)
            cands.append((int(c), float(r), cost, np.asarray(cov, dtype=np.int64)))
    cands.sort(key=lambda t: (t[0], t[1]))
    return cands


def _greedy_cover(cands, n_targets):
    """Greedy max new-coverage-per-cost with a pruning pass."""
    rows = []
    cols = []
    for i, (_, _, _, cov) in enumerate(cands):
        rows.extend([i] * len(cov))
        cols.extend(cov.tolist())
    mat = sparse.csr_matrix(
        (np.ones(len(rows)), (rows, cols)), shape=(len(cands), n_targets))
    costs = np.array([c[2] for c in cands])
    covered = np.zeros(n_targets, dtype=np.float64)
    chosen = []
    while covered.sum() < n_targets:
        gains = mat @ (1.0 - covered)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(costs > 0, gains / costs,
                              np.where(gains > 0, np.inf, 0.0))
        best = int(np.argmax(ratios))
        if gains[best] <= 0:
            raise RuntimeError("greedy cover stalled")
        chosen.append(best)
        covered[cands[best][3]] = 1.0
    # prune: drop balls that became redundant, most expensive first
    chosen_sorted = sorted(chosen, key=lambda i: -costs[i])
    kept = list(chosen)
    for i in chosen_sorted:
        trial = [j for j in kept if j != i]
        cover = np.zeros(n_targets, dtype=bool)
        for j in trial:
            cover[cands[j][3]] = True
        if cover.all():
            kept = trial
    kept.sort()
    return kept, float(costs[kept].sum())


def _exact_cover(cands, n_targets, budget):
    """Branch-and-bound optimum for small instances."""
    cover_sets = [frozenset(c[3].tolist()) for c in cands]
    costs = [c[2] for c in cands]
    # dominated candidates never help
    keep = []
    for i in range(len(cands)):
        dominated = False
        for j in range(len(cands)):
            if i != j and cover_sets[i] <= cover_sets[j] and (
                    costs[j] < costs[i]
                    or (costs[j] == costs[i] and j < i)):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    by_elem = {e: [i for i in keep if e in cover_sets[i]]
               for e in range(n_targets)}
    min_cover_cost = {e: min(costs[i] for i in lst)
                      for e, lst in by_elem.items()}
    best = [budget, None]

    def dfs(uncovered, cost, chosen):
        if not uncovered:
            if cost < best[0]:
                best[0] = cost
                best[1] = list(chosen)
            return
        lb = cost + max(min_cover_cost[e] for e in uncovered)
        if lb >= best[0]:
            return
        pivot = min(uncovered, key=lambda e: len(by_elem[e]))
        for i in sorted(by_elem[pivot], key=lambda i: costs[i]):
            chosen.append(i)
            dfs(uncovered - cover_sets[i], cost + costs[i], chosen)
            chosen.pop()

    dfs(frozenset(range(n_targets)), 0.0, [])
    return best[1], best[0]


def hausdorff_delta(space: SampledSpace, S: SetIndicator, delta: float,
                    params: Optional[GaugeParams] = None) -> GaugeCover:
    """Stage-delta cover of the marked set by closed balls of radius <= delta."""
    params = params or GaugeParams()
    S.check(space)
    h = space.resolution_h
    if delta < 2.0 * h * (1 - 1e-9):
        raise ResolutionError("delta %g is below 2 x resolution_h" % delta)
    s_idx = np.flatnonzero(S.marks)
    if len(s_idx) == 0:
        return GaugeCover([], 0.0, delta, True, 0.0)
    cands = _candidates(space, s_idx, delta, params)
    kept, greedy_cost = _greedy_cover(cands, len(s_idx))
    balls = [(cands[i][0], cands[i][1]) for i in kept]
    cost = greedy_cost
    exact = False
    if len(s_idx) <= params.exact_limit:
        sol, opt = _exact_cover(cands, len(s_idx),
                                greedy_cost * (1 + 1e-12) + 1e-30)
        if sol is not None:
            balls = [(cands[i][0], cands[i][1]) for i in sol]
            cost = opt
        exact = True
    _verify_cover(space, balls, s_idx)
    return GaugeCover(balls, cost, delta, exact, greedy_cost)


def _verify_cover(space, balls, s_idx):
    covered = np.zeros(len(s_idx), dtype=bool)
    for c, r in balls:
        if space.kind in ("grid", "cloud"):
            diff = space.coords[s_idx] - space.coords[c]
            d = np.sqrt((diff * diff).sum(axis=1))
        elif space.kind == "circle":
            k = np.abs(s_idx - c)
            k = np.minimum(k, space.n - k)
            d = k * space.arc
        else:
            d = space.dmat[c, s_idx]
        covered |= d <= r * (1 + 1e-9)
    if not covered.all():
        raise AssertionError("cover verification failed")


def hausdorff(space: SampledSpace, S: SetIndicator,
              params: Optional[GaugeParams] = None) -> HausdorffEstimate:
    """Gauge measure estimate from stage costs over a decreasing delta grid.

    Stage costs are nondecreasing as delta shrinks (up to greedy noise),
    so the delta-to-zero limit is approached from below; the reported
    value is the cost at the finest delta still clean of radius
    quantization (delta >= clean_factor * resolution_h).
    """
    params = params or GaugeParams()
    S.check(space)
    h = space.resolution_h
    delta_max = params.delta_max if params.delta_max is not None else 16.0 * h
    deltas = []
    d = delta_max
    while d >= 2.0 * h * (1 - 1e-9) and len(deltas) < params.n_delta:
        deltas.append(d)
        d /= params.delta_ratio
    if len(deltas) < 3:
        raise ValueError("delta grid too short; raise delta_max")
    covers = parallel.pmap(
        lambda dd: hausdorff_delta(space, S, dd, params), deltas)
    costs = np.array([c.cost for c in covers])
    deltas = np.array(deltas)
    clean = deltas >= params.clean_factor * h * (1 - 1e-9)
    if clean.any():
        extrapolated = float(costs[clean][-1])
    else:
        extrapolated = float(costs[0])
    return HausdorffEstimate(deltas, costs, extrapolated,
                             all(c.exact_flag for c in covers), covers)


# -- coarea inequalities for the gauge measure ---------------------------------


@dataclass
class GaugeCoareaParams:
    n_levels: int = 24
    slope_factor: float = 3.0
    lip_pair_factor: float = 4.0
    gauge: GaugeParams = None

    def __post_init__(self):
        if self.gauge is None:
            self.gauge = GaugeParams()


def coarea_inequalities(space: SampledSpace, f: ScalarField,
                        B: SetIndicator, t_grid=None, delta=None,
                        params: Optional[GaugeCoareaParams] = None) -> Report:
    """Level-slab gauge integral against its three upper bounds.

    lhs integrates the stage-delta gauge cover cost of B intersected with
    the slab {|f - t| <= h Lip}; the bounds are the asymptotic-Lipschitz
    integral, twice the slope integral, and Lip(f) m(B).
    """
    params = params or GaugeCoareaParams()
    f.check(space)
    B.check(space)
    h = space.resolution_h
    if delta is None:
        delta = 8.0 * h
    fv = f.values
    fmax = float(fv.max())
    if t_grid is None:
        t_grid = (np.arange(params.n_levels) + 0.5) * fmax / params.n_levels
    t_grid = np.asarray(t_grid, dtype=np.float64)
    lip = lipschitz_estimate(space, f, params.slope_factor)
    slab_half = h * max(lip, 1e-30)

    def slab_cost(t):
        marks = B.marks & (np.abs(fv - t) <= slab_half)
        if not marks.any():
            return 0.0
        cover = hausdorff_delta(space, SetIndicator.from_mask(space, marks),
                                delta, params.gauge)
        return cover.cost

    costs = np.array(parallel.pmap(slab_cost, t_grid))
    lhs = _edge_trapz(costs, t_grid, fmax)

    w = space.weights
    sl = space.slope_field(fv, params.slope_factor * h)
    lip_a = asymptotic_lip(space, f, params.lip_pair_factor * h).values
    rhs_lipa = float((lip_a * w)[B.marks].sum())
    rhs_slope = 2.0 * float((sl * w)[B.marks].sum())
    rhs_global = lip * measure(space, B)

    rep = Report("gauge-coarea", meta={
        "lhs": lhs, "rhs_asymptotic_lip": rhs_lipa,
        "rhs_twice_slope": rhs_slope, "rhs_global_lip": rhs_global,
        "delta": delta, "lip_estimate": lip,
    })
    rep.add_table("levels", ["t", "slab_cover_cost"],
                  [[t, c] for t, c in zip(t_grid, costs)])
    rep.check("slab-integral-vs-asymptotic-lip",
              "gauge-slab-integral-asymptotic-lip", lhs, rhs_lipa, mode="le")
    rep.check("slab-integral-vs-twice-slope",
              "gauge-slab-integral-twice-slope", lhs, rhs_slope, mode="le")
    rep.check("slab-integral-vs-global-lip",
              "gauge-slab-integral-global-lip", lhs, rhs_global, mode="le")
    return rep


@dataclass
class CorollaryParams:
    fail_fraction: float = 0.1
    boundary_factor: float = 3.0
    band_factor: float = 0.05
    gauge: GaugeParams = None
    perimeter: Optional[PerimeterParams] = None

    def __post_init__(self):
        if self.gauge is None:
            self.gauge = GaugeParams()


def corollary_check(space: SampledSpace, f: ScalarField, t_grid,
                    params: Optional[CorollaryParams] = None) -> Report:
    """Perimeter of superlevel sets vs half the gauge measure of the boundary.

    The essential boundary has no finite-sample definition; the proxy is
    the set of samples with an opposite-membership neighbour within
    boundary_factor * h. Gauge values are cover upper bounds, which only
    tightens the check unless the exact search certified them.
    """
    params = params or CorollaryParams()
    f.check(space)
    fv = f.values
    t_grid = np.asarray(t_grid, dtype=np.float64)
    reach = params.boundary_factor * space.resolution_h
    per_params = params.perimeter or PerimeterParams(cross_check=False)

    rows = []
    upper_only = False
    n_pass = 0
    for t in t_grid:
        marks = fv >= t
        if not marks.any() or marks.all():
            rows.append([t, 0.0, 0.0, 1, 0])
            n_pass += 1
            continue
        ind = SetIndicator.from_mask(space, marks)
        d_in = space.dist_to_marks(marks)
        d_out = space.dist_to_marks(~marks)
        proxy = (marks & (d_out <= reach)) | (~marks & (d_in <= reach))
        est = hausdorff(space, SetIndicator.from_mask(space, proxy),
                        params.gauge)
        upper_only = upper_only or not est.exact_flag
        per = perimeter(space, ind, per_params).upper
        bound = 0.5 * est.extrapolated
        ok = per >= bound * (1.0 - params.band_factor)
        n_pass += bool(ok)
        rows.append([t, per, est.extrapolated, int(ok), int(not est.exact_flag)])

    rep = Report("gauge-corollary", meta={
        "upper_bound_only": upper_only,
        "boundary_proxy": "opposite-membership neighbour within %g x h"
                          % params.boundary_factor,
    })
    rep.add_table("levels", ["t", "perimeter_upper", "gauge_boundary",
                             "pass", "gauge_upper_bound_only"], rows)
    rep.check("perimeter-dominates-half-gauge-fraction",
              "half-gauge-boundary-bound", n_pass / len(t_grid),
              1.0 - params.fail_fraction, mode="ge",
              note="gauge side is an upper cover estimate"
                   if upper_only else "")
    return rep
