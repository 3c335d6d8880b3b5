"""Perimeter via the recovery family, total variation, and coarea checks.

The perimeter of a marked set is estimated from the slope mass of
clipped distance ramps f = 1 - min(1, d(., A^s)/r') over a grid of
(s, r') scales. The slope integral is taken over the open ramp
{0 < f < 1} (the function is constant elsewhere, where any nonzero
discrete quotient is pure smearing) and the values are extrapolated
linearly in the geometric scale s + r'/2, which removes the curvature
bias of working at finite enlargement width. The relaxed-content value
of the same set cross-checks the result through an independent route
(measure quotients instead of slope sums).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import ndimage

from . import parallel
from .minkowski import (
    ContentParams,
    RelaxedParams,
    content,
    distance_to_set,
    relaxed_content,
)
from .report import Report
from .slope_semigroup import slope_scale
from .space_core import (
    SampledSpace,
    ScalarField,
    SetIndicator,
    measure,
)


@dataclass
class PerimeterParams:
    s_factors: tuple = (1.0, 2.0, 4.0)
    rp_factors: tuple = (8.0, 16.0, 24.0, 32.0, 48.0)
    r_max_factor: float = 64.0
    slope_factor: float = 3.0
    l1_budget: Optional[float] = None
    cross_check: bool = True
    relaxed: Optional[RelaxedParams] = None
    content_window: Optional[tuple] = None


@dataclass
class PerimeterEstimate:
    """Slope-route perimeter estimate with its content-route cross-check."""

    upper: float
    raw_min: float
    witness_params: tuple
    cross_check: Optional[float]
    cross_band: float
    band: float
    l1_error: float
    table: list

    def agree_within_bands(self) -> bool:
        if self.cross_check is None:
            return True
        return abs(self.upper - self.cross_check) <= self.band + self.cross_band

    def summary_dict(self):
        return {
            "upper": self.upper,
            "raw_min": self.raw_min,
            "witness_params": list(self.witness_params),
            "cross_check": self.cross_check,
            "cross_band": self.cross_band,
            "band": self.band,
            "l1_error": self.l1_error,
        }


def recovery_field(space: SampledSpace, A: SetIndicator, s: float,
                   rp: float) -> ScalarField:
    """Clipped distance ramp: 1 on A^s, falling to 0 across width r'."""
    d_A = distance_to_set(space, A).values
    marks_s = d_A < s if s > 0 else A.marks
    d_s = space.dist_to_marks(marks_s)
    vals = 1.0 - np.minimum(1.0, d_s / rp)
    return ScalarField.from_values(space, vals)


def _ramp_slope_sum(space, d_s, rp, delta):
    """Slope mass of the ramp over its open transition region."""
    vals = 1.0 - np.minimum(1.0, d_s / rp)
    sl = space.slope_field(vals, delta)
    ramp = (d_s > 0.0) & (d_s < rp)
    return float((sl[ramp] * space.weights[ramp]).sum()), vals


def perimeter(space: SampledSpace, A: SetIndicator,
              params: Optional[PerimeterParams] = None) -> PerimeterEstimate:
    """Recovery-family perimeter estimate of the marked set."""
    params = params or PerimeterParams()
    A.check(space)
    if measure(space, A) <= 0:
        raise ValueError("perimeter needs m(A) > 0")
    h = space.resolution_h
    delta = params.slope_factor * h
    r_max = params.r_max_factor * h
    d_A = space.dist_to_marks(A.marks)
    chi = A.marks.astype(np.float64)
    w = space.weights

    rows = []
    for sf in params.s_factors:
        s = sf * h
        marks_s = d_A < s
        d_s = space.dist_to_marks(marks_s)
        for rf in params.rp_factors:
            rp = rf * h
            if s + rp > r_max:
                continue
            value, vals = _ramp_slope_sum(space, d_s, rp, delta)
            l1 = float((np.abs(vals - chi) * w).sum())
            if params.l1_budget is not None and l1 > params.l1_budget:
                continue
            rows.append((s, rp, value, l1))
    if not rows:
        raise ValueError("no (s, r') pair admissible under r_max/L1 budget")

    # V(s, r') carries a geometric bias linear in s + r'/2 (the ramp sits
    # outside A) and an edge deflation like h/r' (quotients near the ramp
    # ends are partial); extrapolate both away.
    x = np.array([s + rp / 2.0 for s, rp, _, _ in rows])
    z = np.array([h / rp for _, rp, _, _ in rows])
    v = np.array([val for _, _, val, _ in rows])
    if len(rows) >= 4 and np.ptp(x) > 0 and np.ptp(z) > 0:
        X = np.stack([np.ones_like(x), x, z], axis=1)
        coef, *_ = np.linalg.lstsq(X, v, rcond=None)
        resid = v - X @ coef
        upper = float(coef[0])
        band = float(2.0 * np.abs(resid).max() + 0.04 * abs(upper))
    else:
        upper = float(v.min())
        band = float(0.1 * abs(upper))
    upper = max(upper, 0.0)

    order = sorted(range(len(rows)),
                   key=lambda i: (rows[i][2], -rows[i][0], rows[i][1]))
    best = rows[order[0]]
    cross = None
    cross_band = 0.0
    if params.cross_check:
        rparams = params.relaxed or RelaxedParams(window=params.content_window)
        rel = relaxed_content(space, A, rparams)
        cross = rel.extrapolated
        cross_band = rel.band
    return PerimeterEstimate(
        upper=upper, raw_min=float(best[2]), witness_params=(best[0], best[1]),
        cross_check=cross, cross_band=cross_band, band=band,
        l1_error=float(best[3]),
        table=[list(r) for r in rows],
    )


# -- total variation -----------------------------------------------------------


@dataclass
class VarParams:
    n_levels: int = 64
    slope_factor: float = 3.0
    content: ContentParams = None
    window: Optional[tuple] = None

    def __post_init__(self):
        if self.content is None:
            self.content = ContentParams()


@dataclass
class VarEstimate:
    """Two-sided total-variation estimate.

    upper: slope mass at the working scale. lower: integral over levels
    of the lower content of the superlevel sets.
    """

    upper: float
    lower: float
    band_upper: float
    band_lower: float
    t_grid: np.ndarray
    per_level_lower: np.ndarray


def _level_marks(space, fv, t):
    return SetIndicator.from_mask(space, fv >= t)


def _edge_trapz(values, t_grid, upper_end):
    """Trapezoid over the grid plus flat extensions to 0 and upper_end."""
    core = float(np.trapezoid(values, t_grid))
    left = float(values[0] * t_grid[0])
    right = float(values[-1] * (upper_end - t_grid[-1]))
    return core + left + right


def total_variation(space: SampledSpace, f: ScalarField,
                    params: Optional[VarParams] = None) -> VarEstimate:
    """Var(f) bracketed by slope mass above and level contents below."""
    params = params or VarParams()
    f.check(space)
    fv = f.values
    if np.any(fv < 0):
        raise ValueError("total variation expects a nonnegative field")
    delta = params.slope_factor * space.resolution_h
    sl = space.slope_field(fv, delta)
    upper = float((sl * space.weights).sum())
    fmax = float(fv.max())
    if fmax <= 0:
        return VarEstimate(upper, 0.0, 0.0, 0.0, np.array([]), np.array([]))
    t_grid = (np.arange(params.n_levels) + 0.5) * fmax / params.n_levels

    def level_value(t):
        marks = _level_marks(space, fv, t)
        if not marks.marks.any():
            return 0.0, 0.0
        est = content(space, marks, window=params.window, kind="lower",
                      params=params.content)
        return max(est.extrapolated, 0.0), est.band

    pairs = parallel.pmap(level_value, t_grid)
    per_level = np.array([p[0] for p in pairs])
    bands = np.array([p[1] for p in pairs])
    lower = _edge_trapz(per_level, t_grid, fmax)
    band_lower = _edge_trapz(bands, t_grid, fmax)
    return VarEstimate(upper, lower, 0.0, band_lower, t_grid, per_level)


# -- variational descent ---------------------------------------------------------


@dataclass
class DescentParams:
    lam: float = 1.0
    max_iter: int = 25
    tol: float = 1e-9
    smooth_factors: tuple = (4.0, 8.0, 16.0, 32.0, 64.0)
    blend: tuple = (1.0, 0.5, 0.25)
    t_levels: tuple = (0.25, 0.5, 0.75)
    shift_factors: tuple = (2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0)
    ramp_factor: float = 8.0
    slope_factor: float = 3.0
    perimeter: Optional[PerimeterParams] = None


def _ball_mean(space, values, radius):
    if space.kind == "grid":
        offs, _ = space._grid_offsets(radius, closed=True, include_zero=True)
        from .kernels import footprint_from_offsets

        mask = footprint_from_offsets(offs, len(space.grid_shape)).astype(float)
        grid = values.reshape(space.grid_shape)
        num = ndimage.convolve(grid, mask, mode="constant", cval=0.0)
        den = ndimage.convolve(np.ones_like(grid), mask, mode="constant",
                               cval=0.0)
        return (num / den).ravel()
    if space.kind == "circle":
        k = int(radius / space.arc * (1 + 1e-9))
        ker = np.ones(2 * k + 1) / (2 * k + 1)
        return ndimage.convolve1d(values, ker, mode="wrap")
    return values.copy()


def variational_descent(space: SampledSpace, A: SetIndicator,
                        params: Optional[DescentParams] = None):
    """Greedy objective descent from the best recovery ramp.

    Objective: slope mass at the working scale plus lam * L1 distance to
    the indicator. Proposals: ball-mean smoothing at several radii, their
    blends, data pulls toward the indicator, and ramps rebuilt on
    superlevel sets of the smoothed field (this is what lets transitions
    relocate into cheaper regions). The trace is nonincreasing by
    construction; an increase aborts with a diagnostic.
    """
    params = params or DescentParams()
    A.check(space)
    if measure(space, A) <= 0:
        raise ValueError("descent needs m(A) > 0")
    h = space.resolution_h
    delta = params.slope_factor * h
    chi = A.marks.astype(np.float64)
    w = space.weights

    def objective(values):
        sl = space.slope_field(values, delta)
        return (float((sl * w).sum()),
                float((np.abs(values - chi) * w).sum()))

    per = perimeter(space, A, params.perimeter
                    or PerimeterParams(cross_check=False))
    s0, rp0 = per.witness_params
    f = recovery_field(space, A, s0, rp0).values
    cost, l1 = objective(f)
    trace = [cost + params.lam * l1]

    def ramp_on(marks):
        d_m = space.dist_to_marks(marks)
        return 1.0 - np.minimum(1.0, d_m / (params.ramp_factor * h))

    for _ in range(params.max_iter):
        proposals = []
        for theta in params.blend:
            proposals.append(f + theta * (chi - f))
        for sf in params.smooth_factors:
            g = np.clip(_ball_mean(space, f, sf * h), 0.0, 1.0)
            for theta in params.blend:
                proposals.append(theta * g + (1.0 - theta) * f)
            for t in params.t_levels:
                marks = g >= t
                if not marks.any():
                    continue
                proposals.append(ramp_on(marks))
        # translate the transition: dilate/erode the half-level set and
        # rebuild the ramp there (lets it settle into cheaper regions)
        half = f >= 0.5
        if half.any() and not half.all():
            for kf in params.shift_factors:
                d_half = space.dist_to_marks(half)
                proposals.append(ramp_on(d_half < kf * h))
                d_comp = space.dist_to_marks(~half)
                eroded = ~(d_comp < kf * h)
                if eroded.any():
                    proposals.append(ramp_on(eroded))
        best = None
        for cand in proposals:
            c_cost, c_l1 = objective(cand)
            e = c_cost + params.lam * c_l1
            if best is None or e < best[0]:
                best = (e, cand, c_cost, c_l1)
        scale = max(1.0, abs(trace[-1]))
        if best is None or best[0] >= trace[-1] - params.tol * scale:
            break
        if best[0] > trace[-1]:
            raise RuntimeError("descent objective increased: %g -> %g"
                               % (trace[-1], best[0]))
        f = best[1]
        cost, l1 = best[2], best[3]
        trace.append(best[0])

    result = ScalarField.from_values(space, np.clip(f, 0.0, 1.0))
    info = {"slope_mass": cost, "l1": l1, "objective": trace[-1],
            "init_witness": (s0, rp0)}
    return result, trace, info


# -- level-set selection -----------------------------------------------------------


@dataclass
class LevelSelectParams:
    n_t: int = 21
    slope_factor: float = 3.0
    content: ContentParams = None
    window: Optional[tuple] = None

    def __post_init__(self):
        if self.content is None:
            self.content = ContentParams()


def level_set_select(space: SampledSpace, f: ScalarField, eps: float,
                     params: Optional[LevelSelectParams] = None):
    """Threshold in (eps, 1-eps) whose superlevel set has least lower content.

    Ties prefer the threshold closest to 1/2, then the smallest. Returns
    (t, indicator, info); info carries the selected content value and the
    slope-mass guarantee it is measured against.
    """
    params = params or LevelSelectParams()
    f.check(space)
    if not (0.0 < eps < 0.5):
        raise ValueError("eps must lie in (0, 1/2)")
    fv = f.values
    if fv.min() < -1e-9 or fv.max() > 1.0 + 1e-9:
        raise ValueError("level selection expects a [0, 1]-valued field")
    t_grid = np.linspace(eps, 1.0 - eps, params.n_t + 2)[1:-1]
    records = []
    for t in t_grid:
        marks = fv >= t
        if not marks.any():
            continue
        ind = SetIndicator.from_mask(space, marks)
        est = content(space, ind, window=params.window, kind="lower",
                      params=params.content)
        value = max(est.extrapolated, 0.0)
        records.append((value, abs(t - 0.5), t, ind, est))
    if not records:
        raise ValueError("no threshold in the grid yields a nonempty set")
    records.sort(key=lambda rec: rec[:3])
    value, _, t, ind, est = records[0]
    delta = params.slope_factor * space.resolution_h
    slope_mass = float((space.slope_field(fv, delta) * space.weights).sum())
    info = {
        "value": value, "band": est.band,
        "slope_mass": slope_mass,
        "guarantee_bound": slope_mass / (1.0 - 2.0 * eps) + est.band,
        "guarantee_ok": value <= slope_mass / (1.0 - 2.0 * eps) + est.band
                        + 1e-12 * max(1.0, slope_mass),
    }
    return float(t), ind, info


# -- coarea ---------------------------------------------------------------------


@dataclass
class CoareaParams:
    n_levels: int = 48
    tolerance: float = 0.03
    unit_slope_band: float = 0.1
    unit_slope_mass_frac: float = 0.9
    level_agree_frac: float = 0.9
    atom_threshold_frac: float = 0.02
    slope_factor: float = 3.0
    content: ContentParams = None
    window: Optional[tuple] = None
    perimeter: Optional[PerimeterParams] = None
    eq13_ok: Optional[bool] = None

    def __post_init__(self):
        if self.content is None:
            self.content = ContentParams()


@dataclass
class CoareaReport:
    report: Report
    t_grid: np.ndarray
    per_level: list
    lhs: float
    rhs_per: float
    rhs_mink: float
    atoms: list


def eq13_holds_hint(space: SampledSpace) -> bool:
    """Cheap per-space lower-semicontinuity hint.

    Spaces carrying a fat-Cantor weighting admit an explicit gap
    staircase beating the slope mass of the identity, so the hypothesis
    fails there; elsewhere no counterexample construction is attempted.
    """
    if "fat_cantor" not in space.meta:
        return True
    rep = eq13_gap_demo(space)
    return not rep.meta.get("gap_found", False)


def coarea_check(space: SampledSpace, f: ScalarField, t_grid=None,
                 params: Optional[CoareaParams] = None) -> CoareaReport:
    """Compare Var(f) with the level integrals of perimeter and content."""
    params = params or CoareaParams()
    f.check(space)
    fv = f.values
    fmax = float(fv.max())
    if fmax <= 0:
        raise ValueError("coarea check expects max f > 0")
    if t_grid is None:
        t_grid = (np.arange(params.n_levels) + 0.5) * fmax / params.n_levels
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid[0] <= 0 or t_grid[-1] >= fmax:
        raise ValueError("t_grid must lie inside (0, max f)")

    delta = params.slope_factor * space.resolution_h
    sl = space.slope_field(fv, delta)
    lhs = float((sl * space.weights).sum())
    per_params = params.perimeter or PerimeterParams(cross_check=False)

    def level_record(t):
        marks = fv >= t
        mass = float(space.weights[marks].sum())
        if not marks.any():
            return [t, mass, 0.0, 0.0, 0.0, 0.0, 0.0]
        ind = SetIndicator.from_mask(space, marks)
        lo = content(space, ind, window=params.window, kind="lower",
                     params=params.content)
        hi = content(space, ind, window=params.window, kind="upper",
                     params=params.content)
        try:
            per = perimeter(space, ind, per_params).upper
        except ValueError:
            per = 0.0
        return [t, mass, max(lo.extrapolated, 0.0), max(hi.extrapolated, 0.0),
                per, lo.band, hi.band]

    rows = parallel.pmap(level_record, t_grid)
    masses = np.array([r[1] for r in rows])
    lower_vals = np.array([r[2] for r in rows])
    upper_vals = np.array([r[3] for r in rows])
    per_vals = np.array([r[4] for r in rows])
    rhs_mink = _edge_trapz(lower_vals, t_grid, fmax)
    rhs_per = _edge_trapz(per_vals, t_grid, fmax)

    atom_threshold = params.atom_threshold_frac * space.total_mass
    jumps = -np.diff(masses)
    atoms = [float(0.5 * (t_grid[i] + t_grid[i + 1]))
             for i in np.flatnonzero(jumps > atom_threshold)]

    eq13_ok = params.eq13_ok
    if eq13_ok is None:
        eq13_ok = eq13_holds_hint(space)

    rep = Report("coarea", meta={
        "lhs_var_upper": lhs, "rhs_per": rhs_per, "rhs_mink": rhs_mink,
        "atoms": atoms, "eq13_ok": eq13_ok,
    })
    scale = max(abs(lhs), 1e-12)
    rep.check("var-vs-perimeter-integral", "coarea-fleming-rishel",
              abs(rhs_per - lhs), params.tolerance * scale, mode="le",
              informational=not eq13_ok)
    rep.check("var-vs-content-integral", "coarea-lower-content",
              abs(rhs_mink - lhs), params.tolerance * scale, mode="le",
              informational=not eq13_ok)

    interior = (fv > 0) & (fv < fmax * (1 - 1e-12))
    int_mass = float(space.weights[interior].sum())
    if int_mass > 0:
        good = interior & (np.abs(sl - 1.0) <= params.unit_slope_band)
        frac = float(space.weights[good].sum()) / int_mass
    else:
        frac = 0.0
    unit_slope = frac >= params.unit_slope_mass_frac
    rep.meta["unit_slope_mass_frac"] = frac
    if unit_slope:
        diff = upper_vals - lower_vals
        agree_tol = max(params.tolerance * scale,
                        1e-12)
        agree = np.abs(diff) <= np.maximum(
            params.tolerance * np.maximum(upper_vals, lower_vals), agree_tol)
        rep.check("upper-lower-level-content-agreement",
                  "unit-slope-level-match",
                  float(np.mean(agree)), params.level_agree_frac, mode="ge",
                  informational=not eq13_ok)
        rep.check("median-level-content-gap", "unit-slope-level-match",
                  float(np.median(np.abs(diff))), params.tolerance * scale,
                  mode="le", informational=not eq13_ok)
    rep.add_table("levels",
                  ["t", "mass", "content_lower", "content_upper",
                   "perimeter_upper", "band_lower", "band_upper"], rows)
    return CoareaReport(rep, t_grid, rows, lhs, rhs_per, rhs_mink, atoms)


# -- distance-function level analysis ------------------------------------------------


@dataclass
class DistanceLevelParams:
    tolerance: float = 0.04
    fail_fraction: float = 0.1
    atom_threshold_frac: float = 0.01
    content: ContentParams = None
    window: Optional[tuple] = None
    perimeter: Optional[PerimeterParams] = None

    def __post_init__(self):
        if self.content is None:
            self.content = ContentParams(n_r=16)


def _quotient_intercept(space, marks, r_grid, two_sided):
    """Fit intercept of (m(S^r) - m(S)) / (c r) over the radius grid."""
    from .minkowski import _fit_intercepts

    if not marks.any():
        return 0.0
    d = space.dist_to_marks(marks)
    base = float(space.weights[marks].sum())
    denom = 2.0 if two_sided else 1.0
    q = np.array([(float(space.weights[d < r].sum()) - base) / (denom * r)
                  for r in r_grid])
    coef, _, _, _ = _fit_intercepts(np.asarray(r_grid, float), q,
                                    space.resolution_h)
    return float(coef[0])


def distance_levels(space: SampledSpace, A: SetIndicator, t_grid,
                    r_window=None,
                    params: Optional[DistanceLevelParams] = None) -> Report:
    """Level-set analysis of the distance field from a closed set proxy.

    For each threshold t the six quantities compared are: lower/upper
    contents of the sublevel and superlevel sets, the perimeter of the
    sublevel set, and the two-sided quotient m(L^r minus L)/(2r) of the
    level slab L = {|d - t| <= h}.
    """
    params = params or DistanceLevelParams()
    A.check(space)
    d = distance_to_set(space, A).values
    h = space.resolution_h
    t_grid = np.asarray(t_grid, dtype=np.float64)
    cp = params.content
    if r_window is None:
        r_min = cp.floor_factor * h
        r_max = r_min * cp.ratio ** (cp.n_r - 1)
        # keep enlargements from swallowing the smallest level set
        r_max = min(r_max, max(0.75 * float(t_grid.min()), r_min * 2.0))
        r_window = (r_min, r_max)
    from .minkowski import _r_grid_for_window

    r_grid = _r_grid_for_window(space, r_window, cp)
    per_params = params.perimeter or PerimeterParams(cross_check=False)

    def one_level(t):
        row = {"t": t}
        le = d <= t
        ge = d >= t
        vals = {}
        for tag, marks in (("le", le), ("ge", ge)):
            if not marks.any() or marks.all():
                vals["low_%s" % tag] = 0.0
                vals["up_%s" % tag] = 0.0
                continue
            ind = SetIndicator.from_mask(space, marks)
            lo = content(space, ind, window=r_window, kind="lower", params=cp)
            hi = content(space, ind, window=r_window, kind="upper", params=cp)
            vals["low_%s" % tag] = max(lo.extrapolated, 0.0)
            vals["up_%s" % tag] = max(hi.extrapolated, 0.0)
        if le.any() and not le.all():
            vals["per"] = perimeter(space, SetIndicator.from_mask(space, le),
                                    per_params).upper
        else:
            vals["per"] = 0.0
        slab = np.abs(d - t) <= h
        vals["two_sided"] = _quotient_intercept(space, slab, r_grid,
                                                two_sided=True)
        row.update(vals)
        row["slab_mass"] = float(space.weights[slab].sum())
        return row

    rows = parallel.pmap(one_level, t_grid)
    rep = Report("distance-levels", meta={"r_window": [float(r_window[0]),
                                                       float(r_window[1])]})
    keys = ["low_le", "up_le", "low_ge", "up_ge", "per", "two_sided"]
    n_pass = 0
    table_rows = []
    atom_threshold = params.atom_threshold_frac * space.total_mass
    for row in rows:
        values = np.array([row[k] for k in keys])
        mean = values.mean()
        if mean <= 0:
            spread_ok = np.allclose(values, 0.0, atol=1e-9)
            rel = 0.0 if spread_ok else np.inf
        else:
            rel = float(np.abs(values - mean).max() / mean)
            spread_ok = rel <= params.tolerance
        n_pass += bool(spread_ok)
        atom = row["slab_mass"] > atom_threshold
        table_rows.append([row["t"], *values, row["slab_mass"], rel,
                           int(spread_ok), int(atom)])
    rep.add_table("levels", ["t", *keys, "slab_mass", "rel_spread",
                             "agree", "atom_flag"], table_rows)
    rep.check("level-agreement-fraction", "distance-level-agreement",
              n_pass / len(rows), 1.0 - params.fail_fraction, mode="ge")
    return rep


# -- lsc failure demo on weighted intervals --------------------------------------


def gap_staircase(space: SampledSpace, min_gap_cells: int = 8,
                  pad_cells: int = 2):
    """Monotone staircase with all of its rise inside the removed gaps.

    Rises are placed as smooth ramps strictly inside every gap wide
    enough to hold the pad, proportional to gap width, summing to 1.
    Returns (field, info).
    """
    info = space.meta.get("fat_cantor")
    if info is None or space.kind != "grid" or len(space.grid_shape) != 1:
        raise ValueError("gap staircase needs a fat-Cantor interval space")
    cell = space.cell_sizes[0]
    x = space.coords[:, 0]
    gaps = [(a, b) for a, b, _ in info["gaps"]
            if (b - a) >= min_gap_cells * cell]
    if not gaps:
        raise ValueError("no gap is wide enough for the staircase")
    gaps.sort()
    # flat spans between consecutive usable gaps sit at their midpoints,
    # which keeps the staircase L1-close to the identity
    spans = [(0.0, gaps[0][0])]
    spans += [(gaps[i][1], gaps[i + 1][0]) for i in range(len(gaps) - 1)]
    spans.append((gaps[-1][1], 1.0))
    levels = [0.5 * (lo + hi) for lo, hi in spans]
    f = np.full_like(x, levels[0])
    pad = pad_cells * cell
    for (a, b), lo_level, hi_level in zip(gaps, levels[:-1], levels[1:]):
        lo, hi = a + pad, b - pad
        u = np.clip((x - lo) / (hi - lo), 0.0, 1.0)
        f += (hi_level - lo_level) * 0.5 * (1.0 - np.cos(math.pi * u))
    widths = np.array([b - a for a, b in gaps])
    return (ScalarField.from_values(space, f),
            {"n_gaps": len(gaps), "total_gap_width": float(widths.sum()),
             "total_rise": float(levels[-1] - levels[0])})


def eq13_gap_demo(space: SampledSpace, tol: float = 0.02) -> Report:
    """Slope mass of the identity vs an explicit cheaper approximation.

    On a fat-Cantor weighted interval the gap staircase converges to the
    identity in L1 while its slope mass stays near the off-set weight,
    certifying the failure of lower semicontinuity of the slope integral.
    On an unweighted interval no gap opens.
    """
    if space.kind != "grid" or space.grid_shape is None \
            or len(space.grid_shape) != 1:
        raise ValueError("gap demo needs a 1D grid space")
    ident = ScalarField.from_values(space, space.coords[:, 0])
    delta = slope_scale(space)
    sl = space.slope_field(ident.values, delta)
    upper = float((sl * space.weights).sum())

    rep = Report("lsc-gap", meta={"slope_mass_identity": upper})
    if "fat_cantor" in space.meta:
        stair, sinfo = gap_staircase(space)
        sl_s = space.slope_field(stair.values, delta)
        achieved = float((sl_s * space.weights).sum())
        l1 = float((np.abs(stair.values - ident.values)
                    * space.weights).sum())
        gap_found = achieved + tol < upper - tol
        rep.meta.update({"achieved": achieved, "l1": l1,
                         "gap_found": gap_found, **sinfo})
        rep.check("staircase-l1-close", "lsc-gap-weighted-interval",
                  l1, tol, mode="le")
        rep.check("staircase-beats-slope-mass", "lsc-gap-weighted-interval",
                  achieved + tol, upper - tol, mode="le",
                  note="strict gap certificate")
    else:
        rep.meta.update({"achieved": upper, "gap_found": False})
        rep.check("no-gap-on-unweighted-interval",
                  "lsc-gap-weighted-interval", 0.0, tol, mode="le",
                  note="no fat-Cantor weighting present", informational=True)
    return rep
