"""Distance fields, enlargements, measure profiles, and Minkowski contents.

The content of a marked set is estimated from the difference quotients
(m(A^r) - m(A)) / r over a geometric grid of radii. Below ~5 sample
spacings the quotient measures the sampling, not the geometry, so the
default window floor is ``floor_factor * resolution_h`` and the reported
value extrapolates the quotient line to r = 0.

The relaxed content minimizes the same estimator over the structured
family of superlevel sets of clipped distance ramps built on small
enlargements of A, which is where the minimum is attained asymptotically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .report import Report
from .space_core import (
    ResolutionError,
    SampledSpace,
    ScalarField,
    SetIndicator,
    measure,
)


@dataclass
class ContentParams:
    # floor_factor is the hard precondition on any window (in units of
    # resolution_h); start_factor is where the default window begins,
    # kept a little higher so the r and h/r fit features decorrelate.
    floor_factor: float = 5.0
    start_factor: float = 8.0
    n_r: int = 12
    ratio: float = 2.0 ** 0.25
    divergence_ratio: float = 4.0
    divergence_monotone_frac: float = 0.75


@dataclass
class RelaxedParams:
    s_factors: tuple = (1.0, 2.0, 4.0)
    rp_factors: tuple = (4.0, 8.0, 16.0)
    t_levels: tuple = (0.25, 0.5, 0.75)
    l1_budget: Optional[float] = None
    content: ContentParams = None
    window: Optional[tuple] = None

    def __post_init__(self):
        if self.content is None:
            self.content = ContentParams()


@dataclass(frozen=True)
class Profile:
    """Masses of the r-enlargements over an increasing radius grid."""

    r_values: np.ndarray
    masses: np.ndarray
    base_mass: float

    def __post_init__(self):
        if np.any(np.diff(self.masses) < 0):
            raise AssertionError("profile masses must be nondecreasing")
        if np.any(self.masses < self.base_mass):
            raise AssertionError("profile masses must dominate the base mass")

    def quotients(self) -> np.ndarray:
        return (self.masses - self.base_mass) / self.r_values


@dataclass
class ContentEstimate:
    """Minkowski content estimate over an r-window.

    ``extrapolated`` is the intercept at r = 0 of a line fitted to the
    difference quotients (lower kind fits the optimistic half of the
    residuals, upper the pessimistic half); ``band`` combines the fit
    residual spread with the h/r_min resolution term.
    """

    window: tuple
    r_values: np.ndarray
    quotients: np.ndarray
    inf_quotient: float
    sup_quotient: float
    extrapolated: float
    band: float
    kind: str
    diverging: bool = False
    witness_params: Optional[tuple] = None
    witness: Optional[SetIndicator] = None

    @property
    def value(self) -> float:
        return self.extrapolated

    def table(self):
        header = ["r", "mass_minus_base", "quotient"]
        rows = [[r, q * r, q] for r, q in zip(self.r_values, self.quotients)]
        return header, rows

    def summary_dict(self):
        return {
            "kind": self.kind,
            "window": [float(self.window[0]), float(self.window[1])],
            "inf_quotient": self.inf_quotient,
            "sup_quotient": self.sup_quotient,
            "extrapolated": self.extrapolated,
            "band": self.band,
            "diverging": self.diverging,
            "witness_params": (None if self.witness_params is None
                               else list(self.witness_params)),
        }


def distance_to_set(space: SampledSpace, A: SetIndicator) -> ScalarField:
    """Exact distance d(x, A) to the marked samples; zero on A."""
    A.check(space)
    if not A.marks.any():
        raise ValueError("distance to the empty set is undefined")
    return ScalarField.from_values(space, space.dist_to_marks(A.marks))


def enlarge(space: SampledSpace, A: SetIndicator, r: float) -> SetIndicator:
    """Open r-enlargement {d(., A) < r}."""
    if r <= 0:
        raise ValueError("enlargement radius must be positive")
    d = distance_to_set(space, A).values
    return SetIndicator.from_mask(space, d < r)


def profile(space: SampledSpace, A: SetIndicator, r_grid) -> Profile:
    """Masses m(A^r) along an increasing radius grid."""
    r_grid = np.asarray(r_grid, dtype=np.float64)
    if np.any(np.diff(r_grid) <= 0) or np.any(r_grid <= 0):
        raise ValueError("r_grid must be positive and strictly increasing")
    if r_grid[0] < space.resolution_h * (1 - 1e-12):
        raise ResolutionError(
            "r below resolution floor: %g < h=%g"
            % (r_grid[0], space.resolution_h))
    d = distance_to_set(space, A).values
    w = space.weights
    masses = np.array([float(w[d < r].sum()) for r in r_grid])
    return Profile(r_grid, masses, measure(space, A))


def _fit_intercepts(r, q, h):
    """Quotient-curve fits against (1, r, h/r); intercepts at r = 0.

    The r term captures curvature of the enlargement, the h/r term the
    sampling quantization. The optimistic / pessimistic intercepts refit
    through the lower / upper residual halves.
    """
    X = np.stack([np.ones_like(r), r, h / r], axis=1)
    coef, *_ = np.linalg.lstsq(X, q, rcond=None)
    resid = q - X @ coef
    order = np.argsort(resid, kind="stable")
    half = max(3, len(r) // 2)
    a_lo = coef[0] + float(resid[order[:half]].mean())
    a_hi = coef[0] + float(resid[order[-half:]].mean())
    return coef, a_lo, a_hi, resid


def _r_grid_for_window(space, window, params):
    h = space.resolution_h
    if window is None:
        r_min = params.start_factor * h
        r_max = r_min * params.ratio ** (params.n_r - 1)
    else:
        r_min, r_max = float(window[0]), float(window[1])
        if r_min < params.floor_factor * h * (1 - 1e-9):
            raise ResolutionError(
                "window floor %g is below %g x resolution_h"
                % (r_min, params.floor_factor))
    if r_max <= r_min * params.ratio ** 2 * (1 - 1e-12):
        raise ValueError("window too narrow: fewer than 3 grid points")
    n = max(params.n_r,
            int(math.ceil(math.log(r_max / r_min) / math.log(params.ratio))) + 1)
    grid = np.geomspace(r_min, r_max, n)
    # Lattice distances along an axis are multiples of the spacing, so
    # radii at half-integer multiples count enlargements of straight
    # boundaries without any phase sawtooth (and cost nothing for curved
    # ones); snap there.
    unit = None
    if space.kind == "grid":
        unit = min(space.cell_sizes)
    elif space.kind == "circle":
        unit = space.arc
    if unit is not None:
        k = np.maximum(np.round(grid / unit - 0.5), 1.0)
        grid = np.unique((k + 0.5) * unit)
        if len(grid) < 3:
            k = np.arange(1, 4)
            grid = (np.maximum(np.round(r_min / unit - 0.5), 1.0) + k - 1
                    + 0.5) * unit
    return grid


def content(space: SampledSpace, A: SetIndicator, window=None,
            kind: str = "lower",
            params: Optional[ContentParams] = None) -> ContentEstimate:
    """Lower/upper Minkowski content estimate of the marked set."""
    if kind not in ("lower", "upper"):
        raise ValueError("kind must be 'lower' or 'upper'")
    params = params or ContentParams()
    r_grid = _r_grid_for_window(space, window, params)
    prof = profile(space, A, r_grid)
    q = prof.quotients()
    return _estimate_from_quotients(space, r_grid, q, kind, params)


def _estimate_from_quotients(space, r_grid, q, kind, params):
    h = space.resolution_h
    inf_q = float(q.min())
    sup_q = float(q.max())
    coef, a_lo, a_hi, resid = _fit_intercepts(r_grid, q, h)
    extrapolated = float(a_lo if kind in ("lower", "relaxed") else a_hi)
    band = float(np.abs(resid).max()
                 + 0.5 * abs(coef[0]) * h / r_grid[0])
    band = max(band, inf_q - extrapolated, extrapolated - sup_q, 0.0)
    q_small = q[:2].mean()
    q_large = q[-2:].mean()
    steps_down = np.diff(q) <= 1e-12 * max(1.0, sup_q)
    diverging = bool(
        q_large > 0.0
        and q_small / q_large >= params.divergence_ratio
        and steps_down.mean() >= params.divergence_monotone_frac)
    return ContentEstimate(
        window=(float(r_grid[0]), float(r_grid[-1])), r_values=r_grid,
        quotients=q, inf_quotient=inf_q, sup_quotient=sup_q,
        extrapolated=extrapolated, band=band, kind=kind, diverging=diverging)


def recovery_sets(space: SampledSpace, A: SetIndicator,
                  params: RelaxedParams):
    """Candidate perturbations: superlevel sets of clipped distance ramps.

    The ramp built on the s-enlargement of A with width r' has superlevel
    set {d(., A^s) <= (1-t) r'}; candidates are deduplicated by their
    effective closed radius. A itself is always included.
    """
    h = space.resolution_h
    d_A = distance_to_set(space, A).values
    out = [(0.0, 0.0, 1.0, A)]
    seen = {(0.0, 0.0)}
    for sf in params.s_factors:
        s = sf * h
        marks_s = d_A < s
        d_s = space.dist_to_marks(marks_s)
        for rf in params.rp_factors:
            rp = rf * h
            for t in params.t_levels:
                rho = (1.0 - t) * rp
                key = (round(s, 15), round(rho, 15))
                if key in seen:
                    continue
                seen.add(key)
                witness = SetIndicator.from_mask(space, d_s <= rho)
                out.append((s, rp, t, witness))
    return out


def relaxed_content(space: SampledSpace, A: SetIndicator,
                    params: Optional[RelaxedParams] = None) -> ContentEstimate:
    """Minimum lower-content estimate over the recovery family.

    Returns the winning estimate tagged kind='relaxed' together with the
    witness set and its (s, r', t) parameters; ties prefer larger s.
    """
    params = params or RelaxedParams()
    A.check(space)
    if measure(space, A) <= 0:
        raise ValueError("relaxed content needs m(A) > 0")
    candidates = recovery_sets(space, A, params)
    evaluated = []
    for s, rp, t, witness in candidates:
        if params.l1_budget is not None:
            l1 = float(space.weights[witness.marks ^ A.marks].sum())
            if l1 > params.l1_budget:
                continue
        est = content(space, witness, window=params.window, kind="lower",
                      params=params.content)
        evaluated.append((est.extrapolated, -s, rp, t, est, witness))
    if not evaluated:
        raise ValueError("no recovery candidate satisfies the L1 budget")
    evaluated.sort(key=lambda rec: rec[:4])
    value, neg_s, rp, t, est, witness = evaluated[0]
    est = replace(est, kind="relaxed", witness_params=(-neg_s, rp, t),
                  witness=witness)
    return est


def check_semigroup_inclusion(space: SampledSpace, A: SetIndicator,
                              s: float, t: float) -> Report:
    """Pointwise inclusion of the iterated enlargement in the summed one."""
    if s <= 0 or t <= 0:
        raise ValueError("s and t must be positive")
    A.check(space)
    inner = enlarge(space, A, s)
    iterated = enlarge(space, inner, t)
    summed = enlarge(space, A, s + t)
    violations = int(np.sum(iterated.marks & ~summed.marks))
    strict = bool(np.any(summed.marks & ~iterated.marks))
    rep = Report("semigroup-inclusion",
                 meta={"s": s, "t": t, "strict": strict,
                       "iterated_count": iterated.count,
                       "summed_count": summed.count})
    rep.check("iterated-enlargement-inside-summed", "semigroup-inclusion",
              violations, 0, mode="le",
              note="points of (A^s)^t outside A^(s+t)")
    return rep


def check_quotient_chain(space: SampledSpace, A: SetIndicator, r_values,
                         n_partition: int = 8) -> Report:
    """Difference quotient dominates the mean of stage quotients.

    For each radius r, the quotient (m(A^r) - m(A))/r is compared with the
    average over a uniform partition 0 = s_0 < ... < s_{n-1} of the
    matched-scale quotients (m((A^{s_i})^D) - m(A^{s_i}))/D, D = r/n.
    The inclusion of iterated enlargements in summed ones makes this an
    exact inequality up to float rounding.
    """
    A.check(space)
    w = space.weights
    d_A = distance_to_set(space, A).values
    base = measure(space, A)
    rep = Report("quotient-chain", meta={"n_partition": n_partition})
    rows = []
    for r in np.asarray(r_values, dtype=np.float64):
        lhs = (float(w[d_A < r].sum()) - base) / r
        delta = r / n_partition
        terms = []
        for i in range(n_partition):
            s_i = i * delta
            marks_i = A.marks if s_i == 0 else (d_A < s_i)
            m_i = float(w[marks_i].sum())
            d_i = d_A if s_i == 0 else space.dist_to_marks(marks_i)
            m_enl = float(w[d_i < delta].sum())
            terms.append((m_enl - m_i) / delta)
        rhs = float(np.mean(terms))
        rows.append([r, lhs, rhs, lhs - rhs])
        rep.check("quotient-dominates-stage-mean@r=%.6g" % r,
                  "quotient-mean-lower-bound", rhs,
                  lhs + 1e-9 * max(1.0, abs(lhs)), mode="le")
    rep.add_table("chain", ["r", "quotient", "stage_mean", "slack"], rows)
    return rep
