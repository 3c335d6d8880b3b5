"""Cheeger constants under three competing boundary measures.

The infimum over all Borel sets is replaced by structured candidate
families (metric balls, sublevel sets of distance fields, explicit
lists, or exhaustive enumeration on tiny spaces). The claim under test
is family-wise: on the same candidates, the ratio minima under the
lower/upper content and the perimeter agree within bands.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import parallel
from .minkowski import ContentParams, content, distance_to_set
from .perimeter_coarea import PerimeterParams, perimeter
from .report import Report
from .space_core import SampledSpace, SetIndicator, indicator_ball, measure

DEFINITIONS = ("per", "minl", "minu")


@dataclass
class CheegerParams:
    n_centers: int = 12
    n_radii: int = 10
    n_seeds: int = 6
    n_tau: int = 24
    window: Optional[tuple] = None
    window_factors: tuple = (20.0, 160.0)
    content: ContentParams = None
    perimeter: Optional[PerimeterParams] = None
    tolerance: float = 0.03
    exhaustive_limit: int = 20

    def __post_init__(self):
        if self.content is None:
            self.content = ContentParams()


@dataclass
class CheegerResult:
    """Minimizer of boundary/mass over a named candidate family."""

    gamma: float
    definition: str
    witness: SetIndicator
    family: str
    table: list

    def summary_dict(self):
        return {"gamma": self.gamma, "definition": self.definition,
                "family": self.family,
                "witness_count": int(self.witness.marks.sum())}


def _default_window(space, params):
    if params.window is not None:
        return params.window
    h = space.resolution_h
    lo = params.window_factors[0] * h
    hi = params.window_factors[1] * h
    return (lo, hi)


def _family_candidates(space, family_spec, params):
    """Deterministic candidate indicators for the requested family."""
    if isinstance(family_spec, (list, tuple)):
        return "explicit", list(family_spec)
    if family_spec == "ball_sweep":
        centers = np.unique(np.linspace(0, space.n - 1,
                                        params.n_centers).astype(int))
        diam = space.diameter_hint()
        radii = np.geomspace(8.0 * space.resolution_h, 0.6 * diam,
                             params.n_radii)
        half = space.total_mass / 2.0 + float(space.weights.max())
        cands = []
        for c in centers:
            for r in radii:
                cands.append(indicator_ball(space, int(c), float(r),
                                            closed=False))
            # the largest feasible ball minimizes the ratio; include it
            d = space.pair_distances(np.full(space.n, c), np.arange(space.n))
            order = np.argsort(d, kind="stable")
            cum = np.cumsum(space.weights[order])
            j = int(np.searchsorted(cum, half, side="right")) - 1
            if j >= 0:
                marks = np.zeros(space.n, dtype=bool)
                marks[order[: j + 1]] = True
                cands.append(SetIndicator.from_mask(space, marks))
        return "ball_sweep", cands
    if family_spec == "sublevel_sweep":
        seeds = np.unique(np.linspace(0, space.n - 1,
                                      params.n_seeds).astype(int))
        half = space.total_mass / 2.0 + float(space.weights.max())
        cands = []
        for seed in seeds:
            marks = np.zeros(space.n, dtype=bool)
            marks[seed] = True
            d = space.dist_to_marks(marks)
            taus = list(np.quantile(d, np.linspace(0.05, 0.95, params.n_tau)))
            # the ratio is minimized at the largest feasible sublevel, so
            # always include the exact half-mass threshold
            order = np.argsort(d, kind="stable")
            cum = np.cumsum(space.weights[order])
            j = int(np.searchsorted(cum, half, side="right")) - 1
            if j >= 0:
                taus.append(float(d[order[j]]))
            for tau in sorted(set(taus)):
                cands.append(SetIndicator.from_mask(space, d <= tau))
        return "sublevel_sweep", cands
    if family_spec == "exhaustive":
        if space.n > params.exhaustive_limit:
            raise ValueError("exhaustive family needs at most %d points"
                             % params.exhaustive_limit)
        cands = []
        for size in range(1, space.n + 1):
            for combo in itertools.combinations(range(space.n), size):
                marks = np.zeros(space.n, dtype=bool)
                marks[list(combo)] = True
                cands.append(SetIndicator.from_mask(space, marks))
        return "exhaustive", cands
    raise ValueError("unknown family spec %r" % (family_spec,))


def _boundary_value(space, ind, definition, window, params):
    """(value, band, diverging) of the requested boundary measure."""
    if definition == "per":
        est = perimeter(space, ind,
                        params.perimeter or PerimeterParams(cross_check=False))
        lo = content(space, ind, window=window, kind="lower",
                     params=params.content)
        return est.upper, est.band, lo.diverging
    kind = "lower" if definition == "minl" else "upper"
    est = content(space, ind, window=window, kind=kind, params=params.content)
    return max(est.extrapolated, 0.0), est.band, est.diverging


def _scale_consistent(space, ind, window, params):
    """Whether the content estimate is stable across sub-windows.

    Candidates whose enlargements hit the domain boundary (or other
    structure) inside the window give scale-dependent quotients; their
    boundary estimates are not trustworthy at this resolution.
    """
    import math

    mid = math.sqrt(window[0] * window[1])
    try:
        e1 = content(space, ind, window=(window[0], mid), kind="lower",
                     params=params.content)
        e2 = content(space, ind, window=(mid, window[1]), kind="lower",
                     params=params.content)
    except ValueError:
        return True
    scale = max(abs(e1.extrapolated), abs(e2.extrapolated), 1e-12)
    tol = e1.band + e2.band + 0.05 * scale
    return abs(e1.extrapolated - e2.extrapolated) <= tol


def cheeger_constant(space: SampledSpace, family_spec,
                     definition: str = "per",
                     params: Optional[CheegerParams] = None) -> CheegerResult:
    """Least boundary/mass ratio over the family, at most half total mass."""
    if definition not in DEFINITIONS:
        raise ValueError("definition must be one of %s" % (DEFINITIONS,))
    params = params or CheegerParams()
    if not np.isfinite(space.total_mass):
        raise ValueError("Cheeger constant needs finite total mass")
    family, cands = _family_candidates(space, family_spec, params)
    window = _default_window(space, params)
    half = space.total_mass / 2.0 + float(space.weights.max())

    def evaluate(ind):
        m = measure(space, ind)
        if not 0.0 < m <= half:
            return None
        value, band, diverging = _boundary_value(space, ind, definition,
                                                 window, params)
        return (ind, m, value, band, diverging)

    rows = []
    table = []
    for rec in parallel.pmap(evaluate, cands):
        if rec is None:
            continue
        ind, m, value, band, diverging = rec
        ratio = value / m
        rows.append((ratio, m, ind.marks.tobytes(), ind, value, band,
                     diverging))
        table.append([ratio, m, value, band, int(not diverging)])
    if not rows:
        raise ValueError("no feasible candidate under the half-mass constraint")
    rows.sort(key=lambda r: r[:3])
    best = rows[0]
    return CheegerResult(gamma=float(best[0]), definition=definition,
                         witness=best[3], family=family, table=table)


def compare_definitions(space: SampledSpace, family_spec,
                        params: Optional[CheegerParams] = None) -> Report:
    """Three Cheeger results on one family, with ordering and equality checks."""
    params = params or CheegerParams()
    family, cands = _family_candidates(space, family_spec, params)
    window = _default_window(space, params)
    half = space.total_mass / 2.0 + float(space.weights.max())

    def evaluate(ind):
        m = measure(space, ind)
        if not 0.0 < m <= half:
            return None
        per, per_band, _ = _boundary_value(space, ind, "per", window, params)
        lo = content(space, ind, window=window, kind="lower",
                     params=params.content)
        hi = content(space, ind, window=window, kind="upper",
                     params=params.content)
        unresolved = lo.diverging or not _scale_consistent(space, ind,
                                                           window, params)
        return (ind, m, per, per_band, max(lo.extrapolated, 0.0), lo.band,
                max(hi.extrapolated, 0.0), hi.band, unresolved)

    recs = [r for r in parallel.pmap(evaluate, cands) if r is not None]
    if not recs:
        raise ValueError("no feasible candidate under the half-mass constraint")

    gammas = {}
    order_violations = 0
    table = []
    for ind, m, per, per_band, lo, lo_band, hi, hi_band, unresolved in recs:
        if not unresolved and per > lo + per_band + lo_band:
            order_violations += 1
        if lo > hi + lo_band + hi_band:
            order_violations += 1
        table.append([m, per, lo, hi, per / m, lo / m, hi / m,
                      int(not unresolved)])
    resolved = [r for r in recs if not r[8]]
    for tag, idx in (("per", 2), ("minl", 4), ("minu", 6)):
        pool = recs if tag != "minu" else recs
        gammas[tag] = min(r[idx] / r[1] for r in pool)
    gammas_resolved = {
        tag: (min(r[idx] / r[1] for r in resolved) if resolved else np.nan)
        for tag, idx in (("per", 2), ("minl", 4), ("minu", 6))}

    rep = Report("cheeger-compare", meta={
        "family": family, "gammas": gammas,
        "gammas_resolved": gammas_resolved,
        "n_candidates": len(recs), "n_resolved": len(resolved),
    })
    rep.add_table("candidates",
                  ["mass", "per", "minl", "minu", "ratio_per", "ratio_minl",
                   "ratio_minu", "resolved"], table)
    rep.check("per-candidate-boundary-ordering", "cheeger-ordering",
              order_violations, 0, mode="le")
    rep.check("gamma-ordering", "cheeger-ordering",
              gammas["per"], gammas["minl"] * (1 + params.tolerance)
              + 1e-12, mode="le")
    rep.check("gamma-ordering-upper", "cheeger-ordering",
              gammas["minl"], gammas["minu"] * (1 + params.tolerance)
              + 1e-12, mode="le")
    if resolved:
        g_per = gammas_resolved["per"]
        g_minu = gammas_resolved["minu"]
        rep.check("three-definition-equality", "cheeger-equivalence",
                  abs(g_minu - g_per), params.tolerance * max(g_per, 1e-12),
                  mode="le", note="resolved sub-family")
    return rep
