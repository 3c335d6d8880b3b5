"""Sup-semigroup over metric balls and finite-scale slope fields.

T_t takes the exact sup of a field over open balls of radius t; it
extends set enlargement from indicators to functions. The local slope at
scale delta is the standing discrete proxy for the slope |grad f|:
sl(x, delta) = sup over 0 < d(x,y) <= delta of |f(y)-f(x)|/d(x,y),
with the default working scale 3 * resolution_h. The asymptotic Lipschitz
proxy takes the Lipschitz constant over all pairs in the closed ball, so
it dominates the slope at equal scale pointwise and exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .report import Report
from .space_core import (
    ResolutionError,
    SampledSpace,
    ScalarField,
    SetIndicator,
    _freeze,
)

DEFAULT_SLOPE_FACTOR = 3.0


def slope_scale(space: SampledSpace, factor: float = DEFAULT_SLOPE_FACTOR):
    return factor * space.resolution_h


@dataclass(frozen=True)
class SlopeField:
    """Nonnegative slope-like field at a fixed metric scale."""

    space_id: str
    values: np.ndarray
    scale_delta: float
    variant: str

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValueError("slope values must be finite and nonnegative")
        object.__setattr__(self, "values", _freeze(values))

    def check(self, space: SampledSpace):
        if space.space_id != self.space_id:
            raise ValueError("slope field bound to a different space")
        return self

    def integral(self, space: SampledSpace) -> float:
        self.check(space)
        return float((self.values * space.weights).sum())


def sup_semigroup(space: SampledSpace, f: ScalarField, t: float) -> ScalarField:
    """T_t f: exact sup of f over the open ball of radius t; T_0 f = f."""
    f.check(space)
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return f
    return ScalarField.from_values(space, space.ball_max_field(f.values, t))


def slope_at_scale(space: SampledSpace, f: ScalarField,
                   delta: float) -> SlopeField:
    """Local slope at scale delta; zero where no neighbour is that close."""
    f.check(space)
    if delta < space.resolution_h * (1 - 1e-12):
        raise ResolutionError("slope scale %g is below resolution_h=%g"
                              % (delta, space.resolution_h))
    vals = space.slope_field(f.values, delta)
    return SlopeField(space.space_id, vals, delta, "local_slope")


def asymptotic_lip(space: SampledSpace, f: ScalarField,
                   delta: float) -> SlopeField:
    """Lipschitz constant of f on closed delta-balls, pointwise."""
    f.check(space)
    if delta < 2.0 * space.resolution_h * (1 - 1e-12):
        raise ResolutionError("pair scale %g is below 2 x resolution_h=%g"
                              % (delta, space.resolution_h))
    vals = space.pair_lip_field(f.values, delta)
    return SlopeField(space.space_id, vals, delta, "asymptotic_lip")


def lipschitz_estimate(space: SampledSpace, f: ScalarField,
                       factor: float = DEFAULT_SLOPE_FACTOR) -> float:
    """Max local slope at the working scale; lower bound on Lip(f)."""
    return float(slope_at_scale(space, f, slope_scale(space, factor))
                 .values.max())


def check_semigroup_ops(space: SampledSpace, f: ScalarField, s: float,
                        t: float) -> Report:
    """Pointwise semigroup inequalities and the quotient-vs-slope bound."""
    if s <= 0 or t <= 0:
        raise ValueError("s and t must be positive")
    f.check(space)
    T_t = sup_semigroup(space, f, t)
    T_st = sup_semigroup(space, f, s + t)
    T_s_T_t = sup_semigroup(space, T_t, s)

    rep = Report("semigroup-ops", meta={"s": s, "t": t})
    above = int(np.sum(T_t.values < f.values))
    rep.check("dilation-dominates-field", "sup-semigroup-monotone",
              above, 0, mode="le", note="points with T_t f < f")
    compose = int(np.sum(T_s_T_t.values > T_st.values))
    rep.check("composition-below-summed", "sup-semigroup-compose",
              compose, 0, mode="le",
              note="points with T_s(T_t f) > T_(s+t) f")

    delta = t + slope_scale(space)
    sl = space.slope_field(f.values, delta)
    gap = (T_t.values - f.values) / t - sl
    scale = max(1.0, float(np.abs(f.values).max()))
    rep.check("quotient-below-slope-at-matched-scale",
              "dilation-quotient-slope-bound", float(gap.max()),
              1e-9 * scale, mode="le")

    deficit = float(np.abs(T_st.values - T_s_T_t.values).max())
    lip = lipschitz_estimate(space, f)
    bound = 3.0 * lip * space.resolution_h
    rep.check("composition-near-equality", "length-space-composition",
              deficit, bound, mode="le",
              informational=not space.length_space_flag,
              note="length spaces only" if not space.length_space_flag else "")
    rep.meta["composition_deficit"] = deficit
    rep.meta["lip_estimate"] = lip
    return rep


def indicator_field(space: SampledSpace, A: SetIndicator) -> ScalarField:
    """Characteristic function of a marked set as a scalar field."""
    A.check(space)
    return ScalarField.from_values(space, A.marks.astype(np.float64))
