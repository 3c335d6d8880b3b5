"""Sampled metric measure spaces, set indicators, and scalar fields.

A :class:`SampledSpace` is a finite sample (x_1..x_n) of a metric space
together with atomic quadrature weights w_i, so every integral downstream
is a finite sum. The declared ``resolution_h`` is the covering radius of
the sample; every scale-dependent operation expresses its floors and
windows as multiples of it.

Supported space kinds and their distance oracles:

* ``grid``   - uniform 1-3D box grid of cell centers, Euclidean metric;
* ``circle`` - n equispaced points, geodesic arc-length metric;
* ``matrix`` - explicit validated distance matrix;
* ``cloud``  - arbitrary Euclidean point cloud (table import, ad-hoc tests).

Graph-metric spaces are materialized into ``matrix`` kind by
:func:`build_from_graph` (pairwise shortest-path lengths).

All objects are immutable after construction (arrays are marked
read-only); they can be shared freely across worker threads.
"""

from __future__ import annotations

import hashlib
import io
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree


class MetricAxiomError(ValueError):
    """A distance matrix violates a metric axiom; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BindingError(ValueError):
    """Indicator/field used with a space it was not built on."""


class ResolutionError(ValueError):
    """Requested scale is below what the sampling resolves."""


def _freeze(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def _space_digest(kind, arrays, scalars):
    hsh = hashlib.sha256(kind.encode())
    for a in arrays:
        if a is not None:
            hsh.update(np.ascontiguousarray(a).tobytes())
    hsh.update(repr(scalars).encode())
    return hsh.hexdigest()[:16]


class SampledSpace:
    """Finite sample of a metric measure space.

    Parameters are normally supplied by the ``build_*`` constructors, not
    directly. ``meta`` holds generator-specific extras (fat-Cantor interval
    lists, graph edge scale, ...).
    """

    def __init__(self, kind, weights, resolution_h, length_space_flag,
                 coords=None, grid_shape=None, cell_sizes=None, box=None,
                 circumference=None, dmat=None, meta=None):
        weights = np.asarray(weights, dtype=np.float64)
        if weights.ndim != 1:
            raise ValueError("weights must be a 1D array")
        if not np.all(np.isfinite(weights)) or np.any(weights < 0):
            raise ValueError("weights must be finite and nonnegative")
        if not resolution_h > 0:
            raise ValueError("resolution_h must be positive")
        self.kind = kind
        self.weights = _freeze(weights)
        self.resolution_h = float(resolution_h)
        self.length_space_flag = bool(length_space_flag)
        self.coords = _freeze(coords.astype(np.float64)) if coords is not None else None
        self.grid_shape = tuple(grid_shape) if grid_shape is not None else None
        self.cell_sizes = tuple(cell_sizes) if cell_sizes is not None else None
        self.box = box
        self.circumference = float(circumference) if circumference is not None else None
        self.dmat = _freeze(dmat.astype(np.float64)) if dmat is not None else None
        self.meta = dict(meta or {})
        self.n = len(weights)
        self.space_id = _space_digest(
            kind, [self.weights, self.coords, self.dmat],
            (self.resolution_h, self.length_space_flag, self.grid_shape,
             self.circumference),
        )
        self._tree = None

    # -- basic queries ---------------------------------------------------

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    @property
    def arc(self) -> float:
        return self.circumference / self.n

    def diameter_hint(self) -> float:
        """Upper bound on the diameter, cheap to compute."""
        if self.kind == "matrix":
            return float(self.dmat.max())
        if self.kind == "circle":
            return self.circumference / 2.0
        span = self.coords.max(axis=0) - self.coords.min(axis=0)
        return float(np.sqrt((span * span).sum()))

    def tree(self) -> cKDTree:
        if self._tree is None:
            self._tree = cKDTree(self.coords)
        return self._tree

    def pair_distances(self, i_idx, j_idx):
        """Vectorized d(x_i, x_j) for index arrays."""
        i_idx = np.asarray(i_idx)
        j_idx = np.asarray(j_idx)
        if self.kind == "matrix":
            return self.dmat[i_idx, j_idx]
        if self.kind == "circle":
            k = np.abs(i_idx - j_idx)
            k = np.minimum(k, self.n - k)
            return k * self.arc
        diff = self.coords[i_idx] - self.coords[j_idx]
        return np.sqrt((diff * diff).sum(axis=-1))

    # -- distance-to-set field --------------------------------------------

    def dist_to_marks(self, marks) -> np.ndarray:
        """Exact distance from every sample to the marked subset."""
        marks = np.asarray(marks, dtype=bool)
        if not marks.any():
            raise ValueError("distance to the empty set is undefined")
        if self.kind == "grid":
            grid_marks = marks.reshape(self.grid_shape)
            if grid_marks.all():
                return np.zeros(self.n)
            d = ndimage.distance_transform_edt(
                ~grid_marks, sampling=self.cell_sizes)
            return d.ravel()
        if self.kind == "circle":
            idx = np.arange(self.n)
            marked = np.flatnonzero(marks)
            # merge the circular gap structure: distance to nearest marked
            # index along the cycle
            pos = np.sort(marked)
            nxt = np.searchsorted(pos, idx)
            right = pos[nxt % len(pos)]
            left = pos[(nxt - 1) % len(pos)]
            k = np.minimum((right - idx) % self.n, (idx - left) % self.n)
            return k * self.arc
        if self.kind == "matrix":
            return self.dmat[:, marks].min(axis=1)
        # cloud
        sub = cKDTree(self.coords[marks])
        d, _ = sub.query(self.coords, k=1)
        return np.asarray(d, dtype=np.float64)

    # -- neighbourhood stencils (grid) ------------------------------------

    def _grid_offsets(self, radius, closed, include_zero):
        cell = np.asarray(self.cell_sizes)
        reach = np.floor(radius / cell + 1e-9).astype(int)
        ranges = [np.arange(-r, r + 1) for r in reach]
        offs = np.array(list(itertools.product(*ranges)), dtype=np.int64)
        d = np.sqrt(((offs * cell) ** 2).sum(axis=1))
        if closed:
            keep = d <= radius * (1 + 1e-9)
        else:
            keep = d < radius * (1 - 1e-9)
        if not include_zero:
            keep &= d > 0
        return offs[keep], d[keep]

    def _csr_neighbors(self, radius, closed, include_self):
        """CSR neighbour lists within the radius, for non-grid kinds."""
        r = radius * (1 + 1e-9) if closed else radius * (1 - 1e-9)
        if self.kind == "matrix":
            close = self.dmat <= r if closed else self.dmat < r
            if not include_self:
                np.fill_diagonal(close, False)
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(close.sum(axis=1), out=indptr[1:])
            indices = np.flatnonzero(close.ravel()) % self.n
            dists = self.dmat[close]
            return indptr, indices.astype(np.int64), dists
        if self.kind == "cloud":
            pairs = self.tree().query_ball_point(self.coords, r, return_sorted=True)
            counts = np.fromiter((len(p) for p in pairs), dtype=np.int64,
                                 count=self.n)
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(counts, out=indptr[1:])
            indices = np.fromiter(itertools.chain.from_iterable(pairs),
                                  dtype=np.int64, count=int(indptr[-1]))
            if not include_self:
                self_mask = indices != np.repeat(np.arange(self.n), counts)
                new_counts = np.add.reduceat(
                    self_mask, indptr[:-1]) if self.n else counts
                indices = indices[self_mask]
                indptr = np.zeros(self.n + 1, dtype=np.int64)
                np.cumsum(new_counts, out=indptr[1:])
            owners = np.repeat(np.arange(self.n), np.diff(indptr))
            dists = self.pair_distances(owners, indices)
            return indptr, indices, dists
        raise NotImplementedError(self.kind)

    # -- field operations --------------------------------------------------

    def ball_max_field(self, values, t) -> np.ndarray:
        """sup of the field over open balls of radius t (exact)."""
        from . import kernels

        values = np.asarray(values, dtype=np.float64)
        if t <= 0:
            return values.copy()
        if self.kind == "grid":
            if t > self.diameter_hint():
                return np.full(self.n, values.max())
            offs, _ = self._grid_offsets(t, closed=False, include_zero=True)
            grid = values.reshape(self.grid_shape)
            return np.asarray(kernels.grid_ball_max(grid, offs)).ravel()
        if self.kind == "circle":
            k = math.ceil(t / self.arc - 1e-12) - 1
            if 2 * k + 1 >= self.n:
                return np.full(self.n, values.max())
            if k <= 0:
                return values.copy()
            return ndimage.maximum_filter1d(values, size=2 * k + 1, mode="wrap")
        if self.kind == "matrix":
            masked = np.where(self.dmat < t, values[None, :], -np.inf)
            return masked.max(axis=1)
        indptr, indices, _ = self._csr_neighbors(t, closed=False,
                                                 include_self=True)
        out = values.copy()
        for i in range(self.n):
            seg = indices[indptr[i]: indptr[i + 1]]
            if len(seg):
                out[i] = values[seg].max()
        return out

    def slope_field(self, values, delta) -> np.ndarray:
        """sup over 0 < d(x,y) <= delta of |f(y)-f(x)|/d(x,y)."""
        from . import kernels

        values = np.asarray(values, dtype=np.float64)
        if self.kind == "grid":
            offs, dists = self._grid_offsets(delta, closed=True,
                                             include_zero=False)
            if len(offs) == 0:
                return np.zeros(self.n)
            grid = values.reshape(self.grid_shape)
            return np.asarray(kernels.grid_slope(grid, offs, dists)).ravel()
        if self.kind == "circle":
            k = min(int(delta / self.arc * (1 + 1e-9)), self.n // 2)
            out = np.zeros(self.n)
            for j in range(1, k + 1):
                d = j * self.arc
                q = np.abs(np.roll(values, -j) - values) / d
                np.maximum(out, q, out=out)
                q = np.abs(np.roll(values, j) - values) / d
                np.maximum(out, q, out=out)
            return out
        if self.kind == "matrix":
            close = (self.dmat <= delta * (1 + 1e-9)) & (self.dmat > 0)
            with np.errstate(divide="ignore", invalid="ignore"):
                q = np.abs(values[None, :] - values[:, None]) / self.dmat
            q[~close] = 0.0
            return q.max(axis=1)
        indptr, indices, dists = self._csr_neighbors(delta, closed=True,
                                                     include_self=False)
        return np.asarray(kernels.csr_slope(values, indptr, indices, dists))

    def pair_lip_field(self, values, delta) -> np.ndarray:
        """Lipschitz constant of the field on closed balls of radius delta."""
        from . import kernels

        values = np.asarray(values, dtype=np.float64)
        if self.kind == "grid":
            offs, _ = self._grid_offsets(delta, closed=True, include_zero=True)
            cell = np.asarray(self.cell_sizes)
            k = len(offs)
            pi, pj, pd = [], [], []
            for a in range(k):
                for b in range(a + 1, k):
                    dd = math.sqrt((((offs[a] - offs[b]) * cell) ** 2).sum())
                    if dd > 0:
                        pi.append(a)
                        pj.append(b)
                        pd.append(dd)
            grid = values.reshape(self.grid_shape)
            return np.asarray(kernels.grid_pair_lip(
                grid, offs, np.array(pi), np.array(pj), np.array(pd))).ravel()
        if self.kind == "circle":
            k = min(int(delta / self.arc * (1 + 1e-9)), self.n // 2)
            out = np.zeros(self.n)
            for j1 in range(-k, k + 1):
                for j2 in range(j1 + 1, k + 1):
                    d = (j2 - j1) * self.arc
                    q = np.abs(np.roll(values, -j2) - np.roll(values, -j1)) / d
                    np.maximum(out, q, out=out)
            return out
        if self.kind == "matrix":
            close = self.dmat <= delta * (1 + 1e-9)
            out = np.zeros(self.n)
            dv = np.abs(values[None, :] - values[:, None])
            for i in range(self.n):
                idx = np.flatnonzero(close[i])
                sub_d = self.dmat[np.ix_(idx, idx)]
                sub_v = dv[np.ix_(idx, idx)]
                pos = sub_d > 0
                if pos.any():
                    out[i] = (sub_v[pos] / sub_d[pos]).max()
            return out
        indptr, indices, _ = self._csr_neighbors(delta, closed=True,
                                                 include_self=True)
        return np.asarray(kernels.csr_pair_lip(values, self.coords,
                                               indptr, indices))

    def ball_masses(self, r) -> np.ndarray:
        """m(closed ball of radius r) for every center, exact sums."""
        if r <= 0:
            raise ValueError("ball radius must be positive")
        if self.kind == "grid":
            offs, _ = self._grid_offsets(r, closed=True, include_zero=True)
            from . import kernels

            mask = kernels.footprint_from_offsets(offs, len(self.grid_shape))
            w = self.weights.reshape(self.grid_shape)
            return ndimage.convolve(w, mask.astype(np.float64),
                                    mode="constant", cval=0.0).ravel()
        if self.kind == "circle":
            k = int(r / self.arc * (1 + 1e-9))
            if 2 * k + 1 >= self.n:
                return np.full(self.n, self.total_mass)
            ker = np.ones(2 * k + 1)
            return ndimage.convolve1d(self.weights, ker, mode="wrap")
        if self.kind == "matrix":
            close = self.dmat <= r * (1 + 1e-9)
            return close @ self.weights
        idx_lists = self.tree().query_ball_point(self.coords, r * (1 + 1e-9))
        return np.array([self.weights[ix].sum() for ix in idx_lists])

    def ball_members(self, center, r, closed=True) -> np.ndarray:
        """Indices inside the ball around sample ``center``."""
        if self.kind == "circle":
            d = self.pair_distances(np.full(self.n, center), np.arange(self.n))
        elif self.kind == "matrix":
            d = self.dmat[center]
        else:
            diff = self.coords - self.coords[center]
            d = np.sqrt((diff * diff).sum(axis=1))
        if closed:
            return np.flatnonzero(d <= r * (1 + 1e-9))
        return np.flatnonzero(d < r * (1 - 1e-9))


@dataclass(frozen=True)
class SetIndicator:
    """Boolean mark per sample point, bound to one space."""

    space_id: str
    marks: np.ndarray

    def __post_init__(self):
        marks = np.asarray(self.marks, dtype=bool)
        object.__setattr__(self, "marks", _freeze(marks))

    @classmethod
    def from_mask(cls, space: SampledSpace, mask) -> "SetIndicator":
        mask = np.asarray(mask, dtype=bool).ravel()
        if len(mask) != space.n:
            raise BindingError("indicator length does not match the space")
        return cls(space.space_id, mask)

    def check(self, space: SampledSpace):
        if space.space_id != self.space_id:
            raise BindingError("indicator is bound to a different space")
        return self

    @property
    def count(self) -> int:
        return int(self.marks.sum())


@dataclass(frozen=True)
class ScalarField:
    """One finite real value per sample point, bound to one space."""

    space_id: str
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", _freeze(values))

    @classmethod
    def from_values(cls, space: SampledSpace, values) -> "ScalarField":
        values = np.asarray(values, dtype=np.float64).ravel()
        if len(values) != space.n:
            raise BindingError("field length does not match the space")
        return cls(space.space_id, values)

    def check(self, space: SampledSpace):
        if space.space_id != self.space_id:
            raise BindingError("field is bound to a different space")
        return self


# -- fat Cantor construction ------------------------------------------------

def fat_cantor_intervals(depth: int, target_k_mass: float):
    """Closed K-intervals and removed gaps of the midpoint construction.

    Middle gaps shrink geometrically (ratio 1/4) so that the limiting set
    keeps Lebesgue mass ``target_k_mass``. Returns (intervals, gaps,
    k_mass_at_depth); gaps carry their removal step.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if not 0.0 < target_k_mass < 1.0:
        raise ValueError("target K mass must lie in (0, 1)")
    c = 2.0 * (1.0 - target_k_mass)
    intervals = [(0.0, 1.0)]
    gaps = []
    for step in range(1, depth + 1):
        g = c * 0.25 ** step
        nxt = []
        for a, b in intervals:
            if g >= (b - a):
                raise ValueError(
                    "gap does not fit at step %d; lower depth or raise "
                    "target K mass" % step)
            m = 0.5 * (a + b)
            gaps.append((m - g / 2.0, m + g / 2.0, step))
            nxt.append((a, m - g / 2.0))
            nxt.append((m + g / 2.0, b))
        intervals = nxt
    k_mass = target_k_mass + (1.0 - target_k_mass) * 0.5 ** depth
    return intervals, gaps, k_mass


def fat_cantor_density(target_k_mass: float, depth: int = 10) -> Callable:
    """Weight density: 1 on the depth-truncated fat Cantor set, 1/2 off it."""
    intervals, _, _ = fat_cantor_intervals(depth, target_k_mass)
    lows = np.array([a for a, _ in intervals])
    highs = np.array([b for _, b in intervals])

    def density(points):
        x = np.asarray(points, dtype=np.float64).reshape(len(points), -1)[:, 0]
        j = np.searchsorted(lows, x, side="right") - 1
        j = np.clip(j, 0, len(lows) - 1)
        inside = (x >= lows[j]) & (x <= highs[j])
        return np.where(inside, 1.0, 0.5)

    density.intervals = intervals
    return density


# -- builders ----------------------------------------------------------------

def _normalize_box(dims, box):
    box = np.asarray(box, dtype=np.float64)
    if box.ndim == 1:
        box = box[None, :]
    if box.shape != (dims, 2):
        raise ValueError("box must give (lo, hi) per axis")
    if np.any(box[:, 1] <= box[:, 0]):
        raise ValueError("box is degenerate")
    return box


def build_grid_box(dims: int, n_per_side: int, box,
                   weight_density="unit") -> SampledSpace:
    """Uniform grid of cell centers with quadrature weights.

    ``weight_density`` is either the name ``"unit"`` or a callable mapping
    an (n, dims) coordinate array to strictly positive densities.
    """
    if dims not in (1, 2, 3):
        raise ValueError("unsupported dimension: %r" % (dims,))
    if n_per_side < 2:
        raise ValueError("n_per_side must be >= 2")
    box = _normalize_box(dims, box)
    n = int(n_per_side)
    axes = [box[j, 0] + (np.arange(n) + 0.5) * (box[j, 1] - box[j, 0]) / n
            for j in range(dims)]
    mesh = np.meshgrid(*axes, indexing="ij")
    coords = np.stack([m.ravel() for m in mesh], axis=1)
    cell = (box[:, 1] - box[:, 0]) / n
    cellvol = float(np.prod(cell))
    if weight_density == "unit":
        dens = np.ones(len(coords))
    elif callable(weight_density):
        dens = np.asarray(weight_density(coords), dtype=np.float64).ravel()
    else:
        raise ValueError("unknown weight density %r" % (weight_density,))
    if np.any(dens <= 0):
        raise ValueError("weight density must be strictly positive")
    h = float(np.sqrt((cell * cell).sum()) / 2.0)
    return SampledSpace(
        "grid", dens * cellvol, h, True, coords=coords,
        grid_shape=(n,) * dims, cell_sizes=cell, box=box,
    )


def build_fat_cantor_interval(n: int, depth: int,
                              target_k_mass: float) -> SampledSpace:
    """Weighted interval carrying a depth-truncated fat Cantor set.

    Density is 1 on the retained set K and 1/2 on the removed gaps; the
    K membership marks and the gap list are stored in ``space.meta``.
    """
    intervals, gaps, k_mass = fat_cantor_intervals(depth, target_k_mass)
    cell = 1.0 / n
    h = cell / 2.0
    smallest_gap = min(b - a for a, b, _ in gaps)
    if h >= smallest_gap:
        raise ResolutionError(
            "resolution too coarse: h=%g does not resolve the smallest "
            "gap %g at depth %d" % (h, smallest_gap, depth))
    coords = ((np.arange(n) + 0.5) * cell)[:, None]
    lows = np.array([a for a, _ in intervals])
    highs = np.array([b for _, b in intervals])
    x = coords[:, 0]
    j = np.clip(np.searchsorted(lows, x, side="right") - 1, 0, len(lows) - 1)
    marks = (x >= lows[j]) & (x <= highs[j])
    dens = np.where(marks, 1.0, 0.5)
    space = SampledSpace(
        "grid", dens * cell, h, True, coords=coords, grid_shape=(n,),
        cell_sizes=(cell,), box=np.array([[0.0, 1.0]]),
        meta={"fat_cantor": {
            "target_k_mass": float(target_k_mass), "depth": int(depth),
            "k_intervals": intervals, "gaps": gaps,
            "k_mass_analytic": k_mass,
        }},
    )
    space.meta["fat_cantor"]["k_marks"] = SetIndicator.from_mask(space, marks)
    return space


def build_circle(n: int, circumference: float) -> SampledSpace:
    """Equispaced samples on a circle with the geodesic arc metric."""
    if n < 3:
        raise ValueError("a circle needs at least 3 samples")
    if circumference <= 0:
        raise ValueError("circumference must be positive")
    radius = circumference / (2.0 * math.pi)
    theta = 2.0 * math.pi * np.arange(n) / n
    coords = np.stack([radius * np.cos(theta), radius * np.sin(theta)], axis=1)
    arc = circumference / n
    weights = np.full(n, arc)
    return SampledSpace("circle", weights, arc / 2.0, True, coords=coords,
                        circumference=circumference)


def validate_metric(dmat, atol=0.0):
    """Raise MetricAxiomError with a witness on the first violation."""
    dmat = np.asarray(dmat, dtype=np.float64)
    n = len(dmat)
    if dmat.shape != (n, n):
        raise MetricAxiomError("distance matrix must be square")
    if np.any(~np.isfinite(dmat)):
        raise MetricAxiomError("distances must be finite")
    bad = np.argwhere(np.abs(dmat - dmat.T) > atol)
    if len(bad):
        i, j = bad[0]
        raise MetricAxiomError(
            "asymmetric distances at (%d, %d)" % (i, j), witness=(int(i), int(j)))
    if np.any(np.diag(dmat) != 0):
        i = int(np.flatnonzero(np.diag(dmat))[0])
        raise MetricAxiomError("nonzero self-distance at %d" % i, witness=(i,))
    off = dmat + np.where(np.eye(n, dtype=bool), np.inf, 0.0)
    if np.any(off <= 0):
        i, j = np.argwhere(off <= 0)[0]
        raise MetricAxiomError(
            "nonpositive distance between distinct points (%d, %d)" % (i, j),
            witness=(int(i), int(j)))
    for k in range(n):
        slack = dmat - (dmat[:, [k]] + dmat[[k], :])
        bad = np.argwhere(slack > 1e-12 * max(1.0, dmat.max()))
        bad = bad[(bad[:, 0] != k) & (bad[:, 1] != k)]
        if len(bad):
            i, j = bad[0]
            raise MetricAxiomError(
                "triangle inequality fails: d(%d,%d) > d(%d,%d) + d(%d,%d)"
                % (i, j, i, k, k, j), witness=(int(i), int(k), int(j)))
    return dmat


def build_explicit(matrix, weights) -> SampledSpace:
    """Finite metric space from an explicit distance matrix."""
    dmat = validate_metric(matrix)
    weights = np.asarray(weights, dtype=np.float64)
    positive = dmat[dmat > 0]
    h = float(positive.min()) if len(positive) else 1.0
    return SampledSpace("matrix", weights, h, False, dmat=dmat)


def build_cloud(coords, weights, resolution_h,
                length_space_flag=False, meta=None) -> SampledSpace:
    """Euclidean point cloud with declared covering radius."""
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim != 2:
        raise ValueError("coords must be (n, d)")
    return SampledSpace("cloud", weights, resolution_h, length_space_flag,
                        coords=coords, meta=meta)


def build_from_graph(adjacency, weights, resolution_h=None) -> SampledSpace:
    """Metric space of shortest-path lengths over a weighted adjacency."""
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import dijkstra

    adj = csr_matrix(adjacency)
    dmat = dijkstra(adj, directed=False)
    if np.any(np.isinf(dmat)):
        raise MetricAxiomError("graph is not connected")
    max_edge = float(adj.data.max()) if adj.nnz else 0.0
    if resolution_h is None:
        resolution_h = max_edge / 2.0 if max_edge > 0 else 1.0
    space = SampledSpace("matrix", weights, resolution_h, True, dmat=dmat,
                         meta={"graph_max_edge": max_edge})
    return space


# -- measure and indicators ---------------------------------------------------

def measure(space: SampledSpace, A: SetIndicator) -> float:
    """m(A): sum of the weights of the marked samples."""
    A.check(space)
    return float(space.weights[A.marks].sum())


def full_indicator(space: SampledSpace) -> SetIndicator:
    return SetIndicator.from_mask(space, np.ones(space.n, dtype=bool))


def empty_indicator(space: SampledSpace) -> SetIndicator:
    return SetIndicator.from_mask(space, np.zeros(space.n, dtype=bool))


def indicator_from_predicate(space: SampledSpace, pred) -> SetIndicator:
    """Marks where pred(coords) holds; coordinate kinds only."""
    if space.coords is None:
        raise ValueError("space has no coordinates")
    return SetIndicator.from_mask(space, pred(space.coords))


def indicator_box(space: SampledSpace, lo, hi) -> SetIndicator:
    lo = np.atleast_1d(np.asarray(lo, dtype=np.float64))
    hi = np.atleast_1d(np.asarray(hi, dtype=np.float64))
    mask = np.all((space.coords >= lo) & (space.coords <= hi), axis=1)
    return SetIndicator.from_mask(space, mask)


def indicator_ball(space: SampledSpace, center, r,
                   closed=True) -> SetIndicator:
    """Metric ball around a sample index or an explicit point."""
    if np.isscalar(center):
        idx = space.ball_members(int(center), r, closed=closed)
        mask = np.zeros(space.n, dtype=bool)
        mask[idx] = True
    else:
        center = np.asarray(center, dtype=np.float64)
        diff = space.coords - center
        d = np.sqrt((diff * diff).sum(axis=1))
        mask = d <= r if closed else d < r
    return SetIndicator.from_mask(space, mask)


def fat_cantor_marks(space: SampledSpace) -> SetIndicator:
    info = space.meta.get("fat_cantor")
    if info is None:
        raise ValueError("space was not built by build_fat_cantor_interval")
    return info["k_marks"]


# -- invariant audits ----------------------------------------------------------

def audit_triangle(space: SampledSpace, n_triples: int = 10_000,
                   seed: int = 0) -> int:
    """Random-triple triangle-inequality audit; returns violation count."""
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, space.n, size=(n_triples, 3))
    dij = space.pair_distances(idx[:, 0], idx[:, 1])
    djk = space.pair_distances(idx[:, 1], idx[:, 2])
    dik = space.pair_distances(idx[:, 0], idx[:, 2])
    scale = max(1.0, float(dik.max()))
    return int(np.sum(dik > dij + djk + 1e-12 * scale))


# -- flat table export/import ---------------------------------------------------

def export_table(space: SampledSpace, path, sets=None, fields=None):
    """Write the plot-ready flat table: one row per sample.

    Columns: id, coordinates (when present), weight, then one column per
    named indicator / field. A leading comment line records the metadata
    needed to re-import the table.
    """
    import csv

    sets = sets or {}
    fields = fields or {}
    dim = 0 if space.coords is None else space.coords.shape[1]
    header = ["id"] + ["x%d" % j for j in range(dim)] + ["weight"]
    header += list(sets) + list(fields)
    with open(path, "w", newline="") as fh:
        fh.write("# mmsgeo-table kind=%s resolution_h=%.17g length_space=%d\n"
                 % (space.kind, space.resolution_h,
                    int(space.length_space_flag)))
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i in range(space.n):
            row = [str(i)]
            if dim:
                row += ["%.17g" % c for c in space.coords[i]]
            row.append("%.17g" % space.weights[i])
            for ind in sets.values():
                row.append(str(int(ind.check(space).marks[i])))
            for f in fields.values():
                row.append("%.17g" % f.check(space).values[i])
            writer.writerow(row)


def import_table(path):
    """Re-read an exported table as a cloud space plus named columns."""
    import csv

    with open(path) as fh:
        first = fh.readline()
        meta = {}
        if first.startswith("#"):
            for tok in first[1:].split():
                if "=" in tok:
                    k, v = tok.split("=", 1)
                    meta[k] = v
            header_line = fh.readline()
        else:
            header_line = first
        reader = csv.reader(io.StringIO(header_line + fh.read()))
        header = next(reader)
        rows = list(reader)
    coord_cols = [c for c in header if c.startswith("x") and c[1:].isdigit()]
    dim = len(coord_cols)
    n = len(rows)
    coords = np.array([[float(r[1 + j]) for j in range(dim)] for r in rows])
    weights = np.array([float(r[1 + dim]) for r in rows])
    h = float(meta.get("resolution_h", "1.0"))
    length_flag = bool(int(meta.get("length_space", "0")))
    space = build_cloud(coords, weights, h, length_space_flag=length_flag)
    extras = {}
    for col_idx, name in enumerate(header[2 + dim:], start=2 + dim):
        col = [r[col_idx] for r in rows]
        if all(v in ("0", "1") for v in col):
            extras[name] = SetIndicator.from_mask(
                space, np.array([v == "1" for v in col]))
        else:
            extras[name] = ScalarField.from_values(
                space, np.array([float(v) for v in col]))
    return space, extras
