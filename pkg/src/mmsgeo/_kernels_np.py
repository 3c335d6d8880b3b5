"""NumPy reference implementations of the hot kernels.

Every function here has a compiled twin in ``_core.pyx``; the two must
return identical arrays (same floats, not merely close). The compiled
module is preferred at import time by :mod:`mmsgeo.kernels`.

Conventions shared by both backends:

* grid kernels take the value array in grid shape plus integer offset
  stencils (k, d) and their metric lengths (k,);
* out-of-domain neighbours are skipped, never padded;
* neighbourless points get slope 0.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage


def _shifted_view(values, offset):
    """Pair of views (center, shifted) for an integer offset, bounds-clipped."""
    src = []
    dst = []
    for ax, o in enumerate(offset):
        n = values.shape[ax]
        lo = max(0, -o)
        hi = n - max(0, o)
        dst.append(slice(lo, hi))
        src.append(slice(lo + o, hi + o))
    return values[tuple(dst)], values[tuple(src)], tuple(dst)


def grid_slope(values, offsets, dists):
    """Max over stencil offsets of |f(x+o) - f(x)| / d(o), skipping borders."""
    out = np.zeros_like(values, dtype=np.float64)
    for o, d in zip(offsets, dists):
        center, shifted, region = _shifted_view(values, o)
        q = np.abs(shifted - center) / d
        np.maximum(out[region], q, out=out[region])
    return out


def grid_pair_lip(values, offsets, pair_i, pair_j, pair_dists):
    """Max over offset pairs of |f(x+o_i) - f(x+o_j)| / d(o_i, o_j).

    ``offsets`` includes the zero offset; a pair contributes at x only
    when both displaced points are inside the domain.
    """
    out = np.zeros_like(values, dtype=np.float64)
    for pi, pj, d in zip(pair_i, pair_j, pair_dists):
        oi, oj = offsets[pi], offsets[pj]
        dst = []
        src_i = []
        src_j = []
        for ax in range(values.ndim):
            n = values.shape[ax]
            a, b = int(oi[ax]), int(oj[ax])
            lo = max(0, -a, -b)
            hi = n - max(0, a, b)
            dst.append(slice(lo, hi))
            src_i.append(slice(lo + a, hi + a))
            src_j.append(slice(lo + b, hi + b))
        if any(s.start >= s.stop for s in dst):
            continue
        q = np.abs(values[tuple(src_i)] - values[tuple(src_j)]) / d
        region = tuple(dst)
        np.maximum(out[region], q, out=out[region])
    return out


def grid_ball_max(values, footprint):
    """Max of f over the stencil footprint (centered boolean mask)."""
    return ndimage.maximum_filter(
        values, footprint=footprint, mode="constant", cval=-np.inf
    )


def csr_slope(values, indptr, indices, dists):
    """Per-point max |f(j) - f(i)| / d(i,j) over CSR neighbour lists."""
    n = len(indptr) - 1
    out = np.zeros(n, dtype=np.float64)
    for i in range(n):
        lo, hi = indptr[i], indptr[i + 1]
        if lo == hi:
            continue
        q = np.abs(values[indices[lo:hi]] - values[i]) / dists[lo:hi]
        out[i] = q.max()
    return out


def csr_pair_lip(values, coords, indptr, indices):
    """Per-point Lipschitz constant over all pairs in the neighbour list.

    The list is assumed to contain the point itself; distances between
    neighbours are recomputed from coordinates.
    """
    n = len(indptr) - 1
    out = np.zeros(n, dtype=np.float64)
    for i in range(n):
        idx = indices[indptr[i]: indptr[i + 1]]
        if len(idx) < 2:
            continue
        pts = coords[idx]
        vals = values[idx]
        diff = pts[:, None, :] - pts[None, :, :]
        dd = np.sqrt((diff * diff).sum(axis=2))
        dv = np.abs(vals[:, None] - vals[None, :])
        mask = dd > 0.0
        if mask.any():
            out[i] = (dv[mask] / dd[mask]).max()
    return out
