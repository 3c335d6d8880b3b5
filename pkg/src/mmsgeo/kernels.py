"""Kernel backend selection.

The compiled extension (``mmsgeo._core``) is used when importable unless
``MMSGEO_PURE_PYTHON`` is set; otherwise the NumPy implementations take
over. Both backends compute identical values, so everything downstream
is backend-independent.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_np

_core = None
if not os.environ.get("MMSGEO_PURE_PYTHON"):
    try:
        from . import _core  # type: ignore[attr-defined]
    except ImportError:
        _core = None


def backend_name() -> str:
    return "compiled" if _core is not None else "numpy"


def _as_f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def _as_i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def grid_slope(values, offsets, dists):
    values = _as_f64(values)
    offsets = _as_i64(offsets)
    dists = _as_f64(dists)
    if _core is not None:
        return _core.grid_slope_nd(values, offsets, dists)
    return _kernels_np.grid_slope(values, offsets, dists)


def grid_pair_lip(values, offsets, pair_i, pair_j, pair_dists):
    values = _as_f64(values)
    offsets = _as_i64(offsets)
    pair_i = _as_i64(pair_i)
    pair_j = _as_i64(pair_j)
    pair_dists = _as_f64(pair_dists)
    if _core is not None:
        return _core.grid_pair_lip_nd(values, offsets, pair_i, pair_j, pair_dists)
    return _kernels_np.grid_pair_lip(values, offsets, pair_i, pair_j, pair_dists)


def grid_ball_max(values, offsets):
    values = _as_f64(values)
    offsets = _as_i64(offsets)
    if _core is not None:
        return _core.grid_ball_max_nd(values, offsets)
    footprint = footprint_from_offsets(offsets, values.ndim)
    return _kernels_np.grid_ball_max(values, footprint)


def footprint_from_offsets(offsets, ndim):
    """Centered boolean mask covering the given integer offsets."""
    offsets = np.asarray(offsets)
    reach = np.abs(offsets).max(axis=0)
    shape = tuple(2 * int(r) + 1 for r in reach[:ndim])
    mask = np.zeros(shape, dtype=bool)
    idx = offsets + reach[None, :]
    mask[tuple(idx.T)] = True
    return mask


def csr_slope(values, indptr, indices, dists):
    values = _as_f64(values)
    indptr = _as_i64(indptr)
    indices = _as_i64(indices)
    dists = _as_f64(dists)
    if _core is not None:
        return _core.csr_slope(values, indptr, indices, dists)
    return _kernels_np.csr_slope(values, indptr, indices, dists)


def csr_pair_lip(values, coords, indptr, indices):
    values = _as_f64(values)
    coords = _as_f64(coords)
    indptr = _as_i64(indptr)
    indices = _as_i64(indices)
    if _core is not None:
        return _core.csr_pair_lip(values, coords, indptr, indices)
    return _kernels_np.csr_pair_lip(values, coords, indptr, indices)
