"""Backend parity: the compiled kernels must match the NumPy ones exactly."""

import numpy as np
import pytest

from mmsgeo import _kernels_np, kernels


def _offsets(ndim, reach, rng):
    ranges = [np.arange(-reach, reach + 1)] * ndim
    mesh = np.meshgrid(*ranges, indexing="ij")
    offs = np.stack([m.ravel() for m in mesh], axis=1)
    d = np.sqrt((offs.astype(float) ** 2).sum(axis=1))
    keep = (d > 0) & (d <= reach)
    return offs[keep].astype(np.int64), d[keep]


@pytest.mark.parametrize("shape", [(37,), (19, 23), (7, 9, 11)])
def test_grid_slope_parity(shape):
    if kernels.backend_name() != "compiled":
        pytest.skip("compiled backend unavailable")
    rng = np.random.default_rng(7)
    values = rng.normal(size=shape)
    offs, dists = _offsets(len(shape), 2, rng)
    fast = kernels.grid_slope(values, offs, dists)
    ref = _kernels_np.grid_slope(np.ascontiguousarray(values), offs, dists)
    assert np.array_equal(np.asarray(fast), ref)


@pytest.mark.parametrize("shape", [(41,), (17, 18)])
def test_grid_ball_max_parity(shape):
    if kernels.backend_name() != "compiled":
        pytest.skip("compiled backend unavailable")
    rng = np.random.default_rng(11)
    values = rng.normal(size=shape)
    offs, _ = _offsets(len(shape), 2, rng)
    offs = np.vstack([offs, np.zeros((1, len(shape)), dtype=np.int64)])
    fast = kernels.grid_ball_max(values, offs)
    footprint = kernels.footprint_from_offsets(offs, len(shape))
    ref = _kernels_np.grid_ball_max(np.ascontiguousarray(values), footprint)
    assert np.array_equal(np.asarray(fast), ref)


@pytest.mark.parametrize("shape", [(29,), (13, 15)])
def test_grid_pair_lip_parity(shape):
    if kernels.backend_name() != "compiled":
        pytest.skip("compiled backend unavailable")
    rng = np.random.default_rng(3)
    values = rng.normal(size=shape)
    offs, _ = _offsets(len(shape), 1, rng)
    offs = np.vstack([np.zeros((1, len(shape)), dtype=np.int64), offs])
    pi, pj, pd = [], [], []
    for a in range(len(offs)):
        for b in range(a + 1, len(offs)):
            d = float(np.sqrt(((offs[a] - offs[b]) ** 2).sum()))
            if d > 0:
                pi.append(a)
                pj.append(b)
                pd.append(d)
    fast = kernels.grid_pair_lip(values, offs, np.array(pi), np.array(pj),
                                 np.array(pd))
    ref = _kernels_np.grid_pair_lip(np.ascontiguousarray(values), offs,
                                    np.array(pi), np.array(pj), np.array(pd))
    assert np.array_equal(np.asarray(fast), ref)


def test_csr_parity():
    if kernels.backend_name() != "compiled":
        pytest.skip("compiled backend unavailable")
    rng = np.random.default_rng(5)
    n = 50
    coords = rng.normal(size=(n, 2))
    values = rng.normal(size=n)
    from scipy.spatial import cKDTree

    lists = cKDTree(coords).query_ball_point(coords, 0.8)
    indptr = np.zeros(n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(p) for p in lists])
    indices = np.concatenate([np.sort(p) for p in lists]).astype(np.int64)
    owners = np.repeat(np.arange(n), np.diff(indptr))
    dists = np.sqrt(((coords[owners] - coords[indices]) ** 2).sum(axis=1))
    keep = dists > 0
    ind2 = indices[keep]
    d2 = dists[keep]
    iptr2 = np.zeros(n + 1, dtype=np.int64)
    iptr2[1:] = np.cumsum(
        [np.sum(keep[indptr[i]: indptr[i + 1]]) for i in range(n)])
    fast = kernels.csr_slope(values, iptr2, ind2, d2)
    ref = _kernels_np.csr_slope(values, iptr2, ind2, d2)
    assert np.array_equal(np.asarray(fast), ref)

    fast2 = kernels.csr_pair_lip(values, coords, indptr, indices)
    ref2 = _kernels_np.csr_pair_lip(values, coords, indptr, indices)
    assert np.allclose(np.asarray(fast2), ref2, rtol=0, atol=0)


def test_footprint_shape():
    offs = np.array([[0, 0], [1, 0], [-1, 0], [0, 2]], dtype=np.int64)
    fp = kernels.footprint_from_offsets(offs, 2)
    assert fp.shape == (3, 5)
    assert fp[1, 2] and fp[2, 2] and fp[0, 2] and fp[1, 4]
    assert fp.sum() == 4
