import numpy as np
import pytest

from conftest import blob_mask
from straightpath.geodesy import GreatCircle
from straightpath.morphology import WATER, SurfaceMask
from straightpath.oracle import CostCapExceeded, brute_force, lattice, lattice_size
from straightpath.relief import GridGeometry
from straightpath.scan import CircleScanner


def test_lattice():
    assert lattice(0.5)[-1] == 179.5 and len(lattice(0.5)) == 360
    assert lattice_size(0.5, 0.5) == 129_600
    with pytest.raises(ValueError):
        lattice(0)


def test_all_free_planet():
    mask = SurfaceMask.from_array(GridGeometry(18, 36), np.zeros((18, 36), dtype=bool), WATER)
    result = brute_force(mask, 10, 10)
    assert result.best.closed and result.best.angular_extent == 360
    assert result.circles == 324


def test_single_obstacle_planet():
    geo = GridGeometry(180, 360)
    obstacle = np.zeros(geo.shape, dtype=bool)
    obstacle[90, 180] = True
    mask = SurfaceMask.from_array(geo, obstacle, WATER)
    result = brute_force(mask, 2, 2, keep_lengths=True)
    n = 360
    assert result.best.closed
    assert result.lengths.min() >= n - 2
    assert result.lengths[0, 0] == n - 1  # the equator crosses the cell once


def test_cost_cap():
    mask = SurfaceMask.from_array(GridGeometry(18, 36), np.zeros((18, 36), dtype=bool), WATER)
    with pytest.raises(CostCapExceeded) as info:
        brute_force(mask, 0.1, 0.1, max_circles=1000)
    assert info.value.circles == 1800 * 1800
    assert "exceeds the cap" in str(info.value)


def test_full_resolution_cost_refused():
    mask = SurfaceMask.from_array(GridGeometry(18, 36), np.zeros((18, 36), dtype=bool), WATER)
    with pytest.raises(CostCapExceeded) as info:
        brute_force(mask, 1 / 60, 1 / 60, phi_step=1 / 60)
    # the canonical lattice is half of the naive 360 x 180 degree enumeration
    assert info.value.circles * info.value.samples * 2 == 5_038_848_000_000


def test_order_invariance_and_ties(rng):
    geo = GridGeometry(36, 72)
    mask = SurfaceMask.from_array(geo, blob_mask(rng, blobs=12), WATER)
    result = brute_force(mask, 5, 5, keep_lengths=True)
    scanner = CircleScanner(geo)
    best, arg = -1, None
    for i in reversed(range(36)):
        for j in reversed(range(36)):
            n = scanner.run_length(mask, GreatCircle(5.0 * i, 5.0 * j))
            assert n == result.lengths[i, j]
            if n >= best:
                best, arg = n, (5.0 * i, 5.0 * j)
    assert result.best.circle == GreatCircle(*arg)
    assert result.best.angular_extent == best * scanner.step


def test_refining_lattice_never_loses(rng):
    geo = GridGeometry(36, 72)
    for _ in range(5):
        mask = SurfaceMask.from_array(geo, blob_mask(rng, blobs=15), WATER)
        coarse = brute_force(mask, 10, 10)
        fine = brute_force(mask, 5, 5)
        assert fine.best.length_km >= coarse.best.length_km


def test_parallel_matches_serial(rng):
    geo = GridGeometry(36, 72)
    mask = SurfaceMask.from_array(geo, blob_mask(rng, blobs=12), WATER)
    serial = brute_force(mask, 4, 4, keep_lengths=True)
    parallel = brute_force(mask, 4, 4, parallel=True, keep_lengths=True)
    assert np.array_equal(serial.lengths, parallel.lengths)
    assert serial.best == parallel.best
