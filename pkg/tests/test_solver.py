import math

import numpy as np
import pytest

from conftest import blob_mask
from straightpath.geodesy import GreatCircle, arc_length
from straightpath.morphology import WATER, SurfaceMask, build_pyramid
from straightpath.oracle import brute_force
from straightpath.relief import GridGeometry
from straightpath.scan import CircleScanner
from straightpath.solver import SearchNode, bound, root_node, solve, split


def blob_planet(seed, rows=90, cols=180, blobs=40):
    rng = np.random.default_rng(seed)
    return SurfaceMask.from_array(GridGeometry(rows, cols), blob_mask(rng, rows, cols, blobs, 12), WATER)


def random_node(rng, depth):
    level = int(rng.integers(1, depth))
    n = 2 ** level
    w = 180 / n
    i, j = rng.integers(0, n, 2)
    return SearchNode(i * w, (i + 1) * w, j * w, (j + 1) * w, level, 180 / n)


def test_split_root():
    children = split(root_node())
    reps = [(c.representative.origin, c.representative.heading) for c in children]
    assert reps == [(45, 45), (135, 45), (45, 135), (135, 135)]
    assert all(c.level == 1 and c.epsilon == 90 for c in children)


def test_split_partitions_box(rng):
    node = SearchNode(22.5, 45, 90, 112.5, 3, 22.5)
    children = split(node)
    assert sum((c.delta_max - c.delta_min) * (c.alpha_max - c.alpha_min) for c in children) == pytest.approx(
        (node.delta_max - node.delta_min) * (node.alpha_max - node.alpha_min))
    for d, a in rng.uniform([22.5, 90], [45, 112.5], size=(200, 2)):
        inside = [c for c in children if c.delta_min < d < c.delta_max and c.alpha_min < a < c.alpha_max]
        assert len(inside) == 1
    assert all(c.epsilon == node.epsilon / 2 for c in children)


def test_node_epsilon_covers_box():
    node = root_node()
    for _ in range(8):
        assert node.epsilon >= node.separation
        node = split(node)[0]


def test_root_bound_on_free_mask():
    mask = SurfaceMask.from_array(GridGeometry(180, 360), np.zeros((180, 360), dtype=bool), WATER)
    pyramid = build_pyramid(mask)
    assert bound(split(root_node())[0], pyramid, CircleScanner(mask.geometry)) == pytest.approx(40030.2, abs=0.05)


def test_bound_at_raw_level_is_objective(rng):
    mask = blob_planet(3)
    pyramid = build_pyramid(mask)
    scanner = CircleScanner(mask.geometry)
    node = SearchNode(10, 10.5, 20, 20.5, pyramid.depth, 0.0)
    assert bound(node, pyramid, scanner) == scanner.length_km(mask, node.representative)
    with pytest.raises(LookupError):
        bound(SearchNode(0, 1, 0, 1, pyramid.depth + 1, 0.0), pyramid, scanner)


@pytest.mark.parametrize("seed", [0, 1])
def test_bound_validity_monte_carlo(seed):
    rng = np.random.default_rng(seed)
    mask = blob_planet(seed)
    pyramid = build_pyramid(mask)
    scanner = CircleScanner(mask.geometry)
    for _ in range(50):
        node = random_node(rng, pyramid.depth)
        b = bound(node, pyramid, scanner)
        for d, a in rng.uniform([node.delta_min, node.alpha_min], [node.delta_max, node.alpha_max], (100, 2)):
            circle = GreatCircle.canonical(d, a)
            assert scanner.length_km(mask, circle) <= b


def test_all_water_planet():
    mask = SurfaceMask.from_array(GridGeometry(180, 360), np.zeros((180, 360), dtype=bool), WATER)
    report = solve(build_pyramid(mask))
    assert report.best.closed
    assert report.best.length_km == pytest.approx(40030.2, abs=0.05)
    assert report.gap == 0


@pytest.mark.parametrize("seed", [0, 5])
def test_matches_oracle(seed):
    mask = blob_planet(seed)
    report = solve(build_pyramid(mask))
    oracle = brute_force(mask, 1.0, 1.0)
    step_km = arc_length(mask.geometry.cell_size)
    assert report.best.length_km >= oracle.best.length_km - 2 * step_km
    assert report.upper_bound >= oracle.best.length_km
    assert report.upper_bound >= report.best.length_km


def test_deterministic_and_parallel_agree():
    pyramid = build_pyramid(blob_planet(7))
    a = solve(pyramid)
    b = solve(pyramid)
    c = solve(pyramid, parallel=True, max_workers=4)
    for other in (b, c):
        assert other.best == a.best
        assert other.upper_bound == a.upper_bound
        assert other.nodes_expanded == a.nodes_expanded


def test_gap_tolerance_stops_early():
    pyramid = build_pyramid(blob_planet(2))
    exact = solve(pyramid)
    loose = solve(pyramid, gap_tolerance=math.inf)
    assert loose.nodes_expanded <= exact.nodes_expanded
    assert loose.upper_bound >= loose.best.length_km


def test_epsilon_threshold():
    pyramid = build_pyramid(blob_planet(4))
    coarse = solve(pyramid, epsilon_threshold=3.0)
    assert coarse.upper_bound >= coarse.best.length_km
    assert coarse.nodes_expanded < solve(pyramid).nodes_expanded
    with pytest.raises(ValueError):
        solve(pyramid, epsilon_threshold=0)


def test_rejects_shallow_pyramid():
    mask = blob_planet(1)
    with pytest.raises(ValueError):
        solve(build_pyramid(mask, initial_epsilon=90))
