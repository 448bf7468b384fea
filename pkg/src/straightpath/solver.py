"""Best-first branch-and-bound over boxes of great circles with erosion-relaxed bounds."""
from __future__ import annotations

import heapq
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .geodesy import EARTH_RADIUS_KM, GreatCircle, arc_length, separation_bound
from .morphology import MaskPyramid
from .scan import CircleScanner, PathResult

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchNode:
    """The box ``[delta_min, delta_max] x [alpha_min, alpha_max]`` of origins and headings."""

    delta_min: float
    delta_max: float
    alpha_min: float
    alpha_max: float
    level: int
    epsilon: float
    bound: float = math.inf

    @property
    def representative(self) -> GreatCircle:
        return GreatCircle((self.delta_min + self.delta_max) / 2, (self.alpha_min + self.alpha_max) / 2)

    @property
    def separation(self) -> float:
        return separation_bound(self.delta_max - self.delta_min, self.alpha_max - self.alpha_min)

    def contains(self, circle: GreatCircle) -> bool:
        return (self.delta_min <= circle.origin <= self.delta_max
                and self.alpha_min <= circle.heading <= self.alpha_max)

    def sort_key(self):
        # largest bound first, then coarser boxes, then lexicographic position
        return (-self.bound, self.level, self.delta_min, self.alpha_min)


@dataclass(frozen=True)
class SolveReport:
    best: PathResult
    upper_bound: float
    nodes_expanded: int
    wall_time: float
    mode: str
    bounds_evaluated: int = 0
    leaves_evaluated: int = 0

    @property
    def gap(self) -> float:
        return self.upper_bound - self.best.length_km


def root_node(radius_km: float = EARTH_RADIUS_KM) -> SearchNode:
    return SearchNode(0.0, 180.0, 0.0, 180.0, level=0, epsilon=180.0, bound=2 * math.pi * radius_km)


def split(node: SearchNode) -> list[SearchNode]:
    """Quarter the box; children sit one level deeper with half the erosion distance."""
    dm = (node.delta_min + node.delta_max) / 2
    am = (node.alpha_min + node.alpha_max) / 2
    level, eps = node.level + 1, node.epsilon / 2
    return [
        SearchNode(node.delta_min, dm, node.alpha_min, am, level, eps),
        SearchNode(dm, node.delta_max, node.alpha_min, am, level, eps),
        SearchNode(node.delta_min, dm, am, node.alpha_max, level, eps),
        SearchNode(dm, node.delta_max, am, node.alpha_max, level, eps),
    ]


def bound(node: SearchNode, pyramid: MaskPyramid, scanner: CircleScanner) -> float:
    """Free length of the box centre on the mask eroded for this depth (km)."""
    mask = pyramid.level(node.level).mask
    return scanner.length_km(mask, node.representative)


def _with_bound(node: SearchNode, value: float) -> SearchNode:
    return SearchNode(node.delta_min, node.delta_max, node.alpha_min, node.alpha_max,
                      node.level, node.epsilon, value)


def solve(pyramid: MaskPyramid, step: float | None = None, epsilon_threshold: float | None = None,
          gap_tolerance: float = 0.0, parallel: bool = False, max_workers: int | None = None,
          radius_km: float = EARTH_RADIUS_KM, log_every: int = 10_000) -> SolveReport:
    """Find the great circle with the longest obstacle-free arc on the pyramid's raw mask.

    Boxes are expanded best-first.  A box is not split further once it reaches
    the pyramid's raw level, or once its erosion distance drops below
    ``epsilon_threshold`` if one is given; its centre is then evaluated on the
    raw mask as a candidate.  The search continues until
    no box left in the queue can beat the incumbent by more than
    ``gap_tolerance`` km, so ``upper_bound`` certifies the result.
    """
    started = time.perf_counter()
    geometry = pyramid.geometry
    if epsilon_threshold is None:
        epsilon_threshold = 0.0
    elif epsilon_threshold <= 0:
        raise ValueError("epsilon threshold must be positive")
    scanner = CircleScanner(geometry, step, radius_km=radius_km)
    root = root_node(radius_km)
    first = pyramid.level(0)
    if len(pyramid) > 1 and first.epsilon < root.separation:
        raise ValueError(
            f"pyramid starts at epsilon {first.epsilon} but the root box needs at least {root.separation}"
        )
    raw = pyramid.raw
    full_circle = arc_length(360.0, radius_km)
    executor = ThreadPoolExecutor(max_workers) if parallel else None

    heap = [(root.sort_key(), root)]
    best: PathResult | None = None
    retired = -math.inf
    stop_bound = -math.inf
    expanded = evaluated = leaves = 0
    try:
        while heap:
            _, node = heapq.heappop(heap)
            if best is not None and node.bound <= best.length_km + gap_tolerance:
                stop_bound = node.bound
                break
            if node.epsilon < epsilon_threshold or node.level >= pyramid.depth:
                candidate = scanner.scan(raw, node.representative)
                leaves += 1
                if best is None or candidate.length_km > best.length_km:
                    best = candidate
                    log.debug("incumbent %.1f km at %s", best.length_km, best.circle)
                retired = max(retired, node.bound)
                continue
            children = split(node)
            if executor is None:
                values = [bound(c, pyramid, scanner) for c in children]
            else:
                values = list(executor.map(lambda c: bound(c, pyramid, scanner), children))
            for child, value in zip(children, values):
                child = _with_bound(child, value)
                if value >= full_circle and (best is None or not best.closed):
                    # nothing beats a closed circle, so a raw one ends the search at once
                    candidate = scanner.scan(raw, child.representative)
                    if candidate.closed:
                        best = candidate
                heapq.heappush(heap, (child.sort_key(), child))
            expanded += 1
            evaluated += len(children)
            if log_every and expanded % log_every == 0:
                log.info("expanded %d nodes, queue %d, top bound %.1f km, incumbent %s",
                         expanded, len(heap), -heap[0][0][0] if heap else float("nan"),
                         f"{best.length_km:.1f} km" if best else "none")
    finally:
        if executor is not None:
            executor.shutdown()

    upper = max(retired, stop_bound, best.length_km)
    return SolveReport(
        best=best,
        upper_bound=upper,
        nodes_expanded=expanded,
        wall_time=time.perf_counter() - started,
        mode=pyramid.mode,
        bounds_evaluated=evaluated,
        leaves_evaluated=leaves,
    )
