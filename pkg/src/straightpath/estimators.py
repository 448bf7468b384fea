"""scikit-learn style wrappers around the solver and the brute-force oracle.

``fit`` takes a relief grid (or a plain 2-D altitude array) and finds the
longest straight path; ``predict`` evaluates the objective, in km, for any
``(origin, heading)`` pairs on the fitted mask.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .geodesy import EARTH_RADIUS_KM, GreatCircle
from .morphology import DEFAULT_FACTOR, WATER, build_pyramid, check_mode, classify
from .oracle import DEFAULT_MAX_CIRCLES, brute_force
from .relief import check_relief
from .scan import CircleScanner
from .solver import solve


class _PathSearchMixin:
    def _prepare(self, X):
        self.grid_ = check_relief(X, getattr(self, "registration", None))
        self.mask_ = classify(self.grid_, check_mode(self.mode))
        return self.mask_

    def predict(self, X) -> np.ndarray:
        """Longest free arc length (km) of each circle; ``X`` has columns origin, heading in degrees."""
        check_is_fitted(self, "mask_")
        X = check_array(X, dtype=float)
        if X.shape[1] != 2:
            raise ValueError(f"expected columns (origin, heading), got {X.shape[1]} columns")
        scanner = CircleScanner(self.mask_.geometry, self.step, radius_km=self.radius_km)
        return np.array([scanner.length_km(self.mask_, GreatCircle.canonical(o, h)) for o, h in X])


class LongestPathSearch(_PathSearchMixin, BaseEstimator):
    """Branch-and-bound search for the longest great-circle arc over water or land.

    After ``fit``: ``report_`` (the full solve report), ``path_`` (best arc),
    ``length_km_``, ``upper_bound_km_`` and ``pyramid_``.
    """

    def __init__(self, mode=WATER, factor=DEFAULT_FACTOR, step=None, epsilon_threshold=None,
                 gap_tolerance=0.0, parallel=False, registration=None, radius_km=EARTH_RADIUS_KM):
        self.mode = mode
        self.factor = factor
        self.step = step
        self.epsilon_threshold = epsilon_threshold
        self.gap_tolerance = gap_tolerance
        self.parallel = parallel
        self.registration = registration
        self.radius_km = radius_km

    def fit(self, X, y=None):
        mask = self._prepare(X)
        self.pyramid_ = build_pyramid(mask, factor=self.factor)
        self.report_ = solve(self.pyramid_, step=self.step, epsilon_threshold=self.epsilon_threshold,
                             gap_tolerance=self.gap_tolerance, parallel=self.parallel,
                             radius_km=self.radius_km)
        self.path_ = self.report_.best
        self.length_km_ = self.path_.length_km
        self.upper_bound_km_ = self.report_.upper_bound
        return self


class BruteForceSearch(_PathSearchMixin, BaseEstimator):
    """Exhaustive search over an ``origin_step x heading_step`` lattice of circles."""

    def __init__(self, mode=WATER, origin_step=1.0, heading_step=1.0, step=None,
                 max_circles=DEFAULT_MAX_CIRCLES, parallel=False, registration=None,
                 radius_km=EARTH_RADIUS_KM):
        self.mode = mode
        self.origin_step = origin_step
        self.heading_step = heading_step
        self.step = step
        self.max_circles = max_circles
        self.parallel = parallel
        self.registration = registration
        self.radius_km = radius_km

    def fit(self, X, y=None):
        mask = self._prepare(X)
        self.result_ = brute_force(mask, self.origin_step, self.heading_step, self.step,
                                   max_circles=self.max_circles, parallel=self.parallel,
                                   keep_lengths=True, radius_km=self.radius_km)
        self.path_ = self.result_.best
        self.length_km_ = self.path_.length_km
        self.lengths_ = self.result_.lengths
        return self
