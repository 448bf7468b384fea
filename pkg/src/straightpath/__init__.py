"""Longest straight-line paths over water or land on a global relief raster."""
from .estimators import BruteForceSearch, LongestPathSearch
from .geodesy import (
    EARTH_RADIUS_KM, CirclePoint, GreatCircle, angular_distance, arc_length, circle_normal,
    exact_max_separation, gc_point, parse_angle, point_on_circle, separation_bound,
)
from .morphology import LAND, WATER, MaskPyramid, SurfaceMask, build_pyramid, classify, erode, write_pgm
from .oracle import CostCapExceeded, OracleResult, brute_force
from .relief import (
    CELL_CENTERED, GRIDLINE, GridDataError, GridFormatError, GridGeometry, ReliefGrid, downsample,
    load_grid, sample, write_ascii_grid, write_raw,
)
from .scan import CircleScanner, PathResult, longest_run
from .solver import SearchNode, SolveReport, bound, root_node, solve, split

__version__ = "0.1.0"
