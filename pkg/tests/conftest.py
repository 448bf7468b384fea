import numpy as np
import pytest

from straightpath.relief import CELL_CENTERED, GridGeometry, ReliefGrid

ACCEPTANCE_KEY = pytest.StashKey[list]()

OCEAN = -1000
LAND = 100


def planet(rows=180, cols=360, fill=OCEAN, registration=CELL_CENTERED):
    """Uniform synthetic planet; callers paint features into ``.altitudes.copy()``."""
    return ReliefGrid(GridGeometry(rows, cols, registration), np.full((rows, cols), fill, dtype=np.int16))


def with_altitudes(grid, alt):
    return ReliefGrid(grid.geometry, alt)


def blob_mask(rng, rows=36, cols=72, blobs=6, max_radius=6.0):
    """Obstacle mask made of a few disks, wrapped in longitude."""
    r = np.arange(rows)[:, None]
    c = np.arange(cols)[None, :]
    out = np.zeros((rows, cols), dtype=bool)
    for _ in range(blobs):
        r0, c0 = rng.uniform(0, rows), rng.uniform(0, cols)
        rad = rng.uniform(1.5, max_radius)
        dc = np.minimum(np.abs(c - c0), cols - np.abs(c - c0))
        out |= (r - r0) ** 2 + dc ** 2 <= rad ** 2
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
