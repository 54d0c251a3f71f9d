import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from vxmetrics import (  # noqa: E402
    BlockCatalog,
    BlockInfo,
    BoundingBox,
    ChangeSet,
    Palette,
    Settlement,
    VoxelGrid,
    default_catalog,
)

SMALL_NAMES = ("air", "stone", "dirt", "planks", "log", "chest", "torch", "glass", "water", "iron_bars")


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture
def small_palette():
    return Palette(SMALL_NAMES)


def grid_from(size, palette, blocks=None, fill="air"):
    """Grid of ``fill`` with ``{(x, y, z): name}`` placements."""
    sx, sy, sz = size
    cells = np.full((sy, sz, sx), palette.id_of(fill))
    for (x, y, z), name in (blocks or {}).items():
        cells[y, z, x] = palette.id_of(name)
    return VoxelGrid(cells, palette)


def settle(grid, placed, box=None):
    """Settlement whose edits set ``placed`` coordinates to their grid block."""
    air = grid.palette.id_of("air") if "air" in grid.palette else 0
    edits = [(x, y, z, air, int(grid.cells[y, z, x])) for (x, y, z) in placed]
    return Settlement(grid, ChangeSet.from_edits(edits), box or BoundingBox.of_grid(grid))


def random_grid(rng, size, names, p_air=0.5):
    """Random grid over ``names``; ``names[0]`` must be air."""
    sx, sy, sz = size
    palette = Palette(tuple(names))
    solid_ids = rng.integers(1, len(names), size=(sy, sz, sx))
    cells = np.where(rng.random((sy, sz, sx)) < p_air, 0, solid_ids)
    return VoxelGrid(cells, palette)


def toy_catalog(recipes_names=("wood", "planks", "chest", "dirt", "iron_ore", "iron_bars")):
    blocks = {"air": BlockInfo(solid=False, empty=True)}
    for n in recipes_names:
        blocks[n] = BlockInfo(mined=(n == "iron_ore"))
    return BlockCatalog(blocks)


# -- acceptance report -------------------------------------------------------

_criteria: dict[str, bool] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion a test belongs to")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when not in ("setup", "call"):
        return
    failed = call.excinfo is not None and not call.excinfo.errisinstance(pytest.skip.Exception)
    name = marker.args[0]
    if call.when == "call" or failed:
        _criteria[name] = _criteria.get(name, True) and not failed


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in _criteria.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")
