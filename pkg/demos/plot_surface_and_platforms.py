"""
Surface blocks, platforms, density and linearity
=================================================

A small hill with a two-storey hut on top. The structural metrics only
look at surface blocks: solid blocks with two empty cells above them,
i.e. places a player could stand.
"""

import numpy as np

from vxmetrics import (
    BoundingBox,
    Palette,
    VoxelGrid,
    collect_surface_blocks,
    default_catalog,
    density,
    filling_ratio,
    linearity,
    platform_decomposition,
    platform_size,
)
from vxmetrics.defaults import BLOCKS_1_12_2

palette = Palette(BLOCKS_1_12_2)
catalog = default_catalog()
air, grass, planks = (palette.id_of(n) for n in ("air", "grass", "planks"))

###############################################################################
# Terrain: a ramp rising one block every four columns along x.
sx, sy, sz = 16, 12, 8
cells = np.full((sy, sz, sx), air)
for x in range(sx):
    cells[: 1 + x // 4, :, x] = grass

###############################################################################
# A hut on the top step: floor at y=4, a second floor at y=7.
cells[4, 2:6, 12:16] = planks
cells[7, 2:6, 12:16] = planks
grid = VoxelGrid(cells, palette)
box = BoundingBox.of_grid(grid)

surface = collect_surface_blocks(grid, catalog, box)
print("surface blocks:", len(surface))

###############################################################################
# Platforms are equal-height, 4-connected groups of surface blocks. The hut's
# lower floor still has exactly two cells of air under the upper floor, so it
# counts; the grass it covers does not, which splits the y=3 step in two.
for p in platform_decomposition(grid, catalog, box):
    print(f"  platform at y={p.height}: {p.size} blocks")
print("mean platform size:", platform_size(grid, catalog, box))

###############################################################################
# Density is surface blocks per box cell; filling ratio counts every
# non-empty cell. Linearity is the mean squared residual of surface height
# against x (or z). The ramp rises along x, so a line in x explains most of
# the height; a line in z explains none of it.
print("density:", round(density(grid, catalog, box), 4))
print("filling ratio:", round(filling_ratio(grid, catalog, box), 4))
print("linearity x:", round(linearity(grid, catalog, box, "x"), 4))
print("linearity z:", round(linearity(grid, catalog, box, "z"), 4))
