"""
Block entropy and relation to the environment
==============================================

Two settlements on the same terrain: one built from a single material, one
mixing materials at random. Level entropy looks at the whole box, settlement
entropy only at pairs that start on an edited cell.
"""

import numpy as np

from vxmetrics import (
    BoundingBox,
    ChangeSet,
    Palette,
    Settlement,
    VoxelGrid,
    conditional_entropy,
    default_catalog,
    default_recipes,
    relation_to_environment,
)
from vxmetrics.defaults import BLOCKS_1_12_2

palette = Palette(BLOCKS_1_12_2)
catalog = default_catalog()
recipes = default_recipes()
rng = np.random.default_rng(0)

sx, sy, sz = 20, 10, 20
terrain = np.zeros((sy, sz, sx), dtype=np.uint16)
terrain[:3] = palette.id_of("dirt")
terrain[3] = palette.id_of("grass")
terrain[4, 0, :] = palette.id_of("log")  # a fallen tree along one edge


def build(materials):
    """Hollow 8x4x8 house on the grass; returns the settlement."""
    cells = terrain.copy()
    edits = []
    for y in range(4, 8):
        for z in range(6, 14):
            for x in range(6, 14):
                if y in (4, 7) or x in (6, 13) or z in (6, 13):
                    block = palette.id_of(materials[rng.integers(len(materials))])
                    edits.append((x, y, z, int(cells[y, z, x]), block))
                    cells[y, z, x] = block
    grid = VoxelGrid(cells, palette)
    return Settlement(grid, ChangeSet.from_edits(edits), BoundingBox.of_grid(grid))


plain = build(["planks"])
mixed = build(["planks", "cobblestone", "glass", "stonebrick", "bookshelf"])

###############################################################################
# Terrain dominates the level entropy of both; the edited cells tell them apart.
for name, s in (("plain", plain), ("mixed", mixed)):
    print(f"{name:>5}: level {conditional_entropy(s, catalog, 'level'):.3f} bits, "
          f"settlement {conditional_entropy(s, catalog, 'settlement'):.3f} bits")

###############################################################################
# Relation to environment sums, over distinct placed types, the number of
# crafting steps needed from what is at hand. Planks come from the log (1),
# stone bricks from mined stone (1) and cobblestone is mined itself (0).
# Glass needs sand and a bookshelf needs reeds; neither is around, so both
# add nothing.
print("plain:", relation_to_environment(plain, catalog, recipes))
print("mixed:", relation_to_environment(mixed, catalog, recipes))
print("bookshelf recipe:", recipes.recipe("bookshelf"))
