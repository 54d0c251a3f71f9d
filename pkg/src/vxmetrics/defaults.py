"""Default block catalog and recipe graph for game version 1.12.2.

Block names follow the 1.12.2 registry, indexed by their legacy numeric id
(0..252). ``air`` is the single empty block, so 252 placeable types remain.
"""

from __future__ import annotations

from .model import BlockCatalog, BlockInfo, Palette

_COLORS = ("white", "orange", "magenta", "light_blue", "yellow", "lime", "pink", "gray",
           "silver", "cyan", "purple", "blue", "brown", "green", "red", "black")

BLOCKS_1_12_2 = (
    "air", "stone", "grass", "dirt", "cobblestone", "planks", "sapling", "bedrock",
    "flowing_water", "water", "flowing_lava", "lava", "sand", "gravel", "gold_ore", "iron_ore",
    "coal_ore", "log", "leaves", "sponge", "glass", "lapis_ore", "lapis_block", "dispenser",
    "sandstone", "noteblock", "bed", "golden_rail", "detector_rail", "sticky_piston", "web",
    "tallgrass", "deadbush", "piston", "piston_head", "wool", "piston_extension", "yellow_flower",
    "red_flower", "brown_mushroom", "red_mushroom", "gold_block", "iron_block", "double_stone_slab",
    "stone_slab", "brick_block", "tnt", "bookshelf", "mossy_cobblestone", "obsidian", "torch",
    "fire", "mob_spawner", "oak_stairs", "chest", "redstone_wire", "diamond_ore", "diamond_block",
    "crafting_table", "wheat", "farmland", "furnace", "lit_furnace", "standing_sign", "wooden_door",
    "ladder", "rail", "stone_stairs", "wall_sign", "lever", "stone_pressure_plate", "iron_door",
    "wooden_pressure_plate", "redstone_ore", "lit_redstone_ore", "unlit_redstone_torch",
    "redstone_torch", "stone_button", "snow_layer", "ice", "snow", "cactus", "clay", "reeds",
    "jukebox", "fence", "pumpkin", "netherrack", "soul_sand", "glowstone", "portal", "lit_pumpkin",
    "cake", "unpowered_repeater", "powered_repeater", "stained_glass", "trapdoor", "monster_egg",
    "stonebrick", "brown_mushroom_block", "red_mushroom_block", "iron_bars", "glass_pane",
    "melon_block", "pumpkin_stem", "melon_stem", "vine", "fence_gate", "brick_stairs",
    "stone_brick_stairs", "mycelium", "waterlily", "nether_brick", "nether_brick_fence",
    "nether_brick_stairs", "nether_wart", "enchanting_table", "brewing_stand", "cauldron",
    "end_portal", "end_portal_frame", "end_stone", "dragon_egg", "redstone_lamp",
    "lit_redstone_lamp", "double_wooden_slab", "wooden_slab", "cocoa", "sandstone_stairs",
    "emerald_ore", "ender_chest", "tripwire_hook", "tripwire", "emerald_block", "spruce_stairs",
    "birch_stairs", "jungle_stairs", "command_block", "beacon", "cobblestone_wall", "flower_pot",
    "carrots", "potatoes", "wooden_button", "skull", "anvil", "trapped_chest",
    "light_weighted_pressure_plate", "heavy_weighted_pressure_plate", "unpowered_comparator",
    "powered_comparator", "daylight_detector", "redstone_block", "quartz_ore", "hopper",
    "quartz_block", "quartz_stairs", "activator_rail", "dropper", "stained_hardened_clay",
    "stained_glass_pane", "leaves2", "log2", "acacia_stairs", "dark_oak_stairs", "slime",
    "barrier", "iron_trapdoor", "prismarine", "sea_lantern", "hay_block", "carpet",
    "hardened_clay", "coal_block", "packed_ice", "double_plant", "standing_banner", "wall_banner",
    "daylight_detector_inverted", "red_sandstone", "red_sandstone_stairs", "double_stone_slab2",
    "stone_slab2", "spruce_fence_gate", "birch_fence_gate", "jungle_fence_gate",
    "dark_oak_fence_gate", "acacia_fence_gate", "spruce_fence", "birch_fence", "jungle_fence",
    "dark_oak_fence", "acacia_fence", "spruce_door", "birch_door", "jungle_door", "acacia_door",
    "dark_oak_door", "end_rod", "chorus_plant", "chorus_flower", "purpur_block", "purpur_pillar",
    "purpur_stairs", "purpur_double_slab", "purpur_slab", "end_bricks", "beetroots", "grass_path",
    "end_gateway", "repeating_command_block", "chain_command_block", "frosted_ice", "magma",
    "nether_wart_block", "red_nether_brick", "bone_block", "structure_void", "observer",
    *(f"{c}_shulker_box" for c in _COLORS),
    *(f"{c}_glazed_terracotta" for c in _COLORS),
    "concrete", "concrete_powder",
)

# Category lists keyed by their display names; an empty tuple means the
# display name has no 1.12.2 block and is reported as unresolved.
FUNCTIONAL = {
    "Bed": ("bed",), "Bookshelf": ("bookshelf",), "Torch": ("torch",), "Chest": ("chest",),
    "Crafting Table": ("crafting_table",), "Furnace": ("furnace", "lit_furnace"),
    "Enchantment Table": ("enchanting_table",), "Profession Stand": (),
    "Cauldron": ("cauldron",), "Beacon": ("beacon",), "Anvil": ("anvil",),
}
AESTHETIC = {
    "Glass": ("glass",), "Tall Grass": ("tallgrass",), "Dead Shrub": ("deadbush",),
    "Dandelion": ("yellow_flower",), "Poppy": ("red_flower",), "Torch": ("torch",),
    "Sign (Block)": ("standing_sign",), "Sign (Wall Block)": ("wall_sign",),
    "Jack-O-Lantern": ("lit_pumpkin",), "Stained Glass": ("stained_glass",),
    "Iron Bars": ("iron_bars",), "Glass Pane": ("glass_pane",), "Mycelium": ("mycelium",),
    "Lily Pad": ("waterlily",), "Head Block": ("skull",),
    "Stained Glass Pane": ("stained_glass_pane",), "Hay Bale": ("hay_block",),
    "Carpet": ("carpet",), "Sunflower": ("double_plant",),
}
FOOD = {
    "Leaves": ("leaves", "leaves2"), "Brown Mushroom": ("brown_mushroom",),
    "Red Mushroom": ("red_mushroom",), "Wheat": ("wheat",), "Sugar Cane": ("reeds",),
    "Cake": ("cake",), "Melon": ("melon_block",), "Pumpkin Vine": ("pumpkin_stem",),
    "Melon Vine": ("melon_stem",), "Vines": ("vine",), "Cocoa Plant": ("cocoa",),
    "Carrot": ("carrots",), "Potatoes": ("potatoes",),
}
DEFENSE = {
    "Water": ("water", "flowing_water"), "Lava": ("lava", "flowing_lava"), "TNT": ("tnt",),
    "Fire": ("fire",),
    "Wood Door": ("wooden_door", "spruce_door", "birch_door", "jungle_door", "acacia_door",
                  "dark_oak_door"),
    "Ladder": ("ladder",), "Iron Door": ("iron_door",),
    "Fence": ("fence", "spruce_fence", "birch_fence", "jungle_fence", "dark_oak_fence",
              "acacia_fence", "nether_brick_fence"),
    "Trapdoor": ("trapdoor", "iron_trapdoor"),
    "Fence Gate": ("fence_gate", "spruce_fence_gate", "birch_fence_gate", "jungle_fence_gate",
                   "dark_oak_fence_gate", "acacia_fence_gate"),
    "Tripwire Hook": ("tripwire_hook",), "Tripwire": ("tripwire",),
    "Trapped Chest": ("trapped_chest",), "Dropper": ("dropper",),
}
LIGHT = {
    "Lava": ("lava", "flowing_lava"), "Torch": ("torch",), "Fire": ("fire",),
    "Furnace (Smelting)": ("lit_furnace",), "Redstone Torch": ("redstone_torch",),
    "Glowstone": ("glowstone",), "Portal": ("portal",), "Jack-O-Lantern": ("lit_pumpkin",),
    "Beacon": ("beacon",), "Lantern": (), "Redstone Lamp (On)": ("lit_redstone_lamp",),
    "Enchantment Table": ("enchanting_table",),
}

CATEGORY_LISTS = {
    "functional": FUNCTIONAL,
    "aesthetic": AESTHETIC,
    "food": FOOD,
    "defense": DEFENSE,
    "light": LIGHT,
}

NON_SOLID = frozenset({
    "air", "sapling", "flowing_water", "water", "flowing_lava", "lava", "golden_rail",
    "detector_rail", "web", "tallgrass", "deadbush", "piston_extension", "yellow_flower",
    "red_flower", "brown_mushroom", "red_mushroom", "torch", "fire", "redstone_wire", "wheat",
    "standing_sign", "ladder", "rail", "wall_sign", "lever", "stone_pressure_plate",
    "wooden_pressure_plate", "unlit_redstone_torch", "redstone_torch", "stone_button", "reeds",
    "portal", "pumpkin_stem", "melon_stem", "vine", "waterlily", "nether_wart", "end_portal",
    "cocoa", "tripwire_hook", "tripwire", "carrots", "potatoes", "wooden_button",
    "light_weighted_pressure_plate", "heavy_weighted_pressure_plate", "activator_rail",
    "double_plant", "standing_banner", "wall_banner", "end_rod", "beetroots", "end_gateway",
    "structure_void",
})

MINED = frozenset({
    "stone", "cobblestone", "gold_ore", "iron_ore", "coal_ore", "lapis_ore", "diamond_ore",
    "redstone_ore", "lit_redstone_ore", "emerald_ore", "quartz_ore", "obsidian", "netherrack",
    "end_stone",
})

_WOOD_DOORS = ("wooden_door", "spruce_door", "birch_door", "jungle_door", "acacia_door",
               "dark_oak_door")
_WOOD_FENCES = ("fence", "spruce_fence", "birch_fence", "jungle_fence", "dark_oak_fence",
                "acacia_fence")
_WOOD_GATES = ("fence_gate", "spruce_fence_gate", "birch_fence_gate", "jungle_fence_gate",
               "dark_oak_fence_gate", "acacia_fence_gate")
_WOOD_STAIRS = ("oak_stairs", "spruce_stairs", "birch_stairs", "jungle_stairs", "acacia_stairs",
                "dark_oak_stairs")

# Ingredients are expressed as blocks: sticks count as planks, ingots and gems
# as their ore, dyes as flowers. Blocks absent here are raw.
RECIPES_1_12_2 = {
    "planks": ("log",),
    "crafting_table": ("planks",),
    "chest": ("planks",),
    "trapped_chest": ("chest", "tripwire_hook"),
    "tripwire_hook": ("iron_ore", "planks"),
    "bookshelf": ("planks", "reeds"),
    "torch": ("planks", "coal_ore"),
    "furnace": ("cobblestone",),
    "lit_furnace": ("furnace",),
    "stonebrick": ("stone",),
    "stone_slab": ("stone",),
    "double_stone_slab": ("stone_slab",),
    "stone_stairs": ("cobblestone",),
    "stone_brick_stairs": ("stonebrick",),
    "cobblestone_wall": ("cobblestone",),
    "mossy_cobblestone": ("cobblestone", "vine"),
    "brick_block": ("clay",),
    "brick_stairs": ("brick_block",),
    "flower_pot": ("clay",),
    "hardened_clay": ("clay",),
    "stained_hardened_clay": ("hardened_clay", "red_flower"),
    "sandstone": ("sand",),
    "sandstone_stairs": ("sandstone",),
    "red_sandstone": ("sand",),
    "red_sandstone_stairs": ("red_sandstone",),
    "stone_slab2": ("red_sandstone",),
    "double_stone_slab2": ("stone_slab2",),
    "glass": ("sand",),
    "glass_pane": ("glass",),
    "stained_glass": ("glass", "red_flower"),
    "stained_glass_pane": ("stained_glass",),
    "carpet": ("wool",),
    "bed": ("wool", "planks"),
    "standing_banner": ("wool", "planks"),
    "wall_banner": ("wool", "planks"),
    "wooden_slab": ("planks",),
    "double_wooden_slab": ("wooden_slab",),
    "trapdoor": ("planks",),
    "ladder": ("planks",),
    "standing_sign": ("planks",),
    "wall_sign": ("planks",),
    "wooden_pressure_plate": ("planks",),
    "wooden_button": ("planks",),
    "lever": ("cobblestone", "planks"),
    "jukebox": ("planks", "diamond_ore"),
    "noteblock": ("planks", "redstone_ore"),
    "iron_block": ("iron_ore",),
    "gold_block": ("gold_ore",),
    "diamond_block": ("diamond_ore",),
    "emerald_block": ("emerald_ore",),
    "lapis_block": ("lapis_ore",),
    "coal_block": ("coal_ore",),
    "redstone_block": ("redstone_ore",),
    "quartz_block": ("quartz_ore",),
    "quartz_stairs": ("quartz_block",),
    "iron_bars": ("iron_ore",),
    "iron_door": ("iron_ore",),
    "iron_trapdoor": ("iron_ore",),
    "anvil": ("iron_block", "iron_ore"),
    "cauldron": ("iron_ore",),
    "hopper": ("iron_ore", "chest"),
    "rail": ("iron_ore", "planks"),
    "golden_rail": ("gold_ore", "planks", "redstone_ore"),
    "detector_rail": ("iron_ore", "stone_pressure_plate", "redstone_ore"),
    "activator_rail": ("iron_ore", "planks", "redstone_torch"),
    "stone_pressure_plate": ("stone",),
    "light_weighted_pressure_plate": ("gold_ore",),
    "heavy_weighted_pressure_plate": ("iron_ore",),
    "stone_button": ("stone",),
    "redstone_torch": ("planks", "redstone_ore"),
    "unpowered_repeater": ("redstone_torch", "stone"),
    "unpowered_comparator": ("redstone_torch", "quartz_ore", "stone"),
    "redstone_lamp": ("redstone_ore", "glowstone"),
    "lit_redstone_lamp": ("redstone_lamp",),
    "piston": ("planks", "cobblestone", "iron_ore", "redstone_ore"),
    "sticky_piston": ("piston", "slime"),
    "dispenser": ("cobblestone", "redstone_ore", "web"),
    "dropper": ("cobblestone", "redstone_ore"),
    "observer": ("cobblestone", "redstone_ore", "quartz_ore"),
    "daylight_detector": ("glass", "quartz_ore", "wooden_slab"),
    "tnt": ("sand",),
    "enchanting_table": ("obsidian", "diamond_ore", "reeds"),
    "beacon": ("glass", "obsidian"),
    "ender_chest": ("obsidian",),
    "brewing_stand": ("cobblestone",),
    "hay_block": ("wheat",),
    "lit_pumpkin": ("pumpkin", "torch"),
    "cake": ("wheat", "reeds"),
    "nether_brick": ("netherrack",),
    "nether_brick_fence": ("nether_brick",),
    "nether_brick_stairs": ("nether_brick",),
    "red_nether_brick": ("nether_brick", "nether_wart"),
    "nether_wart_block": ("nether_wart",),
    "purpur_block": ("chorus_plant",),
    "purpur_pillar": ("purpur_block",),
    "purpur_stairs": ("purpur_block",),
    "purpur_slab": ("purpur_block",),
    "purpur_double_slab": ("purpur_slab",),
    "end_bricks": ("end_stone",),
    "end_rod": ("chorus_plant",),
    "snow": ("snow_layer",),
    "concrete_powder": ("sand", "gravel"),
    "concrete": ("concrete_powder",),
    "grass_path": ("grass",),
    "farmland": ("dirt",),
    **{door: ("planks",) for door in _WOOD_DOORS},
    **{fence: ("planks",) for fence in _WOOD_FENCES},
    **{gate: ("planks",) for gate in _WOOD_GATES},
    **{stairs: ("planks",) for stairs in _WOOD_STAIRS},
    **{f"{c}_shulker_box": ("chest",) for c in _COLORS},
    **{f"{c}_glazed_terracotta": ("stained_hardened_clay",) for c in _COLORS},
}


def default_palette() -> Palette:
    return Palette(BLOCKS_1_12_2)


def category_members(category: str) -> set[str]:
    known = set(BLOCKS_1_12_2)
    return {b for blocks in CATEGORY_LISTS[category].values() for b in blocks if b in known}


def unresolved_list_names() -> list[str]:
    """Category list entries that have no block in 1.12.2."""
    known = set(BLOCKS_1_12_2)
    return sorted({f"{cat}:{name}" for cat, lists in CATEGORY_LISTS.items()
                   for name, blocks in lists.items() if not any(b in known for b in blocks)})


def default_catalog() -> BlockCatalog:
    membership = {c: category_members(c) for c in CATEGORY_LISTS}
    blocks = {}
    for name in BLOCKS_1_12_2:
        empty = name == "air"
        blocks[name] = BlockInfo(
            categories=frozenset() if empty else frozenset(c for c, m in membership.items() if name in m),
            solid=name not in NON_SOLID,
            empty=empty,
            mined=name in MINED,
        )
    return BlockCatalog(blocks, unresolved=unresolved_list_names())


def default_recipes():
    from .recipes import RecipeGraph

    return RecipeGraph({name: RECIPES_1_12_2.get(name, ()) for name in BLOCKS_1_12_2 if name != "air"})
