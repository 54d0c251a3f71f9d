"""Immutable data model: palettes, voxel grids, block catalogs, changesets.

Cells are stored as a C-ordered array of shape ``(size_y, size_z, size_x)`` so
that the flat index of ``(x, y, z)`` is ``y*size_x*size_z + z*size_x + x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import BoundsError, PaletteError, UnknownBlockError

CATEGORIES = ("light", "defense", "functional", "aesthetic", "food")


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array)
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class Palette:
    """Bijection between block names and contiguous integer ids.

    ``names[i]`` is the name of block id ``i``.
    """

    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            seen = set()
            dup = next(n for n in self.names if n in seen or seen.add(n))
            raise PaletteError(f"duplicate palette name {dup!r}")
        if not self.names:
            raise PaletteError("empty palette")

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, int]) -> "Palette":
        by_id: dict[int, str] = {}
        for name, idx in mapping.items():
            if not isinstance(idx, int) or isinstance(idx, bool) or idx < 0:
                raise PaletteError(f"palette id for {name!r} is not a non-negative integer: {idx!r}")
            if idx in by_id:
                raise PaletteError(f"palette names {by_id[idx]!r} and {name!r} both map to id {idx}")
            by_id[idx] = name
        if sorted(by_id) != list(range(len(by_id))):
            raise PaletteError("palette ids are not contiguous from 0")
        return cls(tuple(by_id[i] for i in range(len(by_id))))

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name) -> bool:
        return name in self._index

    @property
    def _index(self) -> dict[str, int]:
        cached = self.__dict__.get("_index_cache")
        if cached is None:
            cached = {n: i for i, n in enumerate(self.names)}
            object.__setattr__(self, "_index_cache", cached)
        return cached

    def id_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownBlockError(f"block {name!r} is not in the palette") from None

    def name_of(self, block_id: int) -> str:
        if not 0 <= block_id < len(self.names):
            raise UnknownBlockError(f"block id {block_id} is not in the palette")
        return self.names[block_id]

    def as_dict(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box, ``lo`` inclusive and ``hi`` exclusive, as (x, y, z)."""

    lo: tuple[int, int, int]
    hi: tuple[int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "lo", tuple(int(v) for v in self.lo))
        object.__setattr__(self, "hi", tuple(int(v) for v in self.hi))
        if any(a >= b for a, b in zip(self.lo, self.hi)):
            raise BoundsError(f"box {self.lo}..{self.hi} is empty or inverted")

    @classmethod
    def of_grid(cls, grid: "VoxelGrid") -> "BoundingBox":
        return cls((0, 0, 0), grid.size)

    @property
    def shape(self) -> tuple[int, int, int]:
        return tuple(b - a for a, b in zip(self.lo, self.hi))

    @property
    def volume(self) -> int:
        sx, sy, sz = self.shape
        return sx * sy * sz

    @property
    def slices(self) -> tuple[slice, slice, slice]:
        """Index into a ``(y, z, x)`` cell array."""
        (x0, y0, z0), (x1, y1, z1) = self.lo, self.hi
        return slice(y0, y1), slice(z0, z1), slice(x0, x1)

    def check_within(self, grid: "VoxelGrid") -> None:
        if any(a < 0 for a in self.lo) or any(b > s for b, s in zip(self.hi, grid.size)):
            raise BoundsError(f"box {self.lo}..{self.hi} exceeds grid of size {grid.size}")

    def contains(self, x, y, z):
        """Vectorised membership test."""
        (x0, y0, z0), (x1, y1, z1) = self.lo, self.hi
        return (x >= x0) & (x < x1) & (y >= y0) & (y < y1) & (z >= z0) & (z < z1)


class VoxelGrid:
    """Dense read-only lattice of block ids with its palette."""

    __slots__ = ("cells", "palette")

    def __init__(self, cells: np.ndarray, palette: Palette):
        cells = np.asarray(cells)
        if cells.ndim != 3 or 0 in cells.shape:
            raise BoundsError(f"cells must be a non-empty (y, z, x) array, got shape {cells.shape}")
        if cells.size and (cells.min() < 0 or cells.max() >= len(palette)):
            raise PaletteError("cell id outside the palette")
        dtype = np.uint8 if len(palette) <= 256 else np.uint16 if len(palette) <= 65536 else np.uint32
        self.cells = _frozen(cells.astype(dtype, copy=False))
        self.palette = palette

    @classmethod
    def filled(cls, size: tuple[int, int, int], palette: Palette, block: str | int = 0) -> "VoxelGrid":
        sx, sy, sz = size
        bid = palette.id_of(block) if isinstance(block, str) else block
        return cls(np.full((sy, sz, sx), bid), palette)

    @property
    def size(self) -> tuple[int, int, int]:
        sy, sz, sx = self.cells.shape
        return sx, sy, sz

    @property
    def size_x(self) -> int:
        return self.cells.shape[2]

    @property
    def size_y(self) -> int:
        return self.cells.shape[0]

    @property
    def size_z(self) -> int:
        return self.cells.shape[1]

    @property
    def flat(self) -> np.ndarray:
        return self.cells.reshape(-1)

    def in_bounds(self, x, y, z):
        sx, sy, sz = self.size
        return (x >= 0) & (x < sx) & (y >= 0) & (y < sy) & (z >= 0) & (z < sz)

    def linear_index(self, x, y, z):
        return (y * self.size_z + z) * self.size_x + x

    def coords_of(self, index):
        index = np.asarray(index)
        x = index % self.size_x
        z = (index // self.size_x) % self.size_z
        y = index // (self.size_x * self.size_z)
        return x, y, z

    def with_cells(self, updates: Mapping[tuple[int, int, int], int]) -> "VoxelGrid":
        """Copy of the grid with some cells replaced."""
        cells = np.array(self.cells)
        for (x, y, z), bid in updates.items():
            cells[y, z, x] = bid
        return VoxelGrid(cells, self.palette)

    def __eq__(self, other):
        if not isinstance(other, VoxelGrid):
            return NotImplemented
        return self.palette == other.palette and np.array_equal(self.cells, other.cells)

    def __repr__(self):
        return f"VoxelGrid(size={self.size}, palette={len(self.palette)} types)"


def block_at(grid: VoxelGrid, x: int, y: int, z: int) -> int:
    if not grid.in_bounds(x, y, z):
        raise BoundsError(f"({x}, {y}, {z}) outside grid of size {grid.size}")
    return int(grid.flat[grid.linear_index(x, y, z)])


@dataclass(frozen=True)
class BlockInfo:
    categories: frozenset = frozenset()
    solid: bool = True
    empty: bool = False
    mined: bool = False


@dataclass(frozen=True)
class BlockLookup:
    """Per-palette-id boolean tables derived from a catalog."""

    solid: np.ndarray
    empty: np.ndarray
    mined: np.ndarray
    category: dict


class BlockCatalog:
    """Block properties keyed by name.

    Empty blocks are never solid and never belong to a category.
    """

    def __init__(self, blocks: Mapping[str, BlockInfo], unresolved: Iterable[str] = ()):
        for name, info in blocks.items():
            if info.empty and (info.solid or info.categories):
                raise PaletteError(f"empty block {name!r} cannot be solid or categorised")
            bad = set(info.categories) - set(CATEGORIES)
            if bad:
                raise PaletteError(f"block {name!r} has unknown categories {sorted(bad)}")
        self.blocks = dict(blocks)
        # Category list names that matched no block type (reported, not fatal).
        self.unresolved = tuple(unresolved)
        self._lookups: dict[Palette, BlockLookup] = {}

    def __contains__(self, name) -> bool:
        return name in self.blocks

    def __getitem__(self, name) -> BlockInfo:
        try:
            return self.blocks[name]
        except KeyError:
            raise UnknownBlockError(f"block {name!r} is not in the catalog") from None

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def names_in(self, category: str) -> set[str]:
        return {n for n, info in self.blocks.items() if category in info.categories}

    @property
    def empty_names(self) -> set[str]:
        return {n for n, info in self.blocks.items() if info.empty}

    def lookup(self, palette: Palette) -> BlockLookup:
        """Boolean tables indexed by palette id; cached per palette."""
        table = self._lookups.get(palette)
        if table is None:
            infos = [self[name] for name in palette.names]
            table = BlockLookup(
                solid=_frozen(np.array([i.solid for i in infos], dtype=bool)),
                empty=_frozen(np.array([i.empty for i in infos], dtype=bool)),
                mined=_frozen(np.array([i.mined for i in infos], dtype=bool)),
                category={c: _frozen(np.array([c in i.categories for i in infos], dtype=bool))
                          for c in CATEGORIES},
            )
            self._lookups[palette] = table
        return table


@dataclass(frozen=True)
class ChangeSet:
    """Generator edits, one per coordinate, in first-seen order.

    ``collapsed`` counts duplicate edits that were merged (last write wins).
    """

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    before: np.ndarray
    after: np.ndarray
    collapsed: int = 0

    def __post_init__(self):
        for name in ("x", "y", "z", "before", "after"):
            object.__setattr__(self, name, _frozen(np.asarray(getattr(self, name), dtype=np.int64)))

    @classmethod
    def empty(cls) -> "ChangeSet":
        e = np.zeros(0, dtype=np.int64)
        return cls(e, e, e, e, e)

    @classmethod
    def from_edits(cls, edits: Iterable[tuple[int, int, int, int, int]]) -> "ChangeSet":
        """Build from (x, y, z, before, after) tuples, collapsing duplicates."""
        merged: dict[tuple[int, int, int], list[int]] = {}
        collapsed = 0
        for x, y, z, before, after in edits:
            key = (x, y, z)
            if key in merged:
                collapsed += 1
                merged[key][1] = after
            else:
                merged[key] = [before, after]
        if not merged:
            return cls.empty()
        coords = np.array(list(merged), dtype=np.int64).reshape(-1, 3)
        states = np.array(list(merged.values()), dtype=np.int64).reshape(-1, 2)
        return cls(coords[:, 0], coords[:, 1], coords[:, 2], states[:, 0], states[:, 1], collapsed)

    def __len__(self) -> int:
        return len(self.x)

    def __iter__(self):
        return zip(self.x.tolist(), self.y.tolist(), self.z.tolist(),
                   self.before.tolist(), self.after.tolist())

    def check_within(self, grid: VoxelGrid) -> None:
        inside = grid.in_bounds(self.x, self.y, self.z)
        if not np.all(inside):
            i = int(np.argmin(inside))
            raise BoundsError(f"edit {i} at ({self.x[i]}, {self.y[i]}, {self.z[i]}) "
                              f"outside grid of size {grid.size}")
        n = len(grid.palette)
        for name in ("before", "after"):
            ids = getattr(self, name)
            bad = (ids < 0) | (ids >= n)
            if np.any(bad):
                i = int(np.argmax(bad))
                raise UnknownBlockError(f"edit {i} has {name} id {ids[i]} not in the palette")

    def added_mask(self, lookup: BlockLookup) -> np.ndarray:
        """Edits whose final block is non-empty."""
        return ~lookup.empty[self.after]


def surface_mask(grid: VoxelGrid, catalog: BlockCatalog, box: BoundingBox | None = None) -> np.ndarray:
    """Boolean ``(y, z, x)`` array over ``box`` marking surface blocks.

    A surface block is solid with two empty cells directly above; cells above
    the grid top count as empty.
    """
    box = box or BoundingBox.of_grid(grid)
    box.check_within(grid)
    lookup = catalog.lookup(grid.palette)
    (x0, y0, z0), (x1, y1, z1) = box.lo, box.hi
    top = min(y1 + 2, grid.size_y)
    block = grid.cells[y0:top, z0:z1, x0:x1]
    empty = lookup.empty[block]
    h = y1 - y0
    mask = lookup.solid[block[:h]]
    for k in (1, 2):
        above = np.ones_like(mask)
        avail = max(0, min(h, empty.shape[0] - k))
        above[:avail] = empty[k:k + avail]
        mask &= above
    return mask


def is_surface_block(grid: VoxelGrid, catalog: BlockCatalog, x: int, y: int, z: int) -> bool:
    if not grid.in_bounds(x, y, z):
        raise BoundsError(f"({x}, {y}, {z}) outside grid of size {grid.size}")
    lookup = catalog.lookup(grid.palette)
    if not lookup.solid[grid.cells[y, z, x]]:
        return False
    for dy in (1, 2):
        if y + dy < grid.size_y and not lookup.empty[grid.cells[y + dy, z, x]]:
            return False
    return True


def collect_surface_blocks(grid: VoxelGrid, catalog: BlockCatalog,
                           box: BoundingBox | None = None) -> np.ndarray:
    """Surface block coordinates in ``box`` as an ``(n, 3)`` array of (x, y, z).

    Rows follow the canonical linear index order.
    """
    box = box or BoundingBox.of_grid(grid)
    ys, zs, xs = np.nonzero(surface_mask(grid, catalog, box))
    x0, y0, z0 = box.lo
    return np.column_stack((xs + x0, ys + y0, zs + z0)).astype(np.int64)
