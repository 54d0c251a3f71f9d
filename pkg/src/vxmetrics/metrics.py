"""Settlement metrics: frequency counts, crafting relation, surface-based
configuration metrics and conditional block entropy."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .errors import BoundsError, DegenerateError, EmptySettlementError, NoPairsError
from .model import (
    CATEGORIES,
    BlockCatalog,
    BoundingBox,
    ChangeSet,
    VoxelGrid,
    surface_mask,
)
from .recipes import CraftingResolver, RecipeGraph


@dataclass(frozen=True)
class Settlement:
    """Final grid, the generator's edits and the region under evaluation."""

    grid: VoxelGrid
    changes: ChangeSet
    box: BoundingBox
    generator: str = ""
    sample: int = 0

    def __post_init__(self):
        self.box.check_within(self.grid)
        self.changes.check_within(self.grid)
        inside = self.box.contains(self.changes.x, self.changes.y, self.changes.z)
        if not np.all(inside):
            i = int(np.argmin(inside))
            raise BoundsError(f"edit at ({self.changes.x[i]}, {self.changes.y[i]}, "
                              f"{self.changes.z[i]}) lies outside the box {self.box.lo}..{self.box.hi}")


@dataclass(frozen=True)
class MetricVector:
    light: float
    defense: float
    functional: float
    aesthetic: float
    food: float
    block_type_count: int
    relation_to_environment: int
    density: float
    filling_ratio: float
    linearity_x: float
    linearity_z: float
    platform_size: float
    level_entropy: float
    settlement_entropy: float

    @classmethod
    def names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def as_dict(self) -> dict:
        return asdict(self)

    def values(self) -> tuple:
        return tuple(getattr(self, n) for n in self.names())


METRIC_NAMES = MetricVector.names()


@dataclass(frozen=True)
class Evaluation:
    """Result of :func:`evaluate_all`.

    ``entropy_axes`` holds the per-axis entropies behind the two averaged
    entropy metrics, keyed ``level``/``settlement`` then ``x``/``y``/``z``.
    """

    metrics: MetricVector
    warnings: tuple[str, ...] = ()
    entropy_axes: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Platform:
    height: int
    members: np.ndarray  # (n, 3) x, y, z

    @property
    def size(self) -> int:
        return len(self.members)


# -- frequency based ---------------------------------------------------------

def _added_after(s: Settlement, catalog: BlockCatalog) -> np.ndarray:
    lookup = catalog.lookup(s.grid.palette)
    after = s.changes.after
    return after[s.changes.added_mask(lookup)]


def frequency_metric(s: Settlement, catalog: BlockCatalog, category: str) -> float:
    """Share of added blocks that belong to ``category``."""
    if category not in CATEGORIES:
        raise ValueError(f"unknown category {category!r}; expected one of {CATEGORIES}")
    added = _added_after(s, catalog)
    if added.size == 0:
        raise EmptySettlementError("settlement has no added blocks")
    member = catalog.lookup(s.grid.palette).category[category]
    return float(np.count_nonzero(member[added]) / added.size)


def block_type_count(s: Settlement, catalog: BlockCatalog) -> int:
    return int(np.unique(_added_after(s, catalog)).size)


def relation_to_environment(s: Settlement, catalog: BlockCatalog, recipes: RecipeGraph,
                            *, present_ids: np.ndarray | None = None) -> int:
    """Sum of crafting depths over the distinct added block types.

    A type scores only when all its ingredients are available in the final
    grid, either present, mined-class, or craftable from available ones.
    """
    palette = s.grid.palette
    if present_ids is None:
        present_ids = np.flatnonzero(np.bincount(s.grid.flat, minlength=len(palette)))
    resolver = CraftingResolver(
        recipes,
        present=(palette.names[i] for i in present_ids),
        mined=(n for n, info in catalog.blocks.items() if info.mined),
    )
    return sum(resolver.depth(palette.names[i]) for i in np.unique(_added_after(s, catalog)))


# -- configuration based -----------------------------------------------------

def density(grid: VoxelGrid, catalog: BlockCatalog, box: BoundingBox | None = None) -> float:
    box = box or BoundingBox.of_grid(grid)
    return _density(surface_mask(grid, catalog, box), box)


def _density(mask: np.ndarray, box: BoundingBox) -> float:
    return float(np.count_nonzero(mask) / box.volume)


def filling_ratio(grid: VoxelGrid, catalog: BlockCatalog, box: BoundingBox | None = None) -> float:
    box = box or BoundingBox.of_grid(grid)
    box.check_within(grid)
    empty = catalog.lookup(grid.palette).empty
    region = grid.cells[box.slices]
    return float(np.count_nonzero(~empty[region]) / box.volume)


def _surface_coords(mask: np.ndarray, box: BoundingBox) -> np.ndarray:
    ys, zs, xs = np.nonzero(mask)
    x0, y0, z0 = box.lo
    return np.column_stack((xs + x0, ys + y0, zs + z0))


def linearity(grid: VoxelGrid, catalog: BlockCatalog, box: BoundingBox | None = None,
              axis: str = "x") -> float:
    """Mean squared residual of surface heights against a least-squares line.

    Surface blocks are projected onto the vertical plane spanned by ``axis``
    (``"x"`` or ``"z"``) and height.
    """
    box = box or BoundingBox.of_grid(grid)
    return _linearity(_surface_coords(surface_mask(grid, catalog, box), box), axis)


def _linearity(coords: np.ndarray, axis: str) -> float:
    col = {"x": 0, "z": 2}[axis.lower()]
    return line_fit_residual(coords[:, col], coords[:, 1])


def line_fit_residual(a, y) -> float:
    a = np.asarray(a, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if a.size < 2 or np.all(a == a[0]):
        raise DegenerateError(f"need >= 2 points with distinct abscissa, got {a.size} point(s)")
    da = a - a.mean()
    dy = y - y.mean()
    slope = (da @ dy) / (da @ da)
    resid = dy - slope * da
    return float(resid @ resid / a.size)


def platform_decomposition(grid: VoxelGrid, catalog: BlockCatalog,
                           box: BoundingBox | None = None) -> list[Platform]:
    """Maximal 4-connected, equal-height groups of surface blocks."""
    box = box or BoundingBox.of_grid(grid)
    mask = surface_mask(grid, catalog, box)
    labels, count = _flood_label(mask)
    return _platforms(labels, count, box)


def _flood_label(mask: np.ndarray) -> tuple[np.ndarray, int]:
    """Label 4-connected components within each horizontal layer.

    Iterative flood fill over the flattened ``(y, z, x)`` mask. Labels start
    at 1, numbered in order of each component's first canonical index.
    """
    _, d, w = mask.shape
    surface = mask.reshape(-1).astype(np.uint8).tobytes()
    seen = bytearray(len(surface))
    labels = np.zeros(len(surface), dtype=np.int32)
    count = 0
    for seed in np.flatnonzero(mask).tolist():
        if seen[seed]:
            continue
        count += 1
        seen[seed] = 1
        stack = [seed]
        members = []
        while stack:
            i = stack.pop()
            members.append(i)
            col = i % w
            row = (i // w) % d
            for j, ok in ((i - 1, col > 0), (i + 1, col < w - 1),
                          (i - w, row > 0), (i + w, row < d - 1)):
                if ok and surface[j] and not seen[j]:
                    seen[j] = 1
                    stack.append(j)
        labels[members] = count
    return labels.reshape(mask.shape), count


def _platforms(labels: np.ndarray, count: int, box: BoundingBox) -> list[Platform]:
    if count == 0:
        return []
    ys, zs, xs = np.nonzero(labels)
    lab = labels[ys, zs, xs]
    order = np.argsort(lab, kind="stable")
    x0, y0, z0 = box.lo
    coords = np.column_stack((xs + x0, ys + y0, zs + z0))[order]
    splits = np.cumsum(np.bincount(lab, minlength=count + 1)[1:])[:-1]
    return [Platform(int(m[0, 1]), m) for m in np.split(coords, splits)]


def platform_size(grid: VoxelGrid, catalog: BlockCatalog, box: BoundingBox | None = None) -> float:
    box = box or BoundingBox.of_grid(grid)
    return _platform_size(surface_mask(grid, catalog, box))


def _platform_size(mask: np.ndarray) -> float:
    _, count = _flood_label(mask)
    if count == 0:
        raise DegenerateError("no surface blocks, so no platforms")
    return float(np.count_nonzero(mask) / count)


# -- entropy -----------------------------------------------------------------

AXES = ("x", "y", "z")
# Axis positions in the (y, z, x) cell array.
_ARRAY_AXIS = {"x": 2, "y": 0, "z": 1}
_STEP = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}


def conditional_entropy_bits(joint: np.ndarray) -> float:
    """H(next | current) in bits from a square count matrix ``joint[cur, next]``."""
    joint = np.asarray(joint, dtype=np.float64)
    total = joint.sum()
    if total == 0:
        return 0.0
    rows = joint.sum(axis=1, keepdims=True)
    nz = joint > 0
    cond = np.where(nz, joint / np.where(rows > 0, rows, 1), 1.0)
    return float(-(joint[nz] * np.log2(cond[nz])).sum() / total)


def pair_counts(s: Settlement, catalog: BlockCatalog, scope: str = "level") -> dict[str, np.ndarray]:
    """Joint counts of (block, next block) per axis, both non-empty.

    For ``scope="settlement"`` the first block of each pair must sit on an
    edited position. Both positions must lie in the box.
    """
    grid, box = s.grid, s.box
    k = len(grid.palette)
    nonempty = ~catalog.lookup(grid.palette).empty
    region = grid.cells[box.slices]
    out = {}
    if scope == "level":
        for axis in AXES:
            ax = _ARRAY_AXIS[axis]
            n = region.shape[ax]
            cur = np.take(region, np.arange(n - 1), axis=ax).reshape(-1)
            nxt = np.take(region, np.arange(1, n), axis=ax).reshape(-1)
            keep = nonempty[cur] & nonempty[nxt]
            codes = cur[keep].astype(np.int64) * k + nxt[keep]
            out[axis] = np.bincount(codes, minlength=k * k).reshape(k, k)
    elif scope == "settlement":
        ch = s.changes
        cur = grid.cells[ch.y, ch.z, ch.x] if len(ch) else np.zeros(0, dtype=np.int64)
        for axis in AXES:
            dx, dy, dz = _STEP[axis]
            nx, ny, nz = ch.x + dx, ch.y + dy, ch.z + dz
            inside = box.contains(nx, ny, nz)
            nxt = grid.cells[ny[inside], nz[inside], nx[inside]]
            c = cur[inside]
            keep = nonempty[c] & nonempty[nxt]
            codes = c[keep].astype(np.int64) * k + nxt[keep]
            out[axis] = np.bincount(codes, minlength=k * k).reshape(k, k)
    else:
        raise ValueError(f"scope must be 'level' or 'settlement', got {scope!r}")
    return out


def directional_entropies(s: Settlement, catalog: BlockCatalog, scope: str = "level") -> dict[str, float]:
    counts = pair_counts(s, catalog, scope)
    if not any(c.any() for c in counts.values()):
        raise NoPairsError(f"no adjacent non-empty pairs in {scope} scope")
    return {axis: conditional_entropy_bits(c) for axis, c in counts.items()}


def conditional_entropy(s: Settlement, catalog: BlockCatalog, scope: str = "level") -> float:
    """Mean over x, y, z of the conditional entropy of the next block type.

    An axis without any counted pair contributes 0 bits.
    """
    per_axis = directional_entropies(s, catalog, scope)
    return float(sum(per_axis[a] for a in AXES) / 3)


# -- everything --------------------------------------------------------------

def evaluate_all(s: Settlement, catalog: BlockCatalog, recipes: RecipeGraph) -> Evaluation:
    """Compute all 14 metrics; degenerate ones become 0 plus a warning."""
    warnings: list[str] = []
    values: dict[str, float] = {}

    try:
        for category in CATEGORIES:
            values[category] = frequency_metric(s, catalog, category)
    except EmptySettlementError as exc:
        warnings.append(f"frequency metrics: {exc}")
        values.update({c: 0.0 for c in CATEGORIES})

    values["block_type_count"] = block_type_count(s, catalog)
    values["relation_to_environment"] = relation_to_environment(s, catalog, recipes)

    mask = surface_mask(s.grid, catalog, s.box)
    values["density"] = _density(mask, s.box)
    values["filling_ratio"] = filling_ratio(s.grid, catalog, s.box)

    coords = _surface_coords(mask, s.box)
    for axis in ("x", "z"):
        try:
            values[f"linearity_{axis}"] = _linearity(coords, axis)
        except DegenerateError as exc:
            warnings.append(f"linearity_{axis}: {exc}")
            values[f"linearity_{axis}"] = 0.0

    try:
        values["platform_size"] = _platform_size(mask)
    except DegenerateError as exc:
        warnings.append(f"platform_size: {exc}")
        values["platform_size"] = 0.0

    axes = {}
    for scope in ("level", "settlement"):
        try:
            per_axis = directional_entropies(s, catalog, scope)
            axes[scope] = per_axis
            values[f"{scope}_entropy"] = float(sum(per_axis[a] for a in AXES) / 3)
        except NoPairsError as exc:
            warnings.append(f"{scope}_entropy: {exc}")
            values[f"{scope}_entropy"] = 0.0

    return Evaluation(MetricVector(**values), tuple(warnings), axes)
