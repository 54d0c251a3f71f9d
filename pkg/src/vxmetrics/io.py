"""Parsers and serializers for grids, changesets, catalogs, recipes, scores
and tabular reports.

Every error message names the byte offset or line number of the fault.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BoundsError,
    FormatError,
    LengthError,
    PaletteError,
    RangeError,
    UnknownBlockError,
)
from .model import CATEGORIES, BlockCatalog, BlockInfo, BoundingBox, ChangeSet, Palette, VoxelGrid
from .recipes import RecipeGraph

GRID_FORMAT = "vxl"
GRID_VERSION = 1
CATALOG_FORMAT = "vxm-catalog"
SCORE_CATEGORIES = ("adaptability", "functionality", "narrative", "aesthetic")
SCORE_HEADER = ("generator", "judge", "year", *SCORE_CATEGORIES)


def _text(data: bytes | str, what: str) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"{what}: invalid UTF-8 at byte {exc.start}") from None


def _json(text: str, what: str):
    def no_duplicates(pairs):
        out = {}
        for key, value in pairs:
            if key in out:
                raise PaletteError(f"{what}: duplicate key {key!r} at byte {_offset(text, key)}")
            out[key] = value
        return out

    try:
        return json.loads(text, object_pairs_hook=no_duplicates)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{what}: {exc.msg} at byte {exc.pos} (line {exc.lineno})") from None


def _offset(text: str, key: str) -> int:
    pos = text.find(f'"{key}"')
    return max(pos, 0)


# -- grids -------------------------------------------------------------------

def parse_grid(data: bytes | str) -> VoxelGrid:
    text = _text(data, "grid")
    doc = _json(text, "grid")
    if not isinstance(doc, dict):
        raise FormatError("grid: top level must be an object at byte 0")
    if doc.get("format") != GRID_FORMAT:
        raise FormatError(f"grid: format tag {doc.get('format')!r} is not {GRID_FORMAT!r} "
                          f"at byte {_offset(text, 'format')}")
    if doc.get("version") != GRID_VERSION:
        raise FormatError(f"grid: unsupported version {doc.get('version')!r} "
                          f"at byte {_offset(text, 'version')}")
    size = doc.get("size")
    try:
        sx, sy, sz = (size[k] for k in "xyz")
        if not all(isinstance(v, int) and not isinstance(v, bool) and v > 0 for v in (sx, sy, sz)):
            raise TypeError
    except (TypeError, KeyError):
        raise FormatError(f"grid: size must hold positive integers x, y, z "
                          f"at byte {_offset(text, 'size')}") from None
    palette_doc = doc.get("palette")
    if not isinstance(palette_doc, dict):
        raise FormatError(f"grid: palette must be an object at byte {_offset(text, 'palette')}")
    try:
        palette = Palette.from_mapping(palette_doc)
    except PaletteError as exc:
        raise PaletteError(f"grid: {exc} at byte {_offset(text, 'palette')}") from None

    blocks_at = _offset(text, "blocks")
    blocks = doc.get("blocks")
    if not isinstance(blocks, list):
        raise FormatError(f"grid: blocks must be a list at byte {blocks_at}")
    try:
        runs = np.array(blocks, dtype=np.int64).reshape(-1, 2) if blocks else np.zeros((0, 2), np.int64)
        if len(runs) != len(blocks):
            raise ValueError
    except (ValueError, TypeError, OverflowError):
        raise FormatError(f"grid: blocks must be [id, run] integer pairs at byte {blocks_at}") from None
    bad = runs[:, 1] <= 0
    if bad.any():
        raise LengthError(f"grid: run {int(np.argmax(bad))} has non-positive length "
                          f"(blocks at byte {blocks_at})")
    bad = (runs[:, 0] < 0) | (runs[:, 0] >= len(palette))
    if bad.any():
        i = int(np.argmax(bad))
        raise PaletteError(f"grid: run {i} uses id {runs[i, 0]} not in the palette "
                           f"(blocks at byte {blocks_at})")
    volume = sx * sy * sz
    total = int(runs[:, 1].sum())
    if total != volume:
        kind = "short of" if total < volume else "beyond"
        raise LengthError(f"grid: runs cover {total} cells, {abs(volume - total)} {kind} "
                          f"{sx}x{sy}x{sz} = {volume} (blocks at byte {blocks_at})")
    cells = np.repeat(runs[:, 0], runs[:, 1]).reshape(sy, sz, sx)
    return VoxelGrid(cells, palette)


def rle_runs(flat: np.ndarray) -> np.ndarray:
    """Maximal runs of a 1-D array as an ``(n, 2)`` array of (value, length)."""
    flat = np.asarray(flat)
    if flat.size == 0:
        return np.zeros((0, 2), dtype=np.int64)
    starts = np.flatnonzero(np.concatenate(([True], flat[1:] != flat[:-1])))
    lengths = np.diff(np.append(starts, flat.size))
    return np.column_stack((flat[starts].astype(np.int64), lengths))


def serialize_grid(grid: VoxelGrid) -> bytes:
    """Canonical single-line document: fixed key order, maximal runs."""
    sx, sy, sz = grid.size
    palette = ",".join(f"{json.dumps(n)}:{i}" for i, n in enumerate(grid.palette.names))
    runs = rle_runs(grid.flat)
    blocks = "],[".join(f"{v},{n}" for v, n in runs.tolist())
    return (f'{{"format":"{GRID_FORMAT}","version":{GRID_VERSION},'
            f'"size":{{"x":{sx},"y":{sy},"z":{sz}}},'
            f'"palette":{{{palette}}},"blocks":[[{blocks}]]}}\n').encode("utf-8")


# -- changesets --------------------------------------------------------------

def parse_changeset(data: bytes | str, grid: VoxelGrid) -> ChangeSet:
    """One ``x,y,z,before,after`` record per line; blank lines are skipped.

    Duplicate coordinates collapse to the last edit; the number merged is
    kept on ``ChangeSet.collapsed``.
    """
    text = _text(data, "changeset")
    n = len(grid.palette)
    edits = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 5:
            raise FormatError(f"changeset line {lineno}: expected 5 fields, got {len(parts)}")
        try:
            x, y, z, before, after = (int(p) for p in parts)
        except ValueError:
            raise FormatError(f"changeset line {lineno}: non-integer field in {line!r}") from None
        if not grid.in_bounds(x, y, z):
            raise BoundsError(f"changeset line {lineno}: ({x}, {y}, {z}) outside grid of size {grid.size}")
        for label, bid in (("before", before), ("after", after)):
            if not 0 <= bid < n:
                raise UnknownBlockError(f"changeset line {lineno}: {label} id {bid} not in the palette")
        edits.append((x, y, z, before, after))
    return ChangeSet.from_edits(edits)


def serialize_changeset(changes: ChangeSet) -> bytes:
    return "".join(f"{x},{y},{z},{b},{a}\n" for x, y, z, b, a in changes).encode("utf-8")


# -- catalogs ----------------------------------------------------------------

def parse_catalog(data: bytes | str) -> BlockCatalog:
    """JSON catalog::

        {"format": "vxm-catalog", "version": 1,
         "blocks": [{"name": "air", "empty": true, "solid": false,
                     "mined": false, "categories": []}, ...],
         "unresolved": ["light:Lantern"]}
    """
    text = _text(data, "catalog")
    doc = _json(text, "catalog")
    if not isinstance(doc, dict) or doc.get("format") != CATALOG_FORMAT:
        raise FormatError(f"catalog: format tag must be {CATALOG_FORMAT!r} at byte {_offset(text, 'format')}")
    if doc.get("version") != 1:
        raise FormatError(f"catalog: unsupported version at byte {_offset(text, 'version')}")
    entries = doc.get("blocks")
    if not isinstance(entries, list):
        raise FormatError(f"catalog: blocks must be a list at byte {_offset(text, 'blocks')}")
    blocks = {}
    for i, entry in enumerate(entries):
        where = f"catalog block {i} (blocks at byte {_offset(text, 'blocks')})"
        if not isinstance(entry, dict) or not isinstance(entry.get("name"), str):
            raise FormatError(f"{where}: entry needs a string name")
        name = entry["name"]
        if name in blocks:
            raise PaletteError(f"{where}: duplicate block name {name!r}")
        cats = entry.get("categories", [])
        if not isinstance(cats, list) or set(cats) - set(CATEGORIES):
            raise FormatError(f"{where}: categories must be a subset of {list(CATEGORIES)}")
        flags = {}
        for key, default in (("solid", True), ("empty", False), ("mined", False)):
            value = entry.get(key, default)
            if not isinstance(value, bool):
                raise FormatError(f"{where}: {key} must be true or false")
            flags[key] = value
        blocks[name] = BlockInfo(categories=frozenset(cats), **flags)
    empties = [n for n, b in blocks.items() if b.empty]
    if len(empties) != 1:
        raise PaletteError(f"catalog: expected exactly one empty block, found {empties} "
                           f"(blocks at byte {_offset(text, 'blocks')})")
    try:
        return BlockCatalog(blocks, unresolved=doc.get("unresolved", ()))
    except PaletteError as exc:
        raise PaletteError(f"catalog: {exc} (blocks at byte {_offset(text, 'blocks')})") from None


def serialize_catalog(catalog: BlockCatalog) -> bytes:
    doc = {
        "format": CATALOG_FORMAT,
        "version": 1,
        "blocks": [
            {"name": name, "empty": info.empty, "solid": info.solid, "mined": info.mined,
             "categories": [c for c in CATEGORIES if c in info.categories]}
            for name, info in catalog.blocks.items()
        ],
        "unresolved": list(catalog.unresolved),
    }
    return (json.dumps(doc, indent=1) + "\n").encode("utf-8")


# -- recipes -----------------------------------------------------------------

def parse_recipes(data: bytes | str, catalog: BlockCatalog | None = None) -> RecipeGraph:
    """JSON object mapping a block name to its list of ingredient names."""
    text = _text(data, "recipes")
    doc = _json(text, "recipes")
    if not isinstance(doc, dict):
        raise FormatError("recipes: top level must be an object at byte 0")
    for name, parts in doc.items():
        if not isinstance(parts, list) or not all(isinstance(p, str) for p in parts):
            raise FormatError(f"recipes: ingredients of {name!r} must be a list of names "
                              f"at byte {_offset(text, name)}")
        if catalog is not None:
            for n in (name, *parts):
                if n not in catalog:
                    raise UnknownBlockError(f"recipes: block {n!r} not in the catalog "
                                            f"at byte {_offset(text, name)}")
    return RecipeGraph(doc)


def serialize_recipes(recipes: RecipeGraph) -> bytes:
    doc = {name: list(parts) for name, parts in recipes.ingredients.items()}
    return (json.dumps(doc, indent=1) + "\n").encode("utf-8")


# -- scores ------------------------------------------------------------------

@dataclass(frozen=True)
class ScoreRecord:
    generator: str
    judge: str
    year: int
    adaptability: float
    functionality: float
    narrative: float
    aesthetic: float


def parse_scores(data: bytes | str) -> list[ScoreRecord]:
    text = _text(data, "scores")
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise FormatError("scores line 1: missing header") from None
    if tuple(header) != SCORE_HEADER:
        raise FormatError(f"scores line 1: header must be {','.join(SCORE_HEADER)}")
    records = []
    for row in reader:
        lineno = reader.line_num
        if not any(cell.strip() for cell in row):
            continue
        if len(row) != len(SCORE_HEADER):
            raise FormatError(f"scores line {lineno}: expected {len(SCORE_HEADER)} fields, got {len(row)}")
        generator, judge, year, *cats = (cell.strip() for cell in row)
        if any(c == "" for c in cats):
            raise FormatError(f"scores line {lineno}: missing category score")
        try:
            year_i = int(year)
            values = [float(c) for c in cats]
        except ValueError:
            raise FormatError(f"scores line {lineno}: non-numeric year or score") from None
        for name, v in zip(SCORE_CATEGORIES, values):
            if not (0.0 <= v <= 10.0):
                raise RangeError(f"scores line {lineno}: {name} = {v} outside [0, 10]")
        records.append(ScoreRecord(generator, judge, year_i, *values))
    return records


def serialize_scores(records: Iterable[ScoreRecord]) -> bytes:
    rows = [dict(zip(SCORE_HEADER, (r.generator, r.judge, r.year, r.adaptability,
                                    r.functionality, r.narrative, r.aesthetic)))
            for r in records]
    return write_report(rows, "csv", columns=SCORE_HEADER)


# -- boxes -------------------------------------------------------------------

def parse_box(text: str) -> BoundingBox:
    """``x0,y0,z0,x1,y1,z1`` with the upper corner exclusive."""
    try:
        values = [int(v) for v in text.split(",")]
    except ValueError:
        raise FormatError(f"box {text!r}: expected six integers") from None
    if len(values) != 6:
        raise FormatError(f"box {text!r}: expected six integers, got {len(values)}")
    return BoundingBox(tuple(values[:3]), tuple(values[3:]))


# -- reports -----------------------------------------------------------------

def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return "nan"
        return format(float(value), ".15g")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "" if value is None else str(value)


def write_report(rows: Sequence[Mapping], fmt: str = "csv", columns: Sequence[str] | None = None) -> bytes:
    """Render homogeneous rows as CSV or a pipe-delimited markdown table.

    Column order is ``columns`` if given, else the first row's key order.
    """
    if columns is None:
        if not rows:
            raise ValueError("columns are required for an empty report")
        columns = list(rows[0])
    columns = list(columns)
    for i, row in enumerate(rows):
        if list(row) != columns and set(row) != set(columns):
            raise ValueError(f"row {i} has columns {list(row)}, expected {columns}")
    cells = [[format_value(row[c]) for c in columns] for row in rows]
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(cells)
        return out.getvalue().encode("utf-8")
    if fmt == "markdown":
        def line(values):
            return "| " + " | ".join(v.replace("|", "\\|") for v in values) + " |"
        lines = [line(columns), "|" + "|".join("---" for _ in columns) + "|"]
        lines.extend(line(r) for r in cells)
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}; expected csv or markdown")


def read_table(data: bytes | str) -> list[dict[str, str]]:
    """Read a CSV report back as a list of string dicts."""
    text = _text(data, "table")
    return list(csv.DictReader(io.StringIO(text)))
