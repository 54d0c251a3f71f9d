"""Command-line harness: ``vxm evaluate|batch|infogain|correlate|report``.

Exit codes: 0 success, 2 parse error, 3 validation or semantic error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import io as vio
from .defaults import default_catalog, default_recipes
from .errors import BoundsError, FormatError, MissingGeneratorError, VxmError
from .metrics import METRIC_NAMES, Settlement, evaluate_all
from .model import BlockCatalog, BoundingBox
from .recipes import RecipeGraph
from .stats import (
    GLOBAL,
    MODES,
    SampleSet,
    aggregate,
    correlation_table,
    generator_means,
    information_gain_ranking,
    overall_score,
)

EXIT_PARSE = 2
EXIT_INVALID = 3
SAMPLE_COLUMNS = ("generator", "sample", "status", *METRIC_NAMES, "warnings")
SUMMARY_COLUMNS = ("generator", "metric", "mean", "median", "variance", "std", "n")


class ValidationError(VxmError):
    """Inputs parse but are semantically unusable."""


@dataclass(frozen=True)
class Run:
    generator: str
    sample: int
    grid: Path
    changes: Path
    box: BoundingBox | None


@dataclass(frozen=True)
class BatchManifest:
    runs: tuple[Run, ...]
    catalog: Path | None
    recipes: Path | None


def _diag(message: str) -> None:
    print(f"vxm: {message}", file=sys.stderr)


# -- loading -----------------------------------------------------------------

def _read(path) -> bytes:
    return Path(path).read_bytes()


def load_catalog(path=None) -> BlockCatalog:
    path = path or os.environ.get("VXM_CATALOG")
    return vio.parse_catalog(_read(path)) if path else default_catalog()


def load_recipes(path, catalog: BlockCatalog) -> RecipeGraph:
    return vio.parse_recipes(_read(path), catalog) if path else default_recipes()


def _box_from(value) -> BoundingBox | None:
    if value is None:
        return None
    if isinstance(value, str):
        return vio.parse_box(value)
    if isinstance(value, list) and len(value) == 6:
        return BoundingBox(tuple(value[:3]), tuple(value[3:]))
    raise FormatError(f"manifest: box must be six integers, got {value!r}")


def parse_manifest(path) -> BatchManifest:
    """JSON manifest; relative paths resolve against the manifest's folder::

        {"catalog": "catalog.json", "recipes": "recipes.json",
         "runs": [{"generator": "g1", "sample": 0, "grid": "g1_0.vxl",
                   "changes": "g1_0.csv", "box": [0, 0, 0, 64, 128, 64]}]}
    """
    path = Path(path)
    base = path.parent
    try:
        doc = json.loads(path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"manifest {path}: {exc.msg} at byte {exc.pos}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("runs"), list):
        raise FormatError(f"manifest {path}: expected an object with a runs list")

    def resolve(p):
        return None if p is None else (base / p)

    runs = []
    seen = set()
    for i, entry in enumerate(doc["runs"]):
        try:
            run = Run(str(entry["generator"]), int(entry["sample"]), resolve(entry["grid"]),
                      resolve(entry["changes"]), _box_from(entry.get("box")))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"manifest {path}: run {i} is malformed ({exc})") from None
        key = (run.generator, run.sample)
        if key in seen:
            raise ValidationError(f"manifest {path}: duplicate run {key}")
        seen.add(key)
        runs.append(run)
    manifest = BatchManifest(tuple(runs), resolve(doc.get("catalog")), resolve(doc.get("recipes")))
    missing = [str(p) for r in manifest.runs for p in (r.grid, r.changes) if not p.exists()]
    missing += [str(p) for p in (manifest.catalog, manifest.recipes) if p is not None and not p.exists()]
    if missing:
        raise ValidationError(f"manifest {path}: unresolvable path(s): {', '.join(missing)}")
    return manifest


def load_settlement(grid_path, changes_path, box: BoundingBox | None,
                    generator: str = "", sample: int = 0) -> Settlement:
    grid = vio.parse_grid(_read(grid_path))
    changes = vio.parse_changeset(_read(changes_path), grid)
    box = box or BoundingBox.of_grid(grid)
    return Settlement(grid, changes, box, generator, sample)


def sample_row(generator, sample, evaluation=None, error=None) -> dict:
    row = {"generator": generator, "sample": sample}
    if evaluation is None:
        row["status"] = "error"
        row.update({m: None for m in METRIC_NAMES})
        row["warnings"] = error
    else:
        row["status"] = "ok"
        row.update(evaluation.metrics.as_dict())
        row["warnings"] = "; ".join(evaluation.warnings)
    return row


def read_samples(path) -> SampleSet:
    """Successful rows of a samples CSV written by ``batch``."""
    rows = vio.read_table(_read(path))
    if rows and not set(METRIC_NAMES) <= set(rows[0]):
        raise FormatError(f"{path} line 1: header lacks metric columns")
    samples = SampleSet()
    for lineno, row in enumerate(rows, start=2):
        if row.get("status", "ok") != "ok":
            continue
        try:
            samples.add(row["generator"], int(row["sample"]),
                        {m: float(row[m]) for m in METRIC_NAMES})
        except (ValueError, TypeError) as exc:
            raise FormatError(f"{path} line {lineno}: {exc}") from None
    return samples


def _write(out, data: bytes) -> None:
    if out in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(out).write_bytes(data)


# -- commands ----------------------------------------------------------------

def cmd_evaluate(args) -> int:
    catalog = load_catalog(args.catalog)
    recipes = load_recipes(args.recipes, catalog)
    box = vio.parse_box(args.box) if args.box else None
    s = load_settlement(args.grid, args.changes, box)
    evaluation = evaluate_all(s, catalog, recipes)
    row = {**evaluation.metrics.as_dict(), "warnings": "; ".join(evaluation.warnings)}
    _write(args.out, vio.write_report([row], "csv", columns=(*METRIC_NAMES, "warnings")))
    return 0


def _evaluate_run(run: Run, catalog: BlockCatalog, recipes: RecipeGraph) -> dict:
    try:
        s = load_settlement(run.grid, run.changes, run.box, run.generator, run.sample)
        return sample_row(run.generator, run.sample, evaluate_all(s, catalog, recipes))
    except (VxmError, OSError) as exc:
        return sample_row(run.generator, run.sample, error=f"{type(exc).__name__}: {exc}")


def run_batch(manifest: BatchManifest, jobs: int = 1, catalog_path=None, recipes_path=None) -> list[dict]:
    """Evaluate every run; rows come back in manifest order."""
    catalog = load_catalog(manifest.catalog or catalog_path)
    recipes = load_recipes(manifest.recipes or recipes_path, catalog)
    n = len(manifest.runs)
    if jobs <= 1 or n <= 1:
        return [_evaluate_run(r, catalog, recipes) for r in manifest.runs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate_run, manifest.runs, [catalog] * n, [recipes] * n))


def summary_rows(samples: SampleSet) -> list[dict]:
    agg = aggregate(samples, METRIC_NAMES)
    rows = []
    for g, summaries in agg.table().items():
        for m in METRIC_NAMES:
            s = summaries[m]
            rows.append({"generator": g, "metric": m, "mean": s.mean, "median": s.median,
                         "variance": s.variance, "std": s.std, "n": s.n})
    return rows


def cmd_batch(args) -> int:
    manifest = parse_manifest(args.manifest)
    if not manifest.runs:
        raise ValidationError(f"manifest {args.manifest}: no runs")
    rows = run_batch(manifest, args.jobs, args.catalog, args.recipes)
    failed = [r for r in rows if r["status"] != "ok"]
    for r in failed:
        _diag(f"run {r['generator']}/{r['sample']} failed: {r['warnings']}")
    if len(failed) == len(rows):
        raise ValidationError("no run succeeded")
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    (out / "samples.csv").write_bytes(vio.write_report(rows, "csv", columns=SAMPLE_COLUMNS))
    samples = SampleSet()
    for r in rows:
        if r["status"] == "ok":
            samples.add(r["generator"], r["sample"], {m: r[m] for m in METRIC_NAMES})
    (out / "summary.csv").write_bytes(vio.write_report(summary_rows(samples), "csv", columns=SUMMARY_COLUMNS))
    return 0


def cmd_infogain(args) -> int:
    samples = read_samples(args.samples)
    if len(samples.generators) < 2:
        raise ValidationError("information gain needs samples from at least two generators")
    ranking = information_gain_ranking(samples, METRIC_NAMES, args.bins)
    rows = [{"metric": m, "information_gain": g} for m, g in ranking]
    _write(args.out, vio.write_report(rows, args.format, columns=("metric", "information_gain")))
    return 0


def cmd_correlate(args) -> int:
    means = None
    if args.mode != "scores_vs_scores":
        means = generator_means(read_samples(args.samples), METRIC_NAMES)
    scores = None
    if args.mode != "metrics_vs_metrics":
        if args.scores is None:
            raise ValidationError(f"--mode {args.mode} needs a scores file")
        records = vio.parse_scores(_read(args.scores))
        scores = overall_score(records, sorted(means) if means else None)
    try:
        table = correlation_table(means, scores, args.mode, seed=args.seed)
    except KeyError as exc:
        raise ValidationError(exc.args[0]) from None
    for note in table.warnings:
        _diag(note)
    columns = ("row", "column", "rho", "p", "n", "significant")
    _write(args.out, vio.write_report(table.records(), args.format, columns=columns))
    return 0


def cmd_report(args) -> int:
    """Per-generator statistic table: metrics as rows, generators as columns."""
    samples = read_samples(args.samples)
    if not len(samples):
        raise ValidationError(f"{args.samples}: no successful samples")
    table = aggregate(samples, METRIC_NAMES).table()
    columns = ("metric", *table)
    rows = [{"metric": m, **{g: getattr(table[g][m], args.stat) for g in table}} for m in METRIC_NAMES]
    _write(args.out, vio.write_report(rows, args.format, columns=columns))
    return 0


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vxm", description="Voxel settlement metrics and statistics.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--catalog", help="block catalog JSON (default: $VXM_CATALOG or built-in 1.12.2)")
        sp.add_argument("--recipes", help="recipe graph JSON (default: built-in 1.12.2)")
        sp.add_argument("--out", help="output path; stdout if omitted")

    e = sub.add_parser("evaluate", help="all metrics for one settlement")
    common(e)
    e.add_argument("--grid", required=True)
    e.add_argument("--changes", required=True)
    e.add_argument("--box", help="x0,y0,z0,x1,y1,z1 (upper corner exclusive); whole grid if omitted")
    e.set_defaults(func=cmd_evaluate)

    b = sub.add_parser("batch", help="evaluate every run in a manifest")
    common(b)
    b.add_argument("--manifest", required=True)
    b.add_argument("--jobs", type=int, default=1)
    b.set_defaults(func=cmd_batch)

    i = sub.add_parser("infogain", help="rank metrics by information gain")
    i.add_argument("samples")
    i.add_argument("--bins", type=int, default=None, help="default floor(sqrt(N))")
    i.add_argument("--format", choices=("csv", "markdown"), default="csv")
    i.add_argument("--out")
    i.set_defaults(func=cmd_infogain)

    c = sub.add_parser("correlate", help="Spearman correlation table")
    c.add_argument("samples", nargs="?")
    c.add_argument("scores", nargs="?")
    c.add_argument("--mode", choices=MODES, default="metrics_vs_scores")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--format", choices=("csv", "markdown"), default="csv")
    c.add_argument("--out")
    c.set_defaults(func=cmd_correlate)

    r = sub.add_parser("report", help="per-generator summary table")
    r.add_argument("samples")
    r.add_argument("--stat", choices=("mean", "median", "variance", "std"), default="mean")
    r.add_argument("--format", choices=("csv", "markdown"), default="markdown")
    r.add_argument("--out")
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "correlate" and args.mode == "scores_vs_scores" and args.scores is None:
        args.scores, args.samples = args.samples, None
    try:
        return args.func(args)
    except (ValidationError, BoundsError, MissingGeneratorError) as exc:
        _diag(str(exc))
        return EXIT_INVALID
    except (FormatError, OSError) as exc:
        name = getattr(exc, "filename", None)
        _diag(f"{name}: {exc}" if name and str(name) not in str(exc) else str(exc))
        return EXIT_PARSE
    except VxmError as exc:
        _diag(str(exc))
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
