"""Per-generator aggregation, information gain of metrics, Spearman rank
correlation and correlation tables against judge scores."""

from __future__ import annotations

import itertools
import math
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import stats as sps

from .errors import DegenerateError, MissingGeneratorError
from .io import SCORE_CATEGORIES, ScoreRecord

GLOBAL = "Global"
SCORE_COLUMNS = (*SCORE_CATEGORIES, "overall")
SIGNIFICANCE = 0.01
DEFAULT_PERMUTATIONS = 1_000_000
EXACT_MAX_N = 8
PERMUTATION_MAX_N = 10


@dataclass(frozen=True)
class SampleRow:
    generator: str
    sample: int
    values: Mapping[str, float]


class SampleSet:
    """Metric rows keyed by (generator, sample index)."""

    def __init__(self, rows: Iterable[SampleRow] = ()):
        self.rows: list[SampleRow] = []
        self._keys: set[tuple[str, int]] = set()
        for row in rows:
            self.add(row.generator, row.sample, row.values)

    def add(self, generator: str, sample: int, values) -> None:
        key = (generator, int(sample))
        if key in self._keys:
            raise ValueError(f"duplicate sample {sample} for generator {generator!r}")
        if hasattr(values, "as_dict"):
            values = values.as_dict()
        self._keys.add(key)
        self.rows.append(SampleRow(generator, int(sample), dict(values)))

    def __len__(self):
        return len(self.rows)

    @property
    def generators(self) -> list[str]:
        return list(dict.fromkeys(r.generator for r in self.rows))

    @property
    def metrics(self) -> list[str]:
        return list(self.rows[0].values) if self.rows else []

    def column(self, metric: str) -> np.ndarray:
        return np.array([r.values[metric] for r in self.rows], dtype=np.float64)

    def labels(self) -> list[str]:
        return [r.generator for r in self.rows]

    def by_generator(self, metric: str) -> dict[str, np.ndarray]:
        groups = defaultdict(list)
        for r in self.rows:
            groups[r.generator].append(r.values[metric])
        return {g: np.array(v, dtype=np.float64) for g, v in groups.items()}


# -- aggregation -------------------------------------------------------------

@dataclass(frozen=True)
class Summary:
    mean: float
    median: float
    variance: float
    std: float
    n: int

    @classmethod
    def of(cls, values) -> "Summary":
        v = np.asarray(values, dtype=np.float64)
        if v.size == 0:
            raise DegenerateError("cannot summarise zero samples")
        var = float(v.var(ddof=1)) if v.size > 1 else 0.0
        return cls(float(v.mean()), float(np.median(v)), var, math.sqrt(var), int(v.size))

    @property
    def single_sample(self) -> bool:
        return self.n == 1


@dataclass(frozen=True)
class Aggregate:
    """Per-generator summaries plus the pooled ``Global`` summary."""

    per_generator: dict
    pooled: dict
    flags: tuple[str, ...] = ()

    def table(self) -> dict[str, dict[str, Summary]]:
        return {**self.per_generator, GLOBAL: self.pooled}


def aggregate(samples: SampleSet, metrics: Sequence[str] | None = None) -> Aggregate:
    """Mean, median, sample variance and std per generator and pooled over rows."""
    if not len(samples):
        raise DegenerateError("no samples to aggregate")
    metrics = list(metrics or samples.metrics)
    per_gen: dict[str, dict[str, Summary]] = {}
    flags = []
    for g in samples.generators:
        per_gen[g] = {}
    for m in metrics:
        for g, values in samples.by_generator(m).items():
            per_gen[g][m] = Summary.of(values)
    for g, summaries in per_gen.items():
        if metrics and summaries[metrics[0]].single_sample:
            flags.append(f"generator {g!r} has a single sample; variance set to 0")
    pooled = {m: Summary.of(samples.column(m)) for m in metrics}
    return Aggregate(per_gen, pooled, tuple(flags))


def generator_means(samples: SampleSet, metrics: Sequence[str] | None = None) -> dict[str, dict[str, float]]:
    metrics = list(metrics or samples.metrics)
    out: dict[str, dict[str, float]] = {g: {} for g in samples.generators}
    for m in metrics:
        for g, v in samples.by_generator(m).items():
            out[g][m] = float(v.mean())
    return out


# -- information gain --------------------------------------------------------

def default_bins(n_samples: int) -> int:
    return max(2, math.isqrt(n_samples))


def equal_frequency_bins(values, bins: int) -> np.ndarray:
    """Bin index per value, ``bins`` groups of (nearly) equal size.

    Equal values always share a bin: a tie takes the bin of its first
    occurrence in sorted order.
    """
    v = np.asarray(values, dtype=np.float64)
    n = v.size
    order = np.argsort(v, kind="stable")
    ranked = v[order]
    first = np.searchsorted(ranked, ranked, side="left")
    out = np.empty(n, dtype=np.int64)
    out[order] = first * bins // n
    return out


def entropy_bits(counts) -> float:
    c = np.asarray(counts, dtype=np.float64).ravel()
    c = c[c > 0]
    if c.size == 0:
        return 0.0
    p = c / c.sum()
    return float(-(p * np.log2(p)).sum())


def mutual_information(labels: Sequence, bins: np.ndarray) -> float:
    """I(label; bin) in bits from joint counts."""
    _, gi = np.unique(np.asarray(labels), return_inverse=True)
    _, bi = np.unique(bins, return_inverse=True)
    joint = np.zeros((gi.max() + 1, bi.max() + 1))
    np.add.at(joint, (gi, bi), 1)
    mi = entropy_bits(joint.sum(axis=1)) + entropy_bits(joint.sum(axis=0)) - entropy_bits(joint)
    return max(0.0, mi)


def information_gain(samples: SampleSet, metric: str, bins: int | None = None) -> float:
    """Bits of information the binned metric carries about the generator."""
    labels = samples.labels()
    if len(set(labels)) < 2:
        raise DegenerateError("information gain needs at least two generators")
    values = samples.column(metric)
    bins = default_bins(values.size) if bins is None else int(bins)
    if bins < 2:
        raise ValueError("bins must be >= 2")
    if np.all(values == values[0]):
        warnings.warn(f"{metric}: all values identical, information gain is 0", stacklevel=2)
        return 0.0
    return mutual_information(labels, equal_frequency_bins(values, bins))


def information_gain_ranking(samples: SampleSet, metrics: Sequence[str] | None = None,
                             bins: int | None = None) -> list[tuple[str, float]]:
    """Metrics sorted by descending gain; ties keep input order."""
    metrics = list(metrics or samples.metrics)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        gains = [(m, information_gain(samples, m, bins)) for m in metrics]
    return sorted(gains, key=lambda mg: -mg[1])


# -- rank correlation --------------------------------------------------------

@dataclass(frozen=True)
class CorrelationCell:
    rho: float
    p: float
    n: int

    @property
    def significant(self) -> bool:
        return not math.isnan(self.p) and self.p < SIGNIFICANCE


def average_ranks(values) -> np.ndarray:
    return sps.rankdata(np.asarray(values, dtype=np.float64), method="average")


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    ac = a - a.mean()
    bc = b - b.mean()
    r = (ac @ bc) / math.sqrt((ac @ ac) * (bc @ bc))
    return float(min(1.0, max(-1.0, r)))


@lru_cache(maxsize=16)
def _all_permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int8)


@lru_cache(maxsize=4)
def _random_permutations(n: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    base = np.tile(np.arange(n, dtype=np.int8), (count, 1))
    return rng.permuted(base, axis=1)


def _null_abs_rho(rx: np.ndarray, ry: np.ndarray, perms: np.ndarray, chunk: int = 200_000) -> np.ndarray:
    xc = rx - rx.mean()
    yc = ry - ry.mean()
    denom = math.sqrt((xc @ xc) * (yc @ yc))
    out = np.empty(len(perms))
    for start in range(0, len(perms), chunk):
        block = yc[perms[start:start + chunk]]
        out[start:start + chunk] = np.abs(block @ xc) / denom
    return out


def spearman(x, y, *, seed: int = 0, permutations: int = DEFAULT_PERMUTATIONS) -> CorrelationCell:
    """Spearman's rho with average ranks for ties and a two-sided p-value.

    p comes from full enumeration of rank permutations for n <= 8, from
    ``permutations`` seeded random permutations for n <= 10, and from the
    t distribution with n - 2 degrees of freedom beyond that.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"x and y must be 1-D of equal length, got {x.shape} and {y.shape}")
    n = x.size
    if n < 3:
        raise ValueError(f"need at least 3 pairs, got {n}")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise DegenerateError("rank correlation undefined for a constant vector")
    rx, ry = average_ranks(x), average_ranks(y)
    rho = _pearson(rx, ry)
    # Guards against float noise when comparing permuted statistics.
    tol = 1e-12
    if n <= EXACT_MAX_N:
        null = _null_abs_rho(rx, ry, _all_permutations(n))
        p = np.count_nonzero(null >= abs(rho) - tol) / null.size
    elif n <= PERMUTATION_MAX_N:
        null = _null_abs_rho(rx, ry, _random_permutations(n, permutations, seed))
        p = (np.count_nonzero(null >= abs(rho) - tol) + 1) / (null.size + 1)
    else:
        p = t_approx_p(rho, n)
    return CorrelationCell(rho, float(min(1.0, p)), n)


def t_approx_p(rho: float, n: int) -> float:
    if abs(rho) >= 1.0:
        return 0.0
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    return float(2 * sps.t.sf(abs(t), n - 2))


# -- human scores ------------------------------------------------------------

@dataclass(frozen=True)
class HumanScores:
    """Per-generator category means across judges plus their overall mean."""

    table: dict = field(default_factory=dict)

    @property
    def generators(self) -> list[str]:
        return list(self.table)

    def __getitem__(self, generator):
        return self.table[generator]


def overall_score(records: Iterable[ScoreRecord], generators: Iterable[str] | None = None) -> HumanScores:
    """Average each category over judges; overall is the mean of the four."""
    groups: dict[str, list[ScoreRecord]] = defaultdict(list)
    for r in records:
        groups[r.generator].append(r)
    if generators is not None:
        missing = [g for g in generators if g not in groups]
        if missing:
            raise MissingGeneratorError(f"no score records for generator(s) {', '.join(missing)}")
    if not groups:
        raise MissingGeneratorError("no score records")
    table = {}
    for g, rows in groups.items():
        means = {c: sum(getattr(r, c) for r in rows) / len(rows) for c in SCORE_CATEGORIES}
        means["overall"] = sum(means[c] for c in SCORE_CATEGORIES) / len(SCORE_CATEGORIES)
        table[g] = means
    return HumanScores(table)


# -- correlation tables ------------------------------------------------------

MODES = ("metrics_vs_scores", "metrics_vs_metrics", "scores_vs_scores")


@dataclass(frozen=True)
class CorrelationTable:
    mode: str
    rows: tuple[str, ...]
    columns: tuple[str, ...]
    cells: dict  # (row, column) -> CorrelationCell
    warnings: tuple[str, ...] = ()

    def __getitem__(self, key) -> CorrelationCell:
        return self.cells[key]

    def records(self) -> list[dict]:
        return [
            {"row": r, "column": c, "rho": cell.rho, "p": cell.p, "n": cell.n,
             "significant": cell.significant}
            for (r, c), cell in self.cells.items()
        ]


def _check_generators(a: Iterable[str], b: Iterable[str]) -> list[str]:
    a, b = list(a), list(b)
    only_a = [g for g in a if g not in b]
    only_b = [g for g in b if g not in a]
    if only_a or only_b:
        parts = []
        if only_a:
            parts.append(f"missing from scores: {', '.join(only_a)}")
        if only_b:
            parts.append(f"missing from metrics: {', '.join(only_b)}")
        raise KeyError("generator sets differ; " + "; ".join(parts))
    return sorted(a)


def correlation_table(metric_means: Mapping[str, Mapping[str, float]] | None,
                      scores: HumanScores | None, mode: str, *, seed: int = 0,
                      permutations: int = DEFAULT_PERMUTATIONS) -> CorrelationTable:
    """Spearman correlations across generators for one of :data:`MODES`.

    Cells whose rho is undefined (a constant column) hold NaN and are listed
    in ``warnings``.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode in ("metrics_vs_scores", "metrics_vs_metrics"):
        if metric_means is None:
            raise ValueError(f"{mode} needs metric means")
    if mode in ("metrics_vs_scores", "scores_vs_scores"):
        if scores is None:
            raise ValueError(f"{mode} needs human scores")
    if mode == "metrics_vs_scores":
        gens = _check_generators(scores.generators, metric_means)
    elif mode == "metrics_vs_metrics":
        gens = sorted(metric_means)
    else:
        gens = sorted(scores.generators)

    def series(source, key):
        return np.array([source[g][key] for g in gens], dtype=np.float64)

    metric_names = tuple(next(iter(metric_means.values()))) if metric_means else ()
    if mode == "metrics_vs_scores":
        rows, cols = metric_names, SCORE_COLUMNS
        row_src, col_src = metric_means, scores.table
    elif mode == "metrics_vs_metrics":
        rows = cols = metric_names
        row_src = col_src = metric_means
    else:
        rows = cols = SCORE_COLUMNS
        row_src = col_src = scores.table

    cells = {}
    notes = []
    for r in rows:
        for c in cols:
            if (c, r) in cells and rows == cols:
                cells[(r, c)] = cells[(c, r)]
                continue
            try:
                cells[(r, c)] = spearman(series(row_src, r), series(col_src, c),
                                         seed=seed, permutations=permutations)
            except DegenerateError:
                cells[(r, c)] = CorrelationCell(math.nan, math.nan, len(gens))
                notes.append(f"{r} vs {c}: constant column, rho undefined")
    return CorrelationTable(mode, tuple(rows), tuple(cols), cells, tuple(notes))
