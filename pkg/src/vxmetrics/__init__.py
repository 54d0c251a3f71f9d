"""Metrics and statistics for procedurally generated voxel settlements."""

from .defaults import default_catalog, default_palette, default_recipes
from .errors import (
    BoundsError,
    CycleError,
    DegenerateError,
    EmptySettlementError,
    FormatError,
    LengthError,
    MissingGeneratorError,
    NoPairsError,
    PaletteError,
    RangeError,
    UnknownBlockError,
    VxmError,
)
from .io import (
    ScoreRecord,
    parse_box,
    parse_catalog,
    parse_changeset,
    parse_grid,
    parse_recipes,
    parse_scores,
    serialize_catalog,
    serialize_changeset,
    serialize_grid,
    serialize_recipes,
    write_report,
)
from .metrics import (
    METRIC_NAMES,
    Evaluation,
    MetricVector,
    Platform,
    Settlement,
    block_type_count,
    conditional_entropy,
    density,
    directional_entropies,
    evaluate_all,
    filling_ratio,
    frequency_metric,
    linearity,
    platform_decomposition,
    platform_size,
    relation_to_environment,
)
from .model import (
    CATEGORIES,
    BlockCatalog,
    BlockInfo,
    BoundingBox,
    ChangeSet,
    Palette,
    VoxelGrid,
    block_at,
    collect_surface_blocks,
    is_surface_block,
    surface_mask,
)
from .recipes import RecipeGraph
from .stats import (
    CorrelationCell,
    HumanScores,
    SampleSet,
    aggregate,
    correlation_table,
    information_gain,
    information_gain_ranking,
    overall_score,
    spearman,
)

__version__ = "0.1.0"
