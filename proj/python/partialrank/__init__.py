"""Ranking systems from incomplete benchmark scores."""

from ._core import (
    AccumulatedMatrix,
    AggregationResult,
    ConfidenceReport,
    GuardError,
    LabeledData,
    PairConfidence,
    ParseError,
    PartialRanking,
    Ranking,
    ScoreKind,
    ScoreTable,
    ScoreTensor,
    ValidationError,
    __version__,
    accumulate_instances,
    accumulate_tasks,
    aggregate,
    agreement_analysis,
    borda_on_rankings,
    confidence_report,
    corrupt_missing,
    enumerate_compatible,
    factorial,
    generate_gumbel,
    hoeffding_halfwidth,
    kendall_tau,
    matrix_from_partial,
    matrix_from_partial_exact,
    p_exact,
    p_unobserved_beats_observed,
    parse_long_csv,
    parse_wide_matrix,
    partial_from_scores,
    removal_count,
    robustness_curve,
    run_cli,
    sample_compatible,
    scale_task,
    shuffle_count,
    topk_same,
    total_compatible,
    variation_count,
)

__all__ = [name for name in dir() if not name.startswith("_")]
