"""Compression distances, tree clustering and word-distortion sweeps."""

from ._core import (
    Compressor,
    CompressorError,
    DecodeError,
    Dendrogram,
    Document,
    Error,
    ExperimentConfig,
    FrequencyTable,
    IoError,
    NcdMatrix,
    ParseError,
    SizeCache,
    SummaryRow,
    SweepResult,
    SweepRow,
    ValidationError,
    aggregate,
    apply_spec,
    clustering_error,
    complexity,
    default_p_grid,
    distort_text,
    emit,
    enumerate_trees,
    hill_climb,
    ideal_error,
    ideal_tree,
    load_corpus,
    ncd,
    ncd_matrix,
    neighbor_joining,
    quartet_score,
    random_tree,
    run_sweep,
    run_sweep_on,
    select_words,
    synthetic_corpus,
    tokenize,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
