"""Blind identity membership attacks against generative face models.

A counting attack flags an identity as a training member when a face
classifier predicts it often enough across a large batch of generated
samples. This package provides the attack engine, a parametric
generator/classifier simulator, evaluation (precision/recall/F1, PR
sweeps, histograms), exact intra-identity nearest-neighbor search, file
ingestion for real pipelines, and a config-driven experiment harness.
"""
from .attack import (
    AttackConfig,
    DecisionSet,
    FrequencyTable,
    OutOfRangeIdError,
    accumulate,
    decide,
    run_attack,
)
from .classifier import (
    ClassifierModel,
    ConcentratedSpread,
    UniformSpread,
    classify,
    classify_batch,
    preset,
)
from .evaluation import (
    EvalReport,
    HistogramExport,
    PRCurve,
    evaluate,
    f1,
    histogram,
    pr_sweep,
    precision_recall,
)
from .generator import (
    GeneratorModel,
    SaturatingSchedule,
    SourceIdentity,
    TabulatedSchedule,
    memorization_schedule,
    sample_batch,
    sample_codes,
    sample_identity,
)
from .harness import (
    AggregateResult,
    ExperimentConfig,
    config_from_dict,
    load_config,
    run_early_stopping,
    run_experiment,
    run_setting1,
    run_setting2,
)
from .identity import (
    DatasetSpec,
    IdentityId,
    NoBiasError,
    make_setting1_spec,
    make_setting2_spec,
    random_baseline_precision,
)
from .kernels import BACKEND
from .neighbors import EmbeddingSet, NNResult, contact_sheet_manifest, nearest_intra_identity

__version__ = "0.1.0"

__all__ = [
    "AggregateResult",
    "AttackConfig",
    "BACKEND",
    "ClassifierModel",
    "ConcentratedSpread",
    "DatasetSpec",
    "DecisionSet",
    "EmbeddingSet",
    "EvalReport",
    "ExperimentConfig",
    "FrequencyTable",
    "GeneratorModel",
    "HistogramExport",
    "IdentityId",
    "NNResult",
    "NoBiasError",
    "OutOfRangeIdError",
    "PRCurve",
    "SaturatingSchedule",
    "SourceIdentity",
    "TabulatedSchedule",
    "UniformSpread",
    "accumulate",
    "classify",
    "classify_batch",
    "config_from_dict",
    "contact_sheet_manifest",
    "decide",
    "evaluate",
    "f1",
    "histogram",
    "load_config",
    "make_setting1_spec",
    "make_setting2_spec",
    "memorization_schedule",
    "nearest_intra_identity",
    "pr_sweep",
    "precision_recall",
    "preset",
    "random_baseline_precision",
    "run_attack",
    "run_early_stopping",
    "run_experiment",
    "run_setting1",
    "run_setting2",
    "sample_batch",
    "sample_codes",
    "sample_identity",
]
