"""Majority-vote fusion and exhaustive ensemble sweeps over classifier prediction runs."""

from .grouping import GroupReport, evaluate_groups, group_runs
from .ingest import Experiment, Manifest, load_experiment, load_manifest, load_run, load_truth
from .metrics import ConfusionMatrix, MetricsBundle, accuracy, confusion, per_class, score
from .model import (
    DEFAULT_TIE_POLICY,
    EnsembleSpec,
    GroundTruth,
    LabelSet,
    PredictionRun,
    RunSet,
    TiePolicy,
    align,
)
from .report import ReportDocument, ReportMeta, emit, emit_plot_data, emit_run_file
from .sweep import (
    BestPerSize,
    SweepReport,
    enumerate_combinations,
    individual_table,
    sweep_all,
    sweep_size,
)
from .voting import ABSTAIN, FuseResult, VoteContext, fuse, majority_vote, vote_counts

__version__ = "0.1.0"

__all__ = [
    "ABSTAIN",
    "BestPerSize",
    "ConfusionMatrix",
    "DEFAULT_TIE_POLICY",
    "EnsembleSpec",
    "Experiment",
    "FuseResult",
    "GroundTruth",
    "GroupReport",
    "LabelSet",
    "Manifest",
    "MetricsBundle",
    "PredictionRun",
    "ReportDocument",
    "ReportMeta",
    "RunSet",
    "SweepReport",
    "TiePolicy",
    "VoteContext",
    "accuracy",
    "align",
    "confusion",
    "emit",
    "emit_plot_data",
    "emit_run_file",
    "enumerate_combinations",
    "evaluate_groups",
    "fuse",
    "group_runs",
    "individual_table",
    "load_experiment",
    "load_manifest",
    "load_run",
    "load_truth",
    "majority_vote",
    "per_class",
    "score",
    "sweep_all",
    "sweep_size",
    "vote_counts",
]
