"""Benchmark harness: batch runs, class criteria and report emission."""

from ..core import StopRule, target_hit
from .criteria import ClassReport, WinLoss, c1, c2, c3, c4, clamp_trials, half_quantile
from .report import class_table, emit_partition_snapshot, emit_report, read_report_csv
from .runner import ALGORITHMS, RunSettings, default_delta, run_class, run_problem

__all__ = [
    "StopRule",
    "target_hit",
    "ClassReport",
    "WinLoss",
    "c1",
    "c2",
    "c3",
    "c4",
    "clamp_trials",
    "half_quantile",
    "class_table",
    "emit_partition_snapshot",
    "emit_report",
    "read_report_csv",
    "ALGORITHMS",
    "RunSettings",
    "default_delta",
    "run_class",
    "run_problem",
]
