"""Latency decomposition, throughput, and memory profiling of inference backends."""

from .records import (
    InsufficientTokens,
    InvalidTrace,
    NotEnoughGroups,
    PerfRecord,
    Precision,
    PrecisionComparison,
    compare_precisions,
    derive_record,
)
from .memory import (
    PeakSampler,
    ProcessNotObservable,
    peak_from_trajectory,
    sample_peak_memory,
    validate_interval,
)
from .bench import BackendLaunchFailed, BenchBackend, BenchPlan, run_bench

__all__ = [
    "InsufficientTokens",
    "InvalidTrace",
    "NotEnoughGroups",
    "PerfRecord",
    "Precision",
    "PrecisionComparison",
    "compare_precisions",
    "derive_record",
    "PeakSampler",
    "ProcessNotObservable",
    "peak_from_trajectory",
    "sample_peak_memory",
    "validate_interval",
    "BackendLaunchFailed",
    "BenchBackend",
    "BenchPlan",
    "run_bench",
]
