"""Load experiments: baseline and scalability runs, reports, capacity sizing."""

from cair.loadgen.runner import (
    GroupResult,
    LoadReport,
    LoadScenario,
    RequestRecord,
    build_request,
    run_baseline,
    run_scalability,
)
from cair.loadgen.report import REFERENCE_TIMINGS, emit_report, summarize
from cair.loadgen.sizing import size_deployment

__all__ = [
    "GroupResult",
    "LoadReport",
    "LoadScenario",
    "RequestRecord",
    "build_request",
    "run_baseline",
    "run_scalability",
    "REFERENCE_TIMINGS",
    "emit_report",
    "summarize",
    "size_deployment",
]
