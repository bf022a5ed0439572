"""Aggregation and file output for load reports.

Each run produces three artifacts: ``records.csv`` with every request,
``summary.json`` with per-group statistics and the threshold verdicts, and
``series.json`` with plot-ready points (x is payload bytes for baselines
and thread count for scalability runs) plus the one-second threshold line.
"""

from __future__ import annotations

import csv
import json
import statistics
from pathlib import Path

from cair.loadgen.runner import GroupResult, LoadReport, RequestRecord

THRESHOLD_MS_DEFAULT = 1000.0

# Reference values measured on the system's original cloud deployment
# (2 vCPU server, Wi-Fi clients). Environment-specific: recorded in every
# report as context, never asserted as pass bars.
REFERENCE_TIMINGS = {
    "baseline_full_payload_response_ms": 189.0,
    "baseline_full_payload_processing_ms": 107.4,
    "breakpoint_simultaneous_requests": 20,
    "breakpoint_distributed_over_10s": 250,
    "processing_plateau_ms": 450.0,
    "note": "reference deployment figures; hardware- and network-specific",
}

# Sizing assumption used when interpreting request rates: an engaged user
# speaks roughly six times per minute.
ASSUMED_USER_REQUESTS_PER_MINUTE = 6


def summarize(records: list[RequestRecord], threshold_ms: float = THRESHOLD_MS_DEFAULT) -> dict:
    """Mean/stddev of both time series over successful records."""
    ok = [r for r in records if r.ok]
    failed = len(records) - len(ok)
    if not ok:
        return {
            "requests": len(records),
            "failed": failed,
            "valid": False,
            "response_ms_mean": None,
            "response_ms_std": None,
            "processing_ms_mean": None,
            "processing_ms_std": None,
            "threshold_pass": False,
        }
    response = [r.response_time_ms for r in ok]
    processing = [r.processing_ms for r in ok]
    mean_response = statistics.fmean(response)
    return {
        "requests": len(records),
        "failed": failed,
        "valid": True,
        "response_ms_mean": mean_response,
        "response_ms_std": statistics.stdev(response) if len(response) > 1 else 0.0,
        "processing_ms_mean": statistics.fmean(processing),
        "processing_ms_std": statistics.stdev(processing) if len(processing) > 1 else 0.0,
        "threshold_pass": mean_response <= threshold_ms,
    }


def breakpoint_n(groups: list[GroupResult], threshold_ms: float) -> int | None:
    """Smallest tested N whose mean response time exceeds the threshold."""
    for group in sorted(groups, key=lambda g: g.x):
        summary = summarize(group.records, threshold_ms)
        if summary["valid"] and summary["response_ms_mean"] > threshold_ms:
            return int(group.x)
    return None


def report_summary(report: LoadReport) -> dict:
    threshold_ms = float(report.scenario.get("threshold_ms", THRESHOLD_MS_DEFAULT))
    group_docs = []
    for group in report.groups:
        doc = {"label": group.label, "x": group.x}
        doc.update(summarize(group.records, threshold_ms))
        group_docs.append(doc)
    summary = {
        "kind": report.kind,
        "scenario": report.scenario,
        "partial": report.partial,
        "valid": any(g["valid"] for g in group_docs),
        "threshold_ms": threshold_ms,
        "groups": group_docs,
        "assumed_user_requests_per_minute": ASSUMED_USER_REQUESTS_PER_MINUTE,
        "references": REFERENCE_TIMINGS,
    }
    if report.kind == "scalability":
        summary["breakpoint_n"] = breakpoint_n(report.groups, threshold_ms)
    return summary


def series_points(report: LoadReport) -> dict:
    threshold_ms = float(report.scenario.get("threshold_ms", THRESHOLD_MS_DEFAULT))
    points = []
    for group in report.groups:
        stats = summarize(group.records, threshold_ms)
        points.append(
            {
                "x": group.x,
                "label": group.label,
                "response_ms_mean": stats["response_ms_mean"],
                "response_ms_std": stats["response_ms_std"],
                "processing_ms_mean": stats["processing_ms_mean"],
                "processing_ms_std": stats["processing_ms_std"],
            }
        )
    return {
        "kind": report.kind,
        "x_axis": "request_payload_bytes" if report.kind == "baseline" else "concurrent_threads",
        "threshold_ms": threshold_ms,
        "points": points,
        "references": REFERENCE_TIMINGS,
    }


def emit_report(report: LoadReport, out_dir: str | Path) -> dict[str, Path]:
    """Write records.csv, summary.json, and series.json into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    records_path = out / "records.csv"
    with records_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            [
                "group",
                "label",
                "thread",
                "start_s",
                "offset_in_group_s",
                "response_time_ms",
                "processing_ms",
                "status",
                "error",
            ]
        )
        for group in report.groups:
            for r in group.records:
                writer.writerow(
                    [
                        r.group,
                        group.label,
                        r.thread,
                        f"{r.start_s:.6f}",
                        f"{r.offset_in_group_s:.6f}",
                        f"{r.response_time_ms:.3f}",
                        f"{r.processing_ms:.3f}",
                        r.status,
                        r.error,
                    ]
                )

    summary_path = out / "summary.json"
    summary_path.write_text(json.dumps(report_summary(report), indent=1), encoding="utf-8")

    series_path = out / "series.json"
    series_path.write_text(json.dumps(series_points(report), indent=1), encoding="utf-8")

    return {"records": records_path, "summary": summary_path, "series": series_path}
