"""Concurrent request generation with per-request isolated timing.

Two experiment shapes:

* baseline: a single simulated user sends evenly spaced requests, once per
  payload-coverage scenario;
* scalability: N simulated users start across a ramp-up window (0 means
  simultaneously) and each sends one request; the group repeats after a
  fixed gap.

Response time spans request transmission to full response receipt on a
monotonic clock; server processing time comes back in the
``X-CAIR-Processing-Ms`` header, so their gap isolates network and queuing
delay. Requests are deterministic given the scenario seed, which lets a
serial replay verify that load never changes response content.
"""

from __future__ import annotations

import asyncio
import hashlib
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

import httpx

from cair import seeding
from cair.client.coverage import build_coverage_state, parse_fraction
from cair.hub.app import PROCESSING_HEADER

DEFAULT_SENTENCE = "tell me something interesting"
DEFAULT_GROUP_GAP_S = 5.0


@dataclass
class LoadScenario:
    """Parameters of one experiment run."""

    kind: str  # "baseline" | "scalability"
    target: str
    payloads: list[Fraction] = field(default_factory=lambda: [Fraction(1)])
    thread_counts: list[int] = field(default_factory=lambda: [1])
    ramp_up_s: float = 0.0
    iterations: int = 30
    spacing_s: float = 5.0
    group_gap_s: float = DEFAULT_GROUP_GAP_S
    seed: int = 0
    sentence: str = DEFAULT_SENTENCE
    keep_alive: bool = False
    timeout_s: float = 120.0
    threshold_ms: float = 1000.0

    def validate(self) -> None:
        if self.kind not in ("baseline", "scalability"):
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.ramp_up_s < 0:
            raise ValueError("ramp_up_s must be >= 0")
        if any(n < 1 for n in self.thread_counts):
            raise ValueError("thread counts must be >= 1")
        self.payloads = [parse_fraction(p) for p in self.payloads]

    def to_doc(self) -> dict:
        return {
            "kind": self.kind,
            "target": self.target,
            "payloads": [str(p) for p in self.payloads],
            "thread_counts": list(self.thread_counts),
            "ramp_up_s": self.ramp_up_s,
            "iterations": self.iterations,
            "spacing_s": self.spacing_s,
            "group_gap_s": self.group_gap_s,
            "seed": self.seed,
            "sentence": self.sentence,
            "keep_alive": self.keep_alive,
            "timeout_s": self.timeout_s,
            "threshold_ms": self.threshold_ms,
        }


@dataclass
class RequestRecord:
    """Timing of one request."""

    group: int
    thread: int
    start_s: float
    offset_in_group_s: float
    response_time_ms: float
    processing_ms: float
    status: int
    error: str = ""
    body_sha256: str = ""

    @property
    def ok(self) -> bool:
        return self.status == 200 and not self.error


@dataclass
class GroupResult:
    """All records of one scenario point (one payload size or one N)."""

    label: str
    x: float
    records: list[RequestRecord]


@dataclass
class LoadReport:
    kind: str
    scenario: dict
    groups: list[GroupResult]
    partial: bool = False


def build_request(
    seed: int,
    stats: dict,
    payload: Fraction,
    sentence: str,
    thread: int,
    sequence: int,
) -> dict:
    """Deterministic request body for (seed, thread, sequence).

    Every simulated user gets its own independently built coverage state, and
    the per-request seed makes server responses replayable byte for byte.
    """
    state = build_coverage_state(stats, payload, seed=seeding.derive(seed, "state", thread) % (1 << 62))
    return {
        "client_sentence": sentence,
        "client_state": state,
        "seed": seeding.derive(seed, "turn", thread, sequence) % (1 << 62),
    }


def run_baseline(scenario: LoadScenario, stats: dict) -> LoadReport:
    """Evenly spaced single-user requests, one group per payload scenario."""
    scenario.validate()
    if scenario.kind != "baseline":
        raise ValueError("run_baseline requires a baseline scenario")
    return asyncio.run(_baseline(scenario, stats))


def run_scalability(scenario: LoadScenario, stats: dict) -> LoadReport:
    """Thread groups across the ramp-up window, one group result per N."""
    scenario.validate()
    if scenario.kind != "scalability":
        raise ValueError("run_scalability requires a scalability scenario")
    return asyncio.run(_scalability(scenario, stats))


async def _baseline(scenario: LoadScenario, stats: dict) -> LoadReport:
    url = scenario.target.rstrip("/") + "/cair/v1/hub"
    groups: list[GroupResult] = []
    partial = False
    async with _client(scenario) as client:
        epoch = time.perf_counter()
        for payload in scenario.payloads:
            records: list[RequestRecord] = []
            group_epoch = time.perf_counter()
            payload_bytes = 0
            for i in range(scenario.iterations):
                planned = group_epoch + i * scenario.spacing_s
                now = time.perf_counter()
                if planned > now:
                    await asyncio.sleep(planned - now)
                body = build_request(scenario.seed, stats, payload, scenario.sentence, 0, i)
                record = await _one_request(client, scenario, url, body, epoch, group=len(groups), thread=0, group_epoch=group_epoch)
                payload_bytes = max(payload_bytes, record_request_size(body))
                records.append(record)
                if record.error and record.status == 0:
                    # Connection lost: abort this run, mark the missing rest.
                    for j in range(i + 1, scenario.iterations):
                        records.append(
                            RequestRecord(
                                group=len(groups),
                                thread=0,
                                start_s=time.perf_counter() - epoch,
                                offset_in_group_s=0.0,
                                response_time_ms=0.0,
                                processing_ms=0.0,
                                status=0,
                                error="missing: run aborted after connection loss",
                            )
                        )
                    partial = True
                    break
            groups.append(GroupResult(label=f"payload={payload}", x=float(payload_bytes), records=records))
            if partial:
                break
    return LoadReport(kind="baseline", scenario=scenario.to_doc(), groups=groups, partial=partial)


async def _scalability(scenario: LoadScenario, stats: dict) -> LoadReport:
    url = scenario.target.rstrip("/") + "/cair/v1/hub"
    payload = scenario.payloads[0]
    groups: list[GroupResult] = []
    partial = False
    async with _client(scenario) as client:
        epoch = time.perf_counter()
        for group_index, n_threads in enumerate(scenario.thread_counts):
            records: list[RequestRecord] = []
            bodies = [
                build_request(scenario.seed, stats, payload, scenario.sentence, k, 0)
                for k in range(n_threads)
            ]
            for iteration in range(scenario.iterations):
                for k in range(n_threads):
                    bodies[k]["seed"] = seeding.derive(scenario.seed, "turn", k, iteration) % (1 << 62)
                group_epoch = time.perf_counter()

                async def worker(k: int, body: dict, group_epoch: float) -> RequestRecord:
                    offset = k * scenario.ramp_up_s / n_threads
                    now = time.perf_counter()
                    if group_epoch + offset > now:
                        await asyncio.sleep(group_epoch + offset - now)
                    return await _one_request(
                        client, scenario, url, body, epoch,
                        group=group_index, thread=k, group_epoch=group_epoch,
                    )

                batch = await asyncio.gather(
                    *(worker(k, bodies[k], group_epoch) for k in range(n_threads))
                )
                records.extend(batch)
                if any(r.status == 0 for r in batch):
                    partial = True
                if iteration + 1 < scenario.iterations:
                    await asyncio.sleep(scenario.group_gap_s)
            groups.append(GroupResult(label=f"N={n_threads}", x=float(n_threads), records=records))
    return LoadReport(kind="scalability", scenario=scenario.to_doc(), groups=groups, partial=partial)


def record_request_size(body: dict) -> int:
    return len(json.dumps(body, separators=(",", ":")).encode("utf-8"))


def _client(scenario: LoadScenario) -> httpx.AsyncClient:
    limits = httpx.Limits(
        max_connections=max(512, max(scenario.thread_counts, default=1) * 2),
        max_keepalive_connections=512 if scenario.keep_alive else 0,
    )
    headers = {} if scenario.keep_alive else {"Connection": "close"}
    return httpx.AsyncClient(timeout=scenario.timeout_s, limits=limits, headers=headers)


async def _one_request(
    client: httpx.AsyncClient,
    scenario: LoadScenario,
    url: str,
    body: dict,
    epoch: float,
    group: int,
    thread: int,
    group_epoch: float,
) -> RequestRecord:
    start = time.perf_counter()
    try:
        response = await client.post(url, json=body)
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        processing_ms = float(response.headers.get(PROCESSING_HEADER, 0.0))
        return RequestRecord(
            group=group,
            thread=thread,
            start_s=start - epoch,
            offset_in_group_s=start - group_epoch,
            response_time_ms=elapsed_ms,
            processing_ms=processing_ms,
            status=response.status_code,
            error="" if response.status_code == 200 else f"http {response.status_code}",
            body_sha256=hashlib.sha256(response.content).hexdigest(),
        )
    except httpx.HTTPError as exc:
        return RequestRecord(
            group=group,
            thread=thread,
            start_s=start - epoch,
            offset_in_group_s=start - group_epoch,
            response_time_ms=(time.perf_counter() - start) * 1000.0,
            processing_ms=0.0,
            status=0,
            error=f"{type(exc).__name__}: {exc}",
        )
