"""Shared fixtures: trees at three scales, the intent registry, server helpers."""

from __future__ import annotations

import contextlib
import json
import socket
import subprocess
import sys
import time
from pathlib import Path

import httpx
import pytest

from cair.data import default_intents_path, demo_ontology_path
from cair.knowledge import compile_dialogue_tree, generate_synthetic_ontology, parse_ontology_file
from cair.planmgr import load_intent_registry_file

DATA_DIR = Path(__file__).parent / "data"
TOY_ONTOLOGY_PATH = DATA_DIR / "ontology_toy.json"


@pytest.fixture(scope="session")
def toy_ontology():
    return parse_ontology_file(TOY_ONTOLOGY_PATH)


@pytest.fixture(scope="session")
def toy_tree(toy_ontology):
    return compile_dialogue_tree(toy_ontology, "EN")


@pytest.fixture(scope="session")
def demo_tree():
    return compile_dialogue_tree(parse_ontology_file(demo_ontology_path()), "EN")


@pytest.fixture(scope="session")
def registry():
    return load_intent_registry_file(default_intents_path())


@pytest.fixture(scope="session")
def big_tree():
    """The full-scale tree: 2780 topics, 22240 sentences."""
    ontology = generate_synthetic_ontology(2780, 3, 8, 42)
    return compile_dialogue_tree(ontology, "EN")


@pytest.fixture(scope="session")
def big_tree_artifacts(tmp_path_factory, big_tree):
    """Compiled tree file plus its stats JSON, for subprocess servers and loadgen."""
    from cair.knowledge import estimate_max_state_size

    directory = tmp_path_factory.mktemp("bigtree")
    tree_path = directory / "dt.bin"
    tree_path.write_bytes(big_tree.serialize())
    stats = big_tree.stats()
    stats["max_state_bytes"] = estimate_max_state_size(big_tree)
    stats_path = directory / "stats.json"
    stats_path.write_text(json.dumps(stats), encoding="utf-8")
    return {"tree": tree_path, "stats": stats_path, "stats_doc": stats}


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@contextlib.contextmanager
def hub_server(*extra_args: str, timeout: float = 45.0):
    """Run a hub in a subprocess; yields its base URL."""
    port = free_port()
    command = [
        sys.executable,
        "-m",
        "cair.hub",
        "--host",
        "127.0.0.1",
        "--port",
        str(port),
        "--log-level",
        "warning",
        *extra_args,
    ]
    process = subprocess.Popen(command, stdout=subprocess.DEVNULL, stderr=subprocess.PIPE)
    base_url = f"http://127.0.0.1:{port}"
    try:
        deadline = time.monotonic() + timeout
        while True:
            if process.poll() is not None:
                stderr = process.stderr.read().decode() if process.stderr else ""
                raise RuntimeError(f"hub exited during startup: {stderr[-2000:]}")
            try:
                response = httpx.get(f"{base_url}/cair/v1/state", timeout=2.0)
                if response.status_code == 200:
                    break
            except httpx.HTTPError:
                pass
            if time.monotonic() > deadline:
                raise RuntimeError("hub did not become ready in time")
            time.sleep(0.1)
        yield base_url
    finally:
        process.terminate()
        try:
            process.wait(timeout=10)
        except subprocess.TimeoutExpired:
            process.kill()
            process.wait()
