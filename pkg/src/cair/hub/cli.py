"""Run the hub service.

Usage:
    cair-hub --ontology ontology.json --culture EN --port 8000
    cair-hub --tree dt.bin --host 0.0.0.0 --port 8000 --workers 4
"""

from __future__ import annotations

import argparse
import logging
import os

import uvicorn


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="cair-hub", description=__doc__)
    parser.add_argument("--ontology", help="ontology JSON document (default: packaged demo)")
    parser.add_argument("--tree", help="precompiled dialogue tree; overrides --ontology")
    parser.add_argument("--intents", help="intent registry JSON (default: packaged registry)")
    parser.add_argument("--culture", default="EN")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--workers", type=int, default=1, help="number of worker processes")
    parser.add_argument("--webchat-dir", help="directory with the built browser chat, served at /chat")
    parser.add_argument("--plan-url", help="remote plan manager endpoint (multi-process deployment)")
    parser.add_argument("--dialogue-url", help="remote dialogue manager endpoint")
    parser.add_argument(
        "--sim-work-ms",
        type=float,
        default=0.0,
        help="artificial per-request processing time, for load experiments on fast hardware",
    )
    parser.add_argument("--log-level", default="info")
    args = parser.parse_args(argv)

    # Workers are separate processes; configuration travels via environment.
    env = {
        "CAIR_ONTOLOGY": args.ontology or "",
        "CAIR_TREE": args.tree or "",
        "CAIR_INTENTS": args.intents or "",
        "CAIR_CULTURE": args.culture,
        "CAIR_SIM_WORK_MS": str(args.sim_work_ms),
        "CAIR_WEBCHAT_DIR": args.webchat_dir or "",
        "CAIR_PLAN_URL": args.plan_url or "",
        "CAIR_DIALOGUE_URL": args.dialogue_url or "",
    }
    os.environ.update(env)

    logging.basicConfig(level=args.log_level.upper(), format="%(message)s")
    uvicorn.run(
        "cair.hub.app:app_from_env",
        factory=True,
        host=args.host,
        port=args.port,
        workers=args.workers,
        log_level=args.log_level,
        access_log=False,
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
