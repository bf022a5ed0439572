"""Terminal chat client.

Usage:
    cair-chat --server http://127.0.0.1:8000 --profile profile.json [--culture EN] [--seed 7]
    cair-chat bootstrap --server URL --profile profile.json
    cair-chat mkstate --fraction 1/3 --tree-stats stats.json --out state.json

The profile file is JSON: {"placeholders": {"$name": "Dorothy"},
"capabilities": ["play_song"], "state_path": "dorothy.state.json"}.
Missing profile files are treated as an empty profile.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from cair.client.coverage import build_coverage_state
from cair.client.sdk import ClientError, HubClient, LocalProfile, load_profile

EXIT_CONNECT = 2


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "bootstrap":
        return _bootstrap(argv[1:])
    if argv and argv[0] == "mkstate":
        return _mkstate(argv[1:])
    return _chat(argv)


def _connection_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--server", required=True, help="hub base URL")
    parser.add_argument("--profile", required=True, help="profile JSON path")
    parser.add_argument("--culture", default=None)
    parser.add_argument("--seed", type=int, default=None)


def _make_client(args: argparse.Namespace) -> HubClient:
    profile_path = Path(args.profile)
    if profile_path.exists():
        profile = load_profile(profile_path)
    else:
        profile = LocalProfile(state_path=profile_path.with_suffix(".state.json"))
    handlers = {name: _print_stub(name) for name in profile.capabilities}
    return HubClient(
        args.server, profile, culture=args.culture, seed=args.seed, handlers=handlers
    )


def _print_stub(name: str):
    def handler(action_args: dict) -> None:
        rendered = ", ".join(f"{k}={v}" for k, v in action_args.items())
        print(f"  -> {name}({rendered})")

    return handler


def _bootstrap(argv: list[str]) -> int:
    parser = argparse.ArgumentParser(prog="cair-chat bootstrap")
    _connection_args(parser)
    args = parser.parse_args(argv)
    client = _make_client(args)
    try:
        greeting = client.bootstrap()
    except ClientError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONNECT
    finally:
        client.close()
    print(greeting)
    return 0


def _chat(argv: list[str]) -> int:
    parser = argparse.ArgumentParser(prog="cair-chat", description="interactive conversation")
    _connection_args(parser)
    args = parser.parse_args(argv)
    client = _make_client(args)
    try:
        if client.load_state() is None:
            try:
                greeting = client.bootstrap()
            except ClientError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_CONNECT
            print(f"agent: {greeting}")
        else:
            print("(resuming stored conversation)")
        while True:
            try:
                utterance = input("you> ").strip()
            except (EOFError, KeyboardInterrupt):
                print()
                return 0
            if not utterance:
                continue
            if utterance in {"/quit", "/exit"}:
                return 0
            try:
                result = client.converse_turn(utterance)
            except ClientError as exc:
                print(f"error: {exc}", file=sys.stderr)
                continue
            for line in result.lines:
                print(f"agent: {line}")
    finally:
        client.close()


def _mkstate(argv: list[str]) -> int:
    parser = argparse.ArgumentParser(prog="cair-chat mkstate")
    parser.add_argument("--fraction", required=True, help="coverage: 0, 1/3, 2/3, or 1")
    parser.add_argument("--tree-stats", required=True, help="stats JSON from 'cair-knowledge stats --json'")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    stats = json.loads(Path(args.tree_stats).read_text(encoding="utf-8"))
    try:
        state = build_coverage_state(stats, args.fraction, args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    Path(args.out).write_text(json.dumps(state, separators=(",", ":")), encoding="utf-8")
    print(f"state with coverage {args.fraction} written to {args.out} ({len(state['l'])} topics covered)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
