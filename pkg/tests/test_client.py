"""Client SDK and terminal chat: persistence, plan execution, placeholders."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from cair.client import ClientError, HubClient, LocalProfile, load_profile

from conftest import hub_server


@pytest.fixture(scope="module")
def server():
    with hub_server() as url:
        yield url


def make_profile(tmp_path, **kwargs) -> LocalProfile:
    return LocalProfile(state_path=tmp_path / "state.json", **kwargs)


class TestBootstrap:
    def test_writes_state_and_substitutes_greeting(self, server, tmp_path):
        profile = make_profile(tmp_path, placeholders={"$name": "Dorothy"})
        client = HubClient(server, profile, seed=1)
        try:
            greeting = client.bootstrap()
        finally:
            client.close()
        # Both demo greetings carry $name; it must be gone and Dorothy in.
        assert "$name" not in greeting
        assert "Dorothy" in greeting
        state = json.loads(profile.state_path.read_text())
        assert state["v"] == 1

    def test_unreachable_server_leaves_no_state(self, tmp_path):
        profile = make_profile(tmp_path)
        client = HubClient("http://127.0.0.1:9", profile, timeout=0.3)
        try:
            with pytest.raises(ClientError, match="cannot reach"):
                client.bootstrap()
        finally:
            client.close()
        assert not profile.state_path.exists()

    def test_cli_bootstrap_exit_codes(self, server, tmp_path):
        profile_path = tmp_path / "profile.json"
        profile_path.write_text(json.dumps({"placeholders": {"$name": "Ada"}}))
        ok = subprocess.run(
            [sys.executable, "-m", "cair.client", "bootstrap", "--server", server,
             "--profile", str(profile_path), "--seed", "3"],
            capture_output=True, text=True,
        )
        assert ok.returncode == 0
        assert ok.stdout.strip()
        bad = subprocess.run(
            [sys.executable, "-m", "cair.client", "bootstrap", "--server", "http://127.0.0.1:9",
             "--profile", str(profile_path)],
            capture_output=True, text=True,
        )
        assert bad.returncode == 2
        assert "cannot reach" in bad.stderr

    def test_corrupt_state_backed_up(self, server, tmp_path):
        profile = make_profile(tmp_path)
        profile.state_path.write_text("{torn file", encoding="utf-8")
        client = HubClient(server, profile, seed=2)
        try:
            assert client.load_state() is None
            client.bootstrap()
        finally:
            client.close()
        assert profile.state_path.with_suffix(".json.corrupt").exists()
        assert json.loads(profile.state_path.read_text())["v"] == 1


class TestConverseTurn:
    def test_unsupported_action_skipped(self, server, tmp_path):
        profile = make_profile(tmp_path)
        client = HubClient(server, profile, seed=5)
        try:
            client.bootstrap()
            result = client.converse_turn("Play the song Hey Brother")
        finally:
            client.close()
        assert result.skipped == ["play_song"]
        assert "[skipped: play_song]" in result.lines
        assert result.dialogue_sentence

    def test_capable_action_invokes_handler(self, server, tmp_path):
        played = []
        profile = make_profile(tmp_path, capabilities={"play_song"})
        client = HubClient(
            server, profile, seed=5, handlers={"play_song": lambda args: played.append(args)}
        )
        try:
            client.bootstrap()
            result = client.converse_turn("Play the song Hey Brother")
        finally:
            client.close()
        assert played == [{"title": "Hey Brother"}]
        assert result.executed == [("play_song", {"title": "Hey Brother"})]
        assert result.plan_sentence == "Playing Hey Brother for you."
        # Plan sentence renders before the action, the dialogue sentence last.
        assert result.lines[0] == result.plan_sentence
        assert result.lines[-1] == result.dialogue_sentence

    def test_state_persists_across_restart(self, server, tmp_path):
        profile = make_profile(tmp_path)
        first = HubClient(server, profile, seed=7)
        try:
            first.bootstrap()
            first.converse_turn("I love music", seed=100)
            state_after = json.loads(profile.state_path.read_text())
        finally:
            first.close()

        second = HubClient(server, profile, seed=7)
        try:
            assert second.load_state() == state_after
            result = second.converse_turn("tell me more", seed=101)
        finally:
            second.close()
        resumed = json.loads(profile.state_path.read_text())
        # The music likeliness override recorded before the restart survives.
        assert resumed["l"][1] == 5
        assert result.dialogue_sentence

    def test_network_failure_keeps_state(self, server, tmp_path):
        profile = make_profile(tmp_path)
        client = HubClient(server, profile, seed=8)
        try:
            client.bootstrap()
            before = profile.state_path.read_text()
            client._http.close()
            client._http = __import__("httpx").Client(timeout=0.2, base_url="http://127.0.0.1:9")
            client.server = "http://127.0.0.1:9"
            with pytest.raises(ClientError, match="turn failed"):
                client.converse_turn("hello there")
        finally:
            client.close()
        assert profile.state_path.read_text() == before

    def test_capability_monotonicity(self, server, tmp_path):
        utterances = ["Play the song Hey Brother", "I love music", "what else"]

        def run(capabilities: set[str]) -> list[str]:
            workdir = tmp_path / f"cap_{len(capabilities)}"
            workdir.mkdir()
            profile = LocalProfile(state_path=workdir / "state.json", capabilities=capabilities)
            client = HubClient(server, profile, handlers={"play_song": lambda args: None})
            try:
                client.bootstrap(seed=11)
                return [client.converse_turn(u, seed=200 + i).dialogue_sentence
                        for i, u in enumerate(utterances)]
            finally:
                client.close()

        assert run(set()) == run({"play_song"})

    def test_no_tmp_file_left_behind(self, server, tmp_path):
        profile = make_profile(tmp_path)
        client = HubClient(server, profile, seed=9)
        try:
            client.bootstrap()
            client.converse_turn("hello hello")
        finally:
            client.close()
        leftovers = [p for p in tmp_path.iterdir() if p.suffix == ".tmp"]
        assert leftovers == []


class TestProfiles:
    def test_profile_roundtrip(self, tmp_path):
        path = tmp_path / "profile.json"
        path.write_text(
            json.dumps(
                {
                    "placeholders": {"$name": "Dorothy"},
                    "capabilities": ["play_song", "play_song"],
                    "state_path": "custom.state.json",
                }
            )
        )
        profile = load_profile(path)
        assert profile.placeholders == {"$name": "Dorothy"}
        assert profile.capabilities == {"play_song"}
        assert profile.state_path == tmp_path / "custom.state.json"

    def test_bad_placeholder_key_rejected(self, tmp_path):
        path = tmp_path / "profile.json"
        path.write_text(json.dumps({"placeholders": {"name": "Dorothy"}}))
        with pytest.raises(ClientError, match="must start with"):
            load_profile(path)

    def test_substitution_longest_first(self):
        profile = LocalProfile(placeholders={"$name": "Ada", "$namesake": "Lovelace"})
        assert profile.substitute("Hi $namesake and $name") == "Hi Lovelace and Ada"


class TestMkstate:
    def test_cli_writes_valid_state(self, tmp_path, big_tree_artifacts):
        out = tmp_path / "state.json"
        result = subprocess.run(
            [sys.executable, "-m", "cair.client", "mkstate", "--fraction", "1/3",
             "--tree-stats", str(big_tree_artifacts["stats"]), "--out", str(out)],
            capture_output=True, text=True,
        )
        assert result.returncode == 0, result.stderr
        state = json.loads(out.read_text())
        assert len(state["l"]) == 926

    def test_cli_rejects_bad_fraction(self, tmp_path, big_tree_artifacts):
        result = subprocess.run(
            [sys.executable, "-m", "cair.client", "mkstate", "--fraction", "0.4",
             "--tree-stats", str(big_tree_artifacts["stats"]), "--out", str(tmp_path / "x.json")],
            capture_output=True, text=True,
        )
        assert result.returncode == 1
        assert "coverage fraction" in result.stderr
