"""Client state wire codec and coverage-state synthesis."""

from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from cair.client.coverage import build_coverage_state
from cair.knowledge import LikelinessLevel
from cair.state import (
    ClientState,
    StateError,
    StateVersionError,
    decode_state,
    encode_state,
    full_coverage_state,
    state_to_wire,
)

TOY_TOPICS = ["beverage", "tea", "green_tea", "milk"]
QUEUE_CODES = ["p", "n", "y", "o", "a"]


@st.composite
def toy_states(draw):
    topic = draw(st.sampled_from(TOY_TOPICS))
    last_type = draw(st.sampled_from(["p", "y", "o", "f", "a"]))
    queue = draw(st.lists(st.sampled_from(QUEUE_CODES), max_size=4))
    likeliness = {
        t: LikelinessLevel(draw(st.integers(1, 5)))
        for t in draw(st.sets(st.sampled_from(TOY_TOPICS)))
    }
    # Toy nodes have 2-3 sentences; draw non-empty index subsets only, since
    # empty sets are dropped by the canonical encoding.
    used = {}
    for t in draw(st.sets(st.sampled_from(TOY_TOPICS))):
        indexes = draw(st.sets(st.integers(0, 1), min_size=1))
        used[t] = indexes
    pending = "play the song Daisy Bell" if last_type == "a" else None
    return ClientState(
        topic=topic,
        last_type=last_type,
        queue=queue,
        likeliness=likeliness,
        used=used,
        pending_trigger=pending,
    )


class TestCodec:
    @given(state=toy_states())
    def test_round_trip(self, state, toy_tree):
        decoded = decode_state(encode_state(state, toy_tree), toy_tree)
        assert decoded == state

    def test_wire_uses_short_keys_and_masks(self, toy_tree):
        state = ClientState(
            topic="tea",
            last_type="p",
            queue=["y"],
            likeliness={"tea": LikelinessLevel.VERY_HIGH},
            used={"tea": {0, 1}},
        )
        wire = state_to_wire(state, toy_tree)
        assert set(wire) == {"v", "t", "lt", "q", "l", "u", "p"}
        tea_index = toy_tree.index_of("tea")
        assert wire["l"][tea_index] == 5
        assert wire["u"][tea_index] == 0b11

    def test_trailing_zeros_trimmed(self, toy_tree):
        state = ClientState(topic="beverage", last_type="p", used={"beverage": {0}})
        wire = state_to_wire(state, toy_tree)
        assert wire["u"] == [1]
        assert wire["l"] == []

    def test_version_mismatch_is_distinct_error(self, toy_tree):
        wire = state_to_wire(full_coverage_state(toy_tree), toy_tree)
        wire["v"] = 99
        with pytest.raises(StateVersionError):
            decode_state(wire, toy_tree)

    def test_unknown_topic_rejected(self, toy_tree):
        wire = state_to_wire(ClientState(topic="tea", last_type="p"), toy_tree)
        wire["t"] = "quantum_physics"
        with pytest.raises(StateError, match="unknown current topic"):
            decode_state(wire, toy_tree)

    def test_mask_beyond_sentence_count_rejected(self, toy_tree):
        wire = state_to_wire(ClientState(topic="tea", last_type="p"), toy_tree)
        wire["u"] = [0, 1 << 40]
        with pytest.raises(StateError, match="unknown sentences"):
            decode_state(wire, toy_tree)

    def test_missing_field_rejected(self, toy_tree):
        wire = state_to_wire(ClientState(topic="tea", last_type="p"), toy_tree)
        del wire["q"]
        with pytest.raises(StateError, match="'q'"):
            decode_state(wire, toy_tree)

    def test_pending_consistency_enforced(self, toy_tree):
        wire = state_to_wire(ClientState(topic="tea", last_type="p"), toy_tree)
        wire["p"] = "play something"
        with pytest.raises(StateError, match="pending"):
            decode_state(wire, toy_tree)

    def test_copy_is_deep(self, toy_tree):
        state = ClientState(topic="tea", last_type="p", used={"tea": {0}})
        clone = state.copy()
        clone.used["tea"].add(1)
        clone.queue.append("y")
        assert state.used["tea"] == {0}
        assert state.queue == []


class TestCoverageStates:
    def test_fraction_counts_match_full_scale(self, big_tree_artifacts):
        stats = big_tree_artifacts["stats_doc"]
        for fraction, expected in (("0", 0), ("1/3", 926), ("2/3", 1853), ("1", 2780)):
            state = build_coverage_state(stats, fraction, seed=1)
            assert len(state["l"]) == expected
            assert len(state["u"]) == expected

    def test_states_validate_against_tree(self, big_tree, big_tree_artifacts):
        stats = big_tree_artifacts["stats_doc"]
        for fraction in ("0", "1/3", "2/3", "1"):
            decoded = decode_state(build_coverage_state(stats, fraction, seed=3), big_tree)
            assert decoded.topic == big_tree.root

    def test_full_coverage_size_in_band(self, big_tree_artifacts):
        stats = big_tree_artifacts["stats_doc"]
        state = build_coverage_state(stats, "1", seed=2)
        size = len(json.dumps(state, separators=(",", ":")).encode())
        assert 9083 <= size <= 27249

    def test_fresh_fraction_is_small(self, big_tree_artifacts):
        state = build_coverage_state(big_tree_artifacts["stats_doc"], "0", seed=2)
        assert len(json.dumps(state, separators=(",", ":")).encode()) <= 1024

    def test_unsupported_fraction_rejected(self, big_tree_artifacts):
        with pytest.raises(ValueError, match="coverage fraction"):
            build_coverage_state(big_tree_artifacts["stats_doc"], "1/4", seed=0)

    def test_deterministic_for_seed(self, big_tree_artifacts):
        stats = big_tree_artifacts["stats_doc"]
        assert build_coverage_state(stats, "1/3", 7) == build_coverage_state(stats, "1/3", 7)
