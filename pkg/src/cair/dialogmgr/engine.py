"""The dialogue step: one conversational turn over the dialogue tree.

Control flow per turn, in order:

1. resolve a previously proposed activity if the user just accepted it;
2. apply knowledge-base actions (``setlikeliness`` updates the state's
   likeliness map; ``jump`` switches topic and returns its sentence
   immediately; unknown actions are skipped as an extension seam);
3. otherwise search the user sentence for topic keywords (two distinct
   keyword hits on distinct tokens are required) and switch to a matched
   topic, weighted by likeliness;
4. otherwise advance to the next topic if the current one is exhausted, or
   stay on it and produce the next queued sentence type.

A turn is a pure function of (sentence, state, kbplan, tree, registry,
seed); the caller's state object is never mutated.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from cair import seeding
from cair.knowledge.compiler import DialogueTree, DTNode
from cair.knowledge.model import LikelinessLevel
from cair.planmgr.model import Action, Intent
from cair.planmgr.matcher import match_intent
from cair.state import ClientState, StateError
from cair.textnorm import normalize_lower, slugify, tokenize, keyword_matches

logger = logging.getLogger("cair.dialogmgr")

# Tokens/phrases that open an affirmative answer to an activity proposal.
AFFIRMATIONS: tuple[str, ...] = (
    "yes",
    "yeah",
    "yep",
    "sure",
    "ok",
    "okay",
    "of course",
    "please do",
)


@dataclass
class DialogueOutcome:
    """Result of one turn: the sentence to say plus the updated state."""

    dialogue_sentence: str
    state: ClientState
    plan_sentence: str | None = None
    plan: list[Action] = field(default_factory=list)


def is_affirmative(sentence: str) -> bool:
    """True when the sentence opens with an affirmation token or phrase."""
    norm = normalize_lower(sentence)
    return any(norm == phrase or norm.startswith(phrase + " ") for phrase in AFFIRMATIONS)


def search_topics(sentence: str, tree: DialogueTree) -> list[str]:
    """Topics evidenced by at least two keyword patterns on distinct tokens.

    Returns matches in topic id order. A single token can satisfy only one
    keyword pattern, so two patterns hitting the same word do not count.
    """
    tokens = set(tokenize(sentence))
    if not tokens:
        return []
    matched = []
    for topic in tree.order:
        node = tree.node(topic)
        if len(node.keywords) < 2:
            continue
        hit_sets = []
        for pattern in node.keywords:
            hits = {token for token in tokens if keyword_matches(pattern, token)}
            if hits:
                hit_sets.append(hits)
        if len(hit_sets) >= 2 and len(set().union(*hit_sets)) >= 2:
            matched.append(topic)
    return sorted(matched)


def choose_sentence(
    node: DTNode, stype: str, used: set[int], seed: int
) -> tuple[str, int]:
    """Seeded uniform pick of an unused sentence of the requested type.

    When every sentence of the type has been used the pool resets for this
    pick (the engine must always have something to say); the caller detects
    that case by the returned index already being in ``used``. A type with
    no sentences at all falls back to the whole node.
    """
    indexes = node.indexes_by_type.get(stype)
    if not indexes:
        indexes = list(range(len(node.sentences)))
    candidates = [i for i in indexes if i not in used]
    if not candidates:
        candidates = list(indexes)
    pick = seeding.pick_index(seed, len(candidates), "sentence", node.topic, stype, tuple(candidates))
    index = candidates[pick]
    return node.sentences[index].text, index


def next_topic(tree: DialogueTree, current: str, state: ClientState, seed: int) -> str:
    """Successor topic once the current one is exhausted.

    Children first, then siblings (related-topic links), then a
    likeliness-weighted draw among the root's unfinished children; when
    everything is finished, any child of the root (sentence pools reset as
    they get re-picked).
    """
    node = tree.node(current)
    for child in node.children:
        if not _completed(tree, state, child):
            return child
    for sibling in node.siblings:
        if sibling in tree and not _completed(tree, state, sibling):
            return sibling
    root_children = tree.node(tree.root).children
    open_children = [c for c in root_children if not _completed(tree, state, c)]
    if open_children:
        weights = [_likeliness(tree, state, c).weight for c in open_children]
        return seeding.pick_weighted(seed, open_children, weights, "advance", current)
    if root_children:
        return seeding.pick(seed, root_children, "advance-reset", current)
    return current


def initial_state(tree: DialogueTree, seed: int | None = None) -> tuple[ClientState, str]:
    """Fresh conversation state plus the opening greeting.

    The greeting comes from the root's first-encounter sentences and is the
    only time that type is scheduled.
    """
    if seed is None:
        seed = seeding.random_seed()
    root = tree.node(tree.root)
    greeting, index = choose_sentence(root, "f", set(), seed)
    picked_type = root.sentences[index].type
    state = ClientState(
        topic=tree.root,
        last_type=picked_type,
        queue=seeding.shuffled(seed, [t for t in root.queueable_types if t != picked_type], "queue", tree.root),
        likeliness={},
        used={tree.root: {index}},
        pending_trigger=root.sentences[index].trigger if picked_type == "a" else None,
    )
    return state, greeting


def dialogue_step(
    sentence: str,
    state: ClientState,
    kbplan: list[Action],
    tree: DialogueTree,
    registry: list[Intent],
    seed: int | None = None,
) -> DialogueOutcome:
    """Run one turn; see the module docstring for the branch order."""
    if state.topic not in tree:
        raise StateError(f"state refers to unknown topic {state.topic!r}")
    if seed is None:
        seed = seeding.random_seed()
    state = state.copy()

    plan: list[Action] = []
    plan_sentence: str | None = None
    if state.last_type == "a" and state.pending_trigger and is_affirmative(sentence):
        accepted = match_intent(state.pending_trigger, registry)
        if accepted is not None:
            plan = accepted.plan
            plan_sentence = accepted.plan_sentence

    for action in kbplan:
        if action.action == "setlikeliness":
            topic = _resolve_topic(tree, action.args.get("topic", ""))
            if topic is not None:
                try:
                    level = LikelinessLevel.from_label(action.args.get("value", ""))
                except ValueError:
                    logger.debug("setlikeliness with bad value %r skipped", action.args.get("value"))
                    continue
                state.likeliness[topic] = level
        elif action.action == "jump":
            topic = _resolve_topic(tree, action.args.get("topic", ""))
            if topic is not None:
                text = _enter_topic(state, tree, topic, action.args.get("startsentence", ""), seed)
                return DialogueOutcome(text, state, plan_sentence, plan)
        else:
            # Extension seam: future knowledge-base actions pass through here.
            logger.debug("unknown knowledge-base action %r skipped", action.action)

    matched = search_topics(sentence, tree)
    if matched:
        weights = [_likeliness(tree, state, t).weight for t in matched]
        topic = seeding.pick_weighted(seed, matched, weights, "topic-pick", tuple(matched))
        text = _enter_topic(state, tree, topic, tree.node(topic).first_type, seed)
        return DialogueOutcome(text, state, plan_sentence, plan)

    if _completed(tree, state, state.topic):
        topic = next_topic(tree, state.topic, state, seed)
        text = _enter_topic(state, tree, topic, tree.node(topic).first_type, seed)
        return DialogueOutcome(text, state, plan_sentence, plan)

    text = _stay_on_topic(state, tree, seed)
    return DialogueOutcome(text, state, plan_sentence, plan)


def _completed(tree: DialogueTree, state: ClientState, topic: str) -> bool:
    """A topic is exhausted when every non-greeting sentence has been used."""
    required = tree.node(topic).completion_indexes()
    return required.issubset(state.used.get(topic, set()))


def _likeliness(tree: DialogueTree, state: ClientState, topic: str) -> LikelinessLevel:
    override = state.likeliness.get(topic)
    return override if override is not None else tree.node(topic).default_likeliness


def _resolve_topic(tree: DialogueTree, raw: str) -> str | None:
    """Map an action's topic argument (id or free text) onto a tree topic."""
    if raw in tree:
        return raw
    slug = slugify(raw)
    return slug if slug in tree else None


def _enter_topic(state: ClientState, tree: DialogueTree, topic: str, stype: str, seed: int) -> str:
    node = tree.node(topic)
    if stype not in node.indexes_by_type:
        stype = node.first_type
    text, index = _produce(state, node, stype, seed)
    state.topic = topic
    state.queue = seeding.shuffled(
        seed, [t for t in node.queueable_types if t != stype], "queue", topic
    )
    return text


def _stay_on_topic(state: ClientState, tree: DialogueTree, seed: int) -> str:
    node = tree.node(state.topic)
    used = state.used.get(state.topic, set())
    stype = None
    while state.queue:
        head = state.queue.pop(0)
        if any(i not in used for i in node.indexes_by_type.get(head, [])):
            stype = head
            break
    if stype is None:
        open_types = [
            t
            for t in node.queueable_types
            if any(i not in used for i in node.indexes_by_type[t])
        ]
        state.queue = seeding.shuffled(
            seed, open_types, "refill", state.topic, tuple(sorted(used))
        )
        stype = state.queue.pop(0)
    text, _ = _produce(state, node, stype, seed)
    return text


def _produce(state: ClientState, node: DTNode, stype: str, seed: int) -> tuple[str, int]:
    """Pick a sentence, record its index, refresh last-type and pending trigger."""
    used = state.used.setdefault(node.topic, set())
    text, index = choose_sentence(node, stype, used, seed)
    if index in used:
        # Exhaustion reset: clear the pool the pick was drawn from.
        pool = node.indexes_by_type.get(stype) or range(len(node.sentences))
        used.difference_update(pool)
    used.add(index)
    picked = node.sentences[index]
    state.last_type = picked.type
    state.pending_trigger = picked.trigger if picked.type == "a" else None
    return text, index
