"""Text normalization and keyword matching shared by the whole pipeline.

Normalization collapses whitespace and strips punctuation from the edges of
every token, leaving intra-word characters (apostrophes, hyphens) intact so
extracted values survive a render/match round trip. Keyword patterns are
lowercase tokens, optionally ending in ``*`` to match any continuation.
"""

from __future__ import annotations

import re
import string

_EDGE_PUNCT = string.punctuation
_WS = re.compile(r"\s+")


def normalize(text: str) -> str:
    """Case-preserving normal form: single-spaced tokens, edge punctuation gone."""
    tokens = []
    for raw in _WS.split(text):
        token = raw.strip(_EDGE_PUNCT)
        if token:
            tokens.append(token)
    return " ".join(tokens)


def normalize_lower(text: str) -> str:
    return normalize(text).lower()


def tokenize(text: str) -> list[str]:
    """Lowercased normalized tokens of a sentence."""
    norm = normalize_lower(text)
    return norm.split(" ") if norm else []


def slugify(text: str) -> str:
    """Topic-id form of free text: lowercase tokens joined by underscores."""
    return "_".join(tokenize(text))


def keyword_matches(pattern: str, token: str) -> bool:
    """True when a keyword pattern matches one token.

    A trailing ``*`` matches any (possibly empty) continuation of the token;
    otherwise the match is exact.
    """
    if pattern.endswith("*"):
        return token.startswith(pattern[:-1])
    return token == pattern
