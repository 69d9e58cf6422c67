"""Text normalization shared by query matching, the local classifier, and
title similarity.

Rules, applied in order:
  1. lower-case;
  2. a hyphen between two alphanumeric characters becomes a single space
     (so "back-propagation" and "back propagation" tokenize identically);
  3. every other non-alphanumeric character is a token boundary.

No stemming and no singular/plural folding: "neural network" and
"neural networks" stay distinct tokens on purpose.
"""

from __future__ import annotations

import re

_HYPHEN_BETWEEN = re.compile(r"(?<=[0-9a-z])-(?=[0-9a-z])")
_TEXT_TOKEN = re.compile(r"[0-9a-z]+")
# pattern tokens additionally carry the wildcard characters * $ ?
_PATTERN_TOKEN = re.compile(r"[0-9a-z*$?]+")


def tokenize_text(text: str) -> list[str]:
    """Split free text into normalized tokens."""
    lowered = _HYPHEN_BETWEEN.sub(" ", text.lower())
    return _TEXT_TOKEN.findall(lowered)


def tokenize_pattern(text: str) -> list[str]:
    """Split a query phrase into normalized tokens, keeping wildcards."""
    lowered = _HYPHEN_BETWEEN.sub(" ", text.lower())
    return _PATTERN_TOKEN.findall(lowered)


def jaccard(tokens_a: set[str], tokens_b: set[str]) -> float:
    """Token-overlap similarity of two token sets (0.0 when both empty)."""
    if not tokens_a and not tokens_b:
        return 0.0
    union = len(tokens_a | tokens_b)
    return len(tokens_a & tokens_b) / union if union else 0.0
