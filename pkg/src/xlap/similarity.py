"""String similarity primitives used by the fuzzy alignment pass."""

from __future__ import annotations

from difflib import SequenceMatcher


def levenshtein(a: str, b: str) -> int:
    """Minimum number of single-character insertions, deletions and
    substitutions turning ``a`` into ``b``. Two-row dynamic program."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cost = 0 if ca == cb else 1
            cur.append(min(cur[-1] + 1, prev[j] + 1, prev[j - 1] + cost))
        prev = cur
    return prev[-1]


def levenshtein_similarity(a: str, b: str) -> float:
    """Normalized edit similarity 1 - distance / max(len), in [0, 1]."""
    if not a and not b:
        return 1.0
    return 1.0 - levenshtein(a, b) / max(len(a), len(b))


def gestalt_similarity(a: str, b: str) -> float:
    """Ratcliff-Obershelp ratio 2M/(|a|+|b|) over recursively found longest
    common blocks. 1.0 iff the strings are equal, 0.0 when they share no
    characters."""
    if not a and not b:
        return 1.0
    # autojunk would silently degrade long inputs; windows here are short,
    # but keep scoring exact regardless of length.
    return SequenceMatcher(None, a, b, autojunk=False).ratio()
