"""Edit-distance features (4-5) and English morphological features (6-9).

Chinese sequences are compared code point by code point; English
translation strings are compared character by character (features 4-5)
or as lowercase whitespace tokens (features 6-9).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

MISSING = None

#: Tokens whose initials an expanded form may omit when matched against
#: an abbreviation ("United States of America" -> "USA").
_ABBREV_STOPWORDS = frozenset({"of", "the", "and", "for"})


class Granularity(Enum):
    CHAR = "char"
    WORD = "word"


@dataclass(frozen=True)
class SymbolSequence:
    """An ordered symbol sequence tagged with its comparison granularity."""

    symbols: tuple[str, ...]
    granularity: Granularity

    @classmethod
    def from_chars(cls, text: str) -> "SymbolSequence":
        return cls(tuple(text), Granularity.CHAR)

    @classmethod
    def from_words(cls, text: str) -> "SymbolSequence":
        return cls(tuple(text.lower().split()), Granularity.WORD)

    def __len__(self) -> int:
        return len(self.symbols)


def _levenshtein(a, b) -> int:
    # Two-row dynamic program, unit costs.
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, sym_a in enumerate(a, start=1):
        current = [i]
        for j, sym_b in enumerate(b, start=1):
            cost = 0 if sym_a == sym_b else 1
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost)
            )
        previous = current
    return previous[-1]


def edit_distance(a: SymbolSequence, b: SymbolSequence) -> int:
    """Levenshtein distance (insert/delete/substitute, unit costs)."""
    if a.granularity is not b.granularity:
        raise ValueError(
            f"granularity mismatch: {a.granularity.value} vs {b.granularity.value}"
        )
    return _levenshtein(a.symbols, b.symbols)


def relative_edit_distance(a: SymbolSequence, b: SymbolSequence) -> float:
    """Edit distance normalized by the longer sequence's length, in [0, 1]."""
    longest = max(len(a), len(b))
    if longest == 0:
        raise ValueError("relative edit distance undefined for two empty sequences")
    return edit_distance(a, b) / longest


def _relative_char_distance(s: str, t: str) -> float:
    return relative_edit_distance(
        SymbolSequence.from_chars(s), SymbolSequence.from_chars(t)
    )


def set_edit_distance(enlist_a, enlist_b, aggregation: str = "max"):
    """Aggregate relative edit distance over all cross pairs of two
    translation sets, at character granularity.

    ``aggregation`` selects the worst pair ("max") or the best-matching
    pair ("min"). Returns None (missing) if either set is empty.
    """
    if aggregation not in ("max", "min"):
        raise ValueError(f"aggregation must be 'max' or 'min', got {aggregation!r}")
    if not enlist_a or not enlist_b:
        return MISSING
    distances = [
        _relative_char_distance(s, t) for s in enlist_a for t in enlist_b
    ]
    return max(distances) if aggregation == "max" else min(distances)


def _token_sets(enlist) -> set[str]:
    tokens: set[str] = set()
    for translation in enlist:
        tokens.update(translation.lower().split())
    return tokens


def duplicate_word(enlist_a, enlist_b):
    """1 iff the lowercase token sets of the two translation sets intersect."""
    if not enlist_a or not enlist_b:
        return MISSING
    return 1 if _token_sets(enlist_a) & _token_sets(enlist_b) else 0


def _is_subsequence(shorter: str, longer: str) -> bool:
    it = iter(longer)
    return all(ch in it for ch in shorter)


def subsequence(enlist_a, enlist_b):
    """1 iff some cross pair has one string a (possibly non-contiguous)
    character subsequence of the other, case-insensitively."""
    if not enlist_a or not enlist_b:
        return MISSING
    for s in enlist_a:
        for t in enlist_b:
            u, v = s.lower(), t.lower()
            if len(u) > len(v):
                u, v = v, u
            if _is_subsequence(u, v):
                return 1
    return 0


def _acronym(term: str) -> str:
    return "".join(token[0] for token in term.split() if token).casefold()


def first_characters_match(enlist_a, enlist_b):
    """1 iff some cross pair has identical per-token initial strings
    ("liver cancer" / "lung cancer" both yield "lc")."""
    if not enlist_a or not enlist_b:
        return MISSING
    for s in enlist_a:
        for t in enlist_b:
            acr_s, acr_t = _acronym(s), _acronym(t)
            if acr_s and acr_s == acr_t:
                return 1
    return 0


def _uppercase_seq(term: str) -> str:
    return "".join(ch for ch in term if ch.isupper())


def _initials_variants(term: str) -> set[str]:
    tokens = [t for t in term.split() if t]
    full = "".join(t[0] for t in tokens).casefold()
    skipped = "".join(
        t[0] for t in tokens if t.casefold() not in _ABBREV_STOPWORDS
    ).casefold()
    return {full, skipped}


def _abbreviation_pair(s: str, t: str) -> bool:
    up_s, up_t = _uppercase_seq(s), _uppercase_seq(t)
    if up_s and up_s == up_t:
        return True
    for abbrev, expanded in ((up_s, t), (up_t, s)):
        if abbrev and abbrev.casefold() in _initials_variants(expanded):
            return True
    return False


def abbreviation_match(enlist_a, enlist_b):
    """1 iff some cross pair matches as abbreviation/expansion.

    A pair matches when both uppercase-letter sequences are non-empty and
    identical, or when one side's uppercase sequence equals the other
    side's token initials (case-folded; initials of {of, the, and, for}
    may be skipped on the expanded side).
    """
    if not enlist_a or not enlist_b:
        return MISSING
    for s in enlist_a:
        for t in enlist_b:
            if _abbreviation_pair(s, t):
                return 1
    return 0
