"""Chinese-specific features: pinyin edit distance (10) and common
radicals (11).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .core import Term
from .resources import PinyinTable, RadicalTable
from .string_feats import _relative_char_distance

MISSING = None

#: Joins syllables before character-level comparison, preventing
#: cross-syllable collisions ("xi"+"an" vs "xian").
SYLLABLE_SEPARATOR = "-"


@dataclass(frozen=True)
class PinyinSequence:
    """Tone-stripped syllables for the covered characters of a term, plus
    the fraction of characters the table covered."""

    syllables: tuple[str, ...]
    coverage: float


def pinyin_sequence(term: Term, table: PinyinTable) -> PinyinSequence:
    """Per-character syllable lookup; uncovered characters are skipped and
    lower the coverage fraction."""
    syllables = []
    for ch in term.surface:
        syllable = table.entries.get(ch)
        if syllable is not None:
            syllables.append(syllable)
    coverage = len(syllables) / len(term.surface)
    return PinyinSequence(syllables=tuple(syllables), coverage=coverage)


def pinyin_edit_distance(a: Term, b: Term, table: PinyinTable):
    """Relative edit distance between the two terms' separator-joined
    pinyin strings, character level; None unless both terms are fully
    covered by the table (a distance over partial strings would silently
    conflate different-length inputs)."""
    seq_a = pinyin_sequence(a, table)
    seq_b = pinyin_sequence(b, table)
    if seq_a.coverage < 1.0 or seq_b.coverage < 1.0:
        return MISSING
    joined_a = SYLLABLE_SEPARATOR.join(seq_a.syllables)
    joined_b = SYLLABLE_SEPARATOR.join(seq_b.syllables)
    return _relative_char_distance(joined_a, joined_b)


def common_radicals(a: Term, b: Term, table: RadicalTable):
    """Multiset intersection size of the two terms' radicals, divided by
    the longer surface's character count; None if either term has zero
    radical coverage."""
    radicals_a = Counter(table.entries[ch] for ch in a.surface if ch in table.entries)
    radicals_b = Counter(table.entries[ch] for ch in b.surface if ch in table.entries)
    if not radicals_a or not radicals_b:
        return MISSING
    shared = sum((radicals_a & radicals_b).values())
    return shared / max(len(a.surface), len(b.surface))
