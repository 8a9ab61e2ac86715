"""Normalized web distance over pluggable hit-count providers.

A provider answers ``hits(term)``, ``cohits(x, y)`` and exposes ``log_m``
(base-10 log of the total page count). The offline provider counts
document frequencies in a local corpus; live search engines are out of
scope. Distances use base-10 logarithms throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol

#: Default log10 of the total page count: M = 10^10 pages.
DEFAULT_LOG_M = 10.0

#: Default cap substituted for an infinite distance (terms that never
#: co-occur) before values reach the classifier.
DEFAULT_NGD_MAX = 10.0

MISSING = None

#: Separates the two terms of a pair key in the persisted index (unit
#: separator, 0x1F).
PAIR_KEY_SEPARATOR = "\x1f"


@dataclass
class NgdDiagnostics:
    """Counts the formula's two guarded cases: negative raw values clamped
    to 0 (possible with over-counting external providers) and infinite
    distances capped for the classifier."""

    negative_clamped: int = 0
    infinite_capped: int = 0


class HitCountProvider(Protocol):
    log_m: float

    def hits(self, term: str) -> int: ...

    def cohits(self, x: str, y: str) -> int: ...


def _pair_key(x: str, y: str) -> tuple[str, str]:
    return (x, y) if x <= y else (y, x)


@dataclass(frozen=True)
class CorpusIndex:
    """Document-level term and pair frequencies for a fixed vocabulary."""

    document_frequency: dict[str, int]
    co_document_frequency: dict[tuple[str, str], int]
    total_documents: int

    def df(self, term: str) -> int:
        return self.document_frequency.get(term, 0)

    def codf(self, x: str, y: str) -> int:
        return self.co_document_frequency.get(_pair_key(x, y), 0)


def build_corpus_index(documents, vocabulary) -> CorpusIndex:
    """Count, per vocabulary term and per co-occurring vocabulary pair,
    the number of documents containing it as a substring. Duplicate
    occurrences within one document count once."""
    vocabulary = sorted(set(vocabulary))
    if not vocabulary:
        raise ValueError("vocabulary must be non-empty")
    df = {term: 0 for term in vocabulary}
    codf: dict[tuple[str, str], int] = {}
    total = 0
    for document in documents:
        total += 1
        present = [term for term in vocabulary if term in document]
        for term in present:
            df[term] += 1
        for i, x in enumerate(present):
            for y in present[i + 1 :]:
                key = _pair_key(x, y)
                codf[key] = codf.get(key, 0) + 1
    return CorpusIndex(
        document_frequency=df, co_document_frequency=codf, total_documents=total
    )


@dataclass(frozen=True)
class CorpusHitCountProvider:
    """Offline provider backed by a corpus index.

    ``cohits(x, x)`` answers ``hits(x)``: a document containing x
    trivially contains x and x together.
    """

    index: CorpusIndex
    log_m: float = DEFAULT_LOG_M

    def hits(self, term: str) -> int:
        return self.index.df(term)

    def cohits(self, x: str, y: str) -> int:
        if x == y:
            return self.index.df(x)
        return self.index.codf(x, y)


def ngd(x: str, y: str, provider: HitCountProvider, diagnostics: NgdDiagnostics | None = None):
    """Normalized web distance between two terms.

    Returns None (missing) if either term has zero hits, math.inf if the
    terms have hits but never co-occur, otherwise the base-10 formula
    value clamped below at 0. Hits at or above the provider's page count
    M violate the formula's precondition and raise.
    """
    fx, fy = provider.hits(x), provider.hits(y)
    if fx == 0 or fy == 0:
        return MISSING
    log_fx, log_fy = math.log10(fx), math.log10(fy)
    if provider.log_m <= max(log_fx, log_fy):
        raise ValueError(
            f"hit counts ({fx}, {fy}) reach the provider's total page count "
            f"(log_m={provider.log_m}); the distance is undefined"
        )
    fxy = provider.cohits(x, y)
    if fxy == 0:
        return math.inf
    numerator = max(log_fx, log_fy) - math.log10(fxy)
    denominator = provider.log_m - min(log_fx, log_fy)
    value = numerator / denominator
    if value < 0.0:
        if diagnostics is not None:
            diagnostics.negative_clamped += 1
        return 0.0
    return value


def capped_ngd(
    x: str,
    y: str,
    provider: HitCountProvider,
    ngd_max: float = DEFAULT_NGD_MAX,
    diagnostics: NgdDiagnostics | None = None,
):
    """ngd() with the infinite case mapped to the finite cap ``ngd_max``,
    as fed to the classifier. Still None when a term has zero hits."""
    value = ngd(x, y, provider, diagnostics)
    if value is MISSING:
        return MISSING
    if value > ngd_max:
        if diagnostics is not None and math.isinf(value):
            diagnostics.infinite_capped += 1
        return ngd_max
    return value


def save_corpus_index(index: CorpusIndex, path) -> None:
    """Persist as sectioned TSV (#DF, #CODF, #TOTAL); pair keys join the
    lexicographically ordered terms with the unit separator."""
    for term in index.document_frequency:
        if "\t" in term or "\n" in term or PAIR_KEY_SEPARATOR in term:
            raise ValueError(f"term {term!r} contains a reserved character")
    with open(path, "w", encoding="utf-8") as f:
        f.write("#DF\n")
        for term in sorted(index.document_frequency):
            f.write(f"{term}\t{index.document_frequency[term]}\n")
        f.write("#CODF\n")
        for (x, y) in sorted(index.co_document_frequency):
            count = index.co_document_frequency[(x, y)]
            f.write(f"{x}{PAIR_KEY_SEPARATOR}{y}\t{count}\n")
        f.write("#TOTAL\n")
        f.write(f"{index.total_documents}\n")


def load_corpus_index(path) -> CorpusIndex:
    df: dict[str, int] = {}
    codf: dict[tuple[str, str], int] = {}
    total = 0
    section = None
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                section = line
                continue
            if section == "#DF":
                term, _, count = line.rpartition("\t")
                df[term] = int(count)
            elif section == "#CODF":
                key, _, count = line.rpartition("\t")
                x, sep, y = key.partition(PAIR_KEY_SEPARATOR)
                if not sep:
                    raise ValueError(f"corpus index line {lineno}: malformed pair key")
                codf[(x, y)] = int(count)
            elif section == "#TOTAL":
                total = int(line)
            else:
                raise ValueError(f"corpus index line {lineno}: data before a section header")
    return CorpusIndex(
        document_frequency=df, co_document_frequency=codf, total_documents=total
    )
