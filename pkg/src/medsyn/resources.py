"""Resource loading and the train/test split.

File formats (all UTF-8 text):

* dataset TSV: ``term_a<TAB>term_b<TAB>label(0|1)<TAB>translations_a<TAB>
  translations_b``, translations ``||``-joined, empty allowed;
* embedding file: line 1 ``count<SPACE>dimension``, then
  ``token v1 ... vd`` with space-separated decimal reals;
* pinyin table TSV: ``char<TAB>syllable``;
* radical table TSV: ``char<TAB>radical``;
* translation lexicon TSV: ``term<TAB>t1||t2||...``.

Loaders are pure (same bytes, same structures) and validate eagerly;
errors name the offending line.
"""

from __future__ import annotations

import io
import math
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources as importlib_resources

import numpy as np

from .core import NEGATIVE, POSITIVE, LabeledPair, Term


class ResourceFormatError(ValueError):
    """A resource stream violated its documented schema."""


@dataclass(frozen=True)
class Dataset:
    pairs: tuple[LabeledPair, ...]
    positive_count: int = field(init=False)
    negative_count: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        pos = sum(1 for p in self.pairs if p.label == POSITIVE)
        object.__setattr__(self, "positive_count", pos)
        object.__setattr__(self, "negative_count", len(self.pairs) - pos)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class EmbeddingTable:
    dimension: int
    entries: dict[str, np.ndarray]


@dataclass(frozen=True)
class PinyinTable:
    entries: dict[str, str]


@dataclass(frozen=True)
class RadicalTable:
    entries: dict[str, str]


@dataclass(frozen=True)
class TranslationLexicon:
    entries: dict[str, tuple[str, ...]]

    def translations_for(self, surface: str) -> tuple[str, ...]:
        return self.entries.get(surface, ())


@dataclass(frozen=True)
class SplitConfig:
    train_fraction: Fraction = Fraction(2, 3)
    seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        fraction = self.train_fraction
        if not isinstance(fraction, Fraction):
            fraction = Fraction(fraction)
            object.__setattr__(self, "train_fraction", fraction)
        if not 0 < fraction < 1:
            raise ValueError(f"train_fraction must be in (0, 1), got {fraction}")


def _lines(source) -> list[str]:
    """Accepts a text stream, byte stream, bytes or str."""
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    return text.splitlines()


def _parse_translations(cell: str) -> tuple[str, ...]:
    parts = [p.strip() for p in cell.split("||")]
    return tuple(p for p in parts if p)


def load_dataset(source) -> Dataset:
    """Parse the 5-column dataset TSV into labeled pairs."""
    pairs = []
    for lineno, line in enumerate(_lines(source), start=1):
        if not line.strip():
            continue
        columns = line.split("\t")
        if len(columns) != 5:
            raise ResourceFormatError(
                f"dataset line {lineno}: expected 5 tab-separated columns, "
                f"got {len(columns)}"
            )
        term_a, term_b, label_cell, trans_a, trans_b = columns
        if label_cell == "1":
            label = POSITIVE
        elif label_cell == "0":
            label = NEGATIVE
        else:
            raise ResourceFormatError(
                f"dataset line {lineno}: label must be 0 or 1, got {label_cell!r}"
            )
        try:
            pair = LabeledPair(
                a=Term(term_a, _parse_translations(trans_a)),
                b=Term(term_b, _parse_translations(trans_b)),
                label=label,
            )
        except ValueError as exc:
            raise ResourceFormatError(f"dataset line {lineno}: {exc}") from exc
        pairs.append(pair)
    return Dataset(pairs=tuple(pairs))


def save_dataset(dataset: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for pair in dataset.pairs:
            label = "1" if pair.label == POSITIVE else "0"
            f.write(
                "\t".join(
                    (
                        pair.a.surface,
                        pair.b.surface,
                        label,
                        "||".join(pair.a.translations),
                        "||".join(pair.b.translations),
                    )
                )
                + "\n"
            )


def split_train_test(dataset: Dataset, config: SplitConfig) -> tuple[Dataset, Dataset]:
    """Deterministic per-class split: floor(train_fraction * class_size)
    of each class to train, remainder to test. Unstratified mode applies
    the same floor rule to the whole pair list."""
    rng = random.Random(config.seed)
    if config.stratified:
        groups = [
            [p for p in dataset.pairs if p.label == POSITIVE],
            [p for p in dataset.pairs if p.label == NEGATIVE],
        ]
        if any(not g for g in groups):
            raise ValueError("stratified split requires both classes to be non-empty")
    else:
        groups = [list(dataset.pairs)]
    train: list[LabeledPair] = []
    test: list[LabeledPair] = []
    for group in groups:
        rng.shuffle(group)
        take = math.floor(config.train_fraction * len(group))
        train.extend(group[:take])
        test.extend(group[take:])
    return Dataset(pairs=tuple(train)), Dataset(pairs=tuple(test))


def load_embeddings(source) -> EmbeddingTable:
    """Parse the plain-text embedding format with a ``count dimension``
    header line."""
    lines = _lines(source)
    if not lines:
        raise ResourceFormatError("embedding file is empty")
    header = lines[0].split()
    if len(header) != 2:
        raise ResourceFormatError(
            f"embedding header must be 'count dimension', got {lines[0]!r}"
        )
    try:
        count, dimension = int(header[0]), int(header[1])
    except ValueError as exc:
        raise ResourceFormatError(f"embedding header not integers: {lines[0]!r}") from exc
    if dimension <= 0:
        raise ResourceFormatError(f"embedding dimension must be positive, got {dimension}")
    entries: dict[str, np.ndarray] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) != dimension + 1:
            raise ResourceFormatError(
                f"embedding line {lineno}: expected token plus {dimension} "
                f"components, got {len(fields) - 1}"
            )
        token = fields[0]
        if token in entries:
            raise ResourceFormatError(f"embedding line {lineno}: duplicate token {token!r}")
        try:
            vector = np.array([float(x) for x in fields[1:]], dtype=np.float64)
        except ValueError as exc:
            raise ResourceFormatError(f"embedding line {lineno}: bad component") from exc
        if not np.all(np.isfinite(vector)):
            raise ResourceFormatError(
                f"embedding line {lineno}: non-finite component for {token!r}"
            )
        entries[token] = vector
    if len(entries) != count:
        raise ResourceFormatError(
            f"embedding header declares {count} entries, file has {len(entries)}"
        )
    return EmbeddingTable(dimension=dimension, entries=entries)


def save_embeddings(table: EmbeddingTable, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{len(table.entries)} {table.dimension}\n")
        for token, vector in table.entries.items():
            components = " ".join(repr(float(x)) for x in vector)
            f.write(f"{token} {components}\n")


_SYLLABLE_RE = re.compile(r"^[a-z']+$")


def _load_two_column(source, what: str):
    rows = []
    seen = set()
    for lineno, line in enumerate(_lines(source), start=1):
        if not line.strip():
            continue
        columns = line.split("\t")
        if len(columns) != 2:
            raise ResourceFormatError(
                f"{what} line {lineno}: expected 2 tab-separated columns"
            )
        key, value = columns
        if key in seen:
            raise ResourceFormatError(f"{what} line {lineno}: duplicate key {key!r}")
        if not value:
            raise ResourceFormatError(f"{what} line {lineno}: empty value")
        seen.add(key)
        rows.append((lineno, key, value))
    return rows


def load_pinyin_table(source) -> PinyinTable:
    entries: dict[str, str] = {}
    for lineno, char, syllable in _load_two_column(source, "pinyin table"):
        if len(char) != 1:
            raise ResourceFormatError(
                f"pinyin table line {lineno}: key must be a single character"
            )
        if not _SYLLABLE_RE.match(syllable):
            raise ResourceFormatError(
                f"pinyin table line {lineno}: syllable {syllable!r} must be "
                f"lowercase [a-z] plus optional apostrophe"
            )
        entries[char] = syllable
    return PinyinTable(entries=entries)


def load_radical_table(source) -> RadicalTable:
    entries: dict[str, str] = {}
    for lineno, char, radical in _load_two_column(source, "radical table"):
        if len(char) != 1:
            raise ResourceFormatError(
                f"radical table line {lineno}: key must be a single character"
            )
        if len(radical) != 1:
            raise ResourceFormatError(
                f"radical table line {lineno}: radical must be a single code point"
            )
        entries[char] = radical
    return RadicalTable(entries=entries)


def load_translation_lexicon(source) -> TranslationLexicon:
    entries: dict[str, tuple[str, ...]] = {}
    for lineno, term, cell in _load_two_column(source, "translation lexicon"):
        translations = _parse_translations(cell)
        if not translations:
            raise ResourceFormatError(
                f"translation lexicon line {lineno}: no translations for {term!r}"
            )
        entries[term] = translations
    return TranslationLexicon(entries=entries)


def bundled_pinyin_table() -> PinyinTable:
    """The pinyin table shipped with the package (~1300 common characters,
    one tone-stripped reading each)."""
    text = (
        importlib_resources.files("medsyn").joinpath("data/pinyin_table.tsv").read_text("utf-8")
    )
    return load_pinyin_table(io.StringIO(text))


def bundled_radical_table() -> RadicalTable:
    """The radical table shipped with the package (same character set as
    the bundled pinyin table)."""
    text = (
        importlib_resources.files("medsyn").joinpath("data/radical_table.tsv").read_text("utf-8")
    )
    return load_radical_table(io.StringIO(text))
