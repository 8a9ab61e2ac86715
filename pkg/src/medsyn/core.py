"""Shared domain types and classification metrics.

Labels are encoded +1 (synonym) / -1 (non-synonym) everywhere in memory;
dataset files on disk use 1/0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

POSITIVE = 1
NEGATIVE = -1

#: The thirteen feature identifiers, in canonical order.
FEATURE_IDS = tuple(range(1, 14))

FEATURE_NAMES = {
    1: "zh_cosine",
    2: "en_set_cosine",
    3: "zh_euclidean",
    4: "zh_relative_edit_distance",
    5: "en_set_edit_distance",
    6: "duplicate_word",
    7: "subsequence",
    8: "first_characters",
    9: "abbreviation",
    10: "pinyin_edit_distance",
    11: "common_radicals",
    12: "nwd_provider_12",
    13: "nwd_provider_13",
}


def validate_feature_id(feature_id: int) -> int:
    if not isinstance(feature_id, int) or isinstance(feature_id, bool):
        raise TypeError(f"feature id must be an int, got {feature_id!r}")
    if not 1 <= feature_id <= 13:
        raise ValueError(f"feature id must be in [1, 13], got {feature_id}")
    return feature_id


@dataclass(frozen=True)
class Term:
    """A Chinese surface string plus its ordered set of English translations.

    Translations are deduplicated, keeping first-occurrence order. The
    translation set may be empty (translation lookup can fail upstream).
    """

    surface: str
    translations: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.surface:
            raise ValueError("Term surface must be non-empty")
        deduped = tuple(dict.fromkeys(self.translations))
        object.__setattr__(self, "translations", deduped)


@dataclass(frozen=True)
class LabeledPair:
    """Two terms plus a synonym (+1) / non-synonym (-1) label."""

    a: Term
    b: Term
    label: int

    def __post_init__(self):
        if self.label not in (POSITIVE, NEGATIVE):
            raise ValueError(f"label must be +1 or -1, got {self.label}")


@dataclass(frozen=True)
class FeatureVector:
    """Feature values keyed by feature id, with explicit missing markers.

    ``values`` and ``missing`` are disjoint; their union is the active
    feature mask the vector was extracted under.
    """

    values: dict[int, float]
    missing: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        for fid in self.values:
            validate_feature_id(fid)
        for fid in self.missing:
            validate_feature_id(fid)
        overlap = set(self.values) & set(self.missing)
        if overlap:
            raise ValueError(f"features both valued and missing: {sorted(overlap)}")
        object.__setattr__(self, "missing", frozenset(self.missing))

    @property
    def feature_ids(self) -> tuple[int, ...]:
        """The active mask: valued plus missing ids, sorted."""
        return tuple(sorted(set(self.values) | self.missing))


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "fp", "tn", "fn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float


def confusion(predictions: list[int], labels: list[int]) -> ConfusionCounts:
    """Count (prediction, label) cells over +1/-1 sequences.

    Raises ValueError on empty input or length mismatch.
    """
    if len(predictions) != len(labels):
        raise ValueError(
            f"length mismatch: {len(predictions)} predictions vs {len(labels)} labels"
        )
    if not predictions:
        raise ValueError("cannot compute confusion counts on empty input")
    tp = fp = tn = fn = 0
    for pred, label in zip(predictions, labels):
        if pred not in (POSITIVE, NEGATIVE) or label not in (POSITIVE, NEGATIVE):
            raise ValueError(f"labels must be +1/-1, got ({pred}, {label})")
        if pred == POSITIVE:
            if label == POSITIVE:
                tp += 1
            else:
                fp += 1
        else:
            if label == POSITIVE:
                fn += 1
            else:
                tn += 1
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def compute_metrics(counts: ConfusionCounts) -> Metrics:
    """Precision, recall and F1 from confusion counts.

    A 0/0 denominator yields 0 (keeps degenerate sweep rows well-defined
    instead of crashing them).
    """
    if counts.total == 0:
        raise ValueError("cannot compute metrics on zero evaluated pairs")
    precision = counts.tp / (counts.tp + counts.fp) if counts.tp + counts.fp else 0.0
    recall = counts.tp / (counts.tp + counts.fn) if counts.tp + counts.fn else 0.0
    if precision + recall > 0:
        f1 = 2.0 * precision * recall / (precision + recall)
    else:
        f1 = 0.0
    return Metrics(precision=precision, recall=recall, f1=f1)
