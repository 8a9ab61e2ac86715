"""Feature assembly, standardization and the max-margin linear classifier.

The trainer minimizes the L2-regularized hinge loss (soft-margin linear
SVM, parameter C) by dual coordinate descent with an augmented constant
bias column, the standard formulation for a regularized intercept. Each
coordinate step exactly minimizes the dual, so the reported per-epoch
objective (the negated dual) is non-increasing by construction; at
convergence it meets the primal objective up to the duality-gap
tolerance. Training is single-threaded and bit-for-bit reproducible
given identical inputs, seed and config.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from . import embed_feats, string_feats, zh_feats
from .core import (
    FEATURE_IDS,
    NEGATIVE,
    POSITIVE,
    FeatureVector,
    LabeledPair,
    Term,
    validate_feature_id,
)
from .resources import (
    EmbeddingTable,
    PinyinTable,
    RadicalTable,
    TranslationLexicon,
)
from .web_dist import DEFAULT_NGD_MAX, HitCountProvider, NgdDiagnostics, capped_ngd

MODEL_FORMAT = "medsyn-model"
MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class FeatureMask:
    """A non-empty subset of the thirteen feature identifiers."""

    feature_ids: tuple[int, ...]

    def __post_init__(self):
        ids = tuple(sorted({validate_feature_id(f) for f in self.feature_ids}))
        if not ids:
            raise ValueError("feature mask must be non-empty")
        object.__setattr__(self, "feature_ids", ids)

    @classmethod
    def full(cls) -> "FeatureMask":
        return cls(FEATURE_IDS)

    @classmethod
    def from_bits(cls, bits: int) -> "FeatureMask":
        ids = tuple(fid for fid in FEATURE_IDS if bits & (1 << (fid - 1)))
        return cls(ids)

    @classmethod
    def from_string(cls, text: str) -> "FeatureMask":
        return cls(tuple(int(part) for part in text.split(",") if part.strip()))

    @property
    def bits(self) -> int:
        return sum(1 << (fid - 1) for fid in self.feature_ids)

    def render(self) -> str:
        return ",".join(str(fid) for fid in self.feature_ids)

    def __len__(self) -> int:
        return len(self.feature_ids)

    def __iter__(self):
        return iter(self.feature_ids)

    def __contains__(self, fid: int) -> bool:
        return fid in self.feature_ids


@dataclass(frozen=True)
class ResourceBundle:
    """Everything feature extraction needs, loaded and validated."""

    zh_embeddings: EmbeddingTable
    en_embeddings: EmbeddingTable
    pinyin: PinyinTable
    radicals: RadicalTable
    lexicon: TranslationLexicon
    provider12: HitCountProvider
    provider13: HitCountProvider
    eq5_aggregation: str = "max"
    ngd_max: float = DEFAULT_NGD_MAX

    def __post_init__(self):
        if self.eq5_aggregation not in ("max", "min"):
            raise ValueError(
                f"eq5_aggregation must be 'max' or 'min', got {self.eq5_aggregation!r}"
            )
        if self.ngd_max <= 0:
            raise ValueError("ngd_max must be positive")


def _pair_terms(pair) -> tuple[Term, Term]:
    if isinstance(pair, LabeledPair):
        return pair.a, pair.b
    a, b = pair
    return a, b


def _translations(term: Term, lexicon: TranslationLexicon) -> tuple[str, ...]:
    return term.translations if term.translations else lexicon.translations_for(term.surface)


def extract_features(
    pair,
    bundle: ResourceBundle,
    mask: FeatureMask | None = None,
    diagnostics: NgdDiagnostics | None = None,
) -> FeatureVector:
    """Compute exactly the masked features for one (labeled or bare)
    term pair. Unavailable inputs become missing entries, never errors."""
    mask = mask or FeatureMask.full()
    a, b = _pair_terms(pair)
    en_a = _translations(a, bundle.lexicon)
    en_b = _translations(b, bundle.lexicon)

    vec_a = vec_b = None
    if 1 in mask or 3 in mask:
        vec_a = embed_feats.lookup_term_vector(a, bundle.zh_embeddings)
        vec_b = embed_feats.lookup_term_vector(b, bundle.zh_embeddings)

    values: dict[int, float] = {}
    missing: set[int] = set()

    def record(fid: int, value) -> None:
        if value is None:
            missing.add(fid)
        else:
            values[fid] = float(value)

    for fid in mask:
        if fid == 1:
            if (
                vec_a is None
                or vec_b is None
                or np.linalg.norm(vec_a) == 0.0
                or np.linalg.norm(vec_b) == 0.0
            ):
                record(1, None)
            else:
                record(1, embed_feats.cosine_similarity(vec_a, vec_b))
        elif fid == 2:
            record(2, embed_feats.set_cosine(en_a, en_b, bundle.en_embeddings))
        elif fid == 3:
            if vec_a is None or vec_b is None:
                record(3, None)
            else:
                record(3, embed_feats.euclidean_distance(vec_a, vec_b))
        elif fid == 4:
            record(
                4,
                string_feats.relative_edit_distance(
                    string_feats.SymbolSequence.from_chars(a.surface),
                    string_feats.SymbolSequence.from_chars(b.surface),
                ),
            )
        elif fid == 5:
            record(5, string_feats.set_edit_distance(en_a, en_b, bundle.eq5_aggregation))
        elif fid == 6:
            record(6, string_feats.duplicate_word(en_a, en_b))
        elif fid == 7:
            record(7, string_feats.subsequence(en_a, en_b))
        elif fid == 8:
            record(8, string_feats.first_characters_match(en_a, en_b))
        elif fid == 9:
            record(9, string_feats.abbreviation_match(en_a, en_b))
        elif fid == 10:
            record(10, zh_feats.pinyin_edit_distance(a, b, bundle.pinyin))
        elif fid == 11:
            record(11, zh_feats.common_radicals(a, b, bundle.radicals))
        elif fid == 12:
            record(
                12,
                capped_ngd(a.surface, b.surface, bundle.provider12, bundle.ngd_max, diagnostics),
            )
        else:
            record(
                13,
                capped_ngd(a.surface, b.surface, bundle.provider13, bundle.ngd_max, diagnostics),
            )
    return FeatureVector(values=values, missing=frozenset(missing))


def extract_matrix(
    pairs,
    bundle: ResourceBundle,
    mask: FeatureMask | None = None,
    diagnostics: NgdDiagnostics | None = None,
) -> np.ndarray:
    """Feature matrix for many pairs, one column per masked feature id in
    ascending order; missing entries are NaN."""
    mask = mask or FeatureMask.full()
    column = {fid: i for i, fid in enumerate(mask.feature_ids)}
    out = np.full((len(pairs), len(mask)), np.nan, dtype=np.float64)
    for row, pair in enumerate(pairs):
        fv = extract_features(pair, bundle, mask, diagnostics)
        for fid, value in fv.values.items():
            out[row, column[fid]] = value
    return out


def feature_matrix(rows: list[FeatureVector]) -> tuple[np.ndarray, tuple[int, ...]]:
    """Stack per-pair FeatureVectors (all sharing one mask) into a NaN-
    for-missing matrix."""
    if not rows:
        raise ValueError("no feature vectors given")
    feature_ids = rows[0].feature_ids
    out = np.full((len(rows), len(feature_ids)), np.nan, dtype=np.float64)
    column = {fid: i for i, fid in enumerate(feature_ids)}
    for i, fv in enumerate(rows):
        if fv.feature_ids != feature_ids:
            raise ValueError(
                f"row {i} mask {fv.feature_ids} differs from {feature_ids}"
            )
        for fid, value in fv.values.items():
            out[i, column[fid]] = value
    return out, feature_ids


@dataclass(frozen=True)
class Scaler:
    """Per-feature standardization fitted on training rows.

    The training mean doubles as the imputation value for missing
    entries, so an imputed feature standardizes to exactly 0. Constant
    (or never-observed) features are flagged and pass through centered
    at 0 instead of dividing by a zero spread.
    """

    feature_ids: tuple[int, ...]
    mean: np.ndarray
    std: np.ndarray
    constant: np.ndarray

    @classmethod
    def identity(cls, feature_ids: tuple[int, ...]) -> "Scaler":
        k = len(feature_ids)
        return cls(
            feature_ids=tuple(feature_ids),
            mean=np.zeros(k),
            std=np.ones(k),
            constant=np.zeros(k, dtype=bool),
        )

    def transform(self, values: np.ndarray) -> np.ndarray:
        """Standardize a (n, k) or (k,) matrix with NaN as missing."""
        arr = np.atleast_2d(np.asarray(values, dtype=np.float64))
        if arr.shape[1] != len(self.feature_ids):
            raise ValueError(
                f"expected {len(self.feature_ids)} feature columns, got {arr.shape[1]}"
            )
        filled = np.where(np.isnan(arr), self.mean, arr)
        out = (filled - self.mean) / self.std
        return out if np.asarray(values).ndim == 2 else out[0]


def fit_scaler_from_matrix(values: np.ndarray, feature_ids) -> Scaler:
    values = np.asarray(values, dtype=np.float64)
    if values.shape[0] < 2:
        raise ValueError("scaler needs at least 2 rows")
    k = values.shape[1]
    mean = np.zeros(k)
    std = np.ones(k)
    constant = np.zeros(k, dtype=bool)
    for j in range(k):
        observed = values[:, j][~np.isnan(values[:, j])]
        if observed.size == 0:
            constant[j] = True
            continue
        mean[j] = float(np.mean(observed))
        spread = float(np.std(observed))  # population convention
        if spread == 0.0:
            constant[j] = True
        else:
            std[j] = spread
    return Scaler(
        feature_ids=tuple(feature_ids), mean=mean, std=std, constant=constant
    )


def fit_scaler(rows: list[FeatureVector]) -> Scaler:
    """Fit mean/spread/imputation over non-missing values of aligned
    FeatureVectors."""
    values, feature_ids = feature_matrix(rows)
    return fit_scaler_from_matrix(values, feature_ids)


@dataclass(frozen=True)
class TrainConfig:
    C: float = 1.0
    tolerance: float = 1e-3
    max_epochs: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.C <= 0:
            raise ValueError("C must be positive")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_epochs <= 0:
            raise ValueError("max_epochs must be positive")


@dataclass(frozen=True)
class SolverResult:
    weights: np.ndarray
    bias: float
    objective_history: tuple[float, ...]
    epochs: int
    converged: bool
    duality_gap: float


def _cd_epoch_python(aug_y, q_diag, alpha, w, C, order):
    for i in order:
        gradient = float(aug_y[i] @ w) - 1.0
        updated = min(max(alpha[i] - gradient / q_diag[i], 0.0), C)
        delta = updated - alpha[i]
        if delta != 0.0:
            alpha[i] = updated
            w += delta * aug_y[i]


# The epoch loop is the hot path of the 2^13-mask sweep; numba compiles
# it when available (identical update rule, IEEE-strict), otherwise the
# numpy loop above runs. Set MEDSYN_NO_NUMBA=1 to force the fallback.
if os.environ.get("MEDSYN_NO_NUMBA"):
    _cd_epoch = _cd_epoch_python
else:
    try:
        from ._solver_kernel import cd_epoch as _cd_epoch
    except ImportError:
        _cd_epoch = _cd_epoch_python


def solve_linear_svm(X: np.ndarray, y: np.ndarray, config: TrainConfig) -> SolverResult:
    """Dual coordinate descent for the L1 hinge loss with box constraint
    [0, C], over a bias-augmented copy of X.

    Each pass visits all samples in a seeded random permutation; every
    coordinate step is an exact single-variable minimization, so the
    recorded objective (the negated dual) never increases. Stops when the
    relative duality gap drops to ``config.tolerance`` or after
    ``config.max_epochs`` passes.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = X.shape[0]
    aug = np.hstack([X, np.ones((n, 1))])
    aug_y = aug * y[:, None]
    q_diag = np.einsum("ij,ij->i", aug, aug)
    alpha = np.zeros(n)
    w = np.zeros(aug.shape[1])
    C = config.C
    rng = np.random.default_rng(config.seed)

    history: list[float] = []
    converged = False
    gap = math.inf
    epochs = 0
    for _ in range(config.max_epochs):
        epochs += 1
        _cd_epoch(aug_y, q_diag, alpha, w, C, rng.permutation(n))
        w_norm_sq = float(w @ w)
        negated_dual = 0.5 * w_norm_sq - float(np.sum(alpha))
        history.append(negated_dual)
        margins = 1.0 - aug_y @ w
        primal = 0.5 * w_norm_sq + C * float(np.sum(np.maximum(0.0, margins)))
        gap = primal - (-negated_dual)
        if gap <= config.tolerance * max(1.0, abs(primal)):
            converged = True
            break
    return SolverResult(
        weights=w[:-1].copy(),
        bias=float(w[-1]),
        objective_history=tuple(history),
        epochs=epochs,
        converged=converged,
        duality_gap=gap,
    )


@dataclass(frozen=True)
class Model:
    mask: FeatureMask
    weights: np.ndarray
    bias: float
    scaler: Scaler
    config: TrainConfig

    def __post_init__(self):
        if len(self.weights) != len(self.mask):
            raise ValueError(
                f"{len(self.weights)} weights for a {len(self.mask)}-feature mask"
            )


def train(
    rows: np.ndarray,
    labels,
    config: TrainConfig,
    *,
    mask: FeatureMask | None = None,
    scaler: Scaler | None = None,
) -> Model:
    """Train on an already-standardized (n, k) matrix with +1/-1 labels.

    ``mask``/``scaler`` default to the first k feature ids and an
    identity scaler, for callers that standardize on their own.
    """
    rows = np.asarray(rows, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] != labels.shape[0]:
        raise ValueError("rows must be (n, k) with one label per row")
    classes = set(np.unique(labels).tolist())
    if not classes <= {-1.0, 1.0}:
        raise ValueError(f"labels must be +1/-1, got {sorted(classes)}")
    if len(classes) < 2:
        raise ValueError("training requires both classes to be present")
    if mask is None:
        mask = FeatureMask(tuple(range(1, rows.shape[1] + 1)))
    if scaler is None:
        scaler = Scaler.identity(mask.feature_ids)
    if len(mask) != rows.shape[1]:
        raise ValueError(f"mask has {len(mask)} features, rows have {rows.shape[1]}")
    result = solve_linear_svm(rows, labels, config)
    return Model(
        mask=mask,
        weights=result.weights,
        bias=result.bias,
        scaler=scaler,
        config=config,
    )


def train_pipeline(
    pairs,
    bundle: ResourceBundle,
    mask: FeatureMask,
    config: TrainConfig,
) -> Model:
    """extract -> fit scaler -> standardize -> train, on labeled pairs."""
    values = extract_matrix(pairs, bundle, mask)
    scaler = fit_scaler_from_matrix(values, mask.feature_ids)
    standardized = scaler.transform(values)
    labels = [p.label for p in pairs]
    return train(standardized, labels, config, mask=mask, scaler=scaler)


def _vector_to_row(model: Model, fv: FeatureVector) -> np.ndarray:
    if fv.feature_ids != model.mask.feature_ids:
        raise ValueError(
            f"feature mask mismatch: vector has {fv.feature_ids}, "
            f"model expects {model.mask.feature_ids}"
        )
    row = np.full(len(model.mask), np.nan)
    column = {fid: i for i, fid in enumerate(model.mask.feature_ids)}
    for fid, value in fv.values.items():
        row[column[fid]] = value
    return row


def decision_value(model: Model, fv: FeatureVector) -> float:
    """weights . standardized(v) + bias, imputing missing entries."""
    standardized = model.scaler.transform(_vector_to_row(model, fv))
    return float(model.weights @ standardized + model.bias)


def predict(model: Model, fv: FeatureVector) -> int:
    """Sign of the decision value; an exact 0 predicts positive."""
    return POSITIVE if decision_value(model, fv) >= 0.0 else NEGATIVE


def decision_values_matrix(model: Model, values: np.ndarray) -> np.ndarray:
    """Decision values for a raw (unstandardized, NaN-for-missing) matrix
    whose columns follow the model's mask."""
    standardized = model.scaler.transform(values)
    return standardized @ model.weights + model.bias


def predict_matrix(model: Model, values: np.ndarray) -> np.ndarray:
    decisions = decision_values_matrix(model, values)
    return np.where(decisions >= 0.0, POSITIVE, NEGATIVE)


def save_model(model: Model, path) -> None:
    """Versioned JSON persistence; floats round-trip exactly."""
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_FORMAT_VERSION,
        "mask": list(model.mask.feature_ids),
        "weights": [float(x) for x in model.weights],
        "bias": model.bias,
        "scaler": {
            "feature_ids": list(model.scaler.feature_ids),
            "mean": [float(x) for x in model.scaler.mean],
            "std": [float(x) for x in model.scaler.std],
            "constant": [bool(x) for x in model.scaler.constant],
        },
        "config": {
            "C": model.config.C,
            "tolerance": model.config.tolerance,
            "max_epochs": model.config.max_epochs,
            "seed": model.config.seed,
        },
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")


def load_model(path) -> Model:
    with open(path, "r", encoding="utf-8") as f:
        payload = json.load(f)
    if payload.get("format") != MODEL_FORMAT:
        raise ValueError(f"not a {MODEL_FORMAT} file: {path}")
    if payload.get("version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {payload.get('version')}")
    scaler_data = payload["scaler"]
    scaler = Scaler(
        feature_ids=tuple(scaler_data["feature_ids"]),
        mean=np.array(scaler_data["mean"], dtype=np.float64),
        std=np.array(scaler_data["std"], dtype=np.float64),
        constant=np.array(scaler_data["constant"], dtype=bool),
    )
    config = TrainConfig(**payload["config"])
    return Model(
        mask=FeatureMask(tuple(payload["mask"])),
        weights=np.array(payload["weights"], dtype=np.float64),
        bias=float(payload["bias"]),
        scaler=scaler,
        config=config,
    )


def models_equal(a: Model, b: Model) -> bool:
    """Bit-exact equality over every persisted field."""
    return (
        a.mask == b.mask
        and a.bias == b.bias
        and a.config == b.config
        and np.array_equal(a.weights, b.weights)
        and a.scaler.feature_ids == b.scaler.feature_ids
        and np.array_equal(a.scaler.mean, b.scaler.mean)
        and np.array_equal(a.scaler.std, b.scaler.std)
        and np.array_equal(a.scaler.constant, b.scaler.constant)
    )
