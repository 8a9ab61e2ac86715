"""Exhaustive feature-subset experiments.

Enumerate all non-empty masks over k features, train/evaluate each on a
shared split, rank by F1, report the top-k table and top-fraction
feature frequencies, and rerun a fixed mask over re-splits for
stability. The full 13-column feature matrix is extracted once per
sweep; masks select columns. Per-mask seeds derive from
(global seed, bitmask) through SHA-256, so results are independent of
scheduling and parallelism degree.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .core import FEATURE_IDS, Metrics, compute_metrics, confusion
from .model import (
    FeatureMask,
    ResourceBundle,
    TrainConfig,
    extract_matrix,
    fit_scaler_from_matrix,
    predict_matrix,
    train,
)
from .resources import Dataset, SplitConfig, split_train_test


@dataclass(frozen=True)
class SweepConfig:
    """Knobs shared by every mask evaluation in one sweep."""

    seed: int = 0
    C: float = 1.0
    tolerance: float = 1e-3
    max_epochs: int = 1000
    #: Wall-clock timing is off by default so reports are bit-deterministic
    #: for any parallelism degree; enable to record real train seconds.
    measure_time: bool = False


@dataclass(frozen=True)
class SweepRow:
    mask: FeatureMask
    metrics: Metrics
    train_seconds: float
    seed: int


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]
    config: SweepConfig
    dataset_fingerprint: str
    eq5_aggregation: str = "max"

    def __post_init__(self):
        bits = [row.mask.bits for row in self.rows]
        if len(bits) != len(set(bits)):
            raise ValueError("sweep report has duplicate masks")


def derive_mask_seed(global_seed: int, bits: int) -> int:
    """Deterministic per-mask seed; stable across processes and platforms
    (Python's built-in hash is salted, so SHA-256 instead)."""
    digest = hashlib.sha256(f"{global_seed}:{bits}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def dataset_fingerprint(dataset: Dataset) -> str:
    """Content hash over all pairs, labels and translations."""
    h = hashlib.sha256()
    for pair in dataset.pairs:
        record = "\x1f".join(
            (
                pair.a.surface,
                "\x1e".join(pair.a.translations),
                pair.b.surface,
                "\x1e".join(pair.b.translations),
                str(pair.label),
            )
        )
        h.update(record.encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


def enumerate_masks(k: int) -> list[FeatureMask]:
    """All 2^k - 1 non-empty masks over feature ids 1..k, by ascending
    bitmask value. The empty mask is excluded: a classifier over zero
    features is undefined."""
    if not 1 <= k <= len(FEATURE_IDS):
        raise ValueError(f"feature count must be in [1, {len(FEATURE_IDS)}], got {k}")
    return [FeatureMask.from_bits(bits) for bits in range(1, 1 << k)]


def _evaluate_mask(
    mask: FeatureMask,
    train_values: np.ndarray,
    train_labels,
    test_values: np.ndarray,
    test_labels,
    full_ids: tuple[int, ...],
    config: SweepConfig,
) -> SweepRow:
    """Train/evaluate one mask over column slices of the shared matrices."""
    columns = [full_ids.index(fid) for fid in mask.feature_ids]
    seed = derive_mask_seed(config.seed, mask.bits)
    train_config = TrainConfig(
        C=config.C, tolerance=config.tolerance, max_epochs=config.max_epochs, seed=seed
    )
    started = time.perf_counter() if config.measure_time else 0.0
    try:
        train_slice = train_values[:, columns]
        scaler = fit_scaler_from_matrix(train_slice, mask.feature_ids)
        model = train(
            scaler.transform(train_slice),
            train_labels,
            train_config,
            mask=mask,
            scaler=scaler,
        )
        predictions = predict_matrix(model, test_values[:, columns])
    except Exception as exc:
        raise RuntimeError(f"mask {mask.render()} failed: {exc}") from exc
    elapsed = time.perf_counter() - started if config.measure_time else 0.0
    metrics = compute_metrics(confusion(list(predictions), list(test_labels)))
    return SweepRow(mask=mask, metrics=metrics, train_seconds=elapsed, seed=seed)


def run_single(
    mask: FeatureMask,
    train_set: Dataset,
    test_set: Dataset,
    bundle: ResourceBundle,
    config: SweepConfig,
) -> SweepRow:
    """Extract features under one mask and train/evaluate it."""
    train_values = extract_matrix(train_set.pairs, bundle, mask)
    test_values = extract_matrix(test_set.pairs, bundle, mask)
    return _evaluate_mask(
        mask,
        train_values,
        [p.label for p in train_set.pairs],
        test_values,
        [p.label for p in test_set.pairs],
        mask.feature_ids,
        config,
    )


_WORKER_STATE: dict = {}


def _worker_init(train_values, train_labels, test_values, test_labels, full_ids, config):
    _WORKER_STATE.update(
        train_values=train_values,
        train_labels=train_labels,
        test_values=test_values,
        test_labels=test_labels,
        full_ids=full_ids,
        config=config,
    )


def _worker_evaluate(bits: int) -> SweepRow:
    s = _WORKER_STATE
    return _evaluate_mask(
        FeatureMask.from_bits(bits),
        s["train_values"],
        s["train_labels"],
        s["test_values"],
        s["test_labels"],
        s["full_ids"],
        s["config"],
    )


def run_sweep(
    masks,
    train_set: Dataset,
    test_set: Dataset,
    bundle: ResourceBundle,
    config: SweepConfig,
    parallelism: int = 1,
) -> SweepReport:
    """One SweepRow per mask. Features are extracted once over the union
    of the masks' ids; each mask selects columns. Row order follows the
    input mask order regardless of parallelism."""
    masks = list(masks)
    if not masks:
        raise ValueError("no masks to sweep")
    union_ids = tuple(sorted({fid for mask in masks for fid in mask.feature_ids}))
    union_mask = FeatureMask(union_ids)
    train_values = extract_matrix(train_set.pairs, bundle, union_mask)
    test_values = extract_matrix(test_set.pairs, bundle, union_mask)
    train_labels = [p.label for p in train_set.pairs]
    test_labels = [p.label for p in test_set.pairs]

    if parallelism <= 1:
        rows = [
            _evaluate_mask(
                mask, train_values, train_labels, test_values, test_labels,
                union_ids, config,
            )
            for mask in masks
        ]
    else:
        with concurrent.futures.ProcessPoolExecutor(
            max_workers=parallelism,
            initializer=_worker_init,
            initargs=(
                train_values, train_labels, test_values, test_labels,
                union_ids, config,
            ),
        ) as pool:
            chunk = max(1, len(masks) // (parallelism * 8))
            rows = list(
                pool.map(_worker_evaluate, [m.bits for m in masks], chunksize=chunk)
            )
    return SweepReport(
        rows=tuple(rows),
        config=config,
        dataset_fingerprint=dataset_fingerprint(
            Dataset(pairs=train_set.pairs + test_set.pairs)
        ),
        eq5_aggregation=bundle.eq5_aggregation,
    )


def _rank_key(row: SweepRow):
    return (-row.metrics.f1, -row.metrics.precision, -row.metrics.recall, row.mask.bits)


def rank(report: SweepReport) -> list[SweepRow]:
    """Descending F1; ties broken by descending precision, descending
    recall, then ascending bitmask. A total order, so ranking is stable
    and idempotent."""
    return sorted(report.rows, key=_rank_key)


def top_k_table(report: SweepReport, k: int) -> list[SweepRow]:
    if k < 1:
        raise ValueError("k must be at least 1")
    return rank(report)[:k]


def top_fraction_feature_frequency(report: SweepReport, fraction: float) -> dict[int, int]:
    """Within the first floor(fraction * rows) ranked rows, count the
    masks containing each feature."""
    if not report.rows:
        raise ValueError("empty report")
    if not 0 < fraction <= 1:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    take = math.floor(fraction * len(report.rows))
    if take == 0:
        raise ValueError(
            f"fraction {fraction} of {len(report.rows)} rows selects nothing"
        )
    counts = {fid: 0 for fid in FEATURE_IDS}
    for row in rank(report)[:take]:
        for fid in row.mask.feature_ids:
            counts[fid] += 1
    return counts


@dataclass(frozen=True)
class StabilitySummary:
    runs: tuple[Metrics, ...]
    mean: Metrics
    stddev: Metrics


def stability_runs(
    mask: FeatureMask,
    dataset: Dataset,
    bundle: ResourceBundle,
    config: SweepConfig,
    n: int,
    seeds,
    split_config: SplitConfig | None = None,
) -> StabilitySummary:
    """Re-split, retrain and evaluate one mask n times, one distinct seed
    per run; summarizes each metric with mean and sample stddev (ddof=1)."""
    seeds = list(seeds)
    if n < 2:
        raise ValueError("stability needs at least 2 runs")
    if len(seeds) != n:
        raise ValueError(f"expected {n} seeds, got {len(seeds)}")
    if len(set(seeds)) != n:
        raise ValueError("stability run seeds must be distinct")
    base_split = split_config or SplitConfig()
    runs = []
    for seed in seeds:
        split = SplitConfig(
            train_fraction=base_split.train_fraction,
            seed=seed,
            stratified=base_split.stratified,
        )
        train_set, test_set = split_train_test(dataset, split)
        row = run_single(
            mask,
            train_set,
            test_set,
            bundle,
            SweepConfig(
                seed=seed,
                C=config.C,
                tolerance=config.tolerance,
                max_epochs=config.max_epochs,
                measure_time=config.measure_time,
            ),
        )
        runs.append(row.metrics)

    def summarize(getter):
        values = np.array([getter(m) for m in runs])
        return float(np.mean(values)), float(np.std(values, ddof=1))

    p_mean, p_std = summarize(lambda m: m.precision)
    r_mean, r_std = summarize(lambda m: m.recall)
    f_mean, f_std = summarize(lambda m: m.f1)
    return StabilitySummary(
        runs=tuple(runs),
        mean=Metrics(precision=p_mean, recall=r_mean, f1=f_mean),
        stddev=Metrics(precision=p_std, recall=r_std, f1=f_std),
    )


def write_report_tsv(report: SweepReport, path) -> None:
    """``bitmask<TAB>features<TAB>precision<TAB>recall<TAB>f1<TAB>seconds``,
    one row per mask in report order. Floats use shortest round-trip
    formatting so re-ranking a loaded report is lossless."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("bitmask\tfeatures\tprecision\trecall\tf1\tseconds\n")
        for row in report.rows:
            f.write(
                "\t".join(
                    (
                        str(row.mask.bits),
                        row.mask.render(),
                        repr(row.metrics.precision),
                        repr(row.metrics.recall),
                        repr(row.metrics.f1),
                        repr(row.train_seconds),
                    )
                )
                + "\n"
            )


def read_report_tsv(path, config: SweepConfig | None = None, fingerprint: str = "") -> SweepReport:
    rows = []
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline()
        if not header.startswith("bitmask\t"):
            raise ValueError(f"not a sweep report: {path}")
        for line in f:
            if not line.strip():
                continue
            bits, _features, precision, recall, f1, seconds = line.rstrip("\n").split("\t")
            rows.append(
                SweepRow(
                    mask=FeatureMask.from_bits(int(bits)),
                    metrics=Metrics(
                        precision=float(precision), recall=float(recall), f1=float(f1)
                    ),
                    train_seconds=float(seconds),
                    seed=0,
                )
            )
    return SweepReport(
        rows=tuple(rows), config=config or SweepConfig(), dataset_fingerprint=fingerprint
    )


def write_report_sidecar(report: SweepReport, path, timing_seconds: float | None = None) -> None:
    """JSON sidecar with the config snapshot and dataset fingerprint.
    ``timing`` is wall-clock telemetry and is the one nondeterministic
    field; it is omitted unless provided."""
    payload = {
        "format": "medsyn-sweep",
        "version": 1,
        "config": {
            "seed": report.config.seed,
            "C": report.config.C,
            "tolerance": report.config.tolerance,
            "max_epochs": report.config.max_epochs,
            "measure_time": report.config.measure_time,
        },
        "eq5_aggregation": report.eq5_aggregation,
        "dataset_fingerprint": report.dataset_fingerprint,
        "rows": len(report.rows),
    }
    if timing_seconds is not None:
        payload["timing"] = {"wall_seconds": timing_seconds, "nondeterministic": True}
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")


def write_frequency_tsv(counts: dict[int, int], total_rows: int, path) -> None:
    """``feature_id<TAB>count<TAB>fraction`` rows, plot-ready."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("feature_id\tcount\tfraction\n")
        for fid in sorted(counts):
            fraction = counts[fid] / total_rows if total_rows else 0.0
            f.write(f"{fid}\t{counts[fid]}\t{repr(fraction)}\n")
