"""Seeded synthetic benchmark: a labeled pair set plus every resource the
feature extractors need, with planted, controllable signal.

Positive pairs perturb a base term drawn from the bundled character
tables in four ways: homophone character swaps (same pinyin), shared-
radical substitutions, surface-unrelated pairs tied by a shared English
translation, and small edits (insert/delete/replace). Most swaps touch
one character, so the surface features (4, 10, 11) are strong; a slice
of each kind swaps every character, leaving complementary blocks that
only feature 10 (full homophone), only feature 11 (full same-radical)
or only the translation/embedding/web channels (unrelated surface) can
catch. A few "orphan" positives are unrecoverable on every channel,
capping the best reachable F1 below 1.0 so the mask ranking stays
smooth, and a few decoy negatives share characters with a real term to
fool surface-only masks. Negative pairs otherwise cross-pair terms of
different concepts.

Embedding, translation and first web-distance features carry partial
signal behind noise dials; the second web-distance provider's corpus
co-occurrence is random with respect to labels, making feature 13 a
pure noise column.

Run ``python -m medsyn.synthetic --out DIR`` to materialize the
benchmark as resource files for the command-line tools.
"""

from __future__ import annotations

import argparse
import random
import shutil
from dataclasses import dataclass
from importlib import resources as importlib_resources
from pathlib import Path

import numpy as np

from .core import NEGATIVE, POSITIVE, LabeledPair, Term
from .model import ResourceBundle
from .resources import (
    Dataset,
    EmbeddingTable,
    TranslationLexicon,
    bundled_pinyin_table,
    bundled_radical_table,
    save_dataset,
    save_embeddings,
)
from .web_dist import CorpusHitCountProvider, build_corpus_index, save_corpus_index

_PERTURBATIONS = ("homophone", "radical", "shared_translation", "small_edit")

_SYLLABLES = (
    "ba", "ben", "cor", "dal", "dex", "fen", "gar", "hol", "jin", "kel",
    "lor", "mab", "nex", "por", "quin", "rel", "sar", "tev", "ul", "vex",
    "wim", "xan", "yor", "zeb", "mor", "tas", "pri", "lin",
)


@dataclass(frozen=True)
class BenchmarkConfig:
    seed: int = 0
    n_positive: int = 300
    n_negative: int = 300
    embedding_dim: int = 16
    #: Gaussian noise added to a concept's base vector per term.
    embedding_noise: float = 0.6
    #: Fraction of terms left out of the Chinese embedding table.
    embedding_oov: float = 0.2
    #: Fraction of positive concepts whose translation sets are related.
    shared_phrase: float = 0.65
    #: Fraction of positive concepts with co-occurrence documents in the
    #: first provider's corpus.
    cooccurrence: float = 0.65
    #: Fraction of concepts whose translations live only in the lexicon.
    lexicon_only: float = 0.1
    #: Within the homophone/radical kinds, fraction whose swap touches
    #: every character instead of one.
    full_swap: float = 0.2
    #: Positives that no feature can catch (unrelated on every channel).
    orphan: float = 0.04
    #: Negatives sharing surface characters with a real term, fooling
    #: surface-only masks.
    decoy_negative: float = 0.04


@dataclass(frozen=True)
class Benchmark:
    dataset: Dataset
    bundle: ResourceBundle
    config: BenchmarkConfig


class _Generator:
    def __init__(self, config: BenchmarkConfig):
        self.config = config
        self.rng = random.Random(config.seed)
        self.np_rng = np.random.default_rng(config.seed)
        self.pinyin = bundled_pinyin_table()
        self.radicals = bundled_radical_table()
        self.inventory = sorted(self.pinyin.entries)
        self.homophones = self._group(self.pinyin.entries)
        self.radical_groups = self._group(self.radicals.entries)
        self.surfaces: set[str] = set()
        self.words: set[str] = set()

    @staticmethod
    def _group(table: dict[str, str]) -> dict[str, list[str]]:
        groups: dict[str, list[str]] = {}
        for char, key in table.items():
            groups.setdefault(key, []).append(char)
        return {k: sorted(v) for k, v in groups.items() if len(v) >= 2}

    def _new_surface(self, length: int) -> str:
        while True:
            surface = "".join(self.rng.choice(self.inventory) for _ in range(length))
            if surface not in self.surfaces:
                self.surfaces.add(surface)
                return surface

    def _register(self, surface: str) -> bool:
        if surface in self.surfaces:
            return False
        self.surfaces.add(surface)
        return True

    def _pseudo_word(self) -> str:
        while True:
            n = self.rng.choice((2, 3))
            word = "".join(self.rng.choice(_SYLLABLES) for _ in range(n))
            if word not in self.words:
                self.words.add(word)
                return word

    def _swap_char(self, base: str, position: int, groups, table) -> str | None:
        char = base[position]
        candidates = [c for c in groups.get(table[char], []) if c != char]
        if not candidates:
            return None
        replacement = self.rng.choice(candidates)
        return base[:position] + replacement + base[position + 1 :]

    def _perturb(self, base: str, kind: str, full: bool) -> str:
        """A synonym surface for ``base``: one changed character, or (for
        the homophone/radical kinds with ``full``) every character."""
        rng = self.rng
        if kind == "homophone":
            groups, table = self.homophones, self.pinyin.entries
        elif kind == "radical":
            groups, table = self.radical_groups, self.radicals.entries
        else:
            groups = table = None
        for _ in range(100):
            if kind in ("homophone", "radical"):
                if full:
                    candidate = base
                    for position in range(len(base)):
                        swapped = self._swap_char(candidate, position, groups, table)
                        if swapped is not None:
                            candidate = swapped
                else:
                    candidate = self._swap_char(base, rng.randrange(len(base)), groups, table)
                    if candidate is None:
                        continue
            elif kind == "shared_translation":
                # Surface carries no signal; the shared phrase is the tie.
                candidate = "".join(
                    rng.choice(self.inventory) for _ in range(rng.choice((3, 4)))
                )
            else:  # small_edit
                position = rng.randrange(len(base))
                op = rng.choice(("insert", "delete", "replace"))
                if op == "insert":
                    candidate = base[:position] + rng.choice(self.inventory) + base[position:]
                elif op == "delete" and len(base) > 2:
                    candidate = base[:position] + base[position + 1 :]
                else:
                    replacement = rng.choice(self.inventory)
                    if replacement == base[position]:
                        continue
                    candidate = base[:position] + replacement + base[position + 1 :]
            if candidate != base and self._register(candidate):
                return candidate
        raise RuntimeError(f"could not perturb {base!r} with {kind}")

    def _fresh_phrase(self) -> str:
        w1, w2 = self._pseudo_word(), self._pseudo_word()
        return f"{w1.capitalize()} {w2.capitalize()}"

    def _phrases(self, kind: str) -> tuple[tuple[str, ...], tuple[str, ...]]:
        """Translation sets for the two terms of one positive concept.

        Related sets come in four shapes so the morphological features
        decorrelate: identical phrase, suffixed second word, reordered
        words, and a shared head word.
        """
        rng = self.rng
        phrase = self._fresh_phrase()
        related = kind == "shared_translation" or rng.random() < self.config.shared_phrase
        if not related:
            return (phrase,), (self._fresh_phrase(),)
        first, second = phrase.split()
        roll = rng.random()
        if roll < 0.40:
            return (phrase,), (phrase,)
        if roll < 0.70:
            return (phrase,), (f"{first} {second}um",)
        if roll < 0.85:
            return (phrase,), (f"{second} {first}",)
        return (phrase,), (f"{self._pseudo_word().capitalize()} {second}",)

    def build(self) -> Benchmark:
        cfg = self.config
        rng = self.rng

        concepts = []
        for i in range(cfg.n_positive):
            kind = _PERTURBATIONS[i % len(_PERTURBATIONS)]
            full = kind in ("homophone", "radical") and rng.random() < cfg.full_swap
            orphan = rng.random() < cfg.orphan
            base = self._new_surface(rng.choice((3, 4)))
            if orphan:
                synonym = self._new_surface(rng.choice((3, 4)))
                trans_a, trans_b = (self._fresh_phrase(),), (self._fresh_phrase(),)
            else:
                synonym = self._perturb(base, kind, full)
                trans_a, trans_b = self._phrases(kind)
            concepts.append(
                {
                    "base": base,
                    "synonym": synonym,
                    "trans_a": trans_a,
                    "trans_b": trans_b,
                    "lexicon_only": rng.random() < cfg.lexicon_only,
                    "cooccur": not orphan and rng.random() < cfg.cooccurrence,
                    "oov_a": orphan or rng.random() < cfg.embedding_oov,
                    "oov_b": orphan or rng.random() < cfg.embedding_oov,
                }
            )

        lexicon_entries: dict[str, tuple[str, ...]] = {}

        def make_term(surface: str, translations: tuple[str, ...], lexicon_only: bool) -> Term:
            if lexicon_only:
                lexicon_entries[surface] = translations
                return Term(surface)
            return Term(surface, translations)

        pairs = []
        for concept in concepts:
            term_a = make_term(concept["base"], concept["trans_a"], concept["lexicon_only"])
            term_b = make_term(concept["synonym"], concept["trans_b"], concept["lexicon_only"])
            concept["term_a"], concept["term_b"] = term_a, term_b
            pairs.append(LabeledPair(a=term_a, b=term_b, label=POSITIVE))

        # Decoy negatives: a fresh term sharing all but one character with
        # a real base, with its own unrelated phrase and embedding.
        decoys = []
        n_decoys = round(cfg.decoy_negative * cfg.n_negative)
        for _ in range(n_decoys):
            source = rng.choice(concepts)
            surface = self._perturb(source["base"], "small_edit", False)
            decoy_term = Term(surface, (self._fresh_phrase(),))
            decoys.append(decoy_term)
            side = rng.random() < 0.5
            pair = LabeledPair(
                a=source["term_a"] if side else decoy_term,
                b=decoy_term if side else source["term_a"],
                label=NEGATIVE,
            )
            pairs.append(pair)

        seen_cross = set()
        while len(pairs) < cfg.n_positive + cfg.n_negative:
            i, j = rng.randrange(len(concepts)), rng.randrange(len(concepts))
            if i == j or (i, j) in seen_cross:
                continue
            seen_cross.add((i, j))
            term_a = concepts[i]["term_a" if rng.random() < 0.5 else "term_b"]
            term_b = concepts[j]["term_b" if rng.random() < 0.5 else "term_a"]
            pairs.append(LabeledPair(a=term_a, b=term_b, label=NEGATIVE))

        dataset = Dataset(pairs=tuple(pairs))

        zh_entries: dict[str, np.ndarray] = {}
        for concept in concepts:
            center = self.np_rng.normal(size=cfg.embedding_dim)
            for key, oov in (("base", "oov_a"), ("synonym", "oov_b")):
                noise = cfg.embedding_noise * self.np_rng.normal(size=cfg.embedding_dim)
                if not concept[oov]:
                    zh_entries[concept[key]] = center + noise
        for decoy in decoys:
            zh_entries[decoy.surface] = self.np_rng.normal(size=cfg.embedding_dim)
        zh_table = EmbeddingTable(dimension=cfg.embedding_dim, entries=zh_entries)

        en_entries: dict[str, np.ndarray] = {}
        all_phrases = [
            phrase
            for concept in concepts
            for phrase in concept["trans_a"] + concept["trans_b"]
        ] + [phrase for decoy in decoys for phrase in decoy.translations]
        for phrase in all_phrases:
            for token in phrase.lower().split():
                if token in en_entries:
                    continue
                if token.endswith("um") and token[:-2] in en_entries:
                    vector = en_entries[token[:-2]] + 0.15 * self.np_rng.normal(
                        size=cfg.embedding_dim
                    )
                else:
                    vector = self.np_rng.normal(size=cfg.embedding_dim)
                en_entries[token] = vector
        en_table = EmbeddingTable(dimension=cfg.embedding_dim, entries=en_entries)

        vocabulary = sorted({p.a.surface for p in pairs} | {p.b.surface for p in pairs})

        docs12: list[str] = []
        for n, surface in enumerate(vocabulary):
            for copy in range(1 + rng.randrange(2)):
                docs12.append(f"record {n}.{copy}: {surface}")
        for concept in concepts:
            if concept["cooccur"]:
                docs12.append(f"joint: {concept['base']} {concept['synonym']}")
                docs12.append(f"joint: {concept['synonym']} and {concept['base']}")
        index12 = build_corpus_index(docs12, vocabulary)

        docs13: list[str] = []
        for n, surface in enumerate(vocabulary):
            for copy in range(1 + rng.randrange(2)):
                docs13.append(f"page {n}.{copy}: {surface}")
        for pair in pairs:  # co-occurrence independent of the label
            if rng.random() < 0.5:
                for copy in range(1 + rng.randrange(2)):
                    docs13.append(f"page x{copy}: {pair.a.surface} {pair.b.surface}")
        index13 = build_corpus_index(docs13, vocabulary)

        bundle = ResourceBundle(
            zh_embeddings=zh_table,
            en_embeddings=en_table,
            pinyin=self.pinyin,
            radicals=self.radicals,
            lexicon=TranslationLexicon(entries=lexicon_entries),
            provider12=CorpusHitCountProvider(index12),
            provider13=CorpusHitCountProvider(index13),
        )
        return Benchmark(dataset=dataset, bundle=bundle, config=cfg)


def generate_benchmark(config: BenchmarkConfig | None = None, **overrides) -> Benchmark:
    """Build the synthetic benchmark for a config (or config overrides)."""
    if config is None:
        config = BenchmarkConfig(**overrides)
    elif overrides:
        raise TypeError("pass either a config or overrides, not both")
    return _Generator(config).build()


def write_benchmark_files(benchmark: Benchmark, outdir) -> dict[str, Path]:
    """Materialize the benchmark as the file formats the CLI consumes."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {
        "dataset": outdir / "dataset.tsv",
        "zh_embeddings": outdir / "zh_embeddings.txt",
        "en_embeddings": outdir / "en_embeddings.txt",
        "pinyin": outdir / "pinyin.tsv",
        "radicals": outdir / "radicals.tsv",
        "lexicon": outdir / "lexicon.tsv",
        "index12": outdir / "corpus12_index.tsv",
        "index13": outdir / "corpus13_index.tsv",
    }
    save_dataset(benchmark.dataset, paths["dataset"])
    save_embeddings(benchmark.bundle.zh_embeddings, paths["zh_embeddings"])
    save_embeddings(benchmark.bundle.en_embeddings, paths["en_embeddings"])
    data_root = importlib_resources.files("medsyn").joinpath("data")
    with importlib_resources.as_file(data_root.joinpath("pinyin_table.tsv")) as p:
        shutil.copy(p, paths["pinyin"])
    with importlib_resources.as_file(data_root.joinpath("radical_table.tsv")) as p:
        shutil.copy(p, paths["radicals"])
    with open(paths["lexicon"], "w", encoding="utf-8") as f:
        for surface, translations in sorted(benchmark.bundle.lexicon.entries.items()):
            f.write(f"{surface}\t{'||'.join(translations)}\n")
    save_corpus_index(benchmark.bundle.provider12.index, paths["index12"])
    save_corpus_index(benchmark.bundle.provider13.index, paths["index13"])
    return paths


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="python -m medsyn.synthetic",
        description="Generate the seeded synthetic benchmark as resource files.",
    )
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--positive", type=int, default=300)
    parser.add_argument("--negative", type=int, default=300)
    args = parser.parse_args(argv)
    benchmark = generate_benchmark(
        seed=args.seed, n_positive=args.positive, n_negative=args.negative
    )
    paths = write_benchmark_files(benchmark, args.out)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
