"""Bilingual medical-term synonym identification toolkit.

Thirteen similarity features over Chinese/English term pairs, a
max-margin linear classifier, and an exhaustive feature-subset sweep
harness with deterministic, seedable experiments.
"""

from .core import (
    FEATURE_IDS,
    FEATURE_NAMES,
    NEGATIVE,
    POSITIVE,
    ConfusionCounts,
    FeatureVector,
    LabeledPair,
    Metrics,
    Term,
    compute_metrics,
    confusion,
)
from .model import (
    FeatureMask,
    Model,
    ResourceBundle,
    Scaler,
    TrainConfig,
    decision_value,
    extract_features,
    extract_matrix,
    fit_scaler,
    load_model,
    predict,
    save_model,
    train,
    train_pipeline,
)
from .resources import (
    Dataset,
    EmbeddingTable,
    PinyinTable,
    RadicalTable,
    SplitConfig,
    TranslationLexicon,
    bundled_pinyin_table,
    bundled_radical_table,
    load_dataset,
    load_embeddings,
    load_pinyin_table,
    load_radical_table,
    load_translation_lexicon,
    split_train_test,
)
from .web_dist import (
    CorpusHitCountProvider,
    CorpusIndex,
    build_corpus_index,
    capped_ngd,
    load_corpus_index,
    ngd,
    save_corpus_index,
)

__version__ = "0.1.0"
