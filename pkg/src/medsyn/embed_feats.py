"""Word-vector features: Chinese cosine (1), English-set cosine (2),
Euclidean distance (3).

All vectors are numpy float64 arrays of the owning table's dimension.
Missing is represented as None, never raised.
"""

from __future__ import annotations

import numpy as np

from .core import Term
from .resources import EmbeddingTable

MISSING = None


def lookup_term_vector(term: Term, table: EmbeddingTable):
    """Exact-token lookup of the surface; falls back to the mean of
    per-character vectors for covered characters; None if nothing covers."""
    vec = table.entries.get(term.surface)
    if vec is not None:
        return vec
    char_vecs = [table.entries[ch] for ch in term.surface if ch in table.entries]
    if not char_vecs:
        return MISSING
    return np.mean(char_vecs, axis=0)


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine of the angle between two equal-length vectors, clamped to
    [-1, 1] against rounding. Zero-norm input is an error (undefined angle)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"vector length mismatch: {a.shape} vs {b.shape}")
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0.0 or norm_b == 0.0:
        raise ValueError("cosine similarity undefined for a zero-norm vector")
    value = float(np.dot(a, b) / (norm_a * norm_b))
    return min(1.0, max(-1.0, value))


def average_vector(vectors) -> np.ndarray:
    """Component-wise arithmetic mean of a non-empty list of equal-length
    vectors."""
    if len(vectors) == 0:
        raise ValueError("cannot average an empty list of vectors")
    arrays = [np.asarray(v, dtype=np.float64) for v in vectors]
    dim = arrays[0].shape
    for arr in arrays[1:]:
        if arr.shape != dim:
            raise ValueError(f"mixed vector lengths: {dim} vs {arr.shape}")
    return np.mean(arrays, axis=0)


def _translation_vector(translation: str, table: EmbeddingTable):
    # Multi-word translations embed as the mean over covered tokens;
    # lookup tries the token as written, then lowercased.
    token_vecs = []
    for token in translation.split():
        vec = table.entries.get(token)
        if vec is None:
            vec = table.entries.get(token.lower())
        if vec is not None:
            token_vecs.append(vec)
    if not token_vecs:
        return MISSING
    return np.mean(token_vecs, axis=0)


def set_average_vector(enlist, table: EmbeddingTable):
    """Mean vector of a translation set (mean over its translations'
    token-average vectors); None if no translation is representable."""
    vecs = []
    for translation in enlist:
        vec = _translation_vector(translation, table)
        if vec is not None:
            vecs.append(vec)
    if not vecs:
        return MISSING
    return average_vector(vecs)


def set_cosine(enlist_a, enlist_b, table: EmbeddingTable):
    """Cosine of the two translation sets' average vectors; None if either
    set yields no representable vector (or averages to zero norm)."""
    avg_a = set_average_vector(enlist_a, table)
    avg_b = set_average_vector(enlist_b, table)
    if avg_a is None or avg_b is None:
        return MISSING
    if np.linalg.norm(avg_a) == 0.0 or np.linalg.norm(avg_b) == 0.0:
        return MISSING
    return cosine_similarity(avg_a, avg_b)


def euclidean_distance(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"vector length mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))
