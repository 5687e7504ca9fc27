"""Token encoders behind the alignment endpoint.

The service does word-level alignment, but encoders work on subwords; every
encoder mean-pools its subword vectors back to one vector per word. The
default encoder is a deterministic hash projection (no weights to download,
bit-stable across machines); a transformers-backed encoder is available via
configuration for real multilingual embeddings.
"""

from __future__ import annotations

import hashlib
import os

import numpy as np

DEFAULT_DIM = 64


def _hash_vector(token: str, dim: int) -> np.ndarray:
    """Deterministic pseudo-random unit-scale vector from SHA-256 bytes."""
    raw = bytearray()
    counter = 0
    while len(raw) < dim:
        digest = hashlib.sha256(f"{token}\x1f{counter}".encode("utf-8")).digest()
        raw.extend(digest)
        counter += 1
    values = np.frombuffer(bytes(raw[:dim]), dtype=np.uint8).astype(np.float64)
    return values / 127.5 - 1.0  # [-1, 1]


def _char_ngrams(word: str, n: int = 3) -> list[str]:
    padded = f"<{word}>"
    if len(padded) <= n:
        return [padded]
    return [padded[i : i + n] for i in range(len(padded) - n + 1)]


class HashEncoder:
    """Character-n-gram hash embeddings, mean-pooled per word.

    Purely arithmetic: same input always yields the same matrix, with no
    model files and no network. Shared character n-grams give related
    surface forms correlated vectors, which is enough to exercise the
    alignment contract end to end.
    """

    def __init__(self, dim: int = DEFAULT_DIM):
        self.dim = dim
        self.model_id = f"hash-ngram-v1:dim{dim}"

    def encode(self, tokens: list[str]) -> np.ndarray:
        out = np.empty((len(tokens), self.dim), dtype=np.float64)
        for i, token in enumerate(tokens):
            subvectors = [_hash_vector(gram, self.dim) for gram in _char_ngrams(token)]
            out[i] = np.mean(subvectors, axis=0)
        return out


class TransformersEncoder:
    """Multilingual contextual embeddings from a transformers model.

    Each word is tokenized into subwords; its vector is the mean of the
    subword hidden states at the configured layer. CPU inference with
    gradients disabled keeps results deterministic for a fixed model.
    """

    def __init__(self, model_name: str, layer: int = 8):
        import torch  # deferred: heavy optional dependency
        from transformers import AutoModel, AutoTokenizer

        self._torch = torch
        self.tokenizer = AutoTokenizer.from_pretrained(model_name)
        self.model = AutoModel.from_pretrained(model_name, output_hidden_states=True)
        self.model.eval()
        self.layer = layer
        self.model_id = f"{model_name}:layer{layer}"

    def encode(self, tokens: list[str]) -> np.ndarray:
        torch = self._torch
        encoding = self.tokenizer(
            tokens, is_split_into_words=True, return_tensors="pt", truncation=True
        )
        with torch.no_grad():
            hidden = self.model(**encoding).hidden_states[self.layer][0]
        word_ids = encoding.word_ids(0)
        vectors = []
        for index in range(len(tokens)):
            positions = [p for p, w in enumerate(word_ids) if w == index]
            if not positions:  # truncated away: fall back to a zero vector
                vectors.append(np.zeros(hidden.shape[-1]))
                continue
            vectors.append(hidden[positions].mean(dim=0).numpy())
        return np.stack(vectors).astype(np.float64)


def softmax_rows(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def association_matrix(
    src_vectors: np.ndarray, tgt_vectors: np.ndarray, bidirectional: bool = False
) -> np.ndarray:
    """Dot products of the two embedding matrices, softmaxed per source row.

    With ``bidirectional`` on, the target-side softmax is multiplied in and
    rows are renormalized, favouring mutually preferred pairs while keeping
    the row-stochastic contract.
    """
    scores = src_vectors @ tgt_vectors.T
    probs = softmax_rows(scores)
    if bidirectional:
        reverse = softmax_rows(scores.T).T
        probs = probs * reverse
        probs = probs / probs.sum(axis=1, keepdims=True)
    return probs


def encoder_from_env():
    """Build the configured encoder: EMBED_ALIGN_ENCODER=hash|transformers."""
    kind = os.environ.get("EMBED_ALIGN_ENCODER", "hash")
    if kind == "hash":
        dim = int(os.environ.get("EMBED_ALIGN_DIM", str(DEFAULT_DIM)))
        return HashEncoder(dim=dim)
    if kind == "transformers":
        model_name = os.environ.get("EMBED_ALIGN_MODEL", "bert-base-multilingual-cased")
        layer = int(os.environ.get("EMBED_ALIGN_LAYER", "8"))
        return TransformersEncoder(model_name, layer=layer)
    raise ValueError(f"unknown encoder kind {kind!r}")
