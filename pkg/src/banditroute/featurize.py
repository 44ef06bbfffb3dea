"""Turn query text into feature vectors.

Two routes: a deterministic hashing-trick featurizer (FNV-1a over word
n-grams, signed buckets), and lookup in a precomputed embedding table
written by an external encoder. FNV-1a was picked because it is trivial to
reimplement independently, which keeps the featurizer cross-checkable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .exceptions import ConfigurationError, DataFormatError, MissingEntryError
from .types import Query
from .validation import check_feature_vector

FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1

_WORD_RE = re.compile(r"\w+", re.UNICODE)


def fnv1a_64(data: bytes) -> int:
    """64-bit FNV-1a over a byte string."""
    h = FNV64_OFFSET
    for b in data:
        h ^= b
        h = (h * FNV64_PRIME) & _MASK64
    return h


def tokenize(text: str) -> list[str]:
    """Lowercased unicode word tokens."""
    return _WORD_RE.findall(text.lower())


def hash_features(
    text: str, dim: int = 256, ngram_max: int = 2, normalize: bool = True
) -> np.ndarray:
    """Hash word n-grams (n = 1..ngram_max) into a signed bucket vector.

    bucket = fnv1a(gram) mod dim, sign from bit 63 of the hash. N-grams are
    the tokens joined by a single space. Deterministic: identical
    (text, dim, ngram_max, normalize) always yields the identical vector.
    Empty text yields the zero vector (normalization leaves it zero).
    """
    if dim < 1:
        raise ConfigurationError(f"dim must be >= 1, got {dim}")
    if ngram_max < 1:
        raise ConfigurationError(f"ngram_max must be >= 1, got {ngram_max}")
    tokens = tokenize(text)
    vec = np.zeros(dim, dtype=np.float64)
    for n in range(1, ngram_max + 1):
        for i in range(len(tokens) - n + 1):
            h = fnv1a_64(" ".join(tokens[i : i + n]).encode("utf-8"))
            sign = 1.0 if (h >> 63) == 0 else -1.0
            vec[h % dim] += sign
    if normalize:
        norm = float(np.linalg.norm(vec))
        if norm > 0.0:
            vec /= norm
    return vec


class HashingQueryFeaturizer(BaseEstimator, TransformerMixin):
    """Stateless sklearn-style transformer from raw texts to hashed vectors."""

    def __init__(self, dim: int = 256, ngram_max: int = 2, normalize: bool = True):
        self.dim = dim
        self.ngram_max = ngram_max
        self.normalize = normalize

    def fit(self, X, y=None):
        return self

    def transform(self, X) -> np.ndarray:
        return np.stack(
            [hash_features(t, self.dim, self.ngram_max, self.normalize) for t in X]
        )


@dataclass(frozen=True)
class EmbeddingTable:
    """Read-only map from query id to a fixed-dimension vector."""

    dim: int
    entries: dict[str, np.ndarray] = field(repr=False)

    def __contains__(self, query_id: str) -> bool:
        return query_id in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def vector(self, query_id: str) -> np.ndarray:
        try:
            return self.entries[query_id]
        except KeyError:
            raise MissingEntryError(
                f"query id {query_id!r} has no embedding row"
            ) from None


def load_embeddings(path) -> EmbeddingTable:
    """Parse the embedding file format: ``#dim <D>`` header, then one
    ``<query_id>\\t<f1> <f2> ... <fD>`` row per query."""
    entries: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        m = re.fullmatch(r"#dim (\d+)", header)
        if m is None:
            raise DataFormatError(
                f"{path}: line 1: expected '#dim <D>' header, got {header!r}"
            )
        dim = int(m.group(1))
        if dim < 1:
            raise DataFormatError(f"{path}: line 1: dim must be positive, got {dim}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            qid, sep, rest = line.partition("\t")
            if not sep or not qid:
                raise DataFormatError(
                    f"{path}: line {lineno}: expected '<query_id>\\t<floats>'"
                )
            try:
                values = np.array([float(v) for v in rest.split()], dtype=np.float64)
            except ValueError:
                raise DataFormatError(
                    f"{path}: line {lineno}: unparseable float value"
                ) from None
            if values.shape[0] != dim:
                raise DataFormatError(
                    f"{path}: line {lineno}: row has {values.shape[0]} values, "
                    f"header says dim={dim}"
                )
            if qid in entries:
                raise DataFormatError(
                    f"{path}: line {lineno}: duplicate query id {qid!r}"
                )
            entries[qid] = values
    return EmbeddingTable(dim=dim, entries=entries)


def save_embeddings(path, table: EmbeddingTable) -> None:
    """Write the embedding file format. Floats use 18 significant digits,
    which round-trips IEEE doubles exactly."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"#dim {table.dim}\n")
        for qid, vec in table.entries.items():
            if "\t" in qid or "\n" in qid:
                raise DataFormatError(f"query id {qid!r} cannot contain tab/newline")
            fh.write(
                qid + "\t" + " ".join(format(float(v), ".17e") for v in vec) + "\n"
            )


class QueryFeaturizer:
    """Resolve a Query to its feature vector.

    Precedence: the query's own precomputed features, then the embedding
    table, then the hashing featurizer (unless ``allow_fallback`` is off, in
    which case a missing table entry is an error). When a table is present
    its dimension wins and the hash dimension must agree.
    """

    def __init__(
        self,
        dim: int = 256,
        ngram_max: int = 2,
        normalize: bool = True,
        table: EmbeddingTable | None = None,
        allow_fallback: bool = True,
        cache: bool = True,
        table_path: str | None = None,
    ):
        if table is not None and allow_fallback and table.dim != dim:
            raise ConfigurationError(
                f"hash dim {dim} disagrees with embedding table dim {table.dim}; "
                "fallback vectors would be incompatible"
            )
        self.dim = table.dim if table is not None else dim
        self.ngram_max = ngram_max
        self.normalize = normalize
        self.table = table
        self.allow_fallback = allow_fallback
        self.table_path = table_path
        # keyed by (id, text): ids alone may repeat across datasets
        self._cache: dict[tuple[str, str], np.ndarray] | None = {} if cache else None

    def vector(self, query: Query) -> np.ndarray:
        key = (query.id, query.text)
        if self._cache is not None and key in self._cache:
            return self._cache[key]
        if query.features is not None:
            vec = check_feature_vector(query.features, self.dim)
        elif self.table is not None and query.id in self.table:
            vec = self.table.vector(query.id)
        elif self.table is not None and not self.allow_fallback:
            raise MissingEntryError(
                f"query id {query.id!r} not in embedding table and fallback disabled"
            )
        else:
            vec = hash_features(query.text, self.dim, self.ngram_max, self.normalize)
        if self._cache is not None:
            self._cache[key] = vec
        return vec

    def config(self) -> dict:
        """Serializable description, embedded in checkpoints."""
        cfg = {
            "kind": "hash",
            "dim": self.dim,
            "ngram_max": self.ngram_max,
            "normalize": self.normalize,
        }
        if self.table is not None:
            cfg["kind"] = "embeddings"
            cfg["allow_fallback"] = self.allow_fallback
            if self.table_path is not None:
                cfg["path"] = self.table_path
        return cfg


_FEATURIZER_KEYS = {
    "hash": {"kind", "dim", "ngram_max", "normalize"},
    "embeddings": {"kind", "dim", "ngram_max", "normalize", "allow_fallback", "path"},
}


def featurizer_from_config(cfg: dict) -> QueryFeaturizer:
    """Inverse of QueryFeaturizer.config; embedding tables are reloaded
    from the recorded path.
    """
    if not isinstance(cfg, dict):
        raise ConfigurationError(f"featurizer config must be a mapping, got {cfg!r}")
    kind = cfg.get("kind", "hash")
    if kind not in _FEATURIZER_KEYS:
        raise ConfigurationError(f"unknown featurizer kind {kind!r}")
    unknown = set(cfg) - _FEATURIZER_KEYS[kind]
    if unknown:
        raise ConfigurationError(
            f"unknown featurizer config keys: {sorted(unknown)}"
        )
    dim = cfg.get("dim", 256)
    ngram_max = cfg.get("ngram_max", 2)
    normalize = cfg.get("normalize", True)
    if kind == "hash":
        return QueryFeaturizer(dim=dim, ngram_max=ngram_max, normalize=normalize)
    path = cfg.get("path")
    if path is None:
        raise ConfigurationError(
            "embeddings featurizer config needs a 'path' to reload the table"
        )
    table = load_embeddings(path)
    if "dim" in cfg and table.dim != dim:
        raise ConfigurationError(
            f"embedding table at {path} has dim {table.dim}, config says {dim}"
        )
    return QueryFeaturizer(
        dim=table.dim,
        ngram_max=ngram_max,
        normalize=normalize,
        table=table,
        allow_fallback=cfg.get("allow_fallback", True),
        table_path=path,
    )


__all__ = [
    "EmbeddingTable",
    "FNV64_OFFSET",
    "FNV64_PRIME",
    "HashingQueryFeaturizer",
    "QueryFeaturizer",
    "featurizer_from_config",
    "fnv1a_64",
    "hash_features",
    "load_embeddings",
    "save_embeddings",
    "tokenize",
]
