"""Token embeddings and the embedding-based synonym predicate.

The embedding file is word2vec text format: a header line ``V D`` followed by
``V`` rows ``token v1 ... vD``.  Row order is taken as frequency rank, which
holds for fairseq-style dictionaries.
"""

import math
from dataclasses import dataclass, field
from typing import AbstractSet, Dict, Iterable, List, Optional, Sequence, Set

import numpy as np

from .corpus import Token
from .errors import DuplicateToken, FormatError

DEFAULT_TAU = 0.8


@dataclass(frozen=True)
class SynonymConfig:
    tau: float = DEFAULT_TAU
    excluded: AbstractSet[str] = field(default_factory=frozenset)
    lowercase: bool = False

    def __post_init__(self):
        if not 0.0 < self.tau <= 1.0:
            raise ValueError(f"tau must be in (0, 1], got {self.tau}")
        object.__setattr__(self, "excluded", frozenset(self.excluded))

    def key(self, surface: str) -> str:
        """Comparison form of a surface string."""
        return surface.lower() if self.lowercase else surface


class EmbeddingTable:
    """Immutable token -> vector table, ordered by frequency rank."""

    def __init__(self, tokens: Sequence[str], vectors, dimension: Optional[int] = None):
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.size == 0:
            vectors = vectors.reshape(0, dimension or (vectors.shape[-1] if vectors.ndim == 2 else 1))
        if vectors.ndim != 2 or vectors.shape[0] != len(tokens):
            raise ValueError(f"expected a {len(tokens)} x D matrix, got shape {vectors.shape}")
        if vectors.shape[1] < 1:
            raise ValueError("dimension must be positive")
        if not np.all(np.isfinite(vectors)):
            raise ValueError("embedding vectors must be finite")
        self.tokens: List[str] = list(tokens)
        self.index: Dict[str, int] = {}
        for i, tok in enumerate(self.tokens):
            if tok in self.index:
                raise DuplicateToken(tok)
            self.index[tok] = i
        self.vectors = vectors
        self.vectors.flags.writeable = False
        norms = np.linalg.norm(vectors, axis=1)
        safe = np.where(norms > 0, norms, 1.0)
        # zero rows stay zero, so their cosine with anything is 0
        self.unit = vectors / safe[:, None]
        self.unit.flags.writeable = False

    @classmethod
    def empty(cls, dimension: int = 1) -> "EmbeddingTable":
        return cls([], np.zeros((0, dimension)))

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    @property
    def entries(self) -> Dict[str, np.ndarray]:
        return {tok: self.vectors[i] for i, tok in enumerate(self.tokens)}

    def __len__(self):
        return len(self.tokens)

    def __contains__(self, token):
        return token in self.index

    def vector(self, token: str) -> np.ndarray:
        return self.vectors[self.index[token]]

    def lookup(self, surface: str, config: SynonymConfig) -> int:
        """Row index for ``surface`` or -1 if it cannot take part in a synonym verdict."""
        if surface in config.excluded:
            return -1
        key = config.key(surface)
        if key != surface and key in config.excluded:
            return -1
        i = self.index.get(key)
        if i is None and key != surface:
            i = self.index.get(surface)
        return -1 if i is None else i

    def synonym_matrix(self, left: Sequence[str], right: Sequence[str], config: SynonymConfig) -> np.ndarray:
        """Boolean matrix ``M[i, j] = is_synonym(left[i], right[j])``."""
        out = np.zeros((len(left), len(right)), dtype=bool)
        if not len(self.tokens) or not len(left) or not len(right):
            return out
        li = np.array([self.lookup(s, config) for s in left], dtype=np.intp)
        ri = np.array([self.lookup(s, config) for s in right], dtype=np.intp)
        lrows = np.flatnonzero(li >= 0)
        rrows = np.flatnonzero(ri >= 0)
        if not len(lrows) or not len(rrows):
            return out
        sims = self.unit[li[lrows]] @ self.unit[ri[rrows]].T
        out[np.ix_(lrows, rrows)] = sims > config.tau
        ids: Dict[str, int] = {}
        lk = np.array([ids.setdefault(config.key(s), len(ids)) for s in left])
        rk = np.array([ids.setdefault(config.key(s), len(ids)) for s in right])
        out &= lk[:, None] != rk[None, :]
        return out

    def synonyms_of(self, surface: str, config: SynonymConfig) -> List[str]:
        """All table tokens that are synonyms of ``surface``, in rank order."""
        i = self.lookup(surface, config)
        if i < 0:
            return []
        sims = self.unit @ self.unit[i]
        key = config.key(surface)
        return [
            self.tokens[j] for j in np.flatnonzero(sims > config.tau)
            if config.key(self.tokens[j]) != key and self.lookup(self.tokens[j], config) == j
        ]


def cosine(u, v) -> float:
    nu = math.sqrt(sum(x * x for x in u))
    nv = math.sqrt(sum(x * x for x in v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return sum(x * y for x, y in zip(u, v)) / (nu * nv)


def _surface(t) -> str:
    return t.surface if isinstance(t, Token) else t


def is_synonym(t1, t2, table: EmbeddingTable, config: SynonymConfig) -> bool:
    s1, s2 = _surface(t1), _surface(t2)
    if config.key(s1) == config.key(s2):
        return False
    i, j = table.lookup(s1, config), table.lookup(s2, config)
    if i < 0 or j < 0:
        return False
    return cosine(table.vectors[i].tolist(), table.vectors[j].tolist()) > config.tau


def _parse_header(line, path):
    parts = line.split()
    if len(parts) != 2:
        raise FormatError("header must be 'V D'", 1, path)
    try:
        v, d = int(parts[0]), int(parts[1])
    except ValueError:
        raise FormatError(f"non-integer header {line.strip()!r}", 1, path) from None
    if v < 0 or d < 1:
        raise FormatError(f"bad header values V={v} D={d}", 1, path)
    return v, d


def load_embeddings(path) -> EmbeddingTable:
    with open(path, encoding="utf-8") as f:
        header = f.readline()
        if not header:
            raise FormatError("empty file, missing 'V D' header", 1, path)
        vocab_size, dim = _parse_header(header, path)
        tokens: List[str] = []
        seen: Dict[str, int] = {}
        vectors = np.empty((vocab_size, dim), dtype=np.float64)
        for lineno, line in enumerate(f, start=2):
            parts = line.rstrip("\r\n").split(" ")
            parts = [p for p in parts if p]
            if not parts:
                raise FormatError("blank row", lineno, path)
            if len(tokens) == vocab_size:
                raise FormatError(f"more rows than the {vocab_size} declared in the header", lineno, path)
            if len(parts) != dim + 1:
                raise FormatError(f"expected token plus {dim} values, got {len(parts) - 1} values", lineno, path)
            tok = parts[0]
            if tok in seen:
                raise DuplicateToken(tok, lineno)
            try:
                row = [float(x) for x in parts[1:]]
            except ValueError:
                raise FormatError("non-numeric value", lineno, path) from None
            if not all(math.isfinite(x) for x in row):
                raise FormatError("non-finite value", lineno, path)
            seen[tok] = lineno
            vectors[len(tokens)] = row
            tokens.append(tok)
    if len(tokens) != vocab_size:
        raise FormatError(f"header declares {vocab_size} rows, found {len(tokens)}", None, path)
    return EmbeddingTable(tokens, vectors, dimension=dim)


def load_token_list(path) -> List[str]:
    """One token per line; blank lines are skipped."""
    with open(path, encoding="utf-8") as f:
        return [line.strip() for line in f if line.strip()]


_CJK_RANGES = (
    (0x3000, 0x303F),    # CJK symbols and punctuation
    (0x3400, 0x4DBF),
    (0x4E00, 0x9FFF),
    (0xF900, 0xFAFF),
    (0xFF00, 0xFFEF),    # fullwidth forms, e.g. the fullwidth comma
    (0x20000, 0x2FA1F),
)


def has_cjk(text: str) -> bool:
    for ch in text:
        cp = ord(ch)
        for lo, hi in _CJK_RANGES:
            if lo <= cp <= hi:
                return True
    return False


def embedding_stopwords(table: EmbeddingTable, k_cjk: int = 3, k_other: int = 10) -> Set[str]:
    """Top-ranked dictionary tokens whose vectors are too central to trust.

    Frequent dictionary entries end up similar to nearly everything, so the
    first ``k_cjk`` CJK-bearing tokens and the first ``k_other`` others are
    collected in rank order.
    """
    cjk: List[str] = []
    other: List[str] = []
    for tok in table.tokens:
        if len(cjk) >= k_cjk and len(other) >= k_other:
            break
        bucket, limit = (cjk, k_cjk) if has_cjk(tok) else (other, k_other)
        if len(bucket) < limit:
            bucket.append(tok)
    return set(cjk) | set(other)


def write_token_list(tokens: Iterable[str]) -> str:
    return "".join(f"{t}\n" for t in tokens)
