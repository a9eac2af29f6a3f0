"""Token frequencies, stopword sets and per-sentence exemption ledgers."""

from collections import Counter
from dataclasses import dataclass, field
from typing import AbstractSet, Dict, Iterable, List, Sequence

from .corpus import EvalInstance
from .embeddings import EmbeddingTable, SynonymConfig, has_cjk

DEFAULT_K_CJK = 3
DEFAULT_K_OTHER = 10


@dataclass(frozen=True)
class FrequencyTable:
    counts: Dict[str, int] = field(default_factory=dict)
    total: int = 0

    @classmethod
    def from_counter(cls, counter: Counter) -> "FrequencyTable":
        return cls(dict(counter), sum(counter.values()))

    def most_common(self, k: int) -> List[str]:
        ranked = sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return [tok for tok, _ in ranked[:k]]


@dataclass(frozen=True)
class StopwordSet:
    tokens: AbstractSet[str] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "tokens", frozenset(self.tokens))

    def __contains__(self, token):
        return token in self.tokens

    def __iter__(self):
        return iter(sorted(self.tokens))

    def __len__(self):
        return len(self.tokens)

    def __or__(self, other):
        return StopwordSet(self.tokens | set(other))

    def normalized(self, config: SynonymConfig) -> "StopwordSet":
        if not config.lowercase:
            return self
        return StopwordSet({config.key(t) for t in self.tokens})


class ExemptionLedger:
    """Remaining exemption quota per token, consumed during one scoring pass."""

    def __init__(self, quotas: Dict[str, int] = None):
        self.quotas: Dict[str, int] = {}
        for tok, q in (quotas or {}).items():
            if q < 0:
                raise ValueError(f"negative quota for {tok!r}")
            if q:
                self.quotas[tok] = q

    def quota(self, token: str) -> int:
        return self.quotas.get(token, 0)

    def consume(self, token: str) -> bool:
        q = self.quotas.get(token, 0)
        if q <= 0:
            return False
        self.quotas[token] = q - 1
        return True

    def copy(self) -> "ExemptionLedger":
        return ExemptionLedger(self.quotas)

    def __repr__(self):
        return f"ExemptionLedger({self.quotas!r})"

    def __eq__(self, other):
        return isinstance(other, ExemptionLedger) and self.quotas == other.quotas


def count_tokens(lines: Iterable[str]) -> FrequencyTable:
    counter = Counter()
    for line in lines:
        counter.update(line.split())
    return FrequencyTable.from_counter(counter)


def count_frequencies(corpus_path) -> FrequencyTable:
    with open(corpus_path, encoding="utf-8") as f:
        return count_tokens(f)


def derive_stopwords(freq: FrequencyTable, k: int) -> StopwordSet:
    """The ``k`` most frequent tokens; ties go to the lexicographically smaller surface."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    return StopwordSet(freq.most_common(k))


def is_cjk_corpus(freq: FrequencyTable) -> bool:
    """True when most token occurrences contain CJK characters."""
    cjk = sum(n for tok, n in freq.counts.items() if has_cjk(tok))
    return freq.total > 0 and 2 * cjk > freq.total


def default_stopword_k(freq: FrequencyTable, k_cjk: int = DEFAULT_K_CJK, k_other: int = DEFAULT_K_OTHER) -> int:
    return k_cjk if is_cjk_corpus(freq) else k_other


def load_stopwords(path) -> StopwordSet:
    with open(path, encoding="utf-8") as f:
        return StopwordSet(line.strip() for line in f if line.strip())


def format_stopwords(stopwords: StopwordSet, freq: FrequencyTable = None) -> str:
    # frequency order when known, so the file reads top-down
    if freq is not None:
        order = sorted(stopwords.tokens, key=lambda t: (-freq.counts.get(t, 0), t))
    else:
        order = sorted(stopwords.tokens)
    return "".join(f"{t}\n" for t in order)


def _support_counts(keys: Sequence[str], surfaces: Sequence[str], side: Sequence[str],
                    table: EmbeddingTable, config: SynonymConfig) -> List[int]:
    side_keys = Counter(config.key(s) for s in side)
    counts = [side_keys[k] for k in keys]
    if len(table) and side:
        syn = table.synonym_matrix(surfaces, side, config)
        counts = [c + int(n) for c, n in zip(counts, syn.sum(axis=1))]
    return counts


def build_exemption_ledger(instance: EvalInstance, table: EmbeddingTable, config: SynonymConfig) -> ExemptionLedger:
    """Quota per hypothesis token: occurrences of it or a synonym in the
    reference or source, minus one, taking the larger side."""
    first: Dict[str, str] = {}
    for s in instance.hypothesis.surfaces:
        first.setdefault(config.key(s), s)
    keys, surfaces = list(first), list(first.values())
    if not keys:
        return ExemptionLedger()
    c_ref = _support_counts(keys, surfaces, instance.reference.surfaces, table, config)
    c_src = _support_counts(keys, surfaces, instance.source.surfaces, table, config)
    quotas = {}
    for k, r, s in zip(keys, c_ref, c_src):
        best = max(r, s)
        if best >= 2:
            quotas[k] = best - 1
    return ExemptionLedger(quotas)
