"""Continuous and discontinuous redundancy detection.

A token is redundant with an earlier one when the two are the same token or
embedding synonyms.  Continuous redundancy compares each token with its left
neighbour.  Discontinuous redundancy compares it with every token further
left, except that stopwords never count and repeats backed by multiple
occurrences in the reference or source consume an exemption quota instead.
A position carrying a continuous flag is not checked for discontinuous
redundancy, so each position contributes at most one counted flag.
"""

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .corpus import EvalInstance, Sentence
from .embeddings import EmbeddingTable, SynonymConfig, is_synonym
from .lexicon import ExemptionLedger, StopwordSet, build_exemption_ledger


class Category(enum.Enum):
    Continuous = "continuous"
    Discontinuous = "discontinuous"


class Kind(enum.Enum):
    Repetition = "repetition"
    Synonym = "synonym"


@dataclass(frozen=True)
class TokenFlag:
    position: int
    category: Category
    kind: Kind
    partner: int
    exempted: bool = False

    def __post_init__(self):
        if not 0 <= self.partner < self.position:
            raise ValueError(f"partner {self.partner} must precede position {self.position}")
        if self.category is Category.Continuous and self.partner != self.position - 1:
            raise ValueError("continuous flags pair a token with its left neighbour")


@dataclass(frozen=True)
class SentenceReport:
    id: int
    length: int
    cr_count: int
    dr_count: int
    crr: float
    drr: float
    flags: Tuple[TokenFlag, ...] = ()

    def counted(self, category: Optional[Category] = None) -> List[TokenFlag]:
        return [f for f in self.flags if not f.exempted and (category is None or f.category is category)]


@dataclass(frozen=True)
class CorpusReport:
    micro_crr: float
    micro_drr: float
    macro_crr: float
    macro_drr: float
    sentence_reports: Tuple[SentenceReport, ...] = field(default_factory=tuple)


def _surface(t):
    return getattr(t, "surface", t)


def redundant(y_i, y_j, table: EmbeddingTable, config: SynonymConfig) -> Tuple[bool, Optional[Kind]]:
    a, b = _surface(y_i), _surface(y_j)
    if config.key(a) == config.key(b):
        return True, Kind.Repetition
    if is_synonym(a, b, table, config):
        return True, Kind.Synonym
    return False, None


class _Relation:
    """Pairwise redundancy over one sentence, computed in one batch."""

    def __init__(self, surfaces: Sequence[str], table: EmbeddingTable, config: SynonymConfig):
        self.keys = [config.key(s) for s in surfaces]
        n = len(surfaces)
        ids = {}
        codes = np.array([ids.setdefault(k, len(ids)) for k in self.keys], dtype=np.intp)
        self.equal = codes[:, None] == codes[None, :] if n else np.zeros((0, 0), dtype=bool)
        if len(table) and n > 1:
            self.synonym = table.synonym_matrix(surfaces, surfaces, config)
        else:
            self.synonym = np.zeros((n, n), dtype=bool)
        self.any = self.equal | self.synonym

    def kind(self, i, j) -> Kind:
        return Kind.Repetition if self.equal[i, j] else Kind.Synonym


def _as_surfaces(sentence) -> List[str]:
    if isinstance(sentence, Sentence):
        return sentence.surfaces
    return [_surface(t) for t in sentence]


def _continuous(rel: _Relation) -> List[TokenFlag]:
    n = len(rel.keys)
    if n < 2:
        return []
    hits = np.flatnonzero(np.diagonal(rel.any, offset=-1)) + 1
    return [TokenFlag(int(i), Category.Continuous, rel.kind(i, i - 1), int(i) - 1) for i in hits]


def _discontinuous(rel: _Relation, skip, stopwords: StopwordSet, ledger: ExemptionLedger) -> List[TokenFlag]:
    flags = []
    for i in range(2, len(rel.keys)):
        key = rel.keys[i]
        if i in skip or key in stopwords:
            continue
        earlier = np.flatnonzero(rel.any[i, :i - 1])
        if not len(earlier):
            continue
        j = int(earlier[0])
        exempt = ledger.consume(key)
        flags.append(TokenFlag(i, Category.Discontinuous, rel.kind(i, j), j, exempted=exempt))
    return flags


def detect_continuous(sentence, table: EmbeddingTable, config: SynonymConfig) -> List[TokenFlag]:
    return _continuous(_Relation(_as_surfaces(sentence), table, config))


def detect_discontinuous(sentence, stopwords: StopwordSet, ledger: ExemptionLedger,
                         table: EmbeddingTable, config: SynonymConfig) -> List[TokenFlag]:
    """Discontinuous flags for ``sentence``; consumes quota from ``ledger``.

    Positions that already carry a continuous flag are skipped.
    """
    rel = _Relation(_as_surfaces(sentence), table, config)
    skip = {f.position for f in _continuous(rel)}
    return _discontinuous(rel, skip, stopwords.normalized(config), ledger)


def _ratio(count, length):
    return count / (length - 1) if length >= 2 else 0.0


def score_hypothesis(sentence, stopwords: StopwordSet, ledger: ExemptionLedger,
                     table: EmbeddingTable, config: SynonymConfig, id: int = 0) -> SentenceReport:
    surfaces = _as_surfaces(sentence)
    rel = _Relation(surfaces, table, config)
    cont = _continuous(rel)
    disc = _discontinuous(rel, {f.position for f in cont}, stopwords.normalized(config), ledger)
    flags = tuple(sorted(cont + disc, key=lambda f: f.position))
    n = len(surfaces)
    cr = len(cont)
    dr = sum(1 for f in disc if not f.exempted)
    return SentenceReport(id, n, cr, dr, _ratio(cr, n), _ratio(dr, n), flags)


def score_sentence(instance: EvalInstance, stopwords: StopwordSet, table: EmbeddingTable,
                   config: SynonymConfig) -> SentenceReport:
    ledger = build_exemption_ledger(instance, table, config)
    return score_hypothesis(instance.hypothesis, stopwords, ledger, table, config,
                            id=instance.id)


def aggregate(reports: Sequence[SentenceReport]) -> CorpusReport:
    reports = tuple(reports)
    if not reports:
        return CorpusReport(0.0, 0.0, 0.0, 0.0, ())
    denom = sum(r.length - 1 for r in reports if r.length >= 2)
    cr = sum(r.cr_count for r in reports)
    dr = sum(r.dr_count for r in reports)
    micro_crr = cr / denom if denom else 0.0
    micro_drr = dr / denom if denom else 0.0
    macro_crr = sum(r.crr for r in reports) / len(reports)
    macro_drr = sum(r.drr for r in reports) / len(reports)
    return CorpusReport(micro_crr, micro_drr, macro_crr, macro_drr, reports)


def score_corpus(instances: Sequence[EvalInstance], stopwords: StopwordSet, table: EmbeddingTable,
                 config: SynonymConfig, threads: int = 1) -> CorpusReport:
    def one(inst):
        return score_sentence(inst, stopwords, table, config)

    if threads > 1 and len(instances) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(one, instances))
    else:
        reports = [one(inst) for inst in instances]
    return aggregate(reports)
