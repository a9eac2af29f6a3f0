"""Synthetic redundancy injection with gold annotation tuples.

An inserted token always follows its mate, so the gold ``pos_b`` is the
inserted position.  Tokens are never appended after the final token, which
keeps sentence-final punctuation in place.  Every insertion is checked so
that the new token is redundant with its mate and with nothing else; given a
base sentence that carries no flags itself, scoring the output with an empty
ledger recovers the gold tuples exactly.

Random choices come from :class:`random.Random` (Mersenne Twister), whose
``shuffle`` output for an integer seed is identical across platforms.
"""

import random
from collections import Counter
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

from .corpus import AnnotationTuple, ErrorType, Sentence
from .embeddings import EmbeddingTable, SynonymConfig
from .errors import NoEligibleSite
from .lexicon import StopwordSet

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class PerturbationSpec:
    err_type: ErrorType
    count: int = 1
    seed: int = 0
    min_gap: int = 2

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"count must be positive, got {self.count}")
        if self.min_gap < 2:
            raise ValueError(f"min_gap must be at least 2, got {self.min_gap}")
        object.__setattr__(self, "seed", self.seed & _MASK64)

    def for_line(self, index: int) -> "PerturbationSpec":
        """Independent per-line seed derived from the run seed."""
        return replace(self, seed=(self.seed + (index + 1) * _GOLDEN) & _MASK64)


def _creates_only(tokens: List[str], q: int, p: int, table: EmbeddingTable, config: SynonymConfig) -> bool:
    """True if ``tokens[q]`` is redundant with ``tokens[p]`` and no other token."""
    key = config.key(tokens[q])
    syn = table.synonym_matrix([tokens[q]], tokens, config)[0] if len(table) else None
    for j, other in enumerate(tokens):
        if j == q:
            continue
        hit = config.key(other) == key or (syn is not None and bool(syn[j]))
        if hit != (j == p):
            return False
    return True


def perturb(base: Sentence, spec: PerturbationSpec, table: EmbeddingTable, config: SynonymConfig,
            stopwords: Optional[StopwordSet] = None, sentence_id: int = 0,
            system: str = "synthetic") -> Tuple[Sentence, List[AnnotationTuple]]:
    surfaces = base.surfaces
    if len(surfaces) < 2:
        raise NoEligibleSite("base sentence needs at least two tokens")
    stop = (stopwords or StopwordSet()).normalized(config)
    kind = spec.err_type
    rng = random.Random(spec.seed)

    base_counts = Counter(config.key(s) for s in surfaces)
    synonyms = {}

    def fillers_for(surface):
        if not kind.is_synonym:
            return [surface]
        if surface not in synonyms:
            synonyms[surface] = [
                s for s in table.synonyms_of(surface, config)
                if config.key(s) not in stop and config.key(s) not in base_counts
            ]
        return list(synonyms[surface])

    def eligible(surface):
        key = config.key(surface)
        return key not in stop and base_counts[key] == 1 and bool(fillers_for(surface))

    tokens = list(surfaces)
    origin: List[Optional[int]] = list(range(len(tokens)))
    used = set()
    gold: List[List[int]] = []

    for _ in range(spec.count):
        sites = [i for i, o in enumerate(origin) if o is not None and o not in used and eligible(tokens[i])]
        rng.shuffle(sites)
        placed = None
        for p in sites:
            last = len(tokens) - 1
            slots = [p + 1] if kind.is_continuous else list(range(p + spec.min_gap, last + 1))
            slots = [q for q in slots if q <= last and not any(g[2] and g[1] == q for g in gold)]
            if not slots:
                continue
            fillers = fillers_for(tokens[p])
            rng.shuffle(fillers)
            rng.shuffle(slots)
            for filler in fillers:
                for q in slots:
                    candidate = tokens[:q] + [filler] + tokens[q:]
                    if _creates_only(candidate, q, p, table, config):
                        placed = (p, q, candidate)
                        break
                if placed:
                    break
            if placed:
                break
        if placed is None:
            raise NoEligibleSite(
                f"cannot place {kind.value} error {len(gold) + 1} of {spec.count} in {len(surfaces)}-token sentence")
        p, q, tokens = placed
        for g in gold:
            if g[0] >= q:
                g[0] += 1
            if g[1] >= q:
                g[1] += 1
        used.add(origin[p])
        origin.insert(q, None)
        gold.append([p, q, kind.is_continuous])

    tuples = [AnnotationTuple(sentence_id, a, b, kind, system) for a, b, _ in sorted(gold, key=lambda g: g[1])]
    return Sentence.from_surfaces(tokens), tuples


def strip_insertions(sentence: Sentence, tuples: List[AnnotationTuple]) -> Sentence:
    """Drop the tokens at each tuple's ``pos_b``, undoing :func:`perturb`."""
    drop = {t.pos_b for t in tuples}
    return Sentence(tuple(t for i, t in enumerate(sentence) if i not in drop))
