"""Agreement between automatic flags and human annotation tuples."""

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence, Set, Tuple

from .corpus import AnnotationTuple, check_tuple
from .detector import Category, CorpusReport
from .errors import EmptyUniverse, UnknownSentenceId


@dataclass(frozen=True)
class PrfScores:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "PrfScores":
        p = tp / (tp + fp) if tp + fp else 1.0
        r = tp / (tp + fn) if tp + fn else 1.0
        return cls(p, r, f1_score(p, r), tp, fp, fn)


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _category(value) -> Category:
    if isinstance(value, Category):
        return value
    return Category(str(value).lower())


def gold_positions(gold: Iterable[AnnotationTuple], category) -> Set[Tuple[int, int]]:
    continuous = _category(category) is Category.Continuous
    return {(t.sentence_id, t.pos_b) for t in gold if t.err_type.is_continuous == continuous}


def predicted_positions(report: CorpusReport, category) -> Set[Tuple[int, int]]:
    category = _category(category)
    return {(r.id, f.position) for r in report.sentence_reports for f in r.counted(category)}


def evaluate(report: CorpusReport, gold: Sequence[AnnotationTuple], category) -> PrfScores:
    """Token-level P/R/F1 of counted flags against gold tuples.

    Repetition and synonym labels are merged within each category and a gold
    tuple matches a flag at its later position ``pos_b``.
    """
    lengths = {r.id: r.length for r in report.sentence_reports}
    for t in gold:
        if t.sentence_id not in lengths:
            raise UnknownSentenceId(t.sentence_id)
        check_tuple(t, lengths[t.sentence_id])
    predicted = predicted_positions(report, category)
    expected = gold_positions(gold, category)
    tp = len(predicted & expected)
    return PrfScores.from_counts(tp, len(predicted - expected), len(expected - predicted))


def _binary_labels(tuples: Iterable[AnnotationTuple], universe: Sequence[Tuple[int, int]]):
    flagged = {(t.sentence_id, t.pos_b) for t in tuples}
    known = {sid for sid, _ in universe}
    for t in tuples:
        if t.sentence_id not in known:
            raise UnknownSentenceId(t.sentence_id)
    return [(sid, pos) in flagged for sid, length in universe for pos in range(length)]


def cohen_kappa(labels_a: Sequence[bool], labels_b: Sequence[bool]) -> float:
    """Cohen's kappa for two binary label sequences of equal length."""
    n = len(labels_a)
    if n != len(labels_b):
        raise ValueError("label sequences differ in length")
    if n == 0:
        raise EmptyUniverse("kappa needs at least one token position")
    p_o = sum(bool(x) == bool(y) for x, y in zip(labels_a, labels_b)) / n
    rate_a = sum(map(bool, labels_a)) / n
    rate_b = sum(map(bool, labels_b)) / n
    p_e = rate_a * rate_b + (1 - rate_a) * (1 - rate_b)
    if p_e == 1.0:
        # both annotators gave every position the same label
        return 1.0 if p_o == 1.0 else 0.0
    return (p_o - p_e) / (1 - p_e)


def pairwise_kappa(labels_a: Sequence[AnnotationTuple], labels_b: Sequence[AnnotationTuple],
                   universe: Sequence[Tuple[int, int]]) -> float:
    """Cohen's kappa over every (sentence, position) in ``universe``.

    ``universe`` lists ``(sentence_id, hypothesis_length)`` pairs.  A position
    is positive for an annotator when it is the ``pos_b`` of one of their tuples.
    """
    return cohen_kappa(_binary_labels(labels_a, universe), _binary_labels(labels_b, universe))


def average_pairwise_kappa(annotators: Sequence[Sequence[AnnotationTuple]],
                           universe: Sequence[Tuple[int, int]]) -> float:
    pairs = list(combinations(annotators, 2))
    if not pairs:
        raise ValueError("need at least two annotators")
    return sum(pairwise_kappa(a, b, universe) for a, b in pairs) / len(pairs)
