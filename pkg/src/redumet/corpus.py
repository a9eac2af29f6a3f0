"""Tokenized parallel corpora and annotation files.

Corpus files hold one pre-tokenized sentence per line.  Annotation files are
tab-separated with the columns ``sentence_id pos_a pos_b err_type system``,
where positions are 0-based BPE-token indices into the hypothesis and
``err_type`` is one of ``CR``, ``CS``, ``DR``, ``DS``.
"""

import enum
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from .errors import InvariantViolation, LineCountMismatch, ParseError

CONTINUATION_MARKER = "@@"


@dataclass(frozen=True)
class Token:
    surface: str

    def __post_init__(self):
        if not self.surface or any(c.isspace() for c in self.surface):
            raise ValueError(f"invalid token surface {self.surface!r}")

    @property
    def is_continuation(self) -> bool:
        return self.surface.endswith(CONTINUATION_MARKER)

    def __str__(self):
        return self.surface


@dataclass(frozen=True)
class Sentence:
    tokens: Tuple[Token, ...] = ()

    @classmethod
    def from_surfaces(cls, surfaces: Iterable[str]) -> "Sentence":
        return cls(tuple(Token(s) for s in surfaces))

    @property
    def surfaces(self) -> List[str]:
        return [t.surface for t in self.tokens]

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]

    def __str__(self):
        return " ".join(self.surfaces)


@dataclass(frozen=True)
class EvalInstance:
    id: int
    source: Sentence
    hypothesis: Sentence
    reference: Sentence


class ErrorType(enum.Enum):
    ContRep = "CR"
    ContSyn = "CS"
    DiscRep = "DR"
    DiscSyn = "DS"

    @property
    def is_continuous(self) -> bool:
        return self in (ErrorType.ContRep, ErrorType.ContSyn)

    @property
    def is_synonym(self) -> bool:
        return self in (ErrorType.ContSyn, ErrorType.DiscSyn)

    @classmethod
    def from_code(cls, code: str) -> "ErrorType":
        try:
            return cls(code.upper())
        except ValueError:
            raise ValueError(f"unknown error type {code!r}, expected one of CR, CS, DR, DS") from None


@dataclass(frozen=True)
class AnnotationTuple:
    sentence_id: int
    pos_a: int
    pos_b: int
    err_type: ErrorType
    system: str = ""

    def __post_init__(self):
        check_tuple(self)

    def to_line(self) -> str:
        return f"{self.sentence_id}\t{self.pos_a}\t{self.pos_b}\t{self.err_type.value}\t{self.system}"


def check_tuple(t: AnnotationTuple, length: int = None):
    """Raise InvariantViolation if ``t`` is inconsistent.

    ``length`` is the hypothesis length of the referenced sentence, when known.
    """
    if min(t.sentence_id, t.pos_a, t.pos_b) < 0:
        raise InvariantViolation(f"negative index in {t}")
    if t.pos_a >= t.pos_b:
        raise InvariantViolation(f"pos_a must be < pos_b, got ({t.pos_a}, {t.pos_b})")
    if t.err_type.is_continuous and t.pos_b != t.pos_a + 1:
        raise InvariantViolation(
            f"{t.err_type.value} tuple needs adjacent positions, got ({t.pos_a}, {t.pos_b})")
    if length is not None and t.pos_b >= length:
        raise InvariantViolation(
            f"position {t.pos_b} out of range for sentence {t.sentence_id} of length {length}")


def tokenize_line(line: str) -> Sentence:
    return Sentence(tuple(Token(s) for s in line.split()))


def read_lines(path) -> List[str]:
    with open(path, encoding="utf-8") as f:
        return [line.rstrip("\n") for line in f]


def load_parallel(src_path, hyp_path, ref_path) -> List[EvalInstance]:
    columns = [read_lines(p) for p in (src_path, hyp_path, ref_path)]
    lengths = {str(p): len(c) for p, c in zip((src_path, hyp_path, ref_path), columns)}
    if len(set(len(c) for c in columns)) > 1:
        raise LineCountMismatch(lengths)
    return [
        EvalInstance(i, tokenize_line(s), tokenize_line(h), tokenize_line(r))
        for i, (s, h, r) in enumerate(zip(*columns))
    ]


def load_sentences(path) -> List[Sentence]:
    return [tokenize_line(line) for line in read_lines(path)]


def _parse_int(field, name, lineno, path):
    try:
        value = int(field)
    except ValueError:
        raise ParseError(f"{name} is not an integer: {field!r}", lineno, path) from None
    if value < 0:
        raise ParseError(f"{name} must be non-negative, got {value}", lineno, path)
    return value


def parse_annotation_lines(lines: Iterable[str], path=None) -> List[AnnotationTuple]:
    tuples = []
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) == 4:
            fields.append("")
        if len(fields) != 5:
            raise ParseError(f"expected 5 tab-separated fields, got {len(fields)}", lineno, path)
        sid = _parse_int(fields[0], "sentence_id", lineno, path)
        a = _parse_int(fields[1], "pos_a", lineno, path)
        b = _parse_int(fields[2], "pos_b", lineno, path)
        try:
            err_type = ErrorType.from_code(fields[3].strip())
        except ValueError as e:
            raise ParseError(str(e), lineno, path) from None
        try:
            tuples.append(AnnotationTuple(sid, a, b, err_type, fields[4]))
        except InvariantViolation as e:
            raise InvariantViolation(f"line {lineno}: {e}") from None
    return tuples


def parse_annotations(path) -> List[AnnotationTuple]:
    with open(path, encoding="utf-8") as f:
        return parse_annotation_lines(f, path=path)


def format_annotations(tuples: Sequence[AnnotationTuple]) -> str:
    header = "#sentence_id\tpos_a\tpos_b\terr_type\tsystem\n"
    return header + "".join(t.to_line() + "\n" for t in tuples)
