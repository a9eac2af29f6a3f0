"""Report serialization.

JSON reports have sorted keys and print every ratio with exactly six
decimals, so identical runs give byte-identical files.
"""

import json
import os
import re
import tempfile
from typing import Any, Dict, Optional

from .detector import Category, CorpusReport, Kind, SentenceReport, TokenFlag
from .errors import ParseError

SCHEMA_VERSION = 1
PRECISION = 6

_FLOAT_MARK = "\x00f"
_FLOAT_RE = re.compile(r'"\\u0000f(-?\d+\.\d+)"')


def _mark_floats(obj):
    if isinstance(obj, float):
        return f"{_FLOAT_MARK}{obj:.{PRECISION}f}"
    if isinstance(obj, dict):
        return {k: _mark_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_mark_floats(v) for v in obj]
    return obj


def canonical_json(obj) -> str:
    text = json.dumps(_mark_floats(obj), sort_keys=True, indent=2, ensure_ascii=False)
    return _FLOAT_RE.sub(r"\1", text) + "\n"


def flag_to_dict(flag: TokenFlag) -> Dict[str, Any]:
    return {
        "position": flag.position,
        "category": flag.category.value,
        "kind": flag.kind.value,
        "partner": flag.partner,
        "exempted": flag.exempted,
    }


def sentence_to_dict(r: SentenceReport) -> Dict[str, Any]:
    return {
        "id": r.id,
        "length": r.length,
        "cr_count": r.cr_count,
        "dr_count": r.dr_count,
        "crr": float(r.crr),
        "drr": float(r.drr),
        "flags": [flag_to_dict(f) for f in r.flags],
    }


def report_to_dict(report: CorpusReport, config: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "config": dict(config or {}),
        "corpus": {
            "sentences": len(report.sentence_reports),
            "micro_crr": float(report.micro_crr),
            "micro_drr": float(report.micro_drr),
            "macro_crr": float(report.macro_crr),
            "macro_drr": float(report.macro_drr),
        },
        "sentences": [sentence_to_dict(r) for r in report.sentence_reports],
    }


def report_to_json(report: CorpusReport, config: Optional[Dict[str, Any]] = None) -> str:
    return canonical_json(report_to_dict(report, config))


def report_to_tsv(report: CorpusReport) -> str:
    lines = ["#id\tlength\tcr_count\tdr_count\tcrr\tdrr"]
    for r in report.sentence_reports:
        lines.append(f"{r.id}\t{r.length}\t{r.cr_count}\t{r.dr_count}\t{r.crr:.{PRECISION}f}\t{r.drr:.{PRECISION}f}")
    return "\n".join(lines) + "\n"


def report_from_dict(data: Dict[str, Any]) -> CorpusReport:
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ParseError(f"unsupported report schema_version {version!r}")
    try:
        sentences = tuple(
            SentenceReport(
                id=s["id"], length=s["length"], cr_count=s["cr_count"], dr_count=s["dr_count"],
                crr=s["crr"], drr=s["drr"],
                flags=tuple(
                    TokenFlag(f["position"], Category(f["category"]), Kind(f["kind"]), f["partner"], f["exempted"])
                    for f in s["flags"]
                ),
            )
            for s in data["sentences"]
        )
        corpus = data["corpus"]
        return CorpusReport(corpus["micro_crr"], corpus["micro_drr"], corpus["macro_crr"],
                            corpus["macro_drr"], sentences)
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed report: {e!r}") from None


def read_report(path) -> CorpusReport:
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.lineno, path) from None
    return report_from_dict(data)


def atomic_write(path, text: str):
    """Write via a temp file in the target directory, then rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".redumet-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
