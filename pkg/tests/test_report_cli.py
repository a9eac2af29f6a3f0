import json

import pytest

from redumet.cli import main
from redumet.detector import score_corpus
from redumet.corpus import load_parallel, parse_annotations
from redumet.embeddings import EmbeddingTable, SynonymConfig
from redumet.errors import ParseError
from redumet.lexicon import StopwordSet
from redumet.report import canonical_json, read_report, report_to_json, report_to_tsv

from conftest import write

HYP = "I ate ate pizza tonight\na b a c\nx\n"


@pytest.fixture
def corpus(tmp_path):
    return {
        "src": write(tmp_path / "src.txt", "\n\n\n"),
        "hyp": write(tmp_path / "hyp.txt", HYP),
        "ref": write(tmp_path / "ref.txt", "\n\n\n"),
    }


def score_args(corpus, *extra):
    return ["score", "--src", corpus["src"], "--hyp", corpus["hyp"], "--ref", corpus["ref"], *extra]


def test_canonical_json_fixed_precision():
    text = canonical_json({"b": 0.25, "a": [1 / 3, 1], "c": {"z": 0.0, "y": True}})
    assert text == (
        '{\n  "a": [\n    0.333333,\n    1\n  ],\n  "b": 0.250000,\n'
        '  "c": {\n    "y": true,\n    "z": 0.000000\n  }\n}\n'
    )
    assert json.loads(text)["b"] == 0.25


def test_json_round_trip(corpus, tmp_path):
    insts = load_parallel(corpus["src"], corpus["hyp"], corpus["ref"])
    rep = score_corpus(insts, StopwordSet(), EmbeddingTable.empty(), SynonymConfig())
    path = write(tmp_path / "r.json", report_to_json(rep, {"tau": 0.8}))
    back = read_report(path)
    assert [r.flags for r in back.sentence_reports] == [r.flags for r in rep.sentence_reports]
    assert [r.cr_count for r in back.sentence_reports] == [1, 0, 0]


def test_read_report_rejects_bad_schema(tmp_path):
    with pytest.raises(ParseError):
        read_report(write(tmp_path / "r.json", '{"schema_version": 2}'))
    with pytest.raises(ParseError):
        read_report(write(tmp_path / "r.json", "not json"))


def test_score_json_matches_hand_values(corpus, tmp_path):
    out = tmp_path / "report.json"
    assert main(score_args(corpus, "--output", str(out))) == 0
    data = json.loads(out.read_text())
    assert data["schema_version"] == 1
    c = data["corpus"]
    # counts: cr = 1 (sentence 0), dr = 1 (sentence 1); denominators 4 + 3
    assert c["micro_crr"] == pytest.approx(1 / 7, abs=1e-6)
    assert c["micro_drr"] == pytest.approx(1 / 7, abs=1e-6)
    assert c["macro_crr"] == pytest.approx(0.25 / 3, abs=1e-6)
    assert c["macro_drr"] == pytest.approx((1 / 3) / 3, abs=1e-6)
    s1 = data["sentences"][1]
    assert s1["flags"] == [
        {"position": 2, "category": "discontinuous", "kind": "repetition", "partner": 0, "exempted": False}
    ]
    assert data["config"]["tau"] == 0.8
    assert '"micro_crr": 0.142857' in out.read_text()


def test_score_tsv(corpus, tmp_path):
    out = tmp_path / "report.tsv"
    assert main(score_args(corpus, "--format", "tsv", "--output", str(out))) == 0
    rows = [line.split("\t") for line in out.read_text().splitlines() if not line.startswith("#")]
    assert rows == [
        ["0", "5", "1", "0", "0.250000", "0.000000"],
        ["1", "4", "0", "1", "0.000000", "0.333333"],
        ["2", "1", "0", "0", "0.000000", "0.000000"],
    ]


def test_score_missing_embeddings(corpus, tmp_path, capsys):
    out = tmp_path / "report.json"
    missing = str(tmp_path / "nope.vec")
    assert main(score_args(corpus, "--embeddings", missing, "--output", str(out))) == 1
    assert missing in capsys.readouterr().err
    assert not out.exists()


def test_score_mismatched_corpus(corpus, tmp_path, capsys):
    write(tmp_path / "hyp.txt", "only one line\n")
    out = tmp_path / "report.json"
    assert main(score_args(corpus, "--output", str(out))) == 1
    assert "line count" in capsys.readouterr().err
    assert not out.exists()
    assert not list(tmp_path.glob(".redumet-*"))


def test_score_bad_embedding_format(corpus, tmp_path, capsys):
    emb = write(tmp_path / "e.vec", "2 3\na 1 2 3\nb 1 2\n")
    assert main(score_args(corpus, "--embeddings", emb)) == 1
    assert "e.vec:3" in capsys.readouterr().err


def test_score_failure_keeps_previous_output(corpus, tmp_path):
    out = tmp_path / "report.json"
    out.write_text("previous")
    assert main(score_args(corpus, "--embeddings", str(tmp_path / "missing"), "--output", str(out))) == 1
    assert out.read_text() == "previous"


def test_score_deterministic(corpus, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(score_args(corpus, "--output", str(a))) == 0
    assert main(score_args(corpus, "--output", str(b), "--threads", "3")) == 0
    assert a.read_bytes() == b.read_bytes()


def test_score_with_stopwords_and_embeddings(tmp_path):
    src = write(tmp_path / "s", "\n")
    hyp = write(tmp_path / "h", "ate x y had z the q the\n")
    ref = write(tmp_path / "r", "\n")
    emb = write(tmp_path / "e.vec", "3 2\nq 0 1\nate 1 0\nhad 0.95 0.31\n")
    sw = write(tmp_path / "sw", "the\n")
    out = tmp_path / "o.json"
    args = ["score", "--src", src, "--hyp", hyp, "--ref", ref, "--embeddings", emb, "--stopwords", sw,
            "--k-other", "0", "--output", str(out)]
    assert main(args) == 0
    [s] = json.loads(out.read_text())["sentences"]
    assert s["dr_count"] == 1
    assert s["flags"][0]["kind"] == "synonym"


def test_dictionary_stopwords_excluded_by_default(tmp_path):
    src = write(tmp_path / "s", "\n")
    hyp = write(tmp_path / "h", "ate x y had\n")
    ref = write(tmp_path / "r", "\n")
    emb = write(tmp_path / "e.vec", "2 2\nate 1 0\nhad 0.95 0.31\n")
    out = tmp_path / "o.json"
    assert main(["score", "--src", src, "--hyp", hyp, "--ref", ref, "--embeddings", emb, "--output", str(out)]) == 0
    # both tokens are within the top-10 dictionary entries, so they are excluded
    assert json.loads(out.read_text())["sentences"][0]["dr_count"] == 0
    excl = write(tmp_path / "excl", "\n")
    assert main(["score", "--src", src, "--hyp", hyp, "--ref", ref, "--embeddings", emb,
                 "--exclude", excl, "--output", str(out)]) == 0
    assert json.loads(out.read_text())["sentences"][0]["dr_count"] == 1


def test_stopwords_command(tmp_path):
    train = write(tmp_path / "zh.txt", "我 的 书 ， 你 的 笔 。\n他 的 ， 是 。\n的 ， 。 好\n")
    out = tmp_path / "sw.txt"
    assert main(["stopwords", "--train", train, "--k", "3", "--output", str(out)]) == 0
    # "，" and "。" tie at 3; the tiebreak orders by code point
    assert out.read_text(encoding="utf-8").split() == ["的", "。", "，"]


def test_stopwords_default_k_by_script(tmp_path):
    train = write(tmp_path / "zh.txt", "我 的 书 ， 你 的 笔 。 他 她 它 们 是\n")
    out = tmp_path / "sw.txt"
    assert main(["stopwords", "--train", train, "--output", str(out)]) == 0
    assert len(out.read_text(encoding="utf-8").split()) == 3


def test_annotate_eval_perfect(corpus, tmp_path, capsys):
    rep = tmp_path / "r.json"
    assert main(score_args(corpus, "--output", str(rep))) == 0
    gold = write(tmp_path / "g.tsv", "0\t1\t2\tCR\tsys\n1\t0\t2\tDR\tsys\n")
    for category in ("continuous", "discontinuous"):
        capsys.readouterr()
        assert main(["annotate-eval", "--report", str(rep), "--gold", gold, "--category", category]) == 0
        out = dict(line.split("\t") for line in capsys.readouterr().out.splitlines())
        assert (out["P"], out["R"], out["F1"]) == ("100.00", "100.00", "100.00")


def test_annotate_eval_unknown_sentence(corpus, tmp_path, capsys):
    rep = tmp_path / "r.json"
    assert main(score_args(corpus, "--output", str(rep))) == 0
    gold = write(tmp_path / "g.tsv", "9\t1\t2\tCR\tsys\n")
    assert main(["annotate-eval", "--report", str(rep), "--gold", gold, "--category", "continuous"]) == 1
    assert "unknown sentence id 9" in capsys.readouterr().err


def perturb_args(ref, emb, tmp_path, tag, kind="cr"):
    return ["perturb", "--ref", ref, "--type", kind, "--count", "1", "--seed", "7", "--embeddings", emb,
            "--out-hyp", str(tmp_path / f"hyp{tag}"), "--out-gold", str(tmp_path / f"gold{tag}")]


def test_perturb_deterministic_and_recoverable(tmp_path, capsys):
    ref = write(tmp_path / "ref", "one two three four five six seven eight nine ten eleven twelve thirteen\n"
                                  "a b c d e f g h i j k l m n o\n")
    emb = write(tmp_path / "e.vec", "1 2\nzzz 1 0\n")
    assert main(perturb_args(ref, emb, tmp_path, "1")) == 0
    assert main(perturb_args(ref, emb, tmp_path, "2")) == 0
    assert (tmp_path / "hyp1").read_bytes() == (tmp_path / "hyp2").read_bytes()
    assert (tmp_path / "gold1").read_bytes() == (tmp_path / "gold2").read_bytes()
    gold = parse_annotations(tmp_path / "gold1")
    assert [t.sentence_id for t in gold] == [0, 1]
    rep = tmp_path / "rep.json"
    empty = write(tmp_path / "empty", "\n\n")
    assert main(["score", "--src", empty, "--hyp", str(tmp_path / "hyp1"), "--ref", empty,
                 "--output", str(rep)]) == 0
    capsys.readouterr()
    assert main(["annotate-eval", "--report", str(rep), "--gold", str(tmp_path / "gold1"),
                 "--category", "continuous"]) == 0
    assert "F1\t100.00" in capsys.readouterr().out


def test_perturb_unplaceable_lines_copied(tmp_path):
    ref = write(tmp_path / "ref", "a b\nsolo\n")
    emb = write(tmp_path / "e.vec", "1 2\nzzz 1 0\n")
    assert main(perturb_args(ref, emb, tmp_path, "x", kind="dr")) == 0
    assert (tmp_path / "hypx").read_text() == "a b\nsolo\n"
    assert parse_annotations(tmp_path / "goldx") == []


def test_parser_rejects_both_stopword_sources(corpus, tmp_path):
    with pytest.raises(SystemExit):
        main(score_args(corpus, "--stopwords", "a", "--train", "b"))


def test_report_to_tsv_empty():
    rep = score_corpus([], StopwordSet(), EmbeddingTable.empty(), SynonymConfig())
    assert report_to_tsv(rep) == "#id\tlength\tcr_count\tdr_count\tcrr\tdrr\n"
