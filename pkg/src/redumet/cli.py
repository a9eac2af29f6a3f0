"""Command-line interface: ``redumet score|stopwords|annotate-eval|perturb``."""

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .corpus import ErrorType, format_annotations, load_parallel, load_sentences, parse_annotations
from .detector import score_corpus
from .embeddings import (DEFAULT_TAU, EmbeddingTable, SynonymConfig, embedding_stopwords,
                         load_embeddings, load_token_list)
from .errors import NoEligibleSite, RedumetError
from .evaluation import evaluate
from .lexicon import (DEFAULT_K_CJK, DEFAULT_K_OTHER, StopwordSet, count_frequencies, default_stopword_k,
                      derive_stopwords, format_stopwords, load_stopwords)
from .perturb import PerturbationSpec, perturb
from .report import atomic_write, read_report, report_to_json, report_to_tsv

logger = logging.getLogger("redumet")


@dataclass
class RunConfig:
    src: str
    hyp: str
    ref: str
    embeddings: Optional[str] = None
    stopword_file: Optional[str] = None
    train: Optional[str] = None
    exclude_file: Optional[str] = None
    tau: float = DEFAULT_TAU
    stopword_k: Optional[int] = None
    stopword_k_cjk: int = DEFAULT_K_CJK
    stopword_k_other: int = DEFAULT_K_OTHER
    lowercase: bool = False
    format: str = "json"
    output: str = "-"
    threads: int = 1

    def __post_init__(self):
        if self.stopword_file and self.train:
            raise ValueError("give at most one of --stopwords and --train")
        if self.format not in ("json", "tsv"):
            raise ValueError(f"unknown output format {self.format!r}")

    def echo(self, n_stopwords: int, n_excluded: int):
        return {
            "src": self.src, "hyp": self.hyp, "ref": self.ref,
            "embeddings": self.embeddings,
            "stopword_file": self.stopword_file, "train": self.train,
            "exclude_file": self.exclude_file,
            "tau": float(self.tau),
            "stopword_k": self.stopword_k,
            "stopword_k_cjk": self.stopword_k_cjk,
            "stopword_k_other": self.stopword_k_other,
            "lowercase": self.lowercase,
            "stopwords": n_stopwords,
            "excluded": n_excluded,
        }


def _load_table(path) -> EmbeddingTable:
    return load_embeddings(path) if path else EmbeddingTable.empty()


def resolve_lexicon(cfg: RunConfig):
    """Embedding table, synonym config and effective stopword set for a run."""
    table = _load_table(cfg.embeddings)
    if cfg.exclude_file:
        excluded = set(load_token_list(cfg.exclude_file))
    else:
        excluded = embedding_stopwords(table, cfg.stopword_k_cjk, cfg.stopword_k_other)
    if cfg.stopword_file:
        stopwords = load_stopwords(cfg.stopword_file)
    elif cfg.train:
        freq = count_frequencies(cfg.train)
        k = cfg.stopword_k or default_stopword_k(freq, cfg.stopword_k_cjk, cfg.stopword_k_other)
        stopwords = derive_stopwords(freq, k)
    else:
        logger.warning("no --stopwords or --train given; training-data stopword set is empty")
        stopwords = StopwordSet()
    syn = SynonymConfig(tau=cfg.tau, excluded=excluded, lowercase=cfg.lowercase)
    return table, syn, stopwords | excluded


def run_score(cfg: RunConfig) -> int:
    instances = load_parallel(cfg.src, cfg.hyp, cfg.ref)
    table, syn, stopwords = resolve_lexicon(cfg)
    report = score_corpus(instances, stopwords, table, syn, threads=cfg.threads)
    if cfg.format == "json":
        text = report_to_json(report, cfg.echo(len(stopwords), len(syn.excluded)))
    else:
        text = report_to_tsv(report)
    _emit(cfg.output, text)
    print(
        f"sentences={len(instances)} CRR={100 * report.micro_crr:.2f}% DRR={100 * report.micro_drr:.2f}% "
        f"(macro CRR={100 * report.macro_crr:.2f}% DRR={100 * report.macro_drr:.2f}%)",
        file=sys.stderr,
    )
    return 0


def _emit(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        atomic_write(path, text)


def _cmd_score(args) -> int:
    cfg = RunConfig(
        src=args.src, hyp=args.hyp, ref=args.ref, embeddings=args.embeddings,
        stopword_file=args.stopwords, train=args.train, exclude_file=args.exclude,
        tau=args.tau, stopword_k=args.stopword_k, stopword_k_cjk=args.k_cjk, stopword_k_other=args.k_other,
        lowercase=args.lowercase, format=args.format, output=args.output, threads=args.threads,
    )
    return run_score(cfg)


def _cmd_stopwords(args) -> int:
    freq = count_frequencies(args.train)
    k = args.k or default_stopword_k(freq, args.k_cjk, args.k_other)
    stopwords = derive_stopwords(freq, k)
    _emit(args.output, format_stopwords(stopwords, freq))
    return 0


def _cmd_annotate_eval(args) -> int:
    report = read_report(args.report)
    gold = parse_annotations(args.gold)
    scores = evaluate(report, gold, args.category)
    print(f"category\t{args.category}")
    print(f"P\t{100 * scores.precision:.2f}")
    print(f"R\t{100 * scores.recall:.2f}")
    print(f"F1\t{100 * scores.f1:.2f}")
    print(f"tp\t{scores.tp}\nfp\t{scores.fp}\nfn\t{scores.fn}")
    return 0


def _cmd_perturb(args) -> int:
    table = _load_table(args.embeddings)
    stopwords = load_stopwords(args.stopwords) if args.stopwords else StopwordSet()
    config = SynonymConfig(tau=args.tau, excluded=embedding_stopwords(table) if args.embeddings else (),
                           lowercase=args.lowercase)
    # scoring treats excluded tokens as stopwords, so they cannot host an error either
    stopwords = stopwords | config.excluded
    base = PerturbationSpec(ErrorType.from_code(args.type), count=args.count, seed=args.seed,
                            min_gap=args.min_gap)
    hyp_lines, gold = [], []
    skipped = 0
    for i, sentence in enumerate(load_sentences(args.ref)):
        try:
            out, tuples = perturb(sentence, base.for_line(i), table, config, stopwords,
                                  sentence_id=i, system=args.system)
        except NoEligibleSite:
            out, tuples = sentence, []
            skipped += 1
        hyp_lines.append(str(out) + "\n")
        gold.extend(tuples)
    if skipped:
        logger.warning("%d sentence(s) had no eligible site and were copied unchanged", skipped)
    atomic_write(args.out_hyp, "".join(hyp_lines))
    atomic_write(args.out_gold, format_annotations(gold))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="redumet", description="Information-redundancy metrics for MT output.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="compute CRR/DRR for a hypothesis file")
    p.add_argument("--src", required=True)
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--embeddings", help="word2vec text-format embedding table")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--stopwords", help="stopword file, one token per line")
    group.add_argument("--train", help="training corpus to derive stopwords from")
    p.add_argument("--exclude", help="tokens barred from synonym matching (replaces the dictionary-rank default)")
    p.add_argument("--stopword-k", type=int, help="stopwords taken from --train (default: by script)")
    p.add_argument("--k-cjk", type=int, default=DEFAULT_K_CJK)
    p.add_argument("--k-other", type=int, default=DEFAULT_K_OTHER)
    p.add_argument("--tau", type=float, default=DEFAULT_TAU, help="cosine threshold for synonyms")
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.add_argument("--output", "-o", default="-")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("stopwords", help="derive the most frequent tokens of a training corpus")
    p.add_argument("--train", required=True)
    p.add_argument("--k", type=int, help="number of stopwords (default: by script)")
    p.add_argument("--k-cjk", type=int, default=DEFAULT_K_CJK)
    p.add_argument("--k-other", type=int, default=DEFAULT_K_OTHER)
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=_cmd_stopwords)

    p = sub.add_parser("annotate-eval", help="precision/recall/F1 of a report against gold tuples")
    p.add_argument("--report", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--category", choices=("continuous", "discontinuous"), required=True)
    p.set_defaults(func=_cmd_annotate_eval)

    p = sub.add_parser("perturb", help="inject synthetic redundancy errors")
    p.add_argument("--ref", required=True)
    p.add_argument("--type", required=True, choices=("cr", "cs", "dr", "ds"))
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--embeddings")
    p.add_argument("--stopwords")
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--min-gap", type=int, default=2)
    p.add_argument("--system", default="synthetic")
    p.add_argument("--out-hyp", required=True)
    p.add_argument("--out-gold", required=True)
    p.set_defaults(func=_cmd_perturb)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(format="redumet: %(levelname)s: %(message)s", level=logging.INFO)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RedumetError, OSError, ValueError) as e:
        print(f"redumet: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
