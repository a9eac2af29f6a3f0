"""Continuous and discontinuous redundancy metrics for tokenized MT output."""

__version__ = "0.1.0"

from .corpus import (AnnotationTuple, ErrorType, EvalInstance, Sentence, Token, load_parallel,
                     parse_annotations, tokenize_line)
from .detector import (Category, CorpusReport, Kind, SentenceReport, TokenFlag, detect_continuous,
                       detect_discontinuous, redundant, score_corpus, score_sentence)
from .embeddings import EmbeddingTable, SynonymConfig, embedding_stopwords, is_synonym, load_embeddings
from .evaluation import PrfScores, evaluate, pairwise_kappa
from .lexicon import (ExemptionLedger, FrequencyTable, StopwordSet, build_exemption_ledger,
                      count_frequencies, derive_stopwords)
from .perturb import PerturbationSpec, perturb
