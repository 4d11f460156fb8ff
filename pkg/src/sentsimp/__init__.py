"""Multi-agent simplification of game-design sentences into cause/action rules."""

from sentsimp.cnl import CauseActionRule, ParseDiagnostic, parse_sentence, timed_state_check
from sentsimp.corpus import Category, ComplexSentence, Corpus, Verdict, builtin_corpus, load_corpus
from sentsimp.harness import EvalReport, compare_modes, evaluate_corpus
from sentsimp.orchestrator import Branch, PipelineConfig, Thresholds, comparator, run_pipeline
from sentsimp.scoring import SimilarityScores, lexical_score

__version__ = "0.1.0"
