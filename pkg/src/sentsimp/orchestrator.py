"""The simplify / score / route loop.

Iteration 1 always runs the simplifier. The comparator then either accepts the
candidate, declares the sentence unconvertible (rewrite is unchanged), or asks
for another attempt from the alternative simplifier (or the simplifier again in
single-agent mode) until ``max_iterations`` runs out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Protocol

from sentsimp.agents import AgentKind, MalformedResponse, EmptyAnswer, ProviderError, SimplificationCandidate
from sentsimp.corpus import ComplexSentence, Verdict
from sentsimp.scoring import EmptyOutput, SimilarityScores, UnparseableJudgeResponse

__all__ = [
    "Branch", "Thresholds", "PipelineConfig", "IterationRecord", "PipelineOutcome",
    "Verdict", "comparator", "route", "run_pipeline", "replay_branches",
]


class Branch(str, Enum):
    ACCEPT = "accept"
    UNCHANGED = "unchanged"
    REVISE = "revise"
    GAP_REVISE = "gap_revise"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class Thresholds:
    semantic_accept: float = 95.0
    lexical_accept_max: float = 40.0
    lexical_unchanged_min: float = 95.0

    def __post_init__(self):
        if not 0 <= self.lexical_accept_max < self.lexical_unchanged_min <= 100:
            raise ValueError(
                "need 0 <= lexical_accept_max < lexical_unchanged_min <= 100, got "
                f"{self.lexical_accept_max}, {self.lexical_unchanged_min}"
            )
        if not 0 <= self.semantic_accept <= 100:
            raise ValueError(f"semantic_accept must be in [0, 100], got {self.semantic_accept}")


@dataclass(frozen=True)
class PipelineConfig:
    thresholds: Thresholds = field(default_factory=Thresholds)
    max_iterations: int = 3
    single_agent_mode: bool = False

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")


@dataclass(frozen=True)
class IterationRecord:
    candidate: SimplificationCandidate
    scores: SimilarityScores
    branch_taken: Branch


@dataclass(frozen=True)
class PipelineOutcome:
    verdict: Verdict
    input_id: str
    trace: tuple[IterationRecord, ...]
    final: SimplificationCandidate | None = None
    error: str | None = None

    @property
    def iterations(self) -> int:
        return len(self.trace)

    @property
    def branches(self) -> list[Branch]:
        return [r.branch_taken for r in self.trace]


def comparator(scores: SimilarityScores, t: Thresholds) -> Branch:
    if scores.semantic > t.semantic_accept:
        if scores.lexical <= t.lexical_accept_max:
            return Branch.ACCEPT
        if scores.lexical > t.lexical_unchanged_min:
            return Branch.UNCHANGED
        return Branch.GAP_REVISE
    # semantic == semantic_accept falls here too: acceptance needs strictly more
    return Branch.REVISE


def route(scores: SimilarityScores, t: Thresholds, iteration: int, max_iterations: int) -> Branch:
    """Comparator branch, with a revision on the last allowed iteration marked EXHAUSTED."""
    branch = comparator(scores, t)
    if branch in (Branch.REVISE, Branch.GAP_REVISE) and iteration >= max_iterations:
        return Branch.EXHAUSTED
    return branch


def replay_branches(outcome: PipelineOutcome, cfg: PipelineConfig) -> list[Branch]:
    return [
        route(r.scores, cfg.thresholds, i, cfg.max_iterations)
        for i, r in enumerate(outcome.trace, start=1)
    ]


class Simplifier(Protocol):
    def simplify(self, query: str, agent: AgentKind, iteration: int, sample: int = 0) -> SimplificationCandidate: ...


class Evaluator(Protocol):
    def evaluate(self, input: str, output: list[str]) -> SimilarityScores: ...


@dataclass
class Dependencies:
    simplifier: Simplifier
    evaluator: Evaluator


# errors that end one sentence's run as Failed instead of aborting a batch
RECOVERABLE = (ProviderError, MalformedResponse, EmptyAnswer, EmptyOutput, UnparseableJudgeResponse)


def agent_for(iteration: int, cfg: PipelineConfig) -> AgentKind:
    if iteration == 1 or cfg.single_agent_mode:
        return AgentKind.SIMPLIFIER
    return AgentKind.ALTERNATIVE_SIMPLIFIER


def run_pipeline(sentence: ComplexSentence, cfg: PipelineConfig, deps: Dependencies) -> PipelineOutcome:
    trace: list[IterationRecord] = []
    calls_per_agent: dict[AgentKind, int] = {}
    for iteration in range(1, cfg.max_iterations + 1):
        agent = agent_for(iteration, cfg)
        sample = calls_per_agent.get(agent, 0)
        calls_per_agent[agent] = sample + 1
        try:
            candidate = deps.simplifier.simplify(sentence.text, agent, iteration, sample)
            scores = deps.evaluator.evaluate(sentence.text, list(candidate.sentences))
        except RECOVERABLE as exc:
            return PipelineOutcome(
                Verdict.FAILED, sentence.id, tuple(trace),
                error=f"iteration {iteration} ({agent.value}): {type(exc).__name__}: {exc}",
            )
        branch = route(scores, cfg.thresholds, iteration, cfg.max_iterations)
        trace.append(IterationRecord(candidate, scores, branch))
        if branch is Branch.ACCEPT:
            return PipelineOutcome(Verdict.SIMPLIFIED, sentence.id, tuple(trace), final=candidate)
        if branch is Branch.UNCHANGED:
            return PipelineOutcome(Verdict.CANNOT_CONVERT, sentence.id, tuple(trace))
    return PipelineOutcome(Verdict.FAILED, sentence.id, tuple(trace), error="iterations exhausted")
