import pytest
from hypothesis import given, settings, strategies as st

from sentsimp.agents import AgentKind, EmptyAnswer, ProviderError, ScriptedProvider, LlmSimplifier
from sentsimp.corpus import Category, ComplexSentence
from sentsimp.orchestrator import (
    Branch, Dependencies, PipelineConfig, Thresholds, Verdict, agent_for, comparator, replay_branches, route,
    run_pipeline,
)
from sentsimp.scoring import Agent2Evaluator, ScriptedScorer, SimilarityScores

from conftest import EX1_PAIR_OUTPUT, EX2_QUERY, RED_RABBIT, CannedSimplifier, ScoreSequence

T = Thresholds()
ITEM = ComplexSentence("s1", "When a fox sees a rabbit, the fox chases the rabbit.", Category.CONDITIONAL)
score = st.floats(0, 100, allow_nan=False)


@pytest.mark.parametrize("s, l, branch", [
    (100, 40, Branch.ACCEPT),
    (100, 100, Branch.UNCHANGED),
    (90, 70, Branch.REVISE),
    (96, 70, Branch.GAP_REVISE),
    (95, 30, Branch.REVISE),       # semantic threshold is strict
    (95.0001, 40, Branch.ACCEPT),  # lexical accept bound is inclusive
    (96, 95, Branch.GAP_REVISE),   # unchanged bound is strict
    (96, 95.0001, Branch.UNCHANGED),
    (0, 100, Branch.REVISE),
])
def test_comparator_table(s, l, branch):
    assert comparator(SimilarityScores(s, l), T) is branch


@settings(max_examples=2000)
@given(score, score)
def test_comparator_is_a_function_of_the_two_guards(s, l):
    b = comparator(SimilarityScores(s, l), T)
    assert b is not Branch.EXHAUSTED
    if s <= 95:
        assert b is Branch.REVISE
    elif l <= 40:
        assert b is Branch.ACCEPT
    elif l > 95:
        assert b is Branch.UNCHANGED
    else:
        assert b is Branch.GAP_REVISE


@given(score, score, st.integers(1, 5), st.integers(1, 5))
def test_route_only_changes_revisions_on_the_last_iteration(s, l, it, max_it):
    sc = SimilarityScores(s, l)
    base, routed = comparator(sc, T), route(sc, T, it, max_it)
    if it >= max_it and base in (Branch.REVISE, Branch.GAP_REVISE):
        assert routed is Branch.EXHAUSTED
    else:
        assert routed is base


def test_thresholds_validated():
    with pytest.raises(ValueError):
        Thresholds(lexical_accept_max=96)
    with pytest.raises(ValueError):
        Thresholds(semantic_accept=101)
    with pytest.raises(ValueError):
        PipelineConfig(max_iterations=0)


def test_custom_thresholds():
    t = Thresholds(semantic_accept=90)
    assert comparator(SimilarityScores(91, 30), t) is Branch.ACCEPT


def test_first_pass_accept():
    sc = ScriptedScorer()
    sc.add(EX2_QUERY, EX1_PAIR_OUTPUT, 100)
    prov = ScriptedProvider({("simplifier", EX2_QUERY): ["ANSWER:\n" + "\n".join(EX1_PAIR_OUTPUT)]})
    item = ComplexSentence("ex", EX2_QUERY, Category.CONDITIONAL)
    out = run_pipeline(item, PipelineConfig(), Dependencies(LlmSimplifier(prov), Agent2Evaluator(sc)))
    assert out.verdict is Verdict.SIMPLIFIED
    assert out.branches == [Branch.ACCEPT]
    assert list(out.final.sentences) == EX1_PAIR_OUTPUT


def test_exhaustion():
    out = run_pipeline(ITEM, PipelineConfig(max_iterations=3), Dependencies(CannedSimplifier(), ScoreSequence([(80, 50)])))
    assert out.verdict is Verdict.FAILED
    assert out.iterations == 3
    assert out.branches == [Branch.REVISE, Branch.REVISE, Branch.EXHAUSTED]
    assert out.final is None
    assert out.error == "iterations exhausted"


def test_single_iteration_budget():
    out = run_pipeline(ITEM, PipelineConfig(max_iterations=1), Dependencies(CannedSimplifier(), ScoreSequence([(96, 70)])))
    assert out.verdict is Verdict.FAILED
    assert out.branches == [Branch.EXHAUSTED]


def test_unchanged_on_a_later_iteration():
    out = run_pipeline(ITEM, PipelineConfig(), Dependencies(CannedSimplifier(), ScoreSequence([(90, 50), (100, 100)])))
    assert out.verdict is Verdict.CANNOT_CONVERT
    assert out.branches == [Branch.REVISE, Branch.UNCHANGED]


def test_gap_region_goes_to_the_alternative_agent():
    sim = CannedSimplifier()
    out = run_pipeline(ITEM, PipelineConfig(), Dependencies(sim, ScoreSequence([(100, 60), (100, 20)])))
    assert out.branches == [Branch.GAP_REVISE, Branch.ACCEPT]
    assert [c[0] for c in sim.calls] == [AgentKind.SIMPLIFIER, AgentKind.ALTERNATIVE_SIMPLIFIER]


def test_sample_numbers_count_calls_per_agent():
    sim = CannedSimplifier()
    run_pipeline(ITEM, PipelineConfig(max_iterations=4), Dependencies(sim, ScoreSequence([(10, 10)])))
    assert sim.calls == [
        (AgentKind.SIMPLIFIER, 1, 0),
        (AgentKind.ALTERNATIVE_SIMPLIFIER, 2, 0),
        (AgentKind.ALTERNATIVE_SIMPLIFIER, 3, 1),
        (AgentKind.ALTERNATIVE_SIMPLIFIER, 4, 2),
    ]
    sim = CannedSimplifier()
    run_pipeline(ITEM, PipelineConfig(max_iterations=3, single_agent_mode=True), Dependencies(sim, ScoreSequence([(10, 10)])))
    assert sim.calls == [(AgentKind.SIMPLIFIER, 1, 0), (AgentKind.SIMPLIFIER, 2, 1), (AgentKind.SIMPLIFIER, 3, 2)]


class Exploding:
    def __init__(self, exc, after=0):
        self.exc, self.after, self.n = exc, after, 0

    def simplify(self, query, agent, iteration, sample=0):
        self.n += 1
        if self.n > self.after:
            raise self.exc
        return CannedSimplifier().simplify(query, agent, iteration, sample)


@pytest.mark.parametrize("exc", [ProviderError("down"), EmptyAnswer("blank")])
def test_provider_failures_degrade_to_failed(exc):
    out = run_pipeline(ITEM, PipelineConfig(), Dependencies(Exploding(exc), ScoreSequence([(10, 10)])))
    assert out.verdict is Verdict.FAILED
    assert out.trace == ()
    assert type(exc).__name__ in out.error


def test_failure_after_one_iteration_keeps_the_trace():
    out = run_pipeline(ITEM, PipelineConfig(), Dependencies(Exploding(ProviderError("x"), after=1), ScoreSequence([(10, 10)])))
    assert out.verdict is Verdict.FAILED
    assert out.branches == [Branch.REVISE]
    assert out.error.startswith("iteration 2 (alternative)")


def test_programming_errors_propagate():
    with pytest.raises(ZeroDivisionError):
        run_pipeline(ITEM, PipelineConfig(), Dependencies(Exploding(ZeroDivisionError()), ScoreSequence([(1, 1)])))


def test_echo_unchanged():
    deps = Dependencies(LlmSimplifier(ScriptedProvider(echo=True)), Agent2Evaluator(ScriptedScorer(identity_score=100)))
    out = run_pipeline(ComplexSentence("x", RED_RABBIT, Category.CANNOT_CONVERT), PipelineConfig(), deps)
    assert (out.verdict, out.iterations) == (Verdict.CANNOT_CONVERT, 1)


pairs = st.tuples(score, score)


@settings(max_examples=300)
@given(st.lists(pairs, min_size=1, max_size=6), st.integers(1, 5), st.booleans())
def test_trace_invariants(seq, max_it, single):
    cfg = PipelineConfig(max_iterations=max_it, single_agent_mode=single)
    out = run_pipeline(ITEM, cfg, Dependencies(CannedSimplifier(), ScoreSequence(seq)))
    assert replay_branches(out, cfg) == out.branches
    assert 1 <= out.iterations <= max_it
    agents = [r.candidate.produced_by for r in out.trace]
    assert agents == [agent_for(i, cfg) for i in range(1, out.iterations + 1)]
    assert agents[0] is AgentKind.SIMPLIFIER
    if out.verdict is Verdict.SIMPLIFIED:
        last = out.trace[-1].scores
        assert last.semantic > 95 and last.lexical <= 40
        assert out.final is out.trace[-1].candidate
    # same inputs, same outcome
    assert run_pipeline(ITEM, cfg, Dependencies(CannedSimplifier(), ScoreSequence(seq))) == out
