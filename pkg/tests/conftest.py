from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import pytest

from sentsimp.agents import AgentKind, LlmSimplifier, ScriptedProvider, SimplificationCandidate
from sentsimp.orchestrator import Dependencies
from sentsimp.scoring import Agent2Evaluator, ScriptedScorer, SimilarityScores

DATA = Path(__file__).resolve().parents[1] / "src" / "sentsimp" / "data"

ALIEN = "When a yellow alien touches a wall, it has 5 seconds before it explodes."
RED_RABBIT = "When the rabbit is red, the fox cannot eat the rabbit."
EX1_QUERY = "When the rabbit is yellow, the fox that is touched by the rabbit will die."
EX2_QUERY = "When a fox sees the rabbit touch a carrot, it chases it until the rabbit moves."
EX2_AGENT1_OUTPUT = [
    "When a fox sees the rabbit and the rabbit touches a carrot, the fox chases the rabbit.",
    "When the rabbit moves, the fox stops chasing.",
]
EX1_PAIR_OUTPUT = [
    "When the fox sees the rabbit and rabbit touches a carrot, the fox turns silver for 0.1 second.",
    "When the fox is silver and a rabbit touches a carrot, the fox chases the rabbit.",
    "When rabbit moves, the fox stops.",
]
EX3_INPUT = "When a rabbit is touched, score adds 1."
EX3_OUTPUT = ["When a rabbit is touched, the score increases by 1."]


@dataclass
class CannedSimplifier:
    """Returns a fixed sentence per (agent, sample) and logs every call."""

    calls: list = field(default_factory=list)

    def simplify(self, query, agent, iteration, sample=0):
        self.calls.append((agent, iteration, sample))
        return SimplificationCandidate((f"{agent.value} attempt {sample} of: {query}",), agent, iteration)


@dataclass
class ScoreSequence:
    """Evaluator yielding a fixed sequence of scores (the last one repeats)."""

    scores: list

    def __post_init__(self):
        self._i = 0

    def evaluate(self, input, output):
        s = self.scores[min(self._i, len(self.scores) - 1)]
        self._i += 1
        return SimilarityScores(*s)


@pytest.fixture
def desk_deps():
    return Dependencies(
        LlmSimplifier(ScriptedProvider.from_jsonl(DATA / "desk10_provider.jsonl", echo=True)),
        Agent2Evaluator(ScriptedScorer.from_jsonl(DATA / "desk10_semantic.jsonl")),
    )


@pytest.fixture
def echo_deps():
    return Dependencies(
        LlmSimplifier(ScriptedProvider(echo=True)),
        Agent2Evaluator(ScriptedScorer(identity_score=100)),
    )


# --------------------------------------------------------------------------
# acceptance summary: one PASS/FAIL line per criterion at the end of the run

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion this test checks")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            n, title = m.args
            _criteria.setdefault(n, {"title": title, "outcomes": []})


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for n, entry in _criteria.items():
        if f"criterion{n}_" in report.nodeid.split("::")[-1]:
            entry["outcomes"].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        out = e["outcomes"]
        if not out:
            status = "NOT RUN"
        elif "failed" in out:
            status = "FAIL"
        elif all(o == "skipped" for o in out):
            status = "SKIP"
        else:
            status = "PASS"
        terminalreporter.write_line(f"criterion {n}: {status:7s} {e['title']}")
