"""Semantic and lexical similarity between a complex sentence and its rewrite.

Both scores are on 0-100. The lexical score is deterministic: a Dice-style
ratio over the token-level longest common subsequence. Lower lexical scores
mean the rewrite restructured more. The semantic score comes from an LLM
judge, or from a fixture table for offline runs.
"""

from __future__ import annotations

import hashlib
import json
import re
import string
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

from sentsimp.agents import (
    FixtureMiss,
    Provider,
    ProviderConfig,
    ResponseCache,
    call_provider,
    judge_config,
    load_template,
)


class EmptyInput(ValueError):
    pass


class EmptyOutput(ValueError):
    pass


class UnparseableJudgeResponse(ValueError):
    pass


@dataclass(frozen=True)
class SimilarityScores:
    semantic: float
    lexical: float

    def __post_init__(self):
        if not 0 <= self.semantic <= 100:
            raise ValueError(f"semantic score out of range: {self.semantic}")
        if not 0 <= self.lexical <= 100:
            raise ValueError(f"lexical score out of range: {self.lexical}")


# underscores are word characters: state names like ready_to_explode stay whole
_PUNCT = re.compile("[" + re.escape(string.punctuation.replace("_", "")) + "‘’“”…–—]")


def tokenize(text: str) -> list[str]:
    return _PUNCT.sub("", text.lower()).split()


def lcs_length(a: list[str], b: list[str]) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b):
            cur.append(prev[j] + 1 if x == y else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def _check(input: str, output) -> None:
    if not input or not input.strip():
        raise EmptyInput("input sentence is empty")
    if isinstance(output, str):
        raise TypeError("output must be a list of sentences, not a string")
    if not output or not any(s.strip() for s in output):
        raise EmptyOutput("output has no sentences")


def lexical_score(input: str, output: list[str]) -> float:
    _check(input, output)
    a = tokenize(input)
    b = tokenize(" ".join(output))
    if not a or not b:
        return 0.0
    return 100.0 * 2 * lcs_length(a, b) / (len(a) + len(b))


# --------------------------------------------------------------------------
# semantic scorers

def pair_hash(input: str, output) -> str:
    blob = json.dumps([input.strip(), [s.strip() for s in output]], ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class SemanticScorer(Protocol):
    def score(self, input: str, output: list[str]) -> float: ...


@dataclass
class ScriptedScorer:
    """Semantic scores looked up by :func:`pair_hash`; misses are errors."""

    scores: dict[str, float] = field(default_factory=dict)
    identity_score: float | None = None

    def score(self, input: str, output: list[str]) -> float:
        key = pair_hash(input, output)
        if key in self.scores:
            return float(self.scores[key])
        if self.identity_score is not None and tokenize(input) == tokenize(" ".join(output)):
            return float(self.identity_score)
        raise FixtureMiss(f"no scripted semantic score for pair {key[:12]} ({input!r})")

    def add(self, input: str, output, score: float) -> None:
        self.scores[pair_hash(input, output)] = float(score)

    @classmethod
    def from_jsonl(cls, path, identity_score: float | None = None) -> "ScriptedScorer":
        """Records are ``{"pair": <hash>, "score": n}`` or ``{"input", "output", "score"}``."""
        scorer = cls(identity_score=identity_score)
        with Path(path).open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                rec = json.loads(line)
                if "pair" in rec:
                    scorer.scores[rec["pair"]] = float(rec["score"])
                elif "input" in rec and "output" in rec:
                    scorer.add(rec["input"], rec["output"], rec["score"])
                else:
                    raise ValueError(f"{path}:{lineno}: need 'pair' or 'input'/'output'")
        return scorer


_INT = re.compile(r"(?<![\w.-])\d+(?![\w]|\.\d)")


def parse_judge_score(response: str) -> int:
    for m in _INT.finditer(response):
        value = int(m.group())
        if 0 <= value <= 100:
            return value
    raise UnparseableJudgeResponse(f"no integer in [0, 100] in judge reply {response[:80]!r}")


@dataclass
class LlmJudge:
    provider: Provider
    config: ProviderConfig = field(default_factory=lambda: judge_config(ProviderConfig()))
    cache: ResponseCache | None = None
    template: str = "judge_v1.txt"

    def render(self, input: str, output: list[str]) -> str:
        return load_template(self.template).substitute(input=input.strip(), output="\n".join(output))

    def score(self, input: str, output: list[str]) -> float:
        _check(input, output)
        call = call_provider(self.render(input, output), self.config, self.provider, self.cache)
        return float(parse_judge_score(call.response))


def semantic_score(input: str, output: list[str], scorer: SemanticScorer) -> float:
    _check(input, output)
    return scorer.score(input, list(output))


def evaluate(input: str, output: list[str], scorer: SemanticScorer) -> SimilarityScores:
    output = list(output)
    lexical = lexical_score(input, output)
    return SimilarityScores(semantic_score(input, output, scorer), lexical)


@dataclass
class Agent2Evaluator:
    """The orchestrator-facing evaluator: judge-backed semantic, LCS lexical."""

    scorer: SemanticScorer

    def evaluate(self, input: str, output: list[str]) -> SimilarityScores:
        return evaluate(input, output, self.scorer)
