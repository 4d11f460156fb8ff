"""Evaluation corpus of complex sentences.

Files are UTF-8 JSON lines, one record per sentence::

    {"id": "c1", "text": "When the rabbit touches a gem, it gets more speed.",
     "category": "conditional", "expected_verdict": "simplified"}

``expected_verdict`` and ``note`` are optional.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path


class Category(str, Enum):
    CONDITIONAL = "conditional"
    SEQUENTIAL = "sequential"
    MISCELLANEOUS = "miscellaneous"
    CANNOT_CONVERT = "cannot_convert"


class Verdict(str, Enum):
    SIMPLIFIED = "simplified"
    CANNOT_CONVERT = "cannot_convert"
    FAILED = "failed"


# gold labels only ever claim one of the two "the system got it right" outcomes
GOLD_VERDICTS = (Verdict.SIMPLIFIED, Verdict.CANNOT_CONVERT)


class CorpusError(ValueError):
    """Base class for corpus load failures."""


class MissingField(CorpusError):
    def __init__(self, line: int, name: str):
        super().__init__(f"line {line}: missing field {name!r}")
        self.line = line
        self.name = name


class UnknownCategory(CorpusError):
    def __init__(self, line: int, value: object):
        super().__init__(f"line {line}: unknown category {value!r}")
        self.line = line
        self.value = value


class DuplicateId(CorpusError):
    def __init__(self, id: str, line: int):
        super().__init__(f"line {line}: duplicate id {id!r}")
        self.id = id
        self.line = line


class EmptyText(CorpusError):
    def __init__(self, line: int):
        super().__init__(f"line {line}: text is empty")
        self.line = line


class MalformedRecord(CorpusError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line


@dataclass(frozen=True)
class ComplexSentence:
    id: str
    text: str
    category: Category
    expected_verdict: Verdict | None = None
    note: str | None = None

    def to_record(self) -> dict:
        rec = {"id": self.id, "text": self.text, "category": self.category.value}
        if self.expected_verdict is not None:
            rec["expected_verdict"] = self.expected_verdict.value
        if self.note is not None:
            rec["note"] = self.note
        return rec


@dataclass(frozen=True)
class Corpus:
    sentences: tuple[ComplexSentence, ...] = ()
    source_path: str = ""
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for s in self.sentences:
            if s.id in index:
                raise DuplicateId(s.id, len(index) + 1)
            index[s.id] = s
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    def __getitem__(self, id: str) -> ComplexSentence:
        return self._index[id]

    def subset(self, ids) -> "Corpus":
        wanted = set(ids)
        return Corpus(tuple(s for s in self.sentences if s.id in wanted), self.source_path)


def _parse_record(raw: dict, line: int) -> ComplexSentence:
    for name in ("id", "text", "category"):
        if name not in raw:
            raise MissingField(line, name)
    if not isinstance(raw["id"], str) or not raw["id"]:
        raise MalformedRecord(line, "id must be a non-empty string")
    text = raw["text"]
    if not isinstance(text, str) or not text.strip():
        raise EmptyText(line)
    try:
        category = Category(raw["category"])
    except ValueError:
        raise UnknownCategory(line, raw["category"]) from None
    verdict = raw.get("expected_verdict")
    if verdict is not None:
        try:
            verdict = Verdict(verdict)
        except ValueError:
            raise MalformedRecord(line, f"bad expected_verdict {verdict!r}") from None
        if verdict not in GOLD_VERDICTS:
            raise MalformedRecord(line, f"expected_verdict must be one of "
                                        f"{[v.value for v in GOLD_VERDICTS]}")
    return ComplexSentence(raw["id"], text, category, verdict, raw.get("note"))


def parse_corpus(lines, source_path: str = "") -> Corpus:
    sentences = []
    seen = set()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(lineno, f"invalid JSON ({exc.msg})") from None
        if not isinstance(raw, dict):
            raise MalformedRecord(lineno, "record must be a JSON object")
        sentence = _parse_record(raw, lineno)
        if sentence.id in seen:
            raise DuplicateId(sentence.id, lineno)
        seen.add(sentence.id)
        sentences.append(sentence)
    return Corpus(tuple(sentences), source_path)


def load_corpus(path) -> Corpus:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return parse_corpus(fh, str(path))


def save_corpus(corpus: Corpus, path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for s in corpus:
            fh.write(json.dumps(s.to_record(), ensure_ascii=False) + "\n")


def builtin_corpus(name: str = "corpus") -> Corpus:
    """Load one of the corpora shipped in ``sentsimp/data`` (``corpus`` or ``desk10``)."""
    ref = resources.files("sentsimp") / "data" / f"{name}.jsonl"
    with ref.open(encoding="utf-8") as fh:
        return parse_corpus(fh, f"sentsimp:data/{name}.jsonl")


def category_histogram(corpus: Corpus) -> dict[Category, int]:
    counts = Counter(s.category for s in corpus)
    return {c: counts.get(c, 0) for c in Category}
