"""Controlled-English grammar for cause-action game rules.

Grammar (also shipped as ``docs/grammar.ebnf``)::

    sentence     := conditional | declarative
    conditional  := ("When" | "If") cause_list "," action_list "."
    declarative  := clause "."
    cause_list   := clause {"and" clause}
    action_list  := clause {"and" clause}
    clause       := noun_phrase verb_phrase [noun_phrase] [duration]
    duration     := "for" number time_unit

Inside a list, a clause after "and" may drop its subject ("... and touches the
fox") or its subject and copula ("... becomes sad for 5 seconds and
ready_to_explode for 6 seconds"); both are inherited from the previous clause.

Phrase recognition is shallow and uses no content-word lexicon: only closed
classes (determiners, auxiliaries, pronouns, a few prepositions) are listed,
and where the noun phrase ends is decided by verb morphology with backtracking.
Rejections come back as :class:`ParseDiagnostic` values, never exceptions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

# --------------------------------------------------------------------------
# data


class DiagnosticCode(str, Enum):
    NESTED_CLAUSE = "NestedClause"
    UNRESOLVED_PRONOUN = "UnresolvedPronoun"
    UNTIL_CONSTRUCT = "UntilConstruct"
    ABSTRACT_ACTION = "AbstractAction"
    NO_MAIN_ACTOR = "NoMainActor"
    UNPARSEABLE = "Unparseable"


@dataclass(frozen=True)
class Duration:
    value: float  # seconds
    unit: str = "seconds"

    def __post_init__(self):
        if not self.value > 0:
            raise ValueError(f"duration must be positive, got {self.value}")


@dataclass(frozen=True)
class Clause:
    subject: str
    predicate: str
    object: str | None = None
    negated: bool = False
    duration: Duration | None = None

    def __post_init__(self):
        if not self.subject.strip() or not self.predicate.strip():
            raise ValueError("clause needs a subject and a predicate")

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "predicate": self.predicate,
            "object": self.object,
            "negated": self.negated,
            "duration": None if self.duration is None else self.duration.value,
        }


@dataclass(frozen=True)
class CauseActionRule:
    causes: tuple[Clause, ...]
    actions: tuple[Clause, ...]
    source_text: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.actions:
            raise ValueError("a rule needs at least one action")

    @property
    def conditional(self) -> bool:
        return bool(self.causes)

    def to_dict(self) -> dict:
        return {
            "causes": [c.to_dict() for c in self.causes],
            "actions": [a.to_dict() for a in self.actions],
            "source_text": self.source_text,
        }


@dataclass(frozen=True)
class ParseDiagnostic:
    code: DiagnosticCode
    span: tuple[int, int]
    message: str

    def to_dict(self) -> dict:
        return {"code": self.code.value, "span": list(self.span), "message": self.message}


# --------------------------------------------------------------------------
# closed word classes

TRIGGERS = {"when", "if"}
DETERMINERS = {
    "the", "a", "an", "this", "these", "those", "each", "all", "some", "no", "any",
    "more", "less", "many", "few", "another", "other", "every",
}
NUMBER_WORDS = {
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    "twice", "half",
}
PRONOUNS = {"it", "they", "them", "he", "she", "him", "her"}
POSSESSIVE_PRONOUNS = {"its", "their", "his"}
PERSON_PRONOUNS = {"you", "i", "we"}
COPULAS = {"is", "are", "was", "were", "am", "be", "been", "becomes", "become", "became"}
MODALS = {
    "can", "could", "will", "would", "shall", "should", "must", "may", "might",
    "does", "do", "did", "has", "have", "had",
}
NEGATORS = {
    "not", "never", "cannot", "can't", "doesn't", "don't", "isn't", "aren't",
    "won't", "didn't", "wasn't",
}
AUX = COPULAS | MODALS | NEGATORS
# auxiliaries that double as main verbs ("has 4 moves")
HAVE_DO = {"has", "have", "had", "does", "do", "did"}
PREDETERMINERS = {"all", "both", "half"}
CONJUNCTIONS = {"and", "or", "but", "nor", "yet", "so"}
# prepositions that can never be part of a noun phrase
HARD_PREPOSITIONS = {"by", "for", "to", "at", "in", "on", "into", "onto", "from", "with", "of", "than", "without"}
TIME_UNITS = {
    "second": 1.0, "seconds": 1.0, "sec": 1.0, "secs": 1.0,
    "minute": 60.0, "minutes": 60.0, "min": 60.0, "mins": 60.0,
}
RELATIVES = {"that", "who", "which", "whose", "whom", "where"}
SUBORDINATORS = {"while", "before", "after", "because", "unless", "whenever", "since", "although", "though"}
PERCEPTION_VERBS = {
    "see", "sees", "saw", "watch", "watches", "watched", "hear", "hears", "heard",
    "notice", "notices", "noticed", "feel", "feels", "let", "lets", "make", "makes",
    "help", "helps",
}
TRY_VERBS = {"try", "tries", "tried", "trying", "attempt", "attempts", "attempted", "manage", "manages", "managed"}
MAKE_VERBS = {"make", "makes", "made", "making"}
ENSURE_VERBS = {"ensure", "ensures", "ensured"}
UNTIL_WORDS = {"until", "till", "til"}

_NUMBER = re.compile(r"^\d+(?:\.\d+)?%?$")
_TOKEN = re.compile(r"\d+(?:\.\d+)?%?|[A-Za-z_][\w]*(?:['’][A-Za-z]+)?|[^\w\s]")


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int

    @property
    def low(self) -> str:
        return self.text.lower().replace("’", "'")


def tokenize(s: str) -> list[Token]:
    return [Token(m.group(), m.start(), m.end()) for m in _TOKEN.finditer(s)]


def _is_punct(t: Token) -> bool:
    return not (t.text[0].isalnum() or t.text[0] == "_")


def _is_number(t: Token) -> bool:
    return bool(_NUMBER.match(t.text)) or t.low in NUMBER_WORDS


def _is_possessive(t: Token) -> bool:
    return t.low.endswith("'s") and len(t.low) > 2


def _is_function(t: Token) -> bool:
    w = t.low
    return (
        _is_punct(t) or w in DETERMINERS or w in AUX or w in CONJUNCTIONS
        or w in PRONOUNS or w in POSSESSIVE_PRONOUNS or w in PERSON_PRONOUNS
        or w in HARD_PREPOSITIONS or w in TRIGGERS or _is_number(t)
    )


def _is_content(t: Token) -> bool:
    return not _is_function(t)


def _verb_strength(t: Token) -> int | None:
    """How likely ``t`` starts a verb phrase: 1 certain, 2 by morphology, 3 possible."""
    w = t.low
    if w in AUX:
        return 1
    if _is_function(t) or _is_possessive(t):
        return None
    if len(w) >= 3 and w.endswith("s") and not w.endswith(("ss", "us", "is")):
        return 2
    if len(w) >= 4 and w.endswith("ed"):
        return 2
    return 3


def _join(tokens) -> str:
    out = ""
    for t in tokens:
        if out and not _is_punct(t):
            out += " "
        out += t.text
    return out


def _norm_np(text: str) -> str:
    words = text.lower().replace("’", "'").split()
    if words and words[0] in {"the", "a", "an"}:
        words = words[1:]
    return " ".join(words)


# --------------------------------------------------------------------------
# construct scan: constructions outside the grammar get a specific code


def _scan_constructs(toks: list[Token]) -> ParseDiagnostic | None:
    found: list[tuple[int, DiagnosticCode, int, str]] = []
    low = [t.low for t in toks]
    n = len(toks)

    def span(i, j):
        return (toks[i].start, toks[min(j, n) - 1].end)

    # "It is (not) possible to win ...": the subject is a placeholder, no actor
    if n >= 3 and low[0] in {"it", "it's"}:
        j = 1 if low[0] == "it's" else 2
        if low[0] == "it" and low[1] not in {"is", "was"}:
            j = -1
        if j > 0:
            if j < n and low[j] == "not":
                j += 1
            if j + 1 < n and _is_content(toks[j]) and low[j + 1] in {"to", "that"}:
                found.append((0, DiagnosticCode.NO_MAIN_ACTOR, j + 2, "sentence has no acting character"))
    if low and low[0] == "to":
        found.append((0, DiagnosticCode.NO_MAIN_ACTOR, 2, "sentence starts with an infinitive, no acting character"))

    for i, w in enumerate(low):
        nxt = low[i + 1] if i + 1 < n else ""
        if w in TRY_VERBS and nxt == "to":
            found.append((i, DiagnosticCode.ABSTRACT_ACTION, i + 2, f"'{toks[i].text} to' is not a concrete game action"))
        elif w in MAKE_VERBS and nxt == "sure":
            found.append((i, DiagnosticCode.ABSTRACT_ACTION, i + 2, "'make sure' is not a concrete game action"))
        elif w in ENSURE_VERBS:
            found.append((i, DiagnosticCode.ABSTRACT_ACTION, i + 1, f"'{toks[i].text}' is not a concrete game action"))
        elif w in UNTIL_WORDS:
            found.append((i, DiagnosticCode.UNTIL_CONSTRUCT, i + 1, "'until' hides a second condition; state when the action stops"))
        elif w in RELATIVES and i > 0 and _is_content(toks[i - 1]):
            found.append((i, DiagnosticCode.NESTED_CLAUSE, i + 1, f"relative clause introduced by '{toks[i].text}'"))
        elif w in SUBORDINATORS and i > 0:
            found.append((i, DiagnosticCode.NESTED_CLAUSE, i + 1, f"subordinate clause introduced by '{toks[i].text}'"))
        elif w in {"every", "each"} and nxt == "time":
            found.append((i, DiagnosticCode.NESTED_CLAUSE, i + 2, f"'{w} time' hides a condition"))
        elif w in TRIGGERS and i > 0:
            found.append((i, DiagnosticCode.NESTED_CLAUSE, i + 1, f"'{toks[i].text}' inside a clause"))
        elif w in PERCEPTION_VERBS:
            # sees [the] rabbit touch a carrot: object followed by its own verb and object
            j = i + 1
            if j < n and (low[j] in DETERMINERS or _is_number(toks[j])):
                j += 1
            run = j
            while run < n and _is_content(toks[run]) and not _is_possessive(toks[run]):
                run += 1
            if run - j >= 2 and run < n and (low[run] in DETERMINERS or _is_number(toks[run])):
                found.append((i, DiagnosticCode.NESTED_CLAUSE, run,
                              f"embedded action after '{toks[i].text}'; split it into two causes"))
    if not found:
        return None
    pos, code, end, message = min(found, key=lambda f: f[0])
    return ParseDiagnostic(code, span(pos, end), message)


# --------------------------------------------------------------------------
# parser


class _Fail(Exception):
    def __init__(self, diag: ParseDiagnostic | None = None):
        self.diag = diag


@dataclass
class _Clause:
    subject: list[Token]
    predicate: list[Token]
    obj: list[Token]
    duration: Duration | None
    chain: list[Token]  # leading auxiliaries; gapping reuses them
    subject_text: str | None = None  # set when inherited or resolved

    @property
    def subject_str(self) -> str:
        return self.subject_text if self.subject_text is not None else _join(self.subject)

    def build(self) -> Clause:
        pred = _join(self.predicate)
        negated = any(t.low in NEGATORS for t in self.predicate)
        return Clause(self.subject_str, pred, _join(self.obj) or None, negated, self.duration)


class _Parser:
    def __init__(self, source: str, toks: list[Token]):
        self.source = source
        self.toks = toks
        self.good = 0  # tokens[:good] have been consumed by a successful step

    # -- helpers ---------------------------------------------------------

    def _mark(self, absolute_end: int):
        self.good = max(self.good, absolute_end)

    def unparseable(self, message: str) -> ParseDiagnostic:
        end = self.toks[self.good - 1].end if self.good else 0
        return ParseDiagnostic(DiagnosticCode.UNPARSEABLE, (0, end), message)

    def pronoun(self, tok: Token, message: str) -> _Fail:
        return _Fail(ParseDiagnostic(DiagnosticCode.UNRESOLVED_PRONOUN, (tok.start, tok.end), message))

    # -- noun phrases ----------------------------------------------------

    def _simple_np(self, seg, i):
        """Yield end indices of simple noun phrases starting at ``i``."""
        if i >= len(seg):
            return
        t = seg[i]
        if t.low in PRONOUNS or t.low in PERSON_PRONOUNS or t.low == "there":
            yield i + 1
            return
        j = i
        if t.low in DETERMINERS or t.low in POSSESSIVE_PRONOUNS or _is_number(t):
            j += 1
        for k in range(j, min(j + 3, len(seg))):
            if not _is_content(seg[k]):
                break
            if not _is_possessive(seg[k]):
                yield k + 1

    def _np_alts(self, seg, i):
        for e in self._simple_np(seg, i):
            yield e
            if e < len(seg) and seg[e].low in {"and", ","} and seg[i].low not in PRONOUNS:
                k = e + 1
                if seg[e].low == "," and k < len(seg) and seg[k].low == "and":
                    k += 1
                for e2 in self._np_alts(seg, k):
                    yield e2

    def _check_object(self, obj):
        """Object: noun phrases or quantities joined by ',' / 'and'."""
        if not obj:
            return
        segments, cur = [], []
        for t in obj:
            if t.low in {",", "and"}:
                segments.append(cur)
                cur = []
            else:
                cur.append(t)
        segments.append(cur)
        for idx, seg in enumerate(segments):
            if not seg:
                # only ", and" may produce an empty piece
                if idx + 1 < len(segments) and segments[idx + 1] and idx > 0:
                    continue
                raise _Fail()
            k = 0
            if seg[0].low == "by":
                k = 1
                if k >= len(seg):
                    raise _Fail()
            for t in seg[k:]:
                if t.low in PRONOUNS:
                    raise self.pronoun(t, f"pronoun '{t.text}' as an object; name the character")
                if t.low in POSSESSIVE_PRONOUNS:
                    raise self.pronoun(t, f"possessive '{t.text}' as an object; name the character")
            if len(seg) > k + 1 and seg[k].low in PREDETERMINERS and seg[k + 1].low in DETERMINERS:
                k += 1
            head = seg[k]
            rest = seg[k + 1:]
            if head.low in DETERMINERS or _is_number(head):
                if head.low in DETERMINERS and not rest:
                    raise _Fail()
            elif not _is_content(head) and head.low not in PERSON_PRONOUNS:
                raise _Fail()
            else:
                rest = seg[k:]
            if len(rest) > 3:
                raise _Fail()
            for t in rest:
                if not _is_content(t) and not t.text == "%":
                    raise _Fail()

    # -- verb phrases ----------------------------------------------------

    def _vp(self, seg, i, subject, duration) -> _Clause:
        n = len(seg)
        pred, chain = [], []
        while i < n and seg[i].low in AUX:
            chain.append(seg[i])
            i += 1
        pred.extend(chain)
        if chain and all(t.low in NEGATORS for t in chain) and chain[0].low == "not":
            raise _Fail()
        if i < n and _is_content(seg[i]) and not _is_possessive(seg[i]):
            pred.append(seg[i])
            i += 1
        elif not chain or chain[-1].low not in COPULAS | HAVE_DO:
            raise _Fail()
        while i < n and _is_content(seg[i]) and not _is_possessive(seg[i]):
            pred.append(seg[i])
            i += 1
        # prepositions other than "by" stay with the verb ("moves to", "wander in")
        while i < n and seg[i].low in HARD_PREPOSITIONS and seg[i].low != "by":
            pred.append(seg[i])
            i += 1
        if not pred:
            raise _Fail()
        obj = seg[i:]
        self._check_object(obj)
        return _Clause(subject, pred, obj, duration, chain)

    # -- clauses ---------------------------------------------------------

    def _strip_duration(self, seg):
        if len(seg) >= 3 and seg[-3].low == "for" and _NUMBER.match(seg[-2].text) \
                and seg[-1].low in TIME_UNITS and not seg[-2].text.endswith("%"):
            value = float(seg[-2].text) * TIME_UNITS[seg[-1].low]
            if value <= 0:
                raise _Fail()
            return seg[:-3], Duration(value)
        return seg, None

    def full_clause(self, seg) -> _Clause:
        body, duration = self._strip_duration(seg)
        alts = []
        for e in set(self._np_alts(body, 0)):
            if e < len(body):
                s = _verb_strength(body[e])
                if s is not None:
                    alts.append((s, -e, e))
        last_fail = _Fail()
        for _, _, e in sorted(alts):
            try:
                return self._vp(body, e, body[:e], duration)
            except _Fail as f:
                if f.diag is not None:
                    last_fail = f
        raise last_fail

    def elided_clause(self, seg, prev: _Clause) -> _Clause:
        body, duration = self._strip_duration(seg)
        if not body:
            raise _Fail()
        s = _verb_strength(body[0])
        if s is None or s > 2 or body[0].low == "not":
            raise _Fail()
        c = self._vp(body, 0, [], duration)
        c.subject_text = prev.subject_str
        c.subject = prev.subject
        return c

    def gapped_clause(self, seg, prev: _Clause) -> _Clause:
        body, duration = self._strip_duration(seg)
        head = [t for t in prev.chain if t.low not in NEGATORS]
        if not body or not head:
            raise _Fail()
        # synthetic tokens for the inherited copula carry the position of the gap
        gap = [Token(t.text, body[0].start, body[0].start) for t in head]
        c = self._vp(gap + body, 0, [], duration)
        c.subject_text = prev.subject_str
        c.subject = prev.subject
        return c

    def clause_list(self, seg, offset) -> list[_Clause]:
        if not seg:
            raise _Fail()
        ands = [i for i, t in enumerate(seg) if t.low == "and"]
        pronoun_fail: list[_Fail] = []

        def attempt(fn, *args):
            try:
                return fn(*args)
            except _Fail as f:
                if f.diag is not None:
                    pronoun_fail.append(f)
                return None

        def rec(start, prev):
            bounds = [b for b in ands if b > start] + [len(seg)]
            for b in bounds:
                piece = seg[start:b]
                if piece and piece[-1].text == ",":
                    piece = piece[:-1]
                if not piece:
                    continue
                options = [(self.full_clause, piece)]
                if prev is not None:
                    options += [(self.elided_clause, piece, prev), (self.gapped_clause, piece, prev)]
                for fn, *args in options:
                    c = attempt(fn, *args)
                    if c is None:
                        continue
                    self._mark(offset + b)
                    if b == len(seg):
                        return [c]
                    rest = rec(b + 1, c)
                    if rest is not None:
                        return [c] + rest
            return None

        result = rec(0, None)
        if result is None:
            raise pronoun_fail[0] if pronoun_fail else _Fail()
        return result

    # -- sentence --------------------------------------------------------

    def parse(self) -> CauseActionRule:
        toks = self.toks
        if toks[-1].text != ".":
            self.good = len(toks)
            raise _Fail(self.unparseable("sentence must end with '.'"))
        for i, t in enumerate(toks[:-1]):
            if t.text in {".", "?", "!", ";", ":"}:
                self.good = i
                raise _Fail(self.unparseable(f"unexpected '{t.text}' inside the sentence"))
        body = toks[:-1]
        if body and body[0].low in TRIGGERS:
            self._mark(1)
            try:
                comma = next(i for i, t in enumerate(body) if t.text == ",")
            except StopIteration:
                raise _Fail(self.unparseable("conditional needs ',' between causes and actions")) from None
            causes = self.clause_list(body[1:comma], 1)
            self._mark(comma + 1)
            actions = self.clause_list(body[comma + 1:], comma + 1)
        else:
            causes = []
            actions = self.clause_list(body, 0)
        self._resolve(causes, actions)
        self._mark(len(toks))
        return CauseActionRule(
            tuple(c.build() for c in causes),
            tuple(a.build() for a in actions),
            self.source,
        )

    def _resolve(self, causes: list[_Clause], actions: list[_Clause]):
        for c in causes:
            if c.subject_text is None and c.subject:
                t = c.subject[0]
                if t.low in PRONOUNS or t.low in POSSESSIVE_PRONOUNS:
                    raise self.pronoun(t, f"'{t.text}' in a cause has nothing to refer to")
        candidates = {_norm_np(c.subject_str) for c in causes}
        antecedent = causes[-1].subject_str if len(candidates) == 1 else None
        for a in actions:
            if a.subject_text is not None or not a.subject:
                continue
            t = a.subject[0]
            if t.low not in PRONOUNS and t.low not in POSSESSIVE_PRONOUNS:
                continue
            if antecedent is None:
                why = "no cause to refer to" if not causes else \
                    f"ambiguous between {sorted(candidates)}"
                raise self.pronoun(t, f"pronoun '{t.text}' is {why}")
            if t.low in POSSESSIVE_PRONOUNS:
                a.subject_text = f"{antecedent}'s " + _join(a.subject[1:])
            else:
                a.subject_text = antecedent
        # inherited subjects follow their (now resolved) source clause
        for group in (causes, actions):
            for prev, cur in zip(group, group[1:]):
                if cur.subject is prev.subject:
                    cur.subject_text = prev.subject_str


def parse_sentence(s: str) -> CauseActionRule | ParseDiagnostic:
    toks = tokenize(s)
    if not toks:
        return ParseDiagnostic(DiagnosticCode.UNPARSEABLE, (0, 0), "empty sentence")
    diag = _scan_constructs(toks)
    if diag is not None:
        return diag
    parser = _Parser(s, toks)
    try:
        return parser.parse()
    except _Fail as f:
        return f.diag if f.diag is not None else parser.unparseable("sentence does not fit the rule grammar")


def validate_candidate(candidate) -> list[tuple[int, CauseActionRule | ParseDiagnostic]]:
    sentences = candidate.sentences if hasattr(candidate, "sentences") else candidate
    return [(i, parse_sentence(s)) for i, s in enumerate(sentences)]


def grammar_clean(candidate) -> bool:
    return all(isinstance(r, CauseActionRule) for _, r in validate_candidate(candidate))


# --------------------------------------------------------------------------
# canonical rendering


def _fmt_number(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def render_clause(c: Clause) -> str:
    parts = [c.subject, c.predicate]
    if c.object:
        parts.append(c.object)
    if c.duration is not None:
        unit = "second" if c.duration.value == 1 else "seconds"
        parts.append(f"for {_fmt_number(c.duration.value)} {unit}")
    return " ".join(parts)


def render_rule(rule: CauseActionRule) -> str:
    actions = " and ".join(render_clause(a) for a in rule.actions)
    if rule.causes:
        return f"When {' and '.join(render_clause(c) for c in rule.causes)}, {actions}."
    return actions + "."


# --------------------------------------------------------------------------
# timed states

_NON_STATES = {
    "near", "far", "close", "over", "under", "up", "down", "left", "right", "on", "off",
    "in", "out", "away", "here", "there", "above", "below", "behind",
}


@dataclass(frozen=True)
class StateWarning:
    code: str  # "UnsetState" | "DurationOrder"
    state: str
    rule_index: int
    message: str


@dataclass(frozen=True)
class TimedPair:
    guard: str
    guard_duration: float
    trigger: str
    trigger_duration: float
    rule_index: int

    @property
    def ordered(self) -> bool:
        return self.guard_duration < self.trigger_duration


def _state_of(c: Clause, verbs) -> str | None:
    words = [w for w in c.predicate.lower().split() if w not in NEGATORS]
    if len(words) != 2 or words[0] not in verbs or c.object:
        return None
    state = words[1]
    if state in _NON_STATES:
        return None
    return state


def _set_states(rules) -> dict[str, float | None]:
    set_states: dict[str, float | None] = {}
    for rule in rules:
        for a in rule.actions:
            state = _state_of(a, {"becomes", "become", "turns", "turn"})
            if state is not None and not a.negated:
                d = a.duration.value if a.duration else None
                if set_states.get(state) is None:
                    set_states[state] = d
    return set_states


def timed_pairs(rules) -> list[TimedPair]:
    """(guard, trigger) pairs: a cause 'is T and not G' where both states are timed."""
    set_states = _set_states(rules)
    pairs = []
    for idx, rule in enumerate(rules):
        positive, negative = [], []
        for c in rule.causes:
            state = _state_of(c, {"is", "are"})
            if state is not None:
                (negative if c.negated else positive).append(state)
        for trig in positive:
            for guard in negative:
                td, gd = set_states.get(trig), set_states.get(guard)
                if td is not None and gd is not None:
                    pairs.append(TimedPair(guard, gd, trig, td, idx))
    return pairs


def timed_state_check(rules) -> list[StateWarning]:
    rules = list(rules)
    set_states = _set_states(rules)
    warnings = []
    for idx, rule in enumerate(rules):
        for c in rule.causes:
            state = _state_of(c, {"is", "are"})
            if state is not None and state not in set_states:
                warnings.append(StateWarning(
                    "UnsetState", state, idx, f"state '{state}' is tested but no rule makes anything {state}"))
    for p in timed_pairs(rules):
        if not p.ordered:
            warnings.append(StateWarning(
                "DurationOrder", p.guard, p.rule_index,
                f"guard '{p.guard}' lasts {_fmt_number(p.guard_duration)}s but trigger '{p.trigger}' "
                f"lasts {_fmt_number(p.trigger_duration)}s; the trigger must outlast the guard"))
    return warnings
