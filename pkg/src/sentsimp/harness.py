"""Batch evaluation: run the pipeline over a corpus and aggregate verdicts."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone

from sentsimp.cnl import ParseDiagnostic, validate_candidate
from sentsimp.corpus import Category, Corpus, Verdict
from sentsimp.orchestrator import Dependencies, PipelineConfig, PipelineOutcome, run_pipeline

MULTI_AGENT = "multi_agent"
SINGLE_AGENT = "single_agent"


@dataclass(frozen=True)
class SentenceResult:
    id: str
    category: Category
    outcome: PipelineOutcome
    grammar_clean: bool | None  # None unless Simplified
    diagnostics: tuple[dict, ...]
    expected_verdict: Verdict | None = None

    def to_record(self) -> dict:
        o = self.outcome
        return {
            "id": self.id,
            "category": self.category.value,
            "verdict": o.verdict.value,
            "iterations": o.iterations,
            "scores": [{"semantic": r.scores.semantic, "lexical": r.scores.lexical} for r in o.trace],
            "branches": [b.value for b in o.branches],
            "agents": [r.candidate.produced_by.value for r in o.trace],
            "final": list(o.final.sentences) if o.final else None,
            "grammar_clean": self.grammar_clean,
            "diagnostics": list(self.diagnostics),
            "expected_verdict": self.expected_verdict.value if self.expected_verdict else None,
            "error": o.error,
        }


@dataclass(frozen=True)
class EvalReport:
    total: int
    simplified: int
    cannot_convert: int
    failed: int
    per_category: dict[Category, dict[Verdict, int]]
    grammar_clean_rate: float | None
    gold_agreement: float | None
    mode: str
    run_metadata: dict
    details: tuple[SentenceResult, ...] = field(default=(), compare=False)

    @property
    def success_rate(self) -> float:
        return 100.0 * self.simplified / self.total

    @property
    def cannot_convert_rate(self) -> float:
        return 100.0 * self.cannot_convert / self.total

    @property
    def failed_rate(self) -> float:
        return 100.0 * self.failed / self.total

    def summary(self) -> dict:
        return {
            "mode": self.mode,
            "total": self.total,
            "simplified": self.simplified,
            "cannot_convert": self.cannot_convert,
            "failed": self.failed,
            "success_rate": round(self.success_rate, 4),
            "cannot_convert_rate": round(self.cannot_convert_rate, 4),
            "failed_rate": round(self.failed_rate, 4),
            "grammar_clean_rate": None if self.grammar_clean_rate is None else round(self.grammar_clean_rate, 4),
            "gold_agreement": None if self.gold_agreement is None else round(self.gold_agreement, 4),
            "per_category": {
                c.value: {v.value: n for v, n in counts.items()} for c, counts in self.per_category.items()
            },
            "run_metadata": self.run_metadata,
        }


@dataclass(frozen=True)
class ModeComparison:
    multi: EvalReport
    single: EvalReport

    @property
    def delta(self) -> float:
        return self.multi.success_rate - self.single.success_rate


def _diagnose(outcome: PipelineOutcome):
    if outcome.final is None:
        return None, ()
    diags = []
    for idx, result in validate_candidate(outcome.final):
        if isinstance(result, ParseDiagnostic):
            diags.append({"sentence": idx, **result.to_dict()})
    return not diags, tuple(diags)


def _run_one(sentence, cfg, deps) -> SentenceResult:
    outcome = run_pipeline(sentence, cfg, deps)
    clean, diags = _diagnose(outcome)
    return SentenceResult(sentence.id, sentence.category, outcome, clean, diags, sentence.expected_verdict)


def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def evaluate_corpus(
    corpus: Corpus,
    cfg: PipelineConfig,
    deps: Dependencies,
    workers: int = 1,
    model_name: str = "",
    timestamp: str | None = None,
    extra_metadata: dict | None = None,
) -> EvalReport:
    if len(corpus) == 0:
        raise ValueError("cannot evaluate an empty corpus")
    if workers <= 1:
        results = [_run_one(s, cfg, deps) for s in corpus]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            # map() yields in submission order, so results stay in corpus order
            results = list(pool.map(lambda s: _run_one(s, cfg, deps), corpus))

    per_category = {c: {v: 0 for v in Verdict} for c in Category}
    for r in results:
        per_category[r.category][r.outcome.verdict] += 1
    counts = {v: sum(1 for r in results if r.outcome.verdict is v) for v in Verdict}

    simplified = [r for r in results if r.outcome.verdict is Verdict.SIMPLIFIED]
    clean_rate = 100.0 * sum(r.grammar_clean for r in simplified) / len(simplified) if simplified else None
    labelled = [r for r in results if r.expected_verdict is not None]
    agreement = (
        100.0 * sum(r.outcome.verdict is r.expected_verdict for r in labelled) / len(labelled)
        if labelled else None
    )
    t = cfg.thresholds
    metadata = {
        "model_name": model_name,
        "thresholds": {
            "semantic_accept": t.semantic_accept,
            "lexical_accept_max": t.lexical_accept_max,
            "lexical_unchanged_min": t.lexical_unchanged_min,
        },
        "max_iterations": cfg.max_iterations,
        "single_agent_mode": cfg.single_agent_mode,
        "workers": workers,
        "corpus": corpus.source_path,
        "timestamp": timestamp if timestamp is not None else _now(),
    }
    if extra_metadata:
        metadata.update(extra_metadata)
    return EvalReport(
        total=len(results),
        simplified=counts[Verdict.SIMPLIFIED],
        cannot_convert=counts[Verdict.CANNOT_CONVERT],
        failed=counts[Verdict.FAILED],
        per_category=per_category,
        grammar_clean_rate=clean_rate,
        gold_agreement=agreement,
        mode=SINGLE_AGENT if cfg.single_agent_mode else MULTI_AGENT,
        run_metadata=metadata,
        details=tuple(results),
    )


def compare_modes(corpus, cfg, deps, **kwargs) -> ModeComparison:
    multi = evaluate_corpus(corpus, replace(cfg, single_agent_mode=False), deps, **kwargs)
    single = evaluate_corpus(corpus, replace(cfg, single_agent_mode=True), deps, **kwargs)
    return ModeComparison(multi, single)


# --------------------------------------------------------------------------
# rendering

def detail_lines(report: EvalReport) -> str:
    return "".join(json.dumps(r.to_record(), ensure_ascii=False) + "\n" for r in report.details)


def _pct(x: float | None) -> str:
    return "n/a" if x is None else f"{x:.1f}%"


def render_report(report: EvalReport, format: str = "markdown") -> str:
    if format in ("json", "jsonl", "json-lines"):
        return json.dumps(report.summary(), ensure_ascii=False, sort_keys=True) + "\n"
    if format not in ("markdown", "md", "markdown-table"):
        raise ValueError(f"unknown report format {format!r}")

    meta = report.run_metadata
    t = meta["thresholds"]
    lines = [
        f"### Evaluation ({report.mode})",
        "",
        "| metric | value |",
        "|---|---|",
        f"| total | {report.total} |",
        f"| simplified | {report.simplified} |",
        f"| cannot_convert | {report.cannot_convert} |",
        f"| failed | {report.failed} |",
        f"| success_rate | {_pct(report.success_rate)} |",
        f"| cannot_convert_rate | {_pct(report.cannot_convert_rate)} |",
        f"| failed_rate | {_pct(report.failed_rate)} |",
        f"| grammar_clean_rate | {_pct(report.grammar_clean_rate)} |",
        f"| gold_agreement | {_pct(report.gold_agreement)} |",
        f"| mode | {report.mode} |",
        f"| model_name | {meta['model_name'] or 'n/a'} |",
        f"| thresholds | semantic > {t['semantic_accept']:g}, lexical <= {t['lexical_accept_max']:g}, "
        f"unchanged > {t['lexical_unchanged_min']:g} |",
        f"| max_iterations | {meta['max_iterations']} |",
        f"| timestamp | {meta['timestamp']} |",
        "",
        "| category | simplified | cannot_convert | failed |",
        "|---|---|---|---|",
    ]
    for cat, counts in report.per_category.items():
        lines.append(
            f"| {cat.value} | {counts[Verdict.SIMPLIFIED]} | {counts[Verdict.CANNOT_CONVERT]} | {counts[Verdict.FAILED]} |"
        )
    return "\n".join(lines) + "\n"


def render_comparison(cmp: ModeComparison) -> str:
    return (
        render_report(cmp.multi) + "\n" + render_report(cmp.single)
        + f"\ndelta (multi - single): {cmp.delta:+.1f} percentage points\n"
    )
