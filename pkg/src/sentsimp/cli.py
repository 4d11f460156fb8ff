"""Command-line entry point: ``sentsimp simplify | evaluate | validate``.

Exit codes: 0 success, 1 configuration or I/O error, 2 pipeline Failed,
3 validation diagnostics present.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from sentsimp import cnl
from sentsimp.agents import HttpChatProvider, LlmSimplifier, ResponseCache, ScriptedProvider, judge_config
from sentsimp.config import ConfigError, RunConfig, load_config, with_overrides
from sentsimp.corpus import ComplexSentence, Category, CorpusError, Verdict, load_corpus
from sentsimp.harness import compare_modes, detail_lines, evaluate_corpus, render_comparison, render_report
from sentsimp.orchestrator import Dependencies, run_pipeline
from sentsimp.scoring import Agent2Evaluator, LlmJudge, ScriptedScorer

EXIT_OK, EXIT_CONFIG, EXIT_FAILED, EXIT_DIAGNOSTICS = 0, 1, 2, 3


def _err(msg: str) -> None:
    print(f"sentsimp: {msg}", file=sys.stderr)


def build_dependencies(cfg: RunConfig) -> Dependencies:
    """Wire provider, cache and judge for ``cfg``; raises ConfigError when they cannot be built."""
    cache = ResponseCache(cfg.cache_dir) if cfg.cache_dir else None
    if cfg.offline.enabled:
        try:
            provider = ScriptedProvider.from_jsonl(cfg.offline.provider_fixture, echo=cfg.offline.echo)
            scorer = ScriptedScorer.from_jsonl(cfg.offline.semantic_fixture)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot load offline fixtures: {exc}") from exc
        # fixtures are already deterministic; caching them would only add files
        return Dependencies(LlmSimplifier(provider, cfg.provider), Agent2Evaluator(scorer))

    if not os.environ.get(cfg.provider.api_key_env):
        raise ConfigError(
            f"environment variable {cfg.provider.api_key_env} is not set (use --offline for fixture runs)"
        )
    provider = HttpChatProvider()
    judge = LlmJudge(provider, judge_config(cfg.provider, cfg.judge_temperature), cache)
    return Dependencies(LlmSimplifier(provider, cfg.provider, cache), Agent2Evaluator(judge))


def _shared_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="TOML run configuration")
    p.add_argument("--cache-dir", help="response cache directory")
    p.add_argument("--offline", action="store_true", default=None,
                   help="scripted provider and scorer fixtures; no network, no credential")
    p.add_argument("--single-agent", action="store_true", default=None,
                   help="re-run the simplifier instead of the alternative agent")
    p.add_argument("--compare", action="store_true", default=None,
                   help="evaluate both modes and report the difference")
    p.add_argument("--max-iterations", type=int)
    p.add_argument("--threshold-semantic", type=float, help="semantic score needed to accept (strictly greater)")
    p.add_argument("--threshold-lexical", type=float, help="largest lexical score still accepted")
    p.add_argument("--corpus", help="corpus JSONL file")
    p.add_argument("--output-dir", help="directory for report files")
    p.add_argument("--workers", type=int)
    p.add_argument("--timestamp", help="fixed run timestamp, for reproducible reports")
    return p


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_flags()
    parser = argparse.ArgumentParser(prog="sentsimp", description="Simplify game-design sentences into cause/action rules.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simplify", parents=[shared], help="simplify one sentence")
    s.add_argument("sentence")

    sub.add_parser("evaluate", parents=[shared], help="evaluate a corpus and write reports")

    v = sub.add_parser("validate", parents=[shared], help="check a file of sentences against the rule grammar")
    v.add_argument("path")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    try:
        return with_overrides(
            cfg,
            cache_dir=args.cache_dir,
            corpus=args.corpus,
            output_dir=args.output_dir,
            offline=args.offline,
            single_agent=args.single_agent,
            compare=args.compare,
            max_iterations=args.max_iterations,
            threshold_semantic=args.threshold_semantic,
            threshold_lexical=args.threshold_lexical,
            workers=args.workers,
            timestamp=args.timestamp,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_simplify(sentence: str, cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if not sentence.strip():
        _err("simplify needs a non-empty sentence")
        return EXIT_CONFIG
    deps = build_dependencies(cfg)
    item = ComplexSentence("cli", sentence.strip(), Category.MISCELLANEOUS)
    outcome = run_pipeline(item, cfg.pipeline, deps)

    print(f"verdict: {outcome.verdict.value}", file=out)
    for i, rec in enumerate(outcome.trace, start=1):
        print(
            f"iteration {i} [{rec.candidate.produced_by.value}] semantic={rec.scores.semantic:.1f} "
            f"lexical={rec.scores.lexical:.1f} -> {rec.branch_taken.value}",
            file=out,
        )
    if outcome.final is not None:
        for line in outcome.final.sentences:
            print(f"  {line}", file=out)
    if outcome.error:
        print(f"error: {outcome.error}", file=out)
    return EXIT_FAILED if outcome.verdict is Verdict.FAILED else EXIT_OK


def cmd_evaluate(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if cfg.corpus_path is None:
        _err("evaluate needs a corpus (--corpus or [paths] corpus)")
        return EXIT_CONFIG
    try:
        corpus = load_corpus(cfg.corpus_path)
    except (OSError, CorpusError) as exc:
        _err(f"cannot load corpus {cfg.corpus_path}: {exc}")
        return EXIT_CONFIG
    if len(corpus) == 0:
        _err(f"corpus {cfg.corpus_path} is empty")
        return EXIT_CONFIG
    deps = build_dependencies(cfg)
    kwargs = dict(
        workers=cfg.workers,
        model_name="scripted" if cfg.offline.enabled else cfg.provider.model_name,
        timestamp=cfg.timestamp,
        extra_metadata={"effective_config": cfg.to_dict()},
    )

    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    if cfg.compare:
        cmp = compare_modes(corpus, cfg.pipeline, deps, **kwargs)
        reports = [cmp.multi, cmp.single]
        text = render_comparison(cmp)
        (cfg.output_dir / "comparison.md").write_text(text, encoding="utf-8")
    else:
        reports = [evaluate_corpus(corpus, cfg.pipeline, deps, **kwargs)]
        text = render_report(reports[0])

    for report in reports:
        d = cfg.output_dir
        (d / f"{report.mode}_summary.json").write_text(render_report(report, "json"), encoding="utf-8")
        (d / f"{report.mode}_details.jsonl").write_text(detail_lines(report), encoding="utf-8")
        (d / f"{report.mode}_report.md").write_text(render_report(report), encoding="utf-8")
    out.write(text)
    return EXIT_OK


def _validate_lines(lines):
    for lineno, text in enumerate(lines, start=1):
        if text.strip():
            yield lineno, text.strip(), cnl.parse_sentence(text.strip())


def cmd_validate(path, out=None) -> int:
    out = out or sys.stdout
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        _err(f"cannot read {path}: {exc.strerror or exc}")
        return EXIT_CONFIG
    except UnicodeDecodeError as exc:
        _err(f"cannot decode {path}: {exc}")
        return EXIT_CONFIG

    rules, n, bad = [], 0, 0
    for lineno, text, result in _validate_lines(lines):
        n += 1
        rec = {"index": lineno, "sentence": text}
        if isinstance(result, cnl.ParseDiagnostic):
            bad += 1
            rec.update(status="diagnostic", diagnostic=result.to_dict())
        else:
            rules.append(result)
            rec.update(status="ok", rule=result.to_dict(), canonical=cnl.render_rule(result))
        print(json.dumps(rec, ensure_ascii=False), file=out)

    for w in cnl.timed_state_check(rules):
        print(f"warning: {w.code}: {w.message}", file=sys.stderr)
    print(f"{n} sentence(s), {bad} with diagnostics", file=sys.stderr)
    return EXIT_DIAGNOSTICS if bad else EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.command == "validate":
            return cmd_validate(args.path)
        if args.command == "simplify":
            return cmd_simplify(args.sentence, cfg)
        return cmd_evaluate(cfg)
    except ConfigError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except OSError as exc:
        _err(f"{exc.filename or ''}: {exc.strerror or exc}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
