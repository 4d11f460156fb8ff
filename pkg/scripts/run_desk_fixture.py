"""Offline multi- vs single-agent comparison over the ten-sentence desk fixture.

    python scripts/run_desk_fixture.py [--workers 4] [--out reports/desk10]
"""

import argparse
from pathlib import Path

from sentsimp.agents import LlmSimplifier, ScriptedProvider
from sentsimp.corpus import builtin_corpus
from sentsimp.harness import compare_modes, detail_lines, render_comparison
from sentsimp.orchestrator import Dependencies, PipelineConfig
from sentsimp.scoring import Agent2Evaluator, ScriptedScorer

DATA = Path(__file__).resolve().parents[1] / "src" / "sentsimp" / "data"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--max-iterations", type=int, default=3)
    ap.add_argument("--out", type=Path)
    args = ap.parse_args()

    deps = Dependencies(
        LlmSimplifier(ScriptedProvider.from_jsonl(DATA / "desk10_provider.jsonl", echo=True)),
        Agent2Evaluator(ScriptedScorer.from_jsonl(DATA / "desk10_semantic.jsonl")),
    )
    cmp = compare_modes(
        builtin_corpus("desk10"), PipelineConfig(max_iterations=args.max_iterations), deps,
        workers=args.workers, model_name="scripted", timestamp="fixture",
    )
    print(render_comparison(cmp))
    for r in cmp.multi.details:
        branches = ", ".join(b.value for b in r.outcome.branches)
        print(f"{r.id}  {r.outcome.verdict.value:15s} [{branches}]")
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        for report in (cmp.multi, cmp.single):
            (args.out / f"{report.mode}_details.jsonl").write_text(detail_lines(report), encoding="utf-8")


if __name__ == "__main__":
    main()
