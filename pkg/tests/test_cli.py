import json
from pathlib import Path

import pytest

from sentsimp import cli
from sentsimp.config import ConfigError, RunConfig, from_mapping, load_config, with_overrides

from conftest import ALIEN, DATA, EX2_QUERY

ROOT = Path(__file__).resolve().parents[1]
DESK = str(DATA / "desk10.jsonl")


def run(capsys, *argv):
    rc = cli.main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


# -- simplify ---------------------------------------------------------------

def test_simplify_alien_offline(capsys):
    rc, out, _ = run(capsys, "simplify", "--offline", ALIEN)
    assert rc == 0
    assert "verdict: simplified" in out
    assert "becomes sad for 5 seconds" in out
    assert "ready_to_explode for 6 seconds" in out
    assert "-> gap_revise" in out and "-> accept" in out


def test_simplify_failed_exit_code(capsys):
    rc, out, _ = run(capsys, "simplify", "--offline", "The cobras try to make sure the fox does not touch the bunny.")
    assert rc == 2
    assert "verdict: failed" in out


def test_simplify_unknown_sentence_is_echoed_and_fails(capsys):
    # echo answer has no semantic fixture, so the run degrades to Failed
    rc, out, _ = run(capsys, "simplify", "--offline", "The moon is made of cheese.")
    assert rc == 2
    assert "FixtureMiss" in out


def test_simplify_empty(capsys):
    rc, _, err = run(capsys, "simplify", "--offline", "   ")
    assert rc == 1
    assert "non-empty" in err


def test_unreadable_config(capsys, tmp_path):
    missing = tmp_path / "nope.toml"
    rc, _, err = run(capsys, "simplify", "--config", str(missing), ALIEN)
    assert rc == 1
    assert str(missing) in err


def test_online_without_credential(capsys, monkeypatch):
    monkeypatch.delenv("OPENAI_API_KEY", raising=False)
    rc, _, err = run(capsys, "simplify", ALIEN)
    assert rc == 1
    assert "OPENAI_API_KEY" in err


def test_bad_flag_value(capsys):
    rc, _, err = run(capsys, "simplify", "--offline", "--threshold-lexical", "99", ALIEN)
    assert rc == 1


# -- evaluate ---------------------------------------------------------------

def test_evaluate_compare(capsys, tmp_path):
    rc, out, _ = run(capsys, "evaluate", "--offline", "--compare", "--corpus", DESK, "--output-dir", str(tmp_path),
                     "--timestamp", "T0")
    assert rc == 0
    assert "delta (multi - single): +30.0 percentage points" in out
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == sorted([
        "comparison.md",
        "multi_agent_summary.json", "multi_agent_details.jsonl", "multi_agent_report.md",
        "single_agent_summary.json", "single_agent_details.jsonl", "single_agent_report.md",
    ])
    multi = json.loads((tmp_path / "multi_agent_summary.json").read_text())
    single = json.loads((tmp_path / "single_agent_summary.json").read_text())
    assert (multi["success_rate"], single["success_rate"]) == (70.0, 40.0)


def test_evaluate_single_agent_flag(capsys, tmp_path):
    rc, out, _ = run(capsys, "evaluate", "--offline", "--single-agent", "--corpus", DESK, "--output-dir", str(tmp_path))
    assert rc == 0
    assert "| success_rate | 40.0% |" in out
    assert (tmp_path / "single_agent_summary.json").exists()
    assert not (tmp_path / "multi_agent_summary.json").exists()


def test_evaluate_threshold_flag_is_recorded(capsys, tmp_path):
    rc, _, _ = run(capsys, "evaluate", "--offline", "--corpus", DESK, "--output-dir", str(tmp_path),
                   "--threshold-semantic", "90")
    assert rc == 0
    meta = json.loads((tmp_path / "multi_agent_summary.json").read_text())["run_metadata"]
    assert meta["thresholds"] == {"semantic_accept": 90.0, "lexical_accept_max": 40.0, "lexical_unchanged_min": 95.0}
    assert meta["effective_config"]["pipeline"]["thresholds"]["semantic_accept"] == 90.0
    assert meta["effective_config"]["offline"]["enabled"] is True


def test_evaluate_max_iterations_flag(capsys, tmp_path):
    rc, out, _ = run(capsys, "evaluate", "--offline", "--corpus", DESK, "--output-dir", str(tmp_path),
                     "--max-iterations", "1")
    assert rc == 0
    # only first-pass accepts and the unchanged sentence survive a single iteration
    assert "| simplified | 4 |" in out


def test_evaluate_without_corpus(capsys):
    rc, _, err = run(capsys, "evaluate", "--offline")
    assert rc == 1
    assert "corpus" in err


def test_evaluate_broken_corpus(capsys, tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "a", "text": "x.", "category": "temporal"}\n')
    rc, _, err = run(capsys, "evaluate", "--offline", "--corpus", str(bad), "--output-dir", str(tmp_path))
    assert rc == 1
    assert "temporal" in err


def test_evaluate_from_config_file(capsys, tmp_path):
    rc, out, _ = run(capsys, "evaluate", "--config", str(ROOT / "configs" / "offline_desk10.toml"),
                     "--output-dir", str(tmp_path))
    assert rc == 0
    assert "| success_rate | 70.0% |" in out
    meta = json.loads((tmp_path / "multi_agent_summary.json").read_text())["run_metadata"]
    assert meta["timestamp"] == "2024-01-01T00:00:00Z"
    assert meta["workers"] == 4


# -- validate ---------------------------------------------------------------

def test_validate_game_b(capsys):
    rc, out, err = run(capsys, "validate", str(DATA / "game_b.txt"))
    assert rc == 0
    recs = [json.loads(x) for x in out.splitlines()]
    assert len(recs) == 16
    assert all(r["status"] == "ok" for r in recs)
    assert [r["index"] for r in recs] == list(range(1, 17))
    assert "16 sentence(s), 0 with diagnostics" in err


def test_validate_nested_clause(capsys, tmp_path):
    f = tmp_path / "q.txt"
    f.write_text("Carrots are scattered randomly.\n" + EX2_QUERY + "\n", encoding="utf-8")
    rc, out, _ = run(capsys, "validate", str(f))
    assert rc == 3
    recs = [json.loads(x) for x in out.splitlines()]
    assert recs[0]["status"] == "ok"
    assert recs[1]["diagnostic"]["code"] == "NestedClause"


def test_validate_empty_file(capsys, tmp_path):
    f = tmp_path / "empty.txt"
    f.write_text("")
    rc, out, err = run(capsys, "validate", str(f))
    assert rc == 0
    assert out == ""
    assert "0 sentence(s)" in err


def test_validate_missing_file(capsys, tmp_path):
    rc, _, err = run(capsys, "validate", str(tmp_path / "none.txt"))
    assert rc == 1
    assert "none.txt" in err


def test_validate_reports_timed_state_warnings(capsys, tmp_path):
    f = tmp_path / "w.txt"
    f.write_text("When the robot is charged, the robot moves.\n")
    rc, _, err = run(capsys, "validate", str(f))
    assert rc == 0
    assert "UnsetState" in err


# -- config -----------------------------------------------------------------

def test_config_sections(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text(
        '[provider]\nmodel_name = "m"\ntemperature = 0.2\n'
        '[pipeline]\nsemantic_accept = 90\nmax_iterations = 5\nsingle_agent_mode = true\n'
        '[judge]\ntemperature = 0.1\n'
        '[paths]\ncorpus = "data/c.jsonl"\ncache_dir = "/abs/cache"\n'
        '[evaluate]\nworkers = 2\ncompare = true\n'
    )
    cfg = load_config(p)
    assert cfg.provider.model_name == "m" and cfg.provider.temperature == 0.2
    assert cfg.pipeline.thresholds.semantic_accept == 90
    assert cfg.pipeline.max_iterations == 5 and cfg.pipeline.single_agent_mode
    assert cfg.judge_temperature == 0.1
    assert cfg.corpus_path == tmp_path / "data" / "c.jsonl"
    assert cfg.cache_dir == Path("/abs/cache")
    assert (cfg.workers, cfg.compare) == (2, True)


@pytest.mark.parametrize("doc", [
    {"provider": {"colour": "blue"}},
    {"pipeline": {"max_iterations": 0}},
    {"pipeline": {"lexical_accept_max": 99}},
    {"paths": {"corpse": "x"}},
    {"provider": "not a table"},
])
def test_config_errors(doc):
    with pytest.raises(ConfigError):
        from_mapping(doc)


def test_invalid_toml(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text("[provider\n")
    with pytest.raises(ConfigError, match="invalid TOML"):
        load_config(p)


def test_flags_override_file_values():
    cfg = from_mapping({"pipeline": {"max_iterations": 5, "semantic_accept": 80}})
    out = with_overrides(cfg, max_iterations=2, threshold_lexical=30, single_agent=True, workers=4)
    assert out.pipeline.max_iterations == 2
    assert out.pipeline.thresholds.semantic_accept == 80  # untouched
    assert out.pipeline.thresholds.lexical_accept_max == 30
    assert out.pipeline.single_agent_mode and out.workers == 4
    assert with_overrides(cfg) == cfg


def test_every_flag_has_a_config_field():
    parser = cli.build_parser()
    sub = parser._subparsers._group_actions[0].choices["evaluate"]
    flags = {a.dest for a in sub._actions if a.option_strings and a.dest not in ("help", "config")}
    settable = {
        "cache_dir", "corpus", "output_dir", "offline", "single_agent", "compare", "max_iterations",
        "threshold_semantic", "threshold_lexical", "workers", "timestamp",
    }
    assert flags == settable
    d = RunConfig().to_dict()
    assert {"cache_dir", "corpus_path", "output_dir", "offline", "workers", "compare", "timestamp"} <= set(d)
