import subprocess
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


def run(name, *args):
    proc = subprocess.run([sys.executable, str(SCRIPTS / name), *args], capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


def test_desk_fixture_script():
    out = run("run_desk_fixture.py", "--workers", "4")
    assert "+30.0 percentage points" in out
    assert "d02  simplified      [gap_revise, accept]" in out


def test_worked_pairs_script():
    lines = run("score_worked_pairs.py").splitlines()[1:]
    assert [ln.split()[-1] for ln in lines] == ["accept", "unchanged", "revise"]


def test_validate_games_script():
    out = run("validate_games.py")
    assert "guard sad 5s < trigger ready_to_explode 6s: True" in out
