import subprocess
import sys

from .conftest import write_table

_RENDER = [sys.executable, "-m", "conerender.cli"]


def _run(args, cwd):
    return subprocess.run(_RENDER + args, cwd=cwd, capture_output=True,
                          text=True)


def test_contour_and_default_out(sodium_map):
    proc = _run([sodium_map.name, "--kind", "ridge-overlay"],
                cwd=sodium_map.parent)
    assert proc.returncode == 0, proc.stderr
    assert (sodium_map.parent / "map.png").exists()


def test_sweep_line(beta_sweep, tmp_path):
    proc = _run([str(beta_sweep), "--kind", "sweep-line", "--column",
                 "k_perp", "--out", str(tmp_path / "k.png")],
                cwd=tmp_path)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "k.png").exists()


def test_bad_input_exits_2(tmp_path):
    path = write_table(tmp_path / "e.csv", ["param", "value", "status"], [])
    proc = _run([path, "--kind", "sweep-line"], cwd=tmp_path)
    assert proc.returncode == 2
    assert "empty sweep" in proc.stderr

    proc = _run(["missing.csv"], cwd=tmp_path)
    assert proc.returncode == 2

    rows = [[1.0, 5.0, 1.0, 0], [1.0, 6.0, 1.0, 0], [2.0, 5.0, 1.0, 0]]
    path = write_table(tmp_path / "r.csv",
                       ["x_perp", "z", "intensity", "masked"], rows)
    proc = _run([path], cwd=tmp_path)
    assert proc.returncode == 2
    assert "non-rectangular" in proc.stderr
