import json
import subprocess
import sys

import pytest

# the producing tool; the renderer itself never imports it
_CLI = [sys.executable, "-m", "cherenkov_cone.cli"]


def run_producer(args, cwd):
    proc = subprocess.run(_CLI + args, cwd=cwd, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


def write_table(path, header, rows, scenario_hash="0" * 64,
                manifest_name="x.manifest.json"):
    """Hand-rolled file in the producer's format, for edge-case inputs."""
    lines = ["#scenario=%s manifest=%s" % (scenario_hash, manifest_name),
             ",".join(header)]
    lines += [",".join(str(cell) for cell in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


@pytest.fixture(scope="session")
def sodium_map(tmp_path_factory):
    """Gaussian intensity map whose ridge crosses the whole window."""
    d = tmp_path_factory.mktemp("map")
    run_producer(["map", "--scenario", "sodium_eit", "--method", "gaussian",
                  "--t", "0", "--xperp", "0.05:0.3:6",
                  "--z=-88000000:-9000000:241", "--out", "map.csv"], cwd=d)
    return d / "map.csv"


@pytest.fixture(scope="session")
def beta_sweep(tmp_path_factory):
    """Charge-speed sweep that crosses the emission threshold."""
    d = tmp_path_factory.mktemp("sweep")
    run_producer(["sweep", "--scenario", "sodium_eit", "--axis", "charge.beta",
                  "--start", "0.9935", "--stop", "0.9995", "--num", "7",
                  "--out", "beta.csv"], cwd=d)
    return d / "beta.csv"


@pytest.fixture()
def zero_map(tmp_path):
    """Synthetic all-zero 2x3 map with a matching manifest."""
    man = {"scenario_hash": "0" * 64, "derived": {"w": 2.0, "v_r": 1.0,
                                                  "t": 0.0}}
    (tmp_path / "zero.manifest.json").write_text(json.dumps(man))
    rows = [[x, z, 0.0, 0] for x in (1.0, 2.0) for z in (-3.0, -2.0, -1.0)]
    return write_table(tmp_path / "zero.csv",
                       ["x_perp", "z", "intensity", "masked"], rows,
                       manifest_name="zero.manifest.json")
