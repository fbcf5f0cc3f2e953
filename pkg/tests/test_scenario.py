import json
import os

import numpy as np
import pytest

from cherenkov_cone import (
    EITLambda,
    IsotropicConstant,
    NumericalError,
    RunManifest,
    ValidationError,
    absorption_curvature,
    circular_components,
    cone_geometry,
    find_poles,
    parse_scenario,
    preset_path,
    run_sweep,
)
from cherenkov_cone.media import eit_linewidth
from cherenkov_cone.scenario import fmt


def write(tmp_path, text, name="case.toml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


GLASS = """
[medium]
variant = "isotropic_constant"
n = 1.5

[charge]
beta = 0.9

[run]
omega_bar = 3.0e15
"""


# --- presets -----------------------------------------------------------------

def test_glass_preset_roundtrip():
    sc = parse_scenario(preset_path("glass_n1p5"))
    assert isinstance(sc.medium, IsotropicConstant)
    assert sc.medium.n == 1.5
    assert sc.charge.beta == 0.9


def test_sodium_preset_cited_observables():
    sc = parse_scenario(preset_path("sodium_eit"))
    assert isinstance(sc.medium, EITLambda)
    p = sc.medium.params
    assert p.gamma_e == pytest.approx(2 * np.pi * 10e6, rel=1e-4)
    assert p.delta_minus == pytest.approx(2 * np.pi * 40e6, rel=1e-4)
    assert p.gamma_m == 0.0
    # static susceptibilities land where the background needs them
    d = circular_components(sc.omega_bar, sc.medium)
    assert complex(d.eps_minus).real == pytest.approx(1.01, rel=1e-10)
    assert complex(d.eps_z).real == pytest.approx(10.0, rel=1e-10)
    # omega_bar defaults to the transition frequency
    assert sc.omega_bar == p.omega_plus


def test_preset_search_order(tmp_path, monkeypatch):
    # literal path wins; then $CHERENKOV_PRESET_DIR; then packaged presets
    lit = write(tmp_path, GLASS, "mine.toml")
    assert preset_path(lit) == lit
    override = tmp_path / "override"
    override.mkdir()
    (override / "glass_n1p5.toml").write_text(GLASS)
    monkeypatch.setenv("CHERENKOV_PRESET_DIR", str(override))
    assert preset_path("glass_n1p5").startswith(str(override))
    monkeypatch.delenv("CHERENKOV_PRESET_DIR")
    assert "presets" in preset_path("glass_n1p5")
    with pytest.raises(ValidationError, match="not found"):
        preset_path("no_such_preset")


# --- validation --------------------------------------------------------------

def test_beta_out_of_range_names_key(tmp_path):
    bad = GLASS.replace("beta = 0.9", "beta = 1.2")
    with pytest.raises(ValidationError, match=r"charge\.beta"):
        parse_scenario(write(tmp_path, bad))


def test_unknown_keys_are_hard_errors(tmp_path):
    with pytest.raises(ValidationError, match=r"medium\.n_groups"):
        parse_scenario(write(tmp_path, GLASS.replace(
            "n = 1.5", "n = 1.5\nn_groups = 3")))
    with pytest.raises(ValidationError, match="unknown table or key"):
        parse_scenario(write(tmp_path, GLASS + "\n[plotting]\ndpi = 300\n"))
    with pytest.raises(ValidationError, match=r"charge\.mass"):
        parse_scenario(write(tmp_path, GLASS.replace(
            "beta = 0.9", "beta = 0.9\nmass = 1.0")))


def test_unknown_variant_and_missing_keys(tmp_path):
    with pytest.raises(ValidationError, match="unknown variant"):
        parse_scenario(write(tmp_path, GLASS.replace(
            "isotropic_constant", "metamaterial")))
    with pytest.raises(ValidationError, match=r"medium\.n: missing"):
        parse_scenario(write(tmp_path, GLASS.replace("n = 1.5\n", "")))
    with pytest.raises(ValidationError, match=r"missing required \[charge\]"):
        parse_scenario(write(tmp_path, GLASS.replace("[charge]\nbeta = 0.9", "")))


def test_omega_bar_required_for_nondispersive(tmp_path):
    text = GLASS.replace("[run]\nomega_bar = 3.0e15\n", "")
    with pytest.raises(ValidationError, match=r"run\.omega_bar"):
        parse_scenario(write(tmp_path, text))


def test_not_toml_is_validation_error(tmp_path):
    with pytest.raises(ValidationError, match="not valid TOML"):
        parse_scenario(write(tmp_path, "medium = { broken"))


def test_numerics_table(tmp_path):
    text = GLASS + "\n[numerics]\nquad_rtol = 1e-8\ncache_nodes = 128\n"
    sc = parse_scenario(write(tmp_path, text))
    assert sc.numerics.quad_rtol == 1e-8
    assert sc.numerics.cache_nodes == 128
    with pytest.raises(ValidationError, match="cache_nodes"):
        parse_scenario(write(tmp_path, GLASS +
                             "\n[numerics]\ncache_nodes = 12.5\n"))


# --- hashing and windows -------------------------------------------------------

def test_hash_stability_and_sensitivity(tmp_path):
    a = parse_scenario(write(tmp_path, GLASS, "a.toml"))
    b = parse_scenario(write(tmp_path, GLASS, "b.toml"))
    assert a.hash == b.hash
    assert len(a.hash) == 64
    c = parse_scenario(write(tmp_path, GLASS.replace("0.9", "0.91"), "c.toml"))
    assert c.hash != a.hash


def test_integration_window():
    sod = parse_scenario(preset_path("sodium_eit"))
    lo, hi = sod.integration_window()
    g = eit_linewidth(sod.medium.params)
    assert hi - lo == pytest.approx(12 * g, rel=1e-12)
    assert 0.5 * (lo + hi) == pytest.approx(sod.omega_bar, rel=1e-15)
    glass = parse_scenario(preset_path("glass_n1p5"))
    lo, hi = glass.integration_window()
    assert hi - lo == pytest.approx(2e-4 * glass.omega_bar, rel=1e-12)


# --- sweeps --------------------------------------------------------------------

def test_sweep_beta_across_threshold():
    sc = parse_scenario(preset_path("sodium_eit"))
    bmin = 1.0 / np.sqrt(1.01)
    header, rows = run_sweep(sc, "charge.beta",
                             [bmin * (1 - 1e-3), bmin * (1 + 1e-3)])
    assert header[0] == "param" and header[-1] == "status"
    below = [r for r in rows if float(r[1]) < bmin]
    above = [r for r in rows if float(r[1]) > bmin]
    assert all(r[-1] == "no-pole" for r in below)
    assert all(r[-1] == "ok" for r in above)
    # failed points still carry the swept value and empty numeric cells
    assert below[0][4] == ""


def test_sweep_rabi_recomputes_consistently():
    # every row's eta and xi must match a direct recomputation at that point
    sc = parse_scenario(preset_path("sodium_eit"))
    base = sc.medium.params.rabi
    header, rows = run_sweep(sc, "medium.rabi", [base, 1.2 * base])
    i_eta, i_xi, i_vr = header.index("eta"), header.index("xi"), header.index("vr")
    assert len(rows) == 2
    for row in rows:
        import dataclasses as dc
        from cherenkov_cone import media as md
        params = dc.replace(sc.medium.params, rabi=float(row[1]))
        point = dc.replace(sc, medium=md.EITLambda(params))
        pole = find_poles(point.omega_bar, point.charge, point.medium)[0]
        eta = absorption_curvature(point.omega_bar, point.charge, point.medium)
        geo = cone_geometry(pole, point.charge, eta)
        assert float(row[i_eta]) == pytest.approx(eta, rel=1e-12)
        assert float(row[i_xi]) == pytest.approx(geo.xi, rel=1e-12)
        assert float(row[i_vr]) == pytest.approx(pole.v_r, rel=1e-12)


def test_sweep_axis_unknown():
    sc = parse_scenario(preset_path("glass_n1p5"))
    with pytest.raises(ValidationError, match="sweep axis"):
        run_sweep(sc, "charge.mass", [1.0])
    with pytest.raises(ValidationError, match="sweep axis"):
        run_sweep(sc, "medium.rabi", [1.0])  # not a field of this medium


def test_sweep_single_point_matches_cone_rows():
    sc = parse_scenario(preset_path("glass_n1p5"))
    h1, r1 = run_sweep(sc, "omega_bar", [sc.omega_bar])
    h2, r2 = run_sweep(sc, "omega_bar", np.array([sc.omega_bar]))
    assert h1 == h2 and r1 == r2
    assert r1[0][-1] == "ok"


# --- formatting and manifests ---------------------------------------------------

def test_fmt_shortest_roundtrip():
    assert fmt(0.1) == "0.1"
    assert fmt(1.0 / 3.0) == "0.3333333333333333"
    assert float(fmt(np.float64(108.28149884918766))) == 108.28149884918766
    assert fmt(3) == "3"
    assert fmt("ok") == "ok"
    assert fmt(float("nan")) == "nan"


def test_manifest_roundtrip(tmp_path):
    man = RunManifest(scenario_hash="ab" * 32, subcommand="cone",
                      flags={"threads": 1}, tool_version="0.1.0",
                      wall_time_s=0.25, outputs=["cone.csv"])
    path = tmp_path / "cone.manifest.json"
    man.write(str(path))
    blob = json.loads(path.read_text())
    assert blob["scenario_hash"] == "ab" * 32
    assert blob["outputs"] == ["cone.csv"]
    assert blob["subcommand"] == "cone"
