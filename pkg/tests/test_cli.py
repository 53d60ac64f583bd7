import json

import pytest

from tdual.catalog import build_bundle, build_flux, circle, sigma, space
from tdual.cli import main
from tdual.courant import standard_contexts
from tdual.fixtures import klein_fixtures
from tdual.pipeline import run_fixtures, run_pipeline


@pytest.fixture()
def klein_pair_file(tmp_path):
    info = circle()
    pair = build_flux(build_bundle(info, info.xi(), 0), 0)
    path = tmp_path / "pair.json"
    path.write_text(pair.to_json())
    return path


def test_cohomology_command(tmp_path, capsys):
    info = sigma(1)
    space_path = tmp_path / "space.json"
    space_path.write_text(info.complex.to_json())
    ls_path = tmp_path / "ls.json"
    ls_path.write_text(json.dumps(info.xi().to_json_dict()))
    assert main(["cohomology", str(space_path)]) == 0
    out = capsys.readouterr().out
    assert "Z^2" in out
    assert main(["cohomology", str(space_path), "--local-system", str(ls_path)]) == 0
    out = capsys.readouterr().out
    assert "Z/2" in out


def test_bundle_cohomology_command(tmp_path, capsys):
    info = circle()
    bundle = build_bundle(info, info.xi(), 0)
    path = tmp_path / "bundle.json"
    path.write_text(bundle.to_json())
    assert main(["bundle-cohomology", str(path)]) == 0
    assert "Z/2" in capsys.readouterr().out
    assert main(["bundle-cohomology", str(path), "--coeff", "xi"]) == 0
    assert "Z + Z/2" in capsys.readouterr().out


def test_tdual_and_verify_commands(tmp_path, capsys, klein_pair_file):
    assert main(["tdual", str(klein_pair_file)]) == 0
    payload = json.loads(capsys.readouterr().out)
    dual_path = tmp_path / "dual.json"
    dual_path.write_text(json.dumps(payload["dual"]))
    assert main(["verify", str(klein_pair_file), str(dual_path)]) == 0
    out = capsys.readouterr().out
    assert "[pass]" in out and "FAIL" not in out


def test_verify_rejects_non_dual(tmp_path, capsys):
    info = sigma(1)
    p0 = build_flux(build_bundle(info, info.xi(), 0), 0)
    p1 = build_flux(build_bundle(info, info.xi(), 0), 1)
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    a.write_text(p1.to_json())
    b.write_text(p0.to_json())
    assert main(["verify", str(a), str(b)]) == 1


def test_ktheory_command(capsys, klein_pair_file):
    assert main(["ktheory", str(klein_pair_file)]) == 0
    out = capsys.readouterr().out
    assert "K^0 = Z + Z/2" in out and "K^1 = Z" in out
    assert main(["ktheory", str(klein_pair_file), "--xi-twist"]) == 0
    out = capsys.readouterr().out
    assert "K^0 = Z" in out and "K^1 = Z + Z/2" in out


def test_tables_command(capsys):
    assert main(["tables", "klein"]) == 0
    out = capsys.readouterr().out
    assert "overall: PASS" in out
    assert main(["tables", "sigma", "--g", "1", "--j", "0", "--k", "1",
                 "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["ok"] is True
    assert main(["tables", "crosscap", "--n", "1", "--j", "1", "--k", "0",
                 "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert '"K0"' in out


def test_fixtures_command_subset(capsys):
    assert main(["fixtures", "--only", "klein"]) == 0
    out = capsys.readouterr().out
    assert "4/4 fixtures passed" in out
    assert main(["fixtures"]) == 2  # requires --all or --only


def test_courant_check_command(tmp_path, capsys):
    name, ctx = standard_contexts()[0]
    path = tmp_path / "ctx.json"
    path.write_text(json.dumps(ctx.to_json_dict()))
    assert main(["courant-check", str(path), "--sections", "2", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out


def test_pipeline_reports_are_deterministic():
    r1 = run_pipeline("sigma", 1, 0, 1)
    r2 = run_pipeline("sigma", 1, 0, 1)
    assert json.dumps(r1.to_json_dict(), sort_keys=True) == \
        json.dumps(r2.to_json_dict(), sort_keys=True)
    assert r1.ok


def test_builders_are_deterministic():
    info1 = space("sigma", g=2)
    info2 = space("sigma", g=2)
    b1 = build_bundle(info1, info1.xi(), 1)
    b2 = build_bundle(info2, info2.xi(), 1)
    assert b1.to_json() == b2.to_json()
    p1 = build_flux(b1, 1)
    p2 = build_flux(b2, 1)
    assert p1.to_json() == p2.to_json()


def test_klein_fixture_values():
    res = run_fixtures(klein_fixtures())
    assert all(r.ok for r in res)
