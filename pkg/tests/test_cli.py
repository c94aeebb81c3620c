import csv
import io
import json
import math
import subprocess
import sys

import pytest

from kgbeams.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_verify_reference_passes(capsys):
    code, out, _ = run(["verify"], capsys)
    assert code == 0
    assert out.rstrip().endswith("overall: PASS")
    assert "INFO  potential_mean_V2" in out


def test_verify_corrupted_fails(capsys):
    code, out, _ = run(["verify", "--corrupt", "gouy", "--json"], capsys)
    report = json.loads(out)
    assert code == 1
    assert report["kg_residual"]["pass"] is False
    assert set(report["kg_residual"]) == {"pass", "value", "tolerance", "residual"}


def test_verify_lg_reports_oam(capsys):
    code, out, _ = run(["verify", "--mode", "lg:1,0", "--json"], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["oam_eigenvalue"]["value"] == pytest.approx(1.0, abs=1e-8)
    assert "potential_mean_U" not in report


def test_field_hermite_node(capsys):
    code, out, _ = run(["field", "--mode", "hg:1,0", "--grid", "9x9", "--quantity", "psi"], capsys)
    assert code == 0
    on_node = [r for r in rows(out) if float(r["xi1"]) == 0.0]
    assert len(on_node) == 9
    assert all(float(r["psi_re"]) == 0 and float(r["psi_im"]) == 0 for r in on_node)


def test_field_density_at_origin(capsys):
    code, out, _ = run(["field", "--grid", "9x9", "--quantity", "density"], capsys)
    origin = [r for r in rows(out) if float(r["xi1"]) == 0 and float(r["xi2"]) == 0]
    assert float(origin[0]["density"]) == pytest.approx(1 / (2 * math.pi), rel=1e-14)
    assert out.splitlines()[0] == "xi1,xi2,xi3,tau,rho_over_w,s_over_2b,density"


def test_field_v2_changes_sign_at_root(capsys):
    code, out, _ = run(["field", "--mode", "hg:1,0", "--grid", "41x41", "--extent", "3",
                        "--quantity", "v2", "--tau", "1.5"], capsys)
    for r in rows(out):
        radius = float(r["rho_over_w"])
        value = float(r["v2"])
        if abs(radius - math.sqrt(2)) > 1e-9:
            assert (value > 0) == (radius < math.sqrt(2))


@pytest.mark.parametrize("quantity, columns", [
    ("current", ["j1", "j2", "j3", "j4"]), ("potential", ["U1", "U2", "U3", "U4"]), ("bohm_q", ["bohm_q"]),
])
def test_field_quantities(quantity, columns, capsys):
    code, out, _ = run(["field", "--grid", "8x8", "--quantity", quantity], capsys)
    assert code == 0
    assert out.splitlines()[0].split(",")[6:] == columns
    assert len(out.splitlines()) == 65


def test_field_lg_potential_uses_numeric_current(capsys):
    assert run(["field", "--mode", "lg:1,0", "--grid", "8x8", "--quantity", "potential"], capsys)[0] == 0
    assert run(["field", "--mode", "lg:1,0", "--grid", "8x8", "--quantity", "v2"], capsys)[0] == 2


def test_field_output_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["field", "--mode", "lg:-2,1", "--quantity", "psi", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    data = a.read_bytes()
    assert b"\r" not in data and not data.startswith(b"\xef\xbb\xbf")


def test_energy_table(capsys):
    code, out, _ = run(["energy", "--range", "1,2"], capsys)
    table = rows(out)
    assert code == 0
    row = next(r for r in table if (r["m"], r["n"]) == ("1", "2"))
    assert [float(row[k]) for k in ("N", "k4", "E_mode", "E_free")] == pytest.approx([4, 2, 2, math.sqrt(2)])
    assert float(row["transverse"]) == pytest.approx(2.0, rel=1e-14)
    first = table[0]
    assert float(first["k4"]) == pytest.approx(math.sqrt(2.5), rel=1e-15)
    by_order = sorted(table, key=lambda r: int(r["N"]))
    energies = [float(r["E_mode"]) for r in by_order]
    assert energies == sorted(energies)


def test_boost_comoving(capsys):
    code, out, _ = run(["boost", "--mode", "hg:1,2", "--beta", "0.5", "--json"], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["boosted_k3"]["value"] == pytest.approx(0.0, abs=1e-15)
    assert report["boosted_k4"]["value"] == pytest.approx(math.sqrt(3), rel=1e-14)
    assert report["lorentz_invariance"]["pass"] and report["boosted_kg_residual"]["pass"]


@pytest.mark.parametrize("beta", ["1", "-1.5", "abc"])
def test_boost_rejects_bad_beta(beta, capsys):
    code, _, err = run(["boost", "--beta", beta], capsys)
    assert code == 2 and "error" in err


def test_flow_csv(capsys):
    code, out, err = run(["flow", "--seeds", "1,0;0,0", "--tau-range", "0,4", "--steps", "8"], capsys)
    table = rows(out)
    assert code == 0
    assert len(table) == 18
    assert {r["truncated"] for r in table} == {"0"}
    ratios = {round(float(r["rho_over_w"]), 4) for r in table if r["seed"] == "0"}
    assert len(ratios) == 1


def test_flow_reports_circulation(capsys):
    code, _, err = run(["flow", "--mode", "lg:1,0", "--seeds", "1,0", "--steps", "4"], capsys)
    assert code == 0 and "circulation/hbar" in err and "(l=1)" in err


def test_flow_seed_outside_region(capsys):
    assert run(["flow", "--seeds", "10,0"], capsys)[0] == 2


def test_config_precedence(tmp_path, capsys):
    config = tmp_path / "beam.cfg"
    config.write_text("# reference with a wider waist\nmode = hg:1,2\nw0 = 4\n", encoding="utf-8")
    _, out, _ = run(["energy", "--config", str(config), "--range", "0,0"], capsys)
    assert float(rows(out)[0]["k4"]) == pytest.approx(math.sqrt(2 + 2 / 16))
    _, out, _ = run(["energy", "--config", str(config), "--range", "0,0", "--w0", "2"], capsys)
    assert float(rows(out)[0]["k4"]) == pytest.approx(math.sqrt(2.5))


@pytest.mark.parametrize("text", ["w0", "colour = red\n"])
def test_bad_config(tmp_path, text, capsys):
    config = tmp_path / "bad.cfg"
    config.write_text(text, encoding="utf-8")
    assert run(["verify", "--config", str(config)], capsys)[0] == 2


@pytest.mark.parametrize("argv", [
    ["field", "--grid", "4x4"], ["field", "--grid", "ten"], ["field", "--extent", "0.5"],
    ["verify", "--mode", "hg:-1,0"], ["verify", "--w0", "-2"], ["energy", "--range", "1"],
    ["verify", "--config", "/nonexistent/file"],
])
def test_usage_errors(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["field", "--quantity", "nonsense"])
    assert exc.value.code == 2


def test_module_entry_point():
    result = subprocess.run([sys.executable, "-m", "kgbeams", "energy", "--range", "0,0"],
                            capture_output=True, text=True, check=False)
    assert result.returncode == 0
    assert result.stdout.startswith("m,n,N,k4,E_mode,E_free,transverse\n0,0,1,")
