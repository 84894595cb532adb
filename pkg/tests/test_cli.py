import json

import pytest

from padiclf import cli
from padiclf.measure import export_table

CURVE11 = "0,-1,1,-10,-20"
CURVE37B = "0,1,1,-23,-50"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_11a1_all_checks(capsys):
    code, out, _ = run(capsys, "compute", "--curve", CURVE11, "--p", "5", "--levels", "4",
                       "--check", "all", "--format", "json-like-canonical")
    assert code == cli.EXIT_OK
    rep = json.loads(out)
    assert rep["input"]["N"] == 11 and rep["input"]["fricke_sign"] == -1
    assert all(c["passed"] for c in rep["checks"].values())
    assert rep["checks"]["modp"]["all_divisible"] is True
    assert rep["series"][0]["order"] == 0
    assert rep["oracle"]["L/Omega_rational"] == "1/5"
    assert rep["oracle"]["normalization"] == "10"


def test_compute_supersingular_by_eigenvalues(capsys):
    code, out, _ = run(capsys, "compute", "--level", "37", "--ap", "2=0,3=1,5=0,7=-1",
                       "--p", "5", "--levels", "4", "--root", "minus", "--check", "fe",
                       "--check", "decay", "--coeffs", "4", "--terms", "20")
    assert code == cli.EXIT_OK
    assert "minus root" in out and "order: 0" in out


def test_oracle_normalization_37b1(capsys):
    code, out, _ = run(capsys, "compute", "--curve", CURVE37B, "--p", "5", "--levels", "3",
                       "--coeffs", "2", "--terms", "10", "--format", "json-like-canonical")
    rep = json.loads(out)
    assert code == 0 and rep["input"]["N"] == 37
    assert rep["oracle"]["L/Omega_rational"] == "1/3" and rep["oracle"]["normalization"] == "6"


def test_output_is_deterministic(capsys, tmp_path):
    argv = ["compute", "--curve", CURVE11, "--p", "5", "--levels", "3", "--coeffs", "3",
            "--terms", "12", "--cache-dir", str(tmp_path)]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


def test_cache_cold_and_warm(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path))
    argv = ["symbols", "--level", "37", "--ap", "2=-2,3=-3"]
    cold = run(capsys, *argv)
    warm = run(capsys, *argv)
    assert cold == warm and "cuspidal_dimension: 2" in cold[1]
    assert "cache_file: modsym_N37_plus.txt" in cold[1]


def test_p_divides_level(capsys):
    code, _, err = run(capsys, "compute", "--curve", CURVE11, "--p", "11")
    assert code == cli.EXIT_CONFIG and "p divides N" in err


def test_small_prime_needs_measure_only(capsys):
    code, _, err = run(capsys, "compute", "--curve", CURVE11, "--p", "3")
    assert code == cli.EXIT_CONFIG and "p >= 5" in err
    code, out, _ = run(capsys, "compute", "--curve", CURVE11, "--p", "3", "--coeffs", "0",
                       "--levels", "3", "--check", "modp")
    assert code == 0 and "first_nondivisible" in out


def test_precision_exhausted(capsys):
    code, _, err = run(capsys, "compute", "--curve", CURVE11, "--p", "5", "--levels", "3",
                       "--terms", "4", "--coeffs", "8")
    assert code == cli.EXIT_PRECISION and "--terms" in err


@pytest.mark.parametrize("argv", [
    ["compute", "--p", "5"],
    ["compute", "--level", "11", "--ap", "2=7", "--p", "5"],
    ["compute", "--level", "11", "--ap", "2=-2", "--p", "5"],
    ["compute", "--curve", "1,2", "--p", "5"],
    ["compute", "--curve", CURVE11, "--p", "4"],
    ["compute", "--curve", CURVE11, "--p", "5", "--root", "plus"],
    ["compute", "--curve", CURVE11, "--p", "5", "--center", "12@7"],
])
def test_config_errors(capsys, argv):
    assert run(capsys, *argv)[0] == cli.EXIT_CONFIG


def test_parse_center():
    c = cli.parse_center("1234@5", 5)
    assert c.residue_integer() == int("1234", 5) and c.abs_precision == 4
    assert cli.parse_center("-3", 5) == -3
    with pytest.raises(cli.ConfigError):
        cli.parse_center("19@5", 5)


def test_padic_center(capsys):
    code, out, _ = run(capsys, "compute", "--curve", CURVE11, "--p", "5", "--levels", "3",
                       "--coeffs", "2", "--terms", "12", "--center", "101@5")
    assert code == 0 and "26+O(5^3)" in out


def test_exports(capsys, tmp_path):
    series, table = tmp_path / "s.txt", tmp_path / "m.txt"
    code, _, _ = run(capsys, "compute", "--curve", CURVE11, "--p", "5", "--levels", "3",
                     "--coeffs", "3", "--terms", "12", "--center", "1", "--center", "2",
                     "--export-series", str(series), "--export-measure", str(table))
    assert code == 0
    assert series.read_text().count("PADICLF-SERIES v1") == 2
    code, out, _ = run(capsys, "import", str(table))
    assert code == 0 and "additivity: passed" in out and "all_divisible: True" in out


def test_import_errors(capsys, tmp_path, table11):
    bad = tmp_path / "bad.txt"
    text = export_table(table11).replace("\n1 1 ", "\n1 1 7", 1)
    bad.write_text(text)
    code, _, err = run(capsys, "import", str(bad))
    assert code == cli.EXIT_CHECK and "additivity fails" in err
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    code, _, err = run(capsys, "import", str(empty))
    assert code == cli.EXIT_CONFIG and "no data" in err


def test_check_subcommand(capsys):
    code, out, _ = run(capsys, "check", "psi", "--curve", CURVE11, "--p", "5", "--levels", "2",
                       "--coeffs", "0")
    assert code == 0 and "psi:" in out


def test_psi_subcommand(capsys):
    code, out, _ = run(capsys, "psi", "--K", "4", "--k-indices", "1,2,4,7",
                       "--format", "json-like-canonical")
    rep = json.loads(out)
    # first row: q_k'(1) = (-1)^(k-1) (k-1)!
    assert code == 0 and rep["residual_is_zero"] and rep["matrix"][0] == "1 -1 -6 720"
