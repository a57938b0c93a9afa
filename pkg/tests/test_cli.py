"""Command-line interface: parsing, exit codes, files, determinism."""

import json

import pytest

from eightloop import cli


def run(argv):
    return cli.main(argv)


@pytest.fixture
def coeff_file(tmp_path):
    def make(text, name="coeffs.txt"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return make


def test_integrals_table(capsys):
    assert run(["integrals", "--h", "-0.1", "--kmax", "2"]) == 0
    out = capsys.readouterr().out
    assert "I1" in out
    # the I1 column is pi sqrt(2) (h + 1/4)
    row = out.splitlines()[1].split()
    assert float(row[2]) == pytest.approx(0.15 * 3.141592653589793 * 2 ** 0.5,
                                          rel=1e-12)


def test_integrals_check_passes(capsys):
    assert run(["integrals", "--check"]) == 0
    assert "worst residual" in capsys.readouterr().out


def test_tol_env_override(monkeypatch, capsys):
    monkeypatch.setenv(cli.TOL_ENV_VAR, "1e-20")
    assert run(["integrals", "--check"]) == 1
    monkeypatch.setenv(cli.TOL_ENV_VAR, "1e-6")
    assert run(["integrals", "--check"]) == 0


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        run(["integrals", "--bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run([])
    assert exc.value.code == 2


def test_coeff_file_parsing(coeff_file):
    p = cli.read_coeff_file(coeff_file("a10 = 1.5  # comment\n\nb02=2\n"))
    assert p.to_dict()["a10"] == 1.5
    assert p.to_dict()["b02"] == 2.0


def test_coeff_file_bad_key(coeff_file, capsys):
    assert run(["envelope", "--coeffs", coeff_file("c10 = 1\n"),
                "--order", "1"]) == 1
    assert "error:" in capsys.readouterr().err


def test_coeff_file_bad_number(coeff_file, capsys):
    assert run(["envelope", "--coeffs", coeff_file("a10 = abc\n"),
                "--order", "1"]) == 1
    assert "bad number" in capsys.readouterr().err


def test_coeff_file_missing_equals(coeff_file):
    with pytest.raises(cli.CliError, match="expected"):
        cli.read_coeff_file(coeff_file("a10 1\n"))


def test_envelope_order_1(coeff_file, capsys):
    assert run(["envelope", "--coeffs", coeff_file("a10 = 1\n"),
                "--order", "1"]) == 0
    out = capsys.readouterr().out
    assert "alpha0 = 1" in out


def test_envelope_order_2_precondition_failure(coeff_file, capsys):
    # order-2 envelope is only defined when the order-1 one vanishes
    assert run(["envelope", "--coeffs", coeff_file("a10 = 1\n"),
                "--order", "2"]) == 1
    assert "error:" in capsys.readouterr().err


def test_zeros_envelope_option(capsys):
    assert run(["zeros", "--envelope=-0.9,0,0,0,1,0"]) == 0
    assert "1 distinct" in capsys.readouterr().out
    assert run(["zeros", "--envelope", "1,2,3"]) == 1


def test_zeros_requires_input(capsys):
    assert run(["zeros"]) == 1
    assert "need --coeffs or --envelope" in capsys.readouterr().err


def test_zeros_check(capsys):
    assert run(["zeros", "--check"]) == 0
    assert "want 5 simple" in capsys.readouterr().out


def test_distribution_search_deterministic(tmp_path, capsys):
    out1, out2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    assert run(["distribution", "--search", "3,3", "--seed", "0",
                "--out", out1]) == 0
    assert run(["distribution", "--search", "3,3", "--seed", "0",
                "--out", out2]) == 0
    b1 = open(out1, "rb").read()
    b2 = open(out2, "rb").read()
    assert b1 == b2 and b1


def test_riccati_check(capsys):
    assert run(["riccati", "--system", "Omega", "--check"]) == 0
    assert "ok=True" in capsys.readouterr().out
    assert run(["riccati", "--system", "Zeta"]) == 1


def test_riccati_table(tmp_path):
    out = str(tmp_path / "nu.csv")
    assert run(["riccati", "--system", "Nu", "--grid=-0.2:-0.1:5",
                "--out", out]) == 0
    rows = open(out).read().splitlines()
    assert rows[0] == "h,nu"
    assert len(rows) == 6


def test_series_center_rationals(tmp_path):
    path = str(tmp_path / "series.json")
    assert run(["series", "--end", "center", "--terms", "6",
                "--json", path]) == 0
    payload = json.load(open(path))
    assert "3/8" in payload["rational_I0"]
    assert "35/64" in payload["rational_I0"]
    assert "-1/8" in payload["rational_I2"]
    assert "-5/64" in payload["rational_I2"]


def test_series_zero_end(capsys):
    assert run(["series", "--end", "zero", "--terms", "6"]) == 0
    out = capsys.readouterr().out
    assert "J0_log" in out


def test_simulate_displacement(coeff_file, capsys):
    assert run(["simulate", "--coeffs", coeff_file("a10 = 1\n"),
                "--eps", "1e-4", "--h", "-0.1"]) == 0
    row = capsys.readouterr().out.splitlines()[1].split()
    assert float(row[2]) / 1e-4 == pytest.approx(0.71626, rel=1e-3)


def test_identities_command(capsys):
    assert run(["identities"]) == 0
    out = capsys.readouterr().out
    assert out.count("pass") == 15


def test_darboux_example(capsys):
    assert run(["darboux", "--example"]) == 0
    assert "gradient residual" in capsys.readouterr().out


def test_theorem4_base_parameters(capsys):
    assert run(["theorem4", "--target", "3+3"]) == 0
    out = capsys.readouterr().out
    assert "ThreeThree base parameters" in out
    assert "right 3, left 3" in out
    assert run(["theorem4", "--target", "7+7"]) == 1


def test_json_outputs_are_reproducible(tmp_path):
    p1, p2 = str(tmp_path / "z1.json"), str(tmp_path / "z2.json")
    for path in (p1, p2):
        assert run(["zeros", "--envelope=-0.9,0,0,0,1,0",
                    "--json", path]) == 0
    assert open(p1, "rb").read() == open(p2, "rb").read()
