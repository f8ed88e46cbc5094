import json
import subprocess
import sys
from fractions import Fraction

import pytest

from cue_moments.algebra import RatPolynomial, parse_rational, polynomial_from_json
from cue_moments.cli import main
from cue_moments.moments import f_ratio


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_moment_plain(capsys):
    code, out, _ = run(capsys, "moment", "--n", "2", "--k", "1")
    assert code == 0 and out == "5\n"


def test_moment_general_x(capsys):
    code, out, _ = run(capsys, "moment", "--n", "2", "--k", "1", "--q", "4", "--format", "json")
    assert code == 0 and parse_rational(json.loads(out)) == 17


def test_f_poly_json(capsys):
    code, out, _ = run(capsys, "f-poly", "--k", "1", "--format", "json")
    assert code == 0
    assert json.loads(out) == ["0", "1/6", "1/3"]


@pytest.mark.parametrize("k", [2, 3])
def test_f_poly_round_trip(capsys, k):
    _, out, _ = run(capsys, "f-poly", "--k", str(k), "--format", "json")
    assert polynomial_from_json(out) == f_ratio(k)


def test_mod_check_not_prime(capsys):
    code, out, err = run(capsys, "mod-check", "--k", "4")
    assert code == 1 and out == ""
    assert "4k-1 = 15 is not prime" in err


def test_mod_check_report(capsys):
    code, out, _ = run(capsys, "mod-check", "--k", "2", "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["holds"] and report["p"] == 7 and report["lhs"] == report["rhs"]


def test_painleve_contract_violation_exit_code(capsys):
    code, _, err = run(capsys, "painleve", "--n", "4", "--k", "2", "--order", "6")
    assert code == 2 and "c_5" in err
    code, out, _ = run(capsys, "painleve", "--n", "4", "--k", "2", "--format", "json")
    assert code == 0 and [Fraction(x) for x in json.loads(out)][:2] == [-2, Fraction(-8, 15)]


def test_roots_csv(capsys):
    code, out, _ = run(capsys, "roots-f", "--k", "1", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["re,im", "-0.5,0", "0,0"]


def test_b_k(capsys):
    _, out, _ = run(capsys, "b-k", "--k", "1")
    assert out == "1/3\n"
    _, out, _ = run(capsys, "b-k", "--k", "1", "--decimal", "5")
    assert out == "0.33333\n"


def test_n2_commands(capsys):
    assert run(capsys, "n2", "moment", "--k", "1", "--q", "1")[1] == "5\n"
    _, out, _ = run(capsys, "n2", "moment", "--k", "1.25", "--x", "1.8", "--format", "json")
    assert abs(json.loads(out) - 27.5617) < 5e-3
    assert float(run(capsys, "n2", "logmoment", "--r", "0")[1]) == -0.5
    assert float(run(capsys, "n2", "zerocount", "--u", "1")[1]) == pytest.approx(1.0)
    code, _, err = run(capsys, "n2", "moment", "--k", "0.5", "--x", "0.5")
    assert code == 1 and err.startswith("error:")


def test_mc_echoes_seed(capsys):
    _, out, _ = run(capsys, "mc", "moment", "--n", "2", "--k", "1", "--samples", "2000",
                    "--seed", "9", "--chunk-size", "500", "--format", "json")
    record = json.loads(out)
    assert record["seed"] == 9 and record["chunk_size"] == 500 and record["samples"] == 2000
    _, again, _ = run(capsys, "mc", "moment", "--n", "2", "--k", "1", "--samples", "2000",
                      "--seed", "9", "--chunk-size", "500", "--format", "json", "--threads", "2")
    assert json.loads(again) == record


def test_mc_zeros_csv(capsys):
    code, out, _ = run(capsys, "mc", "zeros", "--n", "2", "--samples", "1000", "--bins", "4", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "u_lo,u_hi,count,cum_fraction" and len(lines) == 5


def test_mc_logmoment(capsys):
    _, out, _ = run(capsys, "mc", "logmoment", "--n", "2", "--r", "0.5", "--samples", "1000", "--format", "json")
    assert json.loads(out)["samples"] == 1000


def test_output_file(tmp_path, capsys):
    target = tmp_path / "f.json"
    code, out, _ = run(capsys, "f-poly", "--k", "2", "--format", "json", "--output", str(target))
    assert code == 0 and out == ""
    assert polynomial_from_json(target.read_text()) == f_ratio(2)
    code, _, err = run(capsys, "b-k", "--k", "1", "--output", str(tmp_path / "missing" / "x"))
    assert code == 1 and "cannot write" in err


def test_usage_error_exits_nonzero(capsys):
    with pytest.raises(SystemExit) as info:
        main(["moment", "--n", "two", "--k", "1"])
    assert info.value.code != 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cue_moments", "moment", "--n", "3", "--k", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "14\n"
