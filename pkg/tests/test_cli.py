import io
import subprocess
import sys

import pytest

from ffconsensus import mat
from ffconsensus.cli import main, parse_matrix_file
from ffconsensus.errors import ParseError
from ffconsensus.ffmatrix import format_matrix, parse_matrices
from ffconsensus.generators import cardinalities


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def test_parse_matrix_file(files):
    assert parse_matrix_file(files("e.mat", "3 2 2\n0 1\n0 1\n")) == mat([[0, 1], [0, 1]], 3)
    with pytest.raises(ParseError, match="not prime"):
        parse_matrix_file(files("bad.mat", "4 2 2\n0 1\n0 1\n"))
    with pytest.raises(ParseError, match="out of range"):
        parse_matrix_file(files("bad2.mat", "3 2 2\n0 5\n0 1\n"))


def test_check(files):
    code, out = run("check", files("e.mat", "3 2 2\n0 1\n0 1\n"))
    assert code == 0 and "admissible=true" in out and "p_dot_one=1" in out


def test_stats():
    code, out = run("stats", "--n", "2", "--p", "3")
    assert code == 0 and "delta=4/9\n" in out and "g_rs=6\n" in out
    code, out = run("stats", "--n", "2", "--p", "3", "--approx")
    assert "delta_approx=0.444444" in out


def test_enumerate_grs_nonperm():
    code, out = run("enumerate", "--n", "2", "--p", "3", "--set", "grs-nonperm")
    assert code == 0
    mats = parse_matrices(out)
    assert len(mats) == 4 and out.rstrip().endswith("# count=4")


@pytest.mark.parametrize("N,p", [(2, 3), (3, 2), (2, 5)])
def test_enumerate_counts_match_stats(N, p):
    rep = cardinalities(N, p)
    for name, expected in (("mrs", rep.m_rs), ("grs", rep.g_rs), ("urs", rep.u_rs),
                           ("perm", rep.perms), ("grs-nonperm", rep.delta_num)):
        _, out = run("enumerate", "--n", str(N), "--p", str(p), "--set", name)
        assert len(parse_matrices(out)) == expected


def test_gen_tf_upper():
    code, out = run("gen", "--method", "tf-upper", "--n", "2", "--p", "3", "--count", "1",
                    "--seed", "7")
    assert code == 0 and parse_matrices(out) == [mat([[2, 2], [0, 1]], 3)]


def test_gen_requires_seed(capsys):
    with pytest.raises(SystemExit):
        main(["gen", "--method", "sar", "--n", "2", "--p", "3"])


def test_gen_is_reproducible():
    args = ("gen", "--method", "sar", "--n", "4", "--p", "5", "--count", "6", "--seed", "3")
    assert run(*args) == run(*args)


def test_gen_dedup_cosets():
    _, out = run("gen", "--method", "sar", "--n", "2", "--p", "3", "--count", "50", "--seed", "1",
                 "--dedup-cosets")
    assert len(parse_matrices(out)) == 2


def test_gen_error_token(capsys):
    code, _ = run("gen", "--method", "sar", "--n", "2", "--p", "2", "--seed", "0")
    assert code == 1
    assert capsys.readouterr().err.startswith("error=ImpossibleConfig")


def test_transform(files):
    e = files("e.mat", "3 2 2\n0 1\n0 1\n")
    t = files("t.mat", "3 2 2\n0 1\n2 2\n")
    code, out = run("transform", "-E", e, "-T", t)
    assert code == 0 and parse_matrices(out) == [mat([[2, 2], [2, 2]], 3)]


def test_transform_singular(files, capsys):
    e = files("e.mat", "3 2 2\n0 1\n0 1\n")
    code, _ = run("transform", "-E", e, "-T", e)
    assert code == 1 and "error=SingularMatrix" in capsys.readouterr().err


def test_gain(files):
    a = files("a.mat", "3 2 2\n0 1\n1 0\n")
    b = files("b.mat", "3 2 1\n0\n1\n")
    code, out = run("gain", "-A", a, "-B", b)
    assert code == 0
    assert "controllable_dim=2" in out and "stabilizable=true" in out
    K = parse_matrices("\n".join(l for l in out.splitlines() if "=" not in l))
    assert K == [mat([[1, 0]], 3)]


def test_gain_not_stabilizable(files, capsys):
    a = files("a.mat", "3 2 2\n1 0\n0 1\n")
    b = files("b.mat", "3 2 1\n0\n0\n")
    code, _ = run("gain", "-A", a, "-B", b)
    assert code == 1 and "error=NotStabilizable" in capsys.readouterr().err


def test_simulate_scalar(files, tmp_path):
    e = files("e.mat", "3 2 2\n0 1\n0 1\n")
    trace = tmp_path / "trace.csv"
    code, out = run("simulate", "--mode", "scalar", "-E", e, "--x0", "2,1", "--out", str(trace))
    assert code == 0 and "sync_step=1" in out and "alpha=1" in out
    lines = trace.read_text().splitlines()
    assert lines[0] == "k,agent,dim,value" and "1,alpha,0,1" in lines


def test_simulate_lti(files, tmp_path):
    e = files("e.mat", "3 2 2\n0 1\n0 1\n")
    a = files("a.mat", "3 2 2\n0 1\n1 0\n")
    b = files("b.mat", "3 2 1\n0\n1\n")
    trace = tmp_path / "trace.csv"
    code, out = run("simulate", "--mode", "lti", "-E", e, "-A", a, "-B", b, "--x0", "1,2,2,1",
                    "--out", str(trace))
    assert code == 0 and "sync_step=2" in out
    rows = trace.read_text().splitlines()
    assert "2,0,0,2" in rows and "2,1,0,2" in rows and "2,alpha,1,1" in rows


def test_stats_sweep():
    code, out = run("stats", "--sweep", "2:3", "2:5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "N,p,value" and "2,3,4/9" in lines and len(lines) == 1 + 2 * 3
    _, out = run("stats", "--sweep", "2:2", "3:3", "--formula", "all")
    assert "u_rs,2,3,1" in out.splitlines()


def test_missing_file(capsys):
    code, _ = run("check", "/nonexistent/e.mat")
    assert code == 1 and "error=ParseError" in capsys.readouterr().err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ffconsensus", "stats", "--n", "2", "--p", "3"],
                         capture_output=True, text=True, check=True)
    assert "delta=4/9" in res.stdout


def test_round_trip_via_format():
    M = mat([[0, 1, 2], [2, 1, 0]], 3)
    assert parse_matrices(format_matrix(M)) == [M]
