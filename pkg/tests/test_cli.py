import csv
import io

import pytest

from evidential_markov.calibration import forward
from evidential_markov.cli import main
from evidential_markov.config import load_config

HEADER = "name,face_type,p_g,p_a_given_g,p_b,p_a_given_b,p_t,p_a\n"
TOWNSEND_CONDITIONAL = (0.0264 / 0.17, 0.0811 / 0.17, 0.0625 / 0.17)


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def test_run_bundled(tmp_path):
    csv_path = tmp_path / "t3.csv"
    code, out = run(["run", "--bundled", "--csv", str(csv_path)])
    assert code == 0
    for value in ("0.0889", "0.0816", "0.0759", "0.0678", "0.0596", "0.0747"):
        assert value in out
    assert "\033[" not in out  # not a terminal, so no styling
    assert len(list(csv.DictReader(csv_path.open()))) == 6


def test_run_gamma_zero():
    code, out = run(["run", "--bundled", "--gamma-zero", "--rates", "0.2", "0.4", "--include-wide"])
    assert code == 0
    rows = [line for line in out.splitlines() if " EM " in line]
    assert len(rows) == 12
    assert all(line.split()[-2] in ("0.0000", "-0.0000") for line in rows)


def test_run_bad_header(write, capsys):
    path = write("bad.csv", "name,face_type,p_g,p_a_given_g,p_b,p_a_given_b,p_t\nx,N,0.17,0.41,0.83,0.63,0.59\n")
    code, _ = run(["run", "--experiments", path])
    assert code == 1
    assert "p_a" in capsys.readouterr().err


def test_run_no_convergence(write):
    path = write("hard.csv", HEADER + "hard,N,0.5,0.99,0.5,0.01,0.5,0.5\n")
    code, out = run(["run", "--experiments", path, "--target", "observed"])
    assert code == 2
    assert "NoConvergence" in out


def test_fit_writes_reusable_config(tmp_path):
    out_path = tmp_path / "fit.toml"
    code, out = run(["fit", "--bundled", "--target", "em-published", "--out", str(out_path)])
    assert code == 0 and "wrote" in out
    config = load_config(out_path)
    k_r, k_w = config.fitted_rates["townsend2000/N"]
    assert max(abs(a - b) for a, b in zip(forward(k_r, k_w), TOWNSEND_CONDITIONAL)) <= 5e-3
    code, again = run(["run", "--bundled", "--config", str(out_path)])
    assert code == 0 and "0.0889" in again


def test_fit_observed_target(tmp_path):
    # several observed conditionals lie outside what two rates can reach from
    # full hesitance; those fits are reported and the run exits 2
    out_path = tmp_path / "o.toml"
    code, out = run(["fit", "--bundled", "--target", "observed", "--out", str(out_path)])
    assert code == 2
    flags = {line.split()[0]: line.split()[-1] for line in out.splitlines()[1:] if "/" in line.split()[0]}
    assert flags["townsend2000/N"] == "True"
    assert flags["wang2016_exp3/N"] == "False"
    assert len(load_config(out_path).fitted_rates) == 6


def test_entropy_bundled(tmp_path):
    csv_path, plot_path = tmp_path / "b.csv", tmp_path / "p.csv"
    code, out = run(["entropy", "--bundled", "--csv", str(csv_path), "--plot-data", str(plot_path)])
    assert code == 0
    assert len(list(csv.DictReader(csv_path.open()))) == 35
    assert "gamma>=0.5" in out
    summary = out.split("\n\n")[-1].splitlines()
    assert summary[2].split()[0] == "deng"


def test_entropy_single_method(tmp_path):
    csv_path = tmp_path / "d.csv"
    code, _ = run(["entropy", "--methods", "deng", "--csv", str(csv_path)])
    assert code == 0
    assert len(list(csv.DictReader(csv_path.open()))) == 5


def test_entropy_boe(write):
    path = write("m.boe", "frame: AG,WG,AB,WB\nAG|AB : 0.3314\nAG|WG|AB|WB : 0.4771\nWG|WB : 0.1915\n")
    code, out = run(["entropy", "--boe", path])
    assert code == 0
    lines = dict(line.split() for line in out.strip().splitlines())
    assert len(lines) == 7
    assert float(lines["deng"]) == pytest.approx(4.1868, abs=1e-3)
    assert float(lines["weighted-hartley"]) == pytest.approx(-1.4771, abs=1e-4)


def test_markov_demo():
    code, out = run(["markov-demo"])
    assert code == 0
    rows = [line.split() for line in out.strip().splitlines()[1:]]
    assert len(rows) == 4
    assert all(abs(float(r[-1])) <= 1e-12 for r in rows)
    _, zero = run(["markov-demo", "--t", "0", "--mix", "0.3", "0.7"])
    t, pp, pm, pu, _ = zero.strip().splitlines()[1].split()
    assert (pp, pm, pu) == ("1.0000", "0.0000", "0.3000")
    _, mixed = run(["markov-demo", "--mix", "1", "0"])
    for r in mixed.strip().splitlines()[1:]:
        cols = r.split()
        assert cols[1] == cols[3]


def test_validate(write):
    code, out = run(["validate", write("m.boe", "frame: R,B\nR : 0.4\nR|B : 0.6\n")])
    assert code == 0 and "valid body of evidence" in out
    code, out = run(["validate", write("e.csv", HEADER + "x,N,0.17,0.41,0.83,0.63,0.59,0.69\n")])
    assert code == 0 and "1 valid experiment" in out


def test_no_color_and_tty(monkeypatch):
    class Tty(io.StringIO):
        def isatty(self):
            return True

    monkeypatch.delenv("NO_COLOR", raising=False)
    styled = Tty()
    main(["run", "--bundled", "--rates", "0.2", "0.4"], out=styled)
    assert "\033[1m" in styled.getvalue()
    monkeypatch.setenv("NO_COLOR", "1")
    plain = Tty()
    main(["run", "--bundled", "--rates", "0.2", "0.4"], out=plain)
    assert "\033[" not in plain.getvalue()


MALFORMED = [
    ["fit", "--bundled"],  # missing --target
    ["run"],  # missing source
    ["run", "--bundled", "--experiments", "x.csv"],
    ["run", "--bundled", "--t", "soon"],
    ["run", "--bundled", "--t", "-1", "--rates", "1", "1"],
    ["run", "--bundled", "--rates", "-1", "1"],
    ["run", "--bundled", "--entropy", "renyi"],
    ["run", "--bundled", "--mode", "diagonal"],
    ["entropy", "--methods", "renyi"],
    ["markov-demo", "--mix", "0.6", "0.6"],
    ["markov-demo", "--rates", "-1", "1"],
    ["frobnicate"],
    [],
]


@pytest.mark.parametrize("argv", MALFORMED, ids=[" ".join(a) or "empty" for a in MALFORMED])
def test_usage_errors_exit_1(argv):
    assert run(argv)[0] == 1


@pytest.mark.parametrize("name, text", [
    ("missing.csv", None),
    ("empty.csv", ""),
    ("header.csv", "name,face,p_g\n"),
    ("extra.csv", HEADER.strip() + ",notes\n"),
    ("number.csv", HEADER + "x,N,0.17,zero,0.83,0.63,0.59,0.69\n"),
    ("short.csv", HEADER + "x,N,0.17\n"),
    ("prob.csv", HEADER + "x,N,0.17,0.41,0.83,0.63,0.99,0.69\n"),
    ("noframe.boe", "R : 1\n"),
    ("sum.boe", "frame: R,B\nR : 0.3\n"),
    ("label.boe", "frame: R,B\nG : 1\n"),
    ("dup.boe", "frame: R,B\nR : 0.5\nR : 0.5\n"),
    ("mass.boe", "frame: R,B\nR : heavy\n"),
    ("empty.boe", ""),
])
def test_malformed_files_exit_1(write, tmp_path, name, text):
    path = write(name, text) if text is not None else str(tmp_path / name)
    assert run(["validate", path])[0] == 1
    if name.endswith(".csv"):
        assert run(["run", "--experiments", path, "--rates", "1", "1"])[0] == 1
    else:
        assert run(["entropy", "--boe", path])[0] == 1


def test_bad_config_exit_1(write):
    path = write("c.toml", "[run]\nfit_scope = \"global\"\n")
    assert run(["run", "--bundled", "--config", path])[0] == 1
