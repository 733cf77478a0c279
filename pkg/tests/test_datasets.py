import pytest

from evidential_markov.config import RunConfig, dump_config, load_config, record_key, save_config
from evidential_markov.datasets import (
    AVERAGE_NARROW,
    BUNDLED,
    EXPERIMENT_NAMES,
    NARROW,
    WIDE,
    format_experiments_csv,
    load_experiments,
    parse_experiments_csv,
)
from evidential_markov.errors import InvariantViolation, ParseError

HEADER = "name,face_type,p_g,p_a_given_g,p_b,p_a_given_b,p_t,p_a\n"


def test_bundled_shape():
    assert len(BUNDLED) == 12
    assert [r.name for r in NARROW] == list(EXPERIMENT_NAMES)
    assert all(r.is_narrow for r in NARROW) and not any(r.is_narrow for r in WIDE)
    assert load_experiments() == list(BUNDLED)
    assert load_experiments("bundled") == list(BUNDLED)


def test_observed_dis():
    assert NARROW[0].observed_dis == pytest.approx(0.10)
    assert AVERAGE_NARROW.observed_dis == pytest.approx(0.07)


def test_bundled_invariants():
    for r in BUNDLED:
        assert abs(r.p_g + r.p_b - 1) <= 0.01 + 1e-12
        assert abs(r.p_g * r.p_a_given_g + r.p_b * r.p_a_given_b - r.p_t) <= 0.01 + 1e-12


def test_published_model_rows_are_self_consistent():
    for r in NARROW + (AVERAGE_NARROW,):
        em = r.em_row
        assert em.p_a_given_g + em.p_a_given_b == pytest.approx(1.0, abs=1e-3)
        assert em.p_a - em.p_t == pytest.approx(em.dis, abs=2e-3)
        assert r.p_g * em.p_a_given_g + r.p_b * em.p_a_given_b == pytest.approx(em.p_t, abs=2e-3)


def test_csv_round_trip(tmp_path):
    path = tmp_path / "e.csv"
    path.write_text(format_experiments_csv(BUNDLED))
    back = load_experiments(path)
    assert [(r.name, r.face_type, r.p_a) for r in back] == [(r.name, r.face_type, r.p_a) for r in BUNDLED]


def test_csv_column_order_free():
    text = "p_a,name,face_type,p_g,p_a_given_g,p_b,p_a_given_b,p_t\n0.69,x,N,0.17,0.41,0.83,0.63,0.59\n"
    (r,) = parse_experiments_csv(text)
    assert r.p_a == 0.69 and r.name == "x"


@pytest.mark.parametrize("text, column", [
    ("name,face_type,p_g,p_a_given_g,p_b,p_a_given_b,p_t\n", "p_a"),
    (HEADER.strip() + ",extra\n", "extra"),
])
def test_csv_header_errors(text, column):
    with pytest.raises(ParseError) as info:
        parse_experiments_csv(text)
    assert info.value.column == column
    assert info.value.line == 1


def test_csv_row_errors():
    with pytest.raises(ParseError) as info:
        parse_experiments_csv(HEADER + "x,N,0.17,abc,0.83,0.63,0.59,0.69\n")
    assert (info.value.line, info.value.column) == (2, "p_a_given_g")
    with pytest.raises(ParseError):
        parse_experiments_csv(HEADER + "x,N,0.17\n")
    with pytest.raises(ParseError):
        parse_experiments_csv("")


def test_csv_invariant_errors():
    with pytest.raises(InvariantViolation):
        parse_experiments_csv(HEADER + "x,N,0.5,0.4,0.3,0.6,0.5,0.6\n")
    with pytest.raises(InvariantViolation):
        parse_experiments_csv(HEADER + "x,N,0.17,0.41,0.83,0.63,0.80,0.69\n")
    with pytest.raises(InvariantViolation):
        parse_experiments_csv(HEADER + "x,N,0.17,1.41,0.83,0.63,0.59,0.69\n")
    with pytest.raises(InvariantViolation):
        parse_experiments_csv(HEADER + "x,Q,0.17,0.41,0.83,0.63,0.59,0.69\n")


def test_config_round_trip(tmp_path):
    config = RunConfig(t=1.5, generator_mode="as-printed", entropy_method="yager", fit_scope="shared",
                       target="observed", rate_overrides=(0.2, 0.3), fitted_rates={"a/N": (0.1, 0.2)}, gamma_zero=True)
    path = tmp_path / "c.toml"
    save_config(config, path)
    assert load_config(path) == config
    assert "[rates.\"a/N\"]" in dump_config(config)


def test_config_errors(tmp_path):
    path = tmp_path / "c.toml"
    path.write_text("[run\n")
    with pytest.raises(ParseError):
        load_config(path)
    path.write_text("[run]\nbogus = 1\n")
    with pytest.raises(ParseError):
        load_config(path)
    with pytest.raises(ValueError):
        RunConfig(fit_scope="global")
    with pytest.raises(ValueError):
        RunConfig(rate_overrides=(-1, 1))


def test_record_key():
    assert record_key(NARROW[0]) == "townsend2000/N"
