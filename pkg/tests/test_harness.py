import math

import pytest
from hypothesis import given, strategies as st

from wlogrank.exceptions import ValidationError
from wlogrank.harness import (
    Method,
    PowerRow,
    StudyConfig,
    evaluate_methods,
    parse_methods,
    relative_efficiency,
    rows_to_csv,
    run_power_study,
)
from wlogrank.landmark import landmark_test
from wlogrank.logrank import make_weights, weighted_logrank
from wlogrank.modest import modest_test
from wlogrank.simulate import ArmDistribution, ScenarioSpec, TrialDesign, get_scenario, replication_rng, simulate_trial
from wlogrank.survival import build_risk_table


def test_parse_methods_grid():
    methods = parse_methods("lrt,wlrt:6,mwlrt:3:30:3,landmark:15:30:3")
    labels = [m.label for m in methods]
    assert labels[:2] == ["lrt", "wlrt(6)"]
    assert [m.t_star for m in methods if m.family == "mwlrt"] == [3, 6, 9, 12, 15, 18, 21, 24, 27, 30]
    assert [m.t_star for m in methods if m.family == "landmark"] == [15, 18, 21, 24, 27, 30]
    assert parse_methods("mwlrt:0.5:1:0.1")[-1].t_star == 1.0


@pytest.mark.parametrize("text", ["foo", "lrt:3", "mwlrt", "mwlrt:x", "mwlrt:1:2", "mwlrt:5:1:1", "mwlrt:1:5:0", "wlrt:-1"])
def test_parse_methods_rejects(text):
    with pytest.raises(ValidationError):
        parse_methods(text)


def test_relative_efficiency_reported_values():
    assert round(relative_efficiency(0.748, 0.766, 0.025)) == 96
    assert round(relative_efficiency(0.796, 0.697, 0.025)) == 127
    assert relative_efficiency(0.6, 0.6) == pytest.approx(100.0, abs=1e-12)


@given(st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_relative_efficiency_reciprocal(a, b):
    assert relative_efficiency(a, b) * relative_efficiency(b, a) == pytest.approx(10_000, rel=1e-12)


@pytest.mark.parametrize("a,b", [(0.0, 0.5), (0.5, 1.0), (1.2, 0.5)])
def test_relative_efficiency_domain(a, b):
    with pytest.raises(ValidationError):
        relative_efficiency(a, b)


def test_power_row_se():
    row = PowerRow("I", "lrt", None, 10_000, 250, 0)
    assert row.rejection_rate == 0.025
    assert row.mc_se == pytest.approx(math.sqrt(0.025 * 0.975 / 10_000))


@pytest.mark.parametrize("kwargs", [dict(n_reps=0), dict(alpha_one_sided=0.5), dict(alpha_one_sided=0.0), dict(variance="x"), dict(methods=())])
def test_config_validation(kwargs):
    with pytest.raises(ValidationError):
        StudyConfig(**kwargs)


def test_evaluate_methods_uses_the_public_tests():
    data = simulate_trial(get_scenario("IV"), TrialDesign(), replication_rng(1, "IV", 0))
    table = build_risk_table(data)
    methods = parse_methods("lrt,wlrt:6,mwlrt:18,landmark:27")
    z = evaluate_methods(data, methods)
    assert z[0] == weighted_logrank(table, make_weights(table, "standard")).z
    assert z[1] == weighted_logrank(table, make_weights(table, "threshold", 6)).z
    assert z[2] == modest_test(table, 18).z
    assert z[3] == pytest.approx(landmark_test(data, 27).z, rel=1e-12)


def test_degenerate_methods_are_counted():
    config = StudyConfig(scenarios=("I",), methods=tuple(parse_methods("lrt,wlrt:40")), n_reps=5, master_seed=1)
    rows = run_power_study(config)
    assert rows[1].degenerate_count == 5 and rows[1].rejections == 0
    assert rows[0].degenerate_count == 0


SMALL = StudyConfig(
    scenarios=("II", "IV"),
    methods=tuple(parse_methods("lrt,wlrt:6,mwlrt:12,landmark:24")),
    n_reps=60,
    master_seed=7,
)


def test_deterministic_across_workers():
    a = run_power_study(SMALL, workers=1)
    b = run_power_study(SMALL, workers=2)
    assert a == b
    assert rows_to_csv(a) == rows_to_csv(b)


def test_scenario_streams_are_independent_of_selection():
    both = run_power_study(SMALL)
    alone = run_power_study(StudyConfig(scenarios=("IV",), methods=SMALL.methods, n_reps=60, master_seed=7))
    assert [r for r in both if r.scenario == "IV"] == alone


def test_custom_scenario():
    spec = ScenarioSpec("big", ArmDistribution.exponential(0.05), ArmDistribution.exponential(0.01))
    rows = run_power_study(
        StudyConfig(scenarios=("big",), methods=(Method("lrt"),), n_reps=20, master_seed=3), scenarios={"big": spec}
    )
    assert rows[0].rejection_rate == 1.0


def test_csv_header():
    text = rows_to_csv([PowerRow("I", "mwlrt(18)", 18.0, 10, 1, 0)])
    lines = text.splitlines()
    assert lines[0] == "scenario,method,t_star,n_reps,rejections,rejection_rate,mc_se,degenerate_count"
    assert lines[1].startswith("I,mwlrt(18),18,10,1,0.10000000000000001,")
