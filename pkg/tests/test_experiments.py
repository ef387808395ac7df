"""Experiment harness: seeded draws, trial records, campaign logs."""

from fractions import Fraction

import pytest

from cubelab.cube import ADDITIVE, MULTIPLICATIVE, FiniteSet, is_proper
from cubelab.experiments import (
    ExperimentRecord,
    conjecture_probe,
    default_distribution,
    energy_bound_trial,
    expand_campaign,
    export_growth_csv,
    growth_trial,
    load_log,
    parse_distribution,
    random_cube,
    random_proper_cube,
    record_key,
    run_campaign,
)
from cubelab.numeric import AmbientRing

Z = AmbientRing.integers()
F101 = AmbientRing.prime_field(101)


def test_parse_distribution():
    assert parse_distribution("powers(3)") == ("powers", 3)
    assert parse_distribution("uniform(1..99)") == ("uniform", 1, 99)
    assert parse_distribution("uniform(-5..5)") == ("uniform", -5, 5)
    for bad in ("powers(1)", "uniform(9..1)", "normal(0,1)", "powers(x)"):
        with pytest.raises(ValueError):
            parse_distribution(bad)


def test_default_distributions():
    assert default_distribution(F101, ADDITIVE) == "uniform(1..100)"
    assert "1099511627776" in default_distribution(Z, ADDITIVE)


def test_random_cube_determinism():
    a = random_cube(Z, 5, 1, ADDITIVE, "uniform(1..1000)", seed=99)
    b = random_cube(Z, 5, 1, ADDITIVE, "uniform(1..1000)", seed=99)
    c = random_cube(Z, 5, 1, ADDITIVE, "uniform(1..1000)", seed=100)
    assert a == b
    assert a != c
    assert all(1 <= g <= 1000 for g in a.generators)


def test_random_cube_powers():
    spec = random_cube(Z, 4, 2, ADDITIVE, "powers(7)", seed=0)
    assert spec.generators == (1, 7, 49, 343)
    assert spec.a0 == 0
    assert is_proper(spec)
    mult = random_cube(Z, 3, 1, MULTIPLICATIVE, "powers(2)", seed=0)
    assert mult.a0 == 1
    assert mult.generators == (1, 2, 4)


def test_random_cube_field_rejects_zero_residues():
    spec = random_cube(F101, 6, 1, ADDITIVE, "uniform(1..10100)", seed=5)
    assert all(g != 0 for g in spec.generators)


def test_random_proper_cube():
    spec = random_proper_cube(Z, 6, 1, ADDITIVE, "uniform(1..4096)", seed=1)
    assert is_proper(spec)


def test_growth_trial_record():
    spec = random_cube(Z, 5, 1, ADDITIVE, seed=3)
    rec = growth_trial(spec, seed=3)
    assert rec.flag == "report"
    assert rec.measured["|Q|"] == 32
    assert rec.measured["QQ"] >= 32 and rec.measured["Q/Q"] >= 32
    assert set(rec.exponents) == {"QQ", "Q/Q"}
    assert "QQ_shape" in rec.bounds and "Q/Q_shape" in rec.bounds
    # Rerun is identical except for clocks.
    again = growth_trial(spec, seed=3)
    assert rec.comparable() == again.comparable()
    assert rec.key == again.key


def test_growth_trial_floors():
    spec = random_cube(Z, 5, 1, ADDITIVE, seed=3)
    floors = {"QQ": Fraction(6, 5), "Q/Q": Fraction(6, 5)}
    assert growth_trial(spec, seed=3, floors=floors).flag == "pass"
    # A single generator gives |Q| = 2 and |QQ| = 2 < 2^(6/5).
    tiny = random_cube(Z, 1, 1, ADDITIVE, "powers(2)", seed=0)
    assert growth_trial(tiny, floors={"QQ": Fraction(6, 5)}).flag == "fail"


def test_growth_trial_field_bounds():
    spec = random_cube(F101, 4, 1, ADDITIVE, seed=8)
    rec = growth_trial(spec, seed=8)
    assert "fp_branch" in rec.bounds


def test_growth_trial_multiplicative():
    spec = random_cube(Z, 4, 1, MULTIPLICATIVE, seed=2)
    rec = growth_trial(spec, seed=2)
    assert set(rec.exponents) == {"Q+Q", "Q-Q"}
    assert rec.measured["Q-Q"] >= rec.measured["|Q|"]


def test_growth_trial_degenerate():
    spec = random_cube(Z, 0, 1, ADDITIVE, "uniform(1..9)", seed=0)
    rec = growth_trial(spec)
    assert rec.flag == "degenerate"
    assert rec.measured == {"|Q|": 1}


def test_energy_trial_shapes():
    add = energy_bound_trial(random_cube(Z, 4, 1, ADDITIVE, seed=1), seed=1)
    assert "E_times" in add.measured and "E_times_shape" in add.bounds
    mult = energy_bound_trial(random_cube(Z, 4, 1, MULTIPLICATIVE, seed=1), seed=1)
    assert "E_plus" in mult.measured
    assert 0.0 < mult.exponents["deficiency"] < 3.0
    fp = energy_bound_trial(random_cube(F101, 3, 1, ADDITIVE, seed=1), seed=1)
    assert {"main_term", "branch_a", "branch_b"} <= set(fp.bounds)


def test_conjecture_probe_doubling_set():
    Q = FiniteSet.from_iterable(Z, [1, 2])
    rec = conjecture_probe(Q, 3, 12)
    # |Q^n| = n + 1 for powers of two, so |Q^n| >= 8 first at n = 7.
    assert rec.measured["n"] == 7
    assert rec.flag == "pass"
    assert rec.measured["|Q^7|"] == 8
    assert conjecture_probe(Q, 1, 5).measured["n"] == 1


def test_conjecture_probe_not_reached():
    Q = FiniteSet.from_iterable(Z, [1, 2])
    rec = conjecture_probe(Q, 4, 3)
    assert rec.flag == "not_reached"
    assert "n" not in rec.measured


def test_conjecture_probe_trajectory_monotone():
    # 1 in Q makes every Q^n a subset of Q^(n+1).
    Q = FiniteSet.from_iterable(Z, [1, 3, 5, 7])
    rec = conjecture_probe(Q, 2, 6)
    sizes = [rec.measured[f"|Q^{i}|"] for i in range(1, 4)]
    assert sizes == sorted(sizes)


def test_conjecture_probe_cap_flag():
    tight = AmbientRing.integers(magnitude_cap=10**4)
    Q = FiniteSet.from_iterable(tight, [2, 3, 5, 7])
    rec = conjecture_probe(Q, 9, 30)
    assert rec.flag == "cap_exceeded"
    assert rec.measured["|Q^2|"] == 10


def test_record_round_trip_types():
    spec = random_cube(Z, 3, 1, ADDITIVE, seed=0)
    rec = growth_trial(spec, seed=0)
    back = ExperimentRecord.from_json_line(rec.to_json_line())
    assert isinstance(back.measured["QQ"], int)
    assert back.comparable() == rec.comparable()
    assert back.key == record_key(rec.name, rec.spec, rec.seed)
    assert len(rec.key) == 64


CONFIG = {
    "experiments": ["growth_additive", "conjecture_probe"],
    "dRange": [2, 3],
    "hRange": [1, 1],
    "pList": [101],
    "seeds": [0, 1],
    "conjecture": {"m": 2, "nMax": 6},
}


def test_expand_campaign_task_count():
    tasks = expand_campaign(CONFIG)
    # growth: 2 rings x 2 dims x 1 height x 2 seeds; conjecture the same.
    assert len(tasks) == 8 + 8
    with pytest.raises(ValueError):
        expand_campaign({"experiments": ["nope"]})


def test_campaign_idempotent(tmp_path):
    log = tmp_path / "log.jsonl"
    first = run_campaign(CONFIG, log)
    assert len(first) == 16
    assert len(load_log(log)) == 16
    second = run_campaign(CONFIG, log)
    assert second == []
    assert len(load_log(log)) == 16
    # A wider config reruns only the new tasks.
    wider = dict(CONFIG, dRange=[2, 4])
    third = run_campaign(wider, log)
    assert len(third) == 8
    assert len(load_log(log)) == 24


def test_campaign_parallel_matches_serial(tmp_path):
    small = dict(CONFIG, experiments=["growth_additive"], seeds=[0])
    serial = run_campaign(small, tmp_path / "serial.jsonl", jobs=1)
    parallel = run_campaign(small, tmp_path / "parallel.jsonl", jobs=2)
    assert [r.comparable() for r in serial] == [r.comparable() for r in parallel]


def test_export_csv(tmp_path):
    log = tmp_path / "log.jsonl"
    run_campaign(dict(CONFIG, experiments=["growth_additive"]), log)
    csv_path = tmp_path / "out.csv"
    rows = export_growth_csv(log, csv_path)
    text = csv_path.read_text().splitlines()
    assert text[0] == "q_size,size_QQ,exponent"
    assert rows == len(text) - 1 == 8
