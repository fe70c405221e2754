import csv
import io
import json
import math
from fractions import Fraction

import pytest
from scipy import integrate

from tau_lucas_lab.arith import FactorBudget
from tau_lucas_lab.errors import CapExceededError, InsufficientTableError, RootOfUnityPairError
from tau_lucas_lab.experiments import (
    FAIL,
    PASS,
    SCHEMA_VERSION,
    UNKNOWN,
    Report,
    SuiteConfig,
    norm_lemma_experiment,
    radical_growth_report,
    run_suite,
    sato_tate_cdf,
    sato_tate_mass,
    sato_tate_report,
    theorem_tau_experiment,
    valuation_sweep,
)
from tau_lucas_lab.lucas import normalize_pair
from tau_lucas_lab.tau import build_tau_table


def test_sato_tate_model():
    assert sato_tate_mass(0, math.pi / 2) == pytest.approx(0.5, abs=1e-15)
    assert sato_tate_mass(0, math.pi) == pytest.approx(1.0, abs=1e-15)
    dens, _ = integrate.quad(lambda t: 2 / math.pi * math.sin(t) ** 2, 0, 1.1)
    assert sato_tate_cdf(1.1) == pytest.approx(dens, abs=1e-12)


def test_sato_tate_report(table_10k):
    rep = sato_tate_report(table_10k, 20)
    assert len(rep.rows) == 20
    assert sum(float(r.outputs["empirical"]) for r in rep.rows) == pytest.approx(1.0)
    assert sum(float(r.outputs["model"]) for r in rep.rows) == pytest.approx(1.0)
    assert rep.summary["primes"] == "1229"
    assert float(rep.summary["discrepancy"]) <= 0.05
    assert rep.status == PASS
    with pytest.raises(InsufficientTableError):
        sato_tate_report(build_tau_table(50), 5)


def test_valuation_sweep(table_3000):
    rep = valuation_sweep(table_3000, 50, 40)
    assert rep.status == PASS
    row3 = next(r for r in rep.rows if r.inputs["p"] == "3")
    assert row3.outputs["nu"] == "2"


def test_theorem_tau_r7():
    rep, cert = theorem_tau_experiment(2, 12, -24, 7)
    row = rep.rows[0]
    assert row.inputs["n"] == "210"
    assert row.outputs["a_priori_bound"] == "5"
    assert int(row.outputs["certified_bound"]) >= 5
    assert row.outputs["parts_divide_target"] == "true"
    assert rep.status == PASS
    with pytest.raises(CapExceededError):
        theorem_tau_experiment(2, 12, -24, 13)
    with pytest.raises(RootOfUnityPairError):
        theorem_tau_experiment(2, 12, 0, 7)


def test_theorem_tau_unknown_under_tight_budget():
    tight = FactorBudget(trial_division_bound=10, rho_iteration_cap=1, wall_clock_cap_ms=1)
    rep, cert = theorem_tau_experiment(2, 12, -24, 7, tight)
    # the certified count still reaches 5; the budget only loses witnesses
    assert cert.unknown > 0
    assert rep.status in (PASS, UNKNOWN)


def test_radical_growth():
    pair = normalize_pair(2, 12, -24)
    rep = radical_growth_report(pair, 15, Fraction(0), Fraction(1))
    assert rep.status == PASS
    first = rep.rows[1]
    assert first.outputs["coefficient"] == "-24"
    assert first.outputs["omega"] == "2"
    tight = FactorBudget(trial_division_bound=10, rho_iteration_cap=1, wall_clock_cap_ms=1)
    rep2 = radical_growth_report(pair, 40, 0, 1, tight)
    assert UNKNOWN in {r.status for r in rep2.rows}


def test_norm_lemma_experiment():
    pair = normalize_pair(2, 12, -24)
    rep = norm_lemma_experiment(pair, [1, 20, 100, 200])
    assert rep.status == PASS
    ratios = [float(r.outputs["ratio"]) for r in rep.rows]
    assert ratios[0] == pytest.approx(math.log(119) / (5 * math.log(2)))


def test_report_schema_and_formats():
    rep = Report("demo", ("a",), ("b",))
    rep.add({"a": 10**40}, {"b": None}, PASS)
    rep.add({"a": -1}, {"b": True}, FAIL)
    with pytest.raises(KeyError):
        rep.add({"x": 1}, {"b": 1}, PASS)
    assert rep.status == FAIL
    text = rep.to_csv()
    assert "\r" not in text
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["experiment", "a", "b", "status"]
    assert rows[1] == ["demo", str(10**40), "", "Pass"]
    doc = json.loads(rep.to_json())
    assert isinstance(doc, list) and doc[0]["schema_version"] == SCHEMA_VERSION
    assert doc[1]["outputs"]["b"] == "true"


def test_suite_deterministic(table_10k):
    cfg = SuiteConfig(valuation_n_max=30, radical_n_max=8)
    a = [(r.to_csv(), r.to_json()) for r in run_suite(table_10k, cfg)]
    b = [(r.to_csv(), r.to_json()) for r in run_suite(table_10k, cfg)]
    assert a == b
