"""Desk-scale reproductions, each emitted as a ``Report`` of CSV/JSON-ready rows."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

import mpmath

from .arith import FactorBudget, factorize, is_prime, known_radical, primes_up_to, primorial
from .errors import CapExceededError, DegeneratePairError, InsufficientTableError, RootOfUnityPairError
from .lucas import (
    BHV_THRESHOLD,
    LucasPair,
    certified_omega_lower_bound,
    eigenvalue_from_u,
    normalize_pair,
    valuation_identity_check,
)
from .quadratic import (
    QuadraticPair,
    frey_bound_tau,
    gamma_is_root_of_unity,
    norm_lemma_ratio,
    sato_tate_angle,
)
from .tau import TAU_WEIGHT, TauTable

__all__ = [
    "PASS",
    "FAIL",
    "UNKNOWN",
    "Report",
    "ReportRow",
    "SCHEMA_VERSION",
    "SuiteConfig",
    "fmt",
    "norm_lemma_experiment",
    "radical_growth_report",
    "run_suite",
    "sato_tate_cdf",
    "sato_tate_mass",
    "sato_tate_report",
    "theorem_tau_experiment",
    "valuation_sweep",
]

SCHEMA_VERSION = "report_v1"
PASS, FAIL, UNKNOWN = "Pass", "Fail", "Unknown"
DEFAULT_PRIMORIAL_CAP = 2310
SATO_TATE_TOLERANCE = 0.05


def fmt(value: Any) -> str:
    """Deterministic decimal text for report cells."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, str)):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "_mpf_"):
        # private MPContext instances each carry their own mpf class
        return mpmath.nstr(mpmath.mpf(value), 30, strip_zeros=False)
    raise TypeError(f"cannot format {type(value).__name__}")


@dataclass(frozen=True)
class ReportRow:
    experiment: str
    inputs: Mapping[str, str]
    outputs: Mapping[str, str]
    status: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "experiment": self.experiment,
            "inputs": dict(self.inputs),
            "outputs": dict(self.outputs),
            "status": self.status,
        }


@dataclass
class Report:
    experiment: str
    input_keys: tuple[str, ...]
    output_keys: tuple[str, ...]
    rows: list[ReportRow] = field(default_factory=list)
    summary: dict[str, str] = field(default_factory=dict)

    def add(self, inputs: Mapping[str, Any], outputs: Mapping[str, Any], status: str) -> None:
        if set(inputs) != set(self.input_keys) or set(outputs) != set(self.output_keys):
            raise KeyError(f"row keys do not match the {self.experiment} schema")
        self.rows.append(
            ReportRow(
                self.experiment,
                {k: fmt(inputs[k]) for k in self.input_keys},
                {k: fmt(outputs[k]) for k in self.output_keys},
                status,
            )
        )

    @property
    def status(self) -> str:
        statuses = {r.status for r in self.rows}
        if FAIL in statuses:
            return FAIL
        if UNKNOWN in statuses:
            return UNKNOWN
        return PASS

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["experiment", *self.input_keys, *self.output_keys, "status"])
        for r in self.rows:
            writer.writerow(
                [r.experiment, *(r.inputs[k] for k in self.input_keys),
                 *(r.outputs[k] for k in self.output_keys), r.status]
            )
        return buf.getvalue()

    def to_json(self) -> str:
        """Array of row objects; the experiment summary, if any, rides on every row."""
        rows = []
        for r in self.rows:
            d = r.to_dict()
            if self.summary:
                d["summary"] = dict(self.summary)
            rows.append(d)
        return json.dumps(rows, indent=2) + "\n"

    def render(self, output_format: str) -> str:
        if output_format == "csv":
            return self.to_csv()
        if output_format == "json":
            return self.to_json()
        raise ValueError(f"unknown output format {output_format!r}")


# --- Theorem tau certificates ---------------------------------------------------


def theorem_tau_experiment(
    p: int,
    k: int,
    a_p: int,
    r: int,
    budget: FactorBudget | None = None,
    threshold: int = BHV_THRESHOLD,
    cap: int = DEFAULT_PRIMORIAL_CAP,
):
    """Certify ``omega(a(p^(n-1))) >= ...`` at the primorial index ``n = prod_{q <= r} q``.

    Returns ``(report, certificate)``. The ``2^(log n / log log n)`` column is a
    comparison only; pass/fail rests on the certificate arithmetic.
    """
    if gamma_is_root_of_unity(QuadraticPair.from_eigenvalue(p, k, a_p)):
        raise RootOfUnityPairError(f"gamma is a root of unity at p={p}")
    n = primorial(r)
    if n > cap:
        raise CapExceededError(f"primorial({r}) = {n} exceeds the cap {cap}")
    pair = normalize_pair(p, k, a_p)
    cert = certified_omega_lower_bound(pair, n, threshold, budget)
    target = eigenvalue_from_u(pair, n - 1)
    divides = all(target % e.primitive_part == 0 for e in cert.entries)

    comparison = 2 ** (math.log(n) / math.log(math.log(n))) if n >= 3 else None
    log_m = (n - 1) * math.log(p)
    grh = 0.5 * math.log(log_m) ** 2 if log_m > 1 else None

    if not divides:
        status = FAIL
    elif cert.certified >= cert.a_priori:
        status = PASS
    elif cert.unknown:
        status = UNKNOWN
    else:
        status = FAIL

    report = Report(
        "theorem_tau",
        ("p", "k", "ap", "r", "n", "threshold"),
        ("divisor_count", "a_priori_bound", "certified_bound", "unknown_entries",
         "comparison_2pow_logn_loglogn", "grh_normal_order", "parts_divide_target"),
    )
    report.add(
        {"p": p, "k": k, "ap": a_p, "r": r, "n": n, "threshold": threshold},
        {
            "divisor_count": len(cert.entries) + 1,
            "a_priori_bound": cert.a_priori,
            "certified_bound": cert.certified,
            "unknown_entries": cert.unknown,
            "comparison_2pow_logn_loglogn": comparison,
            "grh_normal_order": grh,
            "parts_divide_target": divides,
        },
        status,
    )
    return report, cert


# --- Sato-Tate ------------------------------------------------------------------


def sato_tate_cdf(x: float) -> float:
    """Model CDF ``(2/pi) * integral_0^x sin^2`` on ``[0, pi]``."""
    return (x - math.sin(x) * math.cos(x)) / math.pi


def sato_tate_mass(c: float, d: float) -> float:
    return 2 / math.pi * ((d - c) / 2 - (math.sin(2 * d) - math.sin(2 * c)) / 4)


def sato_tate_report(
    table: TauTable, bins: int, tolerance: float = SATO_TATE_TOLERANCE
) -> Report:
    if table.bound < 100:
        raise InsufficientTableError("Sato-Tate needs a table bound of at least 100")
    if bins < 2:
        raise ValueError("need at least 2 bins")
    primes = primes_up_to(table.bound)
    angles = sorted(
        sato_tate_angle(QuadraticPair.from_eigenvalue(p, TAU_WEIGHT, table[p])) for p in primes
    )
    total = len(angles)
    discrepancy = 0.0
    for i, theta in enumerate(angles):
        model = sato_tate_cdf(theta)
        discrepancy = max(discrepancy, (i + 1) / total - model, model - i / total)

    status = PASS if discrepancy <= tolerance else FAIL
    report = Report(
        "sato_tate",
        ("bin", "lo", "hi"),
        ("count", "empirical", "model", "empirical_cdf", "model_cdf", "discrepancy"),
    )
    edges = [math.pi * i / bins for i in range(bins + 1)]
    counts = [0] * bins
    for theta in angles:
        counts[min(int(theta / math.pi * bins), bins - 1)] += 1
    running = 0
    for b in range(bins):
        running += counts[b]
        report.add(
            {"bin": b, "lo": edges[b], "hi": edges[b + 1]},
            {
                "count": counts[b],
                "empirical": counts[b] / total,
                "model": sato_tate_mass(edges[b], edges[b + 1]),
                "empirical_cdf": running / total,
                "model_cdf": sato_tate_cdf(edges[b + 1]),
                "discrepancy": discrepancy,
            },
            status,
        )
    report.summary = {
        "primes": fmt(total),
        "discrepancy": fmt(discrepancy),
        "tolerance": fmt(tolerance),
    }
    return report


# --- valuations -------------------------------------------------------------------


def valuation_sweep(table: TauTable, p_max: int, n_max: int) -> Report:
    if p_max > table.bound:
        raise InsufficientTableError(f"p_max {p_max} exceeds table bound {table.bound}")
    report = Report(
        "valuation_sweep",
        ("p", "n_max"),
        ("tau_p", "nu", "nu_at_most_5", "checked", "first_counterexample"),
    )
    for p in primes_up_to(p_max):
        a_p = table[p]
        if a_p == 0:
            continue
        pair = normalize_pair(p, TAU_WEIGHT, a_p)
        result = valuation_identity_check(pair, n_max)
        bounded = pair.nu <= 5
        report.add(
            {"p": p, "n_max": n_max},
            {
                "tau_p": a_p,
                "nu": pair.nu,
                "nu_at_most_5": bounded,
                "checked": result.checked,
                "first_counterexample": result.first_counterexample,
            },
            PASS if result.ok and bounded else FAIL,
        )
    return report


# --- radicals -----------------------------------------------------------------------


def radical_growth_report(
    pair: LucasPair,
    n_max: int,
    epsilon: float | Fraction = 0,
    c: float | Fraction = 1,
    budget: FactorBudget | None = None,
) -> Report:
    """Observed radicals of ``a(p^n)`` against the ABC-conditional lower bound.

    The unconditional ceiling ``Q(a(p^n)) <= (n+1) p^(((k-1)/2 - nu) n + 1)``
    (``(n+1) p^((k-1) n / 2)`` when ``nu = 0``) gives each complete row a
    genuine pass/fail check; the conditional bound is reported alongside.
    """
    if pair.root_of_unity:
        raise RootOfUnityPairError("gamma is a root of unity")
    report = Report(
        "radical_growth",
        ("p", "k", "ap", "n", "epsilon", "c"),
        ("coefficient", "complete", "omega", "log_radical", "omega_log_omega",
         "frey_log_bound", "frey_bound_respected", "log_upper_bound"),
    )
    ctx = mpmath.MPContext()
    ctx.prec = 128
    p, k, nu = pair.p, pair.k, pair.nu
    for n in range(n_max + 1):
        a_n = eigenvalue_from_u(pair, n)
        f = factorize(a_n, budget)
        rad = known_radical(f)
        w = len(f.factors) + (0 if f.complete else 1)
        log_rad = ctx.log(rad) if rad > 1 else ctx.mpf(0)
        frey = frey_bound_tau(p, pair.a_p, k, n, epsilon, c, budget).log()
        if nu:
            upper = ctx.log(n + 1) + (ctx.mpf(k - 1 - 2 * nu) / 2 * n + 1) * ctx.log(p)
        else:
            upper = ctx.log(n + 1) + ctx.mpf(k - 1) / 2 * n * ctx.log(p)
        if not f.complete:
            status = UNKNOWN
        else:
            status = PASS if log_rad <= upper else FAIL
        report.add(
            {"p": p, "k": k, "ap": pair.a_p, "n": n, "epsilon": Fraction(epsilon), "c": Fraction(c)},
            {
                "coefficient": a_n,
                "complete": f.complete,
                "omega": w,
                "log_radical": log_rad,
                "omega_log_omega": w * math.log(w) if w > 1 else 0.0,
                "frey_log_bound": frey,
                "frey_bound_respected": log_rad >= frey,
                "log_upper_bound": upper,
            },
            status,
        )
    return report


# --- norm lemma -------------------------------------------------------------------------


def norm_lemma_experiment(
    pair: LucasPair, n_points: Sequence[int], precision: int = 128
) -> Report:
    """``log|N(A^n - B^n)| / (h(A/B)[K:Q] n)`` and the scaled error ``|ratio - 1| n / log(n+1)``."""
    report = Report("norm_lemma", ("p", "k", "ap", "n"), ("ratio", "scaled_error"))
    for n in n_points:
        inputs = {"p": pair.p, "k": pair.k, "ap": pair.a_p, "n": n}
        try:
            ratio = norm_lemma_ratio(pair, n, precision)
        except DegeneratePairError:
            report.add(inputs, {"ratio": None, "scaled_error": None}, UNKNOWN)
            continue
        scaled = abs(ratio - 1) * n / mpmath.log(n + 1)
        ok = n < 100 or abs(ratio - 1) <= 0.1
        report.add(inputs, {"ratio": ratio, "scaled_error": scaled}, PASS if ok else FAIL)
    return report


# --- whole suite -------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteConfig:
    p: int = 2
    theorem_r: int = 7
    satotate_bins: int = 20
    valuation_p_max: int = 50
    valuation_n_max: int = 100
    radical_n_max: int = 12
    epsilon: Fraction = Fraction(0)
    c: Fraction = Fraction(1)
    norm_points: tuple[int, ...] = (1, 3, 20, 50, 100, 200)
    budget: FactorBudget = FactorBudget()


def run_suite(table: TauTable, config: SuiteConfig = SuiteConfig()) -> list[Report]:
    """Every experiment at desk scale, in a fixed order."""
    if not is_prime(config.p) or config.p > table.bound:
        raise InsufficientTableError(f"tau({config.p}) unavailable")
    a_p = table[config.p]
    pair = normalize_pair(config.p, TAU_WEIGHT, a_p)
    theorem, _ = theorem_tau_experiment(config.p, TAU_WEIGHT, a_p, config.theorem_r, config.budget)
    return [
        theorem,
        sato_tate_report(table, config.satotate_bins),
        valuation_sweep(table, config.valuation_p_max, config.valuation_n_max),
        radical_growth_report(pair, config.radical_n_max, config.epsilon, config.c, config.budget),
        norm_lemma_experiment(pair, config.norm_points),
    ]


def reports_by_tag(reports: Iterable[Report]) -> dict[str, Report]:
    return {r.experiment: r for r in sorted(reports, key=lambda r: r.experiment)}
