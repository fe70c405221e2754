"""Acceptance criteria 1-11, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines.
"""

import time
from fractions import Fraction
from math import gcd

from tau_lucas_lab.arith import is_prime
from tau_lucas_lab.experiments import SuiteConfig, run_suite, sato_tate_report
from tau_lucas_lab.lucas import (
    Status,
    certified_omega_lower_bound,
    eigenvalue_from_u,
    lucas_terms,
    normalize_pair,
    primitive_part,
    valuation_identity_check,
)
from tau_lucas_lab.quadratic import (
    QuadraticNumber,
    frey_bound_tau,
    height_of_normalized_root,
    height_quadratic,
    norm_lemma_ratio,
)
from tau_lucas_lab.tau import build_tau_table, tau, tau_prime_power

import mpmath


def verdict(number, title, ok, detail, elapsed, limit):
    ok = ok and elapsed < limit
    print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail}; {elapsed:.2f}s of {limit}s)")
    assert ok, detail


def test_criterion_01_tau_correctness():
    t0 = time.perf_counter()
    table = build_tau_table(3000)
    mismatches = [n for n in range(1, 3001) if tau(n, table) != table[n]]
    spots = (table[1], table[2], table[4], table[8]) == (1, -24, -1472, 84480)
    verdict(1, "tau table agrees with recurrence path", not mismatches and spots,
            f"mismatches={len(mismatches)} spots_ok={spots}", time.perf_counter() - t0, 10)


def test_criterion_02_deligne():
    t0 = time.perf_counter()
    table = build_tau_table(10_000)
    bad = [p for p in range(2, 10_001) if is_prime(p) and table[p] ** 2 > 4 * p**11]
    verdict(2, "Deligne bound for p <= 10^4", not bad, f"violations={len(bad)}",
            time.perf_counter() - t0, 5)


def test_criterion_03_valuations():
    t0 = time.perf_counter()
    table = build_tau_table(50)
    failures, checked = [], 0
    for p in range(2, 51):
        if is_prime(p) and table[p] != 0:
            rep = valuation_identity_check(normalize_pair(p, 12, table[p]), 100)
            checked += 1
            if not rep.ok:
                failures.append((p, rep.first_counterexample))
    verdict(3, "v_p(tau(p^n)) = n v_p(tau(p)), p <= 50, n <= 100", not failures,
            f"primes={checked} failures={failures}", time.perf_counter() - t0, 30)


def test_criterion_04_lucas_structure():
    t0 = time.perf_counter()
    table = build_tau_table(50)
    div_fail = 0
    for p in (2, 3, 5, 7):
        u = lucas_terms(normalize_pair(p, 12, table[p]), 300)
        for n in range(1, 301):
            for t in range(1, n + 1):
                if n % t == 0 and u[n] % u[t]:
                    div_fail += 1
    eig_fail = 0
    for p in range(2, 51):
        if is_prime(p):
            pair = normalize_pair(p, 12, table[p])
            eig_fail += sum(eigenvalue_from_u(pair, n) != tau_prime_power(p, n, table[p])
                            for n in range(101))
    verdict(4, "u_t | u_n and a(p^n) = p^(n nu) u_(n+1)", div_fail == 0 and eig_fail == 0,
            f"divisibility_failures={div_fail} eigenvalue_mismatches={eig_fail}",
            time.perf_counter() - t0, 60)


def test_criterion_05_certificate():
    t0 = time.perf_counter()
    pair = normalize_pair(2, 12, -24)
    cert = certified_omega_lower_bound(pair, 210)
    target = eigenvalue_from_u(pair, 209)  # tau(2^209)
    by_t = {e.index: e for e in cert.entries}
    required = [by_t[t] for t in (35, 42, 70, 105, 210)]
    parts = [e.primitive_part for e in required]
    ok = (
        cert.a_priori == 5
        and all(p > 1 for p in parts)
        and all(gcd(a, b) == 1 for i, a in enumerate(parts) for b in parts[i + 1:])
        and all(target % p == 0 for p in parts)
        and cert.unknown == 0
        and not any(e.status is Status.UNKNOWN for e in cert.entries)
    )
    verdict(5, "primitive-divisor certificate at n = 210", ok,
            f"a_priori={cert.a_priori} certified={cert.certified} unknown={cert.unknown}",
            time.perf_counter() - t0, 120)


def test_criterion_06_small_index_primitive():
    t0 = time.perf_counter()
    empty = []
    for p, ap in ((2, -24), (3, 252), (5, 4830)):
        pair = normalize_pair(p, 12, ap)
        u = lucas_terms(pair, 60)
        for n in range(31, 61):
            if primitive_part(pair, n, terms=u).primitive_part <= 1:
                empty.append((p, n))
    verdict(6, "primitive part > 1 for 30 < n <= 60", not empty, f"empty={empty}",
            time.perf_counter() - t0, 120)


def test_criterion_07_sato_tate():
    t0 = time.perf_counter()
    rep = sato_tate_report(build_tau_table(10_000), 20)
    d = float(rep.summary["discrepancy"])
    ok = rep.summary["primes"] == "1229" and d <= 0.05
    verdict(7, "Sato-Tate sup-norm discrepancy <= 0.05", ok,
            f"primes={rep.summary['primes']} discrepancy={d:.5f}", time.perf_counter() - t0, 60)


def test_criterion_08_norm_lemma():
    t0 = time.perf_counter()
    pair = normalize_pair(2, 12, -24)
    r20, r100, r200 = (norm_lemma_ratio(pair, n, 128) for n in (20, 100, 200))
    ok = abs(r100 - 1) <= 0.1 and abs(r200 - 1) <= abs(r20 - 1)
    verdict(8, "norm-lemma ratio convergence", ok,
            f"r20={float(r20):.5f} r100={float(r100):.5f} r200={float(r200):.5f}",
            time.perf_counter() - t0, 10)


def test_criterion_09_heights():
    t0 = time.perf_counter()
    with mpmath.workprec(256):
        target = mpmath.mpf(5) / 2 * mpmath.log(2)
        h_root = height_of_normalized_root(normalize_pair(2, 12, -24))
        gamma = QuadraticNumber.make(-55, -3, -119, 64)
        h_gamma = height_quadratic(gamma)
        tol = mpmath.mpf(2) ** -60
        d1, d2 = abs(h_root.value - target), abs(h_gamma.value - h_root.value)
    verdict(9, "h(A_2) = h(gamma_2) = 2.5 log 2", d1 < tol and d2 < tol,
            f"|h(A)-target|={mpmath.nstr(d1, 3)} |h(gamma)-h(A)|={mpmath.nstr(d2, 3)}",
            time.perf_counter() - t0, 1)


def test_criterion_10_frey_evaluator():
    t0 = time.perf_counter()
    value = frey_bound_tau(2, -24, 12, 1, 0, 1).exact()
    expected = Fraction(2**6, 23)
    grid = [Fraction(i, 10) for i in range(10)]
    logs = [frey_bound_tau(2, -24, 12, n, e, 1).log() for n in (1, 10) for e in grid]
    monotone = all(
        logs[i] >= logs[i + 1] for i in range(len(logs) - 1) if (i + 1) % len(grid)
    )
    verdict(10, "Frey bound evaluator: exact value and monotone in epsilon",
            value == expected and monotone,
            f"value={value} expected={expected} monotone={monotone}",
            time.perf_counter() - t0, 1)


def test_criterion_11_determinism():
    t0 = time.perf_counter()

    def once():
        table = build_tau_table(10_000)
        return [(r.to_csv(), r.to_json()) for r in run_suite(table, SuiteConfig())]

    a, b = once(), once()
    verdict(11, "suite output byte-identical across reruns", a == b,
            f"reports={len(a)} identical={a == b}", time.perf_counter() - t0, 600)
