"""Acceptance suite: one test per criterion, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py`` (or ``python tests/test_acceptance.py``);
the terminal summary prints one pass/fail line per criterion.
"""

from __future__ import annotations

import math
import sys
import time

import mpmath
import numpy as np
import pytest

from noisecube.cli import RunConfig, run
from noisecube.cube import (
    apply_noise,
    apply_noise_coordinate,
    apply_noise_spectral,
    conditional_expectation,
    make_function,
    norm,
)
from noisecube.margin import (
    lambda_old,
    lambda_q,
    random_nonneg_function,
    random_vector_cases,
    subcube_cases,
    subset_weights,
    sweep_main_inequality,
    verify_theorem,
)
from noisecube.matroid import coordinate_subspace, random_matroid_cases, verify_matroid
from noisecube.onedim import (
    check_concavity,
    check_onedim_inequality,
    onedim_grid_cases,
    onedim_log_norms,
)
from noisecube.proofcert import certify_identities, certify_range
from noisecube.rmcodes import (
    bsc_block_error,
    exact_block_error,
    family_threshold_report,
    repetition_block_error,
    rm_code,
    threshold,
)

Q_MAIN = [2, 3, 4, math.inf]
EPS_GRID = [round(0.05 * i, 2) for i in range(11)]
X_GRID = [round(0.05 * i, 2) for i in range(21)]
P_GRID = [round(0.1 * i, 1) for i in range(1, 10)]


def test_criterion_01_main_inequality_sweep(record_property):
    start = time.perf_counter()
    cases = sweep_main_inequality(range(1, 9), Q_MAIN, EPS_GRID, count=200, seed=2024)
    worst = min(c.margin for c in cases)
    record_property("detail", f"{len(cases)} cases, min margin {worst:.3g}, "
                              f"{time.perf_counter() - start:.1f}s")
    assert len(cases) == 8 * 200 * len(Q_MAIN) * len(EPS_GRID)
    assert worst >= -1e-9


def test_criterion_02_subcube_tightness(record_property):
    cases = [c for n in range(0, 7) for c in subcube_cases(n, Q_MAIN, EPS_GRID)]
    worst = max(abs(c.margin) for c in cases)
    record_property("detail", f"{len(cases)} subcube cases, max |margin| {worst:.3g}")
    assert worst <= 1e-10


def test_criterion_03_vector_noise(record_property):
    cases = random_vector_cases(100, 6, [2, 3], seed=77)
    worst = min(c.margin for c in cases)
    heterogeneous = sum(1 for c in cases if "eps=" not in c.description)
    record_property("detail", f"{len(cases)} cases, min margin {worst:.3g}")
    assert len(cases) == 100 == heterogeneous
    assert worst >= -1e-9


def test_criterion_04_improved_parameter(record_property):
    interior = np.round(np.arange(1, 50) * 0.01, 2)
    gaps = []
    for q in range(2, 11):
        new, old = lambda_q(q, interior), lambda_old(q, interior)
        gaps.append(float(np.min(old - new)))
        assert np.all(new < old)
        assert lambda_q(q, 0.0) == lambda_old(q, 0.0) == 1.0
        assert lambda_q(q, 0.5) == lambda_old(q, 0.5) == 0.0
    record_property("detail", f"min interior gap lambda_old - lambda_new = {min(gaps):.3g}")


def test_criterion_05_proof_certificate(record_property):
    start = time.perf_counter()
    certs = certify_range(range(2, 65))
    idents = certify_identities(range(2, 65))
    elapsed = time.perf_counter() - start
    record_property("detail", f"{len(certs)} certificates + {len(idents)} identities in {elapsed:.2f}s")
    for c in certs:
        assert c.passed, (c.q, c.failures)
        assert c.zero_prefix_ok and c.all_nonneg and c.formula_ok
        assert c.q_lemma_ok and c.p_claims_ok and c.case2_ok
        assert c.p_branch == ("negative-discriminant" if c.q <= 4 else "root-beyond-interval")
    assert all(r["passed"] for r in idents)
    assert elapsed < 10


def test_criterion_06_one_dimensional(record_property):
    qs = list(range(2, 9)) + [math.inf]
    cases = onedim_grid_cases(qs, EPS_GRID, X_GRID)
    worst = min(c.margin for c in cases)
    assert worst >= -1e-10
    for q in qs:
        for e in EPS_GRID:
            for x in (0.0, 1.0):
                assert abs(check_onedim_inequality(q, e, x).margin) <= 1e-10
    agreement = 0.0
    for q in qs:
        for e in EPS_GRID:
            for x in X_GRID:
                lhs, rhs = onedim_log_norms(q, e, x)
                case = verify_theorem(make_function(1, [1 - x, 1 + x]), e, q)
                agreement = max(agreement, abs(case.lhs - lhs), abs(case.rhs - rhs))
    record_property("detail", f"{len(cases)} grid cases, min slack {worst:.3g}, "
                              f"n=1 agreement {agreement:.2g}")
    assert agreement <= 1e-12


def test_criterion_07_concavity(record_property):
    worst = -math.inf
    for q in range(2, 13):
        rep = check_concavity(q)
        assert rep.ok, rep.summary
        d2 = [c["lhs"] for c in rep.cases if "second-difference" in c["tags"]]
        assert len(d2) == 200
        worst = max(worst, max(d2))
        if q == 2:
            closed = [c for c in rep.cases if "closed-form" in c["tags"]]
            assert len(closed) == 200 and all(c["lhs"] <= 0 for c in closed)
    record_property("detail", f"max second difference over q=2..12: {worst:.3g}")
    assert worst <= 1e-8


def test_criterion_08_matroid(record_property):
    cases = random_matroid_cases(200, 14, P_GRID, seed=8)
    worst = min(c.margin for c in cases)
    assert len(cases) == 200 * len(P_GRID) and worst >= -1e-9
    eq = 0.0
    count = 0
    for n in range(1, 9):
        for support in range(1 << n):
            M = coordinate_subspace(n, [i + 1 for i in range(n) if support >> i & 1])
            for p in P_GRID:
                eq = max(eq, abs(verify_matroid(M, p).margin))
                count += 1
    record_property("detail", f"{len(cases)} random cases, min margin {worst:.3g}; "
                              f"{count} subspace cases, max |margin| {eq:.3g}")
    assert eq <= 1e-12


def test_criterion_09_threshold(record_property):
    assert threshold(0.0) == 1.0 and threshold(0.5) == 0.0
    vals = threshold(np.linspace(0.0, 0.5, 100))
    assert np.all(np.diff(vals) < 0)
    mpmath.mp.dps = 50
    p = mpmath.mpf("0.1")
    ref = float(1 - mpmath.log(1 + mpmath.sqrt(4 * p * (1 - p)), 2))
    record_property("detail", f"threshold(0.1) = {threshold(0.1):.9f}, reference {ref:.9f}")
    assert abs(threshold(0.1) - ref) <= 1e-6
    assert abs(threshold(0.1) - 0.321928) <= 1e-6


def test_criterion_10_bsc_oracle(record_property):
    code = rm_code(1, 3)
    notes = []
    for i, p in enumerate((0.02, 0.05, 0.1)):
        exact = exact_block_error(code, p)
        sim = bsc_block_error(code, p, 100_000, seed=1000 + i, confidence=0.99)
        notes.append(f"p={p}: {sim.block_error_rate:.5f} vs {exact:.5f}")
        assert sim.ci_low <= exact <= sim.ci_high, (p, exact, sim)
    rep_code = rm_code(0, 5)
    exact = repetition_block_error(32, 0.1)
    # the closed form carries the tie convention; validate it against exhaustion at n = 16
    assert repetition_block_error(16, 0.1) == pytest.approx(exact_block_error(rm_code(0, 4), 0.1),
                                                           rel=1e-12)
    sim = bsc_block_error(rep_code, 0.1, 100_000, seed=1010, confidence=0.99)
    notes.append(f"RM(0,5): {sim.errors} errors, exact {exact:.3g}")
    record_property("detail", "; ".join(notes))
    assert sim.ci_low <= exact <= sim.ci_high


def test_criterion_11_directional_decoding(record_property):
    rep = family_threshold_report([(1, m) for m in range(3, 7)], 0.05, trials=100_000, seed=11)
    members = [c for c in rep.cases if "rate" in c]
    pairs = [c for c in rep.cases if "pass" in c]
    record_property("detail", ", ".join(f"{c['description']}={c['block_error_rate']:.2g}"
                                        f"{'' if c['below_threshold'] else ' (above threshold)'}"
                                        for c in members))
    assert len(members) == 4 and len(pairs) == 3
    assert all(c["pass"] for c in pairs)


def test_criterion_12_infrastructure(record_property):
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(0, 11))
        f = make_function(n, rng.lognormal(0, 1, 1 << n))
        eps = rng.uniform(0, 0.5, n)
        a, b = apply_noise(f, eps).values, apply_noise_spectral(f, eps).values
        worst = max(worst, float(np.max(np.abs(a - b) / np.abs(a))))
        assert abs(norm(apply_noise(f, eps), 1) - norm(f, 1)) <= 1e-12 * norm(f, 1)
        delta = rng.uniform(0, 0.5, n)
        combined = (1 - (1 - 2 * eps) * (1 - 2 * delta)) / 2
        assert apply_noise(apply_noise(f, eps), delta).allclose(apply_noise(f, combined), rtol=1e-12)
        if n:
            T = int(rng.integers(1 << n))
            i = int(rng.integers(1, n + 1))
            lhs = conditional_expectation(apply_noise_coordinate(f, i, eps[i - 1]), T)
            rhs = (apply_noise_coordinate(conditional_expectation(f, T), i, eps[i - 1])
                   if T >> (i - 1) & 1 else conditional_expectation(f, T))
            assert lhs.allclose(rhs, rtol=1e-12)
            once = conditional_expectation(f, T)
            assert conditional_expectation(once, T).allclose(once, rtol=1e-12)
        assert abs(subset_weights(rng.uniform(0, 1, n)).sum() - 1) <= 1e-12
    assert worst <= 1e-12
    for cfg in (RunConfig("verify-theorem", n=[3], q=[2, 3], eps=[0.1, 0.3], samples=5, seed=4,
                          mode="sampled", trials=300),
                RunConfig("bsc-sim", r=[1], m=[3], p=[0.1], trials=3000, seed=4)):
        assert run(cfg).same_content(run(cfg))
    f = random_nonneg_function(4, "dense", seed=1)
    assert random_nonneg_function(4, "dense", seed=1).allclose(f, rtol=0)
    record_property("detail", f"500 spectral cases, max relative gap {worst:.2g}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
