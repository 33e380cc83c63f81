"""Acceptance checklist.

Each test covers one numbered criterion and prints a single pass/fail line
(visible under `pytest -v -s` or in captured output).  Tolerances are
pinned here and must not be loosened to make a run green.
"""

import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from qmetric import (
    BetaSequence,
    CantorModel,
    Element,
    IntervalModel,
    UhfModel,
    cantor_closed_form_mk,
    closed_form_mk,
    conditional_expectation,
    domain_separation_report,
    lip_seminorm,
    mk_distance,
    pauli_site,
    phi,
    pure_state,
    push_agreement,
    random_state,
    residual_decay,
    sandwich_bounds,
)
from qmetric import instances, verify

GEOM = BetaSequence.geometric(0.5)


def _report(num, label, ok):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {label}", file=sys.stderr)
    assert ok, f"criterion {num} ({label}) failed"


def _suite_ok(checks):
    return all(c.passed for c in checks)


def test_criterion_1_orthogonality():
    start = time.monotonic()
    checks = verify.suite_ortho(level=20)
    elapsed = time.monotonic() - start
    _report(1, "step-basis orthogonality at level 20", _suite_ok(checks) and elapsed < 1.0)


def test_criterion_2_basis_expansion():
    start = time.monotonic()
    checks = verify.suite_expansion(max_n=15)
    elapsed = time.monotonic() - start
    _report(2, "exact dyadic basis expansion for n <= 15", _suite_ok(checks) and elapsed < 1.0)


def test_criterion_3_product_table():
    checks = verify.suite_products(max_n=15)
    _report(3, "exact product table for n, m <= 15", _suite_ok(checks))


def test_criterion_4_seminorm_values():
    model = IntervalModel.build(17)
    ok = True
    for beta in (GEOM, BetaSequence.harmonic()):
        for n in range(1, 16):
            val = lip_seminorm(model.algebra, beta, phi(model, n)).value
            ok &= abs(val - 1.0 / beta(n)) <= 1e-12
    _report(4, "seminorm of witnesses equals 1/beta(n), n <= 15", ok)


def test_criterion_5_closed_form_distances():
    model = IntervalModel.build(10)
    alg = model.algebra
    states = [pure_state(alg, p) for p in alg.points]
    start = time.monotonic()
    dev = 0.0
    pairs = 0
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            lp = mk_distance(alg, GEOM, states[i], states[j]).value
            cf = closed_form_mk(model, GEOM, model.point_value(i), model.point_value(j))
            dev = max(dev, abs(lp - cf))
            pairs += 1
    elapsed = time.monotonic() - start
    _report(5, "LP equals closed form on all 45 pure pairs", pairs == 45 and dev <= 1e-8 and elapsed < 10.0)


def test_criterion_6_sandwich_bounds():
    model = IntervalModel.build(10)
    alg = model.algebra
    ok = True
    seed = 0
    pairs = 0
    for n in range(1, 9):
        w = phi(model, n)
        for _ in range(25):
            mu = random_state(alg, seed)
            nu = random_state(alg, seed + 1)
            seed += 2
            mu, nu = push_agreement(alg, mu, nu, n)
            lower, upper = sandwich_bounds(alg, GEOM, mu, nu, w, n)
            value = mk_distance(alg, GEOM, mu, nu).value
            ok &= lower <= value + 1e-9 and value <= upper + 1e-8
            if abs(mu(w) + nu(w)) <= 1e-12 and abs(mu(w)) > 1e-12:
                ok &= abs(value - 2.0 * GEOM(n)) <= 1e-8
            pairs += 1
    # antipodal pure pairs hit the upper bound exactly
    for n in range(1, 9):
        mu = pure_state(alg, alg.points[model.point_index(Fraction(1, 2 ** (n - 1)))])
        nu = pure_state(alg, IntervalModel.TAIL_LABEL)
        value = mk_distance(alg, GEOM, mu, nu).value
        ok &= abs(value - 2.0 * GEOM(n)) <= 1e-8
    _report(6, f"sandwich bounds on {pairs} seeded agreeing pairs", pairs == 200 and ok)


def test_criterion_7_domain_separation():
    model = IntervalModel.build(12)
    a = instances.p1(model, cutoff=30)
    rep = domain_separation_report(model.algebra, a, 20)
    ok = max(abs(v - 1.0) for v in rep.l_beta_running) <= 1e-9
    for n in range(1, 21):
        want = 0.75 * 2.0 ** n
        ok &= abs(rep.l_beta_sq_running[n - 1] - want) <= 1e-6 * want
    ok &= rep.l_beta_sq_running[10] > 1e3
    _report(7, "coordinate function separates the two seminorm domains", ok)


def test_criterion_8_expectation_axioms():
    checks = verify.suite_expectations(seed=0, samples=100)
    _report(8, "expectation axioms on 100 seeded samples, three instances", _suite_ok(checks))


def test_criterion_9_residual_decay():
    model = IntervalModel.build(12)
    alg = model.algebra
    rng = np.random.default_rng(0)
    ok = True
    for _ in range(20):
        k = int(rng.integers(2, alg.levels + 1))
        e = conditional_expectation(alg, k, Element(alg, rng.standard_normal(alg.dim)))
        ok &= max(residual_decay(alg, e, alg.levels)[k - 1:]) <= 1e-12
    decay = residual_decay(alg, instances.p1(model, cutoff=30), 25)
    ok &= all(b <= a + 1e-15 for a, b in zip(decay, decay[1:]))
    ok &= decay[24] < 1e-6
    _report(9, "residuals vanish in-level and decay monotonically for p1", ok)


def test_criterion_10_cantor_recovery():
    model = CantorModel.build(5)
    alg = model.algebra
    states = [pure_state(alg, w) for w in alg.points]
    start = time.monotonic()
    dev = 0.0
    pairs = 0
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            lp = mk_distance(alg, GEOM, states[i], states[j]).value
            dev = max(dev, abs(lp - cantor_closed_form_mk(model, GEOM, alg.points[i], alg.points[j])))
            pairs += 1
    elapsed = time.monotonic() - start
    _report(10, "Cantor distances match prefix formula on 496 pairs", pairs == 496 and dev <= 1e-8 and elapsed < 60.0)


def test_criterion_11_uhf_witnesses():
    model = UhfModel.build(5)
    ok = all(
        abs(lip_seminorm(model.algebra, GEOM, pauli_site(model, k)).value - 1.0 / GEOM(k)) <= 1e-8
        for k in range(1, 6)
    )
    _report(11, "single-site flip operators have seminorm 1/beta(k)", ok)
