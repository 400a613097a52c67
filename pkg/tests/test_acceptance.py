"""Acceptance suite: every exit criterion, one test each, with a printed
pass/fail line (run with ``pytest tests/test_acceptance.py -v -s``).

Expected values are frozen from independent oracles: analytic
antiderivatives for the integral identities, closed-form constant-function
evaluations for the violation slacks, and construction-certified class
members for the property runs.
"""
import json
import math
import time

import numpy as np
import pytest

from rconvex.bounds import (
    DERIVED,
    PRINTED,
    coord_holder,
    coord_product,
    coord_r,
    dragomir_chain,
    hadamard_r_1d,
    holder_rs_1d,
    product_rs_1d,
)
from rconvex.cli import RunSpec, run_search
from rconvex.convexity import (
    check_r_convex_1d,
    generate_coordinated_r_convex_2d,
    generate_r_convex_1d,
    joint_implies_coordinated,
    make_r_convex_1d,
    power_transform,
    random_convex_base_1d,
)
from rconvex.funcmodel import Interval, PositiveFunction, Rectangle
from rconvex.means import WeightVector, weighted_power_mean
from rconvex.quadrature import QuadratureConfig, gauss_legendre, integrate_1d, integrate_2d

E = math.e
UNIT = Interval(0.0, 1.0)
SQUARE = Rectangle(UNIT, UNIT)


def _criterion(num, label, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    line = f"[acceptance {num}] {label}: {status}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


def test_criterion_1_chain_values():
    f = PositiveFunction.from_text("exp(x+y)", SQUARE)
    start = time.perf_counter()
    report = dragomir_chain(f)
    elapsed = time.perf_counter() - start
    expected = (E,
                math.sqrt(E) * (E - 1.0),
                (E - 1.0) ** 2,
                (E ** 2 - 1.0) / 2.0,
                ((1.0 + E) / 2.0) ** 2)
    worst = max(abs(a - b) for a, b in zip(report.chain, expected))
    monotone = all(b >= a for a, b in zip(report.chain, report.chain[1:]))
    ok = worst <= 1e-9 and monotone and report.satisfied and elapsed < 1.0
    _criterion(1, "five-term chain for exp(x+y) matches analytic values", ok,
               f"max |err| {worst:.2e}, {elapsed * 1e3:.0f} ms")


def test_criterion_2_mid_inequality_consistency():
    rng = np.random.default_rng(2024)
    worst_lhs = worst_rhs = 0.0
    for f in generate_coordinated_r_convex_2d(rng, SQUARE, 50, 1.0):
        rep = coord_r(f, r=1.0)
        chain = dragomir_chain(f).chain
        worst_lhs = max(worst_lhs, abs(rep.lhs - chain[2]))
        worst_rhs = max(worst_rhs, abs(rep.rhs - chain[3]))
    ok = worst_lhs <= 1e-12 and worst_rhs <= 1e-12
    _criterion(2, "order-1 rectangle bound equals chain segments E3/E4", ok,
               f"max |lhs-E3| {worst_lhs:.2e}, max |rhs-E4| {worst_rhs:.2e} over 50 instances")


def test_criterion_3_boundary_exponent_soundness():
    start = time.perf_counter()
    n = 200
    conj = [(1.5, 3.0), (2.0, 2.0), (3.0, 1.5)]
    failures = []

    rng = np.random.default_rng(31)
    for f in generate_r_convex_1d(rng, UNIT, n, 1.0):
        if not hadamard_r_1d(f, r=1.0).satisfied:
            failures.append(("T1_1", f.describe()))

    rng = np.random.default_rng(32)
    fs = generate_r_convex_1d(rng, UNIT, n, 2.0)
    gs = generate_r_convex_1d(rng, UNIT, n, 2.0)
    for f, g in zip(fs, gs):
        if not product_rs_1d(f, g, r=2.0, s=2.0).satisfied:
            failures.append(("T1_2", f.describe()))

    rng = np.random.default_rng(33)
    for i in range(n):
        r1, r2 = conj[i % 3]
        f = generate_r_convex_1d(rng, UNIT, 1, r1)[0] if i % 5 == 0 else \
            make_r_convex_1d(random_convex_base_1d(rng, UNIT), r1, validate=False)
        g = make_r_convex_1d(random_convex_base_1d(rng, UNIT), r2, validate=False)
        if not holder_rs_1d(f, g, r=r1, s=r2).satisfied:
            failures.append(("T1_3", f.describe()))

    rng = np.random.default_rng(34)
    for f in generate_coordinated_r_convex_2d(rng, SQUARE, n, 1.0, bilinear=False):
        if not coord_r(f, r=1.0).satisfied:
            failures.append(("T2_1", f.describe()))

    rng = np.random.default_rng(35)
    fs = generate_coordinated_r_convex_2d(rng, SQUARE, n, 2.0, bilinear=False)
    gs = generate_coordinated_r_convex_2d(rng, SQUARE, n, 2.0, bilinear=False)
    for f, g in zip(fs, gs):
        if not coord_product(f, g, r1=2.0, r2=2.0).satisfied:
            failures.append(("T2_4", f.describe()))

    rng = np.random.default_rng(36)
    for i in range(n):
        r1, r2 = conj[i % 3]
        f = generate_coordinated_r_convex_2d(rng, SQUARE, 1, r1, bilinear=False)[0]
        g = generate_coordinated_r_convex_2d(rng, SQUARE, 1, r2, bilinear=False)[0]
        if not coord_holder(f, g, r1=r1, r2=r2).satisfied:
            failures.append(("T2_7", f.describe()))

    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 30.0
    _criterion(3, "boundary-exponent soundness, 200 instances x 6 bounds", ok,
               f"{len(failures)} violations, {elapsed:.1f} s")


def test_criterion_4_printed_constant_counterexamples():
    grid = (0.25, 0.5, 0.75)
    base = dict(command="search", theorem="T2_1", domain=(0.0, 1.0, 0.0, 1.0),
                r_grid=grid, count=67, seed=404)
    code, text = run_search(RunSpec(**base, variant=PRINTED))
    doc = json.loads(text)
    per_r_ok = []
    for r in grid:
        bound = -(1.0 - (2.0 * r / (r + 1.0)) ** (1.0 / r)) + 1e-9
        slacks = [v["slack"] for v in doc["violations"] if v["r1"] == r]
        per_r_ok.append(bool(slacks) and min(slacks) <= bound)
    code_d, text_d = run_search(RunSpec(**base, variant=DERIVED))
    derived_clean = json.loads(text_d)["violations"] == [] and code_d == 0
    ok = code == 2 and all(per_r_ok) and derived_clean
    _criterion(4, "printed constant violated at each r, derived variant clean", ok,
               f"tried {doc['instances_tried']}, minimal slack "
               f"{doc['minimal_violation']['slack']:.6f}")


def test_criterion_5_oracle_equivalence():
    rng = np.random.default_rng(55)
    iv = Interval(0.5, 2.0)
    disagreements = 0
    passes = fails = 0
    for _ in range(1000):
        r = float(rng.uniform(0.1, 3.0))
        if rng.uniform() < 0.5:
            f = make_r_convex_1d(random_convex_base_1d(rng, iv), r, validate=False)
        else:
            s = float(rng.uniform(0.2, 0.8))
            if r * s >= 0.9:
                r = 0.8 / s
            f = PositiveFunction.from_text(f"(x + 0.5)^{s}", iv)
        direct = check_r_convex_1d(f, r).passed
        oracle = check_r_convex_1d(power_transform(f, r), 1.0).passed
        disagreements += direct != oracle
        passes += direct
        fails += not direct
    ok = disagreements == 0 and passes > 0 and fails > 0
    _criterion(5, "order-r check agrees with the power-transform oracle", ok,
               f"1000 pairs, {passes} pass / {fails} fail, {disagreements} disagreements")


def test_criterion_6_joint_implies_coordinated():
    report = joint_implies_coordinated(100, [0.0, 0.5, 1.0, 2.0], seed=606)
    ok = (report.requested == 100 and report.admitted == 100
          and report.skipped == () and report.violations == ())
    _criterion(6, "100 joint members across four orders pass the coordinate check", ok,
               f"admitted {report.admitted}, violations {len(report.violations)}")


def test_criterion_7_quadrature_accuracy():
    res = integrate_2d(PositiveFunction.from_text("exp(x+y)", SQUARE))
    err2d = abs(res.value - (E - 1.0) ** 2)
    poly_ok = True
    worst_rel = 0.0
    for n in (2, 4, 8):
        deg = 2 * n - 1
        f = PositiveFunction.from_text(f"x^{deg} + 1", UNIT)
        got = integrate_1d(f, cfg=QuadratureConfig(n, 1)).value
        exact = 1.0 / (deg + 1) + 1.0
        rel = abs(got - exact) / exact
        worst_rel = max(worst_rel, rel)
        poly_ok = poly_ok and rel <= 1e-13
        gauss_legendre(n)
    ok = err2d <= 1e-10 and poly_ok
    _criterion(7, "default rectangle rule and polynomial exactness", ok,
               f"|err| {err2d:.2e}, worst poly rel {worst_rel:.2e}")


def test_criterion_8_power_mean_properties():
    rng = np.random.default_rng(88)
    n = 10_000
    ok_bracket = ok_monotone = ok_scale = ok_cont = True
    for _ in range(n):
        k = int(rng.integers(2, 6))
        raw = rng.uniform(0.05, 1.0, k)
        weights = tuple(raw / raw.sum())
        values = tuple(np.exp(rng.uniform(-3.0, 3.0, k)))
        wv = WeightVector(weights, values)
        r = float(rng.uniform(0.0, 3.0))
        s = r + float(rng.uniform(0.0, 2.0))
        mr = weighted_power_mean(r, wv)
        ms = weighted_power_mean(s, wv)
        ok_bracket &= min(values) - 1e-12 <= mr <= max(values) + 1e-12
        ok_monotone &= mr <= ms + 1e-12
        kscale = float(np.exp(rng.uniform(-2.0, 2.0)))
        scaled = weighted_power_mean(r, WeightVector(weights, tuple(kscale * v for v in values)))
        ok_scale &= abs(scaled - kscale * mr) <= 1e-12 * abs(kscale * mr)
        near = weighted_power_mean(1e-8, wv)
        at = weighted_power_mean(0.0, wv)
        ok_cont &= abs(near - at) <= 1e-6 * max(values)
    ok = ok_bracket and ok_monotone and ok_scale and ok_cont
    _criterion(8, "power-mean bracketing/monotonicity/scaling/continuity", ok,
               f"{n} samples")
