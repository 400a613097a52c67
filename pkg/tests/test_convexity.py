import math

import numpy as np
import pytest

from rconvex.convexity import (
    DEFAULT_GRID,
    GridSpec,
    check_coordinated_r_convex,
    check_jointly_r_convex,
    check_r_convex_1d,
    exp_transform,
    generate_coordinated_r_convex_2d,
    generate_jointly_r_convex_2d,
    generate_r_convex_1d,
    joint_implies_coordinated,
    make_coordinated_r_convex_2d,
    make_r_convex_1d,
    power_transform,
    random_convex_base_1d,
)
from rconvex.funcmodel import (
    ArityError,
    Interval,
    PositiveFunction,
    Rectangle,
    parse_expr,
)
from rconvex.means import r_combination_1d, r_combination_2d

UNIT = Interval(0.0, 1.0)
SQUARE = Rectangle(UNIT, UNIT)


def func(text, domain):
    return PositiveFunction.from_text(text, domain)


class TestGridSpec:
    def test_defaults(self):
        assert DEFAULT_GRID.points_per_axis == 17
        assert DEFAULT_GRID.weights == (0.1, 0.25, 0.5, 0.75, 0.9)

    def test_validation(self):
        with pytest.raises(ValueError):
            GridSpec(points_per_axis=2)
        with pytest.raises(ValueError):
            GridSpec(weights=(0.25, 0.75))  # 0.5 required
        with pytest.raises(ValueError):
            GridSpec(weights=(0.0, 0.5))


class TestCheck1D:
    def test_log_affine_passes_geometric(self):
        assert check_r_convex_1d(func("exp(x)", UNIT), 0.0).passed

    def test_square_passes_half(self):
        verdict = check_r_convex_1d(func("x^2", Interval(1.0, 2.0)), 0.5)
        assert verdict.passed
        # the defining inequality is an identity here: f^(1/2) = x is affine
        f = func("x^2", Interval(1.0, 2.0))
        for x, y in ((1.0, 2.0), (1.25, 1.75)):
            for t in DEFAULT_GRID.weights:
                lhs = f.eval(t * x + (1 - t) * y)
                rhs = r_combination_1d(0.5, t, f.eval(x), f.eval(y))
                assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_sqrt_fails_at_one(self):
        f = func("x^0.5", Interval(1.0, 4.0))
        verdict = check_r_convex_1d(f, 1.0)
        assert not verdict.passed
        w = verdict.witness
        # witness re-evaluates to a strict violation
        lhs = f.eval(w.t * w.first[0] + (1 - w.t) * w.first[1])
        rhs = r_combination_1d(1.0, w.t, f.eval(w.first[0]), f.eval(w.first[1]))
        assert lhs > rhs + verdict.tolerance
        # the midpoint of the full interval shows the violation too
        assert f.eval(2.5) == pytest.approx(math.sqrt(2.5))
        assert math.sqrt(2.5) > 0.5 * (1.0 + 2.0)

    def test_verdict_metadata(self):
        verdict = check_r_convex_1d(func("exp(x)", UNIT), 2.0)
        assert verdict.r == 2.0
        assert verdict.grid == DEFAULT_GRID
        assert verdict.tolerance > 0.0
        assert verdict.witness is None

    def test_rejects_two_variable_function(self):
        with pytest.raises(ArityError):
            check_r_convex_1d(func("exp(x+y)", SQUARE), 1.0)


class TestCheckCoordinated:
    def test_exp_sum_geometric(self):
        assert check_coordinated_r_convex(func("exp(x+y)", SQUARE), 0.0).passed

    def test_constant_any_order(self):
        f = func("4.2", SQUARE)
        for r in (0.0, 0.5, 1.0, 3.0):
            assert check_coordinated_r_convex(f, r).passed

    def test_square_of_product(self):
        rect = Rectangle(Interval(1.0, 2.0), Interval(1.0, 2.0))
        assert check_coordinated_r_convex(func("(x*y)^2", rect), 0.5).passed

    def test_failing_partial_reports_fixed_coordinate(self):
        f = func("x^0.5 + y", Rectangle(Interval(1.0, 4.0), UNIT))
        verdict = check_coordinated_r_convex(f, 1.0)
        assert not verdict.passed
        w = verdict.witness
        assert w.axis == "x" and w.fixed is not None
        from rconvex.funcmodel import Axis, partial_map
        part = partial_map(f, Axis.X, w.fixed)
        lhs = part.eval(w.t * w.first[0] + (1 - w.t) * w.first[1])
        rhs = r_combination_1d(1.0, w.t, part.eval(w.first[0]), part.eval(w.first[1]))
        assert lhs > rhs + verdict.tolerance


class TestCheckJoint:
    def test_constant(self):
        assert check_jointly_r_convex(func("2.0", SQUARE), 1.5).passed

    def test_exp_sum_geometric(self):
        assert check_jointly_r_convex(func("exp(x+y)", SQUARE), 0.0).passed

    def test_sum_of_exponentials_convex(self):
        assert check_jointly_r_convex(func("exp(x) + exp(y)", SQUARE), 1.0).passed

    def test_violator_yields_strict_witness(self):
        # concave in x for every fixed y
        f = func("x^0.5 + y + 0.2", Rectangle(Interval(1.0, 4.0), UNIT))
        verdict = check_jointly_r_convex(f, 1.0)
        assert not verdict.passed
        w = verdict.witness
        bx = w.t * w.first[0] + (1 - w.t) * w.first[1]
        by = w.lam * w.second[0] + (1 - w.lam) * w.second[1]
        lhs = f.eval((bx, by))
        corners = [f.eval((px, py)) for px in w.first for py in w.second]
        rhs = r_combination_2d(1.0, w.t, w.lam, *corners)
        assert lhs > rhs + verdict.tolerance


class TestGenerators:
    def test_power_generator_half(self):
        g = func("x", Interval(1.0, 2.0))
        f = make_r_convex_1d(g, 0.5)
        assert str(f.body) == "x^2.0"
        assert check_r_convex_1d(f, 0.5).passed

    def test_exp_generator_geometric(self):
        g = func("x", Interval(1.0, 2.0))
        f = make_r_convex_1d(g, 0.0)
        assert str(f.body) == "exp(x)"
        assert check_r_convex_1d(f, 0.0).passed

    def test_identity_at_one(self):
        g = func("x^2 + 1", UNIT)
        assert make_r_convex_1d(g, 1.0) is g

    def test_nonconvex_base_rejected(self):
        g = func("x^0.5", Interval(1.0, 4.0))
        with pytest.raises(ValueError):
            make_r_convex_1d(g, 0.5)

    def test_coordinated_generator(self):
        rect = Rectangle(Interval(1.0, 2.0), Interval(1.0, 2.0))
        g = func("x*y + 1", rect)
        f = make_coordinated_r_convex_2d(g, 0.5)
        assert check_coordinated_r_convex(f, 0.5).passed

    def test_coordinated_generator_geometric_base_at_corner(self):
        # the base touches zero at a corner, so it is transformed unvalidated;
        # the output exp(x+y) is a strictly positive class member
        g = func("x + y", SQUARE)
        f = make_coordinated_r_convex_2d(g, 0.0, validate=False)
        assert str(f.body) == "exp(x + y)"
        assert check_coordinated_r_convex(f, 0.0).passed

    def test_closure_base_transforms(self):
        g = PositiveFunction(lambda x: x + 0.5, UNIT)
        f = make_r_convex_1d(g, 0.5)
        assert f.eval(0.5) == pytest.approx(1.0)
        assert check_r_convex_1d(f, 0.5).passed
        h = exp_transform(g)
        assert h.eval(0.0) == pytest.approx(math.exp(0.5))


class TestSeededCorpora:
    def test_members_pass_their_check(self, rng):
        iv = Interval(0.25, 1.75)
        for r in (0.0, 0.5, 1.0, 2.0):
            for f in generate_r_convex_1d(rng, iv, 8, r):
                assert check_r_convex_1d(f, r).passed, f.describe()

    def test_constant_one_always_included(self, rng):
        members = generate_r_convex_1d(rng, UNIT, 3, 0.5)
        assert members[0].eval(0.5) == pytest.approx(1.0)

    def test_coordinated_members_pass(self, rng):
        for r in (0.0, 1.0, 2.0):
            for f in generate_coordinated_r_convex_2d(rng, SQUARE, 6, r):
                assert check_coordinated_r_convex(f, r).passed, f.describe()

    def test_joint_corpus_excludes_bilinear_terms(self):
        rng = np.random.default_rng(4)
        joint = generate_jointly_r_convex_2d(rng, SQUARE, 40, 1.0)
        assert not any("x * y" in f.describe() for f in joint)
        rng = np.random.default_rng(4)
        coord = generate_coordinated_r_convex_2d(rng, SQUARE, 40, 1.0)
        assert any("x * y" in f.describe() for f in coord)

    def test_corpus_is_seed_deterministic(self):
        a = [f.describe() for f in generate_r_convex_1d(np.random.default_rng(9), UNIT, 10, 0.5)]
        b = [f.describe() for f in generate_r_convex_1d(np.random.default_rng(9), UNIT, 10, 0.5)]
        assert a == b

    def test_generated_members_round_trip_through_text(self, rng):
        for f in generate_r_convex_1d(rng, UNIT, 10, 0.5):
            assert parse_expr(str(f.body)) == f.body
        for f in generate_coordinated_r_convex_2d(rng, SQUARE, 10, 0.0):
            assert parse_expr(str(f.body)) == f.body


class TestStructuralProperties:
    def test_oracle_equivalence_sample(self, rng):
        # check(f, r) must agree with check(f^r, 1); mixes members with
        # deliberately concave power violators
        iv = Interval(0.5, 2.0)
        outcomes = set()
        for _ in range(120):
            r = float(rng.uniform(0.1, 3.0))
            if rng.uniform() < 0.5:
                f = make_r_convex_1d(random_convex_base_1d(rng, iv), r, validate=False)
            else:
                s = float(rng.uniform(0.2, 0.8))
                if r * s >= 0.9:
                    r = 0.8 / s
                f = func(f"(x + 0.5)^{s}", iv)
            direct = check_r_convex_1d(f, r).passed
            oracle = check_r_convex_1d(power_transform(f, r), 1.0).passed
            assert direct == oracle, f.describe()
            outcomes.add(direct)
        assert outcomes == {True, False}

    def test_class_nesting(self, rng):
        # passing at order r implies passing at any larger order on the grid
        iv = Interval(0.5, 2.0)
        for _ in range(30):
            r = float(rng.uniform(0.1, 2.0))
            f = make_r_convex_1d(random_convex_base_1d(rng, iv), r, validate=False)
            assert check_r_convex_1d(f, r).passed
            for s in (r + 0.5, 2.0 * r + 0.1):
                assert check_r_convex_1d(f, s).passed, (f.describe(), r, s)

    def test_joint_pass_implies_coordinated_pass(self, rng):
        grid = GridSpec(points_per_axis=7)
        for r in (0.0, 0.5, 1.0, 2.0):
            for f in generate_jointly_r_convex_2d(rng, SQUARE, 5, r):
                assert check_jointly_r_convex(f, r, grid).passed
                assert check_coordinated_r_convex(f, r, grid).passed


class TestWitnessStrictness:
    def test_random_violators_produce_recheckable_witnesses(self, rng):
        # every fail verdict must re-evaluate to a strict violation of the
        # defining inequality at its own tolerance
        iv = Interval(0.5, 2.5)
        for _ in range(40):
            s = float(rng.uniform(0.2, 0.8))
            r = float(rng.uniform(0.1, 0.8 / s))
            shift = float(rng.uniform(0.1, 1.0))
            f = func(f"(x + {shift})^{s}", iv)
            verdict = check_r_convex_1d(f, r)
            assert not verdict.passed
            w = verdict.witness
            lhs = f.eval(w.t * w.first[0] + (1 - w.t) * w.first[1])
            rhs = r_combination_1d(r, w.t, f.eval(w.first[0]), f.eval(w.first[1]))
            assert lhs > rhs + verdict.tolerance
            assert lhs == pytest.approx(w.lhs, rel=1e-12)
            assert rhs == pytest.approx(w.rhs, rel=1e-12)

    def test_witness_present_iff_failed(self, rng):
        cases = [
            (func("exp(x)", UNIT), 0.0),
            (func("(x + 0.5)^0.4", UNIT), 1.0),
            (func("x^2 + 1", UNIT), 0.5),
        ]
        for f, r in cases:
            verdict = check_r_convex_1d(f, r)
            assert (verdict.witness is None) == verdict.passed


class TestHarness:
    def test_clean_run(self):
        report = joint_implies_coordinated(12, [0.0, 0.5, 1.0, 2.0], seed=3)
        assert report.requested == 12
        assert report.admitted == 12
        assert report.skipped == ()
        assert report.violations == ()
        assert report.clean

    def test_single_constant(self):
        report = joint_implies_coordinated(1, [1.0], seed=0)
        assert report.admitted == 1 and report.clean
