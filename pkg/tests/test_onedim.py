from __future__ import annotations

import math

import numpy as np
import pytest

from noisecube.cube import make_function
from noisecube.margin import lambda_q, verify_theorem
from noisecube.onedim import (
    F,
    G,
    check_concavity,
    check_onedim_inequality,
    check_ratio_monotone,
    concavity_table,
    default_z_grid,
    g_increasing_on_grid,
    onedim_grid_cases,
    onedim_log_norms,
    q2_closed_form,
    second_differences,
)

GRID = [round(0.05 * i, 2) for i in range(21)]
EPS = [round(0.05 * i, 2) for i in range(11)]


class TestCurves:
    def test_F_values(self):
        assert F(2, 0.0) == 0.0
        assert F(2, 1.0) == pytest.approx(math.log(2), rel=1e-15)
        assert F(2, 0.5) == pytest.approx(math.log(1.25), rel=1e-15)

    def test_F_matches_direct_form(self):
        y = np.linspace(0.01, 1, 50)
        for q in (2, 3, 4, 7, 12):
            direct = np.log(((1 - y) ** q + (1 + y) ** q) / 2)
            np.testing.assert_allclose(F(q, y), direct, rtol=1e-12)

    def test_F_small_argument_accuracy(self):
        # leading term C(q,2) y^2 dominates as y -> 0
        for q in (2, 5, 9):
            assert F(q, 1e-9) == pytest.approx(math.comb(q, 2) * 1e-18, rel=1e-8)

    def test_F_non_integer(self):
        assert F(2.5, 0.3) == pytest.approx(math.log((0.7 ** 2.5 + 1.3 ** 2.5) / 2), rel=1e-15)
        with pytest.raises(ValueError):
            F(math.inf, 0.5)

    def test_F_increasing(self):
        y = np.linspace(0, 1, 2001)
        for q in range(2, 13):
            assert np.all(np.diff(F(q, y)) >= 0)

    def test_G_values(self):
        assert G(2, 0.0) == pytest.approx(math.log(math.log(2)), rel=1e-15)
        assert G(2, math.log(0.5)) == pytest.approx(math.log(math.log(1.25)), rel=1e-14)
        with pytest.raises(ValueError, match="floor"):
            G(2, -31.0)

    def test_G_unbounded_below(self):
        for q in (2, 3, 8):
            assert g_increasing_on_grid(q)
            assert G(q, -30.0) < -55


class TestInequality:
    def test_tight_case(self):
        case = check_onedim_inequality(2, 0.25, 1.0)
        assert case.lhs == pytest.approx(0.223144, abs=1e-6)
        assert case.rhs == pytest.approx(0.223144, abs=1e-6)
        assert abs(case.margin) <= 1e-10 and case.equality

    def test_constant(self):
        for e in EPS:
            case = check_onedim_inequality(2, e, 0.0)
            assert case.lhs == 0.0 and case.rhs == 0.0

    def test_slack(self):
        case = check_onedim_inequality(3, 0.3, 0.7)
        assert case.passed and case.margin > 1e-6

    def test_infinity(self):
        case = check_onedim_inequality(math.inf, 0.25, 1.0)
        assert case.equality

    def test_bad_x(self):
        with pytest.raises(ValueError):
            check_onedim_inequality(2, 0.1, 1.5)

    def test_full_grid(self):
        qs = list(range(2, 9)) + [math.inf]
        cases = onedim_grid_cases(qs, EPS, GRID)
        assert min(c.margin for c in cases) >= -1e-10
        for c in cases:
            if c.description.endswith(("x=0.0", "x=1.0")):
                assert abs(c.margin) <= 1e-10, c.description

    def test_agrees_with_cube_pipeline(self):
        for q in (2, 3, 4, 6, math.inf):
            for e in EPS:
                for x in (0.0, 0.3, 0.75, 1.0):
                    f = make_function(1, [1 - x, 1 + x])
                    lhs, rhs = onedim_log_norms(q, e, x)
                    case = verify_theorem(f, e, q)
                    assert abs(case.lhs - lhs) <= 1e-12
                    assert abs(case.rhs - rhs) <= 1e-12

    def test_ratio(self):
        rep = check_ratio_monotone(2, 0.25, [i / 10 for i in range(1, 11)])
        assert rep.ok and len(rep.cases) == 10
        rep = check_ratio_monotone(5, 0.0, GRID[1:])
        assert all(c["lhs"] == pytest.approx(1.0, rel=1e-14) for c in rep.cases)
        rep = check_ratio_monotone(3, 0.5, GRID[1:])
        assert all(c["lhs"] == 0.0 for c in rep.cases) and rep.ok
        with pytest.raises(ValueError):
            check_ratio_monotone(2, 0.1, [0.0])


class TestConcavity:
    def test_grid(self):
        z = default_z_grid()
        assert len(z) == 200 and z.min() > -10 and z.max() < 0

    def test_q2(self):
        rep = check_concavity(2)
        assert rep.ok
        tags = {t for c in rep.cases for t in c["tags"]}
        assert tags == {"second-difference", "superadditivity", "closed-form"}

    def test_closed_form_at_zero(self):
        assert q2_closed_form(0.0) == pytest.approx(math.log(2) - 1, rel=1e-15)
        assert q2_closed_form(0.0) == pytest.approx(-0.3069, abs=1e-4)

    def test_superadditivity_point(self):
        a, b = math.log(0.5), math.log(0.5)
        assert G(4, 0.0) + G(4, a + b) <= G(4, a) + G(4, b)

    @pytest.mark.parametrize("q", range(2, 13))
    def test_second_differences(self, q):
        assert np.max(second_differences(q, default_z_grid())) <= 1e-8

    def test_grid_guard(self):
        with pytest.raises(ValueError):
            check_concavity(2, z_grid=[0.0])

    def test_table_rows(self):
        rows = concavity_table(3, default_z_grid(points=5))
        assert len(rows) == 5 and set(rows[0]) == {"z", "G", "second_difference"}


def test_lambda_consistency():
    # F(1 - 2 eps) / F(1) is the best ratio; it is exactly lambda(q, eps)
    for q in (2, 3, 4, 9):
        for e in (0.1, 0.25, 0.4):
            assert F(q, 1 - 2 * e) / F(q, 1.0) == pytest.approx(lambda_q(q, e), rel=1e-13)
