from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisecube.cube import (
    CubeFunction,
    all_subcubes,
    apply_noise,
    apply_noise_coordinate,
    apply_noise_spectral,
    conditional_expectation,
    conditional_norm_table,
    coords_from_mask,
    format_function,
    make_function,
    mask_from_coords,
    norm,
    parse_function,
    read_function,
    subcube_indicator,
    walsh_hadamard,
    write_function,
)


def rand_f(rng, n):
    return make_function(n, rng.lognormal(0, 1, 1 << n))


@st.composite
def cube_and_noise(draw, max_n=6):
    n = draw(st.integers(0, max_n))
    vals = draw(st.lists(st.floats(0, 10), min_size=1 << n, max_size=1 << n))
    eps = draw(st.lists(st.floats(0, 0.5), min_size=n, max_size=n))
    return make_function(n, vals), np.array(eps)


class TestConstruction:
    def test_basic(self):
        f = make_function(1, [2, 0])
        assert f(0) == 2.0 and f(1) == 0.0

    def test_zero_cube(self):
        f = make_function(0, [5])
        assert f.n == 0 and f(0) == 5.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="expected 4"):
            make_function(2, [4, 0, 0])

    def test_non_finite(self):
        with pytest.raises(ValueError, match="finite"):
            make_function(1, [1, math.nan])

    def test_strict_negative(self):
        make_function(1, [-1, 1])
        with pytest.raises(ValueError, match="nonnegative"):
            make_function(1, [-1, 1], strict=True)

    def test_dimension_cap(self):
        with pytest.raises(ValueError, match="cap"):
            make_function(25, [0.0])

    def test_immutable(self):
        f = make_function(1, [1, 2])
        with pytest.raises(ValueError):
            f.values[0] = 3

    def test_product_identity(self):
        f = CubeFunction.from_factors([[1, 2], [3, 5], [7, 11]])
        for x in range(8):
            bits = [(x >> i) & 1 for i in range(3)]
            want = [1, 2][bits[0]] * [3, 5][bits[1]] * [7, 11][bits[2]]
            assert f(x) == want

    def test_mask_helpers(self):
        assert mask_from_coords([1, 3]) == 0b101
        assert coords_from_mask(0b101) == [1, 3]
        with pytest.raises(ValueError):
            mask_from_coords([0])


class TestSubcube:
    def test_half_cube(self):
        assert subcube_indicator(1, {1: 0}).values.tolist() == [2.0, 0.0]

    def test_whole_cube(self):
        assert subcube_indicator(2, {}).values.tolist() == [1.0] * 4

    def test_raw_point(self):
        assert subcube_indicator(2, {1: 0, 2: 1}, normalize=False).values.tolist() == [0, 0, 1, 0]

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            subcube_indicator(2, {3: 0})

    def test_count_and_mean(self):
        subs = list(all_subcubes(3))
        assert len(subs) == 27
        assert all(abs(subcube_indicator(3, s).mean() - 1) < 1e-15 for s in subs)


class TestNorm:
    def test_two_norm(self):
        assert norm(make_function(1, [2, 0]), 2) == pytest.approx(math.sqrt(2), rel=1e-15)

    def test_constant(self):
        f = make_function(3, [1.7] * 8)
        for q in (1, 2, 3, 7.5, math.inf):
            assert norm(f, q) == pytest.approx(1.7, rel=1e-14)

    def test_max(self):
        assert norm(make_function(1, [2, 0]), math.inf) == 2.0

    @settings(max_examples=50, deadline=None)
    @given(cube_and_noise())
    def test_monotone_in_q(self, case):
        f, _ = case
        chain = [norm(f, q) for q in (1, 2, 3, 5, math.inf)]
        assert all(a <= b * (1 + 1e-12) + 1e-300 for a, b in zip(chain, chain[1:]))

    def test_tiny_values_do_not_underflow(self):
        f = make_function(1, [6.5e-80, 1e-80])
        assert norm(f, 5) == pytest.approx(((6.5 ** 5 + 1) / 2) ** 0.2 * 1e-80, rel=1e-13)

    def test_bad_order(self):
        with pytest.raises(ValueError):
            norm(make_function(1, [1, 1]), 0.5)


class TestConditionalExpectation:
    def test_example(self):
        f = make_function(2, [4, 0, 0, 0])
        assert conditional_expectation(f, 0b01).values.tolist() == [2, 0, 2, 0]

    def test_full_and_empty(self):
        rng = np.random.default_rng(0)
        f = rand_f(rng, 4)
        assert conditional_expectation(f, 0b1111).allclose(f)
        assert np.allclose(conditional_expectation(f, 0).values, f.mean(), rtol=1e-14)

    def test_idempotent(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            f = rand_f(rng, 5)
            T = int(rng.integers(32))
            once = conditional_expectation(f, T)
            assert conditional_expectation(once, T).allclose(once, rtol=1e-14)
            assert once.mean() == pytest.approx(f.mean(), rel=1e-14)

    def test_bad_mask(self):
        with pytest.raises(ValueError):
            conditional_expectation(make_function(1, [1, 2]), 0b10)

    def test_table_matches_direct(self):
        rng = np.random.default_rng(2)
        for n in range(0, 6):
            f = rand_f(rng, n)
            for q in (1, 2, 3, 4.5, math.inf):
                table = conditional_norm_table(f, q)
                direct = [norm(conditional_expectation(f, T), q) for T in range(1 << n)]
                np.testing.assert_allclose(table, direct, rtol=1e-13)


class TestNoise:
    def test_example(self):
        f = make_function(1, [2, 0])
        np.testing.assert_allclose(apply_noise(f, [0.25]).values, [1.5, 0.5], rtol=1e-15)
        np.testing.assert_allclose(apply_noise_spectral(f, [0.25]).values, [1.5, 0.5], rtol=1e-15)

    def test_identity_and_total(self):
        rng = np.random.default_rng(3)
        f = rand_f(rng, 4)
        assert apply_noise(f, 0.0).allclose(f, rtol=0)
        np.testing.assert_allclose(apply_noise(f, 0.5).values, f.mean(), rtol=1e-14)

    def test_constant_fixed(self):
        f = make_function(2, [1, 1, 1, 1])
        np.testing.assert_allclose(apply_noise_spectral(f, [0.1, 0.3]).values, 1.0, rtol=1e-15)

    def test_bad_noise(self):
        f = make_function(1, [1, 2])
        with pytest.raises(ValueError):
            apply_noise(f, 0.6)
        with pytest.raises(ValueError):
            apply_noise(f, [0.1, 0.1])

    def test_single_coordinate(self):
        f = make_function(2, [4, 0, 0, 0])
        g = apply_noise_coordinate(f, 2, 0.25)
        np.testing.assert_allclose(g.values, [3, 0, 1, 0], rtol=1e-15)

    def test_walsh_involution(self):
        rng = np.random.default_rng(4)
        v = rng.normal(size=32)
        np.testing.assert_allclose(walsh_hadamard(walsh_hadamard(v, 5), 5) / 32, v, atol=1e-13)

    def test_spectral_oracle_500(self):
        rng = np.random.default_rng(5)
        for _ in range(500):
            n = int(rng.integers(0, 11))
            f = rand_f(rng, n)
            eps = rng.uniform(0, 0.5, n)
            a, b = apply_noise(f, eps).values, apply_noise_spectral(f, eps).values
            assert np.max(np.abs(a - b) / np.abs(a)) <= 1e-12

    @settings(max_examples=60, deadline=None)
    @given(cube_and_noise(), st.data())
    def test_semigroup(self, case, data):
        f, eps = case
        delta = np.array(data.draw(st.lists(st.floats(0, 0.5), min_size=f.n, max_size=f.n)))
        combined = (1 - (1 - 2 * eps) * (1 - 2 * delta)) / 2
        lhs = apply_noise(apply_noise(f, eps), delta).values
        rhs = apply_noise(f, combined).values
        np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12 * max(1.0, f.values.max()))

    @settings(max_examples=60, deadline=None)
    @given(cube_and_noise())
    def test_mean_and_sign_preserved(self, case):
        f, eps = case
        g = apply_noise(f, eps)
        assert norm(g, 1) == pytest.approx(norm(f, 1), rel=1e-12, abs=1e-12)
        assert np.all(g.values >= 0)

    def test_commutation(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            n = int(rng.integers(1, 6))
            f = rand_f(rng, n)
            T = int(rng.integers(1 << n))
            i = int(rng.integers(1, n + 1))
            e = float(rng.uniform(0, 0.5))
            lhs = conditional_expectation(apply_noise_coordinate(f, i, e), T)
            if T >> (i - 1) & 1:
                rhs = apply_noise_coordinate(conditional_expectation(f, T), i, e)
            else:
                rhs = conditional_expectation(f, T)
            assert lhs.allclose(rhs, rtol=1e-12)


class TestTextFormat:
    def test_round_trip(self, tmp_path):
        f = make_function(2, [0.1, 2.5, 1e-300, 3.0])
        path = tmp_path / "f.txt"
        write_function(f, path)
        g = read_function(path)
        assert g.n == 2 and np.array_equal(g.values, f.values)
        assert format_function(f).splitlines()[0] == "2"

    def test_parse_errors(self):
        with pytest.raises(ValueError):
            parse_function("")
        with pytest.raises(ValueError):
            parse_function("2\n1 2 3")
        with pytest.raises(ValueError):
            parse_function("1\n-1 2", strict=True)
