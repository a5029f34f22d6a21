import random
from fractions import Fraction

import pytest

from debruijn.linalg import Polynomial
from debruijn.specials import (
    BernoulliSpec,
    SkinDeepSpec,
    alpha_by_enumeration,
    alpha_poly,
    bernoulli_measure,
    bernoulli_rates,
    decay_ratio,
    endpoint_correlation,
    skin_deep_mu_bar,
    skin_deep_rates,
    transfer_matrix_power,
    truncated_two_point,
    two_point,
)
from debruijn.stationary import correlation, stationary_list, stationary_vector

F = Fraction
XS = [F(1, 3), F(1), F(3)]


def skin(n, L, x):
    return skin_deep_rates(SkinDeepSpec(x, n, L))


class TestBernoulli:
    def test_example(self):
        R = bernoulli_rates(BernoulliSpec((1, 3), 2))
        assert stationary_list(R) == [F(1, 16), F(3, 16), F(3, 16), F(9, 16)]

    def test_validation(self):
        with pytest.raises(ValueError):
            BernoulliSpec((1, 0), 2)

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("L", range(1, 5))
    def test_product_measure(self, n, L):
        rng = random.Random(f"bern:{n}:{L}")
        spec = BernoulliSpec(tuple(F(rng.randint(1, 9), rng.randint(1, 5)) for _ in range(n)), L)
        mu = stationary_vector(bernoulli_rates(spec))
        assert all(p == bernoulli_measure(w, spec) for w, p in mu.items())
        rho = spec.densities()
        for i in range(1, L + 1):
            for j in range(i + 1, L + 1):
                for a in range(1, n + 1):
                    for b in range(1, n + 1):
                        assert correlation([(i, a), (j, b)], bernoulli_rates(spec), mu) == rho[a - 1] * rho[b - 1]


class TestSkinDeepMeasure:
    @pytest.mark.parametrize("x,expected", [(F(3), [F(1, 8), F(3, 8), F(3, 8), F(1, 8)]), (F(1, 3), [F(3, 8), F(1, 8), F(1, 8), F(3, 8)])])
    def test_examples(self, x, expected):
        assert stationary_list(skin(2, 2, x)) == expected

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("L", range(1, 5))
    @pytest.mark.parametrize("x", XS)
    def test_closed_form_and_density(self, n, L, x):
        mu = stationary_vector(skin(n, L, x))
        assert all(skin_deep_mu_bar(w, x, n) == p for w, p in mu.items())
        R = skin(n, L, x)
        for i in range(1, L + 1):
            for a in range(1, n + 1):
                assert correlation([(i, a)], R, mu) == F(1, n)

    def test_x_one_is_uniform(self):
        assert set(stationary_list(skin(3, 3, 1))) == {F(1, 27)}


class TestAlpha:
    def test_two_two(self):
        x = Polynomial.variable()
        assert alpha_poly(2, 2, True) == 1 + x * x
        assert alpha_by_enumeration(2, 2, 1, 1) == 1 + x * x

    def test_printed_sign_is_wrong(self):
        printed = (Polynomial([1, -1]) ** 2 + Polynomial([1, -1]) ** 2) * F(1, 2)
        assert printed != alpha_by_enumeration(2, 2, 1, 1)

    def test_transfer_small_powers(self):
        one, zero, x = Polynomial([1]), Polynomial(), Polynomial.variable()
        assert transfer_matrix_power(2, 0) == [[one, zero], [zero, one]]
        assert transfer_matrix_power(2, 1) == [[one, x], [x, one]]
        assert transfer_matrix_power(2, 2) == [[1 + x * x, 2 * x], [2 * x, 1 + x * x]]

    @pytest.mark.parametrize("n", range(2, 5))
    @pytest.mark.parametrize("k", range(1, 7))
    def test_closed_form_matches_power_and_enumeration(self, n, k):
        power = transfer_matrix_power(n, k)
        assert alpha_poly(n, k, True) == power[0][0] == alpha_by_enumeration(n, k, 1, 1)
        assert alpha_poly(n, k, False) == power[0][1] == alpha_by_enumeration(n, k, 1, 2)

    def test_rejects_k_zero(self):
        with pytest.raises(ValueError):
            alpha_poly(2, 0, True)
        with pytest.raises(ValueError):
            transfer_matrix_power(2, -1)


class TestTwoPoint:
    def test_examples(self):
        assert two_point(2, 3, 1, 2, True) == F(1, 8)
        assert truncated_two_point(2, 3, 1) == F(-1, 8)
        assert truncated_two_point(2, 1, 4) == 0

    def test_bad_sites(self):
        with pytest.raises(ValueError):
            two_point(2, 3, 2, 2, True)
        with pytest.raises(ValueError):
            truncated_two_point(2, 3, 0)

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("x", XS)
    def test_enumeration_length_five(self, n, x):
        L = 5
        R = skin(n, L, x)
        mu = stationary_vector(R)
        for i in range(1, L + 1):
            for j in range(i + 1, L + 1):
                for a in range(1, n + 1):
                    for b in range(1, n + 1):
                        value = correlation([(i, a), (j, b)], R, mu)
                        assert value == two_point(n, x, i, j, a == b)
                        if a == b:
                            assert value - F(1, n * n) == truncated_two_point(n, x, j - i)

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("x", XS)
    def test_length_and_shift_invariance(self, n, x):
        long, short = skin(n, 5, x), skin(n, 4, x)
        mu_long, mu_short = stationary_vector(long), stationary_vector(short)
        for i, j in [(1, 2), (1, 4), (2, 3), (3, 4)]:
            for a, b in [(1, 1), (1, 2)]:
                value = correlation([(i, a), (j, b)], long, mu_long)
                assert value == correlation([(i, a), (j, b)], short, mu_short)
                assert value == correlation([(i + 1, a), (j + 1, b)], long, mu_long)

    @pytest.mark.parametrize("x", XS)
    def test_endpoint_from_alpha(self, x):
        R = skin(3, 4, x)
        for a, b in [(1, 1), (1, 3)]:
            assert correlation([(1, a), (4, b)], R) == endpoint_correlation(3, x, 4, a, b)

    def test_sign_pattern(self):
        small = [truncated_two_point(2, F(1, 3), g) for g in range(1, 6)]
        big = [truncated_two_point(3, F(3), g) for g in range(1, 6)]
        assert all(v > 0 for v in small)
        assert all((v > 0) == (g % 2 == 0) for g, v in enumerate(big, start=1))
        assert decay_ratio(2, 3) == F(-1, 2)
