import cmath
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weylwalk.coin import LABELS, coin_matrix
from weylwalk.paths import (
    CoefficientQuad,
    Displacement,
    admissible_counts,
    class_size,
    cone,
    oracle_coefficients,
    oracle_kernel,
)
from weylwalk.propagator import (
    HypergeometricTerm,
    NonpositiveLowerParameter,
    SlotProfile,
    binom,
    coefficient_table,
    coefficients,
    exact_gram,
    is_exactly_unitary,
    kernel,
    kernel_table,
    u_count,
    w_count,
    w_tilde,
)


def runs_of_ones(alpha: int, t: int) -> int:
    bits = [(alpha >> j) & 1 for j in range(t)]
    return sum(1 for j in range(t) if bits[j] and (j == 0 or not bits[j - 1]))


def alpha_profiles(t: int, alpha_hat: int) -> Counter:
    """Brute-force census of (a_t, a_1, p) over alpha strings with alpha_hat ones."""
    out = Counter()
    for alpha in range(1 << t):
        if bin(alpha).count("1") == alpha_hat:
            out[((alpha >> (t - 1)) & 1, alpha & 1, runs_of_ones(alpha, t))] += 1
    return out


def beta_selections(alpha: int, t: int, beta_hat: int, b: int) -> Counter:
    """Brute-force count of beta strings by number of selected free pairs.

    Pair j (2 <= j <= t) is (a_{j-1}, a_j), selected when b_j = 1.
    """
    out = Counter()
    for beta in range(1 << t):
        if bin(beta).count("1") != beta_hat or (beta & 1) != b:
            continue
        k = sum(1 for j in range(1, t) if ((alpha >> j) ^ (alpha >> (j - 1))) & 1 and (beta >> j) & 1)
        out[k] += 1
    return out


def naive_2f1(A, B, C, z, n_max):
    """Pochhammer-series definition, term by term."""
    total = Fraction(0)
    for n in range(n_max + 1):
        num = math.prod(A + i for i in range(n)) * math.prod(B + i for i in range(n))
        den = math.prod(C + i for i in range(n)) * math.factorial(n)
        total += Fraction(num, den) * Fraction(z) ** n
    return total


class TestBinom:
    def test_out_of_range_is_zero(self):
        assert binom(3, -1) == binom(3, 4) == binom(-1, 0) == 0
        assert binom(0, 0) == 1

    @given(st.integers(0, 200), st.integers(0, 200))
    def test_matches_math_comb(self, n, k):
        assert binom(n, k) == (math.comb(n, k) if k <= n else 0)


class TestSlotProfile:
    def test_free_pairs(self):
        assert SlotProfile(2, 1, 1).mu == 2
        assert SlotProfile(1, 0, 1).mu == 1
        assert SlotProfile(2, 1, 1).different_pairs == 2

    @pytest.mark.parametrize("t", range(2, 9))
    def test_different_pair_count(self, t):
        for alpha in range(1 << t):
            a, a1, p = (alpha >> (t - 1)) & 1, alpha & 1, runs_of_ones(alpha, t)
            cyclic = sum(((alpha >> j) ^ (alpha >> ((j - 1) % t))) & 1 for j in range(t))
            assert cyclic == SlotProfile(p, a, a1).different_pairs


class TestUCount:
    def test_examples(self):
        assert u_count(0, 1, 1, alpha_hat=1, t=2) == 1
        assert u_count(1, 1, 2, alpha_hat=2, t=3) == 1
        assert u_count(1, 1, 1, alpha_hat=3, t=3) == 1

    def test_degenerate_profiles_fixed(self):
        assert u_count(1, 1, 2, alpha_hat=3, t=3) == 0
        assert u_count(0, 0, 0, alpha_hat=0, t=4) == 1
        assert u_count(0, 0, 1, alpha_hat=0, t=4) == 0
        assert u_count(1, 0, 1, alpha_hat=4, t=4) == 0

    @pytest.mark.parametrize("t", range(1, 10))
    def test_matches_brute_force(self, t):
        for ah in range(t + 1):
            census = alpha_profiles(t, ah)
            for a in (0, 1):
                for a1 in (0, 1):
                    for p in range(t + 1):
                        assert u_count(a, a1, p, ah, t) == census[(a, a1, p)], (t, ah, a, a1, p)


class TestWCount:
    def test_examples(self):
        assert w_count(0, 1, 0, p=1, k=1, beta_hat=1, t=2) == 1
        for a, a1, p, k in [(0, 0, 0, 0), (1, 1, 2, 3), (0, 1, 1, 0)]:
            assert w_count(a, a1, 1, p, k, beta_hat=5, t=5) == 1
            assert w_count(a, a1, 1, p, k, beta_hat=0, t=5) == 0

    @pytest.mark.parametrize("t", range(1, 9))
    def test_matches_brute_force(self, t):
        # one representative alpha per profile suffices: the count depends on mu only
        seen = set()
        for alpha in range(1 << t):
            a, a1, p = (alpha >> (t - 1)) & 1, alpha & 1, runs_of_ones(alpha, t)
            if (a, a1, p) in seen:
                continue
            seen.add((a, a1, p))
            mu = 2 * p - a - a1
            for bh in range(t + 1):
                for b in (0, 1):
                    census = beta_selections(alpha, t, bh, b)
                    for k in range(0, mu + 1):
                        got = w_count(a, a1, b, p, k, bh, t)
                        if bh in (0, t):
                            forced = 0 if bh == 0 else mu
                            got *= int(k == forced)
                        assert got == census[k], (alpha, bh, b, k)


class TestWTilde:
    def test_mu_zero(self):
        assert w_tilde(0, 0, 0, 0, beta_hat=1, t=3) == 2

    def test_single_free_pair(self):
        assert w_tilde(0, 1, 0, 1, beta_hat=1, t=2) == -1

    def test_nonpositive_lower_parameter(self):
        # t=4, beta_hat=3, mu=2, b=0 -> lower = -1
        with pytest.raises(NonpositiveLowerParameter):
            w_tilde(0, 0, 0, 1, beta_hat=3, t=4, method="pochhammer")
        assert isinstance(w_tilde(0, 0, 0, 1, beta_hat=3, t=4), int)

    def test_sum_equals_pochhammer_sweep(self):
        checked = 0
        for t in range(2, 13):
            for bh in range(1, t):
                for p in range(0, t + 1):
                    for a in (0, 1):
                        for a1 in (0, 1):
                            for b in (0, 1):
                                mu = 2 * p - a - a1
                                if mu < 0 or t - bh - mu + b <= 0:
                                    continue
                                assert (w_tilde(a, a1, b, p, bh, t, "sum")
                                        == w_tilde(a, a1, b, p, bh, t, "pochhammer"))
                                checked += 1
        assert checked > 1000

    @settings(max_examples=200)
    @given(st.integers(0, 12), st.integers(0, 12), st.integers(1, 30))
    def test_series_matches_definition(self, m, mu, c):
        term = HypergeometricTerm((-m, -mu), c)
        assert term.evaluate() == naive_2f1(-m, -mu, c, -1, min(m, mu))


class TestCoefficients:
    @pytest.mark.parametrize("method", ["double_sum", "hypergeometric"])
    def test_examples(self, method):
        assert coefficients((1, 0, 1), method).as_tuple() == (1, 0, 0, 0)
        assert coefficients((0, 0, 2), method).as_tuple() == (-1, -1, -1, -1)
        assert coefficients((2, 0, 2), method).as_tuple() == (1, 0, 0, 0)

    def test_outside_cone(self):
        q = coefficients((5, 0, 3))
        assert q.as_tuple() == (0, 0, 0, 0) and not q.inside_cone

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            coefficients((1, 0, 1), "monte_carlo")

    def test_t_zero(self):
        with pytest.raises(ValueError):
            coefficients((0, 0, 0))

    @pytest.mark.parametrize("t", range(1, 11))
    def test_oracle_equivalence(self, t, oracle_quads):
        table = coefficient_table(t)
        for d in cone(t):
            want = oracle_quads[d]
            assert coefficients(d, "double_sum") == want
            assert coefficients(d, "hypergeometric") == want
            assert table[d] == want

    @pytest.mark.parametrize("d", [(10, 2, 14), (-9, 1, 14), (0, 12, 14), (3, -9, 14), (11, 0, 13)])
    def test_spot_checks_beyond_t10(self, d):
        assert class_size(d) < 10 ** 5
        assert coefficients(d, "double_sum") == coefficients(d) == oracle_coefficients(d)

    @pytest.mark.parametrize("t", [11, 12, 20, 33])
    def test_table_matches_pointwise(self, t):
        table = coefficient_table(t, "double_sum")
        assert table == coefficient_table(t)
        for d in cone(t)[:: max(1, t // 3)]:
            assert coefficients(d) == table[d]

    @pytest.mark.parametrize("t", range(1, 25))
    def test_magnitude_bound(self, t, quad_tables):
        for d, q in quad_tables[t].items():
            ah, bh = admissible_counts(d)
            bound = math.comb(t, ah) * math.comb(t, bh)
            assert all(abs(c) <= bound for c in q.as_tuple())

    @pytest.mark.parametrize("t", range(1, 30))
    def test_degenerate_alpha(self, t, quad_tables):
        # alpha all zeros: phi = 0 and a_t = 0
        for bh in range(t + 1):
            d = Displacement(t - bh, -bh, t)
            q = quad_tables[t][d]
            assert (q.c00, q.c01) == (binom(t - 1, bh), binom(t - 1, bh - 1))
            assert (q.c10, q.c11) == (0, 0)


class TestKernel:
    def test_first_step_is_transition_matrices(self):
        nu = cmath.exp(0.8j)
        table = kernel_table(1, nu)
        assert sorted(table) == sorted([(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)])
        for d, (a, b) in [((1, 0, 1), (0, 0)), ((-1, 0, 1), (1, 1)), ((0, 1, 1), (1, 0)), ((0, -1, 1), (0, 1))]:
            np.testing.assert_allclose(table[d].matrix, 0.5 * coin_matrix((a, b), nu), atol=1e-15)

    @pytest.mark.parametrize("nu", [1, 1j, cmath.exp(0.123j)])
    def test_return_after_two_steps(self, nu):
        k = kernel((0, 0, 2), nu)
        assert k.quad.as_tuple() == (-1, -1, -1, -1)
        np.testing.assert_allclose(k.matrix, -0.5 * np.eye(2), atol=1e-15)

    def test_outside_cone(self):
        k = kernel((5, 0, 3))
        assert k.outside_cone
        np.testing.assert_array_equal(k.matrix, np.zeros((2, 2)))

    def test_t_zero_identity(self):
        table = kernel_table(0)
        assert list(table) == [(0, 0, 0)]
        np.testing.assert_array_equal(table[(0, 0, 0)].matrix, np.eye(2))

    @pytest.mark.parametrize("t", range(1, 9))
    def test_structural_formula(self, t):
        nu = cmath.exp(2.2j)
        for d, k in kernel_table(t, nu).items():
            want = sum(k.quad[lab] * coin_matrix(lab, nu) for lab in LABELS) / 2 ** t
            np.testing.assert_allclose(k.matrix, want, atol=1e-15)

    @pytest.mark.parametrize("t", range(1, 8))
    def test_matches_oracle_kernel(self, t):
        for nu in (1, 1j):
            for d, k in kernel_table(t, nu).items():
                np.testing.assert_allclose(k.matrix, oracle_kernel(d, nu), atol=1e-12)

    def test_exact_gram_small(self):
        assert exact_gram(coefficient_table(3)) == [[{0: 64}, {}], [{}, {0: 64}]]

    def test_numeric_unitarity(self):
        nu = cmath.exp(0.9j)
        for t in (5, 17, 40):
            gram = sum(k.matrix.conj().T @ k.matrix for k in kernel_table(t, nu).values())
            np.testing.assert_allclose(gram, np.eye(2), atol=1e-12)

    def test_broken_quad_not_unitary(self):
        quads = dict(coefficient_table(4))
        d = next(iter(quads))
        q = quads[d]
        quads[d] = CoefficientQuad(q.c00 + 1, q.c01, q.c10, q.c11)
        assert not is_exactly_unitary(4, quads)
