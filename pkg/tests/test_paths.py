import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from weylwalk.coin import LABELS, coin_matrix
from weylwalk.paths import (
    CoefficientQuad,
    Displacement,
    PathCapExceeded,
    SetBitCounts,
    admissible_counts,
    census,
    class_size,
    cone,
    enumerate_paths,
    fixed_popcount,
    oracle_coefficients,
    oracle_kernel,
    step_counts,
)


def brute_force_strings(d):
    """All 4**t raw strings filtered by walking the path."""
    dx, dy, t = d
    out = []
    for alpha in range(1 << t):
        for beta in range(1 << t):
            x = y = 0
            for j in range(t):
                a, b = (alpha >> j) & 1, (beta >> j) & 1
                x += {(0, 0): 1, (1, 1): -1}.get((a, b), 0)
                y += {(1, 0): 1, (0, 1): -1}.get((a, b), 0)
            if (x, y) == (dx, dy):
                out.append((alpha, beta))
    return out


class TestAdmissibleCounts:
    def test_examples(self):
        assert admissible_counts((1, 0, 3)) == SetBitCounts(1, 1)
        assert admissible_counts((0, 0, 3)) is None
        assert admissible_counts((-1, -2, 3)) == SetBitCounts(1, 3)

    def test_outside_cone(self):
        assert admissible_counts((3, 1, 2)) is None

    def test_negative_t(self):
        with pytest.raises(ValueError):
            admissible_counts((0, 0, -1))

    @given(st.integers(-12, 12), st.integers(-12, 12), st.integers(0, 12))
    def test_counts_invariants(self, dx, dy, t):
        counts = admissible_counts((dx, dy, t))
        assert (counts is not None) == Displacement(dx, dy, t).admissible
        if counts is not None:
            ah, bh = counts
            assert 0 <= ah <= t and 0 <= bh <= t
            assert ah - bh == dy and ah + bh == t - dx


class TestEnumeration:
    def test_examples(self):
        assert len(list(enumerate_paths((0, 0, 2)))) == 4
        (only,) = enumerate_paths((1, 0, 1))
        assert (only.alpha, only.beta) == (0, 0)
        (only,) = enumerate_paths((2, 0, 2))
        assert (only.alpha, only.beta, str(only)) == (0, 0, "0000")

    def test_inadmissible_is_empty(self):
        assert list(enumerate_paths((1, 0, 2))) == []

    def test_deterministic_order(self):
        paths = list(enumerate_paths((0, 0, 4)))
        keys = [(s.alpha, s.beta) for s in paths]
        assert keys == sorted(keys)
        assert paths == list(enumerate_paths((0, 0, 4)))

    def test_cap_refuses(self):
        with pytest.raises(PathCapExceeded):
            enumerate_paths((0, 0, 6), max_paths=100)
        assert len(list(enumerate_paths((0, 0, 6), max_paths=10 ** 6))) == class_size((0, 0, 6))

    def test_sparse_t16_class_is_enumerable(self):
        d = (12, 2, 16)  # alpha_hat=3, beta_hat=1
        assert sum(1 for _ in enumerate_paths(d)) == math.comb(16, 3) * math.comb(16, 1)

    @pytest.mark.parametrize("t", range(0, 5))
    def test_matches_raw_brute_force(self, t):
        for d in cone(t):
            got = sorted((s.alpha, s.beta) for s in enumerate_paths(d))
            assert got == brute_force_strings(d)

    @pytest.mark.parametrize("t", range(0, 11))
    def test_census(self, t):
        total = 0
        for d in cone(t):
            counts = admissible_counts(d)
            n = sum(1 for _ in enumerate_paths(d)) if t <= 8 else class_size(d)
            assert n == math.comb(t, counts.alpha_hat) * math.comb(t, counts.beta_hat)
            total += n
        assert total == 4 ** t == census(t)

    def test_cone_size(self):
        assert [len(cone(t)) for t in range(5)] == [1, 4, 9, 16, 25]

    @given(st.integers(0, 14), st.integers(0, 14))
    def test_fixed_popcount(self, n, k):
        got = list(fixed_popcount(n, k))
        assert got == [x for x in range(1 << n) if bin(x).count("1") == k]

    @pytest.mark.parametrize("t", range(1, 7))
    def test_step_counts_reconstruct_displacement(self, t):
        for d in cone(t):
            ah, bh = admissible_counts(d)
            for s in enumerate_paths(d):
                r, l, u, dn = step_counts(s)
                assert r + l + u + dn == t
                assert (r - l, u - dn) == (d.dx, d.dy)
                assert (l + u, l + dn) == (ah, bh)


class TestOracleCoefficients:
    def test_examples(self):
        assert oracle_coefficients((1, 0, 1)).as_tuple() == (1, 0, 0, 0)
        assert oracle_coefficients((0, 1, 1)).as_tuple() == (0, 0, 1, 0)
        assert oracle_coefficients((0, 0, 2)).as_tuple() == (-1, -1, -1, -1)

    def test_outside_cone(self):
        q = oracle_coefficients((3, 1, 2))
        assert q == CoefficientQuad.zero() and not q.inside_cone

    @pytest.mark.parametrize("t", range(1, 9))
    def test_unsigned_class_sizes(self, t):
        # |c_ab| is bounded by the class size and parities match it
        for d in cone(t):
            q = oracle_coefficients(d)
            size = class_size(d)
            assert sum(abs(c) for c in q.as_tuple()) <= size
            assert sum(q.as_tuple()) % 2 == size % 2


class TestOracleKernel:
    def test_single_step(self):
        np.testing.assert_allclose(oracle_kernel((1, 0, 1), 1), 0.5 * np.array([[1, 0], [-1, 0]]))

    @pytest.mark.parametrize("nu", [1, 1j, np.exp(2.1j)])
    def test_return_after_two_steps(self, nu):
        np.testing.assert_allclose(oracle_kernel((0, 0, 2), nu), -0.5 * np.eye(2), atol=1e-15)

    def test_outside_cone(self):
        np.testing.assert_array_equal(oracle_kernel((3, 1, 2)), np.zeros((2, 2)))

    @pytest.mark.parametrize("nu", [1, 1j])
    def test_consistent_with_oracle_coefficients(self, nu, oracle_quads):
        for d, q in oracle_quads.items():
            want = sum(q[lab] * coin_matrix(lab, nu) for lab in LABELS) / 2 ** d.t
            np.testing.assert_allclose(oracle_kernel(d, nu), want, rtol=0, atol=1e-12)
