"""Closed-form coefficients ``c_ab`` and the exact propagator kernel.

Strings ``alpha`` are classified by a slot profile ``(p, a, a')``: ``p`` runs
of 1-bits, last bit ``a = a_t`` and first bit ``a' = a_1``. Such strings carry
``mu = 2p - a - a'`` free different-bit pairs, and the strings ``beta`` are
counted by how many of those pairs their 1-bits select. All arithmetic is on
Python integers (or ``Fraction`` for the terminating hypergeometric series).

Summation ranges are the safe supersets ``p in [0, t]``, ``k in [0, mu]``;
out-of-range binomials vanish.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from weylwalk.coin import LABELS, Monomial, check_nu
from weylwalk.paths import (
    CoefficientQuad,
    Displacement,
    admissible_counts,
    displacement_from_counts,
)

METHODS = ("double_sum", "hypergeometric")


class NonpositiveLowerParameter(ValueError):
    """The Pochhammer form would divide by zero; use the signed-binomial sum."""


@lru_cache(maxsize=1 << 16)
def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero for ``k < 0``, ``n < 0`` or ``k > n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


class SlotProfile(NamedTuple):
    p: int
    a: int
    a_first: int

    @property
    def mu(self) -> int:
        return 2 * self.p - self.a - self.a_first

    @property
    def different_pairs(self) -> int:
        # cyclic count of adjacent unequal bits in alpha
        return 2 * (self.p - self.a * self.a_first)


def u_count(a: int, a_first: int, p: int, alpha_hat: int, t: int) -> int:
    """Number of ``alpha`` strings with ends ``(a_t, a_1) = (a, a_first)`` and ``p`` runs of ones."""
    if 0 < alpha_hat < t:
        return binom(alpha_hat - 1, p - 1) * binom(t - alpha_hat - 1, p - a - a_first)
    if alpha_hat == t:
        # all ones: a single run with both ends set
        return int(a == 1 and a_first == 1 and p == 1)
    if alpha_hat == 0:
        return int(a == 0 and a_first == 0 and p == 0)
    return 0


def w_count(a: int, a_first: int, b: int, p: int, k: int, beta_hat: int, t: int) -> int:
    """Number of ``beta`` strings with ``b_1 = b`` selecting ``k`` of the ``mu`` free pairs.

    In the degenerate cases ``beta_hat in {0, t}`` this is the bare 0/1
    indicator; only one ``k`` is realised there (see :func:`forced_k`).
    """
    if 0 < beta_hat < t:
        mu = 2 * p - a - a_first
        return binom(mu, k) * binom(t - mu - 1, beta_hat - k - b)
    if beta_hat == 0:
        return int(b == 0)
    if beta_hat == t:
        return int(b == 1)
    return 0


def forced_k(mu: int, beta_hat: int, t: int) -> int | None:
    """The only selected-pair count available when ``beta`` is all zeros or all ones."""
    if beta_hat == 0:
        return 0
    if beta_hat == t:
        return mu
    return None


@dataclass(frozen=True)
class HypergeometricTerm:
    """Terminating ``2F1(upper; lower; z)`` with one nonpositive integer upper parameter."""

    upper: tuple[int, int]
    lower: int
    z: Fraction = field(default=Fraction(-1))

    def n_terms(self) -> int:
        stops = [-u for u in self.upper if u <= 0]
        if not stops:
            raise ValueError(f"series with upper parameters {self.upper} does not terminate")
        return min(stops) + 1

    def evaluate(self) -> Fraction:
        A, B = self.upper
        C = self.lower
        z = Fraction(self.z)
        # term n is num_n / den_n; each den_n divides the last one
        num, den = 1, 1
        terms = [(1, 1)]
        for n in range(self.n_terms() - 1):
            if C + n == 0:
                raise NonpositiveLowerParameter(f"(c)_n vanishes at n={n + 1} with c={C}")
            num *= (A + n) * (B + n) * z.numerator
            den *= (C + n) * (n + 1) * z.denominator
            terms.append((num, den))
        return Fraction(sum(tn * (den // td) for tn, td in terms), den)


def w_tilde(a: int, a_first: int, b: int, p: int, beta_hat: int, t: int,
            method: str = "sum") -> int:
    """Signed sum over ``k`` of :func:`w_count`, for ``0 < beta_hat < t``.

    ``method="sum"`` evaluates the signed binomial sum and is always defined.
    ``method="pochhammer"`` evaluates the terminating 2F1 form and raises
    :class:`NonpositiveLowerParameter` when its lower parameter is not positive.
    """
    mu = 2 * p - a - a_first
    parity = b * (a ^ a_first)
    if method == "sum":
        total = 0
        for k in range(0, mu + 1):
            term = binom(mu, k) * binom(t - mu - 1, beta_hat - k - b)
            total += -term if (k + parity) & 1 else term
        return total
    if method == "pochhammer":
        if mu < 0:
            return 0
        lower = t - beta_hat - mu + b
        if lower <= 0:
            raise NonpositiveLowerParameter(
                f"lower parameter {lower} <= 0 (t={t}, beta_hat={beta_hat}, mu={mu}, b={b})"
            )
        series = HypergeometricTerm((b - beta_hat, -mu), lower).evaluate()
        value = binom(t - mu - 1, beta_hat - b) * series
        if value.denominator != 1:
            raise ArithmeticError(f"non-integral hypergeometric count {value}")
        return -int(value) if parity else int(value)
    raise ValueError(f"unknown method {method!r}")


def _signed_w_sum(a: int, a_first: int, b: int, p: int, beta_hat: int, t: int, method: str) -> int:
    """Sum over selected-pair counts of the signed ``beta`` counts for one profile."""
    # a xor a' has the parity of mu, so the sum depends on the profile only through mu
    return _signed_w_sum_mu(2 * p - a - a_first, b, beta_hat, t, method)


@lru_cache(maxsize=1 << 16)
def _signed_w_sum_mu(mu: int, b: int, beta_hat: int, t: int, method: str) -> int:
    if mu < 0:
        return 0
    a, a_first, p = mu & 1, 0, (mu + (mu & 1)) // 2
    parity = b * (a ^ a_first)
    k0 = forced_k(mu, beta_hat, t)
    if k0 is not None:
        w = w_count(a, a_first, b, p, k0, beta_hat, t)
        return -w if (k0 + parity) & 1 else w
    if method == "double_sum":
        total = 0
        for k in range(0, mu + 1):
            w = w_count(a, a_first, b, p, k, beta_hat, t)
            total += -w if (k + parity) & 1 else w
        return total
    try:
        return w_tilde(a, a_first, b, p, beta_hat, t, method="pochhammer")
    except NonpositiveLowerParameter:
        return w_tilde(a, a_first, b, p, beta_hat, t, method="sum")


def coefficients(d: Displacement, method: str = "hypergeometric") -> CoefficientQuad:
    """Exact ``(c00, c01, c10, c11)`` for one displacement.

    ``double_sum`` sums over ``(p, a', k)`` explicitly; ``hypergeometric``
    collapses the ``k`` sum into the terminating 2F1 wherever its lower
    parameter is positive. Outside the cone the result is the zero quad with
    ``inside_cone=False``.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    d = Displacement(*d)
    counts = admissible_counts(d)
    if counts is None:
        return CoefficientQuad.zero()
    t = d.t
    if t == 0:
        raise ValueError("t=0 has no coin-class decomposition; use kernel()")
    ah, bh = counts
    out = []
    for a, b in LABELS:
        c = 0
        for p in range(0, t + 1):
            for a_first in (0, 1):
                u = u_count(a, a_first, p, ah, t)
                if u:
                    c += u * _signed_w_sum(a, a_first, b, p, bh, t, method)
        out.append(c)
    return CoefficientQuad(*out)


def coefficient_table(t: int, method: str = "hypergeometric") -> dict[Displacement, CoefficientQuad]:
    """Coefficients for the whole cone at once.

    The ``alpha`` and ``beta`` counts factorise, so the table is a set of
    integer matrix products ``U_{aa'} @ W_{aa'b}`` contracted over ``p``.
    """
    if t < 1:
        raise ValueError("coefficient tables start at t=1")
    n = t + 1
    quads = {}
    cols = {}
    for a, b in LABELS:
        acc = np.zeros((n, n), dtype=object)
        for a_first in (0, 1):
            U = np.array(
                [[u_count(a, a_first, p, ah, t) for p in range(n)] for ah in range(n)],
                dtype=object,
            )
            W = np.array(
                [[_signed_w_sum(a, a_first, b, p, bh, t, method) for bh in range(n)] for p in range(n)],
                dtype=object,
            )
            acc = acc + U.dot(W)
        cols[(a, b)] = acc
    for ah in range(n):
        for bh in range(n):
            d = displacement_from_counts(ah, bh, t)
            quads[d] = CoefficientQuad(*(int(cols[lab][ah, bh]) for lab in LABELS))
    return dict(sorted(quads.items()))


# -- kernel -----------------------------------------------------------------


@dataclass(frozen=True)
class Kernel:
    """Position-space block ``K(dx, dy, t)`` of the ``t``-step walk.

    ``entries`` holds the exact matrix ``2**t * K`` as monomials in ``nu``;
    ``matrix`` instantiates it numerically at ``nu``.
    """

    displacement: Displacement
    quad: CoefficientQuad | None
    entries: tuple[tuple[Monomial, Monomial], tuple[Monomial, Monomial]]
    nu: complex = 1.0

    @property
    def outside_cone(self) -> bool:
        return not self.displacement.admissible

    @property
    def scale_exponent(self) -> int:
        return self.displacement.t

    @property
    def matrix(self) -> np.ndarray:
        t = self.scale_exponent
        return np.array(
            [[math.ldexp(1.0, -t) * m(self.nu) for m in row] for row in self.entries],
            dtype=complex,
        )

    def at(self, nu: complex) -> "Kernel":
        return Kernel(self.displacement, self.quad, self.entries, check_nu(nu))


def entries_from_quad(quad: CoefficientQuad):
    """``sum_ab c_ab A_ab`` written entrywise."""
    c00, c01, c10, c11 = quad.as_tuple()
    return (
        (Monomial(c00 + c10, 0), Monomial(c11 - c01, -1)),
        (Monomial(c10 - c00, 1), Monomial(c11 + c01, 0)),
    )


_ZERO_ENTRIES = ((Monomial(0), Monomial(0)), (Monomial(0), Monomial(0)))
_IDENTITY_ENTRIES = ((Monomial(1), Monomial(0)), (Monomial(0), Monomial(1)))


def kernel_from_quad(d: Displacement, quad: CoefficientQuad | None, nu: complex = 1.0) -> Kernel:
    d = Displacement(*d)
    nu = check_nu(nu)
    if not d.admissible:
        return Kernel(d, CoefficientQuad.zero(), _ZERO_ENTRIES, nu)
    if d.t == 0:
        return Kernel(d, None, _IDENTITY_ENTRIES, nu)
    return Kernel(d, quad, entries_from_quad(quad), nu)


def kernel(d: Displacement, nu: complex = 1.0, method: str = "hypergeometric") -> Kernel:
    d = Displacement(*d)
    if d.t < 0:
        raise ValueError("t must be nonnegative")
    if not d.admissible or d.t == 0:
        return kernel_from_quad(d, None, nu)
    return kernel_from_quad(d, coefficients(d, method), nu)


def kernel_table(t: int, nu: complex = 1.0, method: str = "hypergeometric",
                 quads: dict[Displacement, CoefficientQuad] | None = None) -> dict[Displacement, Kernel]:
    """Kernels for every admissible displacement at ``t``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        d = Displacement(0, 0, 0)
        return {d: kernel_from_quad(d, None, nu)}
    if quads is None:
        quads = coefficient_table(t, method)
    return {d: kernel_from_quad(d, q, nu) for d, q in quads.items()}


def exact_gram(quads: dict[Displacement, CoefficientQuad]) -> list[list[dict[int, int]]]:
    """``sum_d (2^t K)^dagger (2^t K)`` as Laurent polynomials in ``nu`` (power -> coefficient)."""
    gram = [[{}, {}], [{}, {}]]
    for quad in quads.values():
        m = entries_from_quad(quad)
        for i in range(2):
            for j in range(2):
                acc = gram[i][j]
                for r in range(2):
                    term = m[r][i].conjugate() * m[r][j]
                    if term.coef:
                        acc[term.power] = acc.get(term.power, 0) + term.coef
    return [[{k: v for k, v in cell.items() if v} for cell in row] for row in gram]


def is_exactly_unitary(t: int, quads: dict[Displacement, CoefficientQuad] | None = None) -> bool:
    """True iff the kernels at ``t`` satisfy ``sum_d K^dagger K = I`` identically in ``nu``."""
    if t == 0:
        return True
    if quads is None:
        quads = coefficient_table(t)
    scale = 4 ** t
    return exact_gram(quads) == [[{0: scale}, {}], [{}, {0: scale}]]
