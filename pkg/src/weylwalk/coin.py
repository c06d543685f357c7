"""Transition matrices of the 2D Weyl walk and their signed closure algebra.

The four unscaled matrices ``A_ab`` are labelled by two bits::

    R -> 00    L -> 11    U -> 10    D -> 01

and the single-step transition matrix is ``A_h = A_ab / 2``. Products of
the unscaled matrices never leave the eight-element set ``{+A_ab, -A_ab}``:

    A_ab A_cd = (-1)^((a xor c)(b xor d)) A_ad

so a whole path folds to a sign and the label ``(a_t, b_1)``.
"""
from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

import numpy as np

NU_TOLERANCE = 1e-12


class ParameterDomainError(ValueError):
    """Raised for parameters outside the walk's domain (e.g. ``|nu| != 1``)."""


class CoinLabel(NamedTuple):
    a: int
    b: int

    def __str__(self) -> str:
        return f"{self.a}{self.b}"


class Direction(enum.Enum):
    R = "R"
    L = "L"
    U = "U"
    D = "D"

    @property
    def label(self) -> CoinLabel:
        return _ENCODING[self]

    @property
    def displacement(self) -> tuple[int, int]:
        return _DISPLACEMENT[self]


_ENCODING = {
    Direction.R: CoinLabel(0, 0),
    Direction.L: CoinLabel(1, 1),
    Direction.U: CoinLabel(1, 0),
    Direction.D: CoinLabel(0, 1),
}
_DECODING = {v: k for k, v in _ENCODING.items()}
_DISPLACEMENT = {
    Direction.R: (1, 0),
    Direction.L: (-1, 0),
    Direction.U: (0, 1),
    Direction.D: (0, -1),
}

# Fixed application order inside a lattice step; keeps float sums reproducible.
DIRECTIONS = (Direction.R, Direction.L, Direction.U, Direction.D)
LABELS = tuple(CoinLabel(a, b) for a in (0, 1) for b in (0, 1))


def encode_direction(d: Direction) -> CoinLabel:
    return _ENCODING[Direction(d)]


def decode_label(label) -> Direction:
    a, b = label
    return _DECODING[CoinLabel(int(a), int(b))]


class SignedCoin(NamedTuple):
    """An element ``sign * A_label`` of the closed coin algebra."""

    sign: int
    label: CoinLabel

    @classmethod
    def of(cls, a: int, b: int, sign: int = 1) -> "SignedCoin":
        return cls(sign, CoinLabel(a, b))

    def __str__(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}{self.label}"


SIGNED_COINS = tuple(SignedCoin(s, lab) for s in (1, -1) for lab in LABELS)


def compose(x: SignedCoin, y: SignedCoin) -> SignedCoin:
    """Matrix product ``x @ y`` inside the closed algebra (``x`` acts later)."""
    xa, xb = x.label
    ya, yb = y.label
    sign = x.sign * y.sign
    if (xa ^ ya) & (xb ^ yb):
        sign = -sign
    return SignedCoin(sign, CoinLabel(xa, yb))


def check_nu(nu: complex) -> complex:
    nu = complex(nu)
    if not abs(abs(nu) - 1.0) <= NU_TOLERANCE:
        raise ParameterDomainError(f"nu must have unit modulus, got |nu|={abs(nu)!r}")
    return nu


def nu_from_angle(theta: float) -> complex:
    return cmath.exp(1j * theta)


def coin_matrix(label, nu: complex = 1.0) -> np.ndarray:
    """Unscaled matrix ``A_ab`` (twice the single-step transition matrix).

    >>> coin_matrix((0, 0), 1).real.tolist()
    [[1.0, 0.0], [-1.0, 0.0]]
    """
    nu = check_nu(nu)
    a, b = label
    if a == b:
        # R (00) and L (11)
        if a == 0:
            return np.array([[1, 0], [-nu, 0]], dtype=complex)
        return np.array([[0, nu.conjugate()], [0, 1]], dtype=complex)
    if a == 1:
        return np.array([[1, 0], [nu, 0]], dtype=complex)
    return np.array([[0, -nu.conjugate()], [0, 1]], dtype=complex)


def transition_matrix(direction: Direction, nu: complex = 1.0) -> np.ndarray:
    """Scaled single-step matrix ``A_h``."""
    return 0.5 * coin_matrix(encode_direction(direction), nu)


def signed_matrix(x: SignedCoin, nu: complex = 1.0) -> np.ndarray:
    return x.sign * coin_matrix(x.label, nu)


# -- exact symbolic entries -------------------------------------------------


@dataclass(frozen=True)
class Monomial:
    """Integer multiple of ``nu**power``; ``power=-1`` stands for ``nu*``."""

    coef: int
    power: int = 0

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.coef * other.coef, self.power + other.power)

    def conjugate(self) -> "Monomial":
        # |nu| = 1 so conj(nu**k) = nu**-k; coefficients are real integers
        return Monomial(self.coef, -self.power)

    def __call__(self, nu: complex) -> complex:
        return self.coef * complex(nu) ** self.power

    def __str__(self) -> str:
        sym = {0: "", 1: "*nu", -1: "*nu'"}.get(self.power, f"*nu^{self.power}")
        return f"{self.coef}{sym}"


def coin_matrix_exact(label) -> tuple[tuple[Monomial, Monomial], tuple[Monomial, Monomial]]:
    """``A_ab`` with entries from ``{0, +-1, +-nu, +-nu*}`` kept symbolic."""
    a, b = label
    zero, one = Monomial(0), Monomial(1)
    if (a, b) == (0, 0):
        return ((one, zero), (Monomial(-1, 1), zero))
    if (a, b) == (1, 0):
        return ((one, zero), (Monomial(1, 1), zero))
    if (a, b) == (1, 1):
        return ((zero, Monomial(1, -1)), (zero, one))
    return ((zero, Monomial(-1, -1)), (zero, one))


# -- path strings -----------------------------------------------------------


@dataclass(frozen=True, order=True)
class PathString:
    """Binary encoding of a ``t``-step lattice path.

    Bit ``j-1`` of ``alpha`` (resp. ``beta``) is ``a_j`` (resp. ``b_j``), with
    ``j=1`` the earliest step. The text form writes the latest step first,
    ``a_t b_t ... a_1 b_1``.
    """

    alpha: int
    beta: int
    t: int

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("t must be nonnegative")
        if self.alpha >> self.t or self.beta >> self.t or self.alpha < 0 or self.beta < 0:
            raise ValueError(f"alpha/beta do not fit in {self.t} bits")

    @classmethod
    def from_bits(cls, text: str) -> "PathString":
        """Parse ``"a_t b_t ... a_1 b_1"``; spaces and dots are ignored."""
        bits = [c for c in text if c in "01"]
        if len(bits) % 2:
            raise ValueError(f"odd number of bits in {text!r}")
        t = len(bits) // 2
        alpha = beta = 0
        for i in range(t):
            # pair i counted from the left is step t - i
            j = t - i
            alpha |= int(bits[2 * i]) << (j - 1)
            beta |= int(bits[2 * i + 1]) << (j - 1)
        return cls(alpha, beta, t)

    @classmethod
    def from_directions(cls, steps: Iterable) -> "PathString":
        """Build from directions listed in time order (earliest first)."""
        alpha = beta = 0
        t = 0
        for t, d in enumerate(steps, start=1):
            a, b = encode_direction(Direction(d))
            alpha |= a << (t - 1)
            beta |= b << (t - 1)
        return cls(alpha, beta, t)

    def a(self, j: int) -> int:
        return (self.alpha >> (j - 1)) & 1

    def b(self, j: int) -> int:
        return (self.beta >> (j - 1)) & 1

    def labels(self) -> Iterator[CoinLabel]:
        """Per-step labels, earliest first."""
        for j in range(1, self.t + 1):
            yield CoinLabel(self.a(j), self.b(j))

    def directions(self) -> list[Direction]:
        return [decode_label(lab) for lab in self.labels()]

    def __str__(self) -> str:
        return "".join(f"{self.a(j)}{self.b(j)}" for j in range(self.t, 0, -1))


def fold_path(s: PathString) -> SignedCoin:
    """Left-fold the path's coins in matrix order ``A_{h_t} ... A_{h_1}``."""
    if s.t < 1:
        raise ValueError("cannot fold an empty path")
    alpha, beta = s.alpha, s.beta
    acc = SignedCoin(1, CoinLabel(alpha & 1, beta & 1))
    for j in range(1, s.t):
        step = SignedCoin(1, CoinLabel((alpha >> j) & 1, (beta >> j) & 1))
        acc = compose(step, acc)
    return acc


def phase_closed(s: PathString) -> int:
    """Path phase bit, XOR over j of ``(a_{j-1} xor a_j) b_j`` with ``a_0 = a_t``."""
    if s.t < 1:
        raise ValueError("phase of an empty path is undefined")
    t = s.t
    mask = (1 << t) - 1
    # bit j-1 of `prev` holds a_{j-1}, cyclically
    prev = ((s.alpha << 1) & mask) | (s.alpha >> (t - 1))
    return ((s.alpha ^ prev) & s.beta).bit_count() & 1


def phase_recursive(s: PathString) -> int:
    """Same bit built step by step: ``phi_m = phi_{m-1} xor (a_{m-1} xor a_m)(b_1 xor b_m)``."""
    if s.t < 1:
        raise ValueError("phase of an empty path is undefined")
    phi = 0
    b1 = s.b(1)
    for m in range(2, s.t + 1):
        phi ^= (s.a(m - 1) ^ s.a(m)) & (b1 ^ s.b(m))
    return phi
