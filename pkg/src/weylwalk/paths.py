"""Brute-force path enumeration: the ground truth for coefficients and kernels.

A string ``(alpha, beta)`` connects ``(x', y', 0)`` to ``(x, y, t)`` iff
``t - |dx| - |dy|`` is even and nonnegative and the set-bit counts are::

    popcount(alpha) = (t - dx + dy) / 2
    popcount(beta)  = (t - dx - dy) / 2

so admissible strings are exactly the independent bit permutations of
``alpha`` and ``beta``. Everything here is exhaustive or refuses; nothing is
sampled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from weylwalk.coin import (
    DIRECTIONS,
    Direction,
    PathString,
    coin_matrix,
    decode_label,
    fold_path,
)

# Largest class the oracle will enumerate; 4**12 matches every class up to t=12.
DEFAULT_MAX_PATHS = 4 ** 12


class PathCapExceeded(RuntimeError):
    """The requested enumeration is larger than the configured cap."""


class Displacement(NamedTuple):
    dx: int
    dy: int
    t: int

    @property
    def admissible(self) -> bool:
        rest = self.t - abs(self.dx) - abs(self.dy)
        return rest >= 0 and rest % 2 == 0


class SetBitCounts(NamedTuple):
    alpha_hat: int
    beta_hat: int


class StepCounts(NamedTuple):
    r: int
    l: int
    u: int
    d: int


@dataclass(frozen=True)
class CoefficientQuad:
    """Exact signed class sums ``c_ab`` for one displacement."""

    c00: int
    c01: int
    c10: int
    c11: int
    inside_cone: bool = True

    def __getitem__(self, label) -> int:
        a, b = label
        return (self.c00, self.c01, self.c10, self.c11)[2 * a + b]

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.c00, self.c01, self.c10, self.c11)

    @classmethod
    def zero(cls) -> "CoefficientQuad":
        return cls(0, 0, 0, 0, inside_cone=False)


def admissible_counts(d: Displacement) -> SetBitCounts | None:
    """Set-bit counts of the strings joining ``d``, or ``None`` if none exist."""
    dx, dy, t = d
    if t < 0:
        raise ValueError(f"negative number of steps t={t}")
    if not Displacement(dx, dy, t).admissible:
        return None
    return SetBitCounts((t - dx + dy) // 2, (t - dx - dy) // 2)


def displacement_from_counts(alpha_hat: int, beta_hat: int, t: int) -> Displacement:
    return Displacement(t - alpha_hat - beta_hat, alpha_hat - beta_hat, t)


def cone(t: int) -> list[Displacement]:
    """All admissible displacements after ``t`` steps, ordered by ``(dx, dy)``."""
    return sorted(
        displacement_from_counts(ah, bh, t) for ah in range(t + 1) for bh in range(t + 1)
    )


def class_size(d: Displacement) -> int:
    d = Displacement(*d)
    counts = admissible_counts(d)
    if counts is None:
        return 0
    return math.comb(d.t, counts.alpha_hat) * math.comb(d.t, counts.beta_hat)


def fixed_popcount(n: int, k: int) -> Iterator[int]:
    """All ``n``-bit integers with ``k`` set bits, in increasing order."""
    if k < 0 or k > n:
        return
    if k == 0:
        yield 0
        return
    x = (1 << k) - 1
    limit = 1 << n
    while x < limit:
        yield x
        # Gosper's hack: next larger integer with the same popcount
        c = x & -x
        r = x + c
        x = (((r ^ x) >> 2) // c) | r


def enumerate_paths(d: Displacement, max_paths: int = DEFAULT_MAX_PATHS) -> Iterator[PathString]:
    """Yield every string joining ``d``, ordered by ``(alpha, beta)``.

    Raises :class:`PathCapExceeded` before yielding anything when the class
    holds more than ``max_paths`` strings.
    """
    d = Displacement(*d)
    counts = admissible_counts(d)
    if counts is None:
        return iter(())
    size = class_size(d)
    if size > max_paths:
        raise PathCapExceeded(
            f"{size} paths for {tuple(d)} exceed the cap of {max_paths}; raise max_paths"
        )
    return _generate(d.t, counts)


def _generate(t: int, counts: SetBitCounts) -> Iterator[PathString]:
    betas = list(fixed_popcount(t, counts.beta_hat))
    for alpha in fixed_popcount(t, counts.alpha_hat):
        for beta in betas:
            yield PathString(alpha, beta, t)


def step_counts(s: PathString) -> StepCounts:
    tally = {h: 0 for h in DIRECTIONS}
    for lab in s.labels():
        tally[decode_label(lab)] += 1
    return StepCounts(tally[Direction.R], tally[Direction.L], tally[Direction.U], tally[Direction.D])


def oracle_coefficients(d: Displacement, max_paths: int = DEFAULT_MAX_PATHS) -> CoefficientQuad:
    """Signed class sums by folding every admissible string through the algebra."""
    d = Displacement(*d)
    if not d.admissible:
        return CoefficientQuad.zero()
    if d.t == 0:
        raise ValueError("t=0 has no coin-class decomposition")
    sums = [0, 0, 0, 0]
    for s in enumerate_paths(d, max_paths):
        sign, (a, b) = fold_path(s)
        sums[2 * a + b] += sign
    return CoefficientQuad(*sums)


def oracle_kernel(d: Displacement, nu: complex = 1.0, max_paths: int = DEFAULT_MAX_PATHS) -> np.ndarray:
    """Sum of explicit products ``A_{h_t} ... A_{h_1}`` over all admissible paths.

    Uses plain complex matrix products of the scaled transition matrices, never
    the closure rule, so it checks the algebra independently.
    """
    d = Displacement(*d)
    if not d.admissible:
        return np.zeros((2, 2), dtype=complex)
    if d.t == 0:
        return np.eye(2, dtype=complex)
    counts = admissible_counts(d)
    if class_size(d) > max_paths:
        raise PathCapExceeded(f"{class_size(d)} paths for {tuple(d)} exceed the cap of {max_paths}")
    t = d.t
    # step matrices indexed by 2a + b
    mats = np.stack([0.5 * coin_matrix((a, b), nu) for a in (0, 1) for b in (0, 1)])
    alphas = np.fromiter(fixed_popcount(t, counts.alpha_hat), dtype=np.int64)
    betas = np.fromiter(fixed_popcount(t, counts.beta_hat), dtype=np.int64)
    alpha, beta = (g.ravel() for g in np.meshgrid(alphas, betas, indexing="ij"))
    total = np.zeros((2, 2), dtype=complex)
    for start in range(0, alpha.size, 1 << 16):
        al = alpha[start:start + (1 << 16)]
        be = beta[start:start + (1 << 16)]
        prod = np.broadcast_to(np.eye(2, dtype=complex), (al.size, 2, 2)).copy()
        for j in range(t):
            idx = 2 * ((al >> j) & 1) + ((be >> j) & 1)
            prod = mats[idx] @ prod
        total += prod.sum(axis=0)
    return total


def census(t: int) -> int:
    """Total number of strings over the whole cone; equals ``4**t``."""
    return sum(class_size(d) for d in cone(t))

