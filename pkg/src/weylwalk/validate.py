"""Cross-validation suites run by ``weylwalk validate``.

Each suite returns a :class:`SuiteResult`; a failing suite carries the first
counterexample found.
"""
from __future__ import annotations

import cmath
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from weylwalk import coin
from weylwalk.coin import (
    SIGNED_COINS,
    PathString,
    fold_path,
    phase_closed,
    phase_recursive,
    signed_matrix,
)
from weylwalk.paths import DEFAULT_MAX_PATHS, census, cone, oracle_coefficients, oracle_kernel
from weylwalk.propagator import coefficient_table, coefficients, is_exactly_unitary, kernel, kernel_table
from weylwalk.simulator import (
    FieldState,
    evolve_direct,
    evolve_fourier,
    evolve_kernel,
    fold_periodic,
    group_speed,
    k_grid,
    omega,
    random_state,
)

CLOSURE_NUS = (1.0, 1j, cmath.exp(1j * math.pi / 5))


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}" + (f": {self.detail}" if self.detail else "")


def _coefficients_for_t(args) -> str | None:
    t, max_paths = args
    table = coefficient_table(t)
    for d in cone(t):
        expected = oracle_coefficients(d, max_paths)
        for label, got in (
            ("double_sum", coefficients(d, "double_sum")),
            ("hypergeometric", coefficients(d, "hypergeometric")),
            ("table", table[d]),
        ):
            if got != expected:
                return (f"counterexample at (dx,dy,t)={tuple(d)} [{label}]: "
                        f"expected {expected.as_tuple()} got {got.as_tuple()}")
    return None


def check_coefficients(t_max: int, max_paths: int = DEFAULT_MAX_PATHS, threads: int = 1) -> SuiteResult:
    """Closed forms against brute-force enumeration, exact integers."""
    jobs = [(t, max_paths) for t in range(1, t_max + 1)]
    if threads > 1:
        with ProcessPoolExecutor(threads) as pool:
            results = list(pool.map(_coefficients_for_t, jobs))
    else:
        results = [_coefficients_for_t(j) for j in jobs]
    for r in results:
        if r is not None:
            return SuiteResult("coefficients", False, r)
    return SuiteResult("coefficients", True, f"t<={t_max}")


def check_closure(tol: float = 1e-14) -> SuiteResult:
    for nu in CLOSURE_NUS:
        for x, y in itertools.product(SIGNED_COINS, repeat=2):
            want = signed_matrix(x, nu) @ signed_matrix(y, nu)
            got = signed_matrix(coin.compose(x, y), nu)
            err = np.abs(want - got).max()
            if not err < tol:
                return SuiteResult("closure", False, f"{x} * {y} at nu={nu:.3f}: error {err:.2e}")
    return SuiteResult("closure", True, "64 products x 3 nu")


def check_phase(t_max: int) -> SuiteResult:
    for t in range(1, t_max + 1):
        for alpha in range(1 << t):
            for beta in range(1 << t):
                s = PathString(alpha, beta, t)
                sign, label = fold_path(s)
                fold_bit = 0 if sign > 0 else 1
                phi = phase_closed(s)
                if not (phi == phase_recursive(s) == fold_bit) or label != (s.a(t), s.b(1)):
                    return SuiteResult("phase", False, f"string {s}: closed={phi} "
                                       f"recursive={phase_recursive(s)} fold={sign:+d}{label}")
    return SuiteResult("phase", True, f"all strings t<={t_max}")


def check_kernel_oracle(t_max: int, max_paths: int = DEFAULT_MAX_PATHS, tol: float = 1e-12) -> SuiteResult:
    for t in range(1, t_max + 1):
        for nu in (1.0, 1j):
            for d in cone(t):
                err = np.abs(kernel(d, nu).matrix - oracle_kernel(d, nu, max_paths)).max()
                if not err < tol:
                    return SuiteResult("kernel-oracle", False, f"{tuple(d)} nu={nu}: error {err:.2e}")
    return SuiteResult("kernel-oracle", True, f"t<={t_max}")


def delta_kernel_error(t: int, nu: complex, spinor=(1, 0)) -> float:
    """Max deviation between kernel and direct evolution of a point state."""
    size = 2 * t + 3
    delta = FieldState.delta(size, size, spinor)
    direct = evolve_direct(delta, t, nu, boundary="padded")
    conv = evolve_kernel(FieldState.delta(1, 1, spinor), t, nu)
    return float(np.abs(fold_periodic(conv, size, size, direct.offset).psi - direct.psi).max())


def check_unitarity(t_max: int, tol: float = 1e-12) -> SuiteResult:
    nu = cmath.exp(0.3j)
    for t in range(0, t_max + 1):
        if not is_exactly_unitary(t):
            return SuiteResult("unitarity", False, f"sum K^dagger K != I at t={t}")
        for spinor in ((1, 0), (0, 1)):
            err = delta_kernel_error(t, nu, spinor)
            if not err < tol:
                return SuiteResult("unitarity", False, f"delta evolution t={t}: error {err:.2e}")
    return SuiteResult("unitarity", True, f"exact t<={t_max}")


def triangle_errors(state: FieldState, t: int, nu: complex) -> tuple[float, float, float]:
    """Pairwise max deviations (direct/fourier, direct/kernel, fourier/kernel) on a periodic window."""
    direct = evolve_direct(state, t, nu, boundary="periodic")
    fourier = evolve_fourier(state, t, nu)
    conv = fold_periodic(evolve_kernel(state, t, nu), state.width, state.height, state.offset)
    return (
        float(np.abs(direct.psi - fourier.psi).max()),
        float(np.abs(direct.psi - conv.psi).max()),
        float(np.abs(fourier.psi - conv.psi).max()),
    )


def check_triangle(t_max: int, tol: float = 1e-10, seed: int = 0) -> SuiteResult:
    rng = np.random.default_rng(seed)
    size = max(8, 2 * t_max + 1)
    nu = cmath.exp(1.1j)
    state = random_state(size, size, rng)
    for t in range(0, t_max + 1):
        errs = triangle_errors(state, t, nu)
        if not max(errs) < tol:
            return SuiteResult("triangle", False, f"t={t}: errors {errs}")
    return SuiteResult("triangle", True, f"{size}x{size} t<={t_max}")


def outside_support(state: FieldState, t: int) -> np.ndarray:
    X, Y = state.coords()
    rest = t - np.abs(X) - np.abs(Y)
    return (rest < 0) | (rest % 2 != 0)


def check_causality(t_max: int) -> SuiteResult:
    size = 2 * t_max + 3
    state = FieldState.delta(size, size, (0.6, 0.8j))
    for t in range(0, t_max + 1):
        mask = outside_support(state, t)
        if np.any(state.psi[mask] != 0):
            return SuiteResult("causality", False, f"nonzero amplitude outside the cone at t={t}")
        state = evolve_direct(state, 1, boundary="padded") if t < t_max else state
    return SuiteResult("causality", True, f"t<={t_max}")


def check_census(t_max: int) -> SuiteResult:
    for t in range(0, t_max + 1):
        if census(t) != 4 ** t:
            return SuiteResult("census", False, f"t={t}: {census(t)} != {4 ** t}")
    return SuiteResult("census", True, f"t<={t_max}")


def check_dispersion(eps: float = 1e-3, tol: float = 1e-6) -> SuiteResult:
    target = 1 / math.sqrt(2)
    for theta in np.linspace(0, 2 * math.pi, 16, endpoint=False):
        v = group_speed(theta, eps)
        if not abs(v - target) < tol:
            return SuiteResult("dispersion", False, f"direction {theta:.3f}: speed {v!r}")
    pts = k_grid(65)
    resid = 2 * np.cos(omega(pts[:, 0], pts[:, 1])) - np.cos(pts[:, 0]) - np.cos(pts[:, 1])
    if not np.abs(resid).max() < 1e-12:
        return SuiteResult("dispersion", False, f"trace identity residual {np.abs(resid).max():.2e}")
    return SuiteResult("dispersion", True, "weyl limit 1/sqrt(2)")


def run_all(t_max: int, max_paths: int = DEFAULT_MAX_PATHS, threads: int = 1,
            report: Callable[[str], None] | None = None) -> list[SuiteResult]:
    suites = [
        lambda: check_coefficients(t_max, max_paths, threads),
        check_closure,
        lambda: check_phase(min(t_max, 8)),
        lambda: check_kernel_oracle(t_max, max_paths),
        lambda: check_unitarity(t_max),
        lambda: check_triangle(t_max),
        lambda: check_causality(t_max),
        lambda: check_census(max(t_max, 16)),
        check_dispersion,
    ]
    results = []
    for suite in suites:
        res = suite()
        results.append(res)
        if report is not None:
            report(res.line())
    return results
