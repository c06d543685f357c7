"""Lattice evolution of the two-component Weyl walk field.

Three independent routes to ``psi(t) = A^t psi(0)``:

* :func:`evolve_direct` applies ``psi(x) <- sum_h A_h psi(x - delta_h)`` step by step,
* :func:`evolve_kernel` convolves with the exact kernel table,
* :func:`evolve_fourier` multiplies each momentum mode by ``A(k)^t``.

Arrays are indexed ``psi[iy, ix, component]`` with lattice coordinates
``x = offset[0] + ix`` and ``y = offset[1] + iy``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from weylwalk.coin import DIRECTIONS, check_nu, transition_matrix
from weylwalk.propagator import Kernel, kernel_table

BOUNDARIES = ("periodic", "padded")


class WindowTooSmall(ValueError):
    """Amplitude reached the edge of a padded window."""


@dataclass
class FieldState:
    psi: np.ndarray
    offset: tuple[int, int] = (0, 0)

    def __post_init__(self):
        self.psi = np.asarray(self.psi, dtype=complex)
        if self.psi.ndim != 3 or self.psi.shape[2] != 2:
            raise ValueError(f"psi must have shape (height, width, 2), got {self.psi.shape}")
        self.offset = (int(self.offset[0]), int(self.offset[1]))

    @property
    def height(self) -> int:
        return self.psi.shape[0]

    @property
    def width(self) -> int:
        return self.psi.shape[1]

    @classmethod
    def zeros(cls, width: int, height: int, offset=(0, 0)) -> "FieldState":
        return cls(np.zeros((height, width, 2), dtype=complex), offset)

    @classmethod
    def delta(cls, width: int, height: int, spinor=(1, 0), at=(0, 0), offset=None) -> "FieldState":
        """Point-localised state; by default the window is centred on ``at``."""
        if offset is None:
            offset = (at[0] - width // 2, at[1] - height // 2)
        state = cls.zeros(width, height, offset)
        state.psi[at[1] - offset[1], at[0] - offset[0]] = spinor
        return state

    def index(self, x: int, y: int) -> tuple[int, int]:
        return y - self.offset[1], x - self.offset[0]

    def amplitude(self, x: int, y: int) -> np.ndarray:
        iy, ix = self.index(x, y)
        if 0 <= iy < self.height and 0 <= ix < self.width:
            return self.psi[iy, ix]
        return np.zeros(2, dtype=complex)

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Lattice coordinate grids ``(X, Y)`` of shape ``(height, width)``."""
        xs = self.offset[0] + np.arange(self.width)
        ys = self.offset[1] + np.arange(self.height)
        return np.meshgrid(xs, ys)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2))

    def probability(self) -> np.ndarray:
        return np.sum(np.abs(self.psi) ** 2, axis=2)

    def copy(self) -> "FieldState":
        return FieldState(self.psi.copy(), self.offset)


def random_state(width: int, height: int, rng: np.random.Generator, offset=(0, 0)) -> FieldState:
    psi = rng.normal(size=(height, width, 2)) + 1j * rng.normal(size=(height, width, 2))
    psi /= np.sqrt(np.sum(np.abs(psi) ** 2))
    return FieldState(psi, offset)


def _check_border(psi: np.ndarray) -> None:
    if (np.any(psi[0] != 0) or np.any(psi[-1] != 0)
            or np.any(psi[:, 0] != 0) or np.any(psi[:, -1] != 0)):
        raise WindowTooSmall("amplitude on the window edge would leave a padded window")


def step(state: FieldState, nu: complex = 1.0, boundary: str = "periodic") -> FieldState:
    """One application of the walk; the input buffer is only read."""
    if boundary not in BOUNDARIES:
        raise ValueError(f"boundary must be one of {BOUNDARIES}")
    nu = check_nu(nu)
    psi = state.psi
    if boundary == "padded":
        _check_border(psi)
    out = np.zeros_like(psi)
    for h in DIRECTIONS:
        dx, dy = h.displacement
        moved = psi @ transition_matrix(h, nu).T
        out += np.roll(moved, shift=(dy, dx), axis=(0, 1))
    return FieldState(out, state.offset)


def evolve_direct(state: FieldState, t: int, nu: complex = 1.0, boundary: str = "periodic") -> FieldState:
    if t < 0:
        raise ValueError("t must be nonnegative")
    out = state.copy()
    for _ in range(t):
        out = step(out, nu, boundary)
    return out


def evolve_kernel(state: FieldState, t: int, nu: complex = 1.0,
                  table: dict | None = None) -> FieldState:
    """Convolve with the ``t``-step kernel on the infinite lattice.

    The output window is the input window grown by ``t`` sites on each side.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if table is None:
        table = kernel_table(t, nu)
    H, W = state.height, state.width
    out = np.zeros((H + 2 * t, W + 2 * t, 2), dtype=complex)
    for d, k in table.items():
        if isinstance(k, Kernel):
            k = k.at(nu).matrix
        dx, dy = d[0], d[1]
        out[t + dy:t + dy + H, t + dx:t + dx + W] += state.psi @ np.asarray(k).T
    return FieldState(out, (state.offset[0] - t, state.offset[1] - t))


def fold_periodic(state: FieldState, width: int, height: int, offset=(0, 0)) -> FieldState:
    """Wrap an infinite-lattice state onto a periodic ``width x height`` window."""
    X, Y = state.coords()
    ix = (X - offset[0]) % width
    iy = (Y - offset[1]) % height
    out = np.zeros((height, width, 2), dtype=complex)
    for c in range(2):
        np.add.at(out[:, :, c], (iy.ravel(), ix.ravel()), state.psi[:, :, c].ravel())
    return FieldState(out, offset)


def embed(state: FieldState, width: int, height: int, offset) -> FieldState:
    """Copy ``state`` into a larger zero window; the new window must contain it."""
    out = FieldState.zeros(width, height, offset)
    iy, ix = out.index(*state.offset)
    if iy < 0 or ix < 0 or iy + state.height > height or ix + state.width > width:
        raise WindowTooSmall("target window does not contain the state")
    out.psi[iy:iy + state.height, ix:ix + state.width] = state.psi
    return out


def momentum_matrix(kx, ky, nu: complex = 1.0) -> np.ndarray:
    """``sum_h A_h exp(-i k . delta_h)``, broadcast over ``kx``/``ky``; shape ``(..., 2, 2)``."""
    nu = check_nu(nu)
    kx, ky = np.broadcast_arrays(np.asarray(kx, dtype=float), np.asarray(ky, dtype=float))
    out = np.zeros(kx.shape + (2, 2), dtype=complex)
    for h in DIRECTIONS:
        dx, dy = h.displacement
        phase = np.exp(-1j * (kx * dx + ky * dy))
        out += phase[..., None, None] * transition_matrix(h, nu)
    return out


def wavevectors(width: int, height: int) -> tuple[np.ndarray, np.ndarray]:
    """Discrete momenta of a periodic window, arranged like ``numpy.fft.fft2`` output."""
    kx = 2 * np.pi * np.fft.fftfreq(width)
    ky = 2 * np.pi * np.fft.fftfreq(height)
    return np.meshgrid(kx, ky)


def evolve_fourier(state: FieldState, t: int, nu: complex = 1.0) -> FieldState:
    """Evolve on the periodic window by diagonalising translations.

    Any window size works; numpy's FFT is fastest for sizes with small prime
    factors.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    KX, KY = wavevectors(state.width, state.height)
    Mt = np.linalg.matrix_power(momentum_matrix(KX, KY, nu), t)
    psi_k = np.fft.fft2(state.psi, axes=(0, 1))
    psi_k = np.einsum("yxij,yxj->yxi", Mt, psi_k)
    return FieldState(np.fft.ifft2(psi_k, axes=(0, 1)), state.offset)


def plane_wave(width: int, height: int, mx: int, my: int, spinor, offset=(0, 0)) -> FieldState:
    """Normalised plane wave with momentum ``2 pi (mx / width, my / height)``."""
    state = FieldState.zeros(width, height, offset)
    X, Y = state.coords()
    phase = np.exp(1j * 2 * np.pi * (mx * X / width + my * Y / height))
    spinor = np.asarray(spinor, dtype=complex)
    state.psi = phase[..., None] * spinor / np.linalg.norm(spinor) / math.sqrt(width * height)
    return state


# -- dispersion ---------------------------------------------------------------


class DispersionSample(NamedTuple):
    k: tuple[float, float]
    omega: float
    eigenphase: float


def omega(kx, ky):
    """Positive eigenphase from the trace identity ``2 cos w = cos kx + cos ky``."""
    c = (np.cos(kx) + np.cos(ky)) / 2
    return np.arccos(np.clip(c, -1.0, 1.0))


def eigenphase(kx, ky, nu: complex = 1.0):
    """Positive eigenphase from a direct eigendecomposition of ``A(k)``."""
    ev = np.linalg.eigvals(momentum_matrix(kx, ky, nu))
    return np.max(np.abs(np.angle(ev)), axis=-1)


def dispersion(kpoints: Sequence, nu: complex = 1.0) -> list[DispersionSample]:
    pts = np.asarray(kpoints, dtype=float).reshape(-1, 2)
    om = omega(pts[:, 0], pts[:, 1])
    ep = eigenphase(pts[:, 0], pts[:, 1], nu)
    return [DispersionSample((float(kx), float(ky)), float(w), float(e))
            for (kx, ky), w, e in zip(pts, om, ep)]


def k_grid(n: int) -> np.ndarray:
    """``n x n`` grid over ``[-pi, pi]^2`` as an ``(n*n, 2)`` array."""
    ks = np.linspace(-np.pi, np.pi, n)
    KX, KY = np.meshgrid(ks, ks, indexing="ij")
    return np.column_stack([KX.ravel(), KY.ravel()])


def group_speed(theta: float, eps: float = 1e-3) -> float:
    """Richardson estimate of ``lim omega(eps * khat) / eps`` along direction ``theta``."""
    def ratio(e):
        return float(omega(e * math.cos(theta), e * math.sin(theta))) / e

    return (4 * ratio(eps / 2) - ratio(eps)) / 3
