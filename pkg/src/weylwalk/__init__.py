"""Exact discrete propagator and lattice simulator for the 2D Weyl quantum walk."""
from weylwalk.coin import (
    CoinLabel,
    Direction,
    PathString,
    SignedCoin,
    coin_matrix,
    compose,
    fold_path,
    phase_closed,
)
from weylwalk.paths import (
    CoefficientQuad,
    Displacement,
    admissible_counts,
    enumerate_paths,
    oracle_coefficients,
    oracle_kernel,
)
from weylwalk.propagator import coefficient_table, coefficients, kernel, kernel_table
from weylwalk.simulator import (
    FieldState,
    dispersion,
    evolve_direct,
    evolve_fourier,
    evolve_kernel,
    momentum_matrix,
    step,
)

__version__ = "0.1.0"
