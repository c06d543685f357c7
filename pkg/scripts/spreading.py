"""Spread of a localized state: second moment and light-cone edge versus t.

Writes a CSV (t, norm, mean_r2, edge_prob) and optional PGM snapshots.
"""
import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from weylwalk.coin import nu_from_angle
from weylwalk.io import write_pgm
from weylwalk.simulator import FieldState, step


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=100)
    ap.add_argument("--nu-angle", type=float, default=0.0)
    ap.add_argument("--spinor", default="0.7071067811865476,0.7071067811865476j")
    ap.add_argument("--snapshots", type=Path, help="directory for PGM frames every 10 steps")
    args = ap.parse_args()

    spinor = [complex(p) for p in args.spinor.split(",")]
    size = 2 * args.steps + 3
    state = FieldState.delta(size, size, spinor)
    nu = nu_from_angle(args.nu_angle)
    X, Y = state.coords()
    r2 = X ** 2 + Y ** 2
    edge = np.abs(X) + np.abs(Y)
    if args.snapshots:
        args.snapshots.mkdir(parents=True, exist_ok=True)

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["t", "norm", "mean_r2", "edge_prob"])
    for t in range(args.steps + 1):
        prob = state.probability()
        w.writerow([t, f"{prob.sum():.12f}", f"{(prob * r2).sum():.6f}",
                    f"{prob[edge == t].sum():.6e}"])
        if args.snapshots and t % 10 == 0:
            write_pgm(args.snapshots / f"frame_{t:04d}.pgm", state)
        if t < args.steps:
            state = step(state, nu, "padded")
    return 0


if __name__ == "__main__":
    sys.exit(main())
