"""Command-line entry point: ``weylwalk {propagate,evolve,validate,dispersion,bench}``.

Data goes to stdout (or ``--output``); diagnostics go to stderr.

Exit codes: 0 success, 1 validation failure, 2 I/O error, 3 padded window too small.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from weylwalk import io as wio
from weylwalk.coin import nu_from_angle
from weylwalk.config import EVOLVE_METHODS, RunConfig
from weylwalk.paths import DEFAULT_MAX_PATHS
from weylwalk.propagator import METHODS, kernel_table
from weylwalk.simulator import (
    FieldState,
    WindowTooSmall,
    evolve_direct,
    evolve_fourier,
    evolve_kernel,
    fold_periodic,
    k_grid,
    omega,
    random_state,
)
from weylwalk.validate import run_all

log = logging.getLogger("weylwalk")

EXIT_OK, EXIT_FAIL, EXIT_IO, EXIT_WINDOW = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def emit(cfg: RunConfig, data: bytes | str) -> None:
    """Write to ``cfg.output`` atomically, or to stdout."""
    if cfg.output is None or str(cfg.output) == "-":
        if isinstance(data, bytes):
            sys.stdout.buffer.write(data)
            sys.stdout.flush()
        else:
            sys.stdout.write(data)
        return
    try:
        wio.atomic_write(cfg.output, data)
    except OSError as exc:
        raise CliError(f"cannot write {cfg.output}: {exc}", EXIT_IO) from exc


def parse_complex_pair(text: str) -> tuple[complex, complex]:
    parts = [complex(p.replace(" ", "")) for p in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two comma-separated components")
    return parts[0], parts[1]


def cmd_propagate(cfg: RunConfig) -> int:
    quads = wio.table_quads(cfg.t, cfg.extra.get("coefficients", "hypergeometric"))
    nu_angle = cfg.nu_angle if cfg.extra.get("numeric") else None
    if cfg.format == "json":
        emit(cfg, wio.kernel_json(cfg.t, quads, nu_angle))
    elif cfg.format == "csv":
        emit(cfg, wio.kernel_csv(cfg.t, quads, nu_angle))
    else:
        raise CliError("propagate writes csv or json", EXIT_IO)
    log.info("wrote %d kernel rows for t=%d", len(quads), cfg.t)
    return EXIT_OK


def initial_state(cfg: RunConfig) -> tuple[FieldState, float]:
    if cfg.input is not None:
        try:
            state, nu_angle = wio.read_state(cfg.input)
        except OSError as exc:
            raise CliError(f"cannot read {cfg.input}: {exc}", EXIT_IO) from exc
        if cfg.extra.get("nu_angle_given"):
            nu_angle = cfg.nu_angle
        return state, nu_angle
    size = 2 * cfg.t + 3
    width = cfg.width or size
    height = cfg.height or size
    init = cfg.extra.get("init", "delta")
    if init == "delta":
        return FieldState.delta(width, height, cfg.extra.get("spinor", (1, 0))), cfg.nu_angle
    if init == "random":
        rng = np.random.default_rng(cfg.extra.get("seed", 0))
        return random_state(width, height, rng, (-(width // 2), -(height // 2))), cfg.nu_angle
    raise CliError(f"unknown --init {init!r}", EXIT_IO)


def evolve(state: FieldState, t: int, nu: complex, method: str, boundary: str | None = None) -> FieldState:
    if method == "direct":
        return evolve_direct(state, t, nu, boundary or "padded")
    if method == "kernel":
        quads = wio.table_quads(t)
        return evolve_kernel(state, t, nu, kernel_table(t, nu, quads=quads))
    return evolve_fourier(state, t, nu)


def cmd_evolve(cfg: RunConfig) -> int:
    state, nu_angle = initial_state(cfg)
    nu = nu_from_angle(nu_angle)
    try:
        out = evolve(state, cfg.t, nu, cfg.method, cfg.extra.get("boundary"))
    except WindowTooSmall as exc:
        raise CliError(f"window too small for {cfg.t} steps: {exc}", EXIT_WINDOW) from exc
    emit(cfg, json.dumps(wio.state_to_dict(out, nu_angle)))
    heatmap = cfg.extra.get("heatmap")
    if heatmap:
        try:
            wio.write_pgm(heatmap, out)
        except OSError as exc:
            raise CliError(f"cannot write {heatmap}: {exc}", EXIT_IO) from exc
    print(f"norm {out.norm():.9f}", file=sys.stderr)
    return EXIT_OK


def cmd_validate(cfg: RunConfig) -> int:
    results = run_all(cfg.t_max, cfg.max_paths, cfg.threads, report=print)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_dispersion(cfg: RunConfig) -> int:
    points = cfg.extra.get("points") or k_grid(cfg.extra.get("n", 65))
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    om = omega(pts[:, 0], pts[:, 1])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kx", "ky", "omega"])
    for (kx, ky), o in zip(pts, om):
        w.writerow([repr(float(kx)), repr(float(ky)), repr(float(o))])
    emit(cfg, buf.getvalue())
    return EXIT_OK


def cmd_bench(cfg: RunConfig) -> int:
    size = cfg.width or 64
    nu = nu_from_angle(cfg.nu_angle)
    state = random_state(size, size, np.random.default_rng(cfg.extra.get("seed", 0)))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "method", "seconds", "checksum"])
    ts = sorted({int(t) for t in np.unique(np.geomspace(1, max(cfg.t_max, 1), 7).round())})
    for t in ts:
        for method in EVOLVE_METHODS:
            start = time.perf_counter()
            if method == "kernel":
                out = fold_periodic(evolve(state, t, nu, "kernel"), size, size, state.offset)
            else:
                out = evolve(state, t, nu, method, "periodic")
            elapsed = time.perf_counter() - start
            w.writerow([t, method, f"{elapsed:.6f}", wio.checksum(out)])
    emit(cfg, buf.getvalue())
    return EXIT_OK


COMMANDS = {
    "propagate": cmd_propagate,
    "evolve": cmd_evolve,
    "validate": cmd_validate,
    "dispersion": cmd_dispersion,
    "bench": cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weylwalk", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        p.add_argument("--nu-angle", type=float, default=None, help="nu = exp(i * angle); default 0")
        p.add_argument("--threads", type=int, default=1)
        if output:
            p.add_argument("--output", "-o", type=Path, default=None, help="default: stdout")

    p = sub.add_parser("propagate", help="export the exact kernel table at t")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--numeric", action="store_true", help="add numeric matrix columns at --nu-angle")
    p.add_argument("--coefficients", choices=METHODS, default="hypergeometric")
    common(p)

    p = sub.add_parser("evolve", help="evolve a state")
    p.add_argument("--steps", "--t", dest="t", type=int, required=True)
    p.add_argument("--method", choices=EVOLVE_METHODS, default="direct")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--init", choices=("delta", "random"), default="delta")
    src.add_argument("--input", type=Path)
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--spinor", type=parse_complex_pair, default=(1, 0))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--boundary", choices=("periodic", "padded"), default=None,
                   help="direct method only; default padded")
    p.add_argument("--heatmap", type=Path, help="write |psi|^2 as 16-bit PGM")
    common(p)

    p = sub.add_parser("validate", help="run the cross-validation suites")
    p.add_argument("--t-max", type=int, default=8)
    p.add_argument("--max-paths", type=int, default=DEFAULT_MAX_PATHS)
    common(p, output=False)

    p = sub.add_parser("dispersion", help="dump omega(k) as CSV")
    p.add_argument("--n", type=int, default=65, help="grid points per axis over [-pi, pi]")
    p.add_argument("--point", action="append", type=lambda s: [float(v) for v in s.split(",")],
                   help="single kx,ky point (repeatable); overrides the grid")
    common(p)

    p = sub.add_parser("bench", help="time the three evolution methods")
    p.add_argument("--t-max", type=int, default=32)
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    extra = {}
    for key in ("numeric", "coefficients", "init", "spinor", "seed", "boundary", "heatmap", "n", "point"):
        if hasattr(ns, key):
            extra[key if key != "point" else "points"] = getattr(ns, key)
    extra["nu_angle_given"] = ns.nu_angle is not None
    return RunConfig(
        command=ns.command,
        t=getattr(ns, "t", 1),
        nu_angle=ns.nu_angle if ns.nu_angle is not None else 0.0,
        width=getattr(ns, "width", None),
        height=getattr(ns, "height", None),
        method=getattr(ns, "method", "direct"),
        input=getattr(ns, "input", None),
        output=getattr(ns, "output", None),
        format=getattr(ns, "format", "csv"),
        t_max=getattr(ns, "t_max", 8),
        threads=ns.threads,
        max_paths=getattr(ns, "max_paths", DEFAULT_MAX_PATHS),
        extra=extra,
    )


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        cfg = config_from_args(ns)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        return COMMANDS[cfg.command](cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
