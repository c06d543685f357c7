"""On-disk formats: state JSON, probability PGM, kernel tables (CSV/JSON).

All writers go through :func:`atomic_write` (temp file + rename).
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from weylwalk.coin import nu_from_angle
from weylwalk.paths import CoefficientQuad, Displacement
from weylwalk.propagator import coefficient_table, kernel_from_quad
from weylwalk.simulator import FieldState

CACHE_ENV = "WEYLWALK_CACHE_DIR"
KERNEL_FIELDS = ["t", "dx", "dy", "c00", "c01", "c10", "c11"]
MATRIX_FIELDS = [f"m{i}{j}{part}" for i in (1, 2) for j in (1, 2) for part in ("re", "im")]


def atomic_write(path, data: bytes | str) -> None:
    path = Path(path)
    if isinstance(data, str):
        data = data.encode()
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- state files --------------------------------------------------------------


def state_to_dict(state: FieldState, nu_angle: float = 0.0) -> dict:
    flat = state.psi.reshape(-1, 2)
    return {
        "width": state.width,
        "height": state.height,
        "offset": list(state.offset),
        "nu_angle": nu_angle,
        "psi": [[z1.real, z1.imag, z2.real, z2.imag] for z1, z2 in flat.tolist()],
    }


def state_from_dict(doc: dict) -> tuple[FieldState, float]:
    w, h = int(doc["width"]), int(doc["height"])
    raw = np.asarray(doc["psi"], dtype=float)
    if raw.shape != (w * h, 4):
        raise ValueError(f"psi has shape {raw.shape}, expected {(w * h, 4)}")
    psi = (raw[:, 0::2] + 1j * raw[:, 1::2]).reshape(h, w, 2)
    return FieldState(psi, tuple(doc.get("offset", (0, 0)))), float(doc.get("nu_angle", 0.0))


def write_state(path, state: FieldState, nu_angle: float = 0.0) -> None:
    atomic_write(path, json.dumps(state_to_dict(state, nu_angle)))


def read_state(path) -> tuple[FieldState, float]:
    with open(path) as fh:
        return state_from_dict(json.load(fh))


def pgm_bytes(state: FieldState) -> bytes:
    """16-bit binary PGM of ``|psi|^2`` scaled so the maximum maps to 65535.

    Rows follow the state's row order (first row is the lowest ``y``).
    """
    prob = state.probability()
    peak = prob.max()
    scaled = np.zeros_like(prob) if peak == 0 else prob / peak
    pixels = np.round(scaled * 65535).astype(">u2")
    header = f"P5\n{state.width} {state.height}\n65535\n".encode()
    return header + pixels.tobytes()


def write_pgm(path, state: FieldState) -> None:
    atomic_write(path, pgm_bytes(state))


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    magic, dims, maxval, rest = data.split(b"\n", 3)
    if magic != b"P5":
        raise ValueError("not a binary PGM")
    w, h = map(int, dims.split())
    return np.frombuffer(rest, dtype=">u2").reshape(h, w)


# -- kernel tables --------------------------------------------------------------


def kernel_rows(t: int, quads: dict, nu_angle: float | None = None) -> list[dict]:
    """One row per admissible displacement; numeric columns only when ``nu_angle`` is given."""
    rows = []
    nu = None if nu_angle is None else nu_from_angle(nu_angle)
    for d, q in sorted(quads.items()):
        row = {"t": t, "dx": d.dx, "dy": d.dy}
        if q is None:
            row.update(c00=None, c01=None, c10=None, c11=None)
        else:
            row.update(zip(KERNEL_FIELDS[3:], q.as_tuple()))
        if nu is not None:
            m = kernel_from_quad(d, q, nu).matrix
            for i in range(2):
                for j in range(2):
                    row[f"m{i + 1}{j + 1}re"] = float(m[i, j].real)
                    row[f"m{i + 1}{j + 1}im"] = float(m[i, j].imag)
        rows.append(row)
    return rows


def table_quads(t: int, method: str = "hypergeometric", cache_dir=None) -> dict:
    """Coefficient quads over the cone; ``t=0`` maps the origin to ``None``."""
    if t == 0:
        return {Displacement(0, 0, 0): None}
    cache_dir = cache_dir or os.environ.get(CACHE_ENV)
    if cache_dir:
        path = Path(cache_dir) / f"quads_t{t}.json"
        if path.exists():
            return _quads_from_rows(json.loads(path.read_text())["rows"])
    quads = coefficient_table(t, method)
    if cache_dir:
        Path(cache_dir).mkdir(parents=True, exist_ok=True)
        atomic_write(path, json.dumps({"t": t, "rows": kernel_rows(t, quads)}))
    return quads


def kernel_csv(t: int, quads: dict, nu_angle: float | None = None) -> str:
    fields = KERNEL_FIELDS + (MATRIX_FIELDS if nu_angle is not None else [])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in kernel_rows(t, quads, nu_angle):
        writer.writerow({k: ("" if v is None else (repr(v) if isinstance(v, float) else v))
                         for k, v in row.items()})
    return buf.getvalue()


def kernel_json(t: int, quads: dict, nu_angle: float | None = None) -> str:
    doc = {"t": t, "nu_angle": nu_angle, "rows": kernel_rows(t, quads, nu_angle)}
    return json.dumps(doc, indent=1)


def _quads_from_rows(rows) -> dict:
    out = {}
    for row in rows:
        d = Displacement(int(row["dx"]), int(row["dy"]), int(row["t"]))
        cs = [row[k] for k in KERNEL_FIELDS[3:]]
        if any(c in (None, "") for c in cs):
            out[d] = None
        else:
            out[d] = CoefficientQuad(*(int(c) for c in cs))
    return out


def read_kernel_csv(path_or_text) -> dict:
    text = path_or_text
    if not isinstance(text, str) or "\n" not in text:
        text = Path(path_or_text).read_text()
    return _quads_from_rows(csv.DictReader(io.StringIO(text)))


def read_kernel_json(path_or_text) -> dict:
    text = path_or_text
    if not isinstance(text, str) or "\n" not in text:
        text = Path(path_or_text).read_text()
    return _quads_from_rows(json.loads(text)["rows"])


def checksum(state: FieldState) -> str:
    """Position-weighted probability sum; equal across methods to ~1e-12."""
    X, Y = state.coords()
    prob = state.probability()
    weights = 1.0 + (X % 7) + 10.0 * (Y % 5)
    value = float(np.sum(weights * prob))
    return f"{value:.9f}" if math.isfinite(value) else "nan"
