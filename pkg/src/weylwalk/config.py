from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from weylwalk.paths import DEFAULT_MAX_PATHS

COMMANDS = ("propagate", "evolve", "validate", "dispersion", "bench")
EVOLVE_METHODS = ("direct", "kernel", "fft")
FORMATS = ("csv", "json", "pgm")


@dataclass
class RunConfig:
    command: str
    t: int = 1
    nu_angle: float = 0.0
    width: int | None = None
    height: int | None = None
    method: str = "direct"
    input: Path | None = None
    output: Path | None = None
    format: str = "csv"
    t_max: int = 8
    threads: int = 1
    max_paths: int = DEFAULT_MAX_PATHS
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not math.isfinite(self.nu_angle):
            raise ValueError("nu_angle must be finite")
        if self.t < 0 or self.t_max < 0:
            raise ValueError("step counts must be nonnegative")
        if self.method not in EVOLVE_METHODS:
            raise ValueError(f"method must be one of {EVOLVE_METHODS}")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
