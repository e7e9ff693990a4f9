"""Numerical tolerances and run configuration."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace

import numpy as np

MAX_DIM = 4096


@dataclass(frozen=True)
class Tolerances:
    """Absolute/relative thresholds used by every numerical check.

    Matrices are normalized to unit trace, so the absolute values are
    meaningful on the scale of probabilities.
    """

    herm: float = 1e-9
    psd: float = 1e-9
    trace: float = 1e-9
    eig: float = 1e-8  # relative reconstruction residual
    rank: float = 1e-8  # relative to the largest |eigenvalue|
    maj: float = 1e-9
    ent: float = 1e-9

    def override(self, **overrides: float) -> "Tolerances":
        names = {f.name for f in fields(self)}
        unknown = set(overrides) - names
        if unknown:
            raise KeyError(f"unknown tolerance(s): {sorted(unknown)}")
        return replace(self, **{k: float(v) for k, v in overrides.items()})


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    samples: int = 100
    dims: tuple[int, ...] | None = None
    tol: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.dims is not None:
            if any(d < 1 for d in self.dims):
                raise ValueError("dimensions must be >= 1")
            if int(np.prod(self.dims)) > MAX_DIM:
                raise ValueError(f"dims product exceeds {MAX_DIM}")
