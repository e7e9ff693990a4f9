"""JSON state files: ``{"dims": [...], "re": [...], "im": [...], "kind": "density"|"pure"}``.

Arrays are row-major. ``kind`` is optional and inferred from the array length.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import InvalidStateError
from .linalg import PureVector, QuantumState


def state_from_json(obj: dict, tol: Tolerances = DEFAULT_TOL) -> QuantumState | PureVector:
    try:
        dims = [int(d) for d in obj["dims"]]
        re = np.asarray(obj["re"], dtype=float).reshape(-1)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float).reshape(-1)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidStateError(f"malformed state file: {exc}") from None
    n = int(np.prod(dims))
    if re.size != im.size:
        raise InvalidStateError("re and im lengths differ")
    kind = obj.get("kind")
    if kind is None:
        kind = "pure" if re.size == n else "density"
    if kind == "pure":
        if re.size != n:
            raise InvalidStateError(f"pure state needs {n} amplitudes, got {re.size}")
        return PureVector(re + 1j * im, dims, tol=tol)
    if kind == "density":
        if re.size != n * n:
            raise InvalidStateError(f"density matrix needs {n * n} entries, got {re.size}")
        return QuantumState((re + 1j * im).reshape(n, n), dims, tol=tol)
    raise InvalidStateError(f"unknown kind {kind!r}")


def state_to_json(state: QuantumState | PureVector) -> dict:
    if isinstance(state, PureVector):
        flat, kind = state.amplitudes, "pure"
    else:
        flat, kind = state.matrix.reshape(-1), "density"
    return {"dims": list(state.dims), "kind": kind, "re": flat.real.tolist(), "im": flat.imag.tolist()}


def load_state(path, tol: Tolerances = DEFAULT_TOL):
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidStateError(f"cannot read {path}: {exc}") from None
    return state_from_json(obj, tol)


def save_state(state, path) -> None:
    Path(path).write_text(json.dumps(state_to_json(state)))
