"""Dense complex-matrix primitives: states, partial trace/transpose, spectra,
entropy, majorization, rank and purification.

Subsystem conventions: a matrix on ``dims = (d0, d1, ...)`` uses the
Kronecker ordering ``|i0 i1 ...>`` with ``i0`` most significant, matching
``np.kron(a, b)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .config import DEFAULT_TOL, MAX_DIM, Tolerances
from .errors import DimensionError, InvalidStateError, NumericError, UsageError

if TYPE_CHECKING:
    from .states import StateCertificate


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.flags.writeable = False
    return a


def _check_dims(dims: Sequence[int], size: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise UsageError(f"invalid subsystem dimensions {dims}")
    if int(np.prod(dims)) != size:
        raise DimensionError(f"dims {dims} do not multiply to {size}")
    if size > MAX_DIM:
        raise DimensionError(f"total dimension {size} exceeds {MAX_DIM}")
    return dims


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Density matrix with an ordered list of subsystem dimensions.

    Validated on construction (Hermitian, PSD, unit trace). ``certificate``
    is ground truth attached by a constructor, if any.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]
    certificate: "StateCertificate | None" = field(default=None, compare=False)

    def __init__(self, matrix, dims=None, certificate=None, *, tol: Tolerances = DEFAULT_TOL,
                 validate: bool = True):
        m = np.asarray(matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidStateError(f"density matrix must be square, got shape {m.shape}")
        if dims is None:
            dims = (m.shape[0],)
        dims = _check_dims(dims, m.shape[0])
        if not np.all(np.isfinite(m)):
            raise InvalidStateError("matrix has non-finite entries")
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "certificate", certificate)
        if validate:
            self._validate(tol)

    def _validate(self, tol: Tolerances) -> None:
        m = self.matrix
        asym = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
        if asym > tol.herm:
            raise InvalidStateError(f"not Hermitian (max asymmetry {asym:.3e})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > tol.trace:
            raise InvalidStateError(f"trace is {tr!r}, expected 1")
        lmin = float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0])
        if lmin < -tol.psd:
            raise InvalidStateError(f"not positive semidefinite (min eigenvalue {lmin:.3e})")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def nsys(self) -> int:
        return len(self.dims)

    def with_certificate(self, certificate) -> "QuantumState":
        return QuantumState(self.matrix, self.dims, certificate, validate=False)

    def __repr__(self):
        return f"QuantumState(dims={self.dims})"


@dataclass(frozen=True, eq=False)
class PureVector:
    """Unit vector with subsystem dimensions.

    ``marginal_certs`` maps a cut label (``"AB"``, ``"AC"``, ``"BC"``) to a
    certificate for that two-party marginal.
    """

    amplitudes: np.ndarray
    dims: tuple[int, ...]
    marginal_certs: dict = field(default_factory=dict, compare=False)

    def __init__(self, amplitudes, dims=None, marginal_certs=None, *,
                 tol: Tolerances = DEFAULT_TOL):
        v = np.asarray(amplitudes).reshape(-1)
        if dims is None:
            dims = (v.size,)
        dims = _check_dims(dims, v.size)
        if not np.all(np.isfinite(v)):
            raise InvalidStateError("vector has non-finite entries")
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > tol.trace:
            raise InvalidStateError(f"vector norm is {norm!r}, expected 1")
        object.__setattr__(self, "amplitudes", _frozen(v))
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "marginal_certs", dict(marginal_certs or {}))

    @property
    def nsys(self) -> int:
        return len(self.dims)

    def density(self) -> QuantumState:
        v = self.amplitudes
        return QuantumState(np.outer(v, v.conj()), self.dims, validate=False)

    def __repr__(self):
        return f"PureVector(dims={self.dims})"


@dataclass(frozen=True)
class MajorizationResult:
    holds: bool
    violated_prefix: int | None  # 1-based length of first failing prefix
    deficit: float  # min over k of (sum_k p - sum_k q); negative when violated

    def __bool__(self):
        return self.holds


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[0] * b.shape[0] > MAX_DIM or a.shape[-1] * b.shape[-1] > MAX_DIM:
        raise DimensionError(f"tensor product dimension exceeds {MAX_DIM}")
    return np.kron(a, b)


def _keep_indices(keep, n: int) -> tuple[int, ...]:
    keep = tuple(int(k) for k in keep)
    if not keep:
        raise UsageError("keep set must be nonempty")
    if any(k < 0 or k >= n for k in keep):
        raise UsageError(f"subsystem index out of range in {keep} for {n} subsystems")
    if any(b <= a for a, b in zip(keep, keep[1:])):
        raise UsageError(f"keep set {keep} must be strictly increasing")
    return keep


def partial_trace_matrix(m: np.ndarray, dims: Sequence[int], keep) -> np.ndarray:
    dims = tuple(dims)
    n = len(dims)
    keep = _keep_indices(keep, n)
    drop = [i for i in range(n) if i not in keep]
    t = np.asarray(m).reshape(dims + dims)
    order = list(keep) + drop
    t = t.transpose(order + [n + i for i in order])
    dk = int(np.prod([dims[i] for i in keep]))
    dr = int(np.prod([dims[i] for i in drop])) if drop else 1
    t = t.reshape(dk, dr, dk, dr)
    return np.einsum("ijkj->ik", t)


def partial_trace(rho: QuantumState, keep) -> QuantumState:
    """Reduced state on the subsystems listed in ``keep`` (increasing order)."""
    keep = _keep_indices(keep, rho.nsys)
    out = partial_trace_matrix(rho.matrix, rho.dims, keep)
    out = (out + out.conj().T) / 2
    return QuantumState(out, [rho.dims[i] for i in keep], validate=False)


def partial_transpose(rho: QuantumState | np.ndarray, subsystem: int = 1,
                      dims: Sequence[int] | None = None) -> np.ndarray:
    """Transpose on one subsystem. Pure index permutation, hence an exact involution."""
    if isinstance(rho, QuantumState):
        m, dims = rho.matrix, rho.dims
    else:
        m = np.asarray(rho)
        if dims is None:
            raise UsageError("dims required for a bare matrix")
    dims = tuple(dims)
    n = len(dims)
    if n < 2:
        raise UsageError("partial transpose needs at least two subsystems")
    if not 0 <= subsystem < n:
        raise UsageError(f"subsystem {subsystem} out of range for {n} subsystems")
    t = np.asarray(m).reshape(dims + dims)
    axes = list(range(2 * n))
    axes[subsystem], axes[n + subsystem] = axes[n + subsystem], axes[subsystem]
    return t.transpose(axes).reshape(m.shape)


def hermitian_spectrum(m: np.ndarray | QuantumState, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Real eigenvalues sorted non-increasing.

    Raises NumericError if ``m`` is not Hermitian within ``tol.herm``.
    """
    if isinstance(m, QuantumState):
        m = m.matrix
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise UsageError(f"square matrix required, got shape {m.shape}")
    asym = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if asym > tol.herm:
        raise NumericError(f"matrix not Hermitian (asymmetry {asym:.3e})", asymmetry=asym)
    return np.linalg.eigvalsh((m + m.conj().T) / 2)[::-1]


def hermitian_eig(m: np.ndarray, tol: Tolerances = DEFAULT_TOL):
    """Eigenpairs in non-increasing eigenvalue order."""
    hermitian_spectrum(m, tol)  # validates
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return w[::-1], v[:, ::-1]


def rank_from_spectrum(spec: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> int:
    spec = np.asarray(spec)
    top = float(np.max(np.abs(spec))) if spec.size else 0.0
    if top == 0.0:
        return 0
    return int(np.count_nonzero(np.abs(spec) > tol.rank * top))


def numerical_rank(m: np.ndarray | QuantumState, tol: Tolerances = DEFAULT_TOL) -> int:
    return rank_from_spectrum(hermitian_spectrum(m, tol), tol)


def entropy_from_spectrum(spec: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> float:
    spec = np.asarray(spec, dtype=float)
    top = float(np.max(spec)) if spec.size else 0.0
    p = spec[spec > tol.rank * top]
    return float(max(0.0, -np.sum(p * np.log2(p))))


def von_neumann_entropy(rho: QuantumState, tol: Tolerances = DEFAULT_TOL) -> float:
    """Entropy in bits."""
    return entropy_from_spectrum(hermitian_spectrum(rho.matrix, tol), tol)


def majorizes(p, q, tol: Tolerances = DEFAULT_TOL) -> MajorizationResult:
    """Whether ``p`` majorizes ``q``; the shorter vector is padded with zeros."""
    p = np.sort(np.asarray(p, dtype=float))[::-1]
    q = np.sort(np.asarray(q, dtype=float))[::-1]
    n = max(p.size, q.size)
    p = np.pad(p, (0, n - p.size))
    q = np.pad(q, (0, n - q.size))
    gaps = np.cumsum(p) - np.cumsum(q)
    bad = np.flatnonzero(gaps < -tol.maj)
    deficit = float(np.min(gaps)) if n else 0.0
    if bad.size:
        return MajorizationResult(False, int(bad[0]) + 1, deficit)
    return MajorizationResult(True, None, deficit)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # first component with non-negligible modulus made real positive
    idx = int(np.flatnonzero(np.abs(v) > 1e-12 * np.max(np.abs(v)))[0])
    return v * (abs(v[idx]) / v[idx])


def purify(rho: QuantumState, tol: Tolerances = DEFAULT_TOL) -> PureVector:
    """Spectral purification sum_i sqrt(l_i) |v_i>|i> with ancilla dim = rank(rho).

    The ancilla is appended as the last subsystem.
    """
    w, v = hermitian_eig(rho.matrix, tol)
    r = rank_from_spectrum(w, tol)
    w = np.clip(w[:r], 0.0, None)
    w = w / w.sum()
    vecs = np.stack([_fix_phase(v[:, i]) for i in range(r)], axis=1)
    psi = (vecs * np.sqrt(w)).reshape(-1)  # index (x, i) -> x * r + i
    psi = psi / np.linalg.norm(psi)
    return PureVector(psi, rho.dims + (r,))


def permute_subsystems(state: PureVector | QuantumState, perm: Sequence[int]):
    """Reorder subsystems so that new subsystem ``k`` is old subsystem ``perm[k]``."""
    perm = tuple(int(p) for p in perm)
    n = state.nsys
    if sorted(perm) != list(range(n)):
        raise UsageError(f"{perm} is not a permutation of {n} subsystems")
    dims = tuple(state.dims[p] for p in perm)
    if isinstance(state, PureVector):
        v = state.amplitudes.reshape(state.dims).transpose(perm).reshape(-1)
        return PureVector(v, dims)
    t = state.matrix.reshape(state.dims + state.dims)
    t = t.transpose(list(perm) + [n + p for p in perm])
    return QuantumState(t.reshape(state.matrix.shape), dims, validate=False)


def swap_bipartite(rho: QuantumState) -> QuantumState:
    if rho.nsys != 2:
        raise UsageError("swap needs a bipartite state")
    return permute_subsystems(rho, (1, 0))


def merge_subsystems(rho: QuantumState, groups: Sequence[Sequence[int]]) -> QuantumState:
    """View consecutive subsystem groups as single subsystems (no data movement)."""
    flat = [i for g in groups for i in g]
    if flat != list(range(rho.nsys)):
        raise UsageError("groups must partition the subsystems in order")
    dims = tuple(int(np.prod([rho.dims[i] for i in g])) for g in groups)
    return QuantumState(rho.matrix, dims, rho.certificate, validate=False)
