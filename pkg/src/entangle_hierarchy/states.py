"""Named states, random ensembles and tripartite marginals."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.stats import unitary_group

from .config import MAX_DIM
from .errors import DimensionError, UsageError
from .linalg import PureVector, QuantumState, partial_trace, permute_subsystems, purify


class CertificateKind(str, enum.Enum):
    SEPARABLE_DECOMPOSITION = "SeparableDecomposition"
    KNOWN_ENTANGLED = "KnownEntangled"
    KNOWN_ONE_WAY_DISTILLABLE = "KnownOneWayDistillable"
    NONE = "None"


@dataclass(frozen=True)
class StateCertificate:
    """Ground truth about a state that the numerical criteria cannot establish.

    For ``SEPARABLE_DECOMPOSITION`` the payload is a tuple of
    ``(p_k, rho_k_A, rho_k_B)``. ``distillable`` marks a ``KNOWN_ENTANGLED``
    state that is also known to be (two-way) distillable.
    """

    kind: CertificateKind = CertificateKind.NONE
    payload: tuple = ()
    distillable: bool = False
    source: str = ""

    def reconstruct(self) -> np.ndarray:
        if self.kind is not CertificateKind.SEPARABLE_DECOMPOSITION:
            raise UsageError(f"{self.kind.value} certificate has no decomposition")
        return sum(p * np.kron(a, b) for p, a, b in self.payload)

    def validate(self, rho: QuantumState, tol: float = 1e-12) -> float:
        """Reconstruction error of a separable decomposition; raises if invalid."""
        ps = np.array([p for p, _, _ in self.payload])
        if np.any(ps < 0) or abs(ps.sum() - 1) > tol:
            raise ValueError("weights must be a probability vector")
        err = float(np.max(np.abs(self.reconstruct() - rho.matrix)))
        if err > tol:
            raise ValueError(f"decomposition misses the state by {err:.3e}")
        return err

    def to_json(self) -> dict:
        out = {"kind": self.kind.value, "source": self.source}
        if self.kind is CertificateKind.SEPARABLE_DECOMPOSITION:
            out["terms"] = len(self.payload)
        if self.distillable:
            out["distillable"] = True
        return out


NO_CERT = StateCertificate()
KNOWN_ENTANGLED = StateCertificate(CertificateKind.KNOWN_ENTANGLED, source="UPB tiles")
KNOWN_ONE_WAY_DISTILLABLE = StateCertificate(
    CertificateKind.KNOWN_ONE_WAY_DISTILLABLE, source="locking state one-way protocol")


def _ket(d: int, i: int) -> np.ndarray:
    e = np.zeros(d, dtype=complex)
    e[i] = 1.0
    return e


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(int(seed))


def derive_seed(seed: int, index: int) -> int:
    """Per-sample seed; independent streams for distinct indices."""
    return int(np.random.SeedSequence([int(seed), int(index)]).generate_state(1, np.uint64)[0])


# -- named states ----------------------------------------------------------

def max_entangled(d: int) -> PureVector:
    """(1/sqrt d) sum_i |ii>."""
    if d < 2:
        raise UsageError("d must be >= 2")
    v = np.zeros(d * d, dtype=complex)
    v[np.arange(d) * (d + 1)] = 1 / np.sqrt(d)
    return PureVector(v, (d, d))


def bell() -> QuantumState:
    return max_entangled(2).density()


def ghz3() -> PureVector:
    v = np.zeros(8, dtype=complex)
    v[0] = v[7] = 1 / np.sqrt(2)
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    # every two-party marginal is (|00><00| + |11><11|)/2
    sep = StateCertificate(CertificateKind.SEPARABLE_DECOMPOSITION,
                           ((0.5, p0, p0), (0.5, p1, p1)), source="ghz3 diagonal marginal")
    return PureVector(v, (2, 2, 2), {"AB": sep, "AC": sep, "BC": sep})


def horodecki_locking(d: int) -> QuantumState:
    """1/2 |0><0| (x) psi+  +  1/2 |1><1| (x) I/d^2 on A1 A2 | C.

    A1 A2 is merged into one subsystem of dimension 2d, so dims = (2d, d).
    """
    if d < 2:
        raise UsageError("d must be >= 2")
    phi = max_entangled(d).density().matrix
    rho = 0.5 * np.kron(np.diag([1, 0]), phi) + 0.5 * np.kron(np.diag([0, 1]), np.eye(d * d) / d**2)
    return QuantumState(rho, (2 * d, d), KNOWN_ONE_WAY_DISTILLABLE)


def locking_purification(d: int) -> PureVector:
    """Purification of the locking state labelled so that rho_AC is the locking state.

    Subsystems (A, B, C) with A = A1A2 of dim 2d, B the purifying system of
    dim d^2 + 1 and C of dim d.
    """
    psi = permute_subsystems(purify(horodecki_locking(d)), (0, 2, 1))
    return PureVector(psi.amplitudes, psi.dims, {"AC": KNOWN_ONE_WAY_DISTILLABLE})


def antisymmetric_tripartite() -> PureVector:
    """Totally antisymmetric state of three qutrits."""
    v = np.zeros(27, dtype=complex)
    for (i, j, k), s in {(0, 1, 2): 1, (1, 0, 2): -1, (0, 2, 1): -1,
                         (2, 0, 1): 1, (1, 2, 0): 1, (2, 1, 0): -1}.items():
        v[9 * i + 3 * j + k] = s / np.sqrt(6)
    return PureVector(v, (3, 3, 3))


def tiles_upb() -> list[np.ndarray]:
    """The five product vectors of the Tiles unextendible product basis on 3x3."""
    e0, e1, e2 = (_ket(3, i) for i in range(3))
    s = (e0 + e1 + e2) / np.sqrt(3)
    pairs = [
        (e0, (e0 - e1) / np.sqrt(2)),
        ((e0 - e1) / np.sqrt(2), e2),
        (e2, (e1 - e2) / np.sqrt(2)),
        ((e1 - e2) / np.sqrt(2), e0),
        (s, s),
    ]
    return [np.kron(a, b) for a, b in pairs]


def tiles_bound_entangled() -> QuantumState:
    """(I - sum of UPB projectors) / 4: PPT, entangled, rank 4."""
    proj = sum(np.outer(v, v.conj()) for v in tiles_upb())
    return QuantumState((np.eye(9) - proj) / 4, (3, 3), KNOWN_ENTANGLED)


# -- random ensembles ------------------------------------------------------

def _ginibre(rng, *shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _random_pure(rng, n: int) -> np.ndarray:
    v = _ginibre(rng, n)
    return v / np.linalg.norm(v)


def _random_density(rng, dim: int, rank: int) -> np.ndarray:
    g = _ginibre(rng, dim, rank)
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_pure(dims, seed: int) -> PureVector:
    dims = tuple(int(d) for d in dims)
    n = int(np.prod(dims))
    if n < 2:
        raise UsageError("total dimension must be >= 2")
    if n > MAX_DIM:
        raise DimensionError(f"total dimension {n} exceeds {MAX_DIM}")
    return PureVector(_random_pure(_rng(seed), n), dims)


def random_density(dim: int, rank: int, seed: int, dims=None) -> QuantumState:
    """G G^dag / Tr with G a dim x rank complex Ginibre matrix."""
    if not 1 <= rank <= dim:
        raise UsageError(f"rank must lie in [1, {dim}], got {rank}")
    return QuantumState(_random_density(_rng(seed), dim, rank), dims or (dim,))


def random_separable(dA: int, dB: int, terms: int, seed: int) -> QuantumState:
    """Dirichlet-weighted mixture of random pure product states, with its decomposition."""
    if terms < 1:
        raise UsageError("terms must be >= 1")
    rng = _rng(seed)
    ps = rng.dirichlet(np.ones(terms))
    payload = []
    for p in ps:
        a, b = _random_pure(rng, dA), _random_pure(rng, dB)
        payload.append((float(p), np.outer(a, a.conj()), np.outer(b, b.conj())))
    rho = sum(p * np.kron(a, b) for p, a, b in payload)
    cert = StateCertificate(CertificateKind.SEPARABLE_DECOMPOSITION, tuple(payload),
                            source="random_separable")
    return QuantumState(rho, (dA, dB), cert)


def random_unitary(d: int, rng) -> np.ndarray:
    if d == 1:
        return np.ones((1, 1), dtype=complex)
    return unitary_group.rvs(d, random_state=rng)


def local_unitary_orbit(rho: QuantumState, seed: int) -> QuantumState:
    """(U_A (x) U_B) rho (U_A (x) U_B)^dag for Haar U's; keeps entanglement-type certificates."""
    rng = _rng(seed)
    u = np.kron(random_unitary(rho.dims[0], rng), random_unitary(rho.dims[1], rng))
    cert = rho.certificate
    if cert is not None and cert.kind is CertificateKind.SEPARABLE_DECOMPOSITION:
        cert = None
    return QuantumState(u @ rho.matrix @ u.conj().T, rho.dims, cert)


# -- tripartite marginals --------------------------------------------------

@dataclass(frozen=True)
class Marginals:
    ab: QuantumState
    ac: QuantumState
    bc: QuantumState
    a: QuantumState
    b: QuantumState
    c: QuantumState

    def cut(self, name: str) -> QuantumState:
        return getattr(self, name.lower())


_CUTS = {"AB": (0, 1), "AC": (0, 2), "BC": (1, 2), "A": (0,), "B": (1,), "C": (2,)}


def reduce_all(psi: PureVector) -> Marginals:
    if psi.nsys != 3:
        raise UsageError(f"need exactly three subsystems, got {psi.nsys}")
    rho = psi.density()
    out = {}
    for name, keep in _CUTS.items():
        m = partial_trace(rho, keep)
        cert = psi.marginal_certs.get(name)
        out[name.lower()] = m.with_certificate(cert) if cert is not None else m
    return Marginals(**out)


# -- builtin registry ------------------------------------------------------

@dataclass(frozen=True)
class Builtin:
    name: str
    state: QuantumState | PureVector

    @property
    def tripartite(self) -> bool:
        return isinstance(self.state, PureVector) and self.state.nsys == 3


def _parse_d(name: str, arg: str | None, default: int | None = None) -> int:
    if arg is None:
        if default is None:
            raise UsageError(f"builtin '{name}' needs a dimension, e.g. '{name}:2'")
        return default
    try:
        return int(arg)
    except ValueError:
        raise UsageError(f"bad dimension in builtin '{name}:{arg}'") from None


def builtin(spec: str) -> Builtin:
    """Resolve a registry name: bell, maxent:d, ghz3, locking:d, antisym3, tiles."""
    name, _, arg = spec.partition(":")
    arg = arg or None
    if name == "bell":
        return Builtin(spec, bell())
    if name == "maxent":
        return Builtin(spec, max_entangled(_parse_d(name, arg)))
    if name == "ghz3":
        return Builtin(spec, ghz3())
    if name == "locking":
        return Builtin(spec, horodecki_locking(_parse_d(name, arg)))
    if name == "antisym3":
        return Builtin(spec, antisymmetric_tripartite())
    if name == "tiles":
        return Builtin(spec, tiles_bound_entangled())
    raise UsageError(f"unknown builtin state '{spec}'")


BUILTIN_NAMES = ("bell", "maxent:2", "maxent:3", "ghz3", "locking:2", "locking:3", "antisym3", "tiles")
