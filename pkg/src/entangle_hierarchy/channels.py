"""Channels as Stinespring isometries A -> B (x) C.

The output ordering of the isometry matrix is ``(b, c)`` with ``b`` most
significant, i.e. ``V[b * d_c + c, a]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cmoe import Conclusion, Hypothesis, TheoremCheck
from .config import DEFAULT_TOL, MAX_DIM, Tolerances
from .criteria import Verdict, check_ppt, check_sep
from .errors import DimensionError, InvalidStateError, UsageError
from .linalg import (QuantumState, hermitian_eig, partial_trace, partial_trace_matrix,
                     rank_from_spectrum, von_neumann_entropy)
from .states import (StateCertificate, _random_density, _random_pure, _rng, derive_seed,
                     max_entangled, tiles_bound_entangled)


@dataclass(frozen=True, eq=False)
class ChannelIsometry:
    matrix: np.ndarray  # (d_b * d_c) x d_a
    d_a: int
    d_b: int
    d_c: int
    choi_certificate: StateCertificate | None = None

    def __init__(self, matrix, d_a: int, d_b: int, d_c: int, choi_certificate=None,
                 *, tol: Tolerances = DEFAULT_TOL):
        v = np.array(matrix, dtype=complex)
        if v.shape != (d_b * d_c, d_a):
            raise DimensionError(f"isometry shape {v.shape} != ({d_b * d_c}, {d_a})")
        if d_a * d_b * d_c > MAX_DIM:
            raise DimensionError(f"channel dimension exceeds {MAX_DIM}")
        if not np.all(np.isfinite(v)):
            raise InvalidStateError("isometry has non-finite entries")
        defect = float(np.linalg.norm(v.conj().T @ v - np.eye(d_a)))
        if defect > tol.eig:
            raise InvalidStateError(f"not an isometry (defect {defect:.3e})")
        v.flags.writeable = False
        for name, val in (("matrix", v), ("d_a", int(d_a)), ("d_b", int(d_b)), ("d_c", int(d_c)),
                          ("choi_certificate", choi_certificate)):
            object.__setattr__(self, name, val)

    @property
    def defect(self) -> float:
        return float(np.linalg.norm(self.matrix.conj().T @ self.matrix - np.eye(self.d_a)))

    def complementary(self) -> "ChannelIsometry":
        """Same dilation with B and C exchanged."""
        v = self.matrix.reshape(self.d_b, self.d_c, self.d_a).transpose(1, 0, 2)
        return ChannelIsometry(v.reshape(-1, self.d_a), self.d_a, self.d_c, self.d_b)


def _check_input(v: ChannelIsometry, rho: QuantumState) -> None:
    if rho.dim != v.d_a:
        raise UsageError(f"input dimension {rho.dim} != channel input {v.d_a}")


def _dilate(v: ChannelIsometry, rho: QuantumState) -> np.ndarray:
    return v.matrix @ rho.matrix @ v.matrix.conj().T


def apply_channel(v: ChannelIsometry, rho: QuantumState) -> QuantumState:
    """Tr_C(V rho V^dag)."""
    _check_input(v, rho)
    out = partial_trace_matrix(_dilate(v, rho), (v.d_b, v.d_c), [0])
    return QuantumState((out + out.conj().T) / 2, (v.d_b,), validate=False)


def complementary_apply(v: ChannelIsometry, rho: QuantumState) -> QuantumState:
    """Tr_B(V rho V^dag)."""
    _check_input(v, rho)
    out = partial_trace_matrix(_dilate(v, rho), (v.d_b, v.d_c), [1])
    return QuantumState((out + out.conj().T) / 2, (v.d_c,), validate=False)


def choi_state(v: ChannelIsometry) -> QuantumState:
    """(id (x) E)(|psi+><psi+|) on dims (d_a, d_b)."""
    psi = max_entangled(v.d_a).amplitudes if v.d_a > 1 else np.ones(1, dtype=complex)
    w = np.kron(np.eye(v.d_a), v.matrix) @ psi  # on (A, B, C)
    full = np.outer(w, w.conj())
    out = partial_trace_matrix(full, (v.d_a, v.d_b, v.d_c), [0, 1])
    return QuantumState((out + out.conj().T) / 2, (v.d_a, v.d_b), v.choi_certificate,
                        validate=False)


# -- constructors ---------------------------------------------------------------

def from_kraus(kraus) -> ChannelIsometry:
    """V = sum_k K_k (x) |k>_C."""
    kraus = [np.asarray(k, dtype=complex) for k in kraus]
    d_b, d_a = kraus[0].shape
    v = np.stack(kraus, axis=1)  # (d_b, d_c, d_a)
    return ChannelIsometry(v.reshape(-1, d_a), d_a, d_b, len(kraus))


def from_choi(choi: QuantumState, tol: Tolerances = DEFAULT_TOL) -> ChannelIsometry:
    """Minimal dilation of the channel whose Choi state is ``choi``.

    Requires the A-marginal to be maximally mixed (trace preservation).
    The environment dimension equals the Choi rank.
    """
    d_a, d_b = choi.dims
    marg = partial_trace(choi, [0]).matrix
    if np.max(np.abs(marg - np.eye(d_a) / d_a)) > tol.eig:
        raise InvalidStateError("Choi A-marginal is not maximally mixed")
    w, vecs = hermitian_eig(choi.matrix, tol)
    r = rank_from_spectrum(w, tol)
    # K_k[b, a] = sqrt(d_a * w_k) * v_k[a, b]
    kraus = [np.sqrt(d_a * max(w[k], 0.0)) * vecs[:, k].reshape(d_a, d_b).T for k in range(r)]
    ch = from_kraus(kraus)
    return ChannelIsometry(ch.matrix, ch.d_a, ch.d_b, ch.d_c, choi.certificate, tol=tol)


def normalize_choi_marginal(rho: QuantumState) -> QuantumState:
    """Local filter (M (x) I) rho (M (x) I)^dag with M = (d_a rho_A)^(-1/2).

    Invertible local filtering preserves PPT and entanglement, so
    entanglement-type certificates carry over.
    """
    d_a, d_b = rho.dims
    w, u = np.linalg.eigh(partial_trace(rho, [0]).matrix)
    if np.min(w) <= 0:
        raise InvalidStateError("A-marginal must be full rank")
    m = u @ np.diag(1 / np.sqrt(d_a * w)) @ u.conj().T
    big = np.kron(m, np.eye(d_b))
    out = big @ rho.matrix @ big.conj().T
    out = (out + out.conj().T) / 2
    return QuantumState(out / np.trace(out).real, rho.dims, rho.certificate)


def identity_channel(d: int) -> ChannelIsometry:
    return ChannelIsometry(np.eye(d), d, d, 1)


def completely_depolarizing(d: int) -> ChannelIsometry:
    """rho -> I/d with Kraus |i><j| / sqrt(d)."""
    kraus = []
    for i in range(d):
        for j in range(d):
            k = np.zeros((d, d), dtype=complex)
            k[i, j] = 1 / np.sqrt(d)
            kraus.append(k)
    return from_kraus(kraus)


def dephasing_to_environment(d: int) -> ChannelIsometry:
    """|a> -> |a>_B |a>_C (complete dephasing; the environment keeps a copy)."""
    v = np.zeros((d * d, d), dtype=complex)
    for a in range(d):
        v[a * d + a, a] = 1.0
    return ChannelIsometry(v, d, d, d)


def replacement_to_environment(d: int) -> ChannelIsometry:
    """|a> -> |0>_B |a>_C: the input goes entirely to the environment."""
    v = np.zeros((d * d, d), dtype=complex)
    for a in range(d):
        v[a, a] = 1.0  # b = 0, c = a
    return ChannelIsometry(v, d, d, d)


def random_isometry(d_a: int, d_b: int, d_c: int, seed: int) -> ChannelIsometry:
    if d_b * d_c < d_a:
        raise UsageError("output dimension d_b * d_c must be >= d_a")
    rng = _rng(seed)
    g = rng.standard_normal((d_b * d_c, d_a)) + 1j * rng.standard_normal((d_b * d_c, d_a))
    q, r = np.linalg.qr(g)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return ChannelIsometry(q, d_a, d_b, d_c)


# -- information quantities -------------------------------------------------------

def coherent_information(rho: QuantumState, tol: Tolerances = DEFAULT_TOL) -> float:
    """-S(A|B) = S(B) - S(AB), in bits."""
    if rho.nsys != 2:
        raise UsageError("bipartite state required")
    return (von_neumann_entropy(partial_trace(rho, [1]), tol)
            - von_neumann_entropy(rho, tol))


def hashing_bound(rho: QuantumState, tol: Tolerances = DEFAULT_TOL) -> float:
    return max(0.0, coherent_information(rho, tol))


def output_coherent_information(v: ChannelIsometry, rho: QuantumState,
                                tol: Tolerances = DEFAULT_TOL) -> float:
    """S(E(rho)) - S(E^c(rho))."""
    return (von_neumann_entropy(apply_channel(v, rho), tol)
            - von_neumann_entropy(complementary_apply(v, rho), tol))


def q1_candidates(v: ChannelIsometry, samples: int, seed: int,
                  tol: Tolerances = DEFAULT_TOL) -> list[float]:
    """Coherent information of the Choi state followed by ``samples`` sampled inputs.

    Candidate ``i`` uses its own derived seed, so a longer run extends a
    shorter one.
    """
    values = [coherent_information(choi_state(v), tol)]
    for i in range(samples):
        rng = _rng(derive_seed(seed, i))
        if i % 2 == 0:
            x = _random_pure(rng, v.d_a)
            rho = np.outer(x, x.conj())
        else:
            rho = _random_density(rng, v.d_a, int(rng.integers(1, v.d_a + 1)))
        values.append(output_coherent_information(v, QuantumState(rho, validate=False), tol))
    return values


def q1_lower_bound_estimate(v: ChannelIsometry, samples: int, seed: int,
                            tol: Tolerances = DEFAULT_TOL) -> float:
    """Certified lower bound on the one-shot quantum capacity, clamped at 0.

    The value is the best candidate found, not an estimate of the maximum.
    """
    if samples < 1:
        raise UsageError("samples must be >= 1")
    return max(0.0, max(q1_candidates(v, samples, seed, tol)))


@dataclass
class ChannelReport:
    ppt_channel: Verdict
    entanglement_breaking: Verdict
    positive_capacity_lower_bound: float
    complementary_lower_bound: float
    corollary2: TheoremCheck

    def to_json(self) -> dict:
        return {"ppt_channel": self.ppt_channel.to_json(),
                "entanglement_breaking": self.entanglement_breaking.to_json(),
                "positive_capacity_lower_bound": round(self.positive_capacity_lower_bound, 12),
                "complementary_lower_bound": round(self.complementary_lower_bound, 12),
                "corollary2": self.corollary2.to_json()}


def classify_channel(v: ChannelIsometry, samples: int = 64, seed: int = 0,
                     tol: Tolerances = DEFAULT_TOL) -> ChannelReport:
    """PPT / entanglement-breaking verdicts from the Choi state, plus capacity bounds.

    A PPT channel that is not certified entanglement-breaking must have a
    complementary channel with strictly positive coherent information;
    that falsifiable direction is reported as ``corollary2``.
    """
    choi = choi_state(v)
    ppt = check_ppt(choi, tol)
    eb = check_sep(choi, v.choi_certificate, tol)
    q1 = q1_lower_bound_estimate(v, samples, seed, tol)
    q1c = q1_lower_bound_estimate(v.complementary(), samples, seed, tol)
    evidence = {"ppt": ppt.value, "entanglement_breaking": eb.value, "complementary_q1": q1c}
    if ppt.yes and not eb.yes:
        concl = Conclusion.VERIFIED if q1c > tol.ent else Conclusion.VIOLATED
        check = TheoremCheck("corollary2", Hypothesis.SATISFIED, concl, evidence)
    else:
        hyp = Hypothesis.NOT_SATISFIED
        check = TheoremCheck("corollary2", hyp, Conclusion.VACUOUS, evidence)
    return ChannelReport(ppt, eb, q1, q1c, check)


# -- file format --------------------------------------------------------------------

def channel_to_json(v: ChannelIsometry) -> dict:
    flat = v.matrix.reshape(-1)
    return {"d_a": v.d_a, "d_b": v.d_b, "d_c": v.d_c,
            "re": flat.real.tolist(), "im": flat.imag.tolist()}


def channel_from_json(obj: dict, tol: Tolerances = DEFAULT_TOL) -> ChannelIsometry:
    try:
        d_a, d_b, d_c = (int(obj[k]) for k in ("d_a", "d_b", "d_c"))
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidStateError(f"malformed channel file: {exc}") from None
    n = d_a * d_b * d_c
    if re.size != n or im.size != n:
        raise InvalidStateError(f"expected {n} entries in re/im, got {re.size}/{im.size}")
    return ChannelIsometry((re + 1j * im).reshape(d_b * d_c, d_a), d_a, d_b, d_c, tol=tol)


def load_channel(path, tol: Tolerances = DEFAULT_TOL) -> ChannelIsometry:
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidStateError(f"cannot read {path}: {exc}") from None
    return channel_from_json(obj, tol)


def save_channel(v: ChannelIsometry, path) -> None:
    Path(path).write_text(json.dumps(channel_to_json(v)))


def tiles_channel() -> ChannelIsometry:
    """PPT, not entanglement-breaking: the channel whose Choi state is the filtered tiles state."""
    return from_choi(normalize_choi_marginal(tiles_bound_entangled()))
