"""The nine separability-criterion classes as three-valued verdicts.

Every check returns a :class:`Verdict`. PPT, RED, MAJ and the three CEN
classes are decided directly from spectra and never return Unknown. SEP,
UND and UND_ONEWAY are only certified by sufficient conditions and may
return Unknown. :func:`classify` runs everything and then propagates along
the implication chains

    SEP => PPT => UND => RED => MAJ => CEN
    SEP => PPT => UND => UND_ONEWAY => CEN_RIGHT

(Yes forwards, No backwards). No edge links RED and UND_ONEWAY.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import ConsistencyError, UsageError
from .linalg import (QuantumState, entropy_from_spectrum, hermitian_spectrum, majorizes,
                     partial_trace, partial_transpose, rank_from_spectrum)
from .states import CertificateKind, StateCertificate

REPORT_SCHEMA = "entangle-hierarchy/report/v1"


class Value(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


YES, NO, UNKNOWN = Value.YES, Value.NO, Value.UNKNOWN


class CriterionClass(str, enum.Enum):
    SEP = "SEP"
    PPT = "PPT"
    UND = "UND"
    UND_ONEWAY = "UND_ONEWAY"
    RED = "RED"
    MAJ = "MAJ"
    CEN = "CEN"
    CEN_LEFT = "CEN_LEFT"
    CEN_RIGHT = "CEN_RIGHT"


C = CriterionClass

# antecedent => consequent
CHAIN_EDGES = (
    (C.SEP, C.PPT),
    (C.PPT, C.UND),
    (C.UND, C.RED),
    (C.RED, C.MAJ),
    (C.MAJ, C.CEN),
    (C.UND, C.UND_ONEWAY),
    (C.UND_ONEWAY, C.CEN_RIGHT),
    (C.CEN, C.CEN_LEFT),
    (C.CEN, C.CEN_RIGHT),
)


@dataclass(frozen=True)
class Verdict:
    value: Value
    witness: dict = field(default_factory=dict)
    provenance: str = "direct"

    @property
    def yes(self) -> bool:
        return self.value is YES

    @property
    def no(self) -> bool:
        return self.value is NO

    @property
    def unknown(self) -> bool:
        return self.value is UNKNOWN

    def to_json(self) -> dict:
        return {"value": self.value.value, "witness": _jsonable(self.witness),
                "provenance": self.provenance}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return round(float(x), 12) + 0.0
    return x


def _cert(rho: QuantumState, cert: StateCertificate | None) -> StateCertificate | None:
    cert = cert if cert is not None else rho.certificate
    if cert is not None and cert.kind is CertificateKind.NONE:
        return None
    return cert


class BipartiteData:
    """Marginals, spectra, entropies and ranks of a bipartite state, computed lazily once."""

    def __init__(self, rho: QuantumState, tol: Tolerances = DEFAULT_TOL):
        if rho.nsys != 2:
            raise UsageError(f"bipartite state required, got dims {rho.dims}")
        self.rho = rho
        self.tol = tol

    @cached_property
    def rho_a(self) -> QuantumState:
        return partial_trace(self.rho, [0])

    @cached_property
    def rho_b(self) -> QuantumState:
        return partial_trace(self.rho, [1])

    @cached_property
    def spec_ab(self) -> np.ndarray:
        return hermitian_spectrum(self.rho.matrix, self.tol)

    @cached_property
    def spec_a(self) -> np.ndarray:
        return hermitian_spectrum(self.rho_a.matrix, self.tol)

    @cached_property
    def spec_b(self) -> np.ndarray:
        return hermitian_spectrum(self.rho_b.matrix, self.tol)

    @cached_property
    def s_ab(self) -> float:
        return entropy_from_spectrum(self.spec_ab, self.tol)

    @cached_property
    def s_a(self) -> float:
        return entropy_from_spectrum(self.spec_a, self.tol)

    @cached_property
    def s_b(self) -> float:
        return entropy_from_spectrum(self.spec_b, self.tol)

    @cached_property
    def rank_ab(self) -> int:
        return rank_from_spectrum(self.spec_ab, self.tol)

    @cached_property
    def rank_a(self) -> int:
        return rank_from_spectrum(self.spec_a, self.tol)

    @cached_property
    def rank_b(self) -> int:
        return rank_from_spectrum(self.spec_b, self.tol)

    @cached_property
    def pt_min(self) -> float:
        return float(hermitian_spectrum(partial_transpose(self.rho, 1), self.tol)[-1])

    @cached_property
    def red_mins(self) -> tuple[float, float]:
        dA, dB = self.rho.dims
        m = self.rho.matrix
        left = np.kron(self.rho_a.matrix, np.eye(dB)) - m
        right = np.kron(np.eye(dA), self.rho_b.matrix) - m
        return (float(hermitian_spectrum(left, self.tol)[-1]),
                float(hermitian_spectrum(right, self.tol)[-1]))

    @property
    def coherent_information(self) -> float:
        """-S(A|B) = S(B) - S(AB)."""
        return self.s_b - self.s_ab

    @property
    def reverse_coherent_information(self) -> float:
        """-S(B|A) = S(A) - S(AB)."""
        return self.s_a - self.s_ab

    @property
    def ranks_equal(self) -> bool:
        return self.rank_ab == max(self.rank_a, self.rank_b)


def _data(rho, tol, data) -> BipartiteData:
    return data if data is not None else BipartiteData(rho, tol)


# -- directly decided classes -------------------------------------------------

def check_ppt(rho: QuantumState, tol: Tolerances = DEFAULT_TOL, *, data=None) -> Verdict:
    d = _data(rho, tol, data)
    lmin = d.pt_min
    return Verdict(YES if lmin >= -tol.psd else NO, {"min_eigenvalue": lmin})


def check_red(rho: QuantumState, tol: Tolerances = DEFAULT_TOL, *, data=None) -> Verdict:
    d = _data(rho, tol, data)
    left, right = d.red_mins
    worst = min(left, right)
    return Verdict(YES if worst >= -tol.psd else NO,
                   {"min_eigenvalue": worst, "left": left, "right": right})


def check_maj(rho: QuantumState, tol: Tolerances = DEFAULT_TOL, *, data=None) -> Verdict:
    d = _data(rho, tol, data)
    left = majorizes(d.spec_a, d.spec_ab, tol)
    right = majorizes(d.spec_b, d.spec_ab, tol)
    witness = {
        "left": {"holds": left.holds, "violated_prefix": left.violated_prefix, "deficit": left.deficit},
        "right": {"holds": right.holds, "violated_prefix": right.violated_prefix, "deficit": right.deficit},
    }
    return Verdict(YES if left.holds and right.holds else NO, witness)


def check_cen(rho: QuantumState, tol: Tolerances = DEFAULT_TOL, *, data=None):
    """Returns ``(CEN_LEFT, CEN_RIGHT, CEN)`` verdicts."""
    d = _data(rho, tol, data)
    gap_l = d.s_ab - d.s_a
    gap_r = d.s_ab - d.s_b
    left = Verdict(YES if gap_l >= -tol.ent else NO, {"gap": gap_l})
    right = Verdict(YES if gap_r >= -tol.ent else NO, {"gap": gap_r})
    both = Verdict(YES if left.yes and right.yes else NO,
                   {"gap_left": gap_l, "gap_right": gap_r}, "conjunction")
    return left, right, both


# -- certificate-based classes ----------------------------------------------

def check_und(rho: QuantumState, cert: StateCertificate | None = None,
              tol: Tolerances = DEFAULT_TOL, *, data=None) -> Verdict:
    """Undistillability from sufficient conditions only.

    Yes: PPT. No: rank(AB) < max marginal rank; positive coherent information
    in either direction (hashing); NPT together with rank(AB) = max marginal
    rank (rule ``prop4_contradiction``); a distillability certificate.
    """
    d = _data(rho, tol, data)
    cert = _cert(rho, cert)
    ppt = check_ppt(rho, tol, data=d)
    if ppt.yes:
        return Verdict(YES, {"min_pt_eigenvalue": ppt.witness["min_eigenvalue"]}, "chain:PPT")
    ranks = {"rank_ab": d.rank_ab, "rank_a": d.rank_a, "rank_b": d.rank_b}
    if d.rank_ab < max(d.rank_a, d.rank_b):
        return Verdict(NO, ranks, "rank_rule")
    ci, rci = d.coherent_information, d.reverse_coherent_information
    if ci > tol.ent or rci > tol.ent:
        return Verdict(NO, {"coherent_information": ci, "reverse_coherent_information": rci},
                       "hashing")
    if d.ranks_equal:
        # UND + rank equality would force SEP, contradicting NPT
        witness = dict(ranks, min_pt_eigenvalue=ppt.witness["min_eigenvalue"],
                       red=check_red(rho, tol, data=d).value, maj=check_maj(rho, tol, data=d).value)
        return Verdict(NO, witness, "prop4_contradiction")
    if cert is not None and (cert.kind is CertificateKind.KNOWN_ONE_WAY_DISTILLABLE
                             or (cert.kind is CertificateKind.KNOWN_ENTANGLED and cert.distillable)):
        return Verdict(NO, {"certificate": cert.to_json()}, "certificate")
    return Verdict(UNKNOWN, {"tried": ["chain:PPT", "rank_rule", "hashing",
                                       "prop4_contradiction", "certificate"]}, "inconclusive")


def check_und_oneway(rho: QuantumState, cert: StateCertificate | None = None,
                     tol: Tolerances = DEFAULT_TOL, *, data=None) -> Verdict:
    """One-way (A -> B) undistillability."""
    d = _data(rho, tol, data)
    cert = _cert(rho, cert)
    und = check_und(rho, cert, tol, data=d)
    if und.yes:
        return Verdict(YES, und.witness, "chain:UND")
    ci = d.coherent_information
    if ci > tol.ent:
        return Verdict(NO, {"coherent_information": ci}, "hashing")
    if cert is not None and cert.kind is CertificateKind.KNOWN_ONE_WAY_DISTILLABLE:
        return Verdict(NO, {"certificate": cert.to_json()}, "certificate")
    return Verdict(UNKNOWN, {"tried": ["chain:UND", "hashing", "certificate"]}, "inconclusive")


LOW_DIM_PPT_SUFFICIENT = {(2, 2), (2, 3), (3, 2)}


def check_sep(rho: QuantumState, cert: StateCertificate | None = None,
              tol: Tolerances = DEFAULT_TOL, *, data=None) -> Verdict:
    d = _data(rho, tol, data)
    cert = _cert(rho, cert)
    ppt = check_ppt(rho, tol, data=d)
    numeric = None
    if ppt.no:
        numeric = Verdict(NO, ppt.witness, "chain:PPT")
    elif tuple(rho.dims) in LOW_DIM_PPT_SUFFICIENT or min(rho.dims) == 1:
        numeric = Verdict(YES, {"min_pt_eigenvalue": ppt.witness["min_eigenvalue"]},
                          "low_dim_ppt")
    elif check_und(rho, cert, tol, data=d).yes and d.ranks_equal:
        numeric = Verdict(YES, {"rank_ab": d.rank_ab, "rank_a": d.rank_a, "rank_b": d.rank_b},
                          "prop4_rank")

    certified = None
    if cert is not None:
        if cert.kind is CertificateKind.SEPARABLE_DECOMPOSITION:
            certified = Verdict(YES, {"certificate": cert.to_json()}, "certificate")
        elif cert.kind in (CertificateKind.KNOWN_ENTANGLED, CertificateKind.KNOWN_ONE_WAY_DISTILLABLE):
            certified = Verdict(NO, {"certificate": cert.to_json()}, "certificate")

    if numeric is not None and certified is not None and numeric.value is not certified.value:
        raise ConsistencyError("certificate contradicts numerical SEP verdict", numeric, certified)
    if numeric is not None:
        return numeric
    if certified is not None:
        return certified
    return Verdict(UNKNOWN, {"tried": ["certificate", "chain:PPT", "low_dim_ppt", "prop4_rank"]},
                   "inconclusive")


# -- full report ----------------------------------------------------------------

@dataclass
class ClassificationReport:
    dims: tuple[int, ...]
    verdicts: dict  # CriterionClass -> Verdict, after propagation
    direct: dict  # CriterionClass -> Verdict, before propagation
    spectra: dict
    entropies: dict
    ranks: dict
    trace: list
    certificate: StateCertificate | None = None

    def __getitem__(self, key) -> Verdict:
        return self.verdicts[CriterionClass(key)]

    def value(self, key) -> Value:
        return self[key].value

    def to_json(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "dims": list(self.dims),
            "verdicts": {c.value: self.verdicts[c].to_json() for c in CriterionClass},
            "spectra": _jsonable(self.spectra),
            "entropies": _jsonable(self.entropies),
            "ranks": _jsonable(self.ranks),
            "propagation": list(self.trace),
            "certificate": self.certificate.to_json() if self.certificate else None,
        }


def chain_violations(verdicts: dict) -> list[str]:
    """Edges ``a => b`` broken by decided verdicts, plus CEN != CEN_LEFT and CEN_RIGHT."""
    out = []
    for a, b in CHAIN_EDGES:
        va, vb = verdicts[a].value, verdicts[b].value
        if va is YES and vb is NO:
            out.append(f"{a.value} Yes but {b.value} No")
    cl, cr, cen = (verdicts[k].value for k in (C.CEN_LEFT, C.CEN_RIGHT, C.CEN))
    if cen is not UNKNOWN and cl is not UNKNOWN and cr is not UNKNOWN:
        if (cen is YES) != (cl is YES and cr is YES):
            out.append("CEN differs from CEN_LEFT and CEN_RIGHT")
    return out


def propagate(direct: dict) -> tuple[dict, list[str]]:
    verdicts = dict(direct)
    trace = []
    changed = True
    while changed:
        changed = False
        for a, b in CHAIN_EDGES:
            va, vb = verdicts[a], verdicts[b]
            if va.yes and vb.no:
                raise ConsistencyError(f"{a.value} Yes contradicts {b.value} No", va, vb)
            if va.yes and vb.unknown:
                verdicts[b] = Verdict(YES, {"from": a.value}, f"propagation:{a.value}")
                trace.append(f"{a.value} Yes -> {b.value} Yes")
                changed = True
            elif vb.no and va.unknown:
                verdicts[a] = Verdict(NO, {"from": b.value}, f"propagation:{b.value}")
                trace.append(f"{b.value} No -> {a.value} No")
                changed = True
    return verdicts, trace


def classify(rho: QuantumState, cert: StateCertificate | None = None,
             tol: Tolerances = DEFAULT_TOL) -> ClassificationReport:
    """All nine verdicts for a bipartite state, closed under the implication chains.

    Raises ConsistencyError if a propagated verdict contradicts a decided one.
    """
    d = BipartiteData(rho, tol)
    cert = _cert(rho, cert)
    cen_l, cen_r, cen = check_cen(rho, tol, data=d)
    direct = {
        C.SEP: check_sep(rho, cert, tol, data=d),
        C.PPT: check_ppt(rho, tol, data=d),
        C.UND: check_und(rho, cert, tol, data=d),
        C.UND_ONEWAY: check_und_oneway(rho, cert, tol, data=d),
        C.RED: check_red(rho, tol, data=d),
        C.MAJ: check_maj(rho, tol, data=d),
        C.CEN: cen,
        C.CEN_LEFT: cen_l,
        C.CEN_RIGHT: cen_r,
    }
    verdicts, trace = propagate(direct)
    # CEN is by definition the conjunction
    cen_value = YES if verdicts[C.CEN_LEFT].yes and verdicts[C.CEN_RIGHT].yes else NO
    if verdicts[C.CEN].value is not cen_value:
        raise ConsistencyError("CEN is not CEN_LEFT and CEN_RIGHT", verdicts[C.CEN], cen_value)
    return ClassificationReport(
        dims=rho.dims,
        verdicts=verdicts,
        direct=direct,
        spectra={"ab": d.spec_ab, "a": d.spec_a, "b": d.spec_b},
        entropies={"ab": d.s_ab, "a": d.s_a, "b": d.s_b,
                   "coherent_information": d.coherent_information},
        ranks={"ab": d.rank_ab, "a": d.rank_a, "b": d.rank_b},
        trace=trace,
        certificate=cert,
    )
