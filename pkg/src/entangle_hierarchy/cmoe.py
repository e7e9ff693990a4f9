"""Numerical checkers for the converse-monogamy collapse statements on tripartite pure states.

Each checker decides whether the hypothesis holds for a given ``|psi>_ABC``
(using the three-valued classifier) and, if it does, whether the claimed
conclusion is observed. Labels follow the usual convention: ``rho_AB``
is the state whose hierarchy collapses, ``rho_AC`` carries the hypothesis.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .criteria import NO, UNKNOWN, YES, ClassificationReport, Value, _jsonable, classify
from .linalg import (PureVector, QuantumState, entropy_from_spectrum, hermitian_spectrum,
                     permute_subsystems, purify, rank_from_spectrum)
from .states import CertificateKind, StateCertificate, reduce_all


class Hypothesis(str, enum.Enum):
    SATISFIED = "Satisfied"
    NOT_SATISFIED = "NotSatisfied"
    UNDECIDABLE = "Undecidable"


class Conclusion(str, enum.Enum):
    VERIFIED = "Verified"
    VIOLATED = "Violated"
    VACUOUS = "Vacuous"
    UNDECIDABLE = "Undecidable"


@dataclass
class TheoremCheck:
    theorem: str
    hypothesis: Hypothesis
    conclusion: Conclusion
    evidence: dict = field(default_factory=dict)
    counterexample: dict | None = None

    def __post_init__(self):
        if self.hypothesis is not Hypothesis.SATISFIED and self.conclusion is not Conclusion.VACUOUS:
            raise ValueError("conclusion must be Vacuous when the hypothesis is not satisfied")

    @property
    def violated(self) -> bool:
        return self.conclusion is Conclusion.VIOLATED

    def to_json(self) -> dict:
        out = {"theorem": self.theorem, "hypothesis": self.hypothesis.value,
               "conclusion": self.conclusion.value, "evidence": _jsonable(self.evidence)}
        if self.counterexample is not None:
            out["counterexample"] = _jsonable(self.counterexample)
        return out


def _hyp(v: Value) -> Hypothesis:
    return {YES: Hypothesis.SATISFIED, NO: Hypothesis.NOT_SATISFIED,
            UNKNOWN: Hypothesis.UNDECIDABLE}[v]


def _vacuous(theorem: str, hyp: Hypothesis, evidence: dict) -> TheoremCheck:
    return TheoremCheck(theorem, hyp, Conclusion.VACUOUS, evidence)


def consistent(values: Sequence[Value]) -> bool:
    """No Yes alongside a No; Unknown is compatible with anything."""
    return not (YES in values and NO in values)


def _relabel_cert(cert: StateCertificate, flipped: bool) -> StateCertificate | None:
    if not flipped:
        return cert
    if cert.kind is CertificateKind.SEPARABLE_DECOMPOSITION:
        payload = tuple((p, b, a) for p, a, b in cert.payload)
        return StateCertificate(cert.kind, payload, cert.distillable, cert.source)
    if cert.kind is CertificateKind.KNOWN_ONE_WAY_DISTILLABLE:
        # direction-dependent; the reversed direction is not certified
        return StateCertificate(CertificateKind.KNOWN_ENTANGLED, distillable=True, source=cert.source)
    return cert


def _prepare(psi: PureVector, certs, perm):
    """Apply the relabelling ``perm`` (new subsystem k = old perm[k]) and merge certificates."""
    certs = {**psi.marginal_certs, **(certs or {})}
    if perm is None or tuple(perm) == (0, 1, 2):
        return psi, reduce_all(psi), certs
    perm = tuple(perm)
    new_of_old = {perm[k]: k for k in range(3)}
    moved = {}
    for label, cert in certs.items():
        i, j = ("ABC".index(ch) for ch in label)
        ni, nj = new_of_old[i], new_of_old[j]
        key = "ABC"[min(ni, nj)] + "ABC"[max(ni, nj)]
        moved[key] = _relabel_cert(cert, ni > nj)
    psi = PureVector(permute_subsystems(psi, perm).amplitudes, tuple(psi.dims[p] for p in perm))
    return psi, reduce_all(psi), moved


def _counterexample(psi: PureVector, reports: Mapping[str, ClassificationReport]) -> dict:
    return {"dims": list(psi.dims), "re": psi.amplitudes.real, "im": psi.amplitudes.imag,
            "reports": {k: r.to_json() for k, r in reports.items()}}


def _values(report: ClassificationReport, keys) -> dict:
    return {k: report.value(k).value for k in keys}


def _spectrum(rho: QuantumState, tol: Tolerances) -> np.ndarray:
    return hermitian_spectrum(rho.matrix, tol)


def _isospectral(x: QuantumState, y: QuantumState, tol: Tolerances) -> dict:
    sx, sy = _spectrum(x, tol), _spectrum(y, tol)
    n = max(sx.size, sy.size)
    sx, sy = np.pad(sx, (0, n - sx.size)), np.pad(sy, (0, n - sy.size))
    return {
        "entropy_gap": entropy_from_spectrum(sx, tol) - entropy_from_spectrum(sy, tol),
        "spectrum_residual": float(np.max(np.abs(sx - sy))),
        "ranks": [rank_from_spectrum(sx, tol), rank_from_spectrum(sy, tol)],
    }


THEOREM1_CLASSES = ("SEP", "PPT", "UND", "UND_ONEWAY", "RED", "MAJ", "CEN", "CEN_RIGHT")


def verify_theorem1(psi: PureVector, certs=None, tol: Tolerances = DEFAULT_TOL,
                    perm=None) -> TheoremCheck:
    """rho_AC in UND  =>  eight classes of rho_AB coincide."""
    psi, m, certs = _prepare(psi, certs, perm)
    r_ac = classify(m.ac, certs.get("AC"), tol)
    hyp = _hyp(r_ac.value("UND"))
    evidence = {"AC": _values(r_ac, ("PPT", "UND", "UND_ONEWAY")),
                "propositions": _prop_tags(r_ac, "theorem1")}
    if hyp is not Hypothesis.SATISFIED:
        return _vacuous("theorem1", hyp, evidence)

    r_ab = classify(m.ab, certs.get("AB"), tol)
    vals = _values(r_ab, THEOREM1_CLASSES)
    evidence["AB"] = vals
    ok = consistent([Value(v) for v in vals.values()])
    if r_ab["CEN_RIGHT"].yes:
        # proof replay: S(C) = S(AC), isospectral, equal ranks
        iso = _isospectral(m.c, m.ac, tol)
        evidence["replay"] = iso
        ok = ok and (abs(iso["entropy_gap"]) <= tol.ent and iso["spectrum_residual"] <= tol.eig
                     and iso["ranks"][0] == iso["ranks"][1])
    return _finish("theorem1", ok, evidence, psi, {"AC": r_ac, "AB": r_ab})


def _prop_tags(r_ac: ClassificationReport, theorem: str) -> list[str]:
    tags = []
    if theorem == "theorem1":
        if r_ac["PPT"].yes:
            tags.append("prop1")
        if r_ac["UND"].yes:
            tags.append("prop3")
    elif theorem == "theorem2" and r_ac["UND_ONEWAY"].yes:
        tags.append("prop2")
    return tags


def _finish(name, ok, evidence, psi, reports, undecidable=False) -> TheoremCheck:
    if ok is None or undecidable:
        return TheoremCheck(name, Hypothesis.SATISFIED, Conclusion.UNDECIDABLE, evidence)
    if ok:
        return TheoremCheck(name, Hypothesis.SATISFIED, Conclusion.VERIFIED, evidence)
    return TheoremCheck(name, Hypothesis.SATISFIED, Conclusion.VIOLATED, evidence,
                        _counterexample(psi, reports))


def verify_theorem2(psi: PureVector, certs=None, tol: Tolerances = DEFAULT_TOL,
                    perm=None) -> TheoremCheck:
    """rho_AC in CEN_RIGHT  =>  SEP, PPT, UND coincide on rho_AB."""
    psi, m, certs = _prepare(psi, certs, perm)
    r_ac = classify(m.ac, certs.get("AC"), tol)
    hyp = _hyp(r_ac.value("CEN_RIGHT"))
    evidence = {"AC": _values(r_ac, ("CEN_RIGHT", "UND_ONEWAY", "MAJ")),
                "propositions": _prop_tags(r_ac, "theorem2")}
    if hyp is not Hypothesis.SATISFIED:
        return _vacuous("theorem2", hyp, evidence)

    r_ab = classify(m.ab, certs.get("AB"), tol)
    vals = _values(r_ab, ("SEP", "PPT", "UND"))
    evidence["AB"] = vals
    ok = consistent([Value(v) for v in vals.values()])
    if r_ab["UND"].yes:
        iso = _isospectral(m.ab, m.b, tol)
        evidence["replay"] = dict(iso, sep_provenance=r_ab["SEP"].provenance)
        ok = ok and (abs(iso["entropy_gap"]) <= tol.ent and iso["ranks"][0] == iso["ranks"][1]
                     and r_ab["SEP"].yes)
    return _finish("theorem2", ok, evidence, psi, {"AC": r_ac, "AB": r_ab})


def verify_prop_sep_entropy(psi: PureVector, certs=None, tol: Tolerances = DEFAULT_TOL,
                            perm=None) -> TheoremCheck:
    """rho_AC in SEP  =>  (rho_AB in SEP  <=>  S(AB) = S(B))."""
    psi, m, certs = _prepare(psi, certs, perm)
    r_ac = classify(m.ac, certs.get("AC"), tol)
    hyp = _hyp(r_ac.value("SEP"))
    evidence = {"AC": _values(r_ac, ("SEP",))}
    if hyp is not Hypothesis.SATISFIED:
        return _vacuous("prop5", hyp, evidence)
    r_ab = classify(m.ab, certs.get("AB"), tol)
    gap = r_ab.entropies["ab"] - r_ab.entropies["b"]
    evidence.update({"AB": _values(r_ab, ("SEP",)), "entropy_gap": gap})
    if r_ab["SEP"].unknown:
        return _finish("prop5", None, evidence, psi, {})
    ok = r_ab["SEP"].yes == (abs(gap) <= tol.ent)
    return _finish("prop5", ok, evidence, psi, {"AC": r_ac, "AB": r_ab})


def _clause(hyp_value: Value, conclusions: Sequence[Value]) -> tuple[Hypothesis, Conclusion]:
    hyp = _hyp(hyp_value)
    if hyp is not Hypothesis.SATISFIED:
        return hyp, Conclusion.VACUOUS
    if any(v is YES for v in conclusions):
        return hyp, Conclusion.VIOLATED
    if any(v is UNKNOWN for v in conclusions):
        return hyp, Conclusion.UNDECIDABLE
    return hyp, Conclusion.VERIFIED


def verify_theorem3(psi: PureVector, certs=None, tol: Tolerances = DEFAULT_TOL,
                    perm=None) -> TheoremCheck:
    """rho_AC, rho_BC entangled: (i) rho_AB in CEN_RIGHT => both distillable;
    (ii) rho_AB in UND => both one-way distillable.

    Each clause is judged separately. Distillability of the complements is
    "UND verdict No"; one-way distillability is "UND_ONEWAY verdict No",
    with the complement classified as (A, C) and (B, C), i.e. C receives.
    """
    psi, m, certs = _prepare(psi, certs, perm)
    r_ac = classify(m.ac, certs.get("AC"), tol)
    r_bc = classify(m.bc, certs.get("BC"), tol)
    sep = [r_ac.value("SEP"), r_bc.value("SEP")]
    outer = NO if YES in sep else (YES if sep == [NO, NO] else UNKNOWN)
    evidence = {"AC": _values(r_ac, ("SEP", "UND", "UND_ONEWAY")),
                "BC": _values(r_bc, ("SEP", "UND", "UND_ONEWAY"))}
    if outer is not YES:
        return _vacuous("theorem3", _hyp(outer), evidence)

    r_ab = classify(m.ab, certs.get("AB"), tol)
    evidence["AB"] = _values(r_ab, ("CEN_RIGHT", "CEN_LEFT", "UND"))
    # a conclusion value of Yes here means "undistillable", which refutes the clause
    c1 = _clause(r_ab.value("CEN_RIGHT"), [r_ac.value("UND"), r_bc.value("UND")])
    c2 = _clause(r_ab.value("UND"), [r_ac.value("UND_ONEWAY"), r_bc.value("UND_ONEWAY")])
    evidence["clauses"] = {"i": {"hypothesis": c1[0].value, "conclusion": c1[1].value},
                           "ii": {"hypothesis": c2[0].value, "conclusion": c2[1].value}}
    evidence["conditional_entropies"] = {
        "S(A|C)": r_ac.entropies["ab"] - r_ac.entropies["b"],
        "S(B|C)": r_bc.entropies["ab"] - r_bc.entropies["b"],
    }
    hyps = {c1[0], c2[0]}
    concl = {c1[1], c2[1]}
    if Hypothesis.SATISFIED not in hyps:
        hyp = Hypothesis.UNDECIDABLE if Hypothesis.UNDECIDABLE in hyps else Hypothesis.NOT_SATISFIED
        return _vacuous("theorem3", hyp, evidence)
    if Conclusion.VIOLATED in concl:
        return _finish("theorem3", False, evidence, psi, {"AB": r_ab, "AC": r_ac, "BC": r_bc})
    if Conclusion.UNDECIDABLE in concl:
        return _finish("theorem3", None, evidence, psi, {})
    return _finish("theorem3", True, evidence, psi, {})


def verify_corollary1(rho_ab: QuantumState, cert: StateCertificate | None = None,
                      tol: Tolerances = DEFAULT_TOL) -> TheoremCheck:
    """Bound entangled rho_AB  =>  S(A|C) < 0 on the complement of a purification."""
    r_ab = classify(rho_ab, cert, tol)
    evidence = {"AB": _values(r_ab, ("PPT", "UND", "SEP"))}
    if r_ab["UND"].yes and r_ab["SEP"].no:
        hyp = Hypothesis.SATISFIED
    elif r_ab["UND"].no or r_ab["SEP"].yes:
        hyp = Hypothesis.NOT_SATISFIED
    else:
        hyp = Hypothesis.UNDECIDABLE
    if hyp is not Hypothesis.SATISFIED:
        return _vacuous("corollary1", hyp, evidence)
    psi = purify(rho_ab, tol)
    m = reduce_all(psi)
    s_ac = entropy_from_spectrum(_spectrum(m.ac, tol), tol)
    s_c = entropy_from_spectrum(_spectrum(m.c, tol), tol)
    evidence["S(A|C)"] = s_ac - s_c
    ok = s_ac - s_c < -tol.ent
    return _finish("corollary1", ok, evidence, psi, {"AB": r_ab})


def _and(*vals: Value) -> Value:
    if NO in vals:
        return NO
    if UNKNOWN in vals:
        return UNKNOWN
    return YES


def _or(*vals: Value) -> Value:
    if YES in vals:
        return YES
    if UNKNOWN in vals:
        return UNKNOWN
    return NO


def verify_corollary3(psi: PureVector, certs=None, tol: Tolerances = DEFAULT_TOL,
                      perm=None) -> TheoremCheck:
    """Five joint conditions on (rho_AB, rho_AC) must agree wherever decidable."""
    psi, m, certs = _prepare(psi, certs, perm)
    ab = classify(m.ab, certs.get("AB"), tol)
    ac = classify(m.ac, certs.get("AC"), tol)
    v = lambda r, k: r.value(k)  # noqa: E731
    conditions = {
        "1": _and(v(ab, "SEP"), v(ac, "SEP")),
        "2": _and(v(ab, "PPT"), v(ac, "PPT")),
        "3": _and(v(ab, "UND"), v(ac, "UND")),
        "4": _or(_and(v(ab, "UND"), v(ac, "UND_ONEWAY")), _and(v(ac, "UND"), v(ab, "UND_ONEWAY"))),
        "5": _or(_and(v(ab, "UND"), v(ac, "CEN_RIGHT")), _and(v(ac, "UND"), v(ab, "CEN_RIGHT"))),
    }
    evidence = {"conditions": {k: c.value for k, c in conditions.items()},
                "AB": _values(ab, ("SEP", "PPT", "UND", "UND_ONEWAY", "CEN_RIGHT")),
                "AC": _values(ac, ("SEP", "PPT", "UND", "UND_ONEWAY", "CEN_RIGHT"))}
    ok = consistent(list(conditions.values()))
    if ok and all(c is UNKNOWN for c in conditions.values()):
        return _finish("corollary3", None, evidence, psi, {})
    return _finish("corollary3", ok, evidence, psi, {"AB": ab, "AC": ac})
