"""Seeded verification sweeps: hierarchy soundness and the theorem checkers.

Every sweep yields one JSON-ready record per case and ends with a summary
record. Case ``i`` draws from its own derived seed, so records do not depend
on how many samples precede them.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from typing import Iterator

import numpy as np

from . import cmoe
from .config import DEFAULT_TOL, Tolerances
from .criteria import CriterionClass, chain_violations, classify
from .errors import ConsistencyError
from .channels import normalize_choi_marginal
from .linalg import PureVector, QuantumState, permute_subsystems, purify, swap_bipartite
from .states import (KNOWN_ENTANGLED, CertificateKind, StateCertificate, _random_density,
                     _random_pure, _rng, antisymmetric_tripartite, bell, derive_seed, ghz3,
                     horodecki_locking, local_unitary_orbit, locking_purification, max_entangled,
                     random_density, random_pure, random_separable, random_unitary, reduce_all,
                     tiles_bound_entangled)

SUITES = ("hierarchy", "theorem1", "theorem2", "theorem3", "prop5", "corollary1", "corollary3")

TRIPARTITE_CHECKERS = {
    "theorem1": cmoe.verify_theorem1,
    "theorem2": cmoe.verify_theorem2,
    "theorem3": cmoe.verify_theorem3,
    "prop5": cmoe.verify_prop_sep_entropy,
    "corollary3": cmoe.verify_corollary3,
}

# family cycles; repeated entries weight the constructions that make a theorem non-vacuous
FAMILIES = {
    "theorem1": ("separable_purification", "pure_factor_purification", "classical_purification",
                 "haar", "tiles_purification", "locking_purification"),
    "theorem2": ("separable_purification", "locking_purification", "haar",
                 "pure_factor_purification", "classical_purification", "tiles_purification"),
    "prop5": ("separable_purification", "pure_factor_purification", "classical_purification",
              "haar", "tiles_purification", "locking_purification"),
    "theorem3": ("tiles_purification", "haar", "tiles_purification", "locking_purification",
                 "tiles_purification", "separable_purification"),
    "corollary3": ("separable_purification", "tiles_purification", "haar",
                   "classical_purification", "locking_purification", "pure_factor_purification"),
    "corollary1": ("tiles", "tiles", "random_separable", "tiles", "random_density", "tiles"),
}


# -- tripartite constructions ---------------------------------------------------

def _purify_as_ac(rho_ac: QuantumState, cert: StateCertificate | None) -> PureVector:
    """Purify rho on (A, C); the purifying system becomes B."""
    psi = permute_subsystems(purify(rho_ac), (0, 2, 1))
    return PureVector(psi.amplitudes, psi.dims, {"AC": cert} if cert is not None else None)


def _local_rotate(psi: PureVector, rng) -> PureVector:
    u = np.ones((1, 1))
    for d in psi.dims:
        u = np.kron(u, random_unitary(d, rng))
    return PureVector(u @ psi.amplitudes, psi.dims, psi.marginal_certs)


def tripartite_case(family: str, seed: int, dims=None) -> PureVector:
    rng = _rng(seed)
    dA, dC = (int(rng.integers(2, 4)), int(rng.integers(2, 4)))
    if family == "separable_purification":
        terms = int(rng.integers(1, dA * dC + 1))
        rho = random_separable(dA, dC, terms, int(rng.integers(2**63)))
        return _purify_as_ac(rho, rho.certificate)
    if family == "pure_factor_purification":
        a = _random_pure(rng, dA)
        pa = np.outer(a, a.conj())
        sc = _random_density(rng, dC, int(rng.integers(1, dC + 1)))
        cert = StateCertificate(CertificateKind.SEPARABLE_DECOMPOSITION, ((1.0, pa, sc),),
                                source="pure factor")
        return _purify_as_ac(QuantumState(np.kron(pa, sc), (dA, dC), cert), cert)
    if family == "classical_purification":
        k = min(dA, dC)
        ps = rng.dirichlet(np.ones(k))
        ua, uc = random_unitary(dA, rng), random_unitary(dC, rng)
        payload = tuple((float(p), np.outer(ua[:, i], ua[:, i].conj()),
                         np.outer(uc[:, i], uc[:, i].conj())) for i, p in enumerate(ps))
        rho = sum(p * np.kron(a, c) for p, a, c in payload)
        cert = StateCertificate(CertificateKind.SEPARABLE_DECOMPOSITION, payload,
                                source="classically correlated")
        return _purify_as_ac(QuantumState(rho, (dA, dC), cert), cert)
    if family == "haar":
        if dims is not None and len(dims) == 3:
            shape = tuple(dims)
        else:
            shape = tuple(int(x) for x in rng.integers(2, 4, size=3))
        return random_pure(shape, int(rng.integers(2**63)))
    if family == "locking_purification":
        return _local_rotate(locking_purification(int(rng.integers(2, 4))), rng)
    if family == "tiles_purification":
        rho = local_unitary_orbit(tiles_bound_entangled(), int(rng.integers(2**63)))
        psi = purify(rho)
        return _local_rotate(PureVector(psi.amplitudes, psi.dims, {"AB": KNOWN_ENTANGLED}), rng)
    raise ValueError(f"unknown family {family!r}")


def filtered_tiles_relabelled() -> PureVector:
    """Purification with rho_BC a locally filtered tiles state (rho_C = I/3), purifier first.

    Here rho_AB is strictly in CEN_RIGHT and rho_AC is one-way distillable,
    yet rho_BC is PPT, so the BC half of the ``theorem3`` clause (i) fails.
    The AC half and clause (ii) are unaffected.
    """
    rho = swap_bipartite(normalize_choi_marginal(swap_bipartite(tiles_bound_entangled())))
    psi = permute_subsystems(purify(rho), (2, 0, 1))
    return PureVector(psi.amplitudes, psi.dims, {"BC": KNOWN_ENTANGLED})


def bipartite_case(family: str, seed: int, dims=None) -> QuantumState:
    rng = _rng(seed)
    if dims is not None and len(dims) == 2:
        dA, dB = dims
    else:
        dA, dB = [(2, 2), (2, 3), (3, 3)][int(rng.integers(3))]
    n = dA * dB
    if family == "tiles":
        return local_unitary_orbit(tiles_bound_entangled(), int(rng.integers(2**63)))
    if family == "random_separable":
        return random_separable(dA, dB, int(rng.integers(1, n + 2)), int(rng.integers(2**63)))
    if family == "random_density":
        return random_density(n, int(rng.integers(1, n + 1)), int(rng.integers(2**63)), (dA, dB))
    raise ValueError(f"unknown family {family!r}")


def tripartite_builtins() -> list[tuple[str, PureVector]]:
    tiles = purify(tiles_bound_entangled())
    return [
        ("ghz3", ghz3()),
        ("antisym3", antisymmetric_tripartite()),
        ("locking:2", locking_purification(2)),
        ("locking:3", locking_purification(3)),
        ("tiles", PureVector(tiles.amplitudes, tiles.dims, {"AB": KNOWN_ENTANGLED})),
    ]


def bipartite_builtins() -> list[tuple[str, QuantumState]]:
    out = [("bell", bell()), ("maxent:3", max_entangled(3).density()),
           ("locking:2", horodecki_locking(2)), ("locking:3", horodecki_locking(3)),
           ("tiles", tiles_bound_entangled())]
    for name, psi in (("ghz3", ghz3()), ("antisym3", antisymmetric_tripartite())):
        m = reduce_all(psi)
        for cut in ("AB", "AC", "BC"):
            out.append((f"{name}/{cut}", m.cut(cut)))
    return out


# -- runners ----------------------------------------------------------------------

def _hierarchy_record(index, family, rho: QuantumState, tol) -> dict:
    rec = {"suite": "hierarchy", "index": index, "family": family, "dims": list(rho.dims)}
    try:
        report = classify(rho, tol=tol)
    except ConsistencyError as exc:
        rec.update(error=str(exc), violations=[])
        return rec
    rec["verdicts"] = {c.value: report.verdicts[c].value.value for c in CriterionClass}
    rec["violations"] = chain_violations(report.verdicts) + chain_violations(report.direct)
    rec["error"] = None
    return rec


def run_hierarchy(samples: int, seed: int, dims=None, tol: Tolerances = DEFAULT_TOL) -> Iterator[dict]:
    for name, rho in bipartite_builtins():
        yield _hierarchy_record(None, name, rho, tol)
    for i in range(samples):
        family = ("random_density", "random_separable")[i % 2]
        yield _hierarchy_record(i, family, bipartite_case(family, derive_seed(seed, i), dims), tol)


def _theorem_record(suite, index, family, fn, tol) -> dict:
    rec = {"suite": suite, "index": index, "family": family}
    try:
        check = fn()
    except ConsistencyError as exc:
        rec.update(error=str(exc))
        return rec
    rec.update(check.to_json())
    rec["error"] = None
    return rec


def run_theorem(suite: str, samples: int, seed: int, dims=None,
                tol: Tolerances = DEFAULT_TOL) -> Iterator[dict]:
    if suite == "corollary1":
        builtins = [("tiles", tiles_bound_entangled()), ("bell", bell()),
                    ("locking:2", horodecki_locking(2))]
        for name, rho in builtins:
            yield _theorem_record(suite, None, name,
                                  lambda rho=rho: cmoe.verify_corollary1(rho, tol=tol), tol)
        fams = FAMILIES[suite]
        for i in range(samples):
            fam = fams[i % len(fams)]
            rho = bipartite_case(fam, derive_seed(seed, i), dims)
            yield _theorem_record(suite, i, fam, lambda rho=rho: cmoe.verify_corollary1(rho, tol=tol), tol)
        return
    checker = TRIPARTITE_CHECKERS[suite]
    for name, psi in tripartite_builtins():
        yield _theorem_record(suite, None, name, lambda psi=psi: checker(psi, tol=tol), tol)
    fams = FAMILIES[suite]
    for i in range(samples):
        fam = fams[i % len(fams)]
        psi = tripartite_case(fam, derive_seed(seed, i), dims)
        yield _theorem_record(suite, i, fam, lambda psi=psi: checker(psi, tol=tol), tol)


def run_suite(suite: str, samples: int, seed: int, dims=None,
              tol: Tolerances = DEFAULT_TOL) -> Iterator[dict]:
    """Records for one suite (or ``all``), followed by a summary record."""
    names = SUITES if suite == "all" else (suite,)
    if any(n not in SUITES for n in names):
        raise ValueError(f"unknown suite {suite!r}")
    summary = Summary()
    for name in names:
        runner = run_hierarchy(samples, seed, dims, tol) if name == "hierarchy" else \
            run_theorem(name, samples, seed, dims, tol)
        for rec in runner:
            summary.add(rec)
            yield rec
    yield summary.to_json(suite)


class Summary:
    def __init__(self):
        self.conclusions = defaultdict(Counter)
        self.hypotheses = defaultdict(Counter)
        self.propositions = Counter()
        self.chain_violations = 0
        self.errors = 0
        self.cases = 0

    def add(self, rec: dict) -> None:
        self.cases += 1
        if rec.get("error"):
            self.errors += 1
            return
        if rec["suite"] == "hierarchy":
            self.chain_violations += len(rec["violations"])
            return
        self.conclusions[rec["theorem"]][rec["conclusion"]] += 1
        self.hypotheses[rec["theorem"]][rec["hypothesis"]] += 1
        if rec["conclusion"] == "Verified":
            for tag in rec["evidence"].get("propositions", []):
                self.propositions[tag] += 1

    @property
    def violated(self) -> int:
        return sum(c["Violated"] for c in self.conclusions.values())

    @property
    def ok(self) -> bool:
        return self.violated == 0 and self.chain_violations == 0 and self.errors == 0

    def to_json(self, suite: str) -> dict:
        return {
            "summary": True,
            "suite": suite,
            "cases": self.cases,
            "conclusions": {k: dict(sorted(v.items())) for k, v in sorted(self.conclusions.items())},
            "hypotheses": {k: dict(sorted(v.items())) for k, v in sorted(self.hypotheses.items())},
            "propositions_verified": dict(sorted(self.propositions.items())),
            "violated": self.violated,
            "chain_violations": self.chain_violations,
            "consistency_errors": self.errors,
            "ok": self.ok,
        }
