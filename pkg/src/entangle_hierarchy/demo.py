"""Regression table of the worked examples: locking state, antisymmetric state, GHZ."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .criteria import classify
from .linalg import hermitian_spectrum, numerical_rank, partial_transpose, von_neumann_entropy
from .states import (antisymmetric_tripartite, ghz3, horodecki_locking, locking_purification,
                     reduce_all)


@dataclass
class Row:
    group: str
    quantity: str
    value: object
    expected: object
    tol: float | None = None

    @property
    def ok(self) -> bool:
        if self.tol is None:
            return self.value == self.expected
        return abs(float(self.value) - float(self.expected)) <= self.tol

    def to_json(self) -> dict:
        value = round(float(self.value), 12) if self.tol is not None else self.value
        return {"group": self.group, "quantity": self.quantity, "value": value,
                "expected": self.expected, "ok": self.ok}


def demo_rows(tol: Tolerances = DEFAULT_TOL) -> list[Row]:
    rows = []
    for d in (2, 3):
        g = f"locking d={d}"
        rho = horodecki_locking(d)
        rep = classify(rho, tol=tol)
        rows += [
            Row(g, "S(rho_AC)", rep.entropies["ab"], 1 + np.log2(d), tol.ent),
            Row(g, "S(rho_A)", rep.entropies["a"], 1 + np.log2(d), tol.ent),
            Row(g, "S(rho_C)", rep.entropies["b"], np.log2(d), tol.ent),
            Row(g, "CEN_RIGHT(rho_AC)", rep.value("CEN_RIGHT").value, "Yes"),
            Row(g, "MAJ(rho_AC)", rep.value("MAJ").value, "No"),
        ]
        m = reduce_all(locking_purification(d))
        rows += [
            Row(g, "rank(rho_AB)", numerical_rank(m.ab, tol), d),
            Row(g, "rank(rho_B)", numerical_rank(m.b, tol), d * d + 1),
            Row(g, "UND(rho_AB)", classify(m.ab, tol=tol).value("UND").value, "No"),
        ]

    g = "antisym3"
    m = reduce_all(antisymmetric_tripartite())
    rep = classify(m.ab, tol=tol)
    spec = [hermitian_spectrum(x.matrix, tol) for x in (m.ab, m.a, m.b)]
    n = max(s.size for s in spec)
    spec = [np.pad(s, (0, n - s.size)) for s in spec]
    iso = max(float(np.max(np.abs(spec[i] - spec[j]))) for i, j in ((0, 1), (0, 2), (1, 2)))
    rows += [
        Row(g, "min eig rho_AB^T_B", hermitian_spectrum(partial_transpose(m.ab, 1), tol)[-1], -1 / 3, tol.psd),
        Row(g, "max eig rho_AB", spec[0][0], 1 / 3, tol.psd),
        Row(g, "RED(rho_AB)", rep.value("RED").value, "Yes"),
        Row(g, "isospectral AB/A/B residual", iso, 0.0, tol.eig),
        Row(g, "rho_AB == rho_AC", float(np.max(np.abs(m.ab.matrix - m.ac.matrix))), 0.0, 1e-12),
        Row(g, "UND(rho_AB)", rep.value("UND").value, "No"),
    ]

    g = "ghz3"
    m = reduce_all(ghz3())
    for cut in ("AB", "AC", "BC"):
        rows.append(Row(g, f"SEP(rho_{cut})", classify(m.cut(cut), tol=tol).value("SEP").value, "Yes"))
    rows.append(Row(g, "S(rho_A)", von_neumann_entropy(m.a, tol), 1.0, tol.ent))
    return rows


def format_table(rows: list[Row]) -> str:
    lines = [f"{'group':<14}{'quantity':<30}{'value':>12}{'expected':>12}  ok"]
    for r in rows:
        if r.tol is None:
            val, exp = str(r.value), str(r.expected)
        else:
            val, exp = f"{float(r.value):.6f}", f"{float(r.expected):.6f}"
        lines.append(f"{r.group:<14}{r.quantity:<30}{val:>12}{exp:>12}  {'yes' if r.ok else 'NO'}")
    return "\n".join(lines)
