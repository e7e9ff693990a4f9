"""Relabelled purifications on which the BC half of theorem3 clause (i) fails.

Prints the filtered-tiles construction (strict, 0.12 bit inside CEN_RIGHT)
and then counts outcomes of verify_theorem3 over all six subsystem
relabellings of the sweep families. Every failure found has rho_BC
undistillable with CEN_LEFT(rho_AB) No; the AC half never fails.
"""

import itertools
from collections import Counter
from dataclasses import dataclass

from entangle_hierarchy.cmoe import verify_theorem3
from entangle_hierarchy.criteria import classify
from entangle_hierarchy.states import derive_seed, reduce_all
from entangle_hierarchy.sweeps import filtered_tiles_relabelled, tripartite_case


@dataclass
class Config:
    cases: int = 150
    seed: int = 5
    families: tuple = ("tiles_purification", "haar", "locking_purification",
                       "separable_purification")


def main(cfg: Config = Config()) -> None:
    psi = filtered_tiles_relabelled()
    m = reduce_all(psi)
    ab = classify(m.ab)
    check = verify_theorem3(psi)
    print(f"filtered tiles: S(AB) - S(B) = {ab.entropies['ab'] - ab.entropies['b']:.4f}, "
          f"S(AB) - S(A) = {ab.entropies['ab'] - ab.entropies['a']:.4f}")
    print(f"  rho_AC {check.evidence['AC']}, rho_BC {check.evidence['BC']}")
    print(f"  theorem3: {check.conclusion.value}, clauses {check.evidence['clauses']}")

    shapes = Counter()
    for i in range(cfg.cases):
        fam = cfg.families[i % len(cfg.families)]
        base = tripartite_case(fam, derive_seed(cfg.seed, i))
        for perm in itertools.permutations(range(3)):
            c = verify_theorem3(base, perm=perm)
            key = (fam, c.conclusion.value)
            if c.violated:
                e = c.evidence
                key += (f"BC UND {e['BC']['UND']}", f"AC UND {e['AC']['UND']}",
                        f"CEN_LEFT(AB) {e['AB']['CEN_LEFT']}")
            shapes[key] += 1
    for key, n in sorted(shapes.items()):
        print(f"{n:>5}  {' | '.join(key)}")


if __name__ == "__main__":
    main()
