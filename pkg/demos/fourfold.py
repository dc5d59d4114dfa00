"""A strictly defined fourfold Massey product, checked three ways.

The quiver algebra carries one arrow per entry of a defining system, with
the differential forced by the defining equations.  Over F2 the oracle
enumerates every defining system; the canonical model gives mu_4, and the
bootstrapped system gives the corner of the curvature matrix.

    python demos/fourfold.py [x1 x2 x3 x4]
"""

import sys

from ainfty import GF
from ainfty.algebras import massey_quiver
from ainfty.dga import cocycle_class, cohomology
from ainfty.massey import (
    bootstrap_defining_system,
    epsilon,
    is_strictly_defined,
    massey_membership_theorem_check,
    matrix_curvature,
)
from ainfty.transfer import canonical_minimal_model


def main(degrees=(1, 2, 2, 1)):
    F = GF(2)
    A = massey_quiver(F, degrees)
    T = cohomology(A)
    H = T.homology
    xs = [cocycle_class(T, {A.space.index(f"a{u}{u}"): 1}) for u in range(1, 5)]
    print("degrees", degrees, " dim A =", A.dim, " classes:", [H.format(x) for x in xs])

    ok, evidence = is_strictly_defined(A, T, xs, bound=32)
    print("strictly defined:", ok)
    for (u, v), what in evidence:
        print(f"  <x{u}..x{v}> = {what}")

    C = canonical_minimal_model(A, T, 4)
    D = bootstrap_defining_system(C, xs)
    curv = matrix_curvature(D)
    mu4 = C.mu(4)(F, *xs)
    print("eps =", epsilon(degrees), " mu4 =", H.format(mu4),
          " corner class =", H.format(T.pi.apply(F, curv.corner)))
    print("interior of the curvature vanishes:", curv.ok)

    rep = massey_membership_theorem_check(A, T, xs, bound=32, C=C)
    for s in rep.steps:
        print(f"  [{'pass' if s.ok else 'FAIL'}] {s.name}" + (f": {s.detail}" if s.detail else ""))


if __name__ == "__main__":
    main(tuple(int(a) for a in sys.argv[1:5]) if len(sys.argv) >= 5 else (1, 2, 2, 1))
