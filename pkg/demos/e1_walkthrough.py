"""Walk through Example E1: cohomology, the canonical model, and <[a],[b],[a]>.

E1 is the free algebra on a, b, u, v (all of degree 1) truncated above
length 3, with du = ab and dv = ba.  The products [a][b] and [b][a]
vanish in cohomology, so the triple product <[a],[b],[a]> is defined.

    python demos/e1_walkthrough.py
"""

from ainfty import QQ, GF
from ainfty.algebras import example_e1
from ainfty.ainf import check_morphism, check_stasheff
from ainfty.dga import cohomology
from ainfty.massey import brute_force_massey, epsilon, triple_massey
from ainfty.transfer import canonical_minimal_model


def main():
    A = example_e1(QQ)
    T = cohomology(A)
    H = T.homology
    print("dim A =", A.dim, " Betti numbers:", T.betti())
    for label in ("h1_0", "h1_1", "h2_0", "h2_1"):
        i = H.index(label)
        print(f"  {label} = [{A.space.format(T.psi.col(i))}]")

    C = canonical_minimal_model(A, T, N=4)
    print("Stasheff defects:", len(check_stasheff(C.model)),
          " morphism defects:", len(check_morphism(C.connecting)))

    a, b = {H.index("h1_0"): 1}, {H.index("h1_1"): 1}
    print("mu2(a, b) =", H.format(C.mu(2)(QQ, a, b)), " mu2(b, a) =", H.format(C.mu(2)(QQ, b, a)))
    mu3 = C.mu(3)(QQ, a, b, a)
    eps = epsilon([1, 1, 1])
    print("mu3(a, b, a) =", H.format(mu3), " eps =", eps)

    s = triple_massey(A, T, a, b, a)
    print("<a, b, a> =", s.describe())
    print("eps * mu3 is a member:", s.contains({k: eps * c for k, c in mu3.items()}))

    # the same product over F2, enumerated by brute force
    A2 = example_e1(GF(2))
    T2 = cohomology(A2)
    a2, b2 = {T2.homology.index("h1_0"): 1}, {T2.homology.index("h1_1"): 1}
    res = brute_force_massey(A2, T2, [a2, b2, a2])
    print("over F2 the oracle finds", sorted(T2.homology.format(dict(c)) for c in res.classes),
          f"after {res.assignments} assignments")


if __name__ == "__main__":
    main()
