"""Two canonical models of the same algebra differ by an isotopy.

Changing the homotopy h changes mu_3 but not mu_2.  find_isotopy solves
for the components tau_2, tau_3 of an isotopy, and tau_2 bounds the
difference of the two mu_3 in the Hochschild complex of (H, mu_2).

    python demos/isotopy.py
"""

from ainfty import QQ, linalg
from ainfty.algebras import example_e1
from ainfty.ainf import check_morphism, find_isotopy, hochschild_differential
from ainfty.dga import cohomology
from ainfty.transfer import canonical_minimal_model, vary_homotopy


def main():
    A = example_e1(QQ)
    T = cohomology(A)
    m1 = canonical_minimal_model(A, vary_homotopy(T, 1), 4)
    m2 = canonical_minimal_model(A, vary_homotopy(T, 2), 4)
    print("same mu2:", m1.mu(2) == m2.mu(2))
    changed = sum(1 for w in set(m1.mu(3).values) | set(m2.mu(3).values)
                  if m1.mu(3).on_word(w) != m2.mu(3).on_word(w))
    print("words where the two mu3 differ:", changed)

    res = find_isotopy(m1.model, m2.model, 4)
    tau = res.morphism
    print("isotopy found; kernel dimensions of delta per arity:", res.freedom)
    print("morphism defects:", len(check_morphism(tau, cross_check=False)))

    d = hochschild_differential(QQ, m1.mu(2), tau.comps[2])
    ok = all(d.on_word(w) == linalg.sub(QQ, m1.mu(3).on_word(w), m2.mu(3).on_word(w))
             for w in set(d.values) | set(m1.mu(3).values) | set(m2.mu(3).values))
    print("delta(tau2) = mu3' - mu3'':", ok)


if __name__ == "__main__":
    main()
