"""Defining systems and Massey products.

Entries of a defining system are indexed 1-based as in ``a[(u, v)]``,
``1 <= u <= v <= n`` with the corner ``(1, n)`` left out.  ``ā`` is the
sign reversal ``(-1)^{|a|} a``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import linalg
from .dga import DGAlgebra, TransferData, induced_product
from .fields import Field
from .graded import GradedSpace


class MasseyError(ValueError):
    pass


class HypothesisError(MasseyError):
    """A shorter canonical operation fails to vanish on a subinterval."""

    def __init__(self, u, v, k, value=""):
        self.u, self.v, self.k = u, v, k
        super().__init__(f"mu_{k}(x_{u}..x_{v}) = {value} is not zero")


class OracleBoundError(MasseyError):
    def __init__(self, coordinates, bound, size):
        self.coordinates, self.bound, self.size = coordinates, bound, size
        super().__init__(f"oracle needs {coordinates} free coordinates ({size} raw assignments), bound is {bound}")


def sign_reversal(F: Field, space: GradedSpace, a: dict) -> dict:
    """``ā = (-1)^{|a|} a``; raises on inhomogeneous input."""
    k = space.vector_degree(a)
    if k is None or k % 2 == 0:
        return dict(a)
    return linalg.neg(F, a)


def epsilon(degrees) -> int:
    """``(-1)^{(n+2)(n+1)/2 + Σ_i (n+i) x_i}`` for the degrees ``x_1..x_n``."""
    n = len(degrees)
    if n < 2:
        raise ValueError("need at least two inputs")
    e = (n + 2) * (n + 1) // 2 + sum((n + i) * x for i, x in enumerate(degrees, start=1))
    return -1 if e % 2 else 1


def bootstrap_sign(u: int, v: int, degrees) -> int:
    """Sign in front of ``ψ_{v-u+1}(x_u..x_v)`` in the bootstrapped entry ``a_{u,v}``."""
    x = degrees
    k = v - u
    e = k * (k + 1) // 2 + sum((u + v + i) * x[u + i - 1] for i in range(k + 1))
    return -1 if e % 2 else 1


def entry_degree(degrees, u, v) -> int:
    return sum(degrees[r - 1] - 1 for r in range(u, v + 1)) + 1


@dataclass
class DefiningSystem:
    algebra: DGAlgebra
    inputs: list  # classes x_u as H-vectors
    degrees: list
    entries: dict  # (u, v) -> A-vector

    @property
    def n(self) -> int:
        return len(self.inputs)

    def a(self, u, v) -> dict:
        return self.entries.get((u, v), {})

    def slots(self):
        """Every constrained position, shortest spans first."""
        n = self.n
        for span in range(n):
            for u in range(1, n - span + 1):
                v = u + span
                if (u, v) != (1, n):
                    yield (u, v)


@dataclass
class Issue:
    entry: tuple
    condition: str
    detail: str = ""

    def __str__(self):
        return f"a{self.entry}: {self.condition}" + (f" ({self.detail})" if self.detail else "")


def _bar(A, v):
    return sign_reversal(A.field, A.space, v)


def defining_residual(D: DefiningSystem, u: int, v: int) -> dict:
    """``d a_uv - Σ_r ā_ur a_{r+1,v}``; for ``u == v`` just ``d a_uu``."""
    A = D.algebra
    F = A.field
    res = A.d(D.a(u, v))
    for r in range(u, v):
        linalg.iadd(F, res, A.mul(_bar(A, D.a(u, r)), D.a(r + 1, v)), -1)
    return res


def validate_defining_system(D: DefiningSystem, T: TransferData) -> list[Issue]:
    A = D.algebra
    S = A.space
    F = A.field
    out = []
    if len(D.degrees) != D.n:
        out.append(Issue((0, 0), "degrees", "one degree per input expected"))
        return out
    for (u, v) in D.slots():
        if (u, v) not in D.entries:
            out.append(Issue((u, v), "missing"))
            continue
        a = D.entries[(u, v)]
        want = entry_degree(D.degrees, u, v)
        try:
            k = S.vector_degree(a)
        except ValueError as e:
            out.append(Issue((u, v), "degree", str(e)))
            continue
        if k is not None and k != want:
            out.append(Issue((u, v), "degree", f"has degree {k}, expected {want}"))
    if out:
        return out
    for u in range(1, D.n + 1):
        a = D.a(u, u)
        if A.d(a):
            out.append(Issue((u, u), "not a cocycle", S.format(A.d(a))))
        elif T.pi.apply(F, a) != D.inputs[u - 1]:
            out.append(Issue((u, u), "wrong class", T.homology.format(T.pi.apply(F, a))))
    for (u, v) in D.slots():
        if u == v:
            continue
        r = defining_residual(D, u, v)
        if r:
            out.append(Issue((u, v), "defining equation", S.format(r)))
    return out


def c_of_D(D: DefiningSystem) -> dict:
    """``c(D) = Σ_{r=1}^{n-1} ā_{1,r} a_{r+1,n}``."""
    A = D.algebra
    out: dict = {}
    for r in range(1, D.n):
        linalg.iadd(A.field, out, A.mul(_bar(A, D.a(1, r)), D.a(r + 1, D.n)))
    return out


def c_class(D: DefiningSystem, T: TransferData) -> dict:
    c = c_of_D(D)
    if D.algebra.d(c):
        raise MasseyError("c(D) is not a cocycle; the system is not defining")
    return T.pi.apply(D.algebra.field, c)


@dataclass
class CurvatureReport:
    size: int
    entries: dict  # (i, j) -> vector of -d𝔻 + 𝔻̄𝔻, nonzero entries only
    corner: dict

    @property
    def interior(self) -> dict:
        return {ij: v for ij, v in self.entries.items() if ij != (0, self.size - 1)}

    @property
    def ok(self) -> bool:
        return not self.interior


def connection_matrix(D: DefiningSystem) -> dict:
    """Strictly upper triangular ``(n+1)×(n+1)`` matrix with ``𝔻[u-1][v] = a_uv``, corner zero."""
    return {(u - 1, v): a for (u, v), a in D.entries.items() if (u, v) != (1, D.n) and a}


def matrix_curvature(D: DefiningSystem) -> CurvatureReport:
    """Entrywise ``-d𝔻 + 𝔻̄·𝔻``.

    Interior entries are the negated defining-equation residuals; the corner
    is ``c(D)``.
    """
    A = D.algebra
    F = A.field
    n = D.n
    M = connection_matrix(D)
    out = {}
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            e = linalg.neg(F, A.d(M.get((i, j), {})))
            for k in range(i + 1, j):
                l, r = M.get((i, k)), M.get((k, j))
                if l and r:
                    linalg.iadd(F, e, A.mul(_bar(A, l), r))
            if e:
                out[(i, j)] = e
    return CurvatureReport(n + 1, out, out.get((0, n), {}))


# ---------------------------------------------------------------------------
# bootstrap from a canonical model


def _degrees_of(H: GradedSpace, xs):
    out = []
    for x in xs:
        k = H.vector_degree(x)
        if k is None:
            raise MasseyError("inputs must be nonzero homogeneous classes")
        out.append(k)
    return out


def check_vanishing_hypothesis(C, xs) -> None:
    """Raise HypothesisError unless ``mu_k(x_u..x_v) = 0`` on all proper subintervals."""
    F = C.model.field
    n = len(xs)
    for k in range(2, n):
        if k not in C.model.ops:
            raise MasseyError(f"canonical model truncated below arity {k}")
        for u in range(1, n - k + 2):
            v = u + k - 1
            val = C.model.ops[k](F, *xs[u - 1 : v])
            if val:
                raise HypothesisError(u, v, k, C.model.space.format(val))


def bootstrap_defining_system(C, xs) -> DefiningSystem:
    """Defining system ``a_uv = ± ψ_{v-u+1}(x_u..x_v)`` from a canonical model."""
    A = C.connecting.target
    alg = C.transfer.algebra
    F = alg.field
    H = C.model.space
    n = len(xs)
    if n < 2:
        raise MasseyError("need at least two inputs")
    if n > C.N:
        raise MasseyError(f"canonical model truncated at arity {C.N} < {n}")
    degrees = _degrees_of(H, xs)
    check_vanishing_hypothesis(C, xs)
    entries = {}
    for span in range(n):
        for u in range(1, n - span + 1):
            v = u + span
            if (u, v) == (1, n):
                continue
            val = C.connecting.comps[span + 1](F, *xs[u - 1 : v])
            entries[(u, v)] = linalg.scale(F, val, bootstrap_sign(u, v, degrees))
    del A
    return DefiningSystem(alg, list(xs), degrees, entries)


def bootstrap_identity_residual(C, D: DefiningSystem) -> dict:
    """``ψ μ_n(x) - d ψ_n(x) - ε c(D)``, zero when the bootstrap identity holds."""
    alg = D.algebra
    F = alg.field
    xs = D.inputs
    n = D.n
    mu = C.model.ops[n](F, *xs)
    lhs = C.transfer.psi.apply(F, mu)
    rhs = alg.d(C.connecting.comps[n](F, *xs))
    linalg.iadd(F, rhs, c_of_D(D), epsilon(D.degrees))
    return linalg.sub(F, lhs, rhs)


# ---------------------------------------------------------------------------
# affine subsets of H


@dataclass
class AffineClassSet:
    """``representative + span(indeterminacy)`` in ``H^degree``, or the empty set."""

    field: Field
    space: GradedSpace
    degree: int
    representative: dict | None
    indeterminacy: list = field(default_factory=list)

    def __post_init__(self):
        E = linalg.Echelon(self.field)
        for v in self.indeterminacy:
            E.insert(v)
        self._E = E
        self.indeterminacy = E.basis()
        if self.representative is not None:
            self.representative = E.reduce(self.representative)

    @property
    def is_empty(self) -> bool:
        return self.representative is None

    @property
    def is_zero_set(self) -> bool:
        return not self.is_empty and not self.representative and not self.indeterminacy

    def contains(self, x: dict) -> bool:
        if self.is_empty:
            return False
        return not self._E.reduce(linalg.sub(self.field, x, self.representative))

    @property
    def quotient_nonzero(self) -> bool:
        """The class of the set in ``H / indeterminacy`` is nonzero."""
        return not self.is_empty and bool(self.representative)

    def __eq__(self, other):
        if not isinstance(other, AffineClassSet):
            return NotImplemented
        if self.is_empty or other.is_empty:
            return self.is_empty and other.is_empty
        return self.indeterminacy == other.indeterminacy and self.representative == other.representative

    def elements(self) -> set:
        """All members over a finite field, as frozen vectors."""
        F = self.field
        if self.is_empty:
            return set()
        out = set()
        for coeffs in itertools.product(range(F.p), repeat=len(self.indeterminacy)):
            v = dict(self.representative)
            for c, b in zip(coeffs, self.indeterminacy):
                linalg.iadd(F, v, b, c)
            out.add(freeze(v))
        return out

    def describe(self) -> str:
        if self.is_empty:
            return "empty (no defining system)"
        rep = self.space.format(self.representative)
        if not self.indeterminacy:
            return "{" + rep + "}"
        return rep + " + span{" + ", ".join(self.space.format(b) for b in self.indeterminacy) + "}"


def freeze(v: dict) -> tuple:
    return tuple(sorted(v.items()))


def _solve_d(A: DGAlgebra, b: dict, degree: int) -> dict | None:
    """Some ``a`` of the given degree with ``d a = b``, or None."""
    S = A.space
    idx = S.in_degree(degree)
    rows: dict[int, dict] = {}
    for c, g in enumerate(idx):
        for j, v in A.differential.col(g).items():
            rows.setdefault(j, {})[c] = v
    keys = sorted(set(rows) | set(b))
    rmap = {j: r for r, j in enumerate(keys)}
    sol = linalg.solve_sparse(A.field, [rows.get(j, {}) for j in keys], len(idx), {rmap[j]: c for j, c in b.items()}, nullspace=False)
    if sol is None:
        return None
    return {idx[c]: v for c, v in sol.particular.items()}


def _basis_products(T: TransferData, mu2, left: dict | None, right: dict | None, degree: int) -> list:
    F = T.F
    H = T.homology
    out = []
    for e in H.in_degree(degree):
        if left is not None:
            v = mu2(F, left, {e: 1})
        else:
            v = mu2(F, {e: 1}, right)
        if v:
            out.append(v)
    return out


def triple_massey(A: DGAlgebra, T: TransferData, x: dict, y: dict, z: dict) -> AffineClassSet:
    """The full set ``<x, y, z>`` as a coset of ``x·H + H·z``."""
    F, H = A.field, T.homology
    dx, dy, dz = _degrees_of(H, [x, y, z])
    deg = dx + dy + dz - 1
    mu2 = induced_product(T)
    indet = _basis_products(T, mu2, x, None, dy + dz - 1) + _basis_products(T, mu2, None, z, dx + dy - 1)
    if mu2(F, x, y) or mu2(F, y, z):
        return AffineClassSet(F, H, deg, None, indet)
    a11, a22, a33 = (T.psi.apply(F, v) for v in (x, y, z))
    a12 = _solve_d(A, A.mul(_bar(A, a11), a22), dx + dy - 1)
    a23 = _solve_d(A, A.mul(_bar(A, a22), a33), dy + dz - 1)
    if a12 is None or a23 is None:
        raise MasseyError("cohomology product vanishes but no cochain bounds it")
    D = DefiningSystem(A, [x, y, z], [dx, dy, dz], {(1, 1): a11, (2, 2): a22, (3, 3): a33, (1, 2): a12, (2, 3): a23})
    return AffineClassSet(F, H, deg, c_class(D, T), indet)


def shift_defining_system(D: DefiningSystem, T: TransferData, xi12: dict, xi23: dict) -> DefiningSystem:
    """``D_ξ``: add cocycles ``s12 = ψ(ξ̄12)`` and ``s23 = (-1)^{|x|} ψ(ξ23)``.

    Then ``[c(D_ξ)] = [c(D)] + x·ξ23 + ξ12·z``.
    """
    if D.n != 3:
        raise MasseyError("shifts are defined for triple products")
    A = D.algebra
    F = A.field
    H = T.homology
    dx, dy, dz = D.degrees
    for name, xi, want in (("xi12", xi12, dx + dy - 1), ("xi23", xi23, dy + dz - 1)):
        k = H.vector_degree(xi)
        if k is not None and k != want:
            raise MasseyError(f"{name} has degree {k}, expected {want}")
    s12 = T.psi.apply(F, sign_reversal(F, H, xi12))
    s23 = linalg.scale(F, T.psi.apply(F, xi23), F.sign(dx))
    entries = dict(D.entries)
    entries[(1, 2)] = linalg.add(F, D.a(1, 2), s12)
    entries[(2, 3)] = linalg.add(F, D.a(2, 3), s23)
    return DefiningSystem(A, D.inputs, D.degrees, entries)


# ---------------------------------------------------------------------------
# exhaustive oracle over a finite field


@dataclass
class OracleResult:
    classes: set  # frozen H-vectors
    coordinates: int
    assignments: int
    systems: int  # number of defining systems found

    @property
    def defined(self) -> bool:
        return bool(self.classes)


def oracle_coordinates(A: DGAlgebra, degrees) -> int:
    n = len(degrees)
    total = 0
    for span in range(1, n):
        for u in range(1, n - span + 1):
            v = u + span
            if (u, v) != (1, n):
                total += A.space.dim_in(entry_degree(degrees, u, v))
    return total


def brute_force_massey(A: DGAlgebra, T: TransferData, xs, bound: int = 24) -> OracleResult:
    """Every class ``[c(D)]`` over all defining systems with ``a_uu = ψ(x_u)``.

    Each interior slot ranges over all of ``A^{|a_uv|}``.  Slots are filled
    shortest span first; for each slot every vector is enumerated once and
    indexed by its differential, so a partial assignment is extended exactly
    by the vectors whose differential matches the required right-hand side.
    """
    F = A.field
    if not F.is_finite:
        raise MasseyError("the oracle needs a finite field")
    H = T.homology
    degrees = _degrees_of(H, xs)
    n = len(xs)
    coords = oracle_coordinates(A, degrees)
    if coords > bound:
        raise OracleBoundError(coords, bound, F.p ** coords)
    S = A.space
    base = {(u, u): T.psi.apply(F, xs[u - 1]) for u in range(1, n + 1)}
    slots = [(u, u + span) for span in range(1, n) for u in range(1, n - span + 1) if (u, u + span) != (1, n)]

    assignments = 0
    tables = {}
    for (u, v) in slots:
        idx = S.in_degree(entry_degree(degrees, u, v))
        table: dict = {}
        for coeffs in itertools.product(range(F.p), repeat=len(idx)):
            vec = {idx[i]: c for i, c in enumerate(coeffs) if c}
            table.setdefault(freeze(A.d(vec)), []).append(vec)
            assignments += 1
        tables[(u, v)] = table

    D = DefiningSystem(A, list(xs), degrees, dict(base))
    found = set()
    count = 0

    def rec(k):
        nonlocal assignments, count
        if k == len(slots):
            count += 1
            c = c_of_D(D)
            found.add(freeze(T.pi.apply(F, c)))
            return
        u, v = slots[k]
        rhs: dict = {}
        for r in range(u, v):
            linalg.iadd(F, rhs, A.mul(_bar(A, D.a(u, r)), D.a(r + 1, v)))
        for vec in tables[(u, v)].get(freeze(rhs), ()):
            assignments += 1
            D.entries[(u, v)] = vec
            rec(k + 1)
        D.entries.pop((u, v), None)

    rec(0)
    return OracleResult(found, coords, assignments, count)


def unfreeze(t) -> dict:
    return dict(t)


# ---------------------------------------------------------------------------
# strictly defined products and the membership theorem


def is_strictly_defined(A: DGAlgebra, T: TransferData, xs, bound: int = 24):
    """``(answer, evidence)``; answer is True, False or ``"undecided"``.

    Length-2 subproducts are decided by the cohomology product, length 3 by
    :func:`triple_massey`, longer ones by the oracle over finite fields.
    """
    F, H = A.field, T.homology
    n = len(xs)
    mu2 = induced_product(T)
    evidence = []
    undecided = False
    for k in range(2, n):
        for u in range(1, n - k + 2):
            v = u + k - 1
            sub = xs[u - 1 : v]
            if k == 2:
                val = mu2(F, *sub)
                evidence.append(((u, v), H.format(val)))
                if val:
                    return False, evidence
            elif k == 3:
                s = triple_massey(A, T, *sub)
                evidence.append(((u, v), s.describe()))
                if not s.is_zero_set:
                    return False, evidence
            elif F.is_finite:
                res = brute_force_massey(A, T, sub, bound)
                evidence.append(((u, v), f"{len(res.classes)} classes"))
                if res.classes != {()}:
                    return False, evidence
            else:
                evidence.append(((u, v), "undecided over the rationals"))
                undecided = True
    return ("undecided" if undecided else True), evidence


@dataclass
class Step:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class TheoremReport:
    steps: list = field(default_factory=list)
    epsilon: int = 1
    mu_n: dict | None = None
    oracle: OracleResult | None = None

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.steps)

    def add(self, name, ok, detail=""):
        self.steps.append(Step(name, bool(ok), detail))
        return ok


def massey_membership_theorem_check(A: DGAlgebra, T: TransferData, xs, N: int | None = None,
                                    bound: int = 24, C=None) -> TheoremReport:
    """Bootstrap a defining system from the canonical model and test ``ε μ_n(x) ∈ <x>``."""
    from .transfer import canonical_minimal_model

    F, H = A.field, T.homology
    n = len(xs)
    rep = TheoremReport()
    N = max(n, N or n)
    if C is None:
        C = canonical_minimal_model(A, T, N)
    degrees = _degrees_of(H, xs)
    rep.epsilon = epsilon(degrees)
    mu2 = induced_product(T)
    for u in range(1, n):
        if mu2(F, xs[u - 1], xs[u]):
            rep.add("defining system exists", False, f"no defining system: x_{u}·x_{u + 1} is not zero")
            return rep
    try:
        check_vanishing_hypothesis(C, xs)
    except HypothesisError as e:
        rep.add("canonical operations vanish on subintervals", False, str(e))
        return rep
    rep.add("canonical operations vanish on subintervals", True)
    D = bootstrap_defining_system(C, xs)
    issues = validate_defining_system(D, T)
    rep.add("bootstrap system is defining", not issues, "; ".join(map(str, issues)))
    res = bootstrap_identity_residual(C, D)
    rep.add("psi mu_n = d psi_n + eps c(D)", not res, A.space.format(res) if res else "")
    mu = C.model.ops[n](F, *xs)
    rep.mu_n = mu
    emu = linalg.scale(F, mu, rep.epsilon)
    cls = c_class(D, T) if not issues else None
    rep.add("eps mu_n = [c(D)]", cls == emu, f"eps mu_n = {H.format(emu)}, [c(D)] = {H.format(cls or {})}")
    curv = matrix_curvature(D)
    rep.add("curvature is concentrated in the corner", curv.ok and curv.corner == c_of_D(D))
    if F.is_finite:
        try:
            orc = brute_force_massey(A, T, xs, bound)
        except OracleBoundError as e:
            rep.add("oracle membership", True, f"skipped: {e}")
        else:
            rep.oracle = orc
            rep.add("oracle membership", freeze(emu) in orc.classes, f"{len(orc.classes)} classes enumerated")
    return rep
