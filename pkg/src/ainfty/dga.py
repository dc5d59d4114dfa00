"""Finite-dimensional dg associative algebras, their cohomology and transfer data."""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .fields import Field
from .graded import GradedMap, GradedSpace, MultiMap, sum_maps


@dataclass
class DGAlgebra:
    """``(A, d, ·)`` with ``d`` of degree +1 and a degree-0 product.

    ``product`` stores structure constants on basis pairs.  ``unit`` is the
    index of the unit basis vector, or None for non-unital algebras.
    """

    field: Field
    space: GradedSpace
    differential: GradedMap
    product: MultiMap
    unit: int | None = None

    @property
    def F(self) -> Field:
        return self.field

    @property
    def dim(self) -> int:
        return self.space.dim

    def d(self, v: dict) -> dict:
        return self.differential.apply(self.field, v)

    def mul(self, u: dict, v: dict) -> dict:
        """Product of two sparse vectors."""
        F = self.field
        vals = self.product.values
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                w = vals.get((i, j))
                if w:
                    linalg.iadd(F, out, w, F.red(a * b))
        return out

    def basis_vector(self, name: str) -> dict:
        return {self.space.index(name): 1}

    def degree(self, v: dict) -> int | None:
        return self.space.vector_degree(v)

    @classmethod
    def from_tables(cls, F, pairs, d=None, product=None, unit=None) -> "DGAlgebra":
        """Build from ``[(name, degree)]``, ``{name: {name: c}}`` and ``{(name, name): {name: c}}``."""
        space = GradedSpace.from_pairs(pairs)
        ix = space.index
        cols = {}
        for src, img in (d or {}).items():
            v = {ix(k): F(c) for k, c in img.items() if F(c)}
            if v:
                cols[ix(src)] = v
        vals = {}
        for (a, b), img in (product or {}).items():
            v = {ix(k): F(c) for k, c in img.items() if F(c)}
            if v:
                vals[(ix(a), ix(b))] = v
        return cls(
            F,
            space,
            GradedMap(space, space, 1, cols),
            MultiMap(2, space, space, 0, vals),
            None if unit is None else ix(unit),
        )


@dataclass
class Violation:
    axiom: str
    word: tuple
    detail: str = ""

    def __str__(self):
        w = ",".join(self.word)
        return f"{self.axiom} at {w}" + (f": {self.detail}" if self.detail else "")


def validate(A: DGAlgebra) -> list[Violation]:
    """List every violated dg-algebra axiom with a witnessing basis word."""
    F, S = A.field, A.space
    names = S.names
    out: list[Violation] = []
    n = A.dim

    for w, v in A.product.values.items():
        want = S.degrees[w[0]] + S.degrees[w[1]]
        bad = [names[j] for j in v if S.degrees[j] != want]
        if bad:
            out.append(Violation("degree", (names[w[0]], names[w[1]]), f"product has terms {bad} outside degree {want}"))
    for i, v in A.differential.cols.items():
        bad = [names[j] for j in v if S.degrees[j] != S.degrees[i] + 1]
        if bad:
            out.append(Violation("degree", (names[i],), f"d has terms {bad} of wrong degree"))

    for i in range(n):
        dd = A.d(A.d({i: 1}))
        if dd:
            out.append(Violation("d²≠0", (names[i],), S.format(dd)))

    for i in range(n):
        di = A.d({i: 1})
        si = F.sign(S.degrees[i])
        for j in range(n):
            lhs = A.d(A.product.on_word((i, j)))
            rhs = A.mul(di, {j: 1})
            linalg.iadd(F, rhs, A.mul({i: 1}, A.d({j: 1})), si)
            if lhs != rhs:
                out.append(Violation("Leibniz", (names[i], names[j]), S.format(linalg.sub(F, lhs, rhs))))

    vals = A.product.values
    right_zero = {}
    for i in range(n):
        right_zero[i] = {j for j in range(n) if (i, j) not in vals}
    seen = set()
    for (i, j), p in vals.items():
        for k in range(n):
            lhs = A.mul(p, {k: 1})
            rhs = A.mul({i: 1}, vals.get((j, k), {}))
            seen.add((i, j, k))
            if lhs != rhs:
                out.append(Violation("associativity", (names[i], names[j], names[k]), S.format(linalg.sub(F, lhs, rhs))))
    for (j, k), q in vals.items():
        for i in range(n):
            if (i, j, k) in seen or (i, j) in vals:
                continue
            rhs = A.mul({i: 1}, q)
            if rhs:
                out.append(Violation("associativity", (names[i], names[j], names[k]), S.format(linalg.neg(F, rhs))))

    if A.unit is not None:
        u = A.unit
        if A.d({u: 1}):
            out.append(Violation("unit", (names[u],), "d(1) ≠ 0"))
        for i in range(n):
            if A.product.on_word((u, i)) != {i: 1} or A.product.on_word((i, u)) != {i: 1}:
                out.append(Violation("unit", (names[i],), "1·a ≠ a or a·1 ≠ a"))
    return out


@dataclass
class TransferData:
    """Deformation retract ``(psi, pi, h)`` of ``(A, d)`` onto its cohomology ``(H, 0)``."""

    algebra: DGAlgebra
    homology: GradedSpace
    psi: GradedMap  # H -> A, degree 0
    pi: GradedMap  # A -> H, degree 0
    h: GradedMap  # A -> A, degree -1

    @property
    def F(self) -> Field:
        return self.algebra.field

    @property
    def H(self) -> GradedSpace:
        return self.homology

    def betti(self) -> dict[int, int]:
        return {k: self.homology.dim_in(k) for k in self.homology.support}

    def label(self, i: int) -> str:
        return self.homology.names[i]


def _degree_data(A: DGAlgebra):
    """Per degree: boundary echelon, cohomology representatives, complement columns."""
    F, S = A.field, A.space
    degs = S.support
    info = {}
    for k in degs:
        idx = S.in_degree(k)
        Eb = linalg.Echelon(F)
        for i in S.in_degree(k - 1):
            Eb.insert(A.differential.col(i))
        # kernel of d restricted to degree k, in local coordinates
        loc = {g: c for c, g in enumerate(idx)}
        rows: dict[int, dict] = {}
        for c, g in enumerate(idx):
            for j, v in A.differential.col(g).items():
                rows.setdefault(j, {})[c] = v
        ker = linalg.kernel(F, list(rows.values()), len(idx))
        ker = [{idx[c]: v for c, v in z.items()} for z in ker]
        Eh = linalg.Echelon(F)
        for z in ker:
            Eh.insert(Eb.reduce(z))
        Ez = linalg.Echelon(F)
        for r in Eb.basis() + Eh.basis():
            Ez.insert(r)
        comp = [g for g in idx if g not in Ez.rows]
        info[k] = dict(Eb=Eb, Eh=Eh, Ez=Ez, comp=comp, loc=loc)
    return info


def cohomology(A: DGAlgebra) -> TransferData:
    """Cohomology with a deterministic basis and normalized transfer data.

    In each degree ``A^k = B^k ⊕ R^k ⊕ C^k`` where ``B`` is the boundary
    space, ``R`` is spanned by reduced echelon representatives of cohomology
    classes, and ``C`` by the standard basis vectors at non-pivot columns of
    the cocycle space.  ``pi`` projects onto ``R``, ``psi`` includes ``R``,
    and ``h(dc) = -c`` for ``c`` in ``C``; ``h`` vanishes on ``R ⊕ C``.  The
    side conditions ``hh = h psi = pi h = 0`` hold by construction.
    """
    F, S = A.field, A.space
    info = _degree_data(A)

    names, degrees, reps = [], [], []
    hpos = {}  # (k, pivot) -> H index
    for k in S.support:
        for c, p in enumerate(info[k]["Eh"].pivots):
            hpos[(k, p)] = len(names)
            names.append(f"h{k}_{c}")
            degrees.append(k)
            reps.append(info[k]["Eh"].rows[p])
    H = GradedSpace(tuple(names), tuple(degrees))

    # preimages of boundary basis vectors inside the complement C^{k-1}
    lift = {}
    for k in S.support:
        Eb = info[k]["Eb"]
        if not len(Eb):
            continue
        comp = info[k - 1]["comp"]
        rows: dict[int, dict] = {}
        for c, g in enumerate(comp):
            for j, v in A.differential.col(g).items():
                rows.setdefault(j, {})[c] = v
        keys = list(rows)
        rmap = {j: r for r, j in enumerate(keys)}
        for p, b in Eb.rows.items():
            rhs = {rmap[j]: v for j, v in b.items()}
            sol = linalg.solve_sparse(F, [rows[j] for j in keys], len(comp), rhs)
            assert sol is not None and not sol.nullspace, "d is not injective on the complement"
            lift[(k, p)] = {comp[c]: v for c, v in sol.particular.items()}

    pi_cols, h_cols = {}, {}
    for k in S.support:
        Ez, Eb, Eh = info[k]["Ez"], info[k]["Eb"], info[k]["Eh"]
        for g in S.in_degree(k):
            v = {g: 1}
            z = {}
            for p, row in Ez.rows.items():
                c = v.get(p, 0)
                if c:
                    linalg.iadd(F, z, row, c)
            zr = Eb.reduce(z)
            eta = {hpos[(k, p)]: zr[p] for p in Eh.rows if zr.get(p, 0)}
            if eta:
                pi_cols[g] = eta
            bpart = linalg.sub(F, z, zr)
            hv: dict = {}
            for p in Eb.rows:
                c = bpart.get(p, 0)
                if c:
                    linalg.iadd(F, hv, lift[(k, p)], F.red(-c))
            if hv:
                h_cols[g] = hv
    psi = GradedMap(H, S, 0, {i: r for i, r in enumerate(reps)})
    pi = GradedMap(S, H, 0, pi_cols)
    h = GradedMap(S, S, -1, h_cols)
    return TransferData(A, H, psi, pi, h)


def normalize_homotopy(A: DGAlgebra, psi: GradedMap, pi: GradedMap, h: GradedMap) -> GradedMap:
    """Impose ``h psi = 0``, ``pi h = 0`` and ``h h = 0`` on a homotopy.

    Requires ``psi pi - id = d h + h d``.  First ``h <- (1-P) h (1-P)`` with
    ``P = psi pi``, then ``h <- -h d h``; both steps preserve the homotopy
    relation and the second one kills ``h h``.
    """
    F = A.field
    S = A.space
    one = GradedMap.identity(S)
    P = psi.compose(F, pi)
    Q = sum_maps(F, [(1, one), (-1, P)])
    h1 = Q.compose(F, h.compose(F, Q))
    h2 = h1.compose(F, A.differential.compose(F, h1))
    return sum_maps(F, [(-1, h2)]) if not h2.is_zero() else GradedMap.zero(S, S, -1)


def transfer_residuals(T: TransferData) -> dict[str, bool]:
    """Each deformation-retract identity mapped to whether it holds exactly."""
    A = T.algebra
    F, S, H = A.field, A.space, T.homology
    d = A.differential
    psi, pi, h = T.psi, T.pi, T.h
    one_A = GradedMap.identity(S)
    one_H = GradedMap.identity(H)
    lhs = sum_maps(F, [(1, psi.compose(F, pi)), (-1, one_A)])
    rhs = sum_maps(F, [(1, d.compose(F, h)), (1, h.compose(F, d))])
    return {
        "pi psi = id": pi.compose(F, psi).cols == one_H.cols,
        "psi pi - id = dh + hd": lhs.cols == rhs.cols,
        "hh = 0": h.compose(F, h).is_zero(),
        "h psi = 0": h.compose(F, psi).is_zero(),
        "pi h = 0": pi.compose(F, h).is_zero(),
        "d psi = 0": d.compose(F, psi).is_zero(),
        "pi d = 0": pi.compose(F, d).is_zero(),
    }


def induced_product(T: TransferData) -> MultiMap:
    """``mu2(x, y) = pi(psi(x) · psi(y))`` on basis pairs of H."""
    A, H = T.algebra, T.homology
    vals = {}
    for w in H.words(2, H.support):
        v = T.pi.apply(A.field, A.mul(T.psi.col(w[0]), T.psi.col(w[1])))
        if v:
            vals[w] = v
    return MultiMap(2, H, H, 0, vals)


def cocycle_class(T: TransferData, a: dict) -> dict:
    if T.algebra.d(a):
        raise ValueError("not a cocycle")
    return T.pi.apply(T.F, a)


def representative(T: TransferData, x: dict) -> dict:
    return T.psi.apply(T.F, x)


def class_vector(T: TransferData, label: str) -> dict:
    return {T.homology.index(label): 1}
