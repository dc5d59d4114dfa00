"""Canonical minimal models by homotopy transfer.

Stage ``n`` collects every term of the arity-n morphism equation except
``ψ μ_n`` into ``Phi_n``, checks that ``Phi_n`` is a cocycle, and sets
``μ_n = -π Phi_n`` and ``ψ_n = -h Phi_n``.  Then
``d ψ_n = -(ψπ - 1 - hd) Phi_n = ψ μ_n + Phi_n`` which is the equation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import linalg
from .ainf import AInfinityMorphism, AInfinityStructure, dg_target_rhs
from .dga import DGAlgebra, TransferData, cohomology, normalize_homotopy
from .graded import GradedMap, MultiMap, sum_maps


class TransferError(RuntimeError):
    """``d Phi_n`` failed to vanish; carries the arity and the offending word."""

    def __init__(self, arity, word, residual):
        self.arity = arity
        self.word = word
        self.residual = residual
        super().__init__(f"d(Phi_{arity}) != 0 at ({', '.join(word)}): {residual}")


@dataclass
class CanonicalModel:
    model: AInfinityStructure
    connecting: AInfinityMorphism
    transfer: TransferData
    phi: dict = field(default_factory=dict)  # n -> MultiMap H^{⊗n} -> A

    @property
    def N(self) -> int:
        return self.model.N

    def mu(self, n: int) -> MultiMap:
        return self.model.ops[n]

    def psi(self, n: int) -> MultiMap:
        return self.connecting.comps[n]


def canonical_minimal_model(A: DGAlgebra, T: TransferData | None = None, N: int = 4) -> CanonicalModel:
    if N < 2:
        raise ValueError("truncation arity must be at least 2")
    T = cohomology(A) if T is None else T
    F = A.field
    H, S = T.homology, A.space
    comps = {1: MultiMap(1, H, S, 0, {(i,): v for i, v in T.psi.cols.items()})}
    ops: dict = {}
    phis = {}
    for n in range(2, N + 1):
        phi, mu, psi = {}, {}, {}
        totals = [t + n - 2 for t in S.support]
        for w in H.words(n, totals):
            v = dg_target_rhs(F, A.mul, comps, ops, w, H.degrees, include_top=False)
            if not v:
                continue
            dv = A.d(v)
            if dv:
                raise TransferError(n, tuple(H.names[j] for j in w), S.format(dv))
            phi[w] = v
            m = T.pi.apply(F, v)
            if m:
                mu[w] = linalg.neg(F, m)
            p = T.h.apply(F, v)
            if p:
                psi[w] = linalg.neg(F, p)
        phis[n] = MultiMap(n, H, S, 2 - n, phi)
        ops[n] = MultiMap(n, H, H, 2 - n, mu)
        comps[n] = MultiMap(n, H, S, 1 - n, psi)
        ops[n].check_degrees()
        comps[n].check_degrees()
    model = AInfinityStructure.minimal(F, H, ops, N)
    target = AInfinityStructure.from_dga(A, N)
    return CanonicalModel(model, AInfinityMorphism(model, target, comps, N), T, phis)


def _random_map(F, rng, space, degree, density=0.3) -> GradedMap:
    cols = {}
    for g in range(space.dim):
        tgt = space.in_degree(space.degrees[g] + degree)
        if not tgt or rng.random() > density:
            continue
        v = {}
        for j in tgt:
            if rng.random() < 0.5:
                c = rng.randrange(F.p) if F.is_finite else rng.choice([-1, 1, 2])
                if F.red(c):
                    v[j] = F.red(c)
        if v:
            cols[g] = v
    return GradedMap(space, space, degree, cols)


def vary_homotopy(T: TransferData, seed: int) -> TransferData:
    """Other transfer data with the same ``H`` and ``π``, deterministic in ``seed``.

    A random degree -1 map ``k`` changes the representatives to
    ``ψ + d k ψ`` and the homotopy to ``h + k ψ π + d k' d`` (``k'`` of degree -3); the result is
    then renormalized.  Seed 0 returns ``T`` itself.
    """
    if seed == 0:
        return T
    A = T.algebra
    F, S = A.field, A.space
    rng = random.Random(seed)
    k = _random_map(F, rng, S, -1)
    k2 = _random_map(F, rng, S, -3)
    d = A.differential
    psi = sum_maps(F, [(1, T.psi), (1, d.compose(F, k.compose(F, T.psi)))])
    terms = [(1, T.h), (1, k.compose(F, T.psi.compose(F, T.pi)))]
    dkd = d.compose(F, k2.compose(F, d))
    if not dkd.is_zero():
        terms.append((1, dkd))
    h = sum_maps(F, terms)
    h = normalize_homotopy(A, psi, T.pi, h)
    return TransferData(A, T.homology, psi, T.pi, h)
