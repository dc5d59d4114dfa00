"""A∞-structures and A∞-morphisms, checked through the bar construction.

Sign conventions live in one place: :func:`bar_sign`.  An operation
``m: V^{⊗n} -> W`` of degree ``s`` corresponds to the bar component
``↓ m ↑^{⊗n}`` on the shifted spaces, where ``↓`` lowers degrees by one.
Identifying basis vectors of ``sV`` with those of ``V``, that component sends
a word ``w`` to ``bar_sign(w) * m(w)``.  Structures are codifferentials on
the tensor coalgebra, morphisms are coalgebra maps, and every identity
checked here is the vanishing of a bar-level expression, reported after
multiplying back by ``bar_sign`` so residuals read in the unshifted world.

With this translation the arity-n morphism equation for a dg-algebra target
is exactly::

    d f_n(h) = -Σ_{i+j=n} (-1)^{(j+1)(i+h_1+..+h_i)} f_i(h_1..h_i)·f_j(h_{i+1}..h_n)
               -Σ (-1)^{i+n+k(h_1+..+h_{i-1}+i)} f_l(h_1..h_{i-1}, mu_k(h_i..h_{i+k-1}), ..h_n)

with the second sum over ``l + k = n + 1``, ``k >= 2`` and all positions
``1 <= i <= l``; see :func:`dg_target_rhs`, which is cross-checked against
the bar route on every word by :func:`check_morphism`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import linalg
from .fields import Field
from .graded import GradedMap, GradedSpace, MultiMap


def bar_sign_exponent(degrees) -> int:
    """Exponent ``e`` with ``↑^{⊗n}(↓x_1 ⊗ .. ⊗ ↓x_n) = (-1)^e x_1 ⊗ .. ⊗ x_n``."""
    n = len(degrees)
    return sum((n - 1 - i) * (d - 1) for i, d in enumerate(degrees))


def bar_sign(F: Field, degrees):
    return F.sign(bar_sign_exponent(degrees))


def as_multimap(m: GradedMap) -> MultiMap:
    return MultiMap(1, m.source, m.target, m.degree, {(i,): v for i, v in m.cols.items()})


def as_graded_map(m: MultiMap) -> GradedMap:
    assert m.arity == 1
    return GradedMap(m.source, m.target, m.degree, {w[0]: v for w, v in m.values.items()})


@dataclass
class AInfinityStructure:
    """``(V, d, mu_2, mu_3, ...)`` truncated at arity ``N``; ``mu_n`` has degree ``2-n``."""

    field: Field
    space: GradedSpace
    differential: GradedMap
    ops: dict  # n >= 2 -> MultiMap
    N: int = 4

    def __post_init__(self):
        for n, m in self.ops.items():
            if n < 2 or m.arity != n:
                raise ValueError(f"bad operation at arity {n}")
            if m.degree != 2 - n:
                raise ValueError(f"mu_{n} has degree {m.degree}, expected {2 - n}")
        if self.differential.degree != 1:
            raise ValueError("differential must have degree +1")

    @classmethod
    def from_dga(cls, A, N: int = 4) -> "AInfinityStructure":
        return cls(A.field, A.space, A.differential, {2: A.product}, N)

    @classmethod
    def minimal(cls, F, space, ops, N) -> "AInfinityStructure":
        return cls(F, space, GradedMap.zero(space, space, 1), dict(ops), N)

    def mu(self, n: int) -> MultiMap | None:
        """``mu_n`` with ``mu_1 = d``; None when the operation is zero/absent."""
        if n == 1:
            return None if self.differential.is_zero() else as_multimap(self.differential)
        m = self.ops.get(n)
        return None if m is None or m.is_zero() else m

    @property
    def is_minimal(self) -> bool:
        return self.differential.is_zero()

    @property
    def is_dg(self) -> bool:
        return all(n == 2 or m.is_zero() for n, m in self.ops.items())

    def truncate(self, N: int) -> "AInfinityStructure":
        return AInfinityStructure(self.field, self.space, self.differential, {n: m for n, m in self.ops.items() if n <= N}, N)


@dataclass
class AInfinityMorphism:
    """Components ``f_n`` of degree ``1-n``, ``1 <= n <= N``."""

    source: AInfinityStructure
    target: AInfinityStructure
    comps: dict  # n -> MultiMap (f_1 stored with arity 1)
    N: int = 4

    def __post_init__(self):
        for n, m in self.comps.items():
            if m.arity != n or m.degree != 1 - n:
                raise ValueError(f"component {n} has arity {m.arity}, degree {m.degree}")
        if 1 not in self.comps:
            raise ValueError("missing linear part")

    def f(self, n: int) -> MultiMap | None:
        m = self.comps.get(n)
        return None if m is None or m.is_zero() else m

    @property
    def linear(self) -> GradedMap:
        return as_graded_map(self.comps[1])

    @property
    def is_isotopy(self) -> bool:
        S = self.source.space
        return (
            S == self.target.space
            and self.comps[1].values == {(i,): {i: 1} for i in range(S.dim)}
        )


def identity_morphism(S: AInfinityStructure) -> AInfinityMorphism:
    V = S.space
    one = MultiMap(1, V, V, 0, {(i,): {i: 1} for i in range(V.dim)})
    return AInfinityMorphism(S, S, {1: one}, S.N)


@dataclass
class Defect:
    """A failed identity: which one, at which arity, on which basis word."""

    identity: str
    arity: int
    word: tuple
    residual: str

    def __str__(self):
        return f"{self.identity} (arity {self.arity}) at ({', '.join(self.word)}): {self.residual}"


# ---------------------------------------------------------------------------
# bar-level evaluation


def _bar_value(F, m: MultiMap, word, degs):
    """Bar component of ``m`` on the shifted word; ``degs`` are unshifted degrees."""
    v = m.values.get(word)
    if not v:
        return {}
    if bar_sign_exponent(degs) % 2:
        return linalg.neg(F, v)
    return v


def _coder_apply(F, m: MultiMap, word, degrees):
    """``Σ_i (1^{⊗i} ⊗ b ⊗ 1^{⊗rest})(↓word)`` for the bar component ``b`` of ``m``.

    Returns a dict mapping the resulting words to coefficients.
    """
    k = m.arity
    n = len(word)
    bdeg = m.degree + k - 1
    out: dict = {}
    passed = 0
    for i in range(n - k + 1):
        sub = word[i : i + k]
        v = _bar_value(F, m, sub, [degrees[j] for j in sub])
        if v:
            c0 = F.sign(bdeg * passed)
            for o, c in v.items():
                key = word[:i] + (o,) + word[i + k :]
                val = F.red(out.get(key, 0) + c0 * c)
                if val:
                    out[key] = val
                else:
                    out.pop(key, None)
        passed += degrees[word[i]] - 1
    return out


def _apply_bar_to_words(F, m: MultiMap, words: dict, degrees) -> dict:
    out: dict = {}
    for w, c in words.items():
        v = _bar_value(F, m, w, [degrees[j] for j in w])
        if v:
            linalg.iadd(F, out, v, c)
    return out


def _compositions(n, r):
    if r == 1:
        yield (n,)
        return
    for first in range(1, n - r + 2):
        for rest in _compositions(n - first, r - 1):
            yield (first,) + rest


def _coalgebra_map_apply(F, comps: dict, word, src_degrees, r) -> dict:
    """``Σ_{i_1+..+i_r=n} (F_{i_1} ⊗ .. ⊗ F_{i_r})(↓word)``; the bar components have degree 0."""
    n = len(word)
    out: dict = {}
    for parts in _compositions(n, r):
        factors = []
        pos = 0
        ok = True
        for p in parts:
            m = comps.get(p)
            if m is None:
                ok = False
                break
            sub = word[pos : pos + p]
            v = _bar_value(F, m, sub, [src_degrees[j] for j in sub])
            if not v:
                ok = False
                break
            factors.append(list(v.items()))
            pos += p
        if not ok:
            continue
        for combo in itertools.product(*factors):
            coef = 1
            for c in combo:
                coef = F.red(coef * c[1])
            key = tuple(c[0] for c in combo)
            val = F.red(out.get(key, 0) + coef)
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return out


def stasheff_residual(S: AInfinityStructure, word) -> dict:
    """Arity-``len(word)`` component of ``D∘D`` on ``↓word``, unshifted."""
    F, V = S.field, S.space
    degs = V.degrees
    n = len(word)
    total: dict = {}
    for k in range(1, n + 1):
        inner_op = S.mu(k)
        outer_op = S.mu(n - k + 1)
        if inner_op is None or outer_op is None:
            continue
        inner = _coder_apply(F, inner_op, word, degs)
        if inner:
            linalg.iadd(F, total, _apply_bar_to_words(F, outer_op, inner, degs))
    if total and bar_sign_exponent([degs[j] for j in word]) % 2:
        total = linalg.neg(F, total)
    return total


def _nonzero_arities(S: AInfinityStructure) -> list[int]:
    return [n for n in range(1, S.N + 1) if S.mu(n) is not None]


def check_stasheff(S: AInfinityStructure, N: int | None = None) -> list[Defect]:
    """Every nonvanishing component of ``D∘D`` through arity ``N``."""
    N = S.N if N is None else N
    V = S.space
    present = set(_nonzero_arities(S))
    out = []
    for n in range(1, N + 1):
        if not any(k in present and (n - k + 1) in present for k in range(1, n + 1)):
            continue
        totals = [t + n - 3 for t in V.support]
        for w in V.words(n, totals):
            r = stasheff_residual(S, w)
            if r:
                out.append(Defect("stasheff", n, tuple(V.names[j] for j in w), V.format(r)))
    return out


def morphism_residual(f: AInfinityMorphism, word) -> dict:
    """Arity-n component of ``D_target∘F - F∘D_source`` on ``↓word``, unshifted."""
    S, T = f.source, f.target
    F = S.field
    sdeg, tdeg = S.space.degrees, T.space.degrees
    n = len(word)
    total: dict = {}
    for r in range(1, n + 1):
        b = T.mu(r)
        if b is None:
            continue
        words = _coalgebra_map_apply(F, f.comps, word, sdeg, r)
        if words:
            linalg.iadd(F, total, _apply_bar_to_words(F, b, words, tdeg))
    for k in range(1, n + 1):
        b = S.mu(k)
        fl = f.comps.get(n - k + 1)
        if b is None or fl is None:
            continue
        inner = _coder_apply(F, b, word, sdeg)
        if inner:
            linalg.iadd(F, total, _apply_bar_to_words(F, fl, inner, sdeg), -1)
    if total and bar_sign_exponent([sdeg[j] for j in word]) % 2:
        total = linalg.neg(F, total)
    return total


def dg_target_rhs(F, mul, comps: dict, ops: dict, word, degrees, include_top=True) -> dict:
    """Right-hand side of the arity-n morphism equation into a dg algebra.

    ``mul(u, v)`` multiplies target vectors, ``comps`` are the components
    ``f_i`` and ``ops`` the source operations ``mu_k`` (zero differential on
    the source).  With ``include_top=False`` the final ``f_1 mu_n`` term is
    left out; what remains is the quantity the transfer construction calls
    ``Phi_n``.
    """
    n = len(word)
    h = [degrees[j] for j in word]
    out: dict = {}
    # product terms, i + j = n
    for i in range(1, n):
        j = n - i
        fi, fj = comps.get(i), comps.get(j)
        if fi is None or fj is None:
            continue
        a = fi.values.get(word[:i])
        if not a:
            continue
        b = fj.values.get(word[i:])
        if not b:
            continue
        e = (j + 1) * (i + sum(h[:i]))
        linalg.iadd(F, out, mul(a, b), -F.sign(e))
    # terms with an operation mu_k inserted at position i (1-based)
    for k in range(2, n + 1):
        if k == n and not include_top:
            continue
        mk = ops.get(k)
        l = n + 1 - k
        fl = comps.get(l)
        if mk is None or fl is None:
            continue
        for i in range(1, l + 1):
            m = mk.values.get(word[i - 1 : i - 1 + k])
            if not m:
                continue
            val = fl(F, *(word[: i - 1] + (m,) + word[i - 1 + k :]))
            if val:
                e = i + n + k * (sum(h[: i - 1]) + i)
                linalg.iadd(F, out, val, -F.sign(e))
    return out


def _target_mul(T: AInfinityStructure):
    mu2 = T.ops.get(2)
    F = T.field
    if mu2 is None:
        return lambda u, v: {}
    return lambda u, v: mu2(F, u, v)


def check_morphism(f: AInfinityMorphism, N: int | None = None, cross_check: bool = True) -> list[Defect]:
    """Every nonvanishing component of ``D∘F - F∘D`` through arity ``N``.

    When the target is a dg algebra and the source is minimal, the explicit
    dg-target equations are evaluated as well and must agree with the bar
    route word by word; any disagreement is reported as a ``convention``
    defect.
    """
    N = f.N if N is None else N
    S, T = f.source, f.target
    F = S.field
    V = S.space
    out = []
    explicit = cross_check and T.is_dg and S.is_minimal
    mul = _target_mul(T)
    for n in range(1, N + 1):
        totals = [t + n - 2 for t in T.space.support]
        for w in V.words(n, totals):
            r = morphism_residual(f, w)
            names = tuple(V.names[j] for j in w)
            if r:
                out.append(Defect("morphism", n, names, T.space.format(r)))
            if explicit:
                fn = f.comps.get(n)
                lhs = T.differential.apply(F, fn.values.get(w, {})) if fn is not None else {}
                rhs = dg_target_rhs(F, mul, f.comps, S.ops, w, V.degrees) if n > 1 else {}
                p = linalg.sub(F, lhs, rhs)
                if n == 1:
                    p = lhs
                if p != r:
                    out.append(Defect("convention", n, names, f"bar {T.space.format(r)} vs explicit {T.space.format(p)}"))
    return out


def compose(g: AInfinityMorphism, f: AInfinityMorphism) -> AInfinityMorphism:
    """``g ∘ f`` as coalgebra maps: ``(g∘f)_n = Σ_r g_r(f_{i_1} ⊗ .. ⊗ f_{i_r})``."""
    if f.target.space != g.source.space:
        raise ValueError("incompatible structures: target of f is not the source of g")
    N = min(f.N, g.N)
    S, M, T = f.source, f.target, g.target
    F = S.field
    V = S.space
    comps = {}
    for n in range(1, N + 1):
        vals = {}
        totals = [t + n - 1 for t in T.space.support]
        for w in V.words(n, totals):
            acc: dict = {}
            for r in range(1, n + 1):
                gr = g.comps.get(r)
                if gr is None:
                    continue
                words = _coalgebra_map_apply(F, f.comps, w, V.degrees, r)
                if words:
                    linalg.iadd(F, acc, _apply_bar_to_words(F, gr, words, M.space.degrees))
            if acc:
                if bar_sign_exponent([V.degrees[j] for j in w]) % 2:
                    acc = linalg.neg(F, acc)
                vals[w] = acc
        comps[n] = MultiMap(n, V, T.space, 1 - n, vals)
    return AInfinityMorphism(S, T, comps, N)


# ---------------------------------------------------------------------------
# Hochschild complex of (H, mu_2)


def hochschild_differential(F: Field, mu2: MultiMap, c: MultiMap) -> MultiMap:
    """Hochschild differential ``δc``, normalized from the bar commutator ``[b_2, C]``.

    ``c`` has arity ``k`` and degree ``s``; the result has arity ``k+1`` and
    the same degree.  On a 2-cochain of degree -1 this is
    ``-mu_2(id, c) + mu_2(c, id) + c(mu_2, id) - c(id, mu_2)``.
    """
    k, s = c.arity, c.degree
    V = mu2.source
    degs = V.degrees
    bdeg = s + k - 1
    vals = {}
    totals = [t - s for t in V.support]
    for w in V.words(k + 1, totals):
        acc: dict = {}
        inner = _coder_apply(F, c, w, degs)
        if inner:
            linalg.iadd(F, acc, _apply_bar_to_words(F, mu2, inner, degs))
        inner = _coder_apply(F, mu2, w, degs)
        if inner:
            linalg.iadd(F, acc, _apply_bar_to_words(F, c, inner, degs), -F.sign(bdeg))
        if acc:
            if bar_sign_exponent([degs[j] for j in w]) % 2:
                acc = linalg.neg(F, acc)
            vals[w] = acc
    return MultiMap(k + 1, V, V, s, vals)


def hochschild_terms(F: Field, mu2: MultiMap, k: int, s: int, w: tuple):
    """Closed form of ``δc(w)`` as a list of ``(coef, subword, mode, letter)``.

    ``mode`` is ``"left"`` for ``coef * mu_2(letter, c(subword))``, ``"right"``
    for ``coef * mu_2(c(subword), letter)`` and ``"plain"`` for
    ``coef * c(subword)``, where in the plain case ``subword`` may contain one
    vector slot.  Used to assemble linear systems; equality with
    :func:`hochschild_differential` is part of the test suite.
    """
    degs = mu2.source.degrees
    terms = []
    e0 = s + k - 1
    terms.append((F.sign(e0), w[:k], "right", w[k]))
    terms.append((F.sign(s * (degs[w[0]] - 1)), w[1:], "left", w[0]))
    for i in range(1, k + 1):
        m = mu2.values.get((w[i - 1], w[i]))
        if m:
            terms.append((-F.sign(e0 + k + i), w[: i - 1] + (m,) + w[i + 1 :], "plain", None))
    return terms


def is_hochschild_cocycle(F, mu2, c) -> bool:
    return hochschild_differential(F, mu2, c).is_zero()


def _cochain_columns(V: GradedSpace, k: int, s: int):
    """Column index for every coordinate ``(word, output)`` of a ``(k, s)`` cochain."""
    cols = {}
    names = []
    totals = [t - s for t in V.support]
    for u in V.words(k, totals):
        for o in V.in_degree(V.word_degree(u) + s):
            cols[(u, o)] = len(names)
            names.append((u, o))
    return cols, names


def _delta_system(F, mu2: MultiMap, k: int, s: int, rhs_of_word):
    """Rows of ``δ`` from ``(k, s)`` to ``(k+1, s)`` cochains, and a target.

    ``rhs_of_word(w)`` gives the sparse target vector on each arity-(k+1)
    word.  Returns ``(rows, rhs, ncols, column_names)``.
    """
    V = mu2.source
    cols, names = _cochain_columns(V, k, s)
    rows = []
    rhs = {}
    totals = [t - s for t in V.support]
    for w in V.words(k + 1, totals):
        eq: dict[int, dict] = {}
        for coef, sub, mode, letter in hochschild_terms(F, mu2, k, s, w):
            if mode == "plain":
                slots = [[(x, 1)] if isinstance(x, int) else list(x.items()) for x in sub]
                for combo in itertools.product(*slots):
                    u = tuple(c[0] for c in combo)
                    cc = coef
                    for c in combo:
                        cc = F.red(cc * c[1])
                    for o in V.in_degree(V.word_degree(u) + s):
                        col = cols[(u, o)]
                        r = eq.setdefault(o, {})
                        val = F.red(r.get(col, 0) + cc)
                        if val:
                            r[col] = val
                        else:
                            r.pop(col, None)
            else:
                for o in V.in_degree(V.word_degree(sub) + s):
                    col = cols[(sub, o)]
                    pair = (letter, o) if mode == "left" else (o, letter)
                    for q, c in mu2.values.get(pair, {}).items():
                        r = eq.setdefault(q, {})
                        val = F.red(r.get(col, 0) + coef * c)
                        if val:
                            r[col] = val
                        else:
                            r.pop(col, None)
        target = rhs_of_word(w)
        for q in set(eq) | set(target):
            row = eq.get(q, {})
            b = target.get(q, 0)
            if row or b:
                if b:
                    rhs[len(rows)] = b
                rows.append(row)
    return rows, rhs, len(names), names


def solve_coboundary(F, mu2: MultiMap, k: int, s: int, target: MultiMap):
    """Find ``c`` with ``δc = target`` (arity ``k+1`` cochain), or None.

    Returns ``(c, kernel_dimension)``.
    """
    rows, rhs, ncols, names = _delta_system(F, mu2, k, s, target.on_word)
    sol = linalg.solve_sparse(F, rows, ncols, rhs, nullspace=False)
    if sol is None:
        return None
    V = mu2.source
    vals: dict = {}
    for col, v in sol.particular.items():
        u, o = names[col]
        vals.setdefault(u, {})[o] = v
    return MultiMap(k, V, V, s, vals), sol.kernel_dim


def universal_massey_class(F: Field, mu2: MultiMap, mu3: MultiMap, mu3p: MultiMap):
    """Decide whether two Hochschild 3-cocycles of degree -1 are cohomologous.

    Returns ``(equal, tau2)`` where ``δ tau2 = mu3 - mu3p`` when equal.
    """
    for name, c in (("mu3", mu3), ("mu3'", mu3p)):
        if c.arity != 3 or c.degree != -1:
            raise ValueError(f"{name} is not a (3, -1) cochain")
        if not is_hochschild_cocycle(F, mu2, c):
            raise ValueError(f"{name} is not a Hochschild cocycle")
    V = mu2.source
    diff = {}
    for w in set(mu3.values) | set(mu3p.values):
        v = linalg.sub(F, mu3.on_word(w), mu3p.on_word(w))
        if v:
            diff[w] = v
    res = solve_coboundary(F, mu2, 2, -1, MultiMap(3, V, V, -1, diff))
    if res is None:
        return False, None
    return True, res[0]


# ---------------------------------------------------------------------------
# isotopies between minimal models


@dataclass
class IsotopyResult:
    morphism: AInfinityMorphism
    freedom: list = field(default_factory=list)  # kernel dimension of δ at each solved arity

    @property
    def is_identity(self) -> bool:
        return all(m.is_zero() for n, m in self.morphism.comps.items() if n >= 2)


def find_isotopy(M1: AInfinityStructure, M2: AInfinityStructure, N: int | None = None,
                 search_limit: int = 4096) -> IsotopyResult | None:
    """Isotopy ``tau: M1 -> M2`` through arity ``N``, or None.

    ``tau_m`` is fixed by the arity-(m+1) identity, which reads
    ``δ tau_m = -R`` with ``R`` the residual computed with ``tau_m = 0``.
    The zero particular solution is taken at every stage.  If a later stage
    is inconsistent, over a finite field the previous component is varied
    through the cocycles of ``δ`` (at most ``search_limit`` choices).
    """
    if M1.space != M2.space:
        raise ValueError("structures live on different spaces")
    if not (M1.is_minimal and M2.is_minimal):
        raise ValueError("isotopies are searched between minimal structures only")
    F = M1.field
    V = M1.space
    N = min(M1.N, M2.N) if N is None else N
    mu2a = M1.ops.get(2) or MultiMap(2, V, V, 0, {})
    mu2b = M2.ops.get(2) or MultiMap(2, V, V, 0, {})
    if mu2a.values != mu2b.values:
        raise ValueError("binary products differ, so no isotopy can exist")
    one = MultiMap(1, V, V, 0, {(i,): {i: 1} for i in range(V.dim)})
    comps = {1: one}
    freedom = []

    def residual_map(comps, m):
        tau = AInfinityMorphism(M1, M2, comps, N)
        totals = [t + m - 1 for t in V.support]
        return {w: r for w in V.words(m + 1, totals) if (r := morphism_residual(tau, w))}

    def solve_stage(comps, m):
        R = residual_map(comps, m)
        neg = {w: linalg.neg(F, v) for w, v in R.items()}
        return solve_coboundary(F, mu2a, m, 1 - m, MultiMap(m + 1, V, V, 1 - m, neg))

    for m in range(2, N):
        res = solve_stage(comps, m)
        if res is None and m >= 3 and F.is_finite:
            res = _search_previous(F, mu2a, comps, m, solve_stage, search_limit)
        if res is None:
            return None
        tau_m, kdim = res
        comps[m] = tau_m
        freedom.append(kdim)
    tau = AInfinityMorphism(M1, M2, comps, N)
    return IsotopyResult(tau, freedom)


def _search_previous(F, mu2, comps, m, solve_stage, limit):
    V = mu2.source
    k = m - 1
    s = 1 - k
    zero = MultiMap(k + 1, V, V, s, {})
    rows, rhs, ncols, names = _delta_system(F, mu2, k, s, zero.on_word)
    null = linalg.solve_sparse(F, rows, ncols, {}).nullspace
    if F.p ** len(null) > limit:
        return None
    base = comps[k]
    for coeffs in itertools.product(range(F.p), repeat=len(null)):
        if not any(coeffs):
            continue
        shift: dict = {}
        for c, v in zip(coeffs, null):
            linalg.iadd(F, shift, v, c)
        vals = {w: dict(v) for w, v in base.values.items()}
        for col, c in shift.items():
            u, o = names[col]
            vec = vals.setdefault(u, {})
            val = F.red(vec.get(o, 0) + c)
            if val:
                vec[o] = val
            else:
                vec.pop(o, None)
        trial = dict(comps)
        trial[k] = MultiMap(k, V, V, s, vals)
        res = solve_stage(trial, m)
        if res is not None:
            comps[k] = trial[k]
            return res
    return None
