"""Builders for concrete dg algebras.

* truncated free algebras on graded generators, with ``d`` given on the
  generators and extended by the Leibniz rule;
* path algebras of graded quivers, again with ``d`` on arrows;
* the small examples shipped with the package and random test algebras.
"""

from __future__ import annotations

import itertools
import random

from . import linalg
from .dga import DGAlgebra
from .fields import QQ, Field, GF
from .graded import GradedMap, GradedSpace, MultiMap


def _word_name(word, gens, sep):
    return sep.join(gens[i] for i in word)


def _parse_word(text: str, gens: list[str]) -> tuple:
    """``"ab"`` or ``"a*b"`` into generator indices; ``"1"`` is the empty word."""
    text = text.strip()
    if text in ("1", ""):
        return ()
    ix = {g: i for i, g in enumerate(gens)}
    if "*" in text:
        parts = [p.strip() for p in text.split("*")]
        try:
            return tuple(ix[p] for p in parts)
        except KeyError as e:
            raise KeyError(f"unknown generator {e.args[0]!r} in {text!r}") from None
    if all(len(g) == 1 for g in gens):
        try:
            return tuple(ix[c] for c in text)
        except KeyError as e:
            raise KeyError(f"unknown generator {e.args[0]!r} in {text!r}") from None
    if text in ix:
        return (ix[text],)
    raise KeyError(f"cannot split {text!r} into generators; use '*' between names")


def free_truncated(F: Field, generators, d=None, truncation=None, max_length=None, unital=True) -> DGAlgebra:
    """Free graded algebra on ``generators`` modulo long words.

    ``generators`` is a list of ``(name, degree)``.  ``d`` maps a generator
    to ``{word: coefficient}``, where a word is written by concatenating
    single-character names (or joining with ``*``).  Words survive when
    their degree is at most ``truncation`` and their length at most
    ``max_length``; everything else is zero.  With ``unital`` the empty word
    ``1`` is included.
    """
    gens = [g for g, _ in generators]
    gdeg = [int(k) for _, k in generators]
    if len(set(gens)) != len(gens):
        raise ValueError("duplicate generator names")
    if truncation is None and max_length is None:
        raise ValueError("need a degree truncation or a length bound")
    if max_length is None and min(gdeg, default=1) <= 0:
        raise ValueError("generators of degree <= 0 need a length bound")
    sep = "" if all(len(g) == 1 for g in gens) else "*"

    def keep(word):
        if max_length is not None and len(word) > max_length:
            return False
        if truncation is not None and sum(gdeg[i] for i in word) > truncation:
            return False
        return True

    words = [()] if unital else []
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            for i in range(len(gens)):
                u = w + (i,)
                if keep(u):
                    nxt.append(u)
        words.extend(nxt)
        frontier = nxt
    pos = {w: k for k, w in enumerate(words)}
    names = [_word_name(w, gens, sep) if w else "1" for w in words]
    degs = [sum(gdeg[i] for i in w) for w in words]
    space = GradedSpace(tuple(names), tuple(degs))

    dgen = {}
    for g, img in (d or {}).items():
        if g not in gens:
            raise KeyError(f"d given on unknown generator {g!r}")
        vec = {}
        for text, c in img.items():
            u = _parse_word(text, gens)
            if not u:
                raise ValueError(f"d({g}) has a constant term")
            if sum(gdeg[i] for i in u) != gdeg[gens.index(g)] + 1:
                raise ValueError(f"d({g}) has term {text!r} of wrong degree")
            c = F(c)
            if c:
                vec[u] = F.red(vec.get(u, 0) + c)
        dgen[gens.index(g)] = {u: c for u, c in vec.items() if c}

    cols = {}
    for w in words:
        out: dict = {}
        passed = 0
        for k, i in enumerate(w):
            s = F.sign(passed)
            for u, c in dgen.get(i, {}).items():
                nw = w[:k] + u + w[k + 1 :]
                if keep(nw):
                    j = pos[nw]
                    val = F.red(out.get(j, 0) + s * c)
                    if val:
                        out[j] = val
                    else:
                        out.pop(j)
            passed += gdeg[i]
        if out:
            cols[pos[w]] = out
    vals = {}
    for a in words:
        for b in words:
            ab = a + b
            if keep(ab):
                vals[(pos[a], pos[b])] = {pos[ab]: 1}
    return DGAlgebra(
        F,
        space,
        GradedMap(space, space, 1, cols),
        MultiMap(2, space, space, 0, vals),
        pos[()] if unital else None,
    )


def path_algebra(F: Field, vertices, arrows, d=None, max_length=None) -> DGAlgebra:
    """Path algebra of a graded quiver, paths composed left to right.

    ``arrows`` is a list of ``(name, source, target, degree)``.  Basis:
    vertex idempotents ``e<v>`` (degree 0) and all paths of length
    ``1..max_length``; a product of two paths is their concatenation when the
    first ends where the second starts.  ``d`` maps an arrow name to
    ``{path: coefficient}`` with paths written as ``*``-joined arrow names.
    """
    vertices = list(vertices)
    names_a = [a[0] for a in arrows]
    src = {a[0]: a[1] for a in arrows}
    tgt = {a[0]: a[2] for a in arrows}
    adeg = {a[0]: int(a[3]) for a in arrows}
    if len(set(names_a)) != len(names_a):
        raise ValueError("duplicate arrow names")

    paths = []
    frontier = [(a,) for a in names_a]
    length = 1
    while frontier and (max_length is None or length <= max_length):
        paths.extend(frontier)
        nxt = []
        for p in frontier:
            for a in names_a:
                if src[a] == tgt[p[-1]]:
                    nxt.append(p + (a,))
        frontier = nxt
        length += 1
        if length > 64:
            raise ValueError("quiver has oriented cycles; give max_length")
    idem = [f"e{v}" for v in vertices]
    names = idem + ["*".join(p) for p in paths]
    degs = [0] * len(idem) + [sum(adeg[a] for a in p) for p in paths]
    space = GradedSpace(tuple(names), tuple(degs))
    ppos = {p: len(idem) + k for k, p in enumerate(paths)}
    vpos = {v: k for k, v in enumerate(vertices)}

    vals = {}
    for v in vertices:
        vals[(vpos[v], vpos[v])] = {vpos[v]: 1}
    for p in paths:
        i = ppos[p]
        vals[(vpos[src[p[0]]], i)] = {i: 1}
        vals[(i, vpos[tgt[p[-1]]])] = {i: 1}
        for q in paths:
            if tgt[p[-1]] == src[q[0]] and p + q in ppos:
                vals[(i, ppos[q])] = {ppos[p + q]: 1}

    darr = {}
    for a, img in (d or {}).items():
        if a not in src:
            raise KeyError(f"d given on unknown arrow {a!r}")
        vec = {}
        for text, c in img.items():
            p = tuple(x.strip() for x in text.split("*"))
            for x in p:
                if x not in src:
                    raise KeyError(f"unknown arrow {x!r} in {text!r}")
            if src[p[0]] != src[a] or tgt[p[-1]] != tgt[a]:
                raise ValueError(f"d({a}) term {text!r} has wrong endpoints")
            if sum(adeg[x] for x in p) != adeg[a] + 1:
                raise ValueError(f"d({a}) term {text!r} has wrong degree")
            c = F(c)
            if c:
                vec[p] = c
        darr[a] = vec
    cols = {}
    for p in paths:
        out: dict = {}
        passed = 0
        for k, a in enumerate(p):
            s = F.sign(passed)
            for q, c in darr.get(a, {}).items():
                nq = p[:k] + q + p[k + 1 :]
                if nq in ppos:
                    linalg.iadd(F, out, {ppos[nq]: 1}, s * c)
            passed += adeg[a]
        if out:
            cols[ppos[p]] = out
    return DGAlgebra(F, space, GradedMap(space, space, 1, cols), MultiMap(2, space, space, 0, vals), None)


# ---------------------------------------------------------------------------
# named examples


def example_e1(F: Field = QQ) -> DGAlgebra:
    """Free on a, b, u, v in degree 1 with du = ab, dv = ba, cut above degree 3."""
    return free_truncated(
        F,
        [("a", 1), ("b", 1), ("u", 1), ("v", 1)],
        d={"u": {"ab": 1}, "v": {"ba": 1}},
        truncation=3,
    )


def matrix_algebra(F: Field = QQ, n: int = 2) -> DGAlgebra:
    """n×n matrices in degree 0 with zero differential."""
    names = [f"E{i}{j}" for i in range(n) for j in range(n)]
    space = GradedSpace(tuple(names), (0,) * len(names))
    vals = {}
    for i, j, k in itertools.product(range(n), repeat=3):
        vals[(i * n + j, j * n + k)] = {i * n + k: 1}
    return DGAlgebra(F, space, GradedMap.zero(space, space, 1), MultiMap(2, space, space, 0, vals), None)


def acyclic_example(F: Field = QQ) -> DGAlgebra:
    """span{x, dx} with zero product."""
    space = GradedSpace(("x", "dx"), (0, 1))
    return DGAlgebra(F, space, GradedMap(space, space, 1, {0: {1: 1}}), MultiMap(2, space, space, 0, {}), None)


def zero_product_algebra(F: Field, pairs) -> DGAlgebra:
    space = GradedSpace.from_pairs(pairs)
    return DGAlgebra(F, space, GradedMap.zero(space, space, 1), MultiMap(2, space, space, 0, {}), None)


def massey_quiver(F: Field = GF(2), degrees=(1, 2, 2, 1)) -> DGAlgebra:
    """Path algebra carrying a universal defining system for a 4-fold product.

    Vertices ``0..4``; an arrow ``a<u><v>`` from ``u-1`` to ``v`` for each
    ``1 <= u <= v <= 4`` except ``(1, 4)``, of degree
    ``Σ_{r=u}^{v}(x_r - 1) + 1``, with ``d a_uv = Σ_r (sign-reversed a_ur) a_{r+1,v}``.
    The classes of ``a11 .. a44`` then have a strictly defined product
    which is nonzero, since nothing can bound the corner cocycle.
    """
    x = list(degrees)
    n = len(x)

    def deg(u, v):
        return sum(x[r - 1] - 1 for r in range(u, v + 1)) + 1

    arrows = []
    for span in range(n):
        for u in range(1, n - span + 1):
            v = u + span
            if (u, v) == (1, n):
                continue
            arrows.append((f"a{u}{v}", u - 1, v, deg(u, v)))
    d = {}
    for name, s, t, k in arrows:
        u, v = int(name[1]), int(name[2])
        img = {}
        for r in range(u, v):
            img[f"a{u}{r}*a{r + 1}{v}"] = (-1) ** deg(u, r)
        if img:
            d[name] = img
    return path_algebra(F, range(n + 1), arrows, d)


# ---------------------------------------------------------------------------
# random algebras


def _random_scalar(F: Field, rng: random.Random):
    if F.is_finite:
        return rng.randrange(F.p)
    return rng.choice([-2, -1, 1, 2])


def _cocycles_in_degree(A: DGAlgebra, k: int, allowed) -> list[dict]:
    """Basis of cocycles of degree ``k`` supported on the index set ``allowed``."""
    F, S = A.field, A.space
    idx = [i for i in S.in_degree(k) if i in allowed]
    rows: dict[int, dict] = {}
    for c, g in enumerate(idx):
        for j, v in A.differential.col(g).items():
            rows.setdefault(j, {})[c] = v
    return [{idx[c]: v for c, v in z.items()} for z in linalg.kernel(F, list(rows.values()), len(idx))]


def random_free_dga(F: Field, rng: random.Random, gen_degrees, truncation=None, max_length=None,
                    unital=False, density=0.7) -> DGAlgebra:
    """Truncated free algebra with a random triangular differential.

    Generators ``g0, g1, ...`` are added one at a time; ``d`` of a new
    generator is a random cocycle in the subalgebra on the earlier ones, so
    ``d² = 0`` holds by construction.
    """
    names = [chr(ord("a") + i) for i in range(len(gen_degrees))]
    gens = list(zip(names, gen_degrees))
    d: dict = {}
    for i, (g, k) in enumerate(gens):
        if i == 0 or rng.random() > density:
            continue
        partial = free_truncated(F, gens[:i] + [(g, k)], d=d, truncation=truncation, max_length=max_length, unital=False)
        gi = partial.space.index(g)
        # words not involving the new generator
        allowed = {j for j, nm in enumerate(partial.space.names) if g not in nm}
        Z = _cocycles_in_degree(partial, k + 1, allowed)
        if not Z:
            continue
        img: dict = {}
        for z in Z:
            linalg.iadd(F, img, z, _random_scalar(F, rng))
        if img:
            d[g] = {partial.space.names[j]: c for j, c in img.items()}
        del gi
    return free_truncated(F, gens, d=d, truncation=truncation, max_length=max_length, unital=unital)


def random_quiver_dga(F: Field, rng: random.Random, n_vertices=3, n_arrows=4, max_length=2, max_dim=12) -> DGAlgebra | None:
    """Random acyclic graded quiver with a triangular random differential."""
    verts = list(range(n_vertices))
    arrows = []
    for k in range(n_arrows):
        s = rng.randrange(n_vertices - 1)
        t = rng.randrange(s + 1, n_vertices)
        arrows.append((f"p{k}", s, t, rng.choice([0, 1, 1, 2])))
    d: dict = {}
    for i, (name, s, t, k) in enumerate(arrows):
        if i == 0:
            continue
        partial = path_algebra(F, verts, arrows[:i], d, max_length)
        if partial.dim > max_dim:
            return None
        # cocycles among paths s -> t of degree k+1 made of earlier arrows, length >= 2
        cand = set()
        for j, nm in enumerate(partial.space.names):
            if "*" not in nm:
                continue
            parts = nm.split("*")
            first = next(a for a in arrows if a[0] == parts[0])
            last = next(a for a in arrows if a[0] == parts[-1])
            if first[1] == s and last[2] == t:
                cand.add(j)
        Z = _cocycles_in_degree(partial, k + 1, cand)
        img: dict = {}
        for z in Z:
            linalg.iadd(F, img, z, _random_scalar(F, rng))
        if img:
            d[name] = {partial.space.names[j]: c for j, c in img.items()}
    A = path_algebra(F, verts, arrows, d, max_length)
    return A if A.dim <= max_dim else None


def random_dgas(count: int, seed: int = 0, max_dim: int = 12):
    """``count`` random dg algebras over GF(2) and GF(3), each of dimension <= max_dim."""
    rng = random.Random(seed)
    out = []
    recipes = [
        lambda F: random_free_dga(F, rng, [1, 1, 1], max_length=2),
        lambda F: random_free_dga(F, rng, [1, 1, 2], truncation=3, max_length=2),
        lambda F: random_free_dga(F, rng, [0, 1, 1], max_length=2),
        lambda F: random_free_dga(F, rng, [1, 1], truncation=3, unital=True),
        lambda F: random_free_dga(F, rng, [1, 2, 1], truncation=4, max_length=2),
        lambda F: random_quiver_dga(F, rng, 3, 4, 2, max_dim),
        lambda F: random_quiver_dga(F, rng, 4, 5, 3, max_dim),
    ]
    k = 0
    while len(out) < count:
        F = GF(2) if k % 2 == 0 else GF(3)
        A = recipes[k % len(recipes)](F)
        k += 1
        if A is not None and A.dim <= max_dim:
            out.append(A)
        if k > 50 * count:
            raise RuntimeError("could not generate enough random algebras")
    return out
