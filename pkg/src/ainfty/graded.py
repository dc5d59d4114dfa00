"""Graded vector spaces, graded linear and multilinear maps, Koszul signs.

Everything is stored on basis elements: a :class:`GradedMap` keeps the image
of each source basis vector, a :class:`MultiMap` the image of each basis
tensor word (a tuple of basis indices).  Grading is cohomological and may be
negative.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import linalg
from .fields import Field


@dataclass(frozen=True)
class GradedSpace:
    """Finite basis of named, homogeneous vectors."""

    names: tuple
    degrees: tuple

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if len(self.names) != len(self.degrees):
            raise ValueError("names and degrees differ in length")
        if len(set(self.names)) != len(self.names):
            dup = [n for n in self.names if self.names.count(n) > 1][0]
            raise ValueError(f"duplicate basis name {dup!r}")
        by_deg: dict[int, list[int]] = {}
        for i, d in enumerate(self.degrees):
            by_deg.setdefault(d, []).append(i)
        object.__setattr__(self, "_by_degree", {d: tuple(v) for d, v in by_deg.items()})
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, int]]) -> "GradedSpace":
        pairs = list(pairs)
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    def __len__(self):
        return len(self.names)

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown basis element {name!r}") from None

    def degree(self, i: int) -> int:
        return self.degrees[i]

    def in_degree(self, k: int) -> tuple:
        return self._by_degree.get(k, ())

    def dim_in(self, k: int) -> int:
        return len(self._by_degree.get(k, ()))

    @property
    def support(self) -> list[int]:
        """Degrees with a nonzero piece, ascending."""
        return sorted(self._by_degree)

    def vector_degree(self, v: dict) -> int | None:
        """Degree of a homogeneous vector (None for zero); raises if inhomogeneous."""
        degs = {self.degrees[i] for i in v}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"vector is not homogeneous (degrees {sorted(degs)})")
        return degs.pop()

    def word_degree(self, word: Sequence[int]) -> int:
        return sum(self.degrees[i] for i in word)

    def words(self, n: int, totals: Iterable[int] | None = None):
        """All basis words of length ``n`` whose degree sum lies in ``totals``.

        With ``totals=None`` every word is produced.  Words are generated
        degree-pattern by degree-pattern so that infeasible totals are pruned
        without touching their letters.
        """
        if n == 0:
            if totals is None or 0 in set(totals):
                yield ()
            return
        degs = self.support
        if not degs:
            return
        allowed = None if totals is None else set(totals)
        lo, hi = degs[0], degs[-1]
        for pattern in self._patterns(n, degs, lo, hi, allowed):
            yield from itertools.product(*(self._by_degree[d] for d in pattern))

    @staticmethod
    def _patterns(n, degs, lo, hi, allowed):
        out = []

        def rec(prefix, s, left):
            if left == 0:
                if allowed is None or s in allowed:
                    out.append(tuple(prefix))
                return
            if allowed is not None:
                if not any(s + left * lo <= t <= s + left * hi for t in allowed):
                    return
            for d in degs:
                prefix.append(d)
                rec(prefix, s + d, left - 1)
                prefix.pop()

        rec([], 0, n)
        return out

    def format(self, v: dict) -> str:
        from .fields import format_scalar

        if not v:
            return "0"
        parts = []
        for i in sorted(v):
            c = v[i]
            name = self.names[i]
            if c == 1:
                parts.append(f"+{name}")
            elif c == -1:
                parts.append(f"-{name}")
            else:
                s = format_scalar(c)
                parts.append((s if s.startswith("-") else "+" + s) + "*" + name)
        out = " ".join(parts)
        return out[1:] if out.startswith("+") else out


def suspension_sign(n: int) -> int:
    """``(-1)**(n(n-1)/2)``: the sign by which the n-fold suspension and desuspension fail to be inverse."""
    if n < 1:
        raise ValueError("n must be positive")
    return -1 if (n * (n - 1) // 2) % 2 else 1


@dataclass
class GradedMap:
    """Linear map of degree ``degree`` given by the images of source basis vectors."""

    source: GradedSpace
    target: GradedSpace
    degree: int
    cols: dict = field(default_factory=dict)  # source index -> sparse target vector

    def __post_init__(self):
        for i, v in self.cols.items():
            want = self.source.degrees[i] + self.degree
            for j in v:
                if self.target.degrees[j] != want:
                    raise ValueError(
                        f"block violation: {self.source.names[i]} (deg {self.source.degrees[i]}) "
                        f"maps to {self.target.names[j]} (deg {self.target.degrees[j]}), "
                        f"map degree {self.degree}"
                    )
        self.cols = {i: v for i, v in self.cols.items() if v}

    @classmethod
    def unchecked(cls, source, target, degree, cols) -> "GradedMap":
        """Skip the block check, so malformed input can reach :func:`validate`."""
        m = object.__new__(cls)
        m.source, m.target, m.degree = source, target, degree
        m.cols = {i: v for i, v in cols.items() if v}
        return m

    def col(self, i: int) -> dict:
        return self.cols.get(i, {})

    def apply(self, F: Field, v: dict) -> dict:
        out: dict = {}
        cols = self.cols
        for i, c in v.items():
            col = cols.get(i)
            if col:
                linalg.iadd(F, out, col, c)
        return out

    def compose(self, F: Field, other: "GradedMap") -> "GradedMap":
        """``self ∘ other``."""
        cols = {i: self.apply(F, v) for i, v in other.cols.items()}
        return GradedMap(other.source, self.target, self.degree + other.degree, cols)

    def block(self, k: int) -> list[list]:
        """Dense matrix from source degree ``k`` to target degree ``k + degree``."""
        src = self.source.in_degree(k)
        tgt = self.target.in_degree(k + self.degree)
        pos = {j: r for r, j in enumerate(tgt)}
        M = [[0] * len(src) for _ in tgt]
        for c, i in enumerate(src):
            for j, v in self.col(i).items():
                M[pos[j]][c] = v
        return M

    def is_zero(self) -> bool:
        return not self.cols

    def __eq__(self, other):
        return (
            isinstance(other, GradedMap)
            and self.source == other.source
            and self.target == other.target
            and self.degree == other.degree
            and self.cols == other.cols
        )

    @classmethod
    def zero(cls, source, target, degree=0):
        return cls(source, target, degree, {})

    @classmethod
    def identity(cls, space):
        return cls(space, space, 0, {i: {i: 1} for i in range(space.dim)})


def sum_maps(F: Field, terms) -> GradedMap:
    """Linear combination of GradedMaps given as ``(c, map)`` pairs."""
    terms = list(terms)
    first = terms[0][1]
    cols: dict = {}
    for c, m in terms:
        for i, v in m.cols.items():
            linalg.iadd(F, cols.setdefault(i, {}), v, c)
    return GradedMap(first.source, first.target, first.degree, {i: v for i, v in cols.items() if v})


@dataclass
class MultiMap:
    """Multilinear map ``source^{⊗arity} -> target`` of a fixed degree.

    ``values`` maps basis words (tuples of source indices) to sparse target
    vectors; absent words map to zero.
    """

    arity: int
    source: GradedSpace
    target: GradedSpace
    degree: int
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = {w: v for w, v in self.values.items() if v}

    def check_degrees(self):
        for w, v in self.values.items():
            if len(w) != self.arity:
                raise ValueError(f"word {w} has length {len(w)} != arity {self.arity}")
            want = self.source.word_degree(w) + self.degree
            for j in v:
                if self.target.degrees[j] != want:
                    raise ValueError(f"value on {w} leaves degree {want}")

    def on_word(self, word: tuple) -> dict:
        return self.values.get(word, {})

    def __call__(self, F: Field, *args) -> dict:
        """Evaluate on vectors (sparse dicts) or basis indices, multilinearly."""
        if len(args) != self.arity:
            raise ValueError(f"arity mismatch: expected {self.arity}, got {len(args)}")
        slots = [[(a, 1)] if isinstance(a, int) else list(a.items()) for a in args]
        out: dict = {}
        vals = self.values
        red = F.red
        for combo in itertools.product(*slots):
            w = tuple(c[0] for c in combo)
            v = vals.get(w)
            if v:
                coef = 1
                for c in combo:
                    coef = red(coef * c[1])
                linalg.iadd(F, out, v, coef)
        return out

    def is_zero(self) -> bool:
        return not self.values

    def __eq__(self, other):
        return (
            isinstance(other, MultiMap)
            and self.arity == other.arity
            and self.source == other.source
            and self.target == other.target
            and self.degree == other.degree
            and self.values == other.values
        )


def koszul_eval(F: Field, factors: Sequence, word: Sequence[int], degrees: Sequence[int]) -> dict:
    """Evaluate a tensor product of maps on a basis word, with Koszul signs.

    ``factors`` is a sequence of ``(arity, degree, func)`` where ``func(subword)``
    returns a sparse vector of output indices.  ``degrees[i]`` is the degree
    of ``word[i]``.  Passing factor ``g`` over already-consumed inputs
    ``x_1..x_m`` contributes ``(-1)^{|g|(|x_1|+...+|x_m|)}``.  Returns a dict
    from output words (tuples, one index per factor) to coefficients.
    """
    if sum(f[0] for f in factors) != len(word):
        raise ValueError("arity mismatch between factors and word")
    pos = 0
    passed = 0
    exponent = 0
    images = []
    for arity, deg, func in factors:
        exponent += deg * passed
        sub = tuple(word[pos : pos + arity])
        img = func(sub)
        if not img:
            return {}
        images.append(list(img.items()))
        passed += sum(degrees[pos : pos + arity])
        pos += arity
    sign = F.sign(exponent)
    red = F.red
    out: dict = {}
    for combo in itertools.product(*images):
        coef = sign
        for c in combo:
            coef = red(coef * c[1])
        key = tuple(c[0] for c in combo)
        w = red(out.get(key, 0) + coef)
        if w:
            out[key] = w
        else:
            out.pop(key, None)
    return out


def identity_factor():
    return (1, 0, lambda w: {w[0]: 1})


def map_factor(m: GradedMap):
    return (1, m.degree, lambda w: m.col(w[0]))


def multimap_factor(m: MultiMap):
    return (m.arity, m.degree, m.on_word)
