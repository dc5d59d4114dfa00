"""Sparse exact linear algebra.

Vectors are ``dict`` objects mapping a coordinate (an ``int`` index, or a
tuple for tensor words) to a nonzero field element.  Missing keys are zero.
All routines take the field explicitly and never mutate their inputs unless
the name says so (``iadd``).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field as dc_field

from .fields import Field


def iadd(F: Field, y: dict, x: dict, c=1) -> dict:
    """In place ``y += c * x``; returns ``y``."""
    if not c:
        return y
    red = F.red
    for k, v in x.items():
        w = red(y.get(k, 0) + c * v)
        if w:
            y[k] = w
        else:
            y.pop(k, None)
    return y


def add(F: Field, x: dict, y: dict, c=1) -> dict:
    return iadd(F, dict(x), y, c)


def sub(F: Field, x: dict, y: dict) -> dict:
    return iadd(F, dict(x), y, F.red(-1))


def scale(F: Field, x: dict, c) -> dict:
    c = F.red(c)
    if not c:
        return {}
    if c == 1:
        return dict(x)
    red = F.red
    out = {}
    for k, v in x.items():
        w = red(c * v)
        if w:
            out[k] = w
    return out


def neg(F: Field, x: dict) -> dict:
    return scale(F, x, -1)


def combine(F: Field, terms) -> dict:
    """Sum of ``c * vec`` over an iterable of ``(c, vec)`` pairs."""
    out: dict = {}
    for c, vec in terms:
        iadd(F, out, vec, c)
    return out


def dense(x: dict, n: int) -> list:
    return [x.get(i, 0) for i in range(n)]


def sparse(F: Field, values) -> dict:
    out = {}
    for i, v in enumerate(values):
        v = F(v)
        if v:
            out[i] = v
    return out


class Echelon:
    """Incrementally maintained reduced row-echelon form.

    Rows are sparse dicts over integer columns.  After every insertion the
    stored rows are fully reduced: each pivot column is 1 in its own row and
    0 in all other rows.  The resulting RREF is unique, so the order in which
    rows arrive does not change the span's normal form.
    """

    def __init__(self, F: Field):
        self.F = F
        self.rows: dict[int, dict] = {}  # pivot column -> row

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def reduce(self, row: dict) -> dict:
        """Return ``row`` reduced modulo the current span (a new dict)."""
        F = self.F
        out = dict(row)
        for p in [c for c in row if c in self.rows]:
            c = out.get(p, 0)
            if c:
                iadd(F, out, self.rows[p], F.red(-c))
        return out

    def insert(self, row: dict) -> int | None:
        """Add ``row`` to the span.  Returns the new pivot column or ``None``."""
        F = self.F
        r = self.reduce(row)
        if not r:
            return None
        p = min(r)
        r = scale(F, r, F.inv(r[p]))
        for q, other in self.rows.items():
            c = other.get(p, 0)
            if c:
                iadd(F, other, r, F.red(-c))
        self.rows[p] = r
        return p

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)

    def basis(self) -> list[dict]:
        return [self.rows[p] for p in self.pivots]

    def coordinates(self, row: dict) -> dict | None:
        """Coefficients of ``row`` in terms of :meth:`basis` (keyed by pivot), or None."""
        if self.reduce(row):
            return None
        return {p: row[p] for p in self.rows if row.get(p, 0)}


def rank(F: Field, rows) -> int:
    E = Echelon(F)
    for r in rows:
        E.insert(r)
    return len(E)


def span_basis(F: Field, vectors) -> list[dict]:
    """RREF basis of the span of ``vectors``."""
    E = Echelon(F)
    for v in vectors:
        E.insert(v)
    return E.basis()


@dataclass
class LinearSolution:
    """A particular solution together with a basis of the kernel."""

    particular: dict
    nullspace: list = dc_field(default_factory=list)
    kernel_dim: int = 0


def _row_echelon(F: Field, rows, ncols: int, rhs: dict):
    """Row-echelon form with leading-column pivots; column ``ncols`` carries the rhs.

    Each stored row is scaled to 1 at its pivot and only has entries in
    columns to the right of it.  Elimination touches just the columns a row
    actually reaches (heap driven), so sparse systems stay sparse.
    """
    red = F.red
    piv: dict[int, dict] = {}
    for i, r in enumerate(rows):
        if any(c < 0 or c >= ncols for c in r):
            raise ValueError(f"row {i} has a column outside range({ncols})")
        row = {c: red(v) for c, v in r.items() if red(v)}
        b = red(rhs.get(i, 0))
        if b:
            row[ncols] = b
        heap = list(row)
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            a = row.get(c)
            if not a:
                continue
            prow = piv.get(c)
            if prow is None:
                inv = F.inv(a)
                if inv != 1:
                    row = {k: red(v * inv) for k, v in row.items()}
                piv[c] = row
                break
            for k, v in prow.items():
                w = red(row.get(k, 0) - a * v)
                if w:
                    if k not in row:
                        heapq.heappush(heap, k)
                    row[k] = w
                else:
                    row.pop(k, None)
    return piv


def solve_sparse(F: Field, rows: list[dict], ncols: int, rhs: dict, nullspace: bool = True) -> LinearSolution | None:
    """Solve ``M x = b`` with ``M`` given by sparse rows over ``range(ncols)``.

    ``rhs`` maps row index to value.  Free variables are set to zero in the
    particular solution.  Returns ``None`` when the system is inconsistent.
    With ``nullspace=False`` only the kernel dimension is reported.
    """
    red = F.red
    piv = _row_echelon(F, rows, ncols, rhs)
    if ncols in piv:
        return None
    order = sorted(piv, reverse=True)
    x: dict = {}
    for p in order:
        row = piv[p]
        acc = row.get(ncols, 0)
        for k, v in row.items():
            if k != p and k != ncols and k in x:
                acc -= v * x[k]
        acc = red(acc)
        if acc:
            x[p] = acc
    kdim = ncols - len(piv)
    null = []
    if nullspace and kdim:
        for f in range(ncols):
            if f in piv:
                continue
            v = {f: 1}
            for p in order:
                if p < f:
                    row = piv[p]
                    acc = 0
                    for k, c in row.items():
                        if k != p and k in v:
                            acc -= c * v[k]
                    acc = red(acc)
                    if acc:
                        v[p] = acc
            null.append(v)
    return LinearSolution(x, null, kdim)


def solve_linear(F: Field, M, b) -> LinearSolution | None:
    """Dense front end: ``M`` is a list of rows, ``b`` a list.

    Returns a :class:`LinearSolution` whose vectors are dense lists, or
    ``None`` if ``M x = b`` has no solution.
    """
    nrows = len(M)
    if len(b) != nrows:
        raise ValueError(f"dimension mismatch: {nrows} rows but rhs of length {len(b)}")
    ncols = len(M[0]) if nrows else 0
    if any(len(r) != ncols for r in M):
        raise ValueError("ragged matrix")
    rows = [sparse(F, r) for r in M]
    rhs = {i: F(v) for i, v in enumerate(b) if F(v)}
    sol = solve_sparse(F, rows, ncols, rhs)
    if sol is None:
        return None
    return LinearSolution(dense(sol.particular, ncols), [dense(v, ncols) for v in sol.nullspace])


def kernel(F: Field, rows: list[dict], ncols: int) -> list[dict]:
    return solve_sparse(F, rows, ncols, {}).nullspace


def transpose(rows: list[dict]) -> dict[int, dict]:
    cols: dict[int, dict] = {}
    for i, r in enumerate(rows):
        for j, v in r.items():
            cols.setdefault(j, {})[i] = v
    return cols
