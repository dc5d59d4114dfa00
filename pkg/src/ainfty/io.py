"""Reading and writing dg algebras as JSON documents.

A document either lists a basis with differential and product tables::

    {"field": "Q",
     "basis": [{"name": "x", "degree": 0}, {"name": "dx", "degree": 1}],
     "differential": {"x": {"dx": 1}},
     "product": [["x", "x", {"x": "1/2"}]]}

or gives a free presentation that is expanded into such tables::

    {"field": "Q",
     "free": {"generators": [{"name": "a", "degree": 1}, ...],
              "d": {"u": {"ab": 1}}, "truncation": 3, "unital": true}}

Coefficients are integers or strings such as ``"-3/4"``.
"""

from __future__ import annotations

import json
import os
import re
from fractions import Fraction
from importlib import resources

import jsonschema

from .algebras import free_truncated
from .dga import DGAlgebra, validate
from .fields import Field, parse_field
from .graded import GradedMap, GradedSpace, MultiMap


class InputError(ValueError):
    """Problem with an input document; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


_schema = None


def schema() -> dict:
    global _schema
    if _schema is None:
        _schema = json.loads(resources.files("ainfty").joinpath("data/algebra.schema.json").read_text())
    return _schema


def _locate(text: str, token: str) -> int | None:
    """First line mentioning ``token`` as a JSON string."""
    if text is None:
        return None
    needle = json.dumps(token)
    for i, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return i
    return None


def _read(source) -> tuple[dict, str | None]:
    if isinstance(source, dict):
        return source, None
    text = str(source)
    if not text.lstrip().startswith("{"):
        if not os.path.exists(text):
            raise InputError(f"no such file: {text}")
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"syntax error: {e.msg} (column {e.colno})", e.lineno) from None
    return doc, text


def _coef(F: Field, c, where, text):
    try:
        return F(c)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise InputError(f"bad coefficient {c!r} in {where}: {e}", _locate(text, where)) from None


def parse_algebra(source, field: str | Field | None = None, check: bool = True) -> DGAlgebra:
    """Parse a document (path, JSON text or dict) into a validated DGAlgebra.

    ``field`` overrides the document's field, e.g. to reduce a rational
    example modulo 2.  With ``check`` the result must pass :func:`validate`.
    """
    doc, text = _read(source)
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path)
        key = next((p for p in reversed(list(e.absolute_path)) if isinstance(p, str)), None)
        raise InputError(f"schema violation at '{path}': {e.message}", _locate(text, key) if key else None) from None
    try:
        F = field if isinstance(field, Field) else parse_field(field or doc["field"])
    except ValueError as e:
        raise InputError(str(e), _locate(text, "field")) from None

    if "free" in doc:
        fr = doc["free"]
        gens = [(g["name"], g["degree"]) for g in fr["generators"]]
        try:
            A = free_truncated(
                F,
                gens,
                d={g: {w: _coef(F, c, g, text) for w, c in img.items()} for g, img in fr.get("d", {}).items()},
                truncation=fr.get("truncation"),
                max_length=fr.get("max_length"),
                unital=fr.get("unital", True),
            )
        except KeyError as e:
            msg = e.args[0] if e.args else str(e)
            m = re.search(r"'([^']*)'", str(msg))
            raise InputError(f"unknown name: {msg}", _locate(text, m.group(1)) if m else None) from None
        except ValueError as e:
            raise InputError(str(e)) from None
    else:
        names = [b["name"] for b in doc["basis"]]
        try:
            space = GradedSpace(tuple(names), tuple(b["degree"] for b in doc["basis"]))
        except ValueError as e:
            m = re.search(r"'([^']*)'", str(e))
            raise InputError(str(e), _locate(text, m.group(1)) if m else None) from None

        def ix(name):
            try:
                return space.index(name)
            except KeyError:
                raise InputError(f"unknown name {name!r}", _locate(text, name)) from None

        cols = {}
        for src, img in doc.get("differential", {}).items():
            v = {}
            for k, c in img.items():
                c = _coef(F, c, src, text)
                if c:
                    v[ix(k)] = F.red(v.get(ix(k), 0) + c)
            i = ix(src)
            for j in v:
                if space.degrees[j] != space.degrees[i] + 1:
                    raise InputError(f"degree mismatch: d({src}) contains {names[j]}", _locate(text, src))
            if v:
                cols[i] = v
        vals = {}
        for left, right, img in doc.get("product", []):
            i, j = ix(left), ix(right)
            v = {}
            for k, c in img.items():
                c = _coef(F, c, left, text)
                if c:
                    v[ix(k)] = F.red(v.get(ix(k), 0) + c)
            for k in v:
                if space.degrees[k] != space.degrees[i] + space.degrees[j]:
                    raise InputError(f"degree mismatch: {left}·{right} contains {names[k]}", _locate(text, left))
            if (i, j) in vals:
                raise InputError(f"product {left}·{right} given twice", _locate(text, left))
            if v:
                vals[(i, j)] = v
        unit = doc.get("unit")
        A = DGAlgebra(
            F,
            space,
            GradedMap(space, space, 1, cols),
            MultiMap(2, space, space, 0, vals),
            None if unit is None else ix(unit),
        )
    if check:
        issues = validate(A)
        if issues:
            shown = "; ".join(str(v) for v in issues[:5])
            more = f" (and {len(issues) - 5} more)" if len(issues) > 5 else ""
            line = _locate(text, issues[0].word[0]) if issues[0].word else None
            raise InputError(f"not a dg algebra: {shown}{more}", line)
    return A


def _dump_scalar(c):
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return int(c)


def serialize(A: DGAlgebra, name: str | None = None) -> dict:
    """Explicit-table document for ``A``; basis order is preserved."""
    S = A.space
    doc: dict = {}
    if name:
        doc["name"] = name
    doc["field"] = A.field.descriptor()
    doc["basis"] = [{"name": n, "degree": d} for n, d in zip(S.names, S.degrees)]
    doc["differential"] = {
        S.names[i]: {S.names[j]: _dump_scalar(c) for j, c in sorted(v.items())} for i, v in sorted(A.differential.cols.items())
    }
    doc["product"] = [
        [S.names[i], S.names[j], {S.names[k]: _dump_scalar(c) for k, c in sorted(v.items())}]
        for (i, j), v in sorted(A.product.values.items())
    ]
    if A.unit is not None:
        doc["unit"] = S.names[A.unit]
    return doc


def dumps(A: DGAlgebra, name: str | None = None) -> str:
    return json.dumps(serialize(A, name), indent=1, ensure_ascii=False)


def bundled_path(name: str) -> str:
    """Path of a document shipped with the package (``e1``, ``degree0``, ``acyclic``)."""
    fname = name if name.endswith(".json") else name + ".json"
    return str(resources.files("ainfty").joinpath("data", fname))


def bundled(name: str, field=None) -> DGAlgebra:
    return parse_algebra(bundled_path(name), field)
