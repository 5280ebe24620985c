"""JSON forms of the package's values.

Rationals are written as JSON integers when integral and as ``"num/den"``
strings otherwise; both forms are read back exactly. Floats are rejected on
input. Every top-level document carries ``schema_version``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .algebra import (
    And,
    Atom,
    InputError,
    Not,
    Or,
    Polynomial,
    RelationFamily,
    SemiAlgebraicRelation,
    exact,
    make_points,
)

SCHEMA_VERSION = 1

__all__ = [
    "SCHEMA_VERSION",
    "dumps",
    "load_json",
    "rat",
    "parse_rational",
    "jsonable",
    "points_to_json",
    "points_from_json",
    "poly_to_json",
    "poly_from_json",
    "formula_to_json",
    "formula_from_json",
    "relation_to_json",
    "relation_from_json",
    "family_to_json",
    "family_from_json",
    "cutting_to_json",
    "segments_to_json",
    "segments_from_json",
]


def rat(x):
    x = exact(x)
    return x if isinstance(x, int) else f"{x.numerator}/{x.denominator}"


def parse_rational(x):
    """JSON integer or ``"num/den"`` string to an exact rational."""
    if isinstance(x, (int, str)):
        return exact(x)
    raise InputError(f"expected an exact rational, got {x!r}")


def jsonable(obj):
    """Recursively convert to JSON-ready values (rationals to strings, tuples to lists)."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, Fraction)):
        return rat(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, str) else k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in items]
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(doc) -> str:
    return json.dumps(jsonable(doc), sort_keys=True, indent=2) + "\n"


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno} column {exc.colno})") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def _expect(doc, key, kind=None):
    if not isinstance(doc, dict) or key not in doc:
        raise InputError(f"missing field {key!r}")
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        raise InputError(f"field {key!r} has the wrong type")
    return val


# -- points -------------------------------------------------------------


def points_to_json(V) -> dict:
    dim = len(V[0]) if V else 0
    return {"schema_version": SCHEMA_VERSION, "dim": dim, "points": [[rat(c) for c in p] for p in V]}


def points_from_json(doc) -> tuple:
    rows = doc["points"] if isinstance(doc, dict) and "points" in doc else doc
    if not isinstance(rows, list):
        raise InputError("points must be a list of coordinate lists")
    out = []
    for row in rows:
        if not isinstance(row, list):
            row = [row]
        out.append(tuple(parse_rational(c) for c in row))
    dim = doc.get("dim") if isinstance(doc, dict) else None
    if dim is not None and out and not isinstance(dim, int):
        raise InputError("dim must be an integer")
    return make_points(out, dim if out else None)


# -- polynomials and formulas -------------------------------------------


def poly_to_json(p: Polynomial) -> dict:
    return {"nvars": p.nvars, "terms": [[list(e), rat(c)] for e, c in p.terms.items()]}


def poly_from_json(doc) -> Polynomial:
    nvars = _expect(doc, "nvars", int)
    terms = {}
    for item in _expect(doc, "terms", list):
        if not isinstance(item, list) or len(item) != 2 or not isinstance(item[0], list):
            raise InputError("each term is [exponents, coefficient]")
        e = tuple(item[0])
        if any(not isinstance(k, int) or isinstance(k, bool) for k in e):
            raise InputError("exponents must be integers")
        terms[e] = terms.get(e, 0) + parse_rational(item[1])
    return Polynomial(nvars, terms)


def formula_to_json(f) -> dict:
    if isinstance(f, Atom):
        return {"op": "atom", "index": f.index}
    if isinstance(f, Not):
        return {"op": "not", "arg": formula_to_json(f.arg)}
    if isinstance(f, And):
        return {"op": "and", "args": [formula_to_json(a) for a in f.args]}
    if isinstance(f, Or):
        return {"op": "or", "args": [formula_to_json(a) for a in f.args]}
    raise TypeError(f"not a formula: {f!r}")


def formula_from_json(doc):
    op = _expect(doc, "op", str)
    if op == "atom":
        return Atom(_expect(doc, "index", int))
    if op == "not":
        return Not(formula_from_json(_expect(doc, "arg")))
    if op in ("and", "or"):
        args = tuple(formula_from_json(a) for a in _expect(doc, "args", list))
        if not args:
            raise InputError(f"empty {op}")
        return And(args) if op == "and" else Or(args)
    raise InputError(f"unknown formula op {op!r}")


def relation_to_json(E: SemiAlgebraicRelation) -> dict:
    return {
        "name": E.name,
        "dim": E.dim,
        "complexity": E.complexity,
        "polys": [poly_to_json(p) for p in E.polys],
        "formula": formula_to_json(E.formula),
    }


def relation_from_json(doc) -> SemiAlgebraicRelation:
    return SemiAlgebraicRelation(
        tuple(poly_from_json(p) for p in _expect(doc, "polys", list)),
        formula_from_json(_expect(doc, "formula")),
        _expect(doc, "complexity", int),
        _expect(doc, "dim", int),
        doc.get("name", ""),
    )


def family_to_json(F: RelationFamily) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "relations": [relation_to_json(r) for r in F.relations],
        "covering": F.covering,
        "disjoint": F.disjoint,
    }


def family_from_json(doc) -> RelationFamily:
    if isinstance(doc, list):
        doc = {"relations": doc}
    rels = tuple(relation_from_json(r) for r in _expect(doc, "relations", list))
    return RelationFamily(rels, covering=bool(doc.get("covering", True)), disjoint=bool(doc.get("disjoint", False)))


# -- segments ------------------------------------------------------------


def segments_to_json(S) -> list:
    return [{"a": [rat(c) for c in s.a], "b": [rat(c) for c in s.b]} for s in S]


def segments_from_json(doc) -> list:
    from .rtconstruct import Segment

    rows = doc["segments"] if isinstance(doc, dict) and "segments" in doc else doc
    if not isinstance(rows, list):
        raise InputError("segment family must be a list")
    out = []
    for row in rows:
        a = [parse_rational(c) for c in _expect(row, "a", list)]
        b = [parse_rational(c) for c in _expect(row, "b", list)]
        out.append(Segment(tuple(a), tuple(b)))
    return out


# -- cuttings ------------------------------------------------------------


def _endpoint(x):
    # RealAlgebraic endpoint: exact value or isolating data
    if x is None:
        return None
    if x.is_rational:
        return rat(x.value)
    return {"poly": [rat(c) for c in x.poly], "interval": [rat(x.lo), rat(x.hi)]}


def cutting_to_json(C) -> dict:
    from .cutting import BoxCell

    cells = []
    for c in C.cells:
        if isinstance(c, BoxCell):
            cells.append(
                {
                    "lows": [rat(v) for v in c.lows],
                    "highs": [rat(v) for v in c.highs],
                    "crossing": list(c.crossing),
                    "containing": list(c.containing),
                }
            )
        else:
            cells.append(
                {
                    "lo": _endpoint(c.lo),
                    "lo_closed": c.lo_closed,
                    "hi": _endpoint(c.hi),
                    "hi_closed": c.hi_closed,
                    "crossing": list(c.crossing),
                    "containing": list(c.containing),
                }
            )
    return {
        "schema_version": SCHEMA_VERSION,
        "dim": C.dim,
        "r": rat(C.r),
        "budget": C.budget,
        "surfaces": C.n_surfaces,
        "idle": list(C.idle),
        "cells": cells,
    }
