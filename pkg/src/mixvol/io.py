"""JSON encodings of polytopes, tuples, monomial configurations and systems.

Every reader raises InputError with a message naming the offending field.
"""

from __future__ import annotations

import json
from typing import Any

from .bernstein import LaurentPoly, LaurentSystem
from .geometry import LatticePolytope, convex_hull
from .hilbert import MonomialConfiguration, MonomialSet


class InputError(ValueError):
    pass


def _int(x: Any, where: str) -> int:
    # bool is an int subclass; reject it along with floats and strings
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"{where}: expected an integer, got {x!r}")
    return x


def _int_list(xs: Any, where: str, length: int | None = None) -> tuple[int, ...]:
    if not isinstance(xs, list):
        raise InputError(f"{where}: expected a list of integers")
    if length is not None and len(xs) != length:
        raise InputError(f"{where}: expected {length} entries, got {len(xs)}")
    return tuple(_int(x, where) for x in xs)


def _field(obj: Any, key: str, where: str):
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object")
    if key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    return obj[key]


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None


def polytope_from_json(obj: Any, where: str = "polytope") -> LatticePolytope:
    n = _int(_field(obj, "dim", where), f"{where}.dim")
    if n < 1:
        raise InputError(f"{where}.dim must be positive")
    pts = _field(obj, "points", where)
    if not isinstance(pts, list) or not pts:
        raise InputError(f"{where}.points: expected a non-empty list")
    points = [_int_list(p, f"{where}.points[{i}]", n) for i, p in enumerate(pts)]
    try:
        return convex_hull(points)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None


def polytope_to_json(p: LatticePolytope) -> dict:
    return {"dim": p.ambient_dim, "points": [list(v) for v in p.vertices]}


def tuple_from_json(obj: Any) -> list[LatticePolytope]:
    n = _int(_field(obj, "dim", "tuple"), "tuple.dim")
    polys = _field(obj, "polytopes", "tuple")
    if not isinstance(polys, list):
        raise InputError("tuple.polytopes: expected a list")
    if len(polys) != n:
        raise InputError(f"tuple.polytopes: need {n} polytopes in dimension {n}, got {len(polys)}")
    out = [polytope_from_json(p, f"tuple.polytopes[{i}]") for i, p in enumerate(polys)]
    if any(p.ambient_dim != n for p in out):
        raise InputError("tuple: polytope dimensions differ from tuple.dim")
    return out


def tuple_to_json(polys: list[LatticePolytope]) -> dict:
    return {"dim": polys[0].ambient_dim, "polytopes": [polytope_to_json(p) for p in polys]}


def configuration_from_json(obj: Any) -> MonomialConfiguration:
    nv = _int(_field(obj, "vars", "configuration"), "configuration.vars")
    if nv < 1:
        raise InputError("configuration.vars must be positive")
    raw = _field(obj, "sets", "configuration")
    if not isinstance(raw, list):
        raise InputError("configuration.sets: expected a list")
    sets = []
    for i, s in enumerate(raw):
        where = f"configuration.sets[{i}]"
        d = _int(_field(s, "degree", where), f"{where}.degree")
        exps = _field(s, "exponents", where)
        if not isinstance(exps, list) or not exps:
            raise InputError(f"{where}.exponents: expected a non-empty list")
        vecs = [_int_list(e, f"{where}.exponents[{j}]", nv) for j, e in enumerate(exps)]
        if len(set(vecs)) != len(vecs):
            raise InputError(f"{where}: repeated exponent vector")
        try:
            sets.append(MonomialSet(nv, d, frozenset(vecs)))
        except ValueError as exc:
            raise InputError(f"{where}: {exc}") from None
    unit = MonomialSet.variables(nv)
    if sets and sets[0] == unit:
        sets = sets[1:]
    return MonomialConfiguration((unit,) + tuple(sets))


def configuration_to_json(config: MonomialConfiguration) -> dict:
    return {
        "vars": config.num_vars,
        "sets": [
            {"degree": m.degree, "exponents": [list(e) for e in m.sorted()]} for m in config.sets
        ],
    }


def system_from_json(obj: Any) -> LaurentSystem:
    n = _int(_field(obj, "vars", "system"), "system.vars")
    raw = _field(obj, "polys", "system")
    if not isinstance(raw, list):
        raise InputError("system.polys: expected a list")
    polys = []
    for i, f in enumerate(raw):
        where = f"system.polys[{i}]"
        terms = _field(f, "terms", where)
        if not isinstance(terms, list) or not terms:
            raise InputError(f"{where}.terms: expected a non-empty list")
        items = []
        for j, t in enumerate(terms):
            w = f"{where}.terms[{j}]"
            items.append((_int_list(_field(t, "exp", w), f"{w}.exp", n), _int(_field(t, "coeff", w), f"{w}.coeff")))
        try:
            polys.append(LaurentPoly.of(items, n))
        except ValueError as exc:
            raise InputError(f"{where}: {exc}") from None
    try:
        return LaurentSystem(tuple(polys))
    except ValueError as exc:
        raise InputError(f"system: {exc}") from None


def system_to_json(system: LaurentSystem) -> dict:
    return {
        "vars": system.num_vars,
        "polys": [{"terms": [{"coeff": c, "exp": list(e)} for e, c in f.terms]} for f in system.polys],
    }
