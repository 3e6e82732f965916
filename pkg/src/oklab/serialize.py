"""Versioned JSON schemas with bit-exact integers and "p/q" rationals."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .errors import ValidationError
from .polytope import Polytope, convex_hull
from .semigroup import BoundRule, GradedSemigroup, StaircaseSpec
from .algebra import MonomialAlgebra
from .ideals import (BodyFamily, ExplicitFamily, GradedIdealFamily,
                     MonomialIdeal, PowersFamily, body_to_family,
                     monomial_ideal)

SCHEMA_VERSION = 1


def frac_to_str(x):
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 \
        else str(f.numerator)


def str_to_frac(s):
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad rational literal {s!r}") from exc


def _check_version(obj):
    v = obj.get("schema_version", SCHEMA_VERSION)
    if v != SCHEMA_VERSION:
        raise ValidationError(f"unsupported schema_version {v}")


# -- staircase rules ---------------------------------------------------------

def _rule_to_json(rule):
    out = {"kind": rule.kind}
    if rule.forms:
        out["forms"] = [[frac_to_str(c) for c in f] for f in rule.forms]
    if rule.quadratic:
        out["quadratic"] = [list(row) for row in rule.quadratic]
    return out


def _rule_from_json(obj):
    kind = obj.get("kind")
    forms = tuple(tuple(str_to_frac(c) for c in f)
                  for f in obj.get("forms", []))
    quadratic = tuple(tuple(int(x) for x in row)
                      for row in obj.get("quadratic", []))
    return BoundRule(kind=kind, forms=forms, quadratic=quadratic)


# -- algebras / semigroups ---------------------------------------------------

def algebra_to_json(algebra):
    sg = algebra.semigroup
    out = {"schema_version": SCHEMA_VERSION, "r": sg.r, "s": sg.s}
    if sg.is_generated:
        out["generators"] = [{"exp": list(v), "deg": list(d)}
                             for v, d in sg.generators]
    else:
        src = sg.source
        if not isinstance(src, StaircaseSpec):
            raise ValidationError("only generator and staircase sources "
                                  "serialize")
        out["staircase"] = {"lower": _rule_to_json(src.lower),
                            "upper": _rule_to_json(src.upper)}
    return out


def algebra_from_json(obj):
    _check_version(obj)
    if "staircase" in obj:
        spec = StaircaseSpec(
            s=int(obj["s"]),
            lower=_rule_from_json(obj["staircase"]["lower"]),
            upper=_rule_from_json(obj["staircase"]["upper"]))
        return MonomialAlgebra.from_staircase(spec)
    try:
        gens = [(tuple(int(x) for x in g["exp"]),
                 tuple(int(x) for x in g["deg"]))
                for g in obj["generators"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad algebra schema: {exc}") from exc
    return MonomialAlgebra.from_generators(int(obj["r"]), int(obj["s"]),
                                           gens)


# -- polytopes ---------------------------------------------------------------

def polytope_to_json(poly):
    return {"schema_version": SCHEMA_VERSION,
            "vertices": [[frac_to_str(x) for x in v]
                         for v in poly.vertices]}


def polytope_from_json(obj):
    _check_version(obj)
    verts = [tuple(str_to_frac(x) for x in v) for v in obj["vertices"]]
    if not verts:
        raise ValidationError("polytope needs at least one vertex")
    return convex_hull(verts)


# -- ideals and families -----------------------------------------------------

def ideal_to_json(ideal):
    return {"schema_version": SCHEMA_VERSION,
            "ideal": {"vars": ideal.num_vars,
                      "gens": [list(g) for g in ideal.min_gens]}}


def ideal_from_json(obj):
    _check_version(obj)
    body = obj["ideal"]
    return monomial_ideal(int(body["vars"]),
                          [tuple(int(x) for x in g) for g in body["gens"]])


def family_to_json(family):
    out = {"schema_version": SCHEMA_VERSION}
    if isinstance(family, PowersFamily):
        out["family"] = {"powers": ideal_to_json(family.base)["ideal"]}
    elif isinstance(family, BodyFamily):
        out["family"] = {"from_body": {
            "vertices": polytope_to_json(family.body)["vertices"],
            "h": family.h}}
    elif isinstance(family, ExplicitFamily):
        out["family"] = {"explicit": [ideal_to_json(i)["ideal"]
                                      for i in family.ideals]}
    else:
        raise ValidationError(f"unknown family type {type(family).__name__}")
    return out


def family_from_json(obj):
    _check_version(obj)
    body = obj["family"]
    if "powers" in body:
        base = body["powers"]
        return PowersFamily(monomial_ideal(
            int(base["vars"]),
            [tuple(int(x) for x in g) for g in base["gens"]]))
    if "from_body" in body:
        spec = body["from_body"]
        poly = polytope_from_json({"vertices": spec["vertices"]})
        return body_to_family(poly, int(spec["h"]))
    if "explicit" in body:
        ideals = [monomial_ideal(int(i["vars"]),
                                 [tuple(int(x) for x in g)
                                  for g in i["gens"]])
                  for i in body["explicit"]]
        return ExplicitFamily(ideals).check()
    raise ValidationError("family schema needs powers, from_body, or "
                          "explicit")


def ladder_to_json(ladder):
    return [{"p": p, "value": frac_to_str(v)} for p, v in ladder]


# -- report writers ----------------------------------------------------------

def _scalar(value):
    if isinstance(value, Fraction):
        return frac_to_str(value)
    if isinstance(value, float):
        return repr(value)
    return value


def render_table(result):
    """Deterministic key: value lines, keys sorted."""
    lines = []
    for key in sorted(result):
        val = result[key]
        if isinstance(val, (list, tuple)):
            val = json.dumps(_jsonable(val))
        else:
            val = _scalar(val)
        lines.append(f"{key}: {val}")
    return "\n".join(lines) + "\n"


def _jsonable(value):
    if isinstance(value, Fraction):
        return frac_to_str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def render_json(result):
    payload = {"schema_version": SCHEMA_VERSION}
    payload.update({k: _jsonable(v) for k, v in sorted(result.items())})
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def render_csv(result):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if "ladder" in result and isinstance(result["ladder"], (list, tuple)):
        writer.writerow(["p", "value_num", "value_den", "float"])
        for p, v in result["ladder"]:
            f = Fraction(v)
            writer.writerow([p, f.numerator, f.denominator, float(f)])
        return buf.getvalue()
    writer.writerow(["key", "value"])
    for key in sorted(result):
        val = result[key]
        if isinstance(val, (list, tuple, dict)):
            val = json.dumps(_jsonable(val))
        else:
            val = _scalar(val)
        writer.writerow([key, val])
    return buf.getvalue()


RENDERERS = {"table": render_table, "json": render_json, "csv": render_csv}
