"""Run specifications: JSON documents naming fields, characters and representations.

Example::

    {
      "p": 3, "precision": 6,
      "fields": {"K": {"base": "F", "sqrt": 2},
                 "L": {"base": "K", "sqrt": [0, 1]}},
      "characters": {
        "one": {"kind": "trivial", "field": "K"},
        "om":  {"field": "L", "level": 1, "images": ["1/80"],
                "uniformizer": {"zeta": "1/2", "qexp": "0"}}
      },
      "representations": {
        "st":  {"variant": "steinberg", "chi": "one"},
        "sc":  {"variant": "dihedral", "omega": "om"}
      },
      "commands": ["check-egal"]
    }

The base field ``Q_p`` is always available as ``F``.  Square roots are
given as an integer, a rational string, or a list of coordinates in the
base field's nested basis.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import asai
from .characters import (
    ExactValue,
    SmoothChar,
    absvalue_char,
    compose_norm,
    conj,
    eta_char,
    restrict,
)
from .errors import AsaiError, SpecError
from .padic import LocalField, PrimeContext, base_field, layer_involution, make_extension

VARIANTS = {
    "dihedral": (asai.DihedralSupercuspidal, ("omega",)),
    "steinberg": (asai.TwistedSteinberg, ("chi",)),
    "principal": (asai.PrincipalSeries, ("lam", "mu")),
}


@dataclass
class RunSpec:
    p: int
    precision: int
    fields: dict
    characters: dict
    representations: dict
    commands: list = field(default_factory=list)
    source: str = "<spec>"


class _Locator:
    """Maps a JSON path to the line of its key in the source text (best effort)."""

    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source

    def line_of(self, *keys) -> int | None:
        pos = 0
        for k in keys:
            i = self.text.find(json.dumps(str(k)), pos)
            if i < 0:
                return None
            pos = i
        return self.text.count("\n", 0, pos) + 1

    def error(self, path: tuple, message: str) -> SpecError:
        line = self.line_of(*path)
        where = ".".join(str(k) for k in path)
        loc = f"{self.source}:{line}" if line else self.source
        return SpecError(f"{loc}: {where}: {message}")


def _fraction(x, loc, path) -> Fraction:
    try:
        if isinstance(x, bool):
            raise TypeError
        return Fraction(x.strip()) if isinstance(x, str) else Fraction(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise loc.error(path, f"expected a rational number, got {x!r}") from None


def _element(E: LocalField, x, loc, path):
    if isinstance(x, list):
        if len(x) != E.degree:
            raise loc.error(path, f"{E.name} elements need {E.degree} coordinates")
        return E.from_flat([_fraction(c, loc, path) for c in x])
    return E.coerce(_fraction(x, loc, path))


def _get(d: dict, key, loc, path, kind=None):
    if key not in d:
        raise loc.error(path, f"missing key {key!r}")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise loc.error(path + (key,), f"expected {kind.__name__}")
    return v


def load(path: str) -> RunSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecError(f"{path}: cannot read spec: {exc.strerror}") from None
    return loads(text, source=path)


def loads(text: str, source: str = "<spec>") -> RunSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{source}:{exc.lineno}:{exc.colno}: parse error: {exc.msg}") from None
    loc = _Locator(text, source)
    if not isinstance(doc, dict):
        raise loc.error((), "top level must be an object")
    p = _get(doc, "p", loc, (), int)
    precision = doc.get("precision", 6)
    try:
        ctx = PrimeContext(p, precision)
    except (ValueError, AsaiError) as exc:
        raise loc.error(("p",), str(exc)) from None
    fields = {"F": base_field(ctx, name="F")}
    _build_fields(doc.get("fields", {}), fields, loc)
    chars = _build_characters(doc.get("characters", {}), fields, loc)
    reps = _build_representations(doc.get("representations", {}), chars, loc)
    commands = doc.get("commands", [])
    if not isinstance(commands, list):
        raise loc.error(("commands",), "expected a list")
    return RunSpec(p, precision, fields, chars, reps, commands, source)


def _build_fields(defs, fields, loc):
    if not isinstance(defs, dict):
        raise loc.error(("fields",), "expected an object")
    pending = dict(defs)
    while pending:
        progressed = False
        for name in list(pending):
            d = pending[name]
            path = ("fields", name)
            if not isinstance(d, dict):
                raise loc.error(path, "expected an object with 'base' and 'sqrt'")
            base = _get(d, "base", loc, path, str)
            if base not in fields:
                if base not in pending:
                    raise loc.error(path + ("base",), f"unknown field {base!r}")
                continue
            if name in fields:
                raise loc.error(path, "duplicate field name")
            x = _element(fields[base], _get(d, "sqrt", loc, path), loc, path + ("sqrt",))
            try:
                fields[name] = make_extension(fields[base], x, name=name)
            except AsaiError as exc:
                raise loc.error(path, str(exc)) from None
            del pending[name]
            progressed = True
        if not progressed:
            raise loc.error(("fields", sorted(pending)[0]), "cyclic field definitions")


def _build_characters(defs, fields, loc) -> dict:
    if not isinstance(defs, dict):
        raise loc.error(("characters",), "expected an object")
    out: dict = {}
    active: set = set()

    def field_of(name, path):
        if name not in fields:
            raise loc.error(path, f"unknown field {name!r}")
        return fields[name]

    def resolve(name, path):
        if name not in defs:
            raise loc.error(path, f"unknown character {name!r}")
        if name in out:
            return out[name]
        if name in active:
            raise loc.error(("characters", name), "cyclic character definitions")
        active.add(name)
        out[name] = build(name, defs[name], ("characters", name))
        active.discard(name)
        return out[name]

    def build(name, d, path) -> SmoothChar:
        if not isinstance(d, dict):
            raise loc.error(path, "expected an object")
        kind = d.get("kind", "images" if "images" in d else "params")
        try:
            if kind in ("images", "params"):
                E = field_of(_get(d, "field", loc, path, str), path + ("field",))
                level = _get(d, "level", loc, path, int)
                uv = ExactValue.from_json(d.get("uniformizer", {}))
                if kind == "images":
                    imgs = [_fraction(x, loc, path + ("images",)) for x in d["images"]]
                    return SmoothChar.from_generator_images(E, level, imgs, uv, name)
                return SmoothChar.from_params(E, level, d.get("k", 0), d.get("c", []), uv, name)
            if kind == "trivial":
                return SmoothChar.trivial(field_of(_get(d, "field", loc, path, str), path))
            if kind == "abs":
                E = field_of(_get(d, "field", loc, path, str), path)
                return absvalue_char(E, _fraction(d.get("a", 1), loc, path + ("a",)))
            if kind == "eta":
                return eta_char(field_of(_get(d, "ext", loc, path, str), path + ("ext",)))
            if kind == "norm":
                chi = resolve(_get(d, "char", loc, path, str), path + ("char",))
                return compose_norm(chi, field_of(_get(d, "field", loc, path, str), path))
            if kind == "restrict":
                chi = resolve(_get(d, "char", loc, path, str), path + ("char",))
                return restrict(chi, field_of(_get(d, "field", loc, path, str), path))
            if kind == "conj":
                chi = resolve(_get(d, "char", loc, path, str), path + ("char",))
                return conj(chi, layer_involution(chi.field))
            if kind == "product":
                acc = None
                for entry in _get(d, "factors", loc, path, list):
                    nm, e = (entry, 1) if isinstance(entry, str) else entry
                    term = resolve(nm, path + ("factors",)) ** int(e)
                    acc = term if acc is None else acc * term
                if acc is None:
                    raise loc.error(path, "empty product")
                return acc
        except SpecError:
            raise
        except (AsaiError, ValueError, TypeError, KeyError) as exc:
            raise loc.error(path, f"{type(exc).__name__}: {exc}") from None
        raise loc.error(path + ("kind",), f"unknown character kind {kind!r}")

    for name in defs:
        resolve(name, ("characters", name))
    return out


def _build_representations(defs, chars, loc) -> dict:
    if not isinstance(defs, dict):
        raise loc.error(("representations",), "expected an object")
    out = {}
    for name, d in defs.items():
        path = ("representations", name)
        if not isinstance(d, dict):
            raise loc.error(path, "expected an object")
        variant = _get(d, "variant", loc, path, str)
        if variant not in VARIANTS:
            raise loc.error(path + ("variant",),
                            f"unknown variant {variant!r} (expected one of {sorted(VARIANTS)})")
        cls, keys = VARIANTS[variant]
        args = []
        for k in keys:
            ref = _get(d, k, loc, path, str)
            if ref not in chars:
                raise loc.error(path + (k,), f"unknown character {ref!r}")
            args.append(chars[ref])
        pi = cls(*args)
        if variant == "dihedral":
            pi.name = name
        try:
            asai.check_admissible(pi)
        except AsaiError as exc:
            raise loc.error(path, f"{type(exc).__name__}: {exc}") from None
        out[name] = pi
    return out


__all__ = ["RunSpec", "load", "loads", "VARIANTS"]
