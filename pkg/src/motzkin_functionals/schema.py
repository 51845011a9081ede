"""JSON readers and writers for moment tables, queries and matrix models.

Moment tables::

    {"algebras": [
        {"label": "A", "generators": ["x"], "max_order": 3,
         "moments": [{"word": [], "value": "1"}, {"word": ["x"], "value": "1/2"}, ...]}
    ]}

Queries (each argument is a polynomial in one algebra's generators)::

    {"queries": [
        {"name": "q1", "word": "s1.s2.s1",
         "args": [{"label": "A", "element": "x"}, {"label": "B", "element": "y - 1"}, ...]}
    ]}

Matrix models::

    {"models": [
        {"label": "A", "dim": 2,
         "generators": [{"name": "x", "rows": [["0", "1"], ["1", "0"]]}]}
    ]}

Rationals are JSON integers or ``"p/q"`` strings; floats are rejected so
that tables stay exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Hashable

from .algebra import AlgebraSpec, Element, SchemaError, format_fraction, parse_polynomial, to_fraction
from .replica.models import MatrixModel
from .words import MaybeEmptyWord, MotzkinWordError, parse_word

__all__ = [
    "Query",
    "load_json",
    "specs_from_json",
    "specs_to_json",
    "queries_from_json",
    "models_from_json",
    "load_specs",
    "load_queries",
    "load_models",
    "fraction_json",
]


@dataclass(frozen=True)
class Query:
    name: str
    word: MaybeEmptyWord
    args: tuple[Element, ...]


def load_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc


def _label(value) -> Hashable:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SchemaError(f"labels must be integers or strings, got {value!r}")
    return value


def _items(doc, key: str) -> list:
    if isinstance(doc, list):
        return doc
    if isinstance(doc, dict) and isinstance(doc.get(key), list):
        return doc[key]
    raise SchemaError(f"expected a list or an object with a {key!r} list")


def _require(entry: dict, *keys: str) -> None:
    if not isinstance(entry, dict):
        raise SchemaError(f"expected an object, got {entry!r}")
    missing = [k for k in keys if k not in entry]
    if missing:
        raise SchemaError(f"missing field(s) {missing} in {entry!r}")


def specs_from_json(doc) -> list[AlgebraSpec]:
    out = []
    for entry in _items(doc, "algebras"):
        _require(entry, "label", "generators", "moments")
        table: dict[tuple[str, ...], Fraction] = {(): Fraction(1)}
        for m in entry["moments"]:
            _require(m, "word", "value")
            word = m["word"]
            if isinstance(word, str):
                word = [g for g in word.replace("*", " ").split() if g]
            table[tuple(word)] = to_fraction(m["value"])
        out.append(
            AlgebraSpec(
                _label(entry["label"]),
                tuple(entry["generators"]),
                table,
                int(entry.get("max_order", -1)),
            )
        )
    labels = [s.label for s in out]
    if len(set(labels)) != len(labels):
        raise SchemaError("duplicate algebra labels")
    return out


def specs_to_json(specs) -> dict:
    return {
        "algebras": [
            {
                "label": s.label,
                "generators": list(s.generators),
                "max_order": s.max_order,
                "moments": [
                    {"word": list(w), "value": format_fraction(v)}
                    for w, v in sorted(s.moments.items(), key=lambda kv: (len(kv[0]), kv[0]))
                ],
            }
            for s in specs
        ]
    }


def queries_from_json(doc, specs: dict[Hashable, AlgebraSpec]) -> list[Query]:
    out = []
    for k, entry in enumerate(_items(doc, "queries")):
        _require(entry, "word", "args")
        try:
            word = parse_word(entry["word"]) if isinstance(entry["word"], str) else parse_word(
                ".".join(f"s{c}" for c in entry["word"])
            )
        except MotzkinWordError as exc:
            raise SchemaError(f"query {k}: {exc}") from exc
        args = []
        for a in entry["args"]:
            _require(a, "label", "element")
            lab = _label(a["label"])
            if lab not in specs:
                raise SchemaError(f"query {k}: unknown algebra label {lab!r}")
            args.append(parse_polynomial(lab, str(a["element"]), specs[lab].generators))
        if len(args) != len(word):
            raise SchemaError(f"query {k}: word of length {len(word)} with {len(args)} arguments")
        out.append(Query(str(entry.get("name", f"q{k + 1}")), word, tuple(args)))
    return out


def models_from_json(doc, exact: bool = True) -> list[MatrixModel]:
    out = []
    for entry in _items(doc, "models"):
        _require(entry, "label", "generators")
        gens = {}
        for g in entry["generators"]:
            _require(g, "name", "rows")
            rows = g["rows"]
            if exact:
                rows = [[to_fraction(v) for v in r] for r in rows]
            else:
                rows = [[float(Fraction(v)) if isinstance(v, str) else float(v) for v in r] for r in rows]
            gens[g["name"]] = rows
        model = MatrixModel(_label(entry["label"]), gens, exact=exact)
        if "dim" in entry and int(entry["dim"]) != model.dim:
            raise SchemaError(f"model {model.label!r}: dim {entry['dim']} but matrices are {model.dim}×{model.dim}")
        out.append(model)
    return out


def load_specs(path) -> list[AlgebraSpec]:
    return specs_from_json(load_json(path))


def load_queries(path, specs) -> list[Query]:
    return queries_from_json(load_json(path), {s.label: s for s in specs})


def load_models(path, exact: bool = True) -> list[MatrixModel]:
    return models_from_json(load_json(path), exact)


def fraction_json(x, with_float: bool = False) -> dict | str:
    """``"p/q"``, or ``{"exact": "p/q", "float": ...}`` when ``with_float``."""
    if isinstance(x, Fraction):
        s = format_fraction(x)
        return {"exact": s, "float": float(x)} if with_float else s
    return {"float": float(x)}
