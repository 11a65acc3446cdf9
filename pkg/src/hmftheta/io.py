"""JSON formats for shapes, models, weights and q-expansions.

Exponents and coefficients are integer arrays; the bound is a rational
written as a string ("60", "121/2").
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .builtin import BUILTIN_MODELS, builtin_model
from .errors import InvalidConfig
from .exponents import ExponentModel, model_from_json
from .qexp import QExpansion
from .ring import GradedElement
from .weights import WeightVector


def model_ref(model: ExponentModel) -> Any:
    if model.name in BUILTIN_MODELS and builtin_model(model.name).to_json() == model.to_json():
        return model.name
    return model.to_json()


def resolve_model(ref: Any) -> ExponentModel:
    if isinstance(ref, str):
        try:
            return builtin_model(ref)
        except KeyError as exc:
            raise InvalidConfig(str(exc)) from None
    if isinstance(ref, dict):
        return model_from_json(ref)
    raise InvalidConfig("model reference must be a builtin name or a config object")


def parse_fraction(text: Any) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise InvalidConfig(f"expected a rational string, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InvalidConfig(f"bad rational {text!r}") from None


def qexp_to_json(f: QExpansion) -> dict:
    return {
        "model": model_ref(f.model),
        "k": f.k.to_json(),
        "l": f.l.to_json(),
        "bound": str(f.bound),
        "constant": list(f.constant.coeffs),
        "terms": [{"m": list(m), "c": list(f.terms[m].coeffs)} for m in sorted(f.terms)],
    }


def qexp_from_json(data: dict, model: ExponentModel | None = None) -> QExpansion:
    try:
        if model is None:
            model = resolve_model(data["model"])
        shape = model.shape
        field = model.field
        k = WeightVector(shape, data["k"])
        l = WeightVector(shape, data["l"])
        terms = {}
        for rec in data.get("terms", []):
            m = tuple(int(x) for x in rec["m"])
            if m in terms:
                raise InvalidConfig(f"exponent {list(m)} listed twice")
            terms[m] = field(rec["c"])
        constant = field(data.get("constant", [0]))
        return QExpansion(model, k, l, terms, constant, parse_fraction(data["bound"]))
    except InvalidConfig:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidConfig(f"bad q-expansion record: {exc}") from None


def graded_to_json(x: GradedElement) -> list[dict]:
    return [qexp_to_json(f) for f in sorted(x, key=lambda f: (f.k.entries, f.l.entries))]


def graded_from_json(data: list) -> GradedElement:
    if not isinstance(data, list) or not data:
        raise InvalidConfig("a graded element file is a nonempty array of q-expansions")
    parts = [qexp_from_json(rec) for rec in data]
    keys = [(f.k.entries, f.l.entries) for f in parts]
    if len(set(keys)) != len(keys):
        raise InvalidConfig("graded element components must have distinct weights")
    model = parts[0].model
    return GradedElement(model, parts[0].bound, parts)


def load_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidConfig(f"cannot read {path}: {exc}") from None


def dump_json(data: Any, path: str | Path | None = None) -> str:
    text = json.dumps(data, indent=2, sort_keys=False) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
