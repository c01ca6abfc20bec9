"""Build models and elements from JSON-style specifications.

Model specs carry a ``kind`` and its parameters::

    {"kind": "bunce_deddens", "q_list": [2, 4], "stage": 0, "window": 64}
    {"kind": "uhf", "p_list": [2, 4, 8], "stage": 1}
    {"kind": "car", "d": 6, "degrees": [1, 1, 1, 1, 1, 1]}
    {"kind": "wiener_hopf", "k": 2, "window": 12}
    {"kind": "group_algebra", "group": {"kind": "Z"}, "window": 64}
    {"kind": "orbit", "action": {"kind": "half_line", "N": 8}}
    {"kind": "kgraph", "graph": {"kind": "bouquet", "n": 2}}

Element recipes are lists of terms ``{"coeff": c, "word": [tokens]}`` where
``c`` is a number or ``[re, im]`` and a token names a generator, optionally
with parameters after a colon (``"M:[1,0,0]"``, ``"W:[1,0]"``, ``"a:2"``) and
a trailing ``*`` for the adjoint.  The empty word is the unit.
"""

from __future__ import annotations

import json
from typing import Mapping

import numpy as np

from ..errors import ConfigurationError
from ..graded import Cocycle, GradedElement
from ..group import group_from_spec
from ..partial_action import action_from_config
from .bunce_deddens import BunceDeddensModel
from .car import CARModel
from .group_algebra import GroupAlgebraModel
from .kgraph import CKElement, KGraph, kgraph_from_spec
from .orbit import OrbitModel
from .uhf import UHFModel
from .wiener_hopf import WienerHopfModel

MODEL_KINDS = ("bunce_deddens", "uhf", "car", "wiener_hopf", "group_algebra", "orbit", "kgraph")


def _require(spec: Mapping, key: str):
    if key not in spec:
        raise ConfigurationError(f"model spec of kind {spec.get('kind')!r} needs {key!r}")
    return spec[key]


def build_model(spec: Mapping, window: int | None = None):
    """Model (or :class:`KGraph`) described by the config mapping ``spec``; ``window`` overrides its window."""
    if not isinstance(spec, Mapping) or "kind" not in spec:
        raise ConfigurationError("model config must be an object with a 'kind'")
    kind = spec["kind"]
    w = window if window is not None else spec.get("window")
    if kind == "bunce_deddens":
        return BunceDeddensModel(_require(spec, "q_list"), int(spec.get("stage", 0)), int(w or 64))
    if kind == "uhf":
        return UHFModel(_require(spec, "p_list"), int(spec.get("stage", 0)))
    if kind == "car":
        group = group_from_spec(spec["group"]) if "group" in spec else None
        return CARModel(int(_require(spec, "d")), spec.get("degrees"), group)
    if kind == "wiener_hopf":
        return WienerHopfModel(int(spec.get("k", 1)), int(w or 16))
    if kind == "group_algebra":
        group = group_from_spec(_require(spec, "group"))
        cocycle = None
        if "theta" in spec:
            cocycle = Cocycle.bicharacter(group, np.asarray(spec["theta"], dtype=float))
        return GroupAlgebraModel(group, int(w or 64), cocycle)
    if kind == "orbit":
        return OrbitModel(action_from_config(_require(spec, "action")))
    if kind == "kgraph":
        return kgraph_from_spec(_require(spec, "graph"))
    raise ConfigurationError(f"unknown model kind {kind!r}; expected one of {list(MODEL_KINDS)}")


def _coeff(c) -> complex:
    if isinstance(c, (list, tuple)):
        if len(c) != 2:
            raise ConfigurationError(f"complex coefficient must be [re, im], got {c!r}")
        return complex(float(c[0]), float(c[1]))
    try:
        return complex(c)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"bad coefficient {c!r}") from exc


def _token(model, token: str):
    star = token.endswith("*")
    name = token[:-1] if star else token
    head, _, arg = name.partition(":")
    param = json.loads(arg) if arg else None
    if isinstance(model, KGraph):
        if head == "S" and param:
            el = CKElement.S(model, model.path(*param))
        elif head in model.edges:
            el = CKElement.S(model, model.path(head))
        elif head in model.vertices:
            el = CKElement.vertex(model, head)
        else:
            raise ConfigurationError(f"unknown k-graph token {token!r}")
        return el.adjoint() if star else el
    if isinstance(model, BunceDeddensModel) and head in ("M", "S_a"):
        el = model.M(param) if head == "M" else model.S_a(param)
    elif isinstance(model, WienerHopfModel) and head == "W":
        el = model.W(tuple(param) if isinstance(param, list) else param)
    elif isinstance(model, CARModel) and head == "a":
        el = model.a(int(param))
    elif isinstance(model, UHFModel) and head == "E":
        el = model.matrix_unit(int(param[0]), int(param[1]))
    elif isinstance(model, GroupAlgebraModel) and head == "delta":
        g = tuple(param) if isinstance(param, list) else param
        el = model.delta(g)
    else:
        gens = model.generators()
        if head not in gens:
            raise ConfigurationError(f"unknown generator {head!r} for {model.name}; "
                                     f"known: {sorted(gens)}")
        el = gens[head]
    return el.adjoint() if star else el


def build_element(model, recipe) -> GradedElement | CKElement:
    """Evaluate a recipe (list of coefficient/word terms) in ``model``."""
    if not isinstance(recipe, list) or not recipe:
        raise ConfigurationError("element recipe must be a non-empty list of terms")
    if isinstance(model, KGraph):
        unit = CKElement.unit(model)
        total = CKElement(model, {})
    else:
        unit = model.unit()
        total = GradedElement.zero(model.fibers)
    for term in recipe:
        if not isinstance(term, Mapping) or "word" not in term:
            raise ConfigurationError(f"recipe term must have a 'word': {term!r}")
        el = unit
        for tok in term["word"]:
            el = el * _token(model, str(tok))
        total = total + el.scale(_coeff(term.get("coeff", 1.0)))
    return total
