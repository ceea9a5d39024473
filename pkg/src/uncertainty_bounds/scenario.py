"""JSON scenario documents: parsing, validation and pretty-printing.

A scenario names a state, two operators, an optional perpendicular state
and the bound families to evaluate::

    {
      "dimension": 3,
      "hbar": 1.0,
      "state": {"preset": "spin1-theta", "theta": 0.3927},
      "operator_a": {"preset": "spin", "j": 1, "component": "x"},
      "operator_b": {"preset": "spin", "j": 1, "component": "y"},
      "perp": {"preset": "spin-basis", "j": 1, "m": 0},
      "bounds": ["mp-plus", "mp-minus", "gen-sum-hrs"]
    }

Complex entries are ``[re, im]`` pairs (a bare number means a real entry).
``perp`` may also be ``"none"`` or ``{"optimize": {"objective": ..., ...}}``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields

import numpy as np

from .bounds import FAMILIES, NULL_FALLBACK_FAMILIES, PERP_FREE_FAMILIES
from .core import HermitianOperator, NotOrthogonalError, StateVector, inner
from .operators import oscillator_operator, spin1_theta_state, spin_basis_state, spin_operator
from .optimizer import OptimizeConfig

__all__ = ["Scenario", "ScenarioError", "parse_scenario", "load_scenario", "dump_scenario"]

FIELDS = ("dimension", "hbar", "state", "operator_a", "operator_b", "perp", "bounds")
OPTIONAL_FIELDS = ("alpha", "beta")


class ScenarioError(ValueError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class Scenario:
    dimension: int
    hbar: float
    state: StateVector
    operator_a: HermitianOperator
    operator_b: HermitianOperator
    perp: StateVector | OptimizeConfig | None
    bounds: tuple[str, ...]
    alpha: float | None = None
    beta: float = 0.0

    @property
    def optimize(self) -> bool:
        return isinstance(self.perp, OptimizeConfig)


def _complex(value, where):
    if isinstance(value, bool):
        raise ScenarioError(where, "expected a number or [re, im] pair")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise ScenarioError(where, f"expected a number or [re, im] pair, got {value!r}")


def _number(doc, key, where, default=None):
    value = doc.get(key, default)
    if value is None or isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(where, f"'{key}' must be a number")
    if not math.isfinite(value):
        raise ScenarioError(where, f"'{key}' must be finite")
    return value


def _vector_literal(value, where):
    if not isinstance(value, list) or not value:
        raise ScenarioError(where, "expected a non-empty list of [re, im] entries")
    return np.array([_complex(v, f"{where}[{i}]") for i, v in enumerate(value)])


def _state(value, where, hbar):
    if isinstance(value, dict):
        name = value.get("preset")
        try:
            if name == "spin-basis":
                return spin_basis_state(_number(value, "j", where), _number(value, "m", where))
            if name == "spin1-theta":
                return spin1_theta_state(_number(value, "theta", where))
        except ValueError as exc:
            if isinstance(exc, ScenarioError):
                raise
            raise ScenarioError(where, str(exc)) from None
        raise ScenarioError(where, f"unknown state preset {name!r} (expected spin-basis or spin1-theta)")
    amps = _vector_literal(value, where)
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > 1e-9:
        raise ScenarioError(where, f"state is not normalized (norm = {norm:.12g})")
    return StateVector(amps)


def _operator(value, where, hbar):
    if isinstance(value, dict):
        name = value.get("preset")
        h = _number(value, "hbar", where, hbar)
        try:
            if name == "spin":
                return spin_operator(_number(value, "j", where), value.get("component"), h)
            if name == "oscillator":
                return oscillator_operator(_number(value, "dim", where), value.get("component"), h)
        except ValueError as exc:
            if isinstance(exc, ScenarioError):
                raise
            raise ScenarioError(where, str(exc)) from None
        raise ScenarioError(where, f"unknown operator preset {name!r} (expected spin or oscillator)")
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise ScenarioError(where, "expected a preset or a matrix of [re, im] entries")
    rows = [[_complex(v, f"{where}[{i}][{k}]") for k, v in enumerate(row)] for i, row in enumerate(value)]
    if any(len(r) != len(rows) for r in rows):
        raise ScenarioError(where, "matrix must be square")
    try:
        return HermitianOperator(np.array(rows))
    except ValueError as exc:
        raise ScenarioError(where, str(exc)) from None


_CONFIG_KEYS = {f.name for f in fields(OptimizeConfig)}


def _perp(value, where, hbar):
    if value == "none" or value is None:
        return None
    if value == "optimize":
        return OptimizeConfig()
    if isinstance(value, dict) and "optimize" in value:
        opts = value["optimize"]
        if not isinstance(opts, dict):
            raise ScenarioError(where, "'optimize' must be an object of optimizer settings")
        unknown = set(opts) - _CONFIG_KEYS
        if unknown:
            raise ScenarioError(where, f"unknown optimizer setting(s): {', '.join(sorted(unknown))}")
        try:
            return OptimizeConfig(**opts)
        except (TypeError, ValueError) as exc:
            raise ScenarioError(where, str(exc)) from None
    return _state(value, where, hbar)


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a JSON scenario document.

    Raises
    ------
    ScenarioError
        Naming the offending field.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("document", f"invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ScenarioError("document", "top level must be an object")
    unknown = set(doc) - set(FIELDS) - set(OPTIONAL_FIELDS)
    if unknown:
        raise ScenarioError("document", f"unknown field(s): {', '.join(sorted(unknown))}")
    for key in ("dimension", "state", "operator_a", "operator_b", "bounds"):
        if key not in doc:
            raise ScenarioError(key, "missing required field")

    dim = doc["dimension"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 2:
        raise ScenarioError("dimension", "must be an integer >= 2")
    hbar = _number(doc, "hbar", "hbar", 1.0)
    if hbar <= 0:
        raise ScenarioError("hbar", "must be positive")

    state = _state(doc["state"], "state", hbar)
    op_a = _operator(doc["operator_a"], "operator_a", hbar)
    op_b = _operator(doc["operator_b"], "operator_b", hbar)
    perp = _perp(doc.get("perp", "none"), "perp", hbar)
    for name, obj in (("state", state), ("operator_a", op_a), ("operator_b", op_b), ("perp", perp)):
        if hasattr(obj, "dim") and obj.dim != dim:
            raise ScenarioError(name, f"dimension {obj.dim} does not match dimension {dim}")
    if isinstance(perp, StateVector):
        overlap = abs(inner(perp, state))
        if overlap > 1e-9:
            raise ScenarioError("perp", str(NotOrthogonalError(overlap)))

    bounds = doc["bounds"]
    if not isinstance(bounds, list) or not all(isinstance(b, str) for b in bounds):
        raise ScenarioError("bounds", "must be a list of family names")
    for b in bounds:
        if b not in FAMILIES:
            raise ScenarioError("bounds", f"unknown family {b!r}")
    if perp is None:
        allowed = PERP_FREE_FAMILIES + NULL_FALLBACK_FAMILIES
        bad = [b for b in bounds if b not in allowed]
        if bad:
            raise ScenarioError("bounds", f"perp 'none' does not allow {', '.join(bad)}")

    alpha = doc.get("alpha")
    if alpha is not None:
        alpha = float(_number(doc, "alpha", "alpha"))
    beta = float(_number(doc, "beta", "beta", 0.0))
    return Scenario(dim, float(hbar), state, op_a, op_b, perp, tuple(bounds), alpha, beta)


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def _pair(c: complex):
    return [float(c.real), float(c.imag)]


def dump_scenario(scenario: Scenario) -> str:
    """Emit a scenario with every state and operator written out as literals."""
    doc = {
        "dimension": scenario.dimension,
        "hbar": scenario.hbar,
        "state": [_pair(c) for c in scenario.state.amplitudes],
        "operator_a": [[_pair(c) for c in row] for row in scenario.operator_a.matrix],
        "operator_b": [[_pair(c) for c in row] for row in scenario.operator_b.matrix],
    }
    perp = scenario.perp
    if perp is None:
        doc["perp"] = "none"
    elif isinstance(perp, OptimizeConfig):
        doc["perp"] = {"optimize": {f.name: getattr(perp, f.name) for f in fields(OptimizeConfig)}}
    else:
        doc["perp"] = [_pair(c) for c in perp.amplitudes]
    doc["bounds"] = list(scenario.bounds)
    if scenario.alpha is not None:
        doc["alpha"] = scenario.alpha
    if scenario.beta:
        doc["beta"] = scenario.beta
    return json.dumps(doc, indent=2)
