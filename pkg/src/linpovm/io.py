"""JSON formats: circuit, state, optimizer config and the emitted reports.

Complex numbers are ``{"re": x, "im": y}``; a bare real number is accepted
on input.  Mode indices are 1-based.
"""
from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import numpy as np

from .modes import (BeamSplitter, ModeSwap, ModeUnitary, OpticalCircuit, PhaseShifter,
                    UNITARY_TOL, compose_circuit, validate_unitary)
from .optimize import OptimizerConfig
from .states import NORM_TOL, TwoQuditState, Statistics, bell_state

SCHEMA_VERSION = "1.0"


class InputError(ValueError):
    """Malformed or invariant-violating input file."""


_COMPLEX = {
    "oneOf": [
        {"type": "number"},
        {"type": "object", "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
         "required": ["re", "im"], "additionalProperties": False},
    ]
}
_MATRIX = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _COMPLEX}}
_PAIR = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2, "maxItems": 2}

CIRCUIT_SCHEMA = {
    "$id": "linpovm/circuit",
    "type": "object",
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "elements": {
            "type": "array",
            "items": {
                "oneOf": [
                    {"type": "object", "properties": {"type": {"const": "bs"}, "modes": _PAIR,
                                                      "theta": {"type": "number"}, "phi": {"type": "number"}},
                     "required": ["type", "modes", "theta"], "additionalProperties": False},
                    {"type": "object", "properties": {"type": {"const": "ps"}, "mode": {"type": "integer", "minimum": 1},
                                                      "phi": {"type": "number"}},
                     "required": ["type", "mode", "phi"], "additionalProperties": False},
                    {"type": "object", "properties": {"type": {"const": "swap"}, "modes": _PAIR},
                     "required": ["type", "modes"], "additionalProperties": False},
                ]
            },
        },
        "unitary": _MATRIX,
    },
    "required": ["n"],
    "oneOf": [{"required": ["elements"]}, {"required": ["unitary"]}],
}

STATE_SCHEMA = {
    "$id": "linpovm/state",
    "type": "object",
    "properties": {
        "d": {"type": "integer", "minimum": 1},
        "statistics": {"enum": ["boson", "fermion"]},
        "C": _MATRIX,
        "bell": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2},
    },
    "required": ["d", "statistics"],
    "oneOf": [{"required": ["C"]}, {"required": ["bell"]}],
}

OPTIMIZER_SCHEMA = {
    "$id": "linpovm/optimizer-config",
    "type": "object",
    "properties": {
        "n": {"type": "integer", "minimum": 2},
        "d": {"type": "integer", "minimum": 1},
        "statistics": {"enum": ["boson", "fermion"]},
        "restarts": {"type": "integer", "minimum": 1},
        "max_iterations": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer"},
        "tolerance": {"type": "number", "exclusiveMinimum": 0},
        "me_tolerance": {"type": "number", "exclusiveMinimum": 0},
        "sharpness": {"type": "number", "minimum": 1},
    },
    "required": ["n", "d", "statistics", "restarts", "max_iterations", "seed"],
    "additionalProperties": False,
}

_REPORT_BASE = {
    "tool": {"const": "linpovm"},
    "version": {"type": "string"},
    "schema_version": {"const": SCHEMA_VERSION},
    "command": {"type": "string"},
    "config": {"type": "object"},
    "checks": {"type": "object", "additionalProperties": {"type": "boolean"}},
}
_REAL_LIST = {"type": "array", "items": {"type": "number"}}

REPORT_SCHEMAS = {
    "compose": {"type": "object", "properties": {**_REPORT_BASE, "n": {"type": "integer"}, "unitary": _MATRIX,
                                                 "unitarity_residual": {"type": "number"}},
                "required": ["tool", "version", "command", "config", "unitary"]},
    "single-qudit": {"type": "object", "properties": {**_REPORT_BASE, "vectors": _MATRIX,
                                                      "completeness_residual": {"type": "number"}},
                     "required": ["tool", "version", "command", "config", "vectors", "completeness_residual"]},
    "povm": {"type": "object", "properties": {
        **_REPORT_BASE,
        "elements": {"type": "array", "items": {"type": "object", "properties": {
            "pattern": _PAIR, "double_click": {"type": "boolean"}, "weight": {"type": "number"},
            "singular_values": _REAL_LIST, "null": {"type": "boolean"}, "P": _MATRIX},
            "required": ["pattern", "weight", "singular_values", "null"]}},
        "completeness_residual": {"type": "number"}},
        "required": ["tool", "version", "command", "config", "elements", "completeness_residual"]},
    "analyze": {"type": "object", "properties": {
        **_REPORT_BASE,
        "elements": {"type": "array", "items": {"type": "object", "properties": {
            "pattern": _PAIR, "weight": {"type": "number"}, "singular_values": _REAL_LIST,
            "schmidt_rank": {"type": ["integer", "null"]}, "maximally_entangled": {"type": "boolean"},
            "kappa": {"type": "number"}}, "required": ["pattern", "weight", "singular_values"]}},
        "max_schmidt_rank": {"type": "integer"},
        "me_success_probability": {"type": "number"},
        "me_success_by_tolerance": {"type": "object", "additionalProperties": {"type": "number"}},
        "detectors": {"type": "array"},
        "completeness_residual": {"type": "number"}},
        "required": ["tool", "version", "command", "config", "elements", "me_success_probability"]},
    "bell": {"type": "object", "properties": {
        **_REPORT_BASE,
        "patterns": {"type": "array", "items": {"type": "object", "properties": {
            "pattern": _PAIR, "probabilities": {"type": "object", "additionalProperties": {"type": "number"}},
            "identified_state": {"oneOf": [{"type": "null"}, {"type": "array", "items": {"type": "integer"}}]},
            "maximally_entangled": {"type": "boolean"}, "kappa": {"type": "number"},
            "singular_values": _REAL_LIST}}},
        "identified_states": {"type": "array"},
        "success_uniform_bell": {"type": "number", "minimum": 0, "maximum": 1},
        "success_maximally_mixed": {"type": "number", "minimum": 0, "maximum": 1}},
        "required": ["tool", "version", "command", "config", "patterns", "success_uniform_bell",
                     "success_maximally_mixed"]},
    "crosscheck": {"type": "object", "properties": {
        **_REPORT_BASE, "max_abs_deviation": {"type": "number"},
        "probabilities": {"type": "array"}},
        "required": ["tool", "version", "command", "config", "max_abs_deviation"]},
    "optimize": {"type": "object", "properties": {
        **_REPORT_BASE, "best_params": _REAL_LIST, "best_surrogate": {"type": "number"},
        "best_hard_success": {"type": "number", "minimum": 0, "maximum": 1},
        "best_restart": {"type": "integer"}, "restarts": {"type": "array"}},
        "required": ["tool", "version", "command", "config", "best_params", "best_surrogate",
                     "best_hard_success", "restarts"]},
}

SCHEMAS = {"circuit": CIRCUIT_SCHEMA, "state": STATE_SCHEMA, "optimizer-config": OPTIMIZER_SCHEMA,
           **{f"report-{k}": v for k, v in REPORT_SCHEMAS.items()}}


# --- encoding helpers ---------------------------------------------------------


def complex_to_json(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def matrix_to_json(M) -> list:
    return [[complex_to_json(z) for z in row] for row in np.atleast_2d(np.asarray(M))]


def complex_from_json(x) -> complex:
    if isinstance(x, dict):
        return complex(x["re"], x["im"])
    return complex(x)


def matrix_from_json(rows) -> np.ndarray:
    lengths = {len(r) for r in rows}
    if len(lengths) != 1:
        raise InputError("matrix rows have unequal lengths")
    return np.array([[complex_from_json(x) for x in r] for r in rows], dtype=complex)


def _path(err: jsonschema.ValidationError) -> str:
    return "/".join(str(p) for p in err.absolute_path) or "<root>"


def validate(data, schema: dict, what: str):
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: len(list(e.absolute_path)), reverse=True)
    if errors:
        err = errors[0]
        raise InputError(f"{what}: field '{_path(err)}': {err.message}")


def load_json(path) -> object:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


# --- domain parsing -----------------------------------------------------------


def circuit_from_dict(data: dict):
    """Returns ``(ModeUnitary, OpticalCircuit | None)``."""
    validate(data, CIRCUIT_SCHEMA, "circuit")
    n = data["n"]
    if "unitary" in data:
        M = matrix_from_json(data["unitary"])
        if M.shape != (n, n):
            raise InputError(f"circuit: field 'unitary': expected {n}x{n} matrix, got {M.shape[0]}x{M.shape[1]}")
        res = validate_unitary(M)
        if res > UNITARY_TOL:
            raise InputError(f"circuit: field 'unitary': matrix is not unitary "
                             f"(max|U^dag U - I| = {res:.3e} > {UNITARY_TOL:.0e})")
        return ModeUnitary(M), None
    elements = []
    for k, el in enumerate(data["elements"]):
        where = f"circuit: field 'elements/{k}'"
        modes = el.get("modes", [el.get("mode")])
        if any(m > n for m in modes):
            raise InputError(f"{where}: mode index {max(modes)} exceeds n={n}")
        if el["type"] == "bs":
            if modes[0] == modes[1]:
                raise InputError(f"{where}: beam splitter needs two distinct modes")
            elements.append(BeamSplitter(modes[0], modes[1], el["theta"], el.get("phi", 0.0)))
        elif el["type"] == "ps":
            elements.append(PhaseShifter(el["mode"], el["phi"]))
        else:
            if modes[0] == modes[1]:
                raise InputError(f"{where}: swap needs two distinct modes")
            elements.append(ModeSwap(modes[0], modes[1]))
    circuit = OpticalCircuit(n, elements)
    return compose_circuit(circuit), circuit


def circuit_to_dict(circuit: OpticalCircuit) -> dict:
    out = []
    for el in circuit.elements:
        if isinstance(el, BeamSplitter):
            out.append({"type": "bs", "modes": [el.mode_a, el.mode_b], "theta": el.theta, "phi": el.phi})
        elif isinstance(el, PhaseShifter):
            out.append({"type": "ps", "mode": el.mode, "phi": el.phi})
        else:
            out.append({"type": "swap", "modes": [el.mode_a, el.mode_b]})
    return {"n": circuit.n, "elements": out}


def unitary_to_dict(U) -> dict:
    M = np.asarray(U)
    return {"n": M.shape[0], "unitary": matrix_to_json(M)}


def state_from_dict(data: dict) -> TwoQuditState:
    validate(data, STATE_SCHEMA, "state")
    d, stats = data["d"], Statistics.parse(data["statistics"])
    if "bell" in data:
        m, k = data["bell"]
        if m >= d or k >= d:
            raise InputError(f"state: field 'bell': indices {data['bell']} out of range for d={d}")
        return bell_state(d, m, k, stats)
    C = matrix_from_json(data["C"])
    if C.shape != (d, d):
        raise InputError(f"state: field 'C': expected {d}x{d} matrix, got {C.shape[0]}x{C.shape[1]}")
    state = TwoQuditState(C, stats)
    if abs(state.norm_sq - 1) > NORM_TOL:
        raise InputError(f"state: field 'C': normalization invariant Tr(C^dag C) = 1 violated "
                         f"(got {state.norm_sq:.12g})")
    return state


def state_to_dict(state: TwoQuditState) -> dict:
    return {"d": state.d, "statistics": state.statistics.value, "C": matrix_to_json(state.C)}


def optimizer_config_from_dict(data: dict) -> OptimizerConfig:
    validate(data, OPTIMIZER_SCHEMA, "optimizer config")
    try:
        return OptimizerConfig.from_dict(data)
    except ValueError as exc:
        raise InputError(f"optimizer config: {exc}") from exc


def load_circuit(path):
    return circuit_from_dict(_as_object(load_json(path), path))


def load_state(path) -> TwoQuditState:
    return state_from_dict(_as_object(load_json(path), path))


def load_optimizer_config(path) -> OptimizerConfig:
    return optimizer_config_from_dict(_as_object(load_json(path), path))


def _as_object(data, path):
    if not isinstance(data, dict):
        raise InputError(f"{path}: top-level JSON value must be an object")
    return data
