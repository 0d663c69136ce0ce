"""Run configuration: JSON file, schema-checked, merged with CLI flags."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from .errors import InvalidInputError
from .poly import DEFAULT_SEED, IntPolynomial

_INT = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?[0-9]+$"}]}
_POS_REAL = {"oneOf": [{"type": "number", "minimum": 0}, {"type": "string", "pattern": r"^[0-9]+(\.[0-9]*)?([eE][+]?[0-9]+)?$"}]}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "poly": {"type": "array", "minItems": 2, "maxItems": 9, "items": _INT},
        "T": {"type": "array", "items": _POS_REAL},
        "enumerator": {"enum": ["auto", "n2", "generic", "naive", "n2-divisor", "generic-dfs"]},
        "threads": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "prime_bound": {"type": "integer", "minimum": 100},
        "formula_evaluation_mode": {"type": "boolean"},
        "field_invariants": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "disc_K": _INT,
                "index": _INT,
                "h_K": _INT,
                "R_K": {"type": "number", "exclusiveMinimum": 0},
                "residue_combination": {"type": "number", "exclusiveMinimum": 0},
                "branch": {"enum": ["case1", "case2"]},
            },
            "dependentRequired": {"h_K": ["R_K"], "R_K": ["h_K"]},
        },
        "orbital": {
            "type": "object",
            "additionalProperties": False,
            "patternProperties": {"^[0-9]+$": {"type": "integer", "minimum": 1}},
        },
        "outputs": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "csv": {"type": "string"},
                "report": {"type": "string"},
                "run_log": {"type": "string"},
            },
        },
    },
}


@dataclass
class RunConfig:
    poly: IntPolynomial | None = None
    T: list[str] = field(default_factory=list)
    enumerator: str = "auto"
    threads: int = 1
    seed: int = DEFAULT_SEED
    prime_bound: int = 10**6
    branch: str = "case1"
    formula_evaluation_mode: bool = False
    field_overrides: dict = field(default_factory=dict)
    orbital_overrides: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        try:
            jsonschema.validate(data, SCHEMA)
        except jsonschema.ValidationError as exc:
            where = "/".join(str(x) for x in exc.absolute_path) or "<root>"
            raise InvalidInputError(f"config {where}: {exc.message}") from None
        fi = dict(data.get("field_invariants", {}))
        branch = fi.pop("branch", "case1")
        return cls(
            poly=IntPolynomial.from_json(data["poly"]) if "poly" in data else None,
            T=[str(t) for t in data.get("T", [])],
            enumerator=data.get("enumerator", "auto"),
            threads=data.get("threads", 1),
            seed=data.get("seed", DEFAULT_SEED),
            prime_bound=data.get("prime_bound", 10**6),
            branch=branch,
            formula_evaluation_mode=data.get("formula_evaluation_mode", False),
            field_overrides=fi,
            orbital_overrides={int(p): v for p, v in data.get("orbital", {}).items()},
            outputs=dict(data.get("outputs", {})),
        )

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInputError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise InvalidInputError("config must be a JSON object")
        return cls.from_dict(data)


def parse_T_list(text: str) -> list[str]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            value = float(part)
        except ValueError:
            raise InvalidInputError(f"bad T value {part!r}") from None
        if not value >= 0 or value == float("inf"):
            raise InvalidInputError(f"T must be a finite nonnegative number, got {part}")
        out.append(part)
    if not out:
        raise InvalidInputError("empty T list")
    return out
