"""JSON model, policy and result documents.

A model document carries the automaton, its security levels, the usability
threshold and the problem parameters. ``secrets`` given as a flat list asks
for the uniform problem; a list of lists asks for the grouped problem, with
``v`` then a list of the same length.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import jsonschema

from .automaton import RESERVED, Automaton, EventAttrs, check_model, natural_key, sorted_names
from .costmodel import CostLevels, SecurityConfig, build_cost_levels
from .policy import PROTECTION, Policy
from .synthesis import SynthesisResult, UhscpInstance, UscpInstance

SCHEMA_VERSION = 1

_names = {"type": "array", "items": {"type": "string", "minLength": 1}}

MODEL_SCHEMA = {
    "type": "object",
    "required": ["states", "events", "transitions", "initial"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "states": _names,
        "events": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name"],
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "protectable": {"type": "boolean"},
                    "level": {"type": ["integer", "null"], "minimum": 0},
                },
                "additionalProperties": False,
            },
        },
        "transitions": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "string"}, "minItems": 3, "maxItems": 3},
        },
        "initial": {"type": "string"},
        "marked": _names,
        "secrets": {"anyOf": [_names, {"type": "array", "items": _names, "minItems": 1}]},
        "threshold": {"type": "integer", "minimum": 1},
        "levels": {"type": "integer", "minimum": 1},
        "u": {"type": "integer", "minimum": 1},
        "v": {"anyOf": [{"type": "integer", "minimum": 0},
                        {"type": "array", "items": {"type": "integer", "minimum": 0}}]},
    },
}

POLICY_SCHEMA = {
    "type": "object",
    "required": ["policy"],
    "properties": {"policy": {"type": "object", "additionalProperties": _names}},
}


class DocumentError(ValueError):
    """The document could not be parsed into the expected shape."""


@dataclass(frozen=True)
class ModelDocument:
    automaton: Automaton
    cfg: SecurityConfig
    secret_groups: Tuple[frozenset, ...]
    grouped: bool
    u: int = 1
    v: Tuple[int, ...] = (0,)

    __hash__ = None  # type: ignore[assignment]

    @property
    def kind(self) -> str:
        return "uhscp" if self.grouped else "uscp"

    def with_threshold(self, threshold: int) -> "ModelDocument":
        cfg = SecurityConfig(self.cfg.levels, threshold)
        return ModelDocument(self.automaton, cfg, self.secret_groups, self.grouped, self.u, self.v)

    def cost_levels(self) -> CostLevels:
        return build_cost_levels(self.automaton, self.cfg)

    def instance(self) -> Union[UscpInstance, UhscpInstance]:
        check_model(self.automaton)
        cost = self.cost_levels()
        if self.grouped:
            return UhscpInstance(self.automaton, self.secret_groups, self.u, self.v, self.cfg, cost)
        return UscpInstance(self.automaton, self.secret_groups[0], self.u, self.v[0], self.cfg, cost)

    def groups_with_levels(self) -> List[Tuple[frozenset, int]]:
        return list(zip(self.secret_groups, self.v))


def _parse_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _check_schema(data: Any, schema: dict, source: str) -> None:
    try:
        jsonschema.validate(data, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise DocumentError(f"{source}: at {where}: {exc.message}") from None


def model_from_dict(data: Dict[str, Any], source: str = "<model>", check: bool = True) -> ModelDocument:
    """Build a :class:`ModelDocument`; with ``check`` the automaton must be valid."""
    _check_schema(data, MODEL_SCHEMA, source)
    alphabet = {}
    for ev in data["events"]:
        name = ev["name"]
        if RESERVED in name:
            raise DocumentError(f"{source}: event name {name!r} uses reserved character {RESERVED!r}")
        if name in alphabet:
            raise DocumentError(f"{source}: event {name!r} declared twice")
        prot = ev.get("protectable", False)
        level = ev.get("level")
        if prot and level is None:
            level = 0
        alphabet[name] = EventAttrs(prot, level if prot else None)
    secrets_raw = data.get("secrets", [])
    grouped = bool(secrets_raw) and isinstance(secrets_raw[0], list)
    groups = tuple(frozenset(g) for g in secrets_raw) if grouped else (frozenset(secrets_raw),)
    v_raw = data.get("v", [0] * len(groups) if grouped else 0)
    if grouped != isinstance(v_raw, list):
        raise DocumentError(f"{source}: 'v' must be a list iff 'secrets' is a list of groups")
    v = tuple(v_raw) if grouped else (v_raw,)
    if len(v) != len(groups):
        raise DocumentError(f"{source}: {len(groups)} secret groups but {len(v)} levels in 'v'")
    a = Automaton(
        states=data["states"],
        alphabet=alphabet,
        transitions=[tuple(t) for t in data["transitions"]],
        initial=data["initial"],
        marked=data.get("marked", []),
        secrets=frozenset().union(*groups),
    )
    if len(set(data["states"])) != len(data["states"]):
        raise DocumentError(f"{source}: duplicate state names")
    if check:
        check_model(a, require_trim=False)
    cfg = SecurityConfig.from_automaton(a, data.get("threshold", 1), data.get("levels"))
    return ModelDocument(a, cfg, groups, grouped, data.get("u", 1), v)


def model_to_dict(doc: ModelDocument) -> Dict[str, Any]:
    a = doc.automaton
    events = []
    for name in sorted_names(a.alphabet):
        at = a.alphabet[name]
        ev: Dict[str, Any] = {"name": name, "protectable": at.protectable}
        if at.protectable:
            ev["level"] = at.level
        events.append(ev)
    secrets = ([sorted_names(g) for g in doc.secret_groups] if doc.grouped
               else sorted_names(doc.secret_groups[0]))
    return {
        "schema_version": SCHEMA_VERSION,
        "states": sorted_names(a.states),
        "events": events,
        "transitions": [list(t) for t in a.transitions],
        "initial": a.initial,
        "marked": sorted_names(a.marked),
        "secrets": secrets,
        "threshold": doc.cfg.threshold,
        "levels": doc.cfg.n,
        "u": doc.u,
        "v": list(doc.v) if doc.grouped else doc.v[0],
    }


def loads_model(text: str, source: str = "<model>", check: bool = True) -> ModelDocument:
    return model_from_dict(_parse_json(text, source), source, check)


def load_model(path: Union[str, Path], check: bool = True) -> ModelDocument:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from None
    return loads_model(text, str(path), check)


def dumps(data: Dict[str, Any]) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def policy_to_dict(policy: Policy) -> Dict[str, List[str]]:
    return {q: sorted(es, key=natural_key) for q, es in policy.entries.items()}


def load_policy(path: Union[str, Path]) -> Policy:
    """Read the ``policy`` member of a policy or result document."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from None
    data = _parse_json(text, str(path))
    _check_schema(data, POLICY_SCHEMA, str(path))
    return Policy(data["policy"], PROTECTION)


def _group_dict(r: SynthesisResult) -> Dict[str, Any]:
    return {
        "secrets": sorted_names(r.secrets),
        "v": r.v,
        "i_min": r.i_min,
        "iterations": [
            {"index": i, "disabled": policy_to_dict(p)}
            for i, p in zip(r.iteration_indices, r.iteration_policies)
        ],
        "policy": policy_to_dict(r.merged_policy),
    }


def result_to_dict(result: SynthesisResult, doc: ModelDocument, cost: Optional[CostLevels] = None) -> Dict[str, Any]:
    """Result document: minimum index, per-group iterations, merged protection policy."""
    cost = cost or doc.cost_levels()
    usability = {(r.state, r.event): r.usability_count for lvl in cost.levels for r in lvl}
    groups = result.groups or (result,)
    protections = []
    for q, e in result.merged_policy.pairs():
        protections.append({
            "state": q,
            "event": e,
            "security_level": doc.cfg.level_of(e),
            "cost_level": cost.level_of(q, e),
            "usability_count": usability.get((q, e)),
        })
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": doc.kind,
        "solvable": True,
        "u": doc.u,
        "i_min": result.i_min,
        "groups": [_group_dict(g) for g in groups],
        "policy": policy_to_dict(result.merged_policy),
        "protections": protections,
    }


def failure_to_dict(doc: ModelDocument, message: str, group: Optional[int], last_index: Optional[int]) -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": doc.kind,
        "solvable": False,
        "u": doc.u,
        "failing_group": group if group is not None else 0,
        "last_index": last_index,
        "message": message,
    }
