"""Command-line front end.

Exit status is 0 on success, 1 when the model is invalid, the problem is
unsolvable or an audit fails, and 2 when an input document cannot be read.
A model path of the form ``fixture:<name>`` loads a model shipped with the
package, e.g. ``fixture:running_example``.
"""
from __future__ import annotations

import argparse
import math
import sys
from importlib import resources
from pathlib import Path
from typing import List, Optional

from .automaton import ModelError, coreachable_states, is_trim, reachable_states, sorted_names, validate
from .documents import (
    DocumentError,
    ModelDocument,
    dumps,
    failure_to_dict,
    load_model,
    load_policy,
    model_to_dict,
    result_to_dict,
)
from .dot import to_dot
from .generate import random_uhscp, random_uscp
from .synthesis import (
    UhscpInstance,
    Unsolvable,
    check_solvability_uhscp,
    check_solvability_uscp,
    solve_uhscp,
    solve_uscp,
)
from .verify import audit_policy

OK, FAIL, BAD_INPUT = 0, 1, 2


def fixture_path(name: str) -> Path:
    if not name.endswith(".json"):
        name += ".json"
    return Path(str(resources.files("secprot") / "data" / name))


def _resolve(path: str) -> Path:
    if path.startswith("fixture:"):
        return fixture_path(path[len("fixture:"):])
    return Path(path)


def _load(args, check: bool = True) -> ModelDocument:
    doc = load_model(_resolve(args.model), check=check)
    if getattr(args, "threshold", None) is not None:
        doc = doc.with_threshold(args.threshold)
    return doc


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    doc = _load(args, check=False)
    a = doc.automaton
    report = validate(a)
    for line in report:
        print(line)
    if report:
        print("invalid")
        return FAIL
    if not is_trim(a):
        print("not trim")
        print("  unreachable: " + ", ".join(sorted_names(a.states - reachable_states(a))))
        print("  not co-reachable: " + ", ".join(sorted_names(a.states - coreachable_states(a))))
        return FAIL
    print(f"valid and trim: {len(a.states)} states, {len(a.alphabet)} events, {len(a.transitions)} transitions")
    return OK


def format_cost_table(doc: ModelDocument) -> str:
    rows = doc.cost_levels().table()
    return "".join(
        f"C_{i}: " + (" ".join(f"({e},{c})" for e, c in row) if row else "{}") + "\n"
        for i, row in enumerate(rows)
    )


def cmd_cost(args) -> int:
    doc = _load(args)
    _emit(format_cost_table(doc), args.out)
    return OK


def cmd_check(args) -> int:
    doc = _load(args)
    inst = doc.instance()
    rep = check_solvability_uhscp(inst) if isinstance(inst, UhscpInstance) else check_solvability_uscp(inst)
    for i, counts, passing in rep.detail:
        shown = ", ".join("inf" if math.isinf(c) else str(int(c)) for c in counts)
        print(f"i = {i}: min counts [{shown}] {'pass' if passing else 'fail'}")
    if rep.solvable:
        print(f"solvable, i = {rep.witness_index}")
        return OK
    print(f"unsolvable (group {rep.failing_group})")
    return FAIL


def cmd_solve(args) -> int:
    doc = _load(args)
    inst = doc.instance()
    try:
        if isinstance(inst, UhscpInstance):
            result = solve_uhscp(inst, parallel=args.parallel)
        else:
            result = solve_uscp(inst)
    except Unsolvable as exc:
        _emit(dumps(failure_to_dict(doc, str(exc), exc.group, exc.last_index)), args.out)
        return FAIL
    _emit(dumps(result_to_dict(result, doc, inst.cost)), args.out)
    return OK


def cmd_verify(args) -> int:
    doc = _load(args)
    policy = load_policy(args.policy)
    report = audit_policy(doc.automaton, policy, doc.groups_with_levels(), doc.u, doc.cfg)
    print(report.render())
    return OK if report.passed else FAIL


def cmd_dot(args) -> int:
    doc = _load(args)
    policy = load_policy(args.policy) if args.policy else None
    _emit(to_dot(doc.automaton, policy), args.out)
    return OK


def cmd_generate(args) -> int:
    if args.groups:
        inst = random_uhscp(args.seed, max_states=args.states)
        doc = ModelDocument(inst.plant, inst.cfg, inst.secret_groups, True, inst.u, inst.v_levels)
    else:
        inst = random_uscp(args.seed, max_states=args.states)
        doc = ModelDocument(inst.plant, inst.cfg, (inst.secrets,), False, inst.u, (inst.v,))
    _emit(dumps(model_to_dict(doc)), args.out)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="secprot", description="Minimum-cost secret protection policies.")
    sub = parser.add_subparsers(dest="command", required=True)

    def model_cmd(name, func, help_, threshold=True, out=False):
        p = sub.add_parser(name, help=help_)
        p.add_argument("model", help="model document, or fixture:<name>")
        if threshold:
            p.add_argument("--threshold", type=int, help="override the usability threshold T")
        if out:
            p.add_argument("--out", help="write to this file instead of stdout")
        p.set_defaults(func=func)
        return p

    model_cmd("validate", cmd_validate, "check structure and trimness", threshold=False)
    model_cmd("cost", cmd_cost, "print the cost levels", out=True)
    model_cmd("check", cmd_check, "decide solvability and the least index")
    p = model_cmd("solve", cmd_solve, "synthesize a protection policy", out=True)
    p.add_argument("--parallel", action="store_true", help="solve secret groups concurrently")
    p = model_cmd("verify", cmd_verify, "audit a policy against the model's requirements", threshold=False)
    p.add_argument("policy", help="policy or result document")
    p = model_cmd("dot", cmd_dot, "export a Graphviz graph", threshold=False, out=True)
    p.add_argument("policy", nargs="?", help="policy to overlay")

    p = sub.add_parser("generate", help="write a random model document")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--states", type=int, default=6, help="upper bound on the state count")
    p.add_argument("--groups", action="store_true", help="grouped secrets")
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
