"""Command-line interface.

Usage::

    qlra classify  --input data.json
    qlra represent --input data.json --pretty
    qlra equiv     --input data.json
    qlra generate  --seed 7 [--input constraints.json]
    qlra simulate  --seed 7 --samples 100000 [--input instance.json]
    qlra verify    --seed 0 --trials 10000

Input documents are JSON objects with ``pa``, ``pb`` (pairs), ``p_ba`` and
optionally ``p_ab`` (2x2 matrices, ``entry[row][col] = P(row | col)``).
Every run prints one JSON report. Exit codes: 0 success, 2 validation error,
3 hyperbolic data, 4 theorem violation.
"""
from __future__ import annotations

import argparse
import dataclasses
import enum
import json
import math
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .datagen import (
    GenerationConstraints,
    GeneratedInstance,
    empirical_pipeline,
    generate,
    simulate_counts,
)
from .engine import born_residuals, build_state, conjugate_basis, expand_in_conjugate_basis
from .equivalence import theorem_check
from .exceptions import MalformedInput, NotTrigonometric, QLRAError, TheoremViolation
from .probmodel import (
    EPS_NUM,
    ContextData,
    Orientation,
    interference_coefficients,
    interference_lambda,
    validate_transition,
)
from .sweep import verify

COMMANDS = ("classify", "represent", "equiv", "generate", "simulate", "verify")
EXIT_OK, EXIT_ERROR, EXIT_VALIDATION, EXIT_HYPERBOLIC, EXIT_VIOLATION = 0, 1, 2, 3, 4

_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_MATRIX = {"type": "array", "items": _PAIR, "minItems": 2, "maxItems": 2}

CONTEXT_SCHEMA = {
    "type": "object",
    "required": ["pa", "pb", "p_ba"],
    "properties": {"pa": _PAIR, "pb": _PAIR, "p_ba": _MATRIX, "p_ab": _MATRIX},
}

_RANGE = {"oneOf": [{"type": "number"}, _PAIR]}
CONSTRAINTS_SCHEMA = {
    "type": "object",
    "properties": {
        "theta": _RANGE,
        "p": _RANGE,
        "p_ab": _RANGE,
        "pa": _RANGE,
        "symmetric": {"type": "boolean"},
        "min_asymmetry": {"type": "number", "minimum": 0},
    },
    "additionalProperties": False,
}


@dataclasses.dataclass
class JobSpec:
    command: str
    input: object = None
    tol: float = EPS_NUM
    seed: int = 0
    trials: int = 1000
    samples: int = 10000
    output: str = "-"
    pretty: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise MalformedInput(f"unknown command {self.command!r}")
        if not self.tol > 0:
            raise MalformedInput("--tol must be positive", "/options/tol")
        if self.trials < 1:
            raise MalformedInput("--trials must be at least 1", "/options/trials")
        if self.samples < 1:
            raise MalformedInput("--samples must be at least 1", "/options/samples")
        if not 0 <= self.seed < 2**64:
            raise MalformedInput("--seed must be an unsigned 64-bit integer", "/options/seed")

    def options(self) -> dict:
        return {"tol": self.tol, "seed": self.seed, "trials": self.trials, "samples": self.samples}


def to_jsonable(obj):
    """Convert results to plain JSON types; complex numbers become ``{"re", "im"}``."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": to_jsonable(obj.real), "im": to_jsonable(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj):
        return to_jsonable(dataclasses.asdict(obj))
    return obj


def _pointer(error: jsonschema.ValidationError) -> str:
    return "/" + "/".join(str(p) for p in error.absolute_path)


def _validate(doc, schema):
    errors = sorted(jsonschema.Draft7Validator(schema).iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise MalformedInput(f"{_pointer(err)}: {err.message}", _pointer(err))


def parse_context(doc):
    """Validated ``(C, P_ba, P_ab, p_ab_defaulted)`` from an input document.

    A missing ``p_ab`` defaults to the symmetric partner of ``p_ba``.
    """
    if doc is None:
        raise MalformedInput("this command needs --input", "")
    _validate(doc, CONTEXT_SCHEMA)
    C = ContextData(tuple(doc["pa"]), tuple(doc["pb"]))
    P_ba = validate_transition(doc["p_ba"], Orientation.B_GIVEN_A)
    defaulted = "p_ab" not in doc
    raw_ab = np.asarray(doc["p_ba"], dtype=float).T if defaulted else doc["p_ab"]
    P_ab = validate_transition(raw_ab, Orientation.A_GIVEN_B)
    return C, P_ba, P_ab, defaulted


def _state_payload(s, tol):
    r_target, r_conj = born_residuals(s)
    coeffs, expansion_residual = expand_in_conjugate_basis(s, tol)
    basis = conjugate_basis(s.transition)
    return {
        "amplitude": list(s.amp),
        "theta1": s.theta1,
        "norm": s.norm,
        "conjugate_basis": [basis.v1, basis.v2],
        "conjugate_coefficients": list(coeffs),
        "expansion_residual": expansion_residual,
        "born_residuals": {"target": r_target, "conjugate": r_conj},
    }


def cmd_classify(job):
    C, P_ba, P_ab, defaulted = parse_context(job.input)
    result = {"b|a": interference_coefficients(C, P_ba, job.tol)}
    if not defaulted:
        result["a|b"] = interference_coefficients(C, P_ab, job.tol)
    payload = {
        key: {"lambda": prof.lam, "theta": prof.theta, "classification": prof.classification}
        for key, prof in result.items()
    }
    return EXIT_OK, payload, None


def cmd_represent(job):
    C, P_ba, P_ab, defaulted = parse_context(job.input)
    payload = {"p_ab_defaulted": defaulted}
    worst = 0.0
    for P in (P_ba, P_ab):
        s = build_state(C, P, tol=job.tol)
        entry = _state_payload(s, job.tol)
        worst = max(worst, *entry["born_residuals"]["target"], *entry["born_residuals"]["conjugate"])
        payload[P.orientation.value] = entry
    return EXIT_OK, payload, {"max_born_residual": worst}


def cmd_equiv(job):
    C, P_ba, P_ab, defaulted = parse_context(job.input)
    report = theorem_check(C, P_ba, P_ab, tol=job.tol, strict=False)
    payload = {"p_ab_defaulted": defaulted, **report.to_dict()}
    summary = {"max_identity_residual": max(report.identity_residuals.values())}
    if not report.theorem_holds:
        return EXIT_VIOLATION, payload, summary
    return EXIT_OK, payload, summary


def _constraints(doc):
    if doc is None:
        return GenerationConstraints()
    _validate(doc, CONSTRAINTS_SCHEMA)
    try:
        return GenerationConstraints.from_dict(doc)
    except ValueError as exc:
        raise MalformedInput(str(exc), "") from exc


def cmd_generate(job):
    c = _constraints(job.input)
    inst = generate(job.seed, c)
    return EXIT_OK, {"constraints": c.to_dict(), "instance": inst.to_dict()}, None


def _instance_from_input(job) -> GeneratedInstance:
    if job.input is None:
        return generate(job.seed)
    C, P_ba, P_ab, _ = parse_context(job.input)
    prof = interference_coefficients(C, P_ba, job.tol)
    if not prof.is_trigonometric:
        raise NotTrigonometric(f"b|a interference coefficients {prof.lam} exceed one")
    lam, _ = interference_lambda(C.pa, P_ba.entries, C.pb)
    return GeneratedInstance(C, P_ba, P_ab, prof.theta[0], tuple(lam.tolist()), job.seed)


def cmd_simulate(job):
    inst = _instance_from_input(job)
    table = simulate_counts(inst, job.samples, job.seed)
    report = empirical_pipeline(inst, table, job.tol)
    payload = {
        "instance": inst.to_dict(),
        "counts": table.to_dict(),
        "estimate": {
            "pa": report.context.pa,
            "pb": report.context.pb,
            "p_ba": report.P_ba.tolist(),
            "p_ab": report.P_ab.tolist(),
        },
        "born_residuals": {
            k: {"target": v[0], "conjugate": v[1]} for k, v in report.residuals.items()
        },
        "errors": report.errors,
    }
    return EXIT_OK, payload, {"max_born_residual": report.max_residual()}


def cmd_verify(job):
    result = verify(job.seed, job.trials, job.tol)
    code = EXIT_VIOLATION if result["violations"] else EXIT_OK
    return code, result, {"checks": result["checks"]}


HANDLERS = {
    "classify": cmd_classify,
    "represent": cmd_represent,
    "equiv": cmd_equiv,
    "generate": cmd_generate,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


COMMAND_HELP = {
    "classify": "interference coefficients and trigonometric/hyperbolic label",
    "represent": "amplitudes, phases and Born residuals in both orders",
    "equiv": "unitary equivalence of the two representations",
    "generate": "draw a random trigonometric instance",
    "simulate": "sample outcome counts and rerun the pipeline on estimates",
    "verify": "property sweep over generated instances",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qlra", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default=None, help="JSON input file, or - for stdin")
    common.add_argument("--output", default="-", help="report destination (default stdout)")
    common.add_argument("--seed", type=int, default=0, help="unsigned 64-bit seed")
    common.add_argument("--trials", type=int, default=1000, help="trial count for verify")
    common.add_argument("--samples", type=int, default=10000, help="sample size N for simulate")
    common.add_argument("--tol", type=float, default=EPS_NUM, help="numerical tolerance")
    common.add_argument("--pretty", action="store_true", help="indent the JSON report")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=COMMAND_HELP[name])
    return parser


def _read_input(path):
    if path is None:
        return None
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}", "") from exc


def dumps(report: dict, pretty: bool = False) -> str:
    # repr-based float output is the shortest string that round-trips exactly
    return json.dumps(to_jsonable(report), indent=2 if pretty else None, allow_nan=False)


def execute(args: argparse.Namespace) -> tuple:
    """Execute one parsed job; returns ``(exit_code, report)``."""
    report = {"version": __version__, "command": args.command, "input": None}
    try:
        raw = _read_input(args.input)
        report["input"] = raw
        job = JobSpec(
            args.command, raw, args.tol, args.seed, args.trials, args.samples, args.output, args.pretty
        )
        report["options"] = job.options()
        code, payload, summary = HANDLERS[job.command](job)
        report["result"] = payload
        if summary is not None:
            report["summary"] = summary
        if code == EXIT_VIOLATION:
            report["error"] = {
                "code": TheoremViolation.code,
                "message": "equivalence verdict contradicts symmetry verdict",
            }
    except NotTrigonometric as exc:
        code = EXIT_HYPERBOLIC
        report["error"] = {"code": exc.code, "message": str(exc)}
    except MalformedInput as exc:
        code = EXIT_VALIDATION
        report["error"] = {"code": exc.code, "message": str(exc), "pointer": exc.pointer}
    except QLRAError as exc:
        code = EXIT_VALIDATION
        report["error"] = {"code": exc.code, "message": str(exc)}
    except OSError as exc:
        code = EXIT_ERROR
        report["error"] = {"code": "IO_ERROR", "message": str(exc)}
    report["status"] = "ok" if code == EXIT_OK else report["error"]["code"]
    report["exit_code"] = code
    return code, report


def run(argv=None) -> tuple:
    return execute(build_parser().parse_args(argv))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    code, report = execute(args)
    text = dumps(report, args.pretty) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
