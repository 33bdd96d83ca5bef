"""Command-line front end with JSON I/O and stable exit codes.

Exit codes:
    0  success (for check-hom: a verified conjugation)
    1  input parse or schema error
    2  inconsistent trace coordinates (reconstruct)
    3  trace preserving but degenerate (check-hom)
    4  trace violation (check-hom / failed thm2 or thm3 check)
    5  zero derivative at the solution (solve-relator)
    6  other domain errors (shared fixed point, trace mismatch, ...)
    7  selftest failure

Complex numbers are encoded as [re, im]; matrices row-major as
[[[re,im],[re,im]],[[re,im],[re,im]]]; polynomial coefficients as decimal
strings.  Output is deterministic for a fixed (input, seed).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import (
    InconsistentCoordinatesError,
    TraceEngineError,
    WordSyntaxError,
    ZeroDerivativeError,
)
from .homcheck import HomCandidate, VerdictKind, WordSet, check_trace_preserving, check_relators, classify
from .normalize import normalize_pair
from .reconstruct import (
    TraceCoordinates,
    reconstruct_group,
    swap_roles,
    undo_swap,
)
from .relator import RelatorEquation, RelatorSign, solve_for_variable
from .selftest import run_selftest
from .sl2 import (
    DET_TOL,
    ENTRY_TOL,
    TRACE_TOL,
    Mat2C,
    complex_from_json,
    complex_to_json,
    evaluate_word,
    mat_from_json,
    mat_to_json,
    trace,
)
from .tracepoly import parse_var_name, reduce_trace, var_name
from .words import FreeWord

EXIT_OK = 0
EXIT_SCHEMA = 1
EXIT_INCONSISTENT = 2
EXIT_DEGENERATE = 3
EXIT_VIOLATION = 4
EXIT_ZERO_DERIVATIVE = 5
EXIT_DOMAIN_ERROR = 6
EXIT_SELFTEST_FAILED = 7


class _SchemaError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _fail(code: str, message: str, exit_code: int, **extra) -> int:
    error = {"code": code, "message": message}
    error.update(extra)
    sys.stderr.write(json.dumps({"error": error}, sort_keys=True) + "\n")
    return exit_code


def _read_input(args) -> dict:
    if args.input and args.input != "-":
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    data = json.loads(text)
    if not isinstance(data, dict):
        raise _SchemaError("top-level JSON value must be an object")
    return data


def _require(data: dict, key: str):
    if key not in data:
        raise _SchemaError(f"missing required field {key!r}")
    return data[key]


def _decode_matrix(obj, det_tol: float) -> Mat2C:
    try:
        m = mat_from_json(obj)
    except ValueError as exc:
        raise _SchemaError(str(exc)) from None
    return Mat2C(m.a, m.b, m.c, m.d, det_tol=det_tol)


def _decode_matrices(obj, det_tol: float) -> list[Mat2C]:
    if not isinstance(obj, list) or not obj:
        raise _SchemaError("expected a nonempty list of matrices")
    return [_decode_matrix(m, det_tol) for m in obj]


def _decode_complex(obj) -> complex:
    try:
        return complex_from_json(obj)
    except ValueError as exc:
        raise _SchemaError(str(exc)) from None


# -- subcommands ------------------------------------------------------------


def _cmd_reduce(args) -> int:
    word = FreeWord.parse(args.word)
    poly = reduce_trace(word, args.n)
    if args.json:
        _emit(
            {
                "n": args.n,
                "word": str(word),
                "polynomial": str(poly),
                "terms": poly.to_json_terms(),
            }
        )
    else:
        sys.stdout.write(str(poly) + "\n")
    return EXIT_OK


def _cmd_eval(args) -> int:
    data = _read_input(args)
    word = FreeWord.parse(_require(data, "word"))
    images = _decode_matrices(_require(data, "images"), args.tol_det)
    m = evaluate_word(word, images)
    _emit(
        {
            "word": str(word),
            "trace": complex_to_json(trace(m)),
            "matrix": mat_to_json(m),
        }
    )
    return EXIT_OK


def _cmd_normalize(args) -> int:
    data = _read_input(args)
    g1 = _decode_matrix(_require(data, "g1"), args.tol_det)
    g2 = _decode_matrix(_require(data, "g2"), args.tol_det)
    pair = normalize_pair(
        g1, g2, trace_tol=args.tol_trace, entry_tol=args.tol_entry
    )
    _emit(
        {
            "branch": pair.branch,
            "rho": complex_to_json(pair.rho),
            "conjugator": mat_to_json(pair.conjugator),
            "h1": mat_to_json(pair.h1),
            "h2": mat_to_json(pair.h2),
        }
    )
    return EXIT_OK


def _decode_coordinates(data) -> TraceCoordinates:
    n = _require(data, "n")
    if not isinstance(n, int) or n < 1:
        raise _SchemaError("'n' must be a positive integer")
    traces = _require(data, "traces")
    if not isinstance(traces, dict):
        raise _SchemaError("'traces' must be an object of {t...: [re, im]}")
    values = {}
    for key, val in traces.items():
        try:
            var = parse_var_name(key)
        except ValueError as exc:
            raise _SchemaError(str(exc)) from None
        values[var] = _decode_complex(val)
    return TraceCoordinates(n=n, values=values)


def _cmd_reconstruct(args) -> int:
    data = _read_input(args)
    coords = _decode_coordinates(data)
    swap_kind = None
    if args.swap_roles:
        swap_kind, coords = swap_roles(coords)
    group = reconstruct_group(
        coords, trace_tol=args.tol_trace, entry_tol=args.tol_entry
    )
    gens = group.generators
    if swap_kind is not None and swap_kind != "identity":
        gens = undo_swap(swap_kind, gens)
    out = {
        "n": coords.n,
        "generators": [mat_to_json(g) for g in gens],
        "residuals": group.residuals,
    }
    if group.frame is not None:
        out["frame"] = {
            "branch": group.frame.branch,
            "rho": complex_to_json(group.frame.rho),
        }
    if swap_kind is not None:
        out["role_swap"] = swap_kind
    _emit(out)
    return EXIT_OK


_VERDICT_EXIT = {
    VerdictKind.CONJUGATION: EXIT_OK,
    VerdictKind.TRACE_PRESERVING_DEGENERATE: EXIT_DEGENERATE,
    VerdictKind.TRACE_VIOLATION: EXIT_VIOLATION,
}


def _cmd_check_hom(args) -> int:
    data = _read_input(args)
    domain = _decode_matrices(_require(data, "domain"), args.tol_det)
    image = _decode_matrices(_require(data, "image"), args.tol_det)
    relators = None
    if data.get("relators") is not None:
        if not isinstance(data["relators"], list):
            raise _SchemaError("'relators' must be a list of word strings")
        relators = [FreeWord.parse(w) for w in data["relators"]]
    mode = data.get("mode", "classify")
    candidate = HomCandidate(
        domain_gens=domain, image_gens=image, relators=relators
    )
    relator_reports = None
    if relators:
        relator_reports = [
            {
                "word": str(r.word),
                "distance": r.distance,
                "trace": complex_to_json(r.trace),
            }
            for r in check_relators(candidate)
        ]
    if mode in ("thm2", "thm3"):
        word_set = WordSet.THEOREM2_BASIS if mode == "thm2" else WordSet.THEOREM3_SET
        report = check_trace_preserving(
            candidate, word_set, trace_tol=args.tol_trace
        )
        out = {
            "mode": mode,
            "preserving": report.preserving,
            "witness": str(report.witness) if report.witness else None,
            "checked_words": report.checked_words,
            "max_error": report.max_error,
        }
        if relator_reports is not None:
            out["relators"] = relator_reports
        _emit(out)
        return EXIT_OK if report.preserving else EXIT_VIOLATION
    if mode != "classify":
        raise _SchemaError("'mode' must be one of 'thm2', 'thm3', 'classify'")
    verdict = classify(candidate, trace_tol=args.tol_trace)
    out = {
        "mode": mode,
        "kind": verdict.kind.value,
        "certificate": mat_to_json(verdict.certificate)
        if verdict.certificate
        else None,
        "witness": str(verdict.witness) if verdict.witness else None,
        "checked_words": verdict.checked_words,
        "detail": verdict.detail,
        "seed": args.seed,
    }
    if relator_reports is not None:
        out["relators"] = relator_reports
    _emit(out)
    return _VERDICT_EXIT[verdict.kind]


def _cmd_solve_relator(args) -> int:
    data = _read_input(args)
    word = FreeWord.parse(_require(data, "word"))
    sign_text = _require(data, "sign")
    if sign_text not in ("+2", "-2"):
        raise _SchemaError("'sign' must be '+2' or '-2'")
    sign = RelatorSign.PLUS2 if sign_text == "+2" else RelatorSign.MINUS2
    try:
        target = parse_var_name(_require(data, "target"))
    except ValueError as exc:
        raise _SchemaError(str(exc)) from None
    fixed_in = _require(data, "fixed")
    if not isinstance(fixed_in, dict):
        raise _SchemaError("'fixed' must be an object of {t...: [re, im]}")
    fixed = {}
    for key, val in fixed_in.items():
        try:
            fixed[parse_var_name(key)] = _decode_complex(val)
        except ValueError as exc:
            raise _SchemaError(str(exc)) from None
    guess = _decode_complex(_require(data, "guess"))
    n = data.get("n")
    if n is not None and (not isinstance(n, int) or n < 1):
        raise _SchemaError("'n' must be a positive integer")
    equation = RelatorEquation.build(word, sign, target, fixed, n=n)
    solution = solve_for_variable(equation, guess)
    _emit(
        {
            "word": str(word),
            "sign": sign_text,
            "target": var_name(target),
            "value": complex_to_json(solution.value),
            "residual": solution.residual,
            "derivative": complex_to_json(solution.derivative_at_solution),
            "iterations": solution.iterations,
        }
    )
    return EXIT_OK


def _cmd_selftest(args) -> int:
    report = run_selftest(seed=args.seed)
    _emit(report)
    return EXIT_OK if report["ok"] else EXIT_SELFTEST_FAILED


# -- entry point ------------------------------------------------------------


def _add_global_flags(parser: argparse.ArgumentParser, *, suppress: bool) -> None:
    # The same flags are accepted before and after the subcommand; the
    # subparser copies use SUPPRESS defaults so they never clobber values
    # given up front.
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument(
        "--seed", type=int, default=default(0), help="seed for randomized suites"
    )
    parser.add_argument(
        "--tol-trace", dest="tol_trace", type=float, default=default(TRACE_TOL),
        help="trace-equality tolerance",
    )
    parser.add_argument(
        "--tol-entry", dest="tol_entry", type=float, default=default(ENTRY_TOL),
        help="matrix-entry tolerance",
    )
    parser.add_argument(
        "--tol-det", dest="tol_det", type=float, default=default(DET_TOL),
        help="determinant tolerance for matrix input",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sl2trace",
        description="Trace calculus for finitely generated subgroups of SL(2,C).",
    )
    parser.add_argument("--version", action="version", version=__version__)
    _add_global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="trace polynomial of a word")
    p.add_argument("--n", type=int, required=True, help="generator count")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.add_argument("word", help='word text, e.g. "A1 A2 A1^-1 A2^-1"')
    p.set_defaults(fn=_cmd_reduce)

    for name, fn, help_text in (
        ("eval", _cmd_eval, "evaluate a word at matrix images"),
        ("normalize", _cmd_normalize, "canonical frame of a matrix pair"),
        ("reconstruct", _cmd_reconstruct, "rebuild generators from trace coordinates"),
        ("check-hom", _cmd_check_hom, "verify/classify a homomorphism candidate"),
        ("solve-relator", _cmd_solve_relator, "solve tr(W) = +-2 for one trace"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument(
            "--input", default="-", help="JSON input path ('-' for stdin)"
        )
        if name == "reconstruct":
            p.add_argument(
                "--swap-roles",
                action="store_true",
                help="relabel generators when t1 = +-2, undoing the swap in the output",
            )
        p.set_defaults(fn=fn)

    p = sub.add_parser("selftest", help="run the embedded invariant suites")
    p.set_defaults(fn=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    for tol in (args.tol_trace, args.tol_entry, args.tol_det):
        if tol <= 0:
            return _fail("schema", "tolerances must be positive", EXIT_SCHEMA)
    try:
        return args.fn(args)
    except (_SchemaError, json.JSONDecodeError) as exc:
        return _fail("schema", str(exc), EXIT_SCHEMA)
    except FileNotFoundError as exc:
        return _fail("input", str(exc), EXIT_SCHEMA)
    except WordSyntaxError as exc:
        return _fail(exc.code, str(exc), EXIT_SCHEMA, position=exc.position)
    except InconsistentCoordinatesError as exc:
        return _fail(
            exc.code,
            str(exc),
            EXIT_INCONSISTENT,
            index=exc.index,
            residual=exc.residual,
        )
    except ZeroDerivativeError as exc:
        return _fail(
            exc.code,
            str(exc),
            EXIT_ZERO_DERIVATIVE,
            value=complex_to_json(exc.value),
            derivative=complex_to_json(exc.derivative),
            residual=exc.residual,
            iterations=exc.iterations,
        )
    except TraceEngineError as exc:
        return _fail(exc.code, str(exc), EXIT_DOMAIN_ERROR)
    except ValueError as exc:
        return _fail("schema", str(exc), EXIT_SCHEMA)


if __name__ == "__main__":
    sys.exit(main())
