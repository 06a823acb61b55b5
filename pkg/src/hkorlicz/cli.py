"""Command-line front end.

Exit codes: 0 success (for ``verify``: every asserted check passed), 1 some
asserted check failed or errored, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from . import young as Y
from .funcspec import Box, SpecError, load_function_spec
from .hkint import ConvergenceError, hk_integrate
from .norms import DEFAULT_INT_TOL, DEFAULT_NORM_TOL, luxemburg_norm, weak_norm
from .verifier import CorpusError, default_corpus, load_corpus, run_suites
from .verifier.checks import SUITES
from .verifier.report import to_json_value

__all__ = ["run", "main", "build_parser", "InputError"]


class InputError(Exception):
    """Bad input; the message names the offending file or flag."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(f"{self.prog}: {message}")


def parse_box(text: str) -> Box:
    """``"lo,hi;lo,hi"`` to a :class:`Box`."""
    try:
        pairs = [[float(v) for v in part.split(",")] for part in text.split(";") if part.strip()]
        return Box.from_pairs(pairs)
    except (TypeError, ValueError) as exc:
        raise InputError(f"--box {text!r}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    p = _Parser(prog="hkorlicz", description="Gauge integrals, Young functions and Orlicz norms.", formatter_class=fmt)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", metavar="PATH", default=None, help="report destination; None means stdout")
        sp.add_argument("--format", choices=("json", "text"), default="json", help="report format")

    sp = sub.add_parser("integrate", help="gauge integral of a function", formatter_class=fmt)
    sp.add_argument("--fn", metavar="PATH", required=True, help="function-spec JSON file")
    sp.add_argument("--box", metavar="'lo,hi;lo,hi'", default=None, help="integration box; None means the function's domain")
    sp.add_argument("--tol", type=float, default=DEFAULT_INT_TOL, help="absolute tolerance")
    common(sp)

    sp = sub.add_parser("norm", help="strong (Luxemburg) or weak Orlicz norm", formatter_class=fmt)
    sp.add_argument("--kind", choices=("strong", "weak"), default="strong", help="which norm")
    sp.add_argument("--fn", metavar="PATH", required=True, help="function-spec JSON file")
    sp.add_argument("--young", metavar="PATH", required=True, help="Young-spec JSON file")
    sp.add_argument("--box", metavar="'lo,hi;lo,hi'", default=None, help="box K; None means the function's domain")
    sp.add_argument("--tol", type=float, default=DEFAULT_NORM_TOL, help="relative bisection tolerance")
    common(sp)

    sp = sub.add_parser("young", help="classify a Young function", formatter_class=fmt)
    sp.add_argument("--young", metavar="PATH", required=True, help="Young-spec JSON file")
    common(sp)

    sp = sub.add_parser("verify", help="run verification suites", formatter_class=fmt)
    sp.add_argument("--suite", default="all", help=f"all or a comma list of: {', '.join(SUITES)}")
    sp.add_argument("--corpus", default="default", metavar="default|PATH", help="corpus manifest")
    sp.add_argument("--fn", metavar="PATH", action="append", default=[], help="extra corpus function (repeatable)")
    sp.add_argument("--young", metavar="PATH", action="append", default=[], help="extra corpus Young function (repeatable)")
    sp.add_argument("--tol", type=float, default=None, help="integrator tolerance; None keeps the corpus value")
    common(sp)
    return p


def _load_fn(path: str):
    try:
        return load_function_spec(path)
    except SpecError as exc:
        raise InputError(str(exc)) from exc


def _load_young(path: str):
    try:
        return Y.load_young_spec(path)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _positive(name: str, value):
    if value is not None and not (value > 0 and math.isfinite(value)):
        raise InputError(f"{name} must be a positive finite number, got {value!r}")


def _box_for(args, f) -> Box:
    if args.box is None:
        return f.domain
    box = parse_box(args.box)
    if box.dim != f.dim or not f.domain.contains_box(box):
        raise InputError(f"--box {args.box!r} is not inside the domain {f.domain} of {args.fn}")
    return box


def _emit(args, payload: dict, text: str):
    body = json.dumps(to_json_value(payload), indent=2, allow_nan=False) + "\n" if args.format == "json" else text
    if args.out:
        try:
            Path(args.out).write_text(body)
        except OSError as exc:
            raise InputError(f"--out {args.out}: {exc}") from exc
    else:
        sys.stdout.write(body)


def _cmd_integrate(args) -> int:
    _positive("--tol", args.tol)
    f = _load_fn(args.fn)
    box = _box_for(args, f)
    res = hk_integrate(f, box, args.tol)
    payload = {
        "command": "integrate",
        "fn": args.fn,
        "box": box.to_pairs(),
        "tol": args.tol,
        "value": res.value,
        "error": res.error,
        "cells": res.cells,
    }
    _emit(args, payload, f"value {res.value:.10g}\nerror {res.error:.3g}\ncells {res.cells}\n")
    return 0


def _cmd_norm(args) -> int:
    _positive("--tol", args.tol)
    f = _load_fn(args.fn)
    th = _load_young(args.young)
    box = _box_for(args, f)
    if args.kind == "strong":
        res = luxemburg_norm(f, th, box, tol=args.tol)
    else:
        res = weak_norm(f, th, box, tol=args.tol)
    payload = {
        "command": "norm",
        "kind": args.kind,
        "fn": args.fn,
        "young": args.young,
        "box": box.to_pairs(),
        "value": res.value,
        "bracket": list(res.bracket),
        "modular_at_value": res.modular_at_value,
        "iterations": res.iterations,
        "tolerances": res.tolerances,
    }
    _emit(args, payload, f"{float(f'{res.value:.10g}')!r}\n")
    return 0


def _cmd_young(args) -> int:
    th = _load_young(args.young)
    d2 = Y.is_delta2(th)
    dp = Y.is_delta_prime(th)
    payload = {
        "command": "young",
        "young": args.young,
        "name": th.name,
        "convex": th.convex,
        "delta2": {"holds": d2.holds, "witness": d2.witness},
        "delta_prime": {"holds": dp.holds, "witness": dp.witness},
    }
    text = (
        f"{th.name} ({'convex' if th.convex else 'not convex'})\n"
        f"delta2      {d2.holds}  witness {d2.witness:.6g}\n"
        f"delta_prime {dp.holds}  witness {dp.witness:.6g}\n"
    )
    _emit(args, payload, text)
    return 0


def _cmd_verify(args) -> int:
    _positive("--tol", args.tol)
    # every input is loaded before any computation starts
    try:
        corpus = default_corpus() if args.corpus == "default" else load_corpus(args.corpus)
    except CorpusError as exc:
        raise InputError(str(exc)) from exc
    extra_f = {f"file:{Path(p).stem}": _load_fn(p) for p in args.fn}
    extra_y = {f"file:{Path(p).stem}": _load_young(p) for p in args.young}
    try:
        corpus = corpus.with_extra(extra_f, extra_y)
        if args.tol is not None:
            corpus = replace(corpus, int_tol=args.tol)
        report = run_suites(corpus, args.suite)
    except (CorpusError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    body = report.to_json() if args.format == "json" else report.to_text()
    if args.out:
        try:
            Path(args.out).write_text(body)
        except OSError as exc:
            raise InputError(f"--out {args.out}: {exc}") from exc
    else:
        sys.stdout.write(body)
    return 0 if report.passed else 1


COMMANDS = {"integrate": _cmd_integrate, "norm": _cmd_norm, "young": _cmd_young, "verify": _cmd_verify}


def run(argv: Sequence[str] | None = None) -> int:
    """Run one command; returns the exit code instead of exiting."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
        return COMMANDS[args.command](args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
