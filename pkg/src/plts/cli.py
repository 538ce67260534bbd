"""Command-line front end: ``plts <subcommand> ...``.

Exit codes: 0 success / realized / PASS, 1 FAIL / bounds exhausted,
2 usage or input errors, 3 solver or environment errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Sequence

from plts.architecture import (
    Architecture, ArchitectureError, color_extend, find_information_fork,
)
from plts.automata.nba import AutomatonError
from plts.colored import ColoringError, Lasso, ag_counterexample, guarantee_bound
from plts.formula import (
    TRUE, Formula, FormulaSyntaxError, NegationError, RewriteError, colorize, parse, to_text,
)
from plts.formula.ast import is_prompt_ltl
from plts.machine import MachineError, TransitionSystem, product_of
from plts.synth import (
    EncodingError, InternalError, SolverError, Status, SynthesisResult, synth_async_ag,
    synth_sync_pltl, synth_sync_prompt,
)
from plts.synth.drivers import fresh_name
from plts.synth.smt import DEFAULT_SOLVER

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ENV = 0, 1, 2, 3

# field name -> accepted JSON types of a report
REPORT_SCHEMA: dict[str, tuple[type, ...]] = {
    "status": (str,),
    "bounds": (list,),
    "realized_bound": (int, type(None)),
    "witness": (dict, type(None)),
    "timings": (dict,),
}


class UsageError(Exception):
    pass


def validate_report(report: dict) -> list[str]:
    """Schema violations of a ``--json`` report (empty when it conforms)."""
    problems = []
    for name, types in REPORT_SCHEMA.items():
        if name not in report:
            problems.append(f"missing field {name!r}")
        elif not isinstance(report[name], types) or isinstance(report[name], bool):
            problems.append(f"field {name!r} has type {type(report[name]).__name__}")
    for entry in report.get("bounds", []) if isinstance(report.get("bounds"), list) else []:
        if not isinstance(entry, dict) or not {"bounds", "answer"} <= entry.keys():
            problems.append(f"malformed bounds entry {entry!r}")
    timings = report.get("timings")
    if isinstance(timings, dict) and not all(isinstance(v, (int, float)) for v in timings.values()):
        problems.append("timings must be numbers")
    return problems


def _report(status: str, bounds=(), realized_bound=None, witness=None, timings=None, **extra) -> dict:
    doc = {"status": status, "bounds": list(bounds), "realized_bound": realized_bound,
           "witness": witness, "timings": dict(timings or {})}
    doc.update(extra)
    return doc


def _letters(seq) -> list[list[str]]:
    return [sorted(letter) for letter in seq]


def _witness_doc(lasso: Lasso) -> dict:
    return {"stem": _letters(lasso.stem), "loop": _letters(lasso.loop)}


def _fmt_letter(letter) -> str:
    return "{" + ",".join(sorted(letter)) + "}"


def _fmt_witness(lasso: Lasso) -> str:
    stem = " ".join(map(_fmt_letter, lasso.stem))
    loop = " ".join(map(_fmt_letter, lasso.loop))
    return f"stem: {stem or '(empty)'}\nloop: {loop}"


def _formula(inline: str | None, path: str | None, what: str, required: bool = True) -> Formula | None:
    if inline is not None:
        text = inline
    elif path is not None:
        text = _read(path)
    elif required:
        raise UsageError(f"missing {what} formula")
    else:
        return None
    return parse(text.strip())


class Unavailable(Exception):
    """A file could not be read or written."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise Unavailable(f"cannot read {path}: {exc.strerror}") from None


def _load_json(path: str) -> dict:
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _emit(args, report: dict, lines: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def cmd_parse(args) -> int:
    f = _formula(args.formula, args.file, "input")
    _emit(args, _report("ok", formula=to_text(f)), [to_text(f)])
    return EXIT_OK


def cmd_rewrite(args) -> int:
    f = _formula(args.formula, args.file, "input")
    out = to_text(colorize(f, args.color))
    _emit(args, _report("ok", formula=out), [out])
    return EXIT_OK


def cmd_fork(args) -> int:
    a = Architecture.from_json(_load_json(args.arch))
    if args.color:
        a = color_extend(a, args.color)
    fork = find_information_fork(a)
    text = str(fork) if fork else "weakly ordered"
    fork_doc = None if fork is None else {
        "procs": sorted(fork.procs), "variables": sorted(fork.variables), "p": fork.p, "p2": fork.p2}
    _emit(args, _report("ok", fork=fork_doc), [text])
    return EXIT_OK


def _load_systems(paths: Sequence[str]) -> TransitionSystem:
    systems = [TransitionSystem.from_json(_load_json(p)) for p in paths]
    return product_of(systems)


def cmd_mc(args) -> int:
    start = time.perf_counter()
    ts = _load_systems(args.ts)
    assumption = _formula(args.assume, args.assume_file, "assumption", required=False) or TRUE
    guarantee = _formula(args.spec, args.spec_file, "specification")
    r, rp = _colors(ts)
    cex = ag_counterexample(ts, assumption, guarantee, r, rp)
    timings = {"check": time.perf_counter() - start}
    if cex is not None:
        # the witness letters carry the two color propositions as well
        _emit(args, _report("FAIL", witness=_witness_doc(cex), timings=timings,
                            colors=[r, rp]),
              ["FAIL", f"witness (colors {r}, {rp}):", _fmt_witness(cex)])
        return EXIT_FAIL
    lines, bound = ["PASS"], None
    if args.bound is not None:
        bound = guarantee_bound(ts, assumption, guarantee, args.bound, args.max_bound)
        timings["bound"] = time.perf_counter() - start - timings["check"]
        lines.append(f"guarantee bound at assumption bound {args.bound}: "
                     f"{bound if bound is not None else f'> {args.max_bound}'}")
    _emit(args, _report("PASS", realized_bound=bound, timings=timings), lines)
    return EXIT_OK


def _colors(ts: TransitionSystem) -> tuple[str, str]:
    used = set(ts.inputs) | set(ts.outputs)
    r = fresh_name("r", used)
    return r, fresh_name("rp", used | {r})


def _write_systems(res: SynthesisResult, out: str | None) -> list[str]:
    if out is None:
        return []
    folder = Path(out)
    try:
        folder.mkdir(parents=True, exist_ok=True)
        paths = []
        for p, ts in res.systems.items():
            path = folder / f"{p}.json"
            ts.dump(path)
            paths.append(str(path))
    except OSError as exc:
        raise Unavailable(f"cannot write to {out}: {exc.strerror}") from None
    return paths


def _synth_report(res: SynthesisResult, written: list[str], **extra) -> tuple[dict, list[str]]:
    tried = [{"bounds": a.bounds, "answer": a.answer, "iterations": a.iterations,
              "grounded": a.grounded} for a in res.attempts]
    timings = {"total": res.seconds, **{f"bounds {a.bounds}": a.seconds for a in res.attempts}}
    report = _report(res.status.value, tried, res.realized_bound, None, timings,
                     family=None if res.bounds is None else dict(res.bounds.items),
                     valuation=res.valuation, files=written, notes=list(res.notes), **extra)
    lines = [f"status: {res.status.value}"]
    lines += [f"bounds {a.bounds}: {a.answer}" for a in res.attempts]
    if res.bounds is not None:
        lines.append(f"realized at {res.bounds}")
    if res.realized_bound is not None:
        lines.append(f"realized bound: {res.realized_bound}")
    if res.valuation:
        lines.append("valuation: " + ", ".join(f"{x}={v}" for x, v in res.valuation.items()))
    lines += [f"wrote {p}" for p in written]
    lines += [f"note: {n}" for n in res.notes]
    return report, lines


def _finish_synth(args, res: SynthesisResult, extra_lines=(), **extra) -> int:
    if args.emit_smt and res.script:
        try:
            Path(args.emit_smt).write_text(res.script, encoding="utf-8")
        except OSError as exc:
            raise Unavailable(f"cannot write {args.emit_smt}: {exc.strerror}") from None
    written = _write_systems(res, args.out) if res.realized else []
    report, lines = _synth_report(res, written, **extra)
    _emit(args, report, [*lines, *extra_lines])
    return {Status.REALIZED: EXIT_OK, Status.EXHAUSTED: EXIT_FAIL}.get(res.status, EXIT_ENV)


def cmd_synth_sync(args) -> int:
    a = Architecture.from_json(_load_json(args.arch))
    f = _formula(args.spec, args.spec_file, "specification")
    run = synth_sync_prompt if is_prompt_ltl(f) else synth_sync_pltl
    res = run(a, f, args.cap, solver=args.solver, cap_annotation=not args.no_annotation_cap,
              timeout=args.timeout)
    return _finish_synth(args, res)


def cmd_synth_async(args) -> int:
    a = Architecture.from_json(_load_json(args.arch))
    assumption = _formula(args.assume, args.assume_file, "assumption")
    guarantee = _formula(args.spec, args.spec_file, "guarantee")
    res = synth_async_ag(a, assumption, guarantee, args.cap, solver=args.solver,
                         cap_annotation=not args.no_annotation_cap, timeout=args.timeout,
                         cap_each=args.cap_each)
    if not res.realized or args.bound == 0:
        return _finish_synth(args, res)
    # report the least guarantee bound for the requested assumption bound
    ts = product_of([res.systems[p] for p in res.systems])
    start = time.perf_counter()
    l = guarantee_bound(ts, assumption, guarantee, args.bound, args.max_bound)
    shown = l if l is not None else f"> {args.max_bound}"
    res = SynthesisResult(res.status, res.systems, res.bounds, l, res.valuation, res.attempts,
                          res.notes, res.seconds + time.perf_counter() - start, res.script)
    return _finish_synth(args, res, [f"guarantee bound at assumption bound {args.bound}: {shown}"],
                         assumption_bound=args.bound)


def _add_formula(p: argparse.ArgumentParser, name: str, help_text: str) -> None:
    p.add_argument(f"--{name}", help=f"{help_text} (inline; wins over the file)")
    p.add_argument(f"--{name}-file", help=f"read the {help_text} from a file")


def _add_synth_common(p: argparse.ArgumentParser, default_cap: int) -> None:
    p.add_argument("--arch", required=True, help="architecture JSON file")
    p.add_argument("--cap", type=_positive, default=default_cap,
                   help="cap on the sum of process bounds (default %(default)s)")
    p.add_argument("--solver", default=DEFAULT_SOLVER,
                   help="SMT-LIB solver command reading standard input (default %(default)r)")
    p.add_argument("--timeout", type=float, default=None, help="per-call solver timeout in seconds")
    p.add_argument("--out", help="directory for per-process transition system files")
    p.add_argument("--emit-smt", metavar="PATH", help="write the last solver script to PATH")
    p.add_argument("--no-annotation-cap", action="store_true",
                   help="do not bound the annotation counters")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _natural(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plts", description="Prompt temporal logic synthesis and model checking.")
    parser.add_argument("--json", action="store_true", help="print a machine-readable report")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("parse", help="echo a formula in normalized form")
    p.add_argument("formula", nargs="?")
    p.add_argument("--file")
    p.set_defaults(run=cmd_parse)

    p = sub.add_parser("rewrite", help="print the alternating-color rewriting of a formula")
    p.add_argument("formula", nargs="?")
    p.add_argument("--file")
    p.add_argument("--color", required=True, help="fresh color proposition")
    p.set_defaults(run=cmd_rewrite)

    p = sub.add_parser("fork", help="find an information fork in an architecture")
    p.add_argument("arch")
    p.add_argument("--color", help="check the color-extended architecture instead")
    p.set_defaults(run=cmd_fork)

    p = sub.add_parser("mc", help="assume-guarantee model checking of transition systems")
    p.add_argument("--ts", action="append", required=True,
                   help="transition system JSON file; repeat to check a product")
    _add_formula(p, "assume", "assumption")
    _add_formula(p, "spec", "guarantee")
    p.add_argument("--bound", type=_natural, help="on PASS, report the least guarantee bound "
                   "for this assumption bound")
    p.add_argument("--max-bound", type=_natural, default=16,
                   help="largest guarantee bound to try (default %(default)s)")
    p.set_defaults(run=cmd_mc)

    p = sub.add_parser("synth", help="bounded synthesis")
    mode = p.add_subparsers(dest="mode", required=True, metavar="MODE")
    s = mode.add_parser("sync", help="synchronous PROMPT-LTL or PLTL synthesis")
    _add_synth_common(s, 6)
    _add_formula(s, "spec", "specification")
    s.set_defaults(run=cmd_synth_sync)
    s = mode.add_parser("async", help="asynchronous assume-guarantee synthesis")
    _add_synth_common(s, 4)
    _add_formula(s, "assume", "assumption")
    _add_formula(s, "spec", "guarantee")
    s.add_argument("--cap-each", type=_positive, help="cap on every single process bound")
    s.add_argument("--bound", type=_natural, default=1,
                   help="assumption bound for the reported guarantee bound; 0 skips it "
                        "(default %(default)s)")
    s.add_argument("--max-bound", type=_natural, default=16,
                   help="largest guarantee bound to try (default %(default)s)")
    s.set_defaults(run=cmd_synth_async)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(line_buffering=True, encoding="utf-8")
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.run(args)
    except (UsageError, FormulaSyntaxError, NegationError, RewriteError, ArchitectureError,
            MachineError, ColoringError, AutomatonError, EncodingError) as exc:
        print(f"plts: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Unavailable, SolverError) as exc:
        print(f"plts: error: {exc}", file=sys.stderr)
        return EXIT_ENV
    except InternalError as exc:
        print(f"plts: internal error: {exc}", file=sys.stderr)
        return EXIT_ENV


if __name__ == "__main__":
    sys.exit(main())
