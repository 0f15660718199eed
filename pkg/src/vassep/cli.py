"""Command-line entry point.

Every command prints one JSON envelope ``{schema, verdict, witness, budgets,
diagnostics}`` on stdout.  Exit codes 0-2 carry the verdict of the command;
3 means the input could not be read, 4 any other error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .checker import LineSpec, check_thm_advanced, check_thm_simple
from .constructions import modify_vass, named
from .core import Configuration, Run, Vass, replay
from .errors import BudgetExhausted, ParseError, RunExists, VassError
from .explore import Reach, SearchBounds, shortest_run
from .numtheory import LinearFunction, bezout_nonneg, zero_run_path
from .semilinear import SemilinearConfigSet
from .separator import DualSchedule, Outcome, decide_dual, minimal_separators
from .wqo import find_embedding, pump_run

SCHEMA = "vassep/1"
EXIT_PARSE = 3
EXIT_ERROR = 4


def parse_config(text: str) -> Configuration:
    """Accept ``q 1 2`` as well as ``q(1,2)``."""
    m = re.fullmatch(r"\s*([^\s(]+)\s*\(([^)]*)\)\s*", text)
    if m:
        text = m.group(1) + " " + m.group(2).replace(",", " ")
    return Configuration.parse(text)


def parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in re.split(r"[,\s]+", text.strip()) if x)
    except ValueError as exc:
        raise ParseError(f"expected integers, got {text!r}") from exc


def run_json(run: Run) -> dict:
    return {"source": str(run.source), "transitions": list(run.transitions), "target": str(run.target),
            "length": len(run)}


def envelope(verdict: str, witness=None, budgets=None, diagnostics=None) -> dict:
    return {"schema": SCHEMA, "verdict": verdict, "witness": witness, "budgets": budgets or {},
            "diagnostics": diagnostics or {}}


def emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def load_vass(path: str) -> Vass:
    try:
        return Vass.from_text(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _bounds(args) -> SearchBounds:
    return SearchBounds(args.norm, args.length, args.nodes)


def _endpoints(vass: Vass, args) -> tuple[Configuration, Configuration]:
    s, t = parse_config(args.source), parse_config(args.target)
    try:
        vass.check_config(s)
        vass.check_config(t)
    except (VassError, ValueError) as exc:
        raise ParseError(str(exc)) from exc
    return s, t


# commands


def cmd_reach(args) -> int:
    vass = load_vass(args.vass)
    s, t = _endpoints(vass, args)
    bounds = _bounds(args)
    verdict = shortest_run(vass, s, t, bounds)
    witness = run_json(verdict.run) if verdict.run is not None else None
    emit(envelope(verdict.kind.value, witness, bounds.to_json(), {"explored": verdict.explored}))
    return {Reach.REACHABLE: 0, Reach.EXHAUSTED: 1, Reach.UNKNOWN: 2}[verdict.kind]


def cmd_decide(args) -> int:
    vass = load_vass(args.vass)
    s, t = _endpoints(vass, args)
    schedule = DualSchedule(args.max_run_length, args.max_size, args.box, args.time_ms)
    verdict = decide_dual(vass, s, t, schedule)
    witness = None
    if verdict.kind is Outcome.RUN_FOUND:
        witness = run_json(verdict.run)
    elif verdict.kind is Outcome.SEPARATOR_FOUND:
        text = verdict.separator.to_text()
        witness = {"separator": text, "size": verdict.separator.size}
        if args.separator_out:
            Path(args.separator_out).write_text(text)
    emit(envelope(verdict.kind.value, witness, schedule.to_json(), verdict.diagnostics))
    return {Outcome.RUN_FOUND: 0, Outcome.SEPARATOR_FOUND: 1, Outcome.UNDECIDED: 2}[verdict.kind]


def cmd_separators(args) -> int:
    vass = load_vass(args.vass)
    s, t = _endpoints(vass, args)
    budgets = {"size": args.budget, "box": args.box}
    try:
        found = minimal_separators(vass, s, t, args.budget, args.box)
    except RunExists as exc:
        emit(envelope("RunFound", run_json(exc.run), budgets))
        return 0
    except BudgetExhausted as exc:
        emit(envelope("Undecided", None, budgets, {"reason": str(exc)}))
        return 2
    witness = [{"size": sep.size, "separator": sep.to_text()} for sep in found]
    emit(envelope("SeparatorFound", witness, budgets, {"count": len(found)}))
    return 1


def cmd_gen(args) -> int:
    if args.kind == "modify":
        if not (args.vass and args.state and args.lin1 and args.lin2):
            raise ParseError("gen modify needs --vass, --state, --lin1 and --lin2")
        vass = load_vass(args.vass)
        lin1, lin2 = LinearFunction(parse_ints(args.lin1)), LinearFunction(parse_ints(args.lin2))
        out = modify_vass(vass, args.state, lin1, lin2)
        text, sidecar = out.to_text(), {"q": args.state, "lin1": list(lin1.coeffs), "lin2": list(lin2.coeffs)}
    else:
        cons = named(args.kind, n=args.n, fractions=args.fractions, bound=args.bound)
        text, sidecar = cons.vass.to_text(), cons.sidecar()
    if args.output:
        Path(args.output).write_text(text)
        Path(args.output + ".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
        emit(envelope("Generated", {"path": args.output}, {}, sidecar))
    else:
        sys.stdout.write(text)
    return 0


def _problem(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read problem {path}: {exc}") from exc


def _problem_bounds(p: dict) -> SearchBounds:
    b = p.get("bounds", {})
    return SearchBounds(int(b.get("norm", 20)), b.get("length"), b.get("nodes"))


def cmd_check_thm1(args) -> int:
    vass = load_vass(args.vass)
    p = _problem(args.problem)
    try:
        s, t = parse_config(p["s"]), parse_config(p["t"])
        line = LineSpec(tuple(p["a"]), tuple(p["delta"]), tuple(p.get("pair", (0, 1))))
        q = p["q"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"problem descriptor is missing {exc}") from exc
    cert = None
    if p.get("certificate"):
        cert = SemilinearConfigSet.from_text(Path(p["certificate"]).read_text())
    report = check_thm_simple(vass, s, t, q, line, _problem_bounds(p), tuple(p.get("samples_n", (0, 1, 2, 3))),
                              tuple(p.get("samples_m", (1, 2))), cert)
    emit(envelope("Report", report.to_json()["conditions"], report.bounds))
    return 0


def cmd_check_thm2(args) -> int:
    vass = load_vass(args.vass)
    p = _problem(args.problem)
    try:
        s, t = parse_config(p["s"]), parse_config(p["t"])
        lin1, lin2 = LinearFunction(tuple(p["lin1"])), LinearFunction(tuple(p["lin2"]))
        ratio = Fraction(str(p["ratio"]))
        q = p["q"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad problem descriptor: {exc}") from exc
    us = p.get("u_samples")
    report = check_thm_advanced(vass, s, t, q, lin1, lin2, ratio, _problem_bounds(p), us)
    emit(envelope("Report", report.to_json()["conditions"], report.bounds))
    return 0


def cmd_pump(args) -> int:
    vass = load_vass(args.vass)
    source = parse_config(args.source)
    rho = replay(vass, source, parse_ints(args.rho) if args.rho.strip() else ())
    rho2 = replay(vass, source, parse_ints(args.rho2))
    emb = find_embedding(rho, rho2)
    if emb is None:
        emit(envelope("NotDominated", None, {}, {}))
        return 1
    pumped = pump_run(vass, rho, rho2, emb, args.n)
    emit(envelope("Pumped", run_json(pumped), {}, {"embedding": list(emb.indices)}))
    return 0


def cmd_bezout(args) -> int:
    sol = bezout_nonneg(args.coeffs, args.target)
    if sol is None:
        emit(envelope("NoSolution", None, {}, {"coeffs": args.coeffs, "target": args.target}))
        return 1
    assert sum(a * b for a, b in zip(args.coeffs, sol)) == args.target
    emit(envelope("Solution", sol, {}, {"coeffs": args.coeffs, "target": args.target}))
    return 0


def cmd_zero_path(args) -> int:
    lin = LinearFunction(parse_ints(args.lin))
    path = zero_run_path(lin, parse_ints(args.u), parse_ints(args.v))
    if path is None:
        emit(envelope("NoPath", None, {}, {}))
        return 1
    emit(envelope("Path", {"points": [list(p) for p in path.points], "steps": [list(d) for d in path.steps]},
                  {}, {"length": len(path)}))
    return 0


class _Parser(argparse.ArgumentParser):
    # usage errors must not collide with verdict exit codes
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="vassep", description=__doc__.splitlines()[0])
    ap.add_argument("--deterministic", action="store_true",
                    help="sequential scheduling (always the case in this implementation)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def endpoints(p):
        p.add_argument("vass")
        p.add_argument("--source", "-s", required=True)
        p.add_argument("--target", "-t", required=True)

    p = sub.add_parser("reach", help="bounded shortest run")
    endpoints(p)
    p.add_argument("--norm", type=int, default=20)
    p.add_argument("--length", type=int)
    p.add_argument("--nodes", type=int)
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("decide", help="alternate run and separator search")
    endpoints(p)
    p.add_argument("--max-run-length", type=int, default=20)
    p.add_argument("--max-size", type=int, default=6)
    p.add_argument("--box", type=int, default=12)
    p.add_argument("--time-ms", type=int)
    p.add_argument("--separator-out")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("separators", help="all separators of least size")
    endpoints(p)
    p.add_argument("--budget", type=int, default=6)
    p.add_argument("--box", type=int)
    p.set_defaults(func=cmd_separators)

    p = sub.add_parser("gen", help="generate a VASS")
    p.add_argument("kind", choices=["un", "vn", "toy-slope", "ratio-toy", "gadget-b", "zero-test", "modify"])
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--fractions", nargs="+")
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--vass")
    p.add_argument("--state")
    p.add_argument("--lin1")
    p.add_argument("--lin2")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    for name, func in (("check-thm1", cmd_check_thm1), ("check-thm2", cmd_check_thm2)):
        p = sub.add_parser(name, help="check theorem hypotheses on a problem descriptor")
        p.add_argument("vass")
        p.add_argument("problem")
        p.set_defaults(func=func)

    p = sub.add_parser("pump", help="pump a dominated pair of runs")
    p.add_argument("vass")
    p.add_argument("--source", "-s", required=True)
    p.add_argument("--rho", required=True, help="transition indices of the smaller run")
    p.add_argument("--rho2", required=True, help="transition indices of the larger run")
    p.add_argument("--n", type=int, default=2)
    p.set_defaults(func=cmd_pump)

    p = sub.add_parser("bezout", help="nonnegative integer combination")
    p.add_argument("coeffs", type=int, nargs="+")
    p.add_argument("--target", type=int, required=True)
    p.set_defaults(func=cmd_bezout)

    p = sub.add_parser("zero-path", help="path of zero steps between two vectors")
    p.add_argument("--lin", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.set_defaults(func=cmd_zero_path)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"vassep: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (VassError, ValueError) as exc:
        print(f"vassep: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
