"""Command-line front end.

``frobkit run FILE|-`` executes a ``.frk`` program and ``frobkit verify SUITE``
runs a verification suite.  Every flag can also be set through an environment
variable, e.g. ``FROBKIT_BUDGET=5000`` or ``FROBKIT_JSON=1``; command-line
flags win over the environment.

Exit codes: 0 success, 1 mathematical negative (an ``--expect`` mismatch or
a suite violation), 2 usage, parse or semantic error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from importlib import resources

from . import __version__
from .algebra import AlgebraMap, PresentedAlgebra
from .dsl import SUITE_NAMES, Command, MapDecl, RingDecl, format_program, format_statement, parse_source
from .errors import BudgetExceeded, FrobkitError, ParseError
from .field_poly import order_from_name
from .frobenius import DEFAULT_E_MAX, bracket_power, certify_f_finite, purity_witness, radu_andre_pushout
from .groebner import DEFAULT_BUDGET, Ideal, groebner_basis, module_finiteness
from .lemma_suite import run_suite

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
ENV_PREFIX = "FROBKIT_"
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off", ""}


@dataclass
class Flags:
    json: bool = False
    order: str = "grevlex"
    budget: int = DEFAULT_BUDGET
    degree_bound: int | None = None
    seed: int = 0
    e_max: int = DEFAULT_E_MAX
    expect: str | None = None
    timings: bool = False


_FLAG_TYPES = {
    "json": "bool",
    "order": ("lex", "grevlex"),
    "budget": "int",
    "degree_bound": "int",
    "seed": "int",
    "e_max": "int",
    "expect": ("finite", "infinite", "pure"),
    "timings": "bool",
}


class UsageError(FrobkitError):
    pass


def flags_from_env(environ=None) -> dict:
    """Flag defaults taken from ``FROBKIT_*`` variables."""
    environ = os.environ if environ is None else environ
    out = {}
    for key, kind in _FLAG_TYPES.items():
        var = ENV_PREFIX + key.upper()
        if var not in environ:
            continue
        raw = environ[var].strip()
        if kind == "bool":
            if raw.lower() not in _TRUE | _FALSE:
                raise UsageError(f"{var} must be a boolean, got {raw!r}")
            out[key] = raw.lower() in _TRUE
        elif kind == "int":
            try:
                out[key] = int(raw)
            except ValueError:
                raise UsageError(f"{var} must be an integer, got {raw!r}") from None
        else:
            if raw not in kind:
                raise UsageError(f"{var} must be one of {', '.join(kind)}, got {raw!r}")
            out[key] = raw
    return out


# -- reports -----------------------------------------------------------------------


def _diag(kind, message, span=None, severity="error", expected=()):
    d = {"severity": severity, "kind": kind, "message": message}
    if span is not None:
        d["line"], d["column"] = span.line, span.column
    if expected:
        d["expected"] = list(expected)
    return d


def _report(command, inputs, outcome, certificate=None, diagnostics=(), timings=None, result=None):
    return {
        "command": command,
        "inputs": inputs,
        "outcome": outcome,
        "certificate": certificate,
        "diagnostics": list(diagnostics),
        "timings_ms": timings or {},
        "result": result,
    }


def certificate_json(cert, order) -> dict:
    phi = cert.map
    S = phi.target
    expansions = []
    for (i, k), combo in sorted(cert.expansions.items()):
        expansions.append(
            {
                "variable": S.names[i],
                "generator": k,
                "combination": [
                    {"generator": l, "coefficient": c.to_str(order)} for l, c in sorted(combo.items())
                ],
            }
        )
    return {
        "generators": [g.to_str(order) for g in cert.generators],
        "expansions": expansions,
        "source": cert.verdict_source,
    }


def _map_inputs(f: AlgebraMap, order) -> dict:
    return {
        "source": f.source.to_str(order),
        "target": f.target.to_str(order),
        "images": {n: img.to_str(order) for n, img in zip(f.source.names, f.images)},
    }


class Executor:
    def __init__(self, program, flags: Flags):
        self.program = program
        self.flags = flags
        self.order = order_from_name(flags.order)
        self.rings: dict = {}
        self.maps: dict = {}
        self.failed: dict = {}  # name -> (diagnostic text, exit code)

    def run(self):
        reports, codes = [], []
        for stmt in self.program.statements:
            start = time.perf_counter()
            if isinstance(stmt, RingDecl):
                rep, code = self._ring(stmt)
            elif isinstance(stmt, MapDecl):
                rep, code = self._map(stmt)
            else:
                rep, code = self._command(stmt)
            if rep is not None:
                if self.flags.timings:
                    rep["timings_ms"] = {"total": round((time.perf_counter() - start) * 1000, 3)}
                reports.append(rep)
            codes.append(code)
        return _combine(codes), reports

    # declarations produce a report only when they fail
    def _ring(self, d: RingDecl):
        try:
            self.rings[d.name] = PresentedAlgebra(d.ctx, d.relations, "base", self.flags.budget)
            return None, EXIT_OK
        except BudgetExceeded as exc:
            return self._decl_failure("ring", d, "BudgetExceeded", exc, EXIT_BUDGET), EXIT_BUDGET

    def _map(self, d: MapDecl):
        for dep in (d.source, d.target):
            if dep in self.failed:
                code = self.failed[dep][1]
                return self._decl_failure("map", d, "DependencyFailed", f"ring {dep} failed", code), code
        try:
            self.maps[d.name] = AlgebraMap(
                self.rings[d.source], self.rings[d.target], [img for _, img in d.images]
            )
            return None, EXIT_OK
        except BudgetExceeded as exc:
            return self._decl_failure("map", d, "BudgetExceeded", exc, EXIT_BUDGET), EXIT_BUDGET
        except FrobkitError as exc:
            return self._decl_failure("map", d, type(exc).__name__, exc, EXIT_USAGE), EXIT_USAGE

    def _decl_failure(self, command, d, kind, exc, code):
        # dependents are skipped with the same exit code
        self.failed[d.name] = (f"{kind}: {exc}", code)
        return _report(
            command,
            {"name": d.name},
            "error",
            diagnostics=[_diag(kind, str(exc), d.span)],
        )

    def _command(self, c: Command):
        handler = getattr(self, "_cmd_" + c.name)
        if c.arg in self.failed:
            text, code = self.failed[c.arg]
            rep = _report(
                c.name,
                {"arg": c.arg},
                "skipped",
                diagnostics=[_diag("DependencyFailed", f"{c.arg} failed: {text}", c.span)],
            )
            return rep, code
        try:
            return handler(c)
        except BudgetExceeded as exc:
            return _report(c.name, {"arg": c.arg}, "budget-exceeded",
                           diagnostics=[_diag("BudgetExceeded", str(exc), c.span)]), EXIT_BUDGET
        except FrobkitError as exc:
            return _report(c.name, {"arg": c.arg}, "error",
                           diagnostics=[_diag(type(exc).__name__, str(exc), c.span)]), EXIT_USAGE

    def _e(self, c):
        return c.option("e", 1)

    def _expectation(self, outcome, kinds):
        want = self.flags.expect
        if want is None or want not in kinds:
            return EXIT_OK
        return EXIT_OK if outcome == want else EXIT_NEGATIVE

    def _cmd_pushout(self, c):
        f = self.maps[c.arg]
        e = self._e(c)
        pd = radu_andre_pushout(f, e, self.flags.e_max)
        P = pd.pushout
        inputs = {"map": c.arg, "e": e, **_map_inputs(f, self.order)}
        result = {
            "pushout": P.to_str(self.order),
            "variables": list(P.names),
            "relations": [r.to_str(self.order) for r in P.relations.generators],
            "phi": {n: img.to_str(self.order) for n, img in zip(P.names, pd.phi.images)},
        }
        return _report("pushout", inputs, "ok", result=result), EXIT_OK

    def _cmd_ffinite(self, c):
        f = self.maps[c.arg]
        e = self._e(c)
        v = certify_f_finite(f, e, self.flags.budget, self.flags.e_max)
        return self._verdict("ffinite", c, f, v, {"e": e})

    def _cmd_finite(self, c):
        f = self.maps[c.arg]
        v = module_finiteness(f, self.flags.budget)
        return self._verdict("finite", c, f, v, {})

    def _verdict(self, name, c, f, v, extra):
        inputs = {"map": c.arg, **extra, **_map_inputs(f, self.order)}
        cert = certificate_json(v.certificate, self.order) if v.finite else None
        diags = []
        if not v.finite:
            diags.append(_diag("Infinite", f"no pure power of {v.witness_variable} leads", c.span, "note"))
        result = {"witness_variable": v.witness_variable} if not v.finite else None
        code = self._expectation(v.outcome, ("finite", "infinite"))
        if code:
            diags.append(_diag("ExpectationFailed", f"expected {self.flags.expect}, got {v.outcome}", c.span))
        return _report(name, inputs, v.outcome, cert, diags, result=result), code

    def _cmd_purity(self, c):
        f = self.maps[c.arg]
        e = self._e(c)
        bound = c.option("bound", self.flags.degree_bound)
        if bound is None:
            bound = 2 * f.source.p
        pd = radu_andre_pushout(f, e, self.flags.e_max)
        out = purity_witness(pd, bound, self.flags.budget)
        inputs = {"map": c.arg, "e": e, "degree_bound": bound, **_map_inputs(f, self.order)}
        P = pd.pushout
        result = {
            "retraction": {
                pd.phi.target.ctx.monomial(m).to_str(self.order): r.to_str(self.order)
                for m, r in sorted(out.retraction.items())
            },
            "basis": [b.to_str(self.order) for b in out.basis],
            "pushout": P.to_str(self.order),
            "reason": out.reason,
        }
        diags = []
        code = self._expectation(out.outcome, ("pure",))
        if code:
            diags.append(_diag("ExpectationFailed", f"expected pure, got {out.outcome}", c.span))
        return _report("purity", inputs, out.outcome, None, diags, result=result), code

    def _cmd_bracket(self, c):
        R = self.rings[c.arg]
        e = self._e(c)
        gens = list(c.polys) if c.polys is not None else list(R.relations.generators)
        I = bracket_power(Ideal(R.ctx, gens), e)
        inputs = {"ring": c.arg, "e": e, "ideal": [g.to_str(self.order) for g in gens]}
        result = {"generators": [g.to_str(self.order) for g in I.generators]}
        return _report("bracket", inputs, "ok", result=result), EXIT_OK

    def _cmd_groebner(self, c):
        R = self.rings[c.arg]
        order_name = c.option("order", self.flags.order)
        order = order_from_name(order_name)
        G = groebner_basis(R.relations, order, self.flags.budget)
        inputs = {"ring": c.arg, "order": order_name,
                  "relations": [g.to_str(order) for g in R.relations.generators]}
        result = {"basis": [g.to_str(order) for g in G.elements]}
        return _report("groebner", inputs, "ok", result=result), EXIT_OK

    def _cmd_verify(self, c):
        seed = c.option("seed", self.flags.seed)
        return verify_report(c.arg, seed, self.flags, c.span)


def verify_report(suite, seed, flags: Flags, span=None):
    rep = run_suite(suite, seed, flags.budget)
    outcome = "holds" if rep.passed else "violated"
    diags = [
        _diag("Violation", f"{s.name}: {v}", span)
        for s in rep.scenarios
        for v in s.violations
    ]
    timings = {s.name: round(s.wall_ms, 3) for s in rep.scenarios} if flags.timings else {}
    report = _report(
        "verify",
        {"suite": suite, "seed": seed, "budget": flags.budget},
        outcome,
        None,
        diags,
        timings,
        rep.to_dict(timings=flags.timings),
    )
    return report, (EXIT_OK if rep.passed else EXIT_NEGATIVE)


def _combine(codes) -> int:
    for code in (EXIT_USAGE, EXIT_BUDGET, EXIT_NEGATIVE):
        if code in codes:
            return code
    return EXIT_OK


# -- text rendering ----------------------------------------------------------------


def render_text(rep) -> str:
    cmd = rep["command"]
    inputs = rep["inputs"]
    head = " ".join([cmd] + [f"{k}={v}" for k, v in inputs.items() if not isinstance(v, (dict, list))])
    lines = [f"{head}: {rep['outcome']}"]
    cert = rep["certificate"]
    if cert is not None:
        lines.append("  generators: " + ", ".join(cert["generators"]))
    res = rep.get("result") or {}
    if cmd == "pushout":
        lines.append("  pushout: " + res["pushout"])
        lines.append("  phi: " + ", ".join(f"{k} -> {v}" for k, v in res["phi"].items()))
    elif cmd in ("bracket",):
        lines.append("  generators: " + ", ".join(res["generators"]))
    elif cmd == "groebner":
        lines.append("  basis: " + ", ".join(res["basis"]))
    elif cmd == "purity":
        if res.get("basis"):
            lines.append("  basis: " + ", ".join(res["basis"]))
        if res.get("reason"):
            lines.append("  reason: " + res["reason"])
    elif cmd == "verify":
        for s in res["scenarios"]:
            status = "holds" if s["holds"] else "VIOLATED"
            lines.append(f"  {s['name']}: {status} ({s['instances']} instances, {s['skipped']} skipped)")
    for d in rep["diagnostics"]:
        where = f"{d['line']}:{d['column']}: " if "line" in d else ""
        lines.append(f"  {d['severity']}: {where}{d['kind']}: {d['message']}")
    if rep["timings_ms"]:
        lines.append("  timings_ms: " + ", ".join(f"{k}={v}" for k, v in rep["timings_ms"].items()))
    return "\n".join(lines)


def report_schema() -> dict:
    """The JSON schema every ``--json`` output conforms to."""
    return json.loads(resources.files(__package__).joinpath("report_schema.json").read_text("utf-8"))


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=None, help="emit JSON reports")
    common.add_argument("--order", choices=("lex", "grevlex"), default=None)
    common.add_argument("--budget", type=int, default=None, help="S-pair reduction cap")
    common.add_argument("--degree-bound", type=int, default=None, help="purity search bound (default 2p)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--e-max", type=int, default=None, help="largest accepted twist exponent")
    common.add_argument("--expect", choices=("finite", "infinite", "pure"), default=None)
    common.add_argument("--timings", action="store_true", default=None, help="include wall times")

    parser = argparse.ArgumentParser(prog="frobkit", description="Relative Frobenius toolkit over F_p.")
    parser.add_argument("--version", action="version", version=f"frobkit {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)
    run = sub.add_parser("run", parents=[common], help="execute a .frk program")
    run.add_argument("source", help="program file, or - for stdin")
    ver = sub.add_parser("verify", parents=[common], help="run a verification suite")
    ver.add_argument("suite")
    fmt = sub.add_parser("fmt", help="print a program in canonical form")
    fmt.add_argument("source")
    return parser


def _resolve_flags(args) -> Flags:
    values = flags_from_env()
    for key in _FLAG_TYPES:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    flags = Flags(**values)
    if flags.budget < 1:
        raise UsageError("budget must be positive")
    if flags.e_max < 1:
        raise UsageError("e-max must be positive")
    return flags


def _read_source(path) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _parse_failure(exc: ParseError, path, flags, out):
    diag = {
        "severity": "error",
        "kind": getattr(exc, "kind", "ParseError"),
        "message": exc.message,
        "line": exc.line,
        "column": exc.column,
    }
    if exc.expected:
        diag["expected"] = list(exc.expected)
    if flags is not None and flags.json:
        out.write(dump_json([_report("parse", {"source": path}, "error", diagnostics=[diag])]))
    else:
        sys.stderr.write(f"{path}:{exc}\n")
    return EXIT_USAGE


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    flags = None
    try:
        if args.cmd != "fmt":
            flags = _resolve_flags(args)
        if args.cmd == "verify":
            if args.suite not in SUITE_NAMES:
                raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITE_NAMES)}")
            rep, code = verify_report(args.suite, flags.seed, flags)
            out.write(dump_json(rep) if flags.json else render_text(rep) + "\n")
            return code
        text = _read_source(args.source)
        program = parse_source(text)
        if args.cmd == "fmt":
            out.write(format_program(program))
            return EXIT_OK
        code, reports = Executor(program, flags).run()
        if flags.json:
            out.write(dump_json(reports))
        else:
            for rep in reports:
                out.write(render_text(rep) + "\n")
        return code
    except ParseError as exc:
        return _parse_failure(exc, getattr(args, "source", "-"), flags, out)
    except (UsageError, OSError) as exc:
        sys.stderr.write(f"frobkit: {exc}\n")
        return EXIT_USAGE
    except BudgetExceeded as exc:
        sys.stderr.write(f"frobkit: {exc}\n")
        return EXIT_BUDGET


__all__ = ["main", "report_schema", "Executor", "Flags", "flags_from_env", "parse_source", "format_program", "format_statement"]

if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
