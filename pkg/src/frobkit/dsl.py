"""The ``.frk`` program language.

::

    program := stmt*
    stmt    := prime | ring | map | cmd
    prime   := "p" "=" INT ";"
    ring    := "ring" NAME "=" "poly" "(" [NAME ("," NAME)*] ")" ["/" "(" poly ("," poly)* ")"] ";"
    map     := "map" NAME ":" NAME "->" NAME "=" "{" NAME "->" poly ("," NAME "->" poly)* "}" ";"
    cmd     := COMMAND NAME ["(" poly ("," poly)* ")"] (KEY "=" (INT | NAME))* ";"

Parsing is total: it returns a :class:`SourceProgram` or raises
:class:`~frobkit.errors.ParseError` carrying a line, column and expected set.
Names must be declared before use and cannot be redeclared.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidModulus, ParseError
from .field_poly import GREVLEX, Context, check_prime
from .syntax import Token, TokenStream, parse_expr, tokenize

SUITE_NAMES = (
    "all",
    "example_2_3",
    "lemma_2_2",
    "naturality",
    "nilpotent",
    "finite_injective",
    "products",
    "section3_finite",
    "section3",
    "main_theorem_instances",
)

# command -> (kind of positional argument, allowed options, accepts a poly list)
COMMANDS = {
    "pushout": ("map", ("e",), False),
    "ffinite": ("map", ("e",), False),
    "finite": ("map", (), False),
    "purity": ("map", ("e", "bound"), False),
    "bracket": ("ring", ("e",), True),
    "groebner": ("ring", ("order",), False),
    "verify": ("suite", ("seed",), False),
}
_NAME_OPTIONS = {"order": ("lex", "grevlex")}
KEYWORDS = ("p", "ring", "map") + tuple(COMMANDS)


@dataclass(frozen=True)
class Span:
    line: int
    column: int

    @classmethod
    def of(cls, tok: Token) -> "Span":
        return cls(tok.line, tok.column)


@dataclass(frozen=True)
class PrimeDecl:
    value: int
    span: Span = field(compare=False, default=None)


@dataclass(frozen=True)
class RingDecl:
    name: str
    variables: tuple
    relations: tuple
    span: Span = field(compare=False, default=None)
    ctx: Context = field(compare=False, default=None, repr=False)


@dataclass(frozen=True)
class MapDecl:
    name: str
    source: str
    target: str
    images: tuple  # ((source variable, Poly over the target), ...)
    span: Span = field(compare=False, default=None)


@dataclass(frozen=True)
class Command:
    name: str
    arg: str
    polys: tuple | None
    options: tuple  # ((key, int | str), ...)
    span: Span = field(compare=False, default=None)

    def option(self, key, default=None):
        return dict(self.options).get(key, default)


@dataclass
class SourceProgram:
    prime: PrimeDecl | None
    statements: list

    @property
    def p(self) -> int | None:
        return self.prime.value if self.prime else None

    @property
    def rings(self) -> dict:
        return {s.name: s for s in self.statements if isinstance(s, RingDecl)}

    @property
    def maps(self) -> dict:
        return {s.name: s for s in self.statements if isinstance(s, MapDecl)}

    @property
    def commands(self) -> list:
        return [s for s in self.statements if isinstance(s, Command)]

    def __eq__(self, other):
        if not isinstance(other, SourceProgram):
            return NotImplemented
        return self.prime == other.prime and self.statements == other.statements


class _Parser:
    def __init__(self, text):
        self.ts = TokenStream(tokenize(text))
        self.prime: PrimeDecl | None = None
        self.ctx_p: int | None = None
        self.rings: dict = {}
        self.maps: dict = {}
        self.statements: list = []

    def error_at(self, tok, message, expected=()):
        return ParseError(message, tok.line, tok.column, expected)

    def run(self) -> SourceProgram:
        ts = self.ts
        while ts.peek.kind != "eof":
            tok = ts.peek
            if tok.kind != "name" or tok.text not in KEYWORDS:
                raise self.error_at(tok, f"found {tok.text!r}", [repr(k) for k in KEYWORDS])
            if tok.text == "p":
                self.parse_prime()
                continue
            if self.prime is None:
                raise self.error_at(tok, "the prime must be declared first", ["'p'"])
            if tok.text == "ring":
                self.parse_ring()
            elif tok.text == "map":
                self.parse_map()
            else:
                self.parse_command()
        return SourceProgram(self.prime, self.statements)

    def declare(self, tok):
        if tok.text in self.rings or tok.text in self.maps:
            raise self.error_at(tok, f"{tok.text!r} is already declared")
        if tok.text in KEYWORDS:
            raise self.error_at(tok, f"{tok.text!r} is a keyword")

    def parse_prime(self):
        ts = self.ts
        start = ts.next()
        if self.prime is not None:
            raise self.error_at(start, "only one prime per program")
        ts.expect("=")
        val = ts.expect_kind("int", "INT")
        try:
            p = check_prime(int(val.text))
        except InvalidModulus as exc:
            err = self.error_at(val, f"InvalidModulus: {exc}")
            err.kind = "InvalidModulus"
            raise err from None
        ts.expect(";")
        self.prime = PrimeDecl(p, Span.of(start))
        self.ctx_p = p

    def parse_ring(self):
        ts = self.ts
        start = ts.next()
        name = ts.expect_kind("name", "NAME")
        self.declare(name)
        ts.expect("=")
        ts.expect_word("poly")
        ts.expect("(")
        variables = []
        if not ts.at(")"):
            # poly() is the prime field itself
            variables.append(ts.expect_kind("name", "NAME"))
            while ts.at(","):
                ts.next()
                variables.append(ts.expect_kind("name", "NAME"))
        ts.expect(")")
        seen = set()
        for v in variables:
            if v.text in seen:
                raise self.error_at(v, f"variable {v.text!r} repeated")
            seen.add(v.text)
        ctx = Context(self.ctx_p, tuple(v.text for v in variables))
        rels = []
        if ts.at("/"):
            ts.next()
            rels = self.parse_poly_list(ctx)
        ts.expect(";")
        decl = RingDecl(name.text, ctx.names, tuple(rels), Span.of(start), ctx)
        self.rings[name.text] = decl
        self.statements.append(decl)

    def parse_poly_list(self, ctx):
        ts = self.ts
        ts.expect("(")
        polys = [parse_expr(ts, ctx)]
        while ts.at(","):
            ts.next()
            polys.append(parse_expr(ts, ctx))
        ts.expect(")")
        return polys

    def ring_ref(self, tok):
        if tok.text not in self.rings:
            raise self.error_at(tok, f"undeclared ring {tok.text!r}", sorted(self.rings))
        return self.rings[tok.text]

    def parse_map(self):
        ts = self.ts
        start = ts.next()
        name = ts.expect_kind("name", "NAME")
        self.declare(name)
        ts.expect(":")
        src = self.ring_ref(ts.expect_kind("name", "NAME"))
        ts.expect("->")
        tgt = self.ring_ref(ts.expect_kind("name", "NAME"))
        ts.expect("=")
        ts.expect("{")
        images = {}
        if not ts.at("}"):
            while True:
                var = ts.expect_kind("name", "NAME")
                if var.text not in src.variables:
                    raise self.error_at(var, f"{var.text!r} is not a variable of {src.name}", src.variables)
                if var.text in images:
                    raise self.error_at(var, f"{var.text!r} assigned twice")
                ts.expect("->")
                images[var.text] = parse_expr(ts, tgt.ctx)
                if not ts.at(","):
                    break
                ts.next()
        close = ts.expect("}")
        missing = [v for v in src.variables if v not in images]
        if missing:
            raise self.error_at(close, f"no image for {', '.join(missing)}", [repr(m) for m in missing])
        ts.expect(";")
        ordered = tuple((v, images[v]) for v in src.variables)
        decl = MapDecl(name.text, src.name, tgt.name, ordered, Span.of(start))
        self.maps[name.text] = decl
        self.statements.append(decl)

    def parse_command(self):
        ts = self.ts
        start = ts.next()
        kind, allowed, takes_polys = COMMANDS[start.text]
        arg = ts.expect_kind("name", "NAME")
        if kind == "map" and arg.text not in self.maps:
            raise self.error_at(arg, f"undeclared map {arg.text!r}", sorted(self.maps))
        if kind == "ring":
            self.ring_ref(arg)
        if kind == "suite" and arg.text not in SUITE_NAMES:
            raise self.error_at(arg, f"unknown suite {arg.text!r}", SUITE_NAMES)
        polys = None
        if takes_polys and ts.at("("):
            polys = tuple(self.parse_poly_list(self.rings[arg.text].ctx))
        options = {}
        while ts.peek.kind == "name":
            key = ts.next()
            if key.text not in allowed:
                raise self.error_at(key, f"unknown option {key.text!r} for {start.text}", allowed)
            if key.text in options:
                raise self.error_at(key, f"option {key.text!r} given twice")
            ts.expect("=")
            if key.text in _NAME_OPTIONS:
                val = ts.expect_kind("name", "NAME")
                if val.text not in _NAME_OPTIONS[key.text]:
                    raise self.error_at(val, f"bad value {val.text!r}", _NAME_OPTIONS[key.text])
                options[key.text] = val.text
            else:
                options[key.text] = int(ts.expect_kind("int", "INT").text)
        if not ts.at(";"):
            expected = [repr(a) for a in allowed if a not in options] + ["';'"]
            if takes_polys and polys is None:
                expected.append("'('")
            found = ts.peek.text or "end of input"
            raise self.error_at(ts.peek, f"found {found!r}", expected)
        ts.next()
        self.statements.append(
            Command(start.text, arg.text, polys, tuple(sorted(options.items())), Span.of(start))
        )


def parse_source(text: str) -> SourceProgram:
    return _Parser(text).run()


def _polys(polys, order):
    return ", ".join(f.to_str(order) for f in polys)


def format_statement(stmt, order=GREVLEX) -> str:
    if isinstance(stmt, PrimeDecl):
        return f"p = {stmt.value};"
    if isinstance(stmt, RingDecl):
        tail = f"/({_polys(stmt.relations, order)})" if stmt.relations else ""
        return f"ring {stmt.name} = poly({', '.join(stmt.variables)}){tail};"
    if isinstance(stmt, MapDecl):
        body = ", ".join(f"{v} -> {img.to_str(order)}" for v, img in stmt.images)
        return f"map {stmt.name} : {stmt.source} -> {stmt.target} = {{ {body} }};"
    parts = [stmt.name, stmt.arg]
    if stmt.polys is not None:
        parts.append(f"({_polys(stmt.polys, order)})")
    parts += [f"{k}={v}" for k, v in stmt.options]
    return " ".join(parts) + ";"


def format_program(prog: SourceProgram, order=GREVLEX) -> str:
    lines = []
    if prog.prime is not None:
        lines.append(format_statement(prog.prime, order))
    lines += [format_statement(s, order) for s in prog.statements]
    return "\n".join(lines) + "\n"
