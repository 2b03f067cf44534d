"""The ``.cake`` construction-script language: parser, printer and interpreter.

One statement per line; ``#`` starts a comment::

    scene chain radii 1 1 1 seed 7
    cut b = bisect cake 1
    assert diameter b on cake 1
    let l = join kiss 1 kiss 2
    let p, q = intersect l cake 2
    render "bisect.svg"

Point operands are identifiers, ``kiss k`` (the kissing point recorded for
cake ``k``) or ``center k`` (a marked or previously constructed center).
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .constructions import (
    Cut,
    _rim_point,
    bisect_cake,
    find_center,
    pass_kissing,
    quarter_cuts,
    sixth_cuts,
    third_cuts,
)
from .errors import CakeError
from .geometry import Line, Point
from .render import render_svg
from .scene import Scene, build_kissing_chain, build_single_cake
from .trace import Trace
from .verify import VerificationReport, audit_trace, equal_sectors, is_diameter

KEYWORDS = frozenset({
    "scene", "chain", "radii", "seed", "cake", "marked", "let", "join", "meet", "intersect",
    "pass", "through", "on", "choose", "rim", "cut", "point", "bisect", "quarter", "third",
    "sixth", "center", "assert", "diameter", "parallel", "midpoint", "of", "equal_sectors",
    "etiquette", "render", "kiss",
})
CONSTRUCTIONS = {"bisect": 2, "quarter": 4, "third": 3, "sixth": 6}


# -- source positions and diagnostics ---------------------------------------------


@dataclass(frozen=True)
class Span:
    line: int  # 1-based
    col: int  # 1-based
    length: int


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str
    span: Span

    def __str__(self) -> str:
        return f"{self.span.line}:{self.span.col}: {self.severity}: {self.message}"

    def to_json(self) -> dict:
        return {"severity": self.severity, "message": self.message,
                "line": self.span.line, "col": self.span.col, "length": self.span.length}


# -- AST ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Name:
    id: str
    span: Span = field(default=Span(0, 0, 0), compare=False)

    def __str__(self) -> str:
        return self.id


@dataclass(frozen=True)
class Kiss:
    cake: int
    span: Span = field(default=Span(0, 0, 0), compare=False)

    def __str__(self) -> str:
        return f"kiss {self.cake}"


@dataclass(frozen=True)
class CenterOf:
    cake: int
    span: Span = field(default=Span(0, 0, 0), compare=False)

    def __str__(self) -> str:
        return f"center {self.cake}"


PointOperand = Union[Name, Kiss, CenterOf]


@dataclass(frozen=True)
class Join:
    p: PointOperand
    q: PointOperand

    def __str__(self) -> str:
        return f"join {self.p} {self.q}"


@dataclass(frozen=True)
class Meet:
    l1: Name
    l2: Name

    def __str__(self) -> str:
        return f"meet {self.l1} {self.l2}"


@dataclass(frozen=True)
class Intersect:
    line: Name
    cake: int

    def __str__(self) -> str:
        return f"intersect {self.line} cake {self.cake}"


@dataclass(frozen=True)
class Pass:
    p: PointOperand
    s: PointOperand
    cake: int

    def __str__(self) -> str:
        return f"pass {self.p} through {self.s} on cake {self.cake}"


@dataclass(frozen=True)
class Choose:
    cake: int

    def __str__(self) -> str:
        return f"choose rim cake {self.cake}"


Primitive = Union[Join, Meet, Intersect, Pass, Choose]


@dataclass(frozen=True)
class SceneChain:
    radii: tuple[Fraction, ...]
    seed: Optional[int] = None
    span: Span = field(default=Span(0, 0, 0), compare=False)

    def __str__(self) -> str:
        tail = f" seed {self.seed}" if self.seed is not None else ""
        return "scene chain radii " + " ".join(str(r) for r in self.radii) + tail


@dataclass(frozen=True)
class SceneCake:
    radius: Fraction
    marked: bool = False
    span: Span = field(default=Span(0, 0, 0), compare=False)

    def __str__(self) -> str:
        return f"scene cake {self.radius}" + (" marked" if self.marked else "")


@dataclass(frozen=True)
class Let:
    names: tuple[str, ...]
    prim: Primitive
    span: Span = field(default=Span(0, 0, 0), compare=False)

    def __str__(self) -> str:
        return f"let {', '.join(self.names)} = {self.prim}"


@dataclass(frozen=True)
class Construct:
    name: str
    op: str  # bisect | quarter | third | sixth | center
    cake: int
    span: Span = field(default=Span(0, 0, 0), compare=False)

    def __str__(self) -> str:
        head = "point" if self.op == "center" else "cut"
        return f"{head} {self.name} = {self.op} cake {self.cake}"


@dataclass(frozen=True)
class AssertDiameter:
    chord: Union[Name, tuple[PointOperand, PointOperand]]
    cake: int
    span: Span = field(default=Span(0, 0, 0), compare=False)

    def __str__(self) -> str:
        what = str(self.chord) if isinstance(self.chord, Name) else f"{self.chord[0]} {self.chord[1]}"
        return f"assert diameter {what} on cake {self.cake}"


@dataclass(frozen=True)
class AssertParallel:
    l1: Name
    l2: Name
    span: Span = field(default=Span(0, 0, 0), compare=False)

    def __str__(self) -> str:
        return f"assert parallel {self.l1} {self.l2}"


@dataclass(frozen=True)
class AssertMidpoint:
    z: PointOperand
    p: PointOperand
    q: PointOperand
    span: Span = field(default=Span(0, 0, 0), compare=False)

    def __str__(self) -> str:
        return f"assert midpoint {self.z} of {self.p} {self.q}"


@dataclass(frozen=True)
class AssertEqualSectors:
    cut: Name
    cake: int
    span: Span = field(default=Span(0, 0, 0), compare=False)

    def __str__(self) -> str:
        return f"assert equal_sectors {self.cut} on cake {self.cake}"


@dataclass(frozen=True)
class AssertEtiquette:
    span: Span = field(default=Span(0, 0, 0), compare=False)

    def __str__(self) -> str:
        return "assert etiquette"


@dataclass(frozen=True)
class Render:
    filename: Optional[str] = None
    span: Span = field(default=Span(0, 0, 0), compare=False)

    def __str__(self) -> str:
        return "render" + (f' "{self.filename}"' if self.filename else "")


Statement = Union[SceneChain, SceneCake, Let, Construct, AssertDiameter, AssertParallel,
                  AssertMidpoint, AssertEqualSectors, AssertEtiquette, Render]


@dataclass(frozen=True)
class Program:
    statements: tuple[Statement, ...] = ()


@dataclass
class ParseResult:
    program: Optional[Program]
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return self.program is not None


# -- lexer -------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""(?P<ws>[ \t\r\f\v]+)
      | (?P<comment>\#.*)
      | (?P<string>"[^"]*"?)
      | (?P<number>[+-]?\d+(?:\.\d+)?(?:/\d+)?)
      | (?P<word>[A-Za-z_][A-Za-z0-9_']*)
      | (?P<punct>[=,])
      | (?P<bad>.)""",
    re.VERBOSE | re.ASCII,
)
_FILENAME = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_.-]*\.svg$")
_MAX_NUMBER_CHARS = 200


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    span: Span


class _SyntaxError(Exception):
    def __init__(self, message: str, span: Span) -> None:
        super().__init__(message)
        self.span = span


def _tokenize_line(text: str, lineno: int) -> list[_Tok]:
    toks = []
    for m in _TOKEN.finditer(text):
        kind = m.lastgroup
        if kind in ("ws", "comment"):
            continue
        span = Span(lineno, m.start() + 1, m.end() - m.start())
        if kind == "bad":
            raise _SyntaxError(f"unexpected character {m.group()!r}", span)
        if kind == "string" and (len(m.group()) < 2 or not m.group().endswith('"')):
            raise _SyntaxError("unterminated string", span)
        toks.append(_Tok(kind, m.group(), span))
    return toks


# -- parser ------------------------------------------------------------------------


class _LineParser:
    """Recursive descent over the tokens of a single statement line."""

    def __init__(self, toks: list[_Tok], lineno: int, eol_col: int) -> None:
        self.toks = toks
        self.i = 0
        self.eol = Span(lineno, eol_col, 0)

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self, what: str) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise _SyntaxError(f"expected {what}, found end of line", self.eol)
        self.i += 1
        return tok

    def keyword(self, *words: str) -> str:
        tok = self.next(" or ".join(repr(w) for w in words))
        if tok.kind != "word" or tok.text not in words:
            raise _SyntaxError(f"expected {' or '.join(repr(w) for w in words)}, found {tok.text!r}", tok.span)
        return tok.text

    def at(self, word: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "word" and tok.text == word

    def ident(self) -> Name:
        tok = self.next("an identifier")
        if tok.kind != "word":
            raise _SyntaxError(f"expected an identifier, found {tok.text!r}", tok.span)
        if tok.text in KEYWORDS:
            raise _SyntaxError(f"{tok.text!r} is a keyword, not an identifier", tok.span)
        return Name(tok.text, tok.span)

    def number(self, what: str = "a number") -> Fraction:
        tok = self.next(what)
        if tok.kind != "number":
            raise _SyntaxError(f"expected {what}, found {tok.text!r}", tok.span)
        if len(tok.text) > _MAX_NUMBER_CHARS:
            raise _SyntaxError("number literal is too long", tok.span)
        try:
            return Fraction(tok.text)
        except (ZeroDivisionError, ValueError):
            raise _SyntaxError(f"invalid number {tok.text!r}", tok.span) from None

    def integer(self, what: str, minimum: Optional[int] = None) -> int:
        tok = self.peek()
        value = self.number(what)
        if value.denominator != 1 or "." in tok.text or "/" in tok.text:
            raise _SyntaxError(f"expected {what}, found {tok.text!r}", tok.span)
        if minimum is not None and value < minimum:
            raise _SyntaxError(f"{what} must be at least {minimum}", tok.span)
        return int(value)

    def cake_ref(self) -> int:
        self.keyword("cake")
        return self.integer("a cake index", 1)

    def point(self) -> PointOperand:
        tok = self.peek()
        if self.at("kiss"):
            self.i += 1
            k = self.integer("a cake index", 1)
            return Kiss(k, Span(tok.span.line, tok.span.col, self._end_col() - tok.span.col))
        if self.at("center"):
            self.i += 1
            k = self.integer("a cake index", 1)
            return CenterOf(k, Span(tok.span.line, tok.span.col, self._end_col() - tok.span.col))
        return self.ident()

    def _end_col(self) -> int:
        last = self.toks[self.i - 1].span
        return last.col + last.length

    def done(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise _SyntaxError(f"unexpected {tok.text!r} after end of statement", tok.span)

    # statements

    def statement(self) -> Statement:
        tok = self.peek()
        head = tok.text if tok.kind == "word" else ""
        parsers = {
            "scene": self.scene, "let": self.let, "cut": self.construct, "point": self.construct,
            "assert": self.assertion, "render": self.render,
        }
        if head not in parsers:
            raise _SyntaxError(f"unknown keyword {tok.text!r}", tok.span)
        stmt = parsers[head]()
        self.done()
        return stmt

    def span_all(self) -> Span:
        first, last = self.toks[0].span, self.toks[-1].span
        return Span(first.line, first.col, last.col + last.length - first.col)

    def scene(self) -> Statement:
        self.keyword("scene")
        kind = self.keyword("chain", "cake")
        if kind == "cake":
            r = self.number("a radius")
            marked = False
            if self.at("marked"):
                self.i += 1
                marked = True
            return SceneCake(r, marked, self.span_all())
        self.keyword("radii")
        radii = [self.number("a radius")]
        while self.peek() is not None and self.peek().kind == "number":
            radii.append(self.number("a radius"))
        seed = None
        if self.at("seed"):
            self.i += 1
            seed = self.integer("an integer seed", 0)
        return SceneChain(tuple(radii), seed, self.span_all())

    def let(self) -> Statement:
        self.keyword("let")
        names = [self.ident()]
        while self.peek() is not None and self.peek().text == ",":
            self.i += 1
            names.append(self.ident())
        self.names = names
        tok = self.next("'='")
        if tok.text != "=":
            raise _SyntaxError(f"expected '=', found {tok.text!r}", tok.span)
        op = self.keyword("join", "meet", "intersect", "pass", "choose")
        prim: Primitive
        if op == "join":
            prim = Join(self.point(), self.point())
        elif op == "meet":
            prim = Meet(self.ident(), self.ident())
        elif op == "intersect":
            prim = Intersect(self.ident(), self.cake_ref())
        elif op == "pass":
            p = self.point()
            self.keyword("through")
            s = self.point()
            self.keyword("on")
            prim = Pass(p, s, self.cake_ref())
        else:
            self.keyword("rim")
            prim = Choose(self.cake_ref())
        return Let(tuple(n.id for n in names), prim, self.span_all())

    def construct(self) -> Statement:
        head = self.keyword("cut", "point")
        name = self.ident()
        self.names = [name]
        tok = self.next("'='")
        if tok.text != "=":
            raise _SyntaxError(f"expected '=', found {tok.text!r}", tok.span)
        if head == "point":
            op = self.keyword("center")
        else:
            op = self.keyword(*CONSTRUCTIONS)
        return Construct(name.id, op, self.cake_ref(), self.span_all())

    def assertion(self) -> Statement:
        self.keyword("assert")
        what = self.keyword("diameter", "parallel", "midpoint", "equal_sectors", "etiquette")
        if what == "diameter":
            first = self.point()
            chord: Union[Name, tuple] = first
            if not self.at("on"):
                chord = (first, self.point())
            self.keyword("on")
            return AssertDiameter(chord, self.cake_ref(), self.span_all())
        if what == "parallel":
            return AssertParallel(self.ident(), self.ident(), self.span_all())
        if what == "midpoint":
            z = self.point()
            self.keyword("of")
            return AssertMidpoint(z, self.point(), self.point(), self.span_all())
        if what == "equal_sectors":
            cut = self.ident()
            self.keyword("on")
            return AssertEqualSectors(cut, self.cake_ref(), self.span_all())
        return AssertEtiquette(self.span_all())

    def render(self) -> Statement:
        self.keyword("render")
        tok = self.peek()
        if tok is None:
            return Render(None, self.span_all())
        self.i += 1
        if tok.kind != "string":
            raise _SyntaxError(f"expected a quoted file name, found {tok.text!r}", tok.span)
        name = tok.text[1:-1]
        if not _FILENAME.match(name):
            raise _SyntaxError("render file name must be a plain name ending in .svg", tok.span)
        return Render(name, self.span_all())


# binding kinds produced and consumed by statements
_ANY = "any"


class _Checker:
    """Static checks: scene first, bind-once, bound-before-use, operand kinds."""

    def __init__(self, diags: list[Diagnostic]) -> None:
        self.diags = diags
        self.kinds: dict[str, str] = {}
        self.scene_seen = False

    def error(self, msg: str, span: Span) -> None:
        self.diags.append(Diagnostic("error", msg, span))

    def bind(self, name: str, kind: str, span: Span) -> None:
        if name in self.kinds:
            self.error(f"rebinding of identifier {name}", span)
            return
        self.kinds[name] = kind

    def use(self, op, kind: str) -> None:
        if not isinstance(op, Name):
            if kind != "point":
                self.error(f"expected a {kind}, found {op}", op.span)
            return
        have = self.kinds.get(op.id)
        if have is None:
            self.error(f"unbound identifier {op.id}", op.span)
        elif have not in (kind, _ANY):
            self.error(f"{op.id} is a {have}, expected a {kind}", op.span)

    def check(self, stmt: Statement) -> None:
        if isinstance(stmt, (SceneChain, SceneCake)):
            if self.scene_seen:
                self.error("scene already declared", stmt.span)
            self.scene_seen = True
            return
        if not self.scene_seen:
            self.error("statement before any scene declaration", stmt.span)
        if isinstance(stmt, Let):
            prim = stmt.prim
            if isinstance(prim, Join):
                self.use(prim.p, "point")
                self.use(prim.q, "point")
                kind = "line"
            elif isinstance(prim, Meet):
                self.use(prim.l1, "line")
                self.use(prim.l2, "line")
                kind = "point"
            elif isinstance(prim, Intersect):
                self.use(prim.line, "line")
                kind = "point"
            elif isinstance(prim, Pass):
                self.use(prim.p, "point")
                self.use(prim.s, "point")
                kind = "point"
            else:
                kind = "point"
            if len(stmt.names) > 1 and not isinstance(prim, Intersect):
                self.error("only intersect binds more than one name", stmt.span)
            if len(stmt.names) > 2:
                self.error("a line meets a cake rim in at most two points", stmt.span)
            for n in stmt.names:
                self.bind(n, kind, stmt.span)
        elif isinstance(stmt, Construct):
            self.bind(stmt.name, "point" if stmt.op == "center" else "cut", stmt.span)
        elif isinstance(stmt, AssertDiameter):
            if isinstance(stmt.chord, tuple):
                self.use(stmt.chord[0], "point")
                self.use(stmt.chord[1], "point")
            else:
                self.use(stmt.chord, "cut")
        elif isinstance(stmt, AssertParallel):
            self.use(stmt.l1, "line")
            self.use(stmt.l2, "line")
        elif isinstance(stmt, AssertMidpoint):
            for op in (stmt.z, stmt.p, stmt.q):
                self.use(op, "point")
        elif isinstance(stmt, AssertEqualSectors):
            self.use(stmt.cut, "cut")


def parse(source: Union[str, bytes]) -> ParseResult:
    """Parse a script, collecting every diagnostic rather than stopping at the first."""
    diags: list[Diagnostic] = []
    if isinstance(source, (bytes, bytearray)):
        try:
            text = bytes(source).decode("utf-8")
        except UnicodeDecodeError as exc:
            text = bytes(source).decode("utf-8", errors="replace")
            prefix = bytes(source)[: exc.start].decode("utf-8", errors="replace")
            line = prefix.count("\n") + 1
            col = len(prefix) - (prefix.rfind("\n") + 1) + 1
            diags.append(Diagnostic("error", "invalid UTF-8 in source", Span(line, col, 1)))
    else:
        text = source
    checker = _Checker(diags)
    stmts: list[Statement] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        p: Optional[_LineParser] = None
        try:
            toks = _tokenize_line(line, lineno)
            if not toks:
                continue
            p = _LineParser(toks, lineno, len(line) + 1)
            stmt = p.statement()
        except _SyntaxError as exc:
            diags.append(Diagnostic("error", str(exc), exc.span))
            # keep names from a broken binding so later uses do not cascade
            for n in getattr(p, "names", []) if p is not None else []:
                checker.kinds.setdefault(n.id, _ANY)
            continue
        checker.check(stmt)
        stmts.append(stmt)
    if any(d.severity == "error" for d in diags):
        return ParseResult(None, diags)
    return ParseResult(Program(tuple(stmts)), diags)


def format_program(program: Program) -> str:
    """Canonical text: one statement per line, single spaces, reduced fractions."""
    return "".join(f"{s}\n" for s in program.statements)


print_program = format_program


# -- interpreter -------------------------------------------------------------------


@dataclass
class _CutGroup:
    cuts: tuple[Cut, ...]
    pieces: int


@dataclass
class RunResult:
    scene: Optional[Scene]
    trace: Optional[Trace]
    report: VerificationReport
    renders: dict[str, str]
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return self.report.passed and not any(d.severity == "error" for d in self.diagnostics)


class _RuntimeFailure(Exception):
    pass


class Interpreter:
    def __init__(self, program: Program, seed: int = 0) -> None:
        self.program = program
        self.seed = seed
        self.scene: Optional[Scene] = None
        self.trace: Optional[Trace] = None
        self.env: dict[str, Union[Point, Line, _CutGroup]] = {}
        self.report = VerificationReport()
        self.renders: dict[str, str] = {}
        self.diags: list[Diagnostic] = []
        self.cuts: list[Cut] = []

    def _seed(self, idx: int) -> int:
        return self.seed * 1_000_003 + idx

    def _get(self, op) -> Union[Point, Line, _CutGroup]:
        if isinstance(op, Kiss):
            try:
                return self.trace.kiss(op.cake)
            except KeyError:
                raise CakeError(f"no kissing point recorded for cake {op.cake}") from None
        if isinstance(op, CenterOf):
            return self.trace.center(op.cake)
        if op.id not in self.env:
            raise _RuntimeFailure(f"{op.id} is unavailable because its statement failed")
        return self.env[op.id]

    def run(self) -> RunResult:
        for idx, stmt in enumerate(self.program.statements):
            try:
                self._exec(idx, stmt)
            except _RuntimeFailure as exc:
                self.diags.append(Diagnostic("warning", str(exc), stmt.span))
            except CakeError as exc:
                self.diags.append(Diagnostic("error", f"{type(exc).__name__}: {exc}", stmt.span))
            except ValueError as exc:
                self.diags.append(Diagnostic("error", str(exc), stmt.span))
        if self.trace is not None:
            self.trace.emit_scratches()
            self.trace.seal()
        return RunResult(self.scene, self.trace, self.report, self.renders, self.diags)

    def _exec(self, idx: int, stmt: Statement) -> None:
        if isinstance(stmt, SceneChain):
            seed = stmt.seed if stmt.seed is not None else self.seed
            self._start(build_kissing_chain(stmt.radii, seed=seed))
            return
        if isinstance(stmt, SceneCake):
            self._start(build_single_cake(stmt.radius, center_marked=stmt.marked))
            return
        if self.scene is None:
            raise _RuntimeFailure("no scene is available")
        trace = self.trace
        if isinstance(stmt, Let):
            self._let(idx, stmt)
        elif isinstance(stmt, Construct):
            self._construct(idx, stmt)
        elif isinstance(stmt, AssertDiameter):
            cake = self.scene.cake(stmt.cake)
            if isinstance(stmt.chord, Name):
                group = self._get(stmt.chord)
                ok = all(is_diameter(cake, c.p, c.q) for c in group.cuts)
                witness = [[list(c.p.approx()), list(c.q.approx())] for c in group.cuts]
            else:
                p, q = self._get(stmt.chord[0]), self._get(stmt.chord[1])
                ok = is_diameter(cake, p, q)
                witness = [list(p.approx()), list(q.approx())]
            self.report.add(f"line {stmt.span.line}: {stmt}", ok, witness)
        elif isinstance(stmt, AssertParallel):
            l1, l2 = self._get(stmt.l1), self._get(stmt.l2)
            self.report.add(f"line {stmt.span.line}: {stmt}", l1.is_parallel(l2),
                            [list(l1.approx()), list(l2.approx())])
        elif isinstance(stmt, AssertMidpoint):
            z, p, q = (self._get(o) for o in (stmt.z, stmt.p, stmt.q))
            self.report.add(f"line {stmt.span.line}: {stmt}", (p + q) == z.scale(2),
                            [list(v.approx()) for v in (z, p, q)])
        elif isinstance(stmt, AssertEqualSectors):
            group = self._get(stmt.cut)
            cake = self.scene.cake(stmt.cake)
            ok = equal_sectors(cake, group.cuts, group.pieces)
            self.report.add(f"line {stmt.span.line}: {stmt}", ok, group.pieces)
        elif isinstance(stmt, AssertEtiquette):
            audit = audit_trace(self.scene, trace.snapshot())
            failures = [c.witness if c.name == "ruler discipline" else c.name for c in audit.failures()]
            self.report.add(f"line {stmt.span.line}: {stmt}", audit.passed, failures)
        elif isinstance(stmt, Render):
            name = stmt.filename or f"figure{sum(1 for s in self.program.statements[:idx + 1] if isinstance(s, Render))}.svg"
            self.renders[name] = render_svg(self.scene, trace.snapshot(), self.cuts)

    def _start(self, scene: Scene) -> None:
        if self.scene is not None:
            raise _RuntimeFailure("scene already declared")
        self.scene = scene
        self.trace = Trace(scene)

    def _let(self, idx: int, stmt: Let) -> None:
        prim, trace = stmt.prim, self.trace
        if isinstance(prim, Join):
            values: tuple = (trace.join(self._get(prim.p), self._get(prim.q), label=stmt.names[0]),)
        elif isinstance(prim, Meet):
            values = (trace.meet(self._get(prim.l1), self._get(prim.l2), label=stmt.names[0]),)
        elif isinstance(prim, Intersect):
            values = trace.intersect(self._get(prim.line), prim.cake, label=stmt.names[0])
            if len(values) != len(stmt.names):
                raise CakeError(f"line meets the rim of cake {prim.cake} in {len(values)} point(s), "
                                f"but {len(stmt.names)} name(s) were given")
        elif isinstance(prim, Pass):
            p = pass_kissing(trace, self._get(prim.p), self._get(prim.s), self.scene.cake(prim.cake))
            values = (p,)
        else:
            cake = self.scene.cake(prim.cake)
            theta = random.Random(self._seed(idx)).uniform(-math.pi, math.pi)
            values = (trace.choose(prim.cake, _rim_point(cake, theta), label=stmt.names[0]),)
        for n, v in zip(stmt.names, values):
            self.env[n] = v

    def _construct(self, idx: int, stmt: Construct) -> None:
        seed = self._seed(idx)
        if stmt.op == "center":
            result = find_center(self.scene, target=stmt.cake, seed=seed, trace=self.trace)
            self.env[stmt.name] = result.points["center"]
            return
        if stmt.op == "bisect":
            result = bisect_cake(self.scene, target=stmt.cake, trace=self.trace)
        else:
            func = {"quarter": quarter_cuts, "third": third_cuts, "sixth": sixth_cuts}[stmt.op]
            result = func(self.scene, seed=seed, target=stmt.cake, trace=self.trace)
        self.env[stmt.name] = _CutGroup(result.cuts, CONSTRUCTIONS[stmt.op])
        self.cuts.extend(result.cuts)


def interpret(program: Program, seed: int = 0) -> RunResult:
    """Run a parsed program; deterministic for a fixed ``(program, seed)``."""
    return Interpreter(program, seed).run()


__all__ = [
    "Diagnostic",
    "Span",
    "Program",
    "ParseResult",
    "RunResult",
    "parse",
    "format_program",
    "print_program",
    "interpret",
]
