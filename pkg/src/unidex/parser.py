"""Lexer, recursive-descent parser, and validator for scene spec files.

Grammar:

    scene := stmt*
    stmt  := [IDENT "="] CLASS spec ("," spec)*
    spec  := "on" vec3
           | "on" "(" "top" "back" IDENT ")"
           | "completely" "on" IDENT
           | "ahead" "of" IDENT
           | "behind" IDENT
           | "left" "of" IDENT
           | "right" "of" IDENT
           | "with" IDENT "(" num "," num ")"
    vec3  := "V3D" "(" num "," num "," num ")"

Whitespace (including newlines) is insignificant; `#` starts a line
comment. Identifiers must be declared before they are referenced, and an
axis may be pinned by at most one specifier. Declarations without an
explicit name are auto-named _obj<statement index>.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConflictingSpecifiersError,
    DslSyntaxError,
    DuplicateIdentifierError,
    UnknownClassError,
    UnknownIdentifierError,
)

KNOWN_CLASSES = ("Table", "Robot", "Tray", "Cube")

RESERVED_PROPS = frozenset({"x", "y", "z", "pos"})


# --- AST --------------------------------------------------------------------

@dataclass(frozen=True)
class V3D:
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class OnPoint:
    point: V3D


@dataclass(frozen=True)
class OnRegionExpr:
    corner: tuple[str, str]  # only ("top", "back") is supported
    target: str


@dataclass(frozen=True)
class CompletelyOn:
    target: str


@dataclass(frozen=True)
class AheadOf:
    target: str


@dataclass(frozen=True)
class Behind:
    target: str


@dataclass(frozen=True)
class LeftOf:
    target: str


@dataclass(frozen=True)
class RightOf:
    target: str


@dataclass(frozen=True)
class WithRange:
    prop: str
    lo: float
    hi: float


Specifier = OnPoint | OnRegionExpr | CompletelyOn | AheadOf | Behind | LeftOf | RightOf | WithRange


@dataclass(frozen=True)
class ObjectDecl:
    name: str
    class_name: str
    specifiers: tuple[Specifier, ...]
    explicit_name: bool = True
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def references(self) -> tuple[str, ...]:
        out = []
        for s in self.specifiers:
            t = getattr(s, "target", None)
            if t is not None:
                out.append(t)
        return tuple(out)


@dataclass(frozen=True)
class SceneSpec:
    statements: tuple[ObjectDecl, ...]

    def by_name(self) -> dict[str, ObjectDecl]:
        return {d.name: d for d in self.statements}


# --- lexer ------------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT NUMBER = , ( ) EOF
    text: str
    line: int
    column: int


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_NUMBER_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")


def _lex(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line = 1
    col = 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch in "=,()":
            tokens.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        m = _IDENT_RE.match(source, i)
        if m:
            tokens.append(_Token("IDENT", m.group(), line, col))
            col += m.end() - i
            i = m.end()
            continue
        m = _NUMBER_RE.match(source, i)
        if m:
            tokens.append(_Token("NUMBER", m.group(), line, col))
            col += m.end() - i
            i = m.end()
            continue
        raise DslSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


# --- parser -----------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[_Token], classes: tuple[str, ...]):
        self.toks = tokens
        self.pos = 0
        self.classes = classes
        self.declared: dict[str, int] = {}

    def peek(self, ahead: int = 0) -> _Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> _Token:
        t = self.toks[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def expect(self, kind: str, what: str) -> _Token:
        t = self.next()
        if t.kind != kind:
            raise DslSyntaxError(
                f"expected {what}, found {t.text or 'end of input'!r}", t.line, t.column
            )
        return t

    def expect_word(self, word: str) -> _Token:
        t = self.next()
        if t.kind != "IDENT" or t.text != word:
            raise DslSyntaxError(
                f"expected '{word}', found {t.text or 'end of input'!r}", t.line, t.column
            )
        return t

    def number(self) -> float:
        t = self.expect("NUMBER", "a number")
        return float(t.text)

    def ident(self, what: str) -> _Token:
        return self.expect("IDENT", what)

    def reference(self) -> str:
        t = self.ident("an object identifier")
        if t.text not in self.declared:
            raise UnknownIdentifierError(
                f"unknown identifier '{t.text}'", t.line, t.column
            )
        return t.text

    def parse_scene(self) -> SceneSpec:
        stmts: list[ObjectDecl] = []
        while self.peek().kind != "EOF":
            stmts.append(self.parse_stmt(len(stmts)))
        return SceneSpec(tuple(stmts))

    def parse_stmt(self, index: int) -> ObjectDecl:
        first = self.peek()
        explicit = first.kind == "IDENT" and self.peek(1).kind == "="
        if explicit:
            name_tok = self.next()
            self.next()  # '='
            name = name_tok.text
            cls_tok = self.ident("a class name")
        else:
            name = f"_obj{index}"
            name_tok = first
            cls_tok = self.ident("a class name")
        if cls_tok.text not in self.classes:
            raise UnknownClassError(f"unknown class '{cls_tok.text}'", cls_tok.line, cls_tok.column)
        if name in self.declared:
            raise DuplicateIdentifierError(f"duplicate identifier '{name}'", name_tok.line, name_tok.column)

        specs = [self.parse_specifier()]
        while self.peek().kind == ",":
            self.next()
            specs.append(self.parse_specifier())
        decl = ObjectDecl(
            name=name,
            class_name=cls_tok.text,
            specifiers=tuple(specs),
            explicit_name=explicit,
            line=first.line,
            column=first.column,
        )
        self._check_conflicts(decl, first)
        self.declared[name] = index
        return decl

    def parse_specifier(self) -> Specifier:
        t = self.ident("a specifier keyword")
        word = t.text
        if word == "on":
            if self.peek().kind == "(":
                self.next()
                self.expect_word("top")
                self.expect_word("back")
                target = self.reference()
                self.expect(")", "')'")
                return OnRegionExpr(("top", "back"), target)
            v = self.ident("'V3D'")
            if v.text != "V3D":
                raise DslSyntaxError(f"expected 'V3D' or '(', found {v.text!r}", v.line, v.column)
            self.expect("(", "'('")
            x = self.number()
            self.expect(",", "','")
            y = self.number()
            self.expect(",", "','")
            z = self.number()
            self.expect(")", "')'")
            return OnPoint(V3D(x, y, z))
        if word == "completely":
            self.expect_word("on")
            return CompletelyOn(self.reference())
        if word == "ahead":
            self.expect_word("of")
            return AheadOf(self.reference())
        if word == "behind":
            return Behind(self.reference())
        if word == "left":
            self.expect_word("of")
            return LeftOf(self.reference())
        if word == "right":
            self.expect_word("of")
            return RightOf(self.reference())
        if word == "with":
            prop = self.ident("a property name").text
            self.expect("(", "'('")
            lo = self.number()
            self.expect(",", "','")
            hi = self.number()
            self.expect(")", "')'")
            return WithRange(prop, lo, hi)
        raise DslSyntaxError(f"unknown specifier {word!r}", t.line, t.column)

    def _check_conflicts(self, decl: ObjectDecl, at: _Token) -> None:
        pinned: set[str] = set()
        for s in decl.specifiers:
            if isinstance(s, OnPoint) or isinstance(s, OnRegionExpr):
                axes = {"x", "y", "z"}
            elif isinstance(s, CompletelyOn):
                axes = {"z"}
            elif isinstance(s, WithRange):
                axes = {f"prop:{s.prop}"}
            else:
                continue
            overlap = pinned & axes
            if overlap:
                which = ", ".join(sorted(a.removeprefix("prop:") for a in overlap))
                raise ConflictingSpecifiersError(
                    f"object '{decl.name}' pins {which} more than once", at.line, at.column
                )
            pinned |= axes


def parse(source_text: str, classes: tuple[str, ...] = KNOWN_CLASSES) -> SceneSpec:
    """Parse scene source text into a SceneSpec AST."""
    return _Parser(_lex(source_text), classes).parse_scene()


# --- validation -------------------------------------------------------------

@dataclass(frozen=True)
class Issue:
    severity: str  # "error" | "warning"
    message: str
    where: str  # object name


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[Issue, ...]

    @property
    def errors(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == "error")

    @property
    def warnings(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == "warning")

    @property
    def ok(self) -> bool:
        return not self.errors

    def __bool__(self) -> bool:
        return bool(self.issues)


def grammar_check(spec: SceneSpec) -> ValidationReport:
    """Semantic lint of a parsed scene: range sanity, reserved property
    names, and unused fully-deterministic objects."""
    issues: list[Issue] = []
    referenced: set[str] = set()
    for decl in spec.statements:
        referenced.update(decl.references())
    for decl in spec.statements:
        has_free = False
        for s in decl.specifiers:
            if isinstance(s, WithRange):
                has_free = True
                if not s.lo < s.hi:
                    issues.append(Issue(
                        "error",
                        f"range lo ≥ hi in '{decl.name}' property '{s.prop}' ({s.lo}, {s.hi})",
                        decl.name,
                    ))
                if s.prop in RESERVED_PROPS:
                    issues.append(Issue(
                        "error",
                        f"property name '{s.prop}' is reserved for position axes",
                        decl.name,
                    ))
            elif isinstance(s, CompletelyOn):
                has_free = True
        if decl.name not in referenced and not has_free:
            issues.append(Issue(
                "warning",
                f"object '{decl.name}' is never referenced and has no free dimensions",
                decl.name,
            ))
    return ValidationReport(tuple(issues))


# --- pretty printer ---------------------------------------------------------

def _fmt_num(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return np.format_float_positional(v, trim="-")


def _fmt_spec(s: Specifier) -> str:
    if isinstance(s, OnPoint):
        p = s.point
        return f"on V3D({_fmt_num(p.x)}, {_fmt_num(p.y)}, {_fmt_num(p.z)})"
    if isinstance(s, OnRegionExpr):
        return f"on ({s.corner[0]} {s.corner[1]} {s.target})"
    if isinstance(s, CompletelyOn):
        return f"completely on {s.target}"
    if isinstance(s, AheadOf):
        return f"ahead of {s.target}"
    if isinstance(s, Behind):
        return f"behind {s.target}"
    if isinstance(s, LeftOf):
        return f"left of {s.target}"
    if isinstance(s, RightOf):
        return f"right of {s.target}"
    if isinstance(s, WithRange):
        return f"with {s.prop} ({_fmt_num(s.lo)}, {_fmt_num(s.hi)})"
    raise TypeError(f"unknown specifier {s!r}")


def format_spec(spec: SceneSpec) -> str:
    """Canonical text form; parse(format_spec(parse(s))) == parse(s)."""
    lines = []
    for decl in spec.statements:
        head = f"{decl.name} = " if decl.explicit_name else ""
        body = ", ".join(_fmt_spec(s) for s in decl.specifiers)
        lines.append(f"{head}{decl.class_name} {body}")
    return "\n".join(lines) + ("\n" if lines else "")
