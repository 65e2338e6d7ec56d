"""Lexer, recursive-descent parser, validator and printer for P-programs.

A P-program is a sequence of optional ``component`` definitions followed by
``context`` scopes, and a final ``return {model(...)}`` directive::

    def A = component(A1,A2)
    var P1 = context(){
        var A1 = flip(0.6)
        var B1 = A1 ? flip(0.8) : flip(0.2)
        var p = [A1,B1]
        return {Infer({samples:1000},p)}
    };
    return {model({design: 'no-signal',P1})}

Numeric literals are kept as exact ``Fraction`` values.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    ComponentCoverageError,
    ParseError,
    ShadowedVariable,
    UndefinedVariable,
    ValidationError,
)

KEYWORDS = frozenset({"var", "def", "return", "flip", "context", "component", "model", "Infer"})

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<number>\d+(?:\.\d+)?|\.\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>'[^'\n]*')
  | (?P<punct>->|[=(){}\[\],;?:])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident | number | string | punct | eof
    text: str
    line: int
    column: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        column = pos - line_start + 1
        if m is None:
            ch = source[pos]
            hint = " (design strings use single quotes)" if ch in "`\"" else ""
            raise ParseError(f"unexpected character {ch!r}{hint}", line, column)
        kind = m.lastgroup
        text = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, text, line, column))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    col = pos - line_start + 1
    tokens.append(Token("eof", "", line, col))
    return tokens


# --------------------------------------------------------------------- AST


@dataclass(frozen=True)
class FlipDecl:
    name: str
    bias: Fraction
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CondDecl:
    name: str
    condition: str
    bias_if_true: Fraction
    bias_if_false: Fraction
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ListDecl:
    name: str
    variables: tuple[str, ...]
    line: int = field(default=0, compare=False)


Stmt = Union[FlipDecl, CondDecl, ListDecl]


@dataclass(frozen=True)
class ComponentDef:
    name: str
    variables: tuple[str, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ContextDef:
    name: str
    statements: tuple[Stmt, ...]
    target: str
    samples: int
    line: int = field(default=0, compare=False)

    @property
    def random_statements(self) -> tuple[Union[FlipDecl, CondDecl], ...]:
        return tuple(s for s in self.statements if not isinstance(s, ListDecl))

    @property
    def joint(self) -> tuple[str, ...]:
        """The measured variables, in measurement order."""
        for s in self.statements:
            if isinstance(s, ListDecl) and s.name == self.target:
                return s.variables
        raise ValidationError(f"Infer target {self.target!r} is not a joint list in {self.name}")


class Design(enum.Enum):
    AUTO = "auto"
    NO_SIGNAL = "no-signal"
    SIGNAL = "signal"
    ORDER = "order"


@dataclass(frozen=True)
class ModelDirective:
    design: Design
    contexts: tuple[str, ...]
    source: Optional[str] = None  # signalling component (Design.SIGNAL only)
    target: Optional[str] = None


@dataclass(frozen=True)
class Program:
    components: tuple[ComponentDef, ...]
    contexts: tuple[ContextDef, ...]
    directive: ModelDirective

    def context(self, name: str) -> ContextDef:
        for c in self.contexts:
            if c.name == name:
                return c
        raise KeyError(name)

    def component(self, name: str) -> ComponentDef:
        for c in self.components:
            if c.name == name:
                return c
        raise KeyError(name)


# ------------------------------------------------------------------ parser

_DESIGN_RE = re.compile(r"\s*(?:(no-signal)|(order)|signal\(\s*([A-Za-z_]\w*)\s*->\s*([A-Za-z_]\w*)\s*\))\s*$")


class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, expected, message=None):
        t = self.tok
        got = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(message or f"unexpected {got}", t.line, t.column, expected)

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("punct", "ident") and t.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error({repr(text)})
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> Token:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            self.error({"identifier"})
        self.i += 1
        return t

    def number(self) -> Fraction:
        t = self.tok
        if t.kind != "number":
            self.error({"number"})
        self.i += 1
        return Fraction(t.text)

    def ident_list(self) -> tuple[str, ...]:
        names = [self.ident().text]
        while self.at(","):
            self.i += 1
            names.append(self.ident().text)
        return tuple(names)

    # program ::= item* "return" "{" model-expr "}"
    def program(self) -> Program:
        components, contexts = [], []
        while True:
            if self.at("def"):
                if contexts:
                    self.error({"'var'", "'return'"}, "component definitions must precede all contexts")
                components.append(self.component_def())
            elif self.at("var"):
                contexts.append(self.context_def())
            elif self.at("return"):
                break
            else:
                self.error({"'def'", "'var'", "'return'"} if not contexts else {"'var'", "'return'"})
        self.expect("return")
        self.expect("{")
        directive = self.model_expr()
        self.expect("}")
        if self.tok.kind != "eof":
            self.error({"end of input"})
        return Program(tuple(components), tuple(contexts), directive)

    def component_def(self) -> ComponentDef:
        start = self.expect("def")
        name = self.ident().text
        self.expect("=")
        self.expect("component")
        self.expect("(")
        names = self.ident_list()
        self.expect(")")
        return ComponentDef(name, names, start.line)

    def context_def(self) -> ContextDef:
        start = self.expect("var")
        name = self.ident().text
        self.expect("=")
        self.expect("context")
        self.expect("(")
        self.expect(")")
        self.expect("{")
        stmts = []
        while self.at("var"):
            stmts.append(self.stmt())
        if not self.at("return"):
            self.error({"'var'", "'return'"})
        self.expect("return")
        self.expect("{")
        self.expect("Infer")
        self.expect("(")
        self.expect("{")
        self.expect("samples")
        self.expect(":")
        t = self.tok
        if t.kind != "number" or not t.text.isdigit():
            self.error({"integer"})
        samples = int(t.text)
        if samples < 1:
            self.error({"positive integer"}, "sample count must be positive")
        self.i += 1
        self.expect("}")
        self.expect(",")
        target = self.ident().text
        self.expect(")")
        self.expect("}")
        self.expect("}")
        self.expect(";")
        return ContextDef(name, tuple(stmts), target, samples, start.line)

    def stmt(self) -> Stmt:
        start = self.expect("var")
        name = self.ident().text
        self.expect("=")
        if self.at("["):
            self.i += 1
            names = self.ident_list()
            self.expect("]")
            return ListDecl(name, names, start.line)
        if self.at("flip"):
            return FlipDecl(name, self.flip(), start.line)
        if self.tok.kind == "ident" and self.tok.text not in KEYWORDS:
            cond = self.ident().text
            self.expect("?")
            if not self.at("flip"):
                self.error({"'flip'"}, "conditional branches must be flip(...) (nesting depth is 1)")
            hi = self.flip()
            self.expect(":")
            if not self.at("flip"):
                self.error({"'flip'"}, "conditional branches must be flip(...) (nesting depth is 1)")
            lo = self.flip()
            return CondDecl(name, cond, hi, lo, start.line)
        self.error({"'flip'", "'['", "identifier"})

    def flip(self) -> Fraction:
        self.expect("flip")
        self.expect("(")
        bias = self.number()
        self.expect(")")
        return bias

    # model-expr ::= "model(" ident-list ")" | "model({design:" STRING "," ident-list "})"
    def model_expr(self) -> ModelDirective:
        self.expect("model")
        self.expect("(")
        if not self.at("{"):
            names = self.ident_list()
            self.expect(")")
            return ModelDirective(Design.AUTO, names)
        self.expect("{")
        self.expect("design")
        self.expect(":")
        t = self.tok
        if t.kind != "string":
            self.error({"quoted design string"})
        m = _DESIGN_RE.match(t.text[1:-1])
        if m is None:
            self.error({"'no-signal'", "'order'", "'signal(X->Y)'"}, f"unknown design {t.text}")
        self.i += 1
        self.expect(",")
        names = self.ident_list()
        self.expect("}")
        self.expect(")")
        if m.group(1):
            return ModelDirective(Design.NO_SIGNAL, names)
        if m.group(2):
            return ModelDirective(Design.ORDER, names)
        return ModelDirective(Design.SIGNAL, names, m.group(3), m.group(4))


def parse(source: str) -> Program:
    return _Parser(source).program()


# --------------------------------------------------------------- validation


@dataclass(frozen=True)
class ValidatedProgram:
    program: Program
    component_of: dict  # variable -> component name; empty when no components

    @property
    def contexts(self) -> tuple[ContextDef, ...]:
        """Contexts named by the model directive, in directive order."""
        return tuple(self.program.context(n) for n in self.program.directive.contexts)

    @property
    def directive(self) -> ModelDirective:
        return self.program.directive


def _check_bias(b: Fraction, name: str, scope: str):
    if not 0 <= b <= 1:
        raise ValidationError(f"bias {b} of {name!r} in scope {scope} is outside [0, 1]")


def validate(p: Program) -> ValidatedProgram:
    """Enforce scoping, naming and component-coverage rules.

    Checks run in source order, so the first offending construct is reported.
    """
    seen = set()
    for c in p.components:
        if c.name in seen:
            raise ValidationError(f"duplicate component name {c.name!r}")
        seen.add(c.name)
        if len(set(c.variables)) != len(c.variables):
            raise ValidationError(f"component {c.name} lists a variable twice")
    component_of = {}
    for c in p.components:
        for v in c.variables:
            if v in component_of:
                raise ValidationError(f"variable {v!r} belongs to components {component_of[v]} and {c.name}")
            component_of[v] = c.name

    names = set()
    for ctx in p.contexts:
        if ctx.name in names:
            raise ValidationError(f"duplicate context name {ctx.name!r}")
        if ctx.name in seen:
            raise ValidationError(f"context {ctx.name!r} clashes with a component name")
        names.add(ctx.name)
        declared = set()
        lists = set()
        for s in ctx.statements:
            if s.name in declared or s.name in lists:
                raise ShadowedVariable(s.name, ctx.name)
            if isinstance(s, ListDecl):
                for v in s.variables:
                    if v not in declared:
                        raise UndefinedVariable(v, ctx.name)
                if len(set(s.variables)) != len(s.variables):
                    raise ValidationError(f"joint list {s.name} in {ctx.name} repeats a variable")
                lists.add(s.name)
                continue
            if isinstance(s, CondDecl):
                if s.condition not in declared:
                    raise UndefinedVariable(s.condition, ctx.name)
                _check_bias(s.bias_if_true, s.name, ctx.name)
                _check_bias(s.bias_if_false, s.name, ctx.name)
            else:
                _check_bias(s.bias, s.name, ctx.name)
            declared.add(s.name)
        if ctx.target not in lists:
            if ctx.target in declared:
                raise ValidationError(f"Infer target {ctx.target!r} in {ctx.name} is not a joint list")
            raise UndefinedVariable(ctx.target, ctx.name)

    d = p.directive
    if len(set(d.contexts)) != len(d.contexts):
        raise ValidationError("model(...) lists a context twice")
    for n in d.contexts:
        if n not in names:
            raise ValidationError(f"model(...) refers to undefined context {n!r}")

    measured = {v for ctx in p.contexts for v in ctx.joint}
    for c in p.components:
        for v in c.variables:
            if v not in measured:
                raise ValidationError(f"component variable {v!r} of {c.name} is not measured by any context")

    if d.design in (Design.NO_SIGNAL, Design.SIGNAL):
        if len(p.components) != 2:
            raise ComponentCoverageError(f"design {d.design.value!r} needs exactly two components, got {len(p.components)}")
        if d.design is Design.SIGNAL:
            for end in (d.source, d.target):
                if end not in seen:
                    raise ValidationError(f"signal endpoint {end!r} is not a declared component")
            if d.source == d.target:
                raise ValidationError("signal endpoints must be different components")
        for n in d.contexts:
            joint = p.context(n).joint
            per = {}
            for v in joint:
                if v not in component_of:
                    raise ComponentCoverageError(f"{n} measures {v!r}, which belongs to no component")
                per.setdefault(component_of[v], []).append(v)
            for c in p.components:
                if len(per.get(c.name, ())) != 1:
                    raise ComponentCoverageError(
                        f"{n} must measure exactly one variable of component {c.name}, got {per.get(c.name, [])}"
                    )
    return ValidatedProgram(p, component_of)


def load(source: str) -> ValidatedProgram:
    return validate(parse(source))


# ------------------------------------------------------------------ printer


def format_number(x: Fraction) -> str:
    """Shortest exact decimal spelling of a terminating fraction."""
    d = x.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d != 1:
        raise ValueError(f"{x} has no finite decimal expansion")
    text = format(Decimal(x.numerator) / Decimal(x.denominator), "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text


def _format_stmt(s: Stmt) -> str:
    if isinstance(s, FlipDecl):
        return f"var {s.name} = flip({format_number(s.bias)})"
    if isinstance(s, CondDecl):
        return (
            f"var {s.name} = {s.condition} ? flip({format_number(s.bias_if_true)})"
            f" : flip({format_number(s.bias_if_false)})"
        )
    return f"var {s.name} = [{','.join(s.variables)}]"


def format_program(p: Program) -> str:
    out = []
    for c in p.components:
        out.append(f"def {c.name} = component({','.join(c.variables)})")
    for ctx in p.contexts:
        out.append(f"var {ctx.name} = context(){{")
        out.extend("    " + _format_stmt(s) for s in ctx.statements)
        out.append(f"    return {{Infer({{samples:{ctx.samples}}},{ctx.target})}}")
        out.append("};")
    d = p.directive
    names = ",".join(d.contexts)
    if d.design is Design.AUTO:
        out.append(f"return {{model({names})}}")
    else:
        design = f"signal({d.source}->{d.target})" if d.design is Design.SIGNAL else d.design.value
        out.append(f"return {{model({{design: '{design}',{names}}})}}")
    return "\n".join(out) + "\n"
