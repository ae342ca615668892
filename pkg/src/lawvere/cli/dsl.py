"""Concrete syntax for theories (.thy), clone morphisms (.map) and functors (.fun).

    theory NAME {
      op SYM : ARITY;
      eq TERM = TERM;
      semantics free | builtin ID | normalizer ID | normalizer command "PATH"
              | tables { hom N = [L, ...]; proj N I = L; sup N : G(F, ...) = H; };
    }

Variables are x1, x2, ...; both sides of an equation share the context
x1..xk with k the largest index on either side.  ``#`` starts a comment.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from ..errors import ArityError, TheorySyntaxError, UnknownSemantics
from ..library import BUILTIN_NAMES
from ..terms import App, Term, Var, max_var

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<arrow>->)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_](?:[A-Za-z0-9_']|-(?!>))*)
  | (?P<punct>[{}()\[\];:,=])
    """,
    re.VERBOSE,
)
_VAR = re.compile(r"x([1-9][0-9]*)$")

KEYWORDS = {"theory", "op", "eq", "semantics", "free", "builtin", "normalizer", "command", "tables", "hom", "proj",
            "sup", "morphism"}
STRATEGIES = ("free", "ac", "aci", "involution", "idempotent")
FUNCTOR_KINDS = {"representable": 1, "dual": 1, "unit": 0, "constant": 1, "builtin": 1}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out, line, start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise TheorySyntaxError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# --------------------------------------------------------------------------
# presentation data


@dataclass(frozen=True)
class Free:
    pass


@dataclass(frozen=True)
class Builtin:
    id: str


@dataclass(frozen=True)
class Normalizer:
    strategy: str | None = None
    command: str | None = None


@dataclass(frozen=True)
class Tables:
    homs: tuple = ()
    projs: tuple = ()
    sups: tuple = ()


@dataclass(frozen=True)
class TheoryPresentation:
    name: str
    operations: tuple
    equations: tuple
    semantics: object = field(default_factory=Free)

    @property
    def arity(self) -> dict:
        return dict(self.operations)

    def equation_contexts(self) -> tuple:
        """(lhs, rhs, k) with the shared context x1..xk."""
        return tuple((l, r, max(max_var(l), max_var(r))) for l, r in self.equations)


@dataclass(frozen=True)
class MorphismPresentation:
    name: str
    source: str
    target: str
    images: tuple


@dataclass(frozen=True)
class FunctorPresentation:
    kind: str
    arg: object = None


# --------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, msg, tok=None, cls=TheorySyntaxError):
        tok = tok or self.tok
        raise cls(msg, tok.line, tok.col)

    def take(self, kind=None, text=None) -> Token:
        t = self.tok
        if (kind and t.kind != kind) or (text is not None and t.text != text):
            want = repr(text) if text is not None else kind
            got = repr(t.text) if t.kind != "eof" else "end of input"
            self.fail(f"expected {want}, found {got}")
        self.i += 1
        return t

    def peek(self, text) -> bool:
        return self.tok.text == text and self.tok.kind in ("ident", "punct", "arrow")

    def name(self) -> Token:
        return self.take("ident")

    def integer(self) -> int:
        return int(self.take("int").text)

    def label(self) -> str:
        t = self.tok
        if t.kind in ("ident", "int"):
            self.i += 1
            return t.text
        if t.kind == "string":
            self.i += 1
            return json.loads(t.text)
        self.fail("expected a label")

    def term(self) -> tuple[Term, list]:
        """A term with the list of (op token, argument count) for later checking."""
        uses = []
        return self._term(uses), uses

    def _term(self, uses) -> Term:
        t = self.name()
        v = _VAR.match(t.text)
        if v and not self.peek("("):
            return Var(int(v.group(1)) - 1)
        if _VAR.match(t.text) is None and t.text.startswith("x") and t.text[1:].isdigit():
            self.fail("variables are numbered from x1", t)
        args = []
        if self.peek("("):
            self.take(text="(")
            if not self.peek(")"):
                args.append(self._term(uses))
                while self.peek(","):
                    self.take(text=",")
                    args.append(self._term(uses))
            self.take(text=")")
        uses.append((t, len(args)))
        return App(t.text, tuple(args))


def _check_uses(p: _Parser, uses, arity: dict):
    for tok, n in uses:
        if tok.text not in arity:
            p.fail(f"unknown operation {tok.text}", tok, ArityError)
        if arity[tok.text] != n:
            p.fail(f"{tok.text} has arity {arity[tok.text]} but is applied to {n} arguments", tok, ArityError)


def parse_term_text(text: str, arity: dict | None = None) -> Term:
    p = _Parser(text)
    t, uses = p.term()
    p.take("eof")
    if arity is not None:
        _check_uses(p, uses, arity)
    return t


def _theory(p: _Parser) -> TheoryPresentation:
    p.take(text="theory")
    name = p.name().text
    p.take(text="{")
    ops, arity, eqs, sem = [], {}, [], None
    pending = []
    while not p.peek("}"):
        kw = p.take("ident")
        if kw.text == "op":
            sym = p.name()
            if _VAR.match(sym.text) or sym.text in KEYWORDS:
                p.fail(f"{sym.text} cannot name an operation", sym)
            if sym.text in arity:
                p.fail(f"operation {sym.text} declared twice", sym, ArityError)
            p.take(text=":")
            a = p.integer()
            ops.append((sym.text, a))
            arity[sym.text] = a
        elif kw.text == "eq":
            lhs, u1 = p.term()
            p.take(text="=")
            rhs, u2 = p.term()
            pending.extend(u1 + u2)
            eqs.append((lhs, rhs))
        elif kw.text == "semantics":
            if sem is not None:
                p.fail("semantics given twice", kw)
            sem = _semantics(p)
        else:
            p.fail(f"unknown declaration {kw.text}", kw)
        p.take(text=";")
    p.take(text="}")
    _check_uses(p, pending, arity)
    return TheoryPresentation(name, tuple(ops), tuple(eqs), sem or Free())


def _semantics(p: _Parser):
    t = p.take("ident")
    if t.text == "free":
        return Free()
    if t.text == "builtin":
        ident = p.name()
        if ident.text not in BUILTIN_NAMES:
            p.fail(f"unknown builtin {ident.text}", ident, UnknownSemantics)
        return Builtin(ident.text)
    if t.text == "normalizer":
        if p.peek("command"):
            p.take(text="command")
            return Normalizer(command=json.loads(p.take("string").text))
        ident = p.name()
        if ident.text not in STRATEGIES:
            p.fail(f"unknown normalizer {ident.text}", ident, UnknownSemantics)
        return Normalizer(strategy=ident.text)
    if t.text == "tables":
        return _tables(p)
    p.fail(f"unknown semantics {t.text}", t, UnknownSemantics)


def _tables(p: _Parser) -> Tables:
    p.take(text="{")
    homs, projs, sups = [], [], []
    while not p.peek("}"):
        kw = p.take("ident")
        if kw.text == "hom":
            n = p.integer()
            p.take(text="=")
            p.take(text="[")
            labels = []
            if not p.peek("]"):
                labels.append(p.label())
                while p.peek(","):
                    p.take(text=",")
                    labels.append(p.label())
            p.take(text="]")
            homs.append((n, tuple(labels)))
        elif kw.text == "proj":
            n, i = p.integer(), p.integer()
            if not 1 <= i <= n:
                p.fail(f"projection index {i} out of range 1..{n}", kw, ArityError)
            p.take(text="=")
            projs.append(((n, i), p.label()))
        elif kw.text == "sup":
            n = p.integer()
            p.take(text=":")
            g = p.label()
            p.take(text="(")
            fs = []
            if not p.peek(")"):
                fs.append(p.label())
                while p.peek(","):
                    p.take(text=",")
                    fs.append(p.label())
            p.take(text=")")
            p.take(text="=")
            sups.append((n, g, tuple(fs), p.label()))
        else:
            p.fail(f"unknown table entry {kw.text}", kw)
        p.take(text=";")
    p.take(text="}")
    _validate_tables(p, homs, projs, sups)
    return Tables(tuple(homs), tuple(projs), tuple(sups))


def _validate_tables(p, homs, projs, sups):
    elems = {}
    for n, labels in homs:
        if n in elems:
            p.fail(f"hom {n} listed twice")
        if len(set(labels)) != len(labels):
            p.fail(f"hom {n} repeats a label", cls=ArityError)
        elems[n] = set(labels)

    def need(n, lab):
        if n not in elems or lab not in elems[n]:
            p.fail(f"{lab} is not an element of hom {n}", cls=ArityError)

    for (n, _), lab in projs:
        need(n, lab)
    for n, g, fs, h in sups:
        need(len(fs), g)
        for f in fs:
            need(n, f)
        need(n, h)


def parse_theory(text: str) -> TheoryPresentation:
    p = _Parser(text)
    t = _theory(p)
    p.take("eof")
    return t


def parse_theories(text: str) -> list[TheoryPresentation]:
    p = _Parser(text)
    out = [_theory(p)]
    while p.tok.kind != "eof":
        out.append(_theory(p))
    return out


def parse_morphism(text: str) -> MorphismPresentation:
    """``morphism NAME : S -> T { op = term; ... }``; terms are checked later against T."""
    p = _Parser(text)
    p.take(text="morphism")
    name = p.name().text
    p.take(text=":")
    src = p.name().text
    p.take("arrow")
    tgt = p.name().text
    p.take(text="{")
    images = []
    while not p.peek("}"):
        op = p.name().text
        p.take(text="=")
        t, _ = p.term()
        images.append((op, t))
        p.take(text=";")
    p.take(text="}")
    p.take("eof")
    return MorphismPresentation(name, src, tgt, tuple(images))


def parse_functor(text: str) -> FunctorPresentation:
    p = _Parser(text)
    kind = p.name()
    if kind.text not in FUNCTOR_KINDS:
        p.fail(f"unknown functor {kind.text}", kind, UnknownSemantics)
    arg = None
    if FUNCTOR_KINDS[kind.text]:
        arg = p.name().text if kind.text == "builtin" else p.integer()
    if p.peek(";"):
        p.take(text=";")
    p.take("eof")
    return FunctorPresentation(kind.text, arg)


# --------------------------------------------------------------------------
# printing


def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return f"x{t.index + 1}"
    if not t.args:
        return t.op
    return f"{t.op}({','.join(print_term(a) for a in t.args)})"


def _label(s: str) -> str:
    return s if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_'\-]*|\d+", s) and s not in KEYWORDS else json.dumps(s)


def print_semantics(sem) -> str:
    if isinstance(sem, Free):
        return "free"
    if isinstance(sem, Builtin):
        return f"builtin {sem.id}"
    if isinstance(sem, Normalizer):
        return f"normalizer command {json.dumps(sem.command)}" if sem.command else f"normalizer {sem.strategy}"
    lines = ["tables {"]
    for n, labels in sem.homs:
        lines.append(f"    hom {n} = [{', '.join(_label(x) for x in labels)}];")
    for (n, i), lab in sem.projs:
        lines.append(f"    proj {n} {i} = {_label(lab)};")
    for n, g, fs, h in sem.sups:
        lines.append(f"    sup {n}: {_label(g)}({', '.join(_label(f) for f in fs)}) = {_label(h)};")
    lines.append("  }")
    return "\n".join(lines)


def print_theory(P: TheoryPresentation) -> str:
    lines = [f"theory {P.name} {{"]
    lines += [f"  op {s}:{a};" for s, a in P.operations]
    lines += [f"  eq {print_term(l)} = {print_term(r)};" for l, r in P.equations]
    lines.append(f"  semantics {print_semantics(P.semantics)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
