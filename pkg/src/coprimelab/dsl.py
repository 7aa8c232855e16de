"""A small language for recurrences such as ``y[n] = (y[n-1]^3 + 1) / y[n-2]``.

Grammar (whitespace-insensitive)::

    rule   := ref "=" expr
    ref    := ident "[" index "]" ( "[" index "]" )*
    index  := ident ( ("+" | "-") int )?
    expr   := term ( ("+" | "-") term )*
    term   := factor ( ("*" | "/") factor )*
    factor := base ( "^" int )?
    base   := ref | int | "(" expr ")"
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError

MAX_DEPTH = 64


@dataclass(frozen=True)
class Ref:
    name: str
    indices: tuple  # ((symbol, offset), ...)


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Recurrence:
    lhs: Ref
    rhs: object

    @property
    def symbols(self):
        return tuple(s for s, _ in self.lhs.indices)

    def refs(self):
        return list(iter_refs(self.rhs))

    def relative_offsets(self):
        """Offsets of every rhs reference relative to the lhs, deduplicated and sorted."""
        base = [o for _, o in self.lhs.indices]
        out = set()
        for r in self.refs():
            out.add(tuple(o - b for (_, o), b in zip(r.indices, base)))
        return sorted(out)


def iter_refs(node):
    if isinstance(node, Ref):
        yield node
    elif isinstance(node, BinOp):
        yield from iter_refs(node.left)
        yield from iter_refs(node.right)
    elif isinstance(node, Pow):
        yield from iter_refs(node.base)


def depth(node):
    if isinstance(node, BinOp):
        return 1 + max(depth(node.left), depth(node.right))
    if isinstance(node, Pow):
        return 1 + depth(node.base)
    return 1


# ----------------------------------------------------------------- lexer
_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()=\[\]]))")


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text):
    toks = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        # track line numbers across whitespace
        while pos < n and text[pos].isspace():
            if text[pos] == "\n":
                line += 1
                line_start = pos + 1
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1,
                             ["identifier", "integer", "operator"])
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), line, m.start(kind) - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


# ---------------------------------------------------------------- parser
class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0
        self.level = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def fail(self, expected, what=None):
        t = self.tok
        got = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(what or f"unexpected {got}, expected {' or '.join(expected)}",
                         t.line, t.col, list(expected))

    def accept(self, text):
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text, expected=None):
        if not self.accept(text):
            self.fail(expected or [repr(text)])

    def integer(self):
        if self.tok.kind != "int":
            self.fail(["integer"])
        v = int(self.tok.text)
        self.i += 1
        return v

    def ident(self):
        if self.tok.kind != "ident":
            self.fail(["identifier"])
        v = self.tok.text
        self.i += 1
        return v

    def enter(self):
        self.level += 1
        if self.level > MAX_DEPTH:
            t = self.tok
            raise ParseError(f"expression nested deeper than {MAX_DEPTH}", t.line, t.col, [])

    def leave(self):
        self.level -= 1

    def rule(self):
        lhs = self.ref()
        self.expect("=", ["'='"])
        rhs = self.expr()
        if self.tok.kind != "eof":
            self.fail(["operator", "end of input"])
        return lhs, rhs

    def ref(self, name=None):
        name = name or self.ident()
        if not (self.tok.kind == "op" and self.tok.text == "["):
            self.fail(["'['"])
        idx = []
        while self.accept("["):
            sym = self.ident()
            off = 0
            if self.accept("+"):
                off = self.integer()
            elif self.accept("-"):
                off = -self.integer()
            self.expect("]", ["']'", "'+'", "'-'"])
            idx.append((sym, off))
        return Ref(name, tuple(idx))

    def expr(self):
        self.enter()
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        self.leave()
        return node

    def term(self):
        node = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        node = self.base()
        if self.accept("^"):
            t = self.tok
            e = self.integer()
            if e < 1:
                raise ParseError("power exponents must be >= 1", t.line, t.col, ["positive integer"])
            node = Pow(node, e)
        return node

    def base(self):
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return Int(int(t.text))
        if t.kind == "ident":
            self.i += 1
            return self.ref(t.text)
        if self.accept("("):
            node = self.expr()
            self.expect(")", ["')'", "operator"])
            return node
        self.fail(["factor"])


def parse_recurrence(text: str) -> Recurrence:
    """Parse and check a recurrence; raises ParseError with line/column on failure."""
    p = _Parser(text)
    lhs, rhs = p.rule()
    if depth(rhs) > MAX_DEPTH:
        raise ParseError(f"expression tree deeper than {MAX_DEPTH}", 1, 1, [])
    rec = Recurrence(lhs, rhs)
    _check_semantics(rec, text)
    return rec


def _check_semantics(rec, text):
    syms = rec.symbols
    if len(set(syms)) != len(syms):
        raise ParseError("repeated index symbol on the left-hand side", 1, 1, [])
    base = [o for _, o in rec.lhs.indices]
    for r in rec.refs():
        if r.name != rec.lhs.name:
            raise ParseError(f"unknown symbol {r.name!r}", 1, _col_of(text, r.name), [rec.lhs.name])
        if tuple(s for s, _ in r.indices) != syms:
            raise ParseError(f"index symbols of {pretty(r)} do not match the left-hand side",
                             1, _col_of(text, r.name), list(syms))
        if r.indices[0][1] - base[0] >= 0:
            raise ParseError(f"{pretty(r)}: first index offset must be negative relative to the left-hand side",
                             1, _col_of(text, pretty(r)), ["negative offset"])


def _col_of(text, needle):
    i = text.find(needle)
    return i + 1 if i >= 0 else 1


# --------------------------------------------------------------- printer
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _pretty_index(sym, off):
    if off > 0:
        return f"[{sym}+{off}]"
    if off < 0:
        return f"[{sym}-{-off}]"
    return f"[{sym}]"


def pretty(node) -> str:
    """Canonical text; parse(pretty(ast)) == ast."""
    if isinstance(node, Recurrence):
        return f"{pretty(node.lhs)} = {pretty(node.rhs)}"
    if isinstance(node, Ref):
        return node.name + "".join(_pretty_index(s, o) for s, o in node.indices)
    if isinstance(node, Int):
        return str(node.value)
    if isinstance(node, Pow):
        b = pretty(node.base)
        if not isinstance(node.base, (Ref, Int)):
            b = f"({b})"
        return f"{b}^{node.exp}"
    if isinstance(node, BinOp):
        prec = _PREC[node.op]
        left = pretty(node.left)
        if isinstance(node.left, BinOp) and _PREC[node.left.op] < prec:
            left = f"({left})"
        right = pretty(node.right)
        if isinstance(node.right, BinOp) and _PREC[node.right.op] <= prec:
            right = f"({right})"
        return f"{left} {node.op} {right}"
    raise TypeError(f"not an AST node: {node!r}")


def evaluate_ast(node, lookup, const):
    """Fold the tree with ``lookup(ref)`` for references and ``const(int)`` for literals."""
    if isinstance(node, Ref):
        return lookup(node)
    if isinstance(node, Int):
        return const(node.value)
    if isinstance(node, Pow):
        return evaluate_ast(node.base, lookup, const) ** node.exp
    a = evaluate_ast(node.left, lookup, const)
    b = evaluate_ast(node.right, lookup, const)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    return a / b


def single_division_form(rec: Recurrence):
    """(numerator, divisor ref) when the rhs is ``expr / ref``, else None."""
    rhs = rec.rhs
    if isinstance(rhs, BinOp) and rhs.op == "/" and isinstance(rhs.right, Ref):
        if not any(isinstance(n, BinOp) and n.op == "/" for n in _nodes(rhs.left)):
            return rhs.left, rhs.right
    return None


def _nodes(node):
    yield node
    if isinstance(node, BinOp):
        yield from _nodes(node.left)
        yield from _nodes(node.right)
    elif isinstance(node, Pow):
        yield from _nodes(node.base)
