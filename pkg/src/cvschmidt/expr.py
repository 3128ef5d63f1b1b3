"""
A small expression language for user-supplied amplitudes f(p, q).

Grammar (``^`` binds tighter than unary minus and is right associative)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := primary ('^' unary)?
    primary := NUMBER | 'p' | 'q' | FUNC '(' expr ')' | '(' expr ')'
    FUNC    := exp | sin | cos | sinc | sqrt | abs

Parsing compiles to a tree of numpy closures, so evaluating on a grid costs
one vectorized pass per node.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .amplitude import Amplitude, sinc
from .errors import InputError, NumericalError

VARIABLES = ("p", "q")


FUNCTIONS = {
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "sinc": sinc,
    "sqrt": np.emath.sqrt,
    "abs": np.abs,
}


class ExpressionSyntaxError(InputError):
    def __init__(self, message: str, offset: int, src: str):
        super().__init__(f"{message} at offset {offset}: {src!r}")
        self.offset = offset
        self.src = src


# --- tree ------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Call]

# --- lexer -----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_]\w*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def tokenize(src: str):
    pos = 0
    tokens = []
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unexpected character {src[pos]!r}", pos, src)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


# --- parser ----------------------------------------------------------------

class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = tokenize(src)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def fail(self, message, tok=None):
        tok = tok or self.tok
        raise ExpressionSyntaxError(message, tok[2], self.src)

    def take(self, text=None):
        tok = self.tok
        if text is not None and tok[1] != text:
            self.fail(f"expected {text!r}")
        self.i += 1
        return tok

    def parse(self) -> Node:
        if self.tok[0] == "end":
            self.fail("empty expression")
        node = self.expr()
        if self.tok[0] != "end":
            self.fail(f"unexpected {self.tok[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.tok[1] in ("+", "-") and self.tok[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok[1] in ("*", "/") and self.tok[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.tok[0] == "op" and self.tok[1] in ("-", "+"):
            sign = self.take()[1]
            operand = self.unary()
            return Neg(operand) if sign == "-" else operand
        return self.power()

    def power(self):
        base = self.primary()
        if self.tok[0] == "op" and self.tok[1] == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def primary(self):
        kind, text, pos = self.tok
        if kind == "num":
            self.take()
            value = float(text)
            if not np.isfinite(value):
                self.fail(f"numeric literal {text!r} overflows")
            return Num(value)
        if kind == "name":
            self.take()
            if text in VARIABLES:
                return Var(text)
            if text in FUNCTIONS:
                if self.tok[1] != "(":
                    self.fail(f"expected '(' after function {text!r}")
                self.take("(")
                arg = self.expr()
                self.take(")")
                return Call(text, arg)
            raise ExpressionSyntaxError(f"unknown identifier {text!r}", pos, self.src)
        if text == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if kind == "end":
            self.fail("unexpected end of expression")
        self.fail(f"unexpected {text!r}")


def parse(src: str) -> Node:
    """Parse ``src`` into an expression tree."""
    return _Parser(src).parse()


# --- compile / render ------------------------------------------------------

def _divide(a, b):
    if np.any(b == 0):
        raise NumericalError("division by zero while evaluating expression")
    return a / b


def compile_node(node: Node):
    """Turn a tree into ``fn(p, q)`` over numpy arrays."""
    if isinstance(node, Num):
        v = node.value
        return lambda p, q: v
    if isinstance(node, Var):
        return (lambda p, q: p) if node.name == "p" else (lambda p, q: q)
    if isinstance(node, Neg):
        inner = compile_node(node.operand)
        return lambda p, q: -inner(p, q)
    if isinstance(node, Call):
        fn, inner = FUNCTIONS[node.func], compile_node(node.arg)
        return lambda p, q: fn(inner(p, q))
    left, right = compile_node(node.left), compile_node(node.right)
    if node.op == "+":
        return lambda p, q: left(p, q) + right(p, q)
    if node.op == "-":
        return lambda p, q: left(p, q) - right(p, q)
    if node.op == "*":
        return lambda p, q: left(p, q) * right(p, q)
    if node.op == "/":
        return lambda p, q: _divide(left(p, q), right(p, q))
    return lambda p, q: np.power(left(p, q), right(p, q))


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _PREC["neg"]
    return _PREC["atom"]


def render(node: Node) -> str:
    """Source text for ``node`` with only the parentheses the tree needs."""
    def wrap(child, needs):
        text = render(child)
        return f"({text})" if needs else text

    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({render(node.arg)})"
    if isinstance(node, Neg):
        return "-" + wrap(node.operand, _prec(node.operand) < _PREC["neg"])
    own = _PREC[node.op]
    if node.op == "^":
        left = wrap(node.left, _prec(node.left) <= own)
        right = wrap(node.right, _prec(node.right) < _PREC["neg"])
        return f"{left}^{right}"
    left = wrap(node.left, _prec(node.left) < own)
    right = wrap(node.right, _prec(node.right) <= own)
    return f"{left} {node.op} {right}" if own == 1 else f"{left}*{right}" if node.op == "*" else f"{left}/{right}"


def parse_expression(src: str, domain=None, label: str | None = None) -> Amplitude:
    """
    Compile ``src`` into an :class:`Amplitude`.

    >>> float(parse_expression("p*q")(2.0, 3.0))
    6.0
    """
    fn = compile_node(parse(src))

    def evaluate(p, q):
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        out = fn(p, q)
        return np.broadcast_to(out, np.broadcast_shapes(np.shape(out), p.shape, q.shape)) + 0.0

    kwargs = {} if domain is None else {"domain": domain}
    return Amplitude(evaluate, label=label or src, metadata={"kind": "expression", "expr": src}, **kwargs)
