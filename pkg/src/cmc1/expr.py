"""Holomorphic expressions in one complex variable ``tau``.

Grammar (``^`` is right-associative and binds tighter than unary minus)::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' unary)?
    atom  := number | imag | 'i' | 'tau' | ident '(' expr ')' | '(' expr ')'

``imag`` is a decimal number written directly before ``i`` (``2.5i``), so a
complex literal reads ``(1+2i)``.  No constant folding is performed: the tree
mirrors the source.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import jets
from .errors import DomainError, ParseError, UnknownFunction, UnknownIdentifier
from .jets import Jet2

VARIABLE = "tau"
FUNCTION_NAMES = frozenset(jets.FUNCTIONS)


@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "HoloExpr"


@dataclass(frozen=True)
class Add:
    left: "HoloExpr"
    right: "HoloExpr"


@dataclass(frozen=True)
class Sub:
    left: "HoloExpr"
    right: "HoloExpr"


@dataclass(frozen=True)
class Mul:
    left: "HoloExpr"
    right: "HoloExpr"


@dataclass(frozen=True)
class Div:
    left: "HoloExpr"
    right: "HoloExpr"


@dataclass(frozen=True)
class Pow:
    base: "HoloExpr"
    exponent: "HoloExpr"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "HoloExpr"


HoloExpr = Union[Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call]

_BINARY = {"+": Add, "-": Sub, "*": Mul, "/": Div}
_SYMBOL = {Add: "+", Sub: "-", Mul: "*", Div: "/"}


# -- lexer -------------------------------------------------------------------

_NUMBER = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "imag", "ident", "op", "end"
    text: str
    offset: int  # byte offset


def _tokenize(source):
    tokens = []
    pos = 0
    byte = 0
    n = len(source)
    while pos < n:
        ch = source[pos]
        if ch.isspace():
            pos += 1
            byte += len(ch.encode("utf-8"))
            continue
        start_byte = byte
        m = _NUMBER.match(source, pos)
        if m:
            end = m.end()
            kind = "num"
            if end < n and source[end] == "i" and not (
                    end + 1 < n and (source[end + 1].isalnum() or source[end + 1] == "_")):
                kind = "imag"
                end += 1
            tokens.append(_Token(kind, source[pos:end], start_byte))
            byte += end - pos
            pos = end
            continue
        m = _IDENT.match(source, pos)
        if m:
            tokens.append(_Token("ident", m.group(), start_byte))
            byte += m.end() - pos
            pos = m.end()
            continue
        if ch in "+-*/^()":
            tokens.append(_Token("op", ch, start_byte))
            pos += 1
            byte += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", start_byte,
                         {"number", "tau", "i", "function", "(", "-"})
    tokens.append(_Token("end", "", byte))
    return tokens


# -- parser ------------------------------------------------------------------

_ATOM_START = frozenset({"number", "tau", "i", "function", "(", "-"})


class _Parser:
    def __init__(self, source):
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def _fail(self, expected):
        tok = self.tok
        what = "end of input" if tok.kind == "end" else f"token {tok.text!r}"
        raise ParseError(f"syntax error: unexpected {what}", tok.offset, expected)

    def _is_op(self, chars):
        return self.tok.kind == "op" and self.tok.text in chars

    def parse(self):
        tree = self.expr()
        if self.tok.kind != "end":
            self._fail({"+", "-", "*", "/", "^", "end of input"})
        return tree

    def expr(self):
        left = self.term()
        while self._is_op("+-"):
            op = self.tok.text
            self.i += 1
            left = _BINARY[op](left, self.term())
        return left

    def term(self):
        left = self.unary()
        while self._is_op("*/"):
            op = self.tok.text
            self.i += 1
            left = _BINARY[op](left, self.unary())
        return left

    def unary(self):
        if self._is_op("-"):
            self.i += 1
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self._is_op("^"):
            self.i += 1
            return Pow(base, self.unary())
        return base

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Const(complex(float(tok.text)))
        if tok.kind == "imag":
            self.i += 1
            return Const(complex(0.0, float(tok.text[:-1])))
        if tok.kind == "ident":
            name = tok.text
            self.i += 1
            if name == "i":
                return Const(1j)
            if name == VARIABLE:
                return Var()
            if self._is_op("("):
                if name not in FUNCTION_NAMES:
                    raise UnknownFunction(f"unknown function {name!r}", tok.offset)
                self.i += 1
                arg = self.expr()
                if not self._is_op(")"):
                    self._fail({")", "+", "-", "*", "/", "^"})
                self.i += 1
                return Call(name, arg)
            raise UnknownIdentifier(f"unknown identifier {name!r}", tok.offset)
        if self._is_op("("):
            self.i += 1
            inner = self.expr()
            if not self._is_op(")"):
                self._fail({")", "+", "-", "*", "/", "^"})
            self.i += 1
            return inner
        self._fail(_ATOM_START)


def parse(source: str) -> HoloExpr:
    """Parse expression text into an immutable tree.

    Raises ParseError (with byte ``offset`` and ``expected`` token set),
    UnknownIdentifier or UnknownFunction.
    """
    return _Parser(source).parse()


# -- printer -----------------------------------------------------------------

_SUM, _PRODUCT, _UNARY, _POWER, _ATOM = range(1, 6)


def _level(e):
    if isinstance(e, (Add, Sub)):
        return _SUM
    if isinstance(e, (Mul, Div)):
        return _PRODUCT
    if isinstance(e, Neg):
        return _UNARY
    if isinstance(e, Pow):
        return _POWER
    if isinstance(e, Const) and (e.value.real < 0 or e.value.imag < 0
                                 or (e.value.real and e.value.imag)):
        return _UNARY  # printed with a sign or as a sum
    return _ATOM


def _number(x):
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _const_source(c):
    if c.imag == 0:
        return _number(c.real)
    if c.real == 0:
        return f"{_number(c.imag)}i"
    return f"({_number(c.real)}+{_number(c.imag)}i)"


def to_source(e: HoloExpr) -> str:
    """Pretty-print with the fewest parentheses that re-parse to ``e``."""
    def wrap(sub, minimum):
        text = to_source(sub)
        return text if _level(sub) >= minimum else f"({text})"

    if isinstance(e, Const):
        return _const_source(e.value)
    if isinstance(e, Var):
        return VARIABLE
    if isinstance(e, Neg):
        return "-" + wrap(e.operand, _UNARY)
    if isinstance(e, (Add, Sub)):
        return f"{wrap(e.left, _SUM)} {_SYMBOL[type(e)]} {wrap(e.right, _PRODUCT)}"
    if isinstance(e, (Mul, Div)):
        return f"{wrap(e.left, _PRODUCT)}{_SYMBOL[type(e)]}{wrap(e.right, _UNARY)}"
    if isinstance(e, Pow):
        return f"{wrap(e.base, _ATOM)}^{wrap(e.exponent, _UNARY)}"
    if isinstance(e, Call):
        return f"{e.name}({to_source(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


# -- evaluation --------------------------------------------------------------

def _eval(e, tau, branch, fail):
    """Return ``(jet, bad)``; ``fail`` is called with a message at the first
    singular node (it raises in eager mode, records in masked mode)."""
    if isinstance(e, Const):
        return Jet2.constant(e.value), False
    if isinstance(e, Var):
        return Jet2.variable(tau), False
    if isinstance(e, Neg):
        jet, bad = _eval(e.operand, tau, branch, fail)
        return jets.neg(jet), bad
    if isinstance(e, Call):
        a, bad = _eval(e.arg, tau, branch, fail)
        out, here = jets.apply_masked(e.name, a, branch)
        return _check(out, bad, here, f"{e.name} evaluated at a singularity", fail)
    a, bad_a = _eval(e.left if not isinstance(e, Pow) else e.base, tau, branch, fail)
    b, bad_b = _eval(e.right if not isinstance(e, Pow) else e.exponent, tau, branch, fail)
    bad = np.logical_or(bad_a, bad_b)
    if isinstance(e, Add):
        out, here, what = jets.add(a, b), False, "overflow in addition"
    elif isinstance(e, Sub):
        out, here, what = jets.sub(a, b), False, "overflow in subtraction"
    elif isinstance(e, Mul):
        out, here, what = jets.mul(a, b), False, "overflow in multiplication"
    elif isinstance(e, Div):
        out, here = jets.div_masked(a, b)
        what = "division by zero"
    elif isinstance(e, Pow):
        out, here = jets.pow_masked(a, b, branch)
        what = "power with zero base or base on the branch cut"
    else:
        raise TypeError(f"not an expression node: {e!r}")
    return _check(out, bad, here, what, fail)


def _check(out, bad_before, here, what, fail):
    with np.errstate(invalid="ignore"):
        here = np.logical_or(here, jets.nonfinite(out))
    new = np.logical_and(here, np.logical_not(bad_before))
    if np.any(new):
        fail(what)
    return out, np.logical_or(bad_before, here)


def eval_jet(e: HoloExpr, tau, branch=0.0) -> Jet2:
    """Jet of ``e`` at ``tau``: the value with two derivatives.

    ``branch`` rotates the cut of every log/sqrt/non-integer power to the
    ray at angle ``branch + pi``; the default is the principal branch.
    ``tau`` may be an array, in which case any singular entry raises.
    """
    def fail(message):
        raise DomainError(f"{message} (tau={tau!r})" if np.ndim(tau) == 0 else message)

    scalar = np.ndim(tau) == 0 and np.ndim(branch) == 0
    with np.errstate(all="ignore"):
        jet, _ = _eval(e, np.asarray(tau, dtype=complex) if not scalar else np.complex128(tau),
                       branch, fail)
    if scalar:
        return Jet2(complex(jet.val), complex(jet.d1), complex(jet.d2))
    return jet


def eval_jet_masked(e: HoloExpr, tau, branch=0.0):
    """Array evaluation that never raises.

    Returns ``(jet, bad)`` where ``bad`` flags entries at which some node was
    singular; jet components there are unspecified.
    """
    tau = np.asarray(tau, dtype=complex)
    with np.errstate(all="ignore"):
        jet, bad = _eval(e, tau, branch, lambda message: None)
    shape = np.broadcast_shapes(tau.shape, np.shape(branch))
    full = lambda x: np.broadcast_to(np.asarray(x, dtype=complex), shape).copy()  # noqa: E731
    return Jet2(full(jet.val), full(jet.d1), full(jet.d2)), np.broadcast_to(bad, shape).copy()


def evaluate(e: HoloExpr, tau, branch=0.0):
    return eval_jet(e, tau, branch).val
