#!/usr/bin/env python3
# coding: utf-8

# plonkalab - terms.py
# Terms, identities, the term parser and exhaustive identity checking

import logging
import re
from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np

from algebra.core import FiniteAlgebra, Signature
from utils.error_handling import ArityMismatch, ParseError, UnboundVariable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    op: str
    args: tuple["Term", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self):
        return render_term(self)


Term = Union[Var, App]


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term
    label: str = field(default="", compare=False)

    def __str__(self):
        return f"{render_term(self.lhs)} ≈ {render_term(self.rhs)}"


def variables(t: Term) -> tuple[str, ...]:
    """Variable names in order of first occurrence."""
    seen: dict[str, None] = {}

    def walk(u: Term):
        if isinstance(u, Var):
            seen.setdefault(u.name)
        else:
            for a in u.args:
                walk(a)

    walk(t)
    return tuple(seen)


def identity_variables(ident: Identity) -> tuple[str, ...]:
    return tuple(dict.fromkeys(variables(ident.lhs) + variables(ident.rhs)))


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return f"({t.op})"
    return "(" + " ".join([t.op, *(render_term(a) for a in t.args)]) + ")"


def depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(depth(a) for a in t.args)


# infix shorthand
INFIX = {"·": "mul", ".": "mul", "*": "mul", "∘": "circ", "∧": "meet", "&": "meet", "∨": "join", "|": "join"}
PRECEDENCE = {"mul": 2, "circ": 2, "meet": 2, "join": 1}
PREFIX = {"¬": "neg"}
POSTFIX = {"⁻¹": "inv"}

_TOKENS = re.compile(r"\s*(?:(⁻¹)|([()·.*∘∧&∨|¬])|([^\s()·.*∘∧&∨|¬⁻≈~=]+))")
_SEPARATORS = re.compile(r"≈|~|=")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at column {pos + 1}")
        tokens.append((m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        if self.pos >= len(self.tokens):
            raise ParseError(f"unexpected end of term in {self.text!r}")
        token = self.tokens[self.pos][0]
        self.pos += 1
        return token

    def expect(self, token: str):
        column = self.tokens[self.pos][1] + 1 if self.pos < len(self.tokens) else len(self.text) + 1
        if self.take() != token:
            raise ParseError(f"expected {token!r} at column {column} in {self.text!r}")

    def is_name(self, token: str | None) -> bool:
        return token is not None and token not in INFIX and token not in PREFIX and token not in POSTFIX and token not in "()"

    def parse(self) -> Term:
        term = self.expr(0)
        if self.peek() is not None:
            column = self.tokens[self.pos][1] + 1
            raise ParseError(f"trailing input at column {column} in {self.text!r}")
        return term

    def expr(self, min_prec: int) -> Term:
        left = self.unary()
        while self.peek() in INFIX and PRECEDENCE[INFIX[self.peek()]] > min_prec:
            op = INFIX[self.take()]
            right = self.expr(PRECEDENCE[op])
            left = App(op, (left, right))
        return left

    def unary(self) -> Term:
        if self.peek() in PREFIX:
            return App(PREFIX[self.take()], (self.unary(),))
        term = self.primary()
        while self.peek() in POSTFIX:
            term = App(POSTFIX[self.take()], (term,))
        return term

    def primary(self) -> Term:
        token = self.take()
        if self.is_name(token):
            return Var(token)
        if token != "(":
            raise ParseError(f"unexpected {token!r} in {self.text!r}")
        head, after = self.peek(), self.tokens[self.pos + 1][0] if self.pos + 1 < len(self.tokens) else None
        # (op a1 .. ak) is prefix application, (c) a constant; anything else is grouping
        if self.is_name(head) and after not in INFIX and after not in POSTFIX:
            op = self.take()
            args = []
            while self.peek() != ")":
                if self.peek() is None:
                    raise ParseError(f"missing ')' in {self.text!r}")
                args.append(self.unary())
            self.take()
            return App(op, tuple(args))
        term = self.expr(0)
        self.expect(")")
        return term


def parse_term(text: str) -> Term:
    if not text or not text.strip():
        raise ParseError("empty term")
    return _Parser(text).parse()


def parse_identity(text: str, label: str = "") -> Identity:
    sides = _SEPARATORS.split(text)
    if len(sides) != 2:
        raise ParseError(f"identity needs exactly one of ≈ ~ = in {text!r}")
    return Identity(parse_term(sides[0]), parse_term(sides[1]), label)


def check_well_formed(t: Term, signature: Signature):
    if isinstance(t, Var):
        return
    arity = signature.arity(t.op)
    if len(t.args) != arity:
        raise ArityMismatch(f"{t.op} takes {arity} argument(s), got {len(t.args)} in {render_term(t)}")
    for a in t.args:
        check_well_formed(a, signature)


def is_regular(ident: Identity) -> bool:
    return set(variables(ident.lhs)) == set(variables(ident.rhs))


def eval_term(alg: FiniteAlgebra, t: Term, assignment: Mapping[str, int]) -> int:
    if isinstance(t, Var):
        try:
            return assignment[t.name]
        except KeyError:
            raise UnboundVariable(f"variable {t.name!r} has no value") from None
    return alg.apply(t.op, *(eval_term(alg, a, assignment) for a in t.args))


def term_values(alg: FiniteAlgebra, t: Term, order: tuple[str, ...]) -> np.ndarray:
    """Value of t under every assignment, as an array of shape (n,) * len(order).

    Axis r holds the value of variable order[r].
    """
    check_well_formed(t, alg.signature)
    m = len(order)
    axes = {name: r for r, name in enumerate(order)}

    def walk(u: Term) -> np.ndarray:
        if isinstance(u, Var):
            if u.name not in axes:
                raise UnboundVariable(f"variable {u.name!r} has no value")
            shape = [1] * m
            shape[axes[u.name]] = alg.size
            return np.arange(alg.size, dtype=np.int64).reshape(shape)
        if not u.args:
            return np.full((1,) * m, alg.constant(u.op), dtype=np.int64)
        args = [walk(a) for a in u.args]
        return alg.table_nd(u.op)[tuple(args)]

    return np.broadcast_to(walk(t), (alg.size,) * m)


def identity_counterexample(alg: FiniteAlgebra, ident: Identity) -> dict[str, int] | None:
    """First falsifying assignment in lexicographic order, or None."""
    order = identity_variables(ident)
    lhs = term_values(alg, ident.lhs, order)
    rhs = term_values(alg, ident.rhs, order)
    if not order:
        return None if int(lhs) == int(rhs) else {}
    bad = np.argwhere(lhs != rhs)
    if not bad.size:
        return None
    return {name: int(v) for name, v in zip(order, bad[0])}


def satisfies_identity(alg: FiniteAlgebra, ident: Identity) -> bool:
    return identity_counterexample(alg, ident) is None


def term_operation(alg: FiniteAlgebra, t: Term, first: str = "x", second: str = "y") -> np.ndarray:
    """The binary term operation (a, b) -> t(a, b) as an n x n table."""
    return np.ascontiguousarray(term_values(alg, t, (first, second)))
