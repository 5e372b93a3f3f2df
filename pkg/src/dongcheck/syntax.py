"""Text grammar for terms, linear combinations and index-parametrized templates.

Leaves are ``a(n)`` or a bare name ``q``; nodes are ``(<lhs> <op> <rhs>)`` with
op tokens ``*`` (star), ``.`` (succ / juxtaposition), ``o`` (circ), or
``[lhs,rhs]`` for brackets.  Linear combinations read ``c1*T1 + c2*T2`` with
rational coefficients written ``p/q``.

Leaf subscripts may be linear index expressions such as ``n+m`` or ``k-1``;
those parse into templates that are instantiated with :func:`instantiate`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Union

from .core import TOKEN_OPS, GenSymbol, LinComb, Node, Term, lincomb_combine


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class IndexExpr:
    """Integer-valued linear expression ``const + sum(coef * var)``."""

    const: int = 0
    coeffs: tuple = ()  # sorted (var, coef) pairs, no zeros

    @classmethod
    def var(cls, name: str) -> "IndexExpr":
        return cls(0, ((name, 1),))

    @property
    def variables(self) -> set:
        return {v for v, _ in self.coeffs}

    def is_var(self) -> bool:
        return self.const == 0 and len(self.coeffs) == 1 and self.coeffs[0][1] == 1

    def __add__(self, other: "IndexExpr") -> "IndexExpr":
        d = dict(self.coeffs)
        for v, c in other.coeffs:
            d[v] = d.get(v, 0) + c
        return IndexExpr(
            self.const + other.const, tuple(sorted((v, c) for v, c in d.items() if c))
        )

    def scale(self, k: int) -> "IndexExpr":
        return IndexExpr(
            self.const * k, tuple((v, c * k) for v, c in self.coeffs if c * k)
        )

    def evaluate(self, env: Mapping[str, int]) -> int:
        try:
            return self.const + sum(c * env[v] for v, c in self.coeffs)
        except KeyError as exc:
            raise ParseError(f"unbound index variable {exc.args[0]!r}") from None

    def __str__(self):
        parts = []
        for v, c in self.coeffs:
            if c == 1:
                parts.append(f"+{v}")
            elif c == -1:
                parts.append(f"-{v}")
            else:
                parts.append(f"{c:+d}{v}")
        if self.const or not parts:
            parts.append(f"{self.const:+d}")
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


@dataclass(frozen=True)
class TLeaf:
    name: str
    index: Optional[IndexExpr]


@dataclass(frozen=True)
class TNode:
    op: str
    left: "Template"
    right: "Template"


Template = Union[TLeaf, TNode]


@dataclass
class TemplateComb:
    """Linear combination of templates (coefficients exact)."""

    items: list = field(default_factory=list)  # [(Fraction, Template)]


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>->|!=|<=|>=|==|[-+*/.()\[\],<>]))"
)


def _tokenize(text: str) -> list:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else (None, None)

    def take(self, value=None, kind=None):
        tk = self.peek()
        if tk[0] is None:
            raise ParseError(f"unexpected end of input in {self.text!r}")
        if value is not None and tk[1] != value:
            raise ParseError(f"expected {value!r}, got {tk[1]!r} in {self.text!r}")
        if kind is not None and tk[0] != kind:
            raise ParseError(f"expected {kind}, got {tk[1]!r} in {self.text!r}")
        self.i += 1
        return tk

    def at_end(self) -> bool:
        return self.i >= len(self.toks)

    # index expressions: linear combinations of integers and variables
    def index_expr(self) -> IndexExpr:
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        expr = self.index_atom().scale(sign)
        while self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
            expr = expr + self.index_atom().scale(sign)
        return expr

    def index_atom(self) -> IndexExpr:
        kind, val = self.peek()
        if kind == "num":
            self.take()
            k = int(val)
            if self.peek()[0] == "name":
                return IndexExpr.var(self.take()[1]).scale(k)
            if self.peek()[1] == "*" and self.peek(1)[0] == "name":
                self.take()
                return IndexExpr.var(self.take()[1]).scale(k)
            return IndexExpr(k)
        if kind == "name":
            self.take()
            return IndexExpr.var(val)
        raise ParseError(f"bad index expression near {val!r} in {self.text!r}")

    def template(self) -> Template:
        kind, val = self.peek()
        if val == "(":
            self.take("(")
            left = self.template()
            op_tok = self.take()[1]
            if op_tok not in TOKEN_OPS:
                raise ParseError(f"unknown operation token {op_tok!r} in {self.text!r}")
            right = self.template()
            self.take(")")
            return TNode(TOKEN_OPS[op_tok], left, right)
        if val == "[":
            self.take("[")
            left = self.template()
            self.take(",")
            right = self.template()
            self.take("]")
            return TNode("bracket", left, right)
        if kind == "name":
            self.take()
            if val == "o":
                raise ParseError("'o' is reserved for the circ operation")
            if self.peek()[1] == "(":
                self.take("(")
                idx = self.index_expr()
                self.take(")")
                return TLeaf(val, idx)
            return TLeaf(val, None)
        raise ParseError(f"expected a term near {val!r} in {self.text!r}")

    def loose_template(self) -> Template:
        # a single unparenthesized operation is accepted at top level
        t = self.template()
        tok = self.peek()[1]
        if tok in TOKEN_OPS and (tok != "o" or self.peek()[0] == "name"):
            self.take()
            t = TNode(TOKEN_OPS[tok], t, self.template())
        return t

    def coefficient(self) -> Fraction:
        num = int(self.take(kind="num")[1])
        if self.peek()[1] == "/" and self.peek(1)[0] == "num":
            self.take("/")
            return Fraction(num, int(self.take(kind="num")[1]))
        return Fraction(num)

    def summand(self):
        if self.peek()[0] == "num":
            c = self.coefficient()
            if self.peek()[1] == "*":
                self.take("*")
                return c, self.loose_template()
            return c, None
        return Fraction(1), self.loose_template()

    def template_comb(self, stop=()) -> TemplateComb:
        items = []
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        while True:
            c, t = self.summand()
            if t is not None:
                items.append((sign * c, t))
            elif c:
                raise ParseError("bare nonzero scalar is not an algebra element")
            if self.peek()[1] in ("+", "-") and self.peek()[1] not in stop:
                sign = -1 if self.take()[1] == "-" else 1
                continue
            return TemplateComb(items)


def parse_template(text: str) -> Template:
    p = _Parser(text)
    t = p.loose_template()
    if not p.at_end():
        raise ParseError(f"trailing input in {text!r}")
    return t


def parse_template_comb(text: str) -> TemplateComb:
    p = _Parser(text)
    tc = p.template_comb()
    if not p.at_end():
        raise ParseError(f"trailing input in {text!r}")
    return tc


def instantiate(t: Template, env: Mapping[str, int] = {}) -> Term:
    if isinstance(t, TLeaf):
        return GenSymbol(t.name, None if t.index is None else t.index.evaluate(env))
    return Node(t.op, instantiate(t.left, env), instantiate(t.right, env))


def instantiate_comb(tc: TemplateComb, env: Mapping[str, int] = {}) -> LinComb:
    return lincomb_combine((c, LinComb.of(instantiate(t, env))) for c, t in tc.items)


def parse_term(text: str) -> Term:
    return instantiate(parse_template(text))


def parse_lincomb(text: str) -> LinComb:
    return instantiate_comb(parse_template_comb(text))


def template_vars(t: Template) -> set:
    if isinstance(t, TLeaf):
        return set() if t.index is None else t.index.variables
    return template_vars(t.left) | template_vars(t.right)


def template_weight(t: Template) -> IndexExpr:
    if isinstance(t, TLeaf):
        if t.index is None:
            raise ParseError(f"unindexed leaf {t.name!r} has no weight")
        return t.index
    return template_weight(t.left) + template_weight(t.right)


def template_degree(t: Template) -> int:
    if isinstance(t, TLeaf):
        return 1
    return template_degree(t.left) + template_degree(t.right)


def match(t: Template, term: Term, env: Optional[dict] = None) -> Optional[dict]:
    """Match a pattern template against a concrete term.

    Pattern leaf subscripts must be integers or bare variables; repeated
    variables must bind to equal indices.
    """
    env = {} if env is None else env
    if isinstance(t, TLeaf):
        if not isinstance(term, GenSymbol) or term.name != t.name:
            return None
        if t.index is None:
            return env if term.index is None else None
        if term.index is None:
            return None
        e = t.index
        if not e.coeffs:
            return env if term.index == e.const else None
        var = e.coeffs[0][0]
        if var in env:
            return env if env[var] == term.index else None
        env[var] = term.index
        return env
    if not isinstance(term, Node) or term.op != t.op:
        return None
    env = match(t.left, term.left, env)
    if env is None:
        return None
    return match(t.right, term.right, env)


def format_template(t: Template) -> str:
    if isinstance(t, TLeaf):
        return t.name if t.index is None else f"{t.name}({t.index})"
    from .core import OP_TOKENS

    if t.op == "bracket":
        return f"[{format_template(t.left)},{format_template(t.right)}]"
    return f"({format_template(t.left)} {OP_TOKENS[t.op]} {format_template(t.right)})"
