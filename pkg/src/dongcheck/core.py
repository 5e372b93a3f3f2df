"""Exact scalars, generator symbols, operation-labelled terms and linear combinations.

Every algebra element built on the free or presented side of the library is a
:class:`LinComb` of :class:`Term` values with :class:`fractions.Fraction`
coefficients.  Terms are immutable and hash by structure.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Union

Scalar = Fraction

#: operation labels and their rank inside the structural term order
OP_RANK = {"succ": 0, "star": 1, "circ": 2, "bracket": 3}
OP_TOKENS = {"star": "*", "succ": ".", "circ": "o"}
TOKEN_OPS = {v: k for k, v in OP_TOKENS.items()}


class UnweightedTermError(ValueError):
    pass


def as_scalar(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("floating-point coefficients are not allowed")
    return Fraction(c)


def index_key(index: Optional[int]) -> tuple:
    """Order a_0 < a_{-1} < a_1 < a_{-2} < a_2 < ...; unindexed symbols come first."""
    if index is None:
        return (0,)
    return (1, abs(index), 0 if index <= 0 else 1)


class GenSymbol:
    """A generator: a short name with an optional integer subscript."""

    __slots__ = ("name", "index", "_hash", "struct")

    degree = 1

    def __init__(self, name: str, index: Optional[int] = None):
        self.name = name
        self.index = index
        self._hash = hash((name, index))
        self.struct = (0, name, index_key(index))

    @property
    def weight(self) -> Optional[int]:
        return self.index

    def __eq__(self, other):
        return (
            isinstance(other, GenSymbol)
            and self.name == other.name
            and self.index == other.index
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other: GenSymbol):
        return self.struct < other.struct

    def __repr__(self):
        return f"GenSymbol({self.name!r}, {self.index!r})"

    def __str__(self):
        return format_term(self)


class Node:
    """Binary operation node ``op(left, right)``."""

    __slots__ = ("op", "left", "right", "degree", "weight", "struct", "_hash")

    def __init__(self, op: str, left: "Term", right: "Term"):
        if op not in OP_RANK:
            raise ValueError(f"unknown operation label {op!r}")
        self.op = op
        self.left = left
        self.right = right
        self.degree = left.degree + right.degree
        lw, rw = left.weight, right.weight
        self.weight = None if lw is None or rw is None else lw + rw
        self.struct = (1, left.struct, right.struct, OP_RANK[op])
        self._hash = hash((op, left, right))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Node)
            and self._hash == other._hash
            and self.op == other.op
            and self.left == other.left
            and self.right == other.right
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Node({self.op!r}, {self.left!r}, {self.right!r})"

    def __str__(self):
        return format_term(self)


Term = Union[GenSymbol, Node]


def gen(index: int, name: str = "a") -> GenSymbol:
    return GenSymbol(name, index)


def term_degree(t: Term) -> int:
    return t.degree


def term_weight(t: Term) -> int:
    w = t.weight
    if w is None:
        raise UnweightedTermError(f"unweighted term {format_term(t)}")
    return w


def term_key(t: Term) -> tuple:
    """Canonical order: degree, then weight, then structure."""
    w = t.weight
    return (t.degree, (0,) if w is None else (1, w), t.struct)


def rank_key(t: Term) -> tuple:
    """Degree-then-structure order used to orient rewriting rules."""
    return (t.degree, t.struct)


def leaves(t: Term) -> Iterator[GenSymbol]:
    if isinstance(t, GenSymbol):
        yield t
    else:
        yield from leaves(t.left)
        yield from leaves(t.right)


def ops_of(t: Term) -> set:
    if isinstance(t, GenSymbol):
        return set()
    return {t.op} | ops_of(t.left) | ops_of(t.right)


def format_term(t: Term) -> str:
    if isinstance(t, GenSymbol):
        if t.index is None:
            return t.name
        return f"{t.name}({t.index})"
    if t.op == "bracket":
        return f"[{format_term(t.left)},{format_term(t.right)}]"
    return f"({format_term(t.left)} {OP_TOKENS[t.op]} {format_term(t.right)})"


def format_scalar(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class LinComb:
    """Finite linear combination of terms with exact rational coefficients.

    Zero coefficients are never stored.  Iteration follows the canonical term
    order, so printing and serialization are deterministic.
    """

    __slots__ = ("_data", "_hash")

    def __init__(self, data: Optional[Mapping[Term, object]] = None):
        clean = {}
        if data:
            for t, c in data.items():
                c = as_scalar(c)
                if c:
                    clean[t] = c
        self._data = clean
        self._hash = None

    @classmethod
    def _raw(cls, data: dict) -> "LinComb":
        obj = cls.__new__(cls)
        obj._data = data
        obj._hash = None
        return obj

    @classmethod
    def of(cls, t: Term, c=1) -> "LinComb":
        c = as_scalar(c)
        return cls._raw({t: c} if c else {})

    # -- container protocol
    def __len__(self):
        return len(self._data)

    def __bool__(self):
        return bool(self._data)

    def __iter__(self):
        return iter(self.terms())

    def __contains__(self, t):
        return t in self._data

    def coeff(self, t: Term) -> Fraction:
        return self._data.get(t, Fraction(0))

    def terms(self) -> list:
        return sorted(self._data, key=term_key)

    def items(self) -> list:
        return [(t, self._data[t]) for t in self.terms()]

    def unordered_items(self):
        return self._data.items()

    def is_zero(self) -> bool:
        return not self._data

    @property
    def degree(self) -> int:
        return max((t.degree for t in self._data), default=0)

    def weights(self) -> set:
        return {term_weight(t) for t in self._data}

    # -- arithmetic
    def __add__(self, other: "LinComb") -> "LinComb":
        if not isinstance(other, LinComb):
            return NotImplemented
        if len(other._data) > len(self._data):
            self, other = other, self
        out = dict(self._data)
        for t, c in other._data.items():
            v = out.get(t, 0) + c
            if v:
                out[t] = v
            else:
                out.pop(t, None)
        return LinComb._raw(out)

    def __neg__(self) -> "LinComb":
        return LinComb._raw({t: -c for t, c in self._data.items()})

    def __sub__(self, other: "LinComb") -> "LinComb":
        if not isinstance(other, LinComb):
            return NotImplemented
        return self + (-other)

    def __rmul__(self, c) -> "LinComb":
        if isinstance(c, LinComb):
            return NotImplemented
        c = as_scalar(c)
        if not c:
            return LinComb()
        return LinComb._raw({t: c * v for t, v in self._data.items()})

    __mul__ = __rmul__

    def __eq__(self, other):
        if isinstance(other, LinComb):
            return self._data == other._data
        if other == 0:
            return not self._data
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._data.items()))
        return self._hash

    def __repr__(self):
        return f"LinComb({format_lincomb(self)!r})"

    def __str__(self):
        return format_lincomb(self)


def lincomb_combine(xs: Iterable[tuple]) -> LinComb:
    """Exact combination ``sum(c * x for c, x in xs)``."""
    out: dict = {}
    for c, x in xs:
        c = as_scalar(c)
        if not c:
            continue
        for t, v in x.unordered_items():
            s = out.get(t, 0) + c * v
            if s:
                out[t] = s
            else:
                out.pop(t, None)
    return LinComb._raw(out)


def as_lincomb(x) -> LinComb:
    if isinstance(x, LinComb):
        return x
    if isinstance(x, (GenSymbol, Node)):
        return LinComb.of(x)
    raise TypeError(f"cannot interpret {x!r} as a linear combination")


def bilinear(op: str, x, y) -> LinComb:
    """Bilinear extension of the node constructor ``op``."""
    x, y = as_lincomb(x), as_lincomb(y)
    out: dict = {}
    for s, c in x.unordered_items():
        for t, d in y.unordered_items():
            n = Node(op, s, t)
            v = out.get(n, 0) + c * d
            if v:
                out[n] = v
            else:
                out.pop(n, None)
    return LinComb._raw(out)


def substitute(t: Term, mapping: Mapping[GenSymbol, LinComb]) -> LinComb:
    """Replace leaves by linear combinations (multilinear substitution)."""
    if isinstance(t, GenSymbol):
        return as_lincomb(mapping[t]) if t in mapping else LinComb.of(t)
    return bilinear(t.op, substitute(t.left, mapping), substitute(t.right, mapping))


def substitute_lincomb(x: LinComb, mapping: Mapping[GenSymbol, LinComb]) -> LinComb:
    return lincomb_combine((c, substitute(t, mapping)) for t, c in x.unordered_items())


def map_terms(x: LinComb, fn) -> LinComb:
    """Apply a term -> LinComb map linearly."""
    return lincomb_combine((c, fn(t)) for t, c in x.unordered_items())


def format_lincomb(x: LinComb) -> str:
    if x.is_zero():
        return "0"
    parts = []
    for i, (t, c) in enumerate(x.items()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = format_term(t) if a == 1 else f"{format_scalar(a)}*{format_term(t)}"
        if i == 0:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)
