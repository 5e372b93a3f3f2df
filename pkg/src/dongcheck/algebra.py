"""The product-and-equality oracle every distribution computation runs over."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .core import LinComb, as_lincomb, bilinear, lincomb_combine
from .varieties import SignatureMismatchError, Variety, engine


class AlgebraHandle:
    """An algebra as seen by the distribution calculus.

    Elements must support ``+``, ``-``, unary ``-`` and multiplication by a
    rational scalar on the left.  Subclasses provide :meth:`multiply`,
    :meth:`normal_form` and :meth:`zero`.
    """

    signature: Sequence[str] = ()
    name = "algebra"

    def multiply(self, op: str, x, y):
        raise NotImplementedError

    def normal_form(self, x):
        return x

    def zero(self):
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        return self.normal_form(x) == self.zero()

    def equal(self, x, y) -> bool:
        return self.is_zero(x - y)

    def check_op(self, op: str) -> None:
        if op not in self.signature:
            raise SignatureMismatchError(
                f"signature mismatch: {op!r} is not an operation of {self.name}"
            )

    def combine(self, pairs) -> object:
        """Exact sum of ``c * x`` over (scalar, element) pairs."""
        total = self.zero()
        if isinstance(total, LinComb):
            return lincomb_combine(pairs)
        for c, x in pairs:
            if c:
                total = total + Fraction(c) * x
        return total

    def format(self, x) -> str:
        return str(x)


class FreeAlgebra(AlgebraHandle):
    """Free algebra of a variety, elements in normal form up to the degree cap."""

    def __init__(self, variety: Variety, cap: int = 3):
        self.variety = variety
        self.cap = cap
        self.signature = variety.signature
        self.name = f"free {variety.name}"
        self._engine = engine(variety, cap)

    def multiply(self, op, x, y) -> LinComb:
        self.check_op(op)
        return self._engine.normal_form(bilinear(op, x, y))

    def normal_form(self, x) -> LinComb:
        return self._engine.normal_form(as_lincomb(x))

    def zero(self) -> LinComb:
        return LinComb()

    def is_zero(self, x) -> bool:
        return self.normal_form(x).is_zero()
