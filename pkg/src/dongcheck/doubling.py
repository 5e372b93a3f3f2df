"""Two-copy constructions turning a source algebra into an associative or Lie one.

Elements are pairs ``u + bar(v)``.  The three multiplication tables are

=====================  =================  =====================  ====================  ===============
kind                   u . v              bar(u) . v             u . bar(v)            bar(u) . bar(v)
=====================  =================  =====================  ====================  ===============
pre-assoc -> assoc     u*v                bar(u*v) - bar(uv)     bar(uv)               0
pre-Lie -> Lie         u o v - v o u      bar(u o v)             -bar(v o u)           0
Leibniz -> Lie         0                  [uv]                   -[vu]                 bar([uv])
=====================  =================  =====================  ====================  ===============

For the Leibniz kind the barred copy is the Lie quotient ``L / span{[ab]+[ba]}``;
barred parts are always stored as canonical representatives.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Optional

from .algebra import AlgebraHandle, FreeAlgebra
from .core import LinComb, as_lincomb, as_scalar, lincomb_combine
from .distributions import Distribution
from .linalg import EchelonBasis
from .varieties import LEIBNIZ, LIE, PRE_ASSOCIATIVE, RIGHT_SYMMETRIC, engine, fresh_generators


class DoublingKind(enum.Enum):
    PRE_ASSOC_TO_ASSOC = "preassoc-to-assoc"
    PRE_LIE_TO_LIE = "prelie-to-lie"
    LEIBNIZ_TO_LIE = "leibniz-to-lie"

    @property
    def source_variety(self):
        return {
            DoublingKind.PRE_ASSOC_TO_ASSOC: PRE_ASSOCIATIVE,
            DoublingKind.PRE_LIE_TO_LIE: RIGHT_SYMMETRIC,
            DoublingKind.LEIBNIZ_TO_LIE: LEIBNIZ,
        }[self]

    @property
    def target_op(self) -> str:
        return "star" if self is DoublingKind.PRE_ASSOC_TO_ASSOC else "bracket"

    @property
    def table(self) -> tuple:
        """The four sector rules as display strings, in the order
        (plain, plain), (bar, plain), (plain, bar), (bar, bar)."""
        return _TABLES[self]


_TABLES = {
    DoublingKind.PRE_ASSOC_TO_ASSOC: (
        "u.v = u*v",
        "bar(u).v = bar(u*v) - bar(uv)",
        "u.bar(v) = bar(uv)",
        "bar(u).bar(v) = 0",
    ),
    DoublingKind.PRE_LIE_TO_LIE: (
        "[u,v] = u o v - v o u",
        "[bar(u),v] = bar(u o v)",
        "[u,bar(v)] = -bar(v o u)",
        "[bar(u),bar(v)] = 0",
    ),
    DoublingKind.LEIBNIZ_TO_LIE: (
        "[u,v] = 0",
        "[bar(u),v] = [uv]",
        "[u,bar(v)] = -[vu]",
        "[bar(u),bar(v)] = bar([uv])",
    ),
}


class DoubledElement:
    """``plain + bar(barred)`` with both parts in the source algebra."""

    __slots__ = ("plain", "barred")

    def __init__(self, plain=None, barred=None):
        self.plain = LinComb() if plain is None else plain
        self.barred = LinComb() if barred is None else barred

    def __add__(self, other):
        return DoubledElement(self.plain + other.plain, self.barred + other.barred)

    def __sub__(self, other):
        return DoubledElement(self.plain - other.plain, self.barred - other.barred)

    def __neg__(self):
        return DoubledElement(-self.plain, -self.barred)

    def __rmul__(self, c):
        c = as_scalar(c)
        return DoubledElement(c * self.plain, c * self.barred)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.plain == 0 and self.barred == 0
        return (
            isinstance(other, DoubledElement)
            and self.plain == other.plain
            and self.barred == other.barred
        )

    def __hash__(self):
        return hash((self.plain, self.barred))

    def is_zero(self) -> bool:
        return self.plain.is_zero() and self.barred.is_zero()

    def __str__(self):
        parts = []
        if not self.plain.is_zero():
            parts.append(str(self.plain))
        if not self.barred.is_zero():
            parts.append(f"bar({self.barred})")
        return " + ".join(parts) or "0"

    __repr__ = __str__


class LeibnizQuotient:
    """Canonical representatives of ``L / span{[ab] + [ba]}``.

    Works for the free Leibniz algebra (the quotient is the free Lie algebra,
    so the Lie normal form is a canonical representative) and for
    finite-dimensional Leibniz algebras with LinComb elements (echelon reduction).
    """

    def __init__(self, L: AlgebraHandle):
        self.L = L
        self._basis: Optional[EchelonBasis] = None
        if isinstance(L, FreeAlgebra):
            if L.variety is not LEIBNIZ:
                raise ValueError(f"{L.name} is not a Leibniz algebra")
            self._lie = engine(LIE, L.cap)
        else:
            self._lie = None
            basis = EchelonBasis(lambda t: t.struct)
            elems = L.basis_elements()
            for u, v in itertools.product(elems, repeat=2):
                s = L.multiply("bracket", u, v) + L.multiply("bracket", v, u)
                basis.add(dict(s.unordered_items()))
            self._basis = basis

    def reduce(self, x) -> LinComb:
        x = as_lincomb(x)
        if self._lie is not None:
            return self._lie.normal_form(self.L.normal_form(x))
        return LinComb(self._basis.reduce(dict(x.unordered_items())))

    @property
    def ideal_dimension(self) -> Optional[int]:
        return None if self._basis is None else self._basis.rank


def leibniz_quotient_map(L: AlgebraHandle, x) -> LinComb:
    """Image of ``x`` in the Lie quotient, as a canonical representative."""
    return LeibnizQuotient(L).reduce(x)


class DoubledAlgebra(AlgebraHandle):
    """The doubled algebra over a source handle, as an algebra handle itself."""

    def __init__(self, kind: DoublingKind, source: AlgebraHandle):
        self.kind = kind
        self.source = source
        self.signature = (kind.target_op,)
        self.name = f"{kind.value} double of {source.name}"
        self._quotient = LeibnizQuotient(source) if kind is DoublingKind.LEIBNIZ_TO_LIE else None
        self._memo: dict = {}

    def zero(self) -> DoubledElement:
        return DoubledElement()

    def combine(self, pairs) -> DoubledElement:
        pairs = [(c, x) for c, x in pairs if c]
        return DoubledElement(lincomb_combine((c, x.plain) for c, x in pairs),
                              lincomb_combine((c, x.barred) for c, x in pairs))

    def plain(self, x) -> DoubledElement:
        return DoubledElement(self.source.normal_form(as_lincomb(x)), None)

    def bar(self, x) -> DoubledElement:
        return DoubledElement(None, self._bar_nf(as_lincomb(x)))

    def _bar_nf(self, x):
        x = self.source.normal_form(x)
        return self._quotient.reduce(x) if self._quotient is not None else x

    def normal_form(self, x: DoubledElement) -> DoubledElement:
        return DoubledElement(self.source.normal_form(x.plain), self._bar_nf(x.barred))

    def is_zero(self, x: DoubledElement) -> bool:
        y = self.normal_form(x)
        return y.plain.is_zero() and y.barred.is_zero()

    def multiply(self, op, x: DoubledElement, y: DoubledElement) -> DoubledElement:
        self.check_op(op)
        key = (x, y)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = double_multiply(self, x, y)
        return hit


def _sector_products(D: DoubledAlgebra, u, v, ub: bool, vb: bool) -> DoubledElement:
    S = D.source
    kind = D.kind
    mul = S.multiply
    zero = LinComb()
    if u.is_zero() or v.is_zero():
        return DoubledElement()
    if kind is DoublingKind.PRE_ASSOC_TO_ASSOC:
        if not ub and not vb:
            return DoubledElement(mul("star", u, v), zero)
        if ub and not vb:
            return DoubledElement(zero, mul("star", u, v) - mul("succ", u, v))
        if not ub and vb:
            return DoubledElement(zero, mul("succ", u, v))
        return DoubledElement()
    if kind is DoublingKind.PRE_LIE_TO_LIE:
        if not ub and not vb:
            return DoubledElement(mul("circ", u, v) - mul("circ", v, u), zero)
        if ub and not vb:
            return DoubledElement(zero, mul("circ", u, v))
        if not ub and vb:
            return DoubledElement(zero, -mul("circ", v, u))
        return DoubledElement()
    # Leibniz -> Lie; barred parts are representatives, placed on the left of brackets
    if not ub and not vb:
        return DoubledElement()
    if ub and not vb:
        return DoubledElement(mul("bracket", u, v), zero)
    if not ub and vb:
        return DoubledElement(-mul("bracket", v, u), zero)
    return DoubledElement(zero, mul("bracket", u, v))


def double_multiply(D: DoubledAlgebra, x: DoubledElement, y: DoubledElement) -> DoubledElement:
    """Bilinear extension of the kind's four-sector table."""
    if not isinstance(x, DoubledElement) or not isinstance(y, DoubledElement):
        raise TypeError("double_multiply expects DoubledElement arguments")
    total = DoubledElement()
    for ub, u in ((False, x.plain), (True, x.barred)):
        for vb, v in ((False, y.plain), (True, y.barred)):
            total = total + _sector_products(D, u, v, ub, vb)
    return D.normal_form(total)


# -- certification -----------------------------------------------------------


@dataclass(frozen=True)
class SectorResult:
    identity: str
    sector: tuple  # booleans: True means barred
    residue: DoubledElement

    @property
    def ok(self) -> bool:
        return self.residue.is_zero()

    @property
    def label(self) -> str:
        return ",".join("bar" if b else "plain" for b in self.sector)


def certify_sectors(kind: DoublingKind, cap: int = 3) -> list:
    """Target identities on fresh generators for every plain/bar sector."""
    D = DoubledAlgebra(kind, FreeAlgebra(kind.source_variety, cap))
    gens = fresh_generators(3)
    op = kind.target_op

    def lift(i, barred):
        g = LinComb.of(gens[i])
        return D.bar(g) if barred else D.plain(g)

    m = lambda x, y: D.multiply(op, x, y)
    out = []
    for sector in itertools.product((False, True), repeat=3):
        x, y, z = (lift(i, b) for i, b in enumerate(sector))
        if kind is DoublingKind.PRE_ASSOC_TO_ASSOC:
            out.append(SectorResult("associativity", sector, m(m(x, y), z) - m(x, m(y, z))))
        else:
            jac = m(x, m(y, z)) + m(y, m(z, x)) + m(z, m(x, y))
            out.append(SectorResult("jacobi", sector, D.normal_form(jac)))
    if kind is not DoublingKind.PRE_ASSOC_TO_ASSOC:
        for sector in itertools.product((False, True), repeat=2):
            x, y = (lift(i, b) for i, b in enumerate(sector))
            out.append(SectorResult("anticommutativity", sector, D.normal_form(m(x, y) + m(y, x))))
    return out


def certify_target_variety(kind: DoublingKind) -> bool:
    return all(r.ok for r in certify_sectors(kind))


# -- lifted distributions ----------------------------------------------------


def bar_lift(d: Distribution, D: DoubledAlgebra) -> Distribution:
    """``bar(d)(z)``: coefficient ``bar(d_n)`` at n over the doubled algebra."""
    if d.is_finite:
        return Distribution.from_finite(D, {n: D.bar(x) for n, x in d._finite.items()},
                                        name=f"bar({d.name})")
    return Distribution(D, builder=lambda n: D.bar(d[n]), lo=d.lo, hi=d.hi, name=f"bar({d.name})")


def plain_lift(d: Distribution, D: DoubledAlgebra) -> Distribution:
    if d.is_finite:
        return Distribution.from_finite(D, {n: D.plain(x) for n, x in d._finite.items()},
                                        name=d.name)
    return Distribution(D, builder=lambda n: D.plain(d[n]), lo=d.lo, hi=d.hi, name=d.name)


def barred_part(d: Distribution) -> Distribution:
    """Project a distribution over a double onto its barred coefficients."""
    D = d.algebra
    return Distribution(D.source, builder=lambda n: d[n].barred, lo=d.lo, hi=d.hi,
                        name=f"barpart({d.name})")


def plain_part(d: Distribution) -> Distribution:
    D = d.algebra
    return Distribution(D.source, builder=lambda n: d[n].plain, lo=d.lo, hi=d.hi,
                        name=f"plainpart({d.name})")
