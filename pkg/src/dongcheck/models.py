"""Concrete algebras with closed-form products.

* :class:`WeylElement` / :class:`WeylAlgebra`: Laurent polynomials in ``t``
  with ``q`` on the right, subject to ``qt - tq = 1``.
* :class:`FiniteAlgebra`: structure constants on a named basis.
* :class:`NovikovModel`: a finite Novikov algebra, either from a table or as
  ``x o y = d(x) y`` over a commutative associative algebra with derivation.
* :class:`LaurentLie` and :class:`LaurentNovikov`: the Laurent extensions
  ``V[t, 1/t]`` with their bracket and Novikov product.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from math import factorial
from typing import Mapping, Optional, Sequence

import yaml

from .algebra import AlgebraHandle
from .core import GenSymbol, LinComb, as_scalar, lincomb_combine
from .distributions import Distribution, falling
from .varieties import LEIBNIZ, LIE, NOVIKOV, Variety, identity_witness


class ModelError(ValueError):
    pass


# -- Weyl algebra ------------------------------------------------------------


class WeylElement:
    """``sum c[n, m] t^n q^m`` with ``n`` any integer and ``m >= 0``."""

    __slots__ = ("_data",)

    def __init__(self, data: Optional[Mapping] = None):
        self._data = {}
        for (n, m), c in (data or {}).items():
            if m < 0:
                raise ModelError("powers of q must be non-negative")
            c = as_scalar(c)
            if c:
                self._data[(int(n), int(m))] = c

    @classmethod
    def monomial(cls, n: int, m: int = 0, c=1) -> "WeylElement":
        return cls({(n, m): c})

    @classmethod
    def t(cls, n: int = 1) -> "WeylElement":
        return cls.monomial(n, 0)

    @classmethod
    def q(cls, m: int = 1) -> "WeylElement":
        return cls.monomial(0, m)

    def items(self) -> list:
        return sorted(self._data.items())

    def coeff(self, n: int, m: int) -> Fraction:
        return self._data.get((n, m), Fraction(0))

    def __bool__(self):
        return bool(self._data)

    def is_zero(self) -> bool:
        return not self._data

    def _combine(self, other, sign):
        out = dict(self._data)
        for k, c in other._data.items():
            v = out.get(k, 0) + sign * c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        w = WeylElement()
        w._data = out
        return w

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Fraction(-1) * self

    def __rmul__(self, c):
        c = as_scalar(c)
        w = WeylElement()
        if c:
            w._data = {k: c * v for k, v in self._data.items()}
        return w

    def __mul__(self, other):
        if isinstance(other, WeylElement):
            return weyl_mul(self, other)
        return self.__rmul__(other)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self._data
        return isinstance(other, WeylElement) and self._data == other._data

    def __hash__(self):
        return hash(frozenset(self._data.items()))

    def __str__(self):
        if not self._data:
            return "0"
        parts = []
        for (n, m), c in sorted(self._data.items(), key=lambda kv: (-kv[0][1], -kv[0][0])):
            mono = "*".join(
                s for s in (
                    "" if n == 0 else ("t" if n == 1 else f"t^{n}"),
                    "" if m == 0 else ("q" if m == 1 else f"q^{m}"),
                ) if s
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    __repr__ = __str__


def weyl_mul(x: WeylElement, y: WeylElement) -> WeylElement:
    """Normal-ordered product using ``q^m t^k = sum_j C(m,j) k^(j) t^(k-j) q^(m-j)``."""
    out: dict = {}
    for (n, m), c in x._data.items():
        for (k, l), d in y._data.items():
            cd = c * d
            binom_m = 1
            for j in range(m + 1):
                if j:
                    binom_m = binom_m * (m - j + 1) // j
                f = falling(k, j)
                if f == 0:
                    break
                key = (n + k - j, m + l - j)
                v = out.get(key, 0) + cd * binom_m * f
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
    w = WeylElement()
    w._data = out
    return w


class WeylAlgebra(AlgebraHandle):
    signature = ("star",)
    name = "Weyl algebra"

    def multiply(self, op, x, y):
        self.check_op(op)
        return weyl_mul(x, y)

    def zero(self):
        return WeylElement()

    def is_zero(self, x) -> bool:
        return x.is_zero()


WEYL = WeylAlgebra()


def weyl_distribution(m: int, window: int) -> Distribution:
    """``q^(m)(z) = sum_n (1/m!) t^n q^m z^(-n-1)``, valid on ``[-window, window]``."""
    if m < 0:
        raise ModelError("m must be non-negative")
    scale = Fraction(1, factorial(m))
    return Distribution.from_builder(
        WEYL, lambda n: WeylElement.monomial(n, m, scale), window, name=f"q{m}"
    )


# -- finite-dimensional algebras --------------------------------------------


class FiniteAlgebra(AlgebraHandle):
    """Structure constants ``table[op][(i, j)] = {k: c}`` on named basis vectors.

    Elements are :class:`LinComb` values over unindexed generators named after
    the basis.
    """

    def __init__(self, basis: Sequence[str], table: Mapping, name: str = "algebra"):
        self.basis = tuple(basis)
        self.signature = tuple(table)
        self.name = name
        self.position = {b: i for i, b in enumerate(self.basis)}
        self.table = {}
        for op, entries in table.items():
            clean = {}
            for (i, j), out in entries.items():
                row = {int(k): as_scalar(c) for k, c in out.items() if as_scalar(c)}
                if row:
                    clean[(int(i), int(j))] = row
            self.table[op] = clean
        self._symbols = tuple(GenSymbol(b) for b in self.basis)
        self._memo: dict = {}

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def e(self, i) -> LinComb:
        if isinstance(i, str):
            i = self.position[i]
        return LinComb.of(self._symbols[i])

    def basis_elements(self) -> list:
        return [self.e(i) for i in range(self.dimension)]

    def element(self, coeffs: Sequence) -> LinComb:
        return lincomb_combine((c, self.e(i)) for i, c in enumerate(coeffs))

    def vector(self, x: LinComb) -> list:
        out = [Fraction(0)] * self.dimension
        for t, c in x.unordered_items():
            if not isinstance(t, GenSymbol) or t.name not in self.position or t.index is not None:
                raise ModelError(f"{t} is not a basis vector of {self.name}")
            out[self.position[t.name]] += c
        return out

    def multiply(self, op, x, y) -> LinComb:
        key = (op, x, y)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._multiply(op, x, y)
        return hit

    def _multiply(self, op, x, y) -> LinComb:
        self.check_op(op)
        tab = self.table[op]
        u, v = self.vector(x), self.vector(y)
        out = [Fraction(0)] * self.dimension
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                for k, c in tab.get((i, j), {}).items():
                    out[k] += a * b * c
        return self.element(out)

    def zero(self) -> LinComb:
        return LinComb()

    def normal_form(self, x) -> LinComb:
        return x

    def is_zero(self, x) -> bool:
        return x.is_zero()

    def identity_witness(self, variety: Variety):
        """First failing identity instance on basis vectors, or None."""
        return identity_witness(variety, self.multiply, self.basis_elements(), self.is_zero)


def _table_from_rows(dim: int, products: Mapping) -> dict:
    """Accept ``{(i, j): vector}`` or ``{(i, j): {k: c}}``."""
    out = {}
    for (i, j), val in products.items():
        if isinstance(val, Mapping):
            out[(i, j)] = dict(val)
        else:
            out[(i, j)] = {k: c for k, c in enumerate(val) if c}
    return out


# -- Novikov models ----------------------------------------------------------


class NovikovModel(FiniteAlgebra):
    """Finite Novikov algebra on the ``circ`` operation.

    When built from a derivation, ``commutative`` holds the underlying
    commutative associative algebra and ``derivation`` the matrix of ``d``
    (column ``j`` is ``d(e_j)``).
    """

    def __init__(self, basis, circ_table, name="Novikov model", commutative=None, derivation=None):
        super().__init__(basis, {"circ": circ_table}, name=name)
        if self.dimension > 6:
            raise ModelError("Novikov models are limited to dimension 6")
        self.commutative = commutative
        self.derivation = derivation
        bad = self.identity_witness(NOVIKOV)
        if bad:
            raise ModelError(f"not a Novikov algebra: {bad[0]} fails on basis triple {bad[1]}")

    @classmethod
    def from_table(cls, basis, circ_table, name="Novikov model") -> "NovikovModel":
        return cls(basis, _table_from_rows(len(basis), circ_table), name=name)

    def derive(self, x: LinComb) -> LinComb:
        if self.derivation is None:
            raise ModelError(f"{self.name} carries no derivation")
        v = self.commutative.vector(x)
        d = self.derivation
        return self.commutative.element(
            [sum(d[i][j] * v[j] for j in range(self.dimension)) for i in range(self.dimension)]
        )


def make_novikov_from_derivation(basis: Sequence[str], products: Mapping, d: Sequence[Sequence],
                                 name: str = "A^(d)") -> NovikovModel:
    """Novikov algebra ``x o y = d(x) y`` from a commutative associative algebra.

    ``products`` maps basis index pairs to output vectors; missing pairs are
    zero.  ``d`` is a square matrix whose column ``j`` is ``d(e_j)``.
    """
    dim = len(basis)
    A = FiniteAlgebra(basis, {"star": _table_from_rows(dim, products)}, name=f"{name} base")
    D = [[as_scalar(c) for c in row] for row in d]
    if len(D) != dim or any(len(row) != dim for row in D):
        raise ModelError(f"derivation matrix must be {dim}x{dim}")
    E = A.basis_elements()
    mul = lambda x, y: A.multiply("star", x, y)

    def apply_d(x):
        v = A.vector(x)
        return A.element([sum(D[i][j] * v[j] for j in range(dim)) for i in range(dim)])

    for i, j in itertools.product(range(dim), repeat=2):
        if mul(E[i], E[j]) != mul(E[j], E[i]):
            raise ModelError(f"not commutative-associative: commutativity fails on ({basis[i]}, {basis[j]})")
    for i, j, k in itertools.product(range(dim), repeat=3):
        if mul(mul(E[i], E[j]), E[k]) != mul(E[i], mul(E[j], E[k])):
            raise ModelError(
                f"not commutative-associative: associativity fails on "
                f"({basis[i]}, {basis[j]}, {basis[k]})"
            )
    for i, j in itertools.product(range(dim), repeat=2):
        lhs = apply_d(mul(E[i], E[j]))
        rhs = mul(apply_d(E[i]), E[j]) + mul(E[i], apply_d(E[j]))
        if lhs != rhs:
            raise ModelError(f"not a derivation: Leibniz rule fails on ({basis[i]}, {basis[j]})")
    circ = {}
    for i, j in itertools.product(range(dim), repeat=2):
        v = A.vector(mul(apply_d(E[i]), E[j]))
        row = {k: c for k, c in enumerate(v) if c}
        if row:
            circ[(i, j)] = row
    return NovikovModel(basis, circ, name=name, commutative=A, derivation=D)


def truncated_polynomial_model() -> NovikovModel:
    """``k[u]/(u^3)`` with the Euler derivation ``d = u d/du``.

    (``d/du`` itself does not preserve the ideal ``(u^3)``.)
    """
    products = {(0, 0): [1, 0, 0], (0, 1): [0, 1, 0], (1, 0): [0, 1, 0],
                (0, 2): [0, 0, 1], (2, 0): [0, 0, 1], (1, 1): [0, 0, 1]}
    d = [[0, 0, 0], [0, 1, 0], [0, 0, 2]]
    return make_novikov_from_derivation(("1", "u", "u2"), products, d, name="k[u]/(u^3)")


def scalar_model() -> NovikovModel:
    """The unital one-dimensional algebra with ``d = 0`` (trivial product)."""
    return make_novikov_from_derivation(("1",), {(0, 0): [1]}, [[0]], name="k")


def virasoro_model() -> NovikovModel:
    """One-dimensional model with ``e o e = e``."""
    return NovikovModel.from_table(("e",), {(0, 0): [1]}, name="virasoro")


NOVIKOV_MODELS = {
    "virasoro": virasoro_model,
    "trunc": truncated_polynomial_model,
}


def load_model(path: str) -> NovikovModel:
    """Read a model file (JSON or YAML).

    Keys: ``dimension``; optional ``basis`` names; ``products`` as a list of
    ``[i, j, [c_0, ..., c_(dim-1)]]`` rows; and either ``derivation`` (square
    matrix, column j is d(e_j)) or ``circ`` rows in the same format as
    ``products`` for a Novikov table given directly.
    """
    with open(path) as fh:
        text = fh.read()
    if path.endswith(".json"):
        data = json.loads(text)
    else:
        data = yaml.safe_load(text)
    return model_from_data(data, name=path)


def _parse_scalar(c):
    return Fraction(str(c)) if not isinstance(c, (int, Fraction)) else Fraction(c)


def model_from_data(data: Mapping, name: str = "model") -> NovikovModel:
    try:
        dim = int(data["dimension"])
    except (KeyError, TypeError, ValueError):
        raise ModelError("model data needs an integer 'dimension'") from None
    basis = tuple(str(b) for b in data.get("basis", [f"e{i}" for i in range(dim)]))
    if len(basis) != dim:
        raise ModelError("basis length does not match dimension")

    def rows(key):
        out = {}
        for entry in data.get(key, []):
            i, j, vec = entry
            if len(vec) != dim:
                raise ModelError(f"{key} row for ({i}, {j}) has the wrong length")
            out[(int(i), int(j))] = [_parse_scalar(c) for c in vec]
        return out

    if "derivation" in data:
        d = [[_parse_scalar(c) for c in row] for row in data["derivation"]]
        return make_novikov_from_derivation(basis, rows("products"), d, name=name)
    if "circ" in data:
        return NovikovModel.from_table(basis, rows("circ"), name=name)
    raise ModelError("model data needs 'derivation' (with 'products') or 'circ'")


# -- Laurent extensions ------------------------------------------------------


class _LaurentBase(AlgebraHandle):
    """Elements ``sum c v_i t^n`` stored as LinComb over ``GenSymbol(v_i, n)``."""

    def __init__(self, model: NovikovModel):
        self.model = model
        self._products: dict = {}

    def multiply(self, op, x, y) -> LinComb:
        """Bilinear extension of the cached product of monomials ``v t^n``."""
        self.check_op(op)
        parts = []
        for s, c in x.unordered_items():
            for t, d in y.unordered_items():
                key = (s, t)
                val = self._products.get(key)
                if val is None:
                    self._check_monomial(s)
                    self._check_monomial(t)
                    val = self._products[key] = self._monomial_product(
                        self.model.e(s.name), s.index, self.model.e(t.name), t.index
                    )
                parts.append((c * d, val))
        return lincomb_combine(parts)

    def _check_monomial(self, t):
        if not isinstance(t, GenSymbol) or t.index is None or t.name not in self.model.position:
            raise ModelError(f"{t} is not an element of {self.name}")

    def _monomial_product(self, a, n, b, m) -> LinComb:
        raise NotImplementedError

    def element(self, v: LinComb, n: int) -> LinComb:
        """``v t^n`` for a model element ``v``."""
        return lincomb_combine(
            (c, LinComb.of(GenSymbol(t.name, n))) for t, c in v.unordered_items()
        )

    def basis_element(self, name: str, n: int) -> LinComb:
        if name not in self.model.position:
            raise ModelError(f"{name!r} is not a basis vector of {self.model.name}")
        return LinComb.of(GenSymbol(name, n))

    def split(self, x: LinComb) -> dict:
        """Group by power of t: ``n -> model element``."""
        out: dict = {}
        for t, c in x.unordered_items():
            if not isinstance(t, GenSymbol) or t.index is None or t.name not in self.model.position:
                raise ModelError(f"{t} is not an element of {self.name}")
            out.setdefault(t.index, []).append((c, self.model.e(t.name)))
        return {n: lincomb_combine(parts) for n, parts in out.items()}

    def zero(self) -> LinComb:
        return LinComb()

    def normal_form(self, x):
        return x

    def is_zero(self, x) -> bool:
        return x.is_zero()

    def distribution(self, name: str, window: int, shift: int = 0) -> Distribution:
        """``sum_n v t^(n+shift) z^(-n-1)`` for a basis vector ``v``."""
        return Distribution.from_builder(
            self, lambda n: self.basis_element(name, n + shift), window,
            name=f"{name}t^{shift}" if shift else name,
        )


class LaurentLie(_LaurentBase):
    """``[a t^n, b t^m] = (n (b o a) - m (a o b)) t^(n+m-1)``."""

    signature = ("bracket",)

    def __init__(self, model: NovikovModel):
        super().__init__(model)
        self.name = f"Laurent Lie algebra over {model.name}"

    def _monomial_product(self, a, n, b, m) -> LinComb:
        circ = self.model.multiply
        return self.element(n * circ("circ", b, a) - m * circ("circ", a, b), n + m - 1)


def novikov_laurent_bracket(L: LaurentLie, x: LinComb, y: LinComb) -> LinComb:
    """``[a t^n, b t^m] = (n (b o a) - m (a o b)) t^(n+m-1)``, extended bilinearly."""
    if not isinstance(L, LaurentLie):
        raise ModelError("bracket needs a Laurent Lie algebra")
    return L.multiply("bracket", x, y)


class LaurentNovikov(_LaurentBase):
    """``A[t, 1/t]`` with ``x o y = D(x) y`` for ``D = d + d/dt``."""

    signature = ("circ",)

    def __init__(self, model: NovikovModel):
        if model.derivation is None:
            raise ModelError("the Laurent Novikov algebra needs a model built from a derivation")
        super().__init__(model)
        self.name = f"Laurent Novikov algebra over {model.name}"

    def _monomial_product(self, a, n, b, m) -> LinComb:
        out = self.element(self.model.multiply("circ", a, b), n + m)
        if n:
            out = out + n * self.element(self.model.commutative.multiply("star", a, b), n + m - 1)
        return out


# -- Leibniz samples ---------------------------------------------------------


def sample_leibniz_algebra() -> FiniteAlgebra:
    """Two-dimensional non-Lie Leibniz algebra: [x,x] = y, [x,y] = y."""
    L = FiniteAlgebra(("x", "y"), {"bracket": {(0, 0): {1: 1}, (0, 1): {1: 1}}},
                      name="Leibniz sample")
    bad = L.identity_witness(LEIBNIZ)
    if bad:
        raise ModelError(f"sample algebra fails {bad[0]} on {bad[1]}")
    return L


def sample_lie_algebra() -> FiniteAlgebra:
    """Two-dimensional non-abelian Lie algebra: [x,y] = y = -[y,x]."""
    L = FiniteAlgebra(("x", "y"), {"bracket": {(0, 1): {1: 1}, (1, 0): {1: -1}}},
                      name="Lie sample")
    bad = L.identity_witness(LIE)
    if bad:
        raise ModelError(f"sample algebra fails {bad[0]} on {bad[1]}")
    return L


def polynomial_family(L: FiniteAlgebra, coeffs: Mapping[str, Sequence], window: int,
                      name: str) -> Distribution:
    """``sum_n (sum_i p_i(n) e_i) z^(-n-1)`` with ``p_i`` given by coefficient lists."""

    def build(n):
        return lincomb_combine(
            (sum(Fraction(c) * n**k for k, c in enumerate(p)), L.e(b)) for b, p in coeffs.items()
        )

    return Distribution.from_builder(L, build, window, name=name)
