"""Formal distributions on explicit integer windows.

A :class:`Distribution` stands for ``a(z) = sum_n a_n z^(-n-1)`` over an
:class:`~dongcheck.algebra.AlgebraHandle`.  Coefficients come either from a
finite mapping (zero elsewhere) or from a builder valid on a declared range;
reading a builder outside its range raises instead of returning zero, so a
missing coefficient can never masquerade as locality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, inf
from typing import Callable, Mapping, Optional

from .algebra import AlgebraHandle


class WindowError(ValueError):
    """Raised when a coefficient outside a validity window is requested."""


class NotLocalError(ValueError):
    pass


def falling(k: int, j: int) -> int:
    """Falling factorial k (k-1) ... (k-j+1)."""
    out = 1
    for i in range(j):
        out *= k - i
    return out


def binom(k: int, s: int) -> Fraction:
    """Generalized binomial coefficient, valid for negative ``k``."""
    return Fraction(falling(k, s), factorial(s))


class Distribution:
    """Coefficient source with an exact validity window ``[lo, hi]``."""

    def __init__(self, algebra: AlgebraHandle, builder: Optional[Callable] = None,
                 finite: Optional[Mapping[int, object]] = None,
                 lo=-inf, hi=inf, name: str = "a"):
        if (builder is None) == (finite is None):
            raise ValueError("give exactly one of builder or finite")
        self.algebra = algebra
        self.name = name
        self._finite = None
        if finite is not None:
            self._finite = {int(n): x for n, x in finite.items() if not algebra.is_zero(x)}
            lo, hi = -inf, inf
        self._builder = builder
        self.lo, self.hi = lo, hi
        self._cache: dict = {}

    @classmethod
    def from_builder(cls, algebra, builder, window: int, name: str = "a") -> "Distribution":
        return cls(algebra, builder=builder, lo=-window, hi=window, name=name)

    @classmethod
    def from_finite(cls, algebra, coeffs: Mapping[int, object], name: str = "a") -> "Distribution":
        return cls(algebra, finite=coeffs, name=name)

    @classmethod
    def zero(cls, algebra, name: str = "0") -> "Distribution":
        return cls(algebra, finite={}, name=name)

    @property
    def is_finite(self) -> bool:
        return self._finite is not None

    def covers(self, lo, hi) -> bool:
        return self.lo <= lo and hi <= self.hi

    def require(self, lo, hi) -> None:
        if lo < self.lo:
            raise WindowError(f"window underflow: index {lo} of {self.name} below {self.lo}")
        if hi > self.hi:
            raise WindowError(f"window underflow: index {hi} of {self.name} above {self.hi}")

    def coefficient(self, n: int):
        if self._finite is not None:
            return self._finite.get(n, self.algebra.zero())
        if not self.lo <= n <= self.hi:
            raise WindowError(
                f"window underflow: index {n} outside validity window "
                f"[{self.lo}, {self.hi}] of {self.name}"
            )
        x = self._cache.get(n)
        if x is None:
            x = self._cache[n] = self.algebra.normal_form(self._builder(n))
        return x

    __getitem__ = coefficient

    def restrict(self, lo: int, hi: int) -> "Distribution":
        """Same coefficients, with a narrower validity window."""
        return Distribution(self.algebra, builder=self.coefficient,
                            lo=max(lo, self.lo), hi=min(hi, self.hi), name=self.name)

    def __repr__(self):
        return f"Distribution({self.name}, window=[{self.lo}, {self.hi}])"


# -- locality ----------------------------------------------------------------


def _check_op(a: Distribution, b: Distribution, op: str) -> AlgebraHandle:
    if a.algebra is not b.algebra:
        raise ValueError(f"{a.name} and {b.name} live over different algebras")
    a.algebra.check_op(op)
    return a.algebra


class _Products:
    """Memoized mu(a_i, b_j) for one ordered pair and operation."""

    def __init__(self, a: Distribution, b: Distribution, op: str):
        self.alg = _check_op(a, b, op)
        self.a, self.b, self.op = a, b, op
        self.cache: dict = {}

    def __call__(self, i: int, j: int):
        k = (i, j)
        x = self.cache.get(k)
        if x is None:
            x = self.cache[k] = self.alg.multiply(self.op, self.a[i], self.b[j])
        return x

    def coefficient(self, N: int, n: int, m: int):
        alg = self.alg
        return alg.normal_form(
            alg.combine(((-1) ** s * comb(N, s), self(n - s, m + s)) for s in range(N + 1))
        )


def locality_coefficient(a: Distribution, b: Distribution, op: str, N: int, n: int, m: int):
    """``sum_s (-1)^s C(N, s) mu(a_(n-s), b_(m+s))`` in normal form."""
    return _Products(a, b, op).coefficient(N, n, m)


@dataclass(frozen=True)
class LocalityVerdict:
    op: str
    N: int
    window: int
    holds: bool
    witness: Optional[tuple] = None  # (n, m, nonzero element)

    @property
    def status(self) -> str:
        return "holds-on-window" if self.holds else "fails"

    def describe(self, algebra: Optional[AlgebraHandle] = None) -> str:
        if self.holds:
            return f"holds on window {self.window} with N={self.N}"
        n, m, x = self.witness
        shown = algebra.format(x) if algebra is not None else str(x)
        return f"fails at N={self.N}: (n,m)=({n},{m}) gives {shown}"


def grid(window: int) -> list:
    """Window points, nearest to the origin first, ties broken lexicographically."""
    pts = [(n, m) for n in range(-window, window + 1) for m in range(-window, window + 1)]
    pts.sort(key=lambda p: (abs(p[0]) + abs(p[1]), p[0], p[1]))
    return pts


def _require_window(a, b, N, window):
    a.require(-window - N, window)
    b.require(-window, window + N)


def _verdict(prods: _Products, N: int, window: int) -> LocalityVerdict:
    alg = prods.alg
    for n, m in grid(window):
        x = prods.coefficient(N, n, m)
        if not alg.is_zero(x):
            return LocalityVerdict(prods.op, N, window, False, (n, m, x))
    return LocalityVerdict(prods.op, N, window, True)


def check_locality(a: Distribution, b: Distribution, op: str, N: int, window: int) -> LocalityVerdict:
    """Test the locality identity of order ``N`` at every (n, m) in the window."""
    if N < 0:
        raise ValueError("N must be non-negative")
    prods = _Products(a, b, op)
    _require_window(a, b, N, window)
    return _verdict(prods, N, window)


def minimal_locality(a: Distribution, b: Distribution, op: str, window: int,
                     N_max: int = 8) -> Optional[int]:
    """Smallest N <= N_max holding on the window, or None."""
    prods = _Products(a, b, op)
    for N in range(N_max + 1):
        _require_window(a, b, N, window)
        if _verdict(prods, N, window).holds:
            return N
    return None


def locality_scan(a, b, op, window, N_max=8) -> list:
    """Verdicts for N = 0 .. N_max (stops after the first success)."""
    prods = _Products(a, b, op)
    out = []
    for N in range(N_max + 1):
        _require_window(a, b, N, window)
        v = _verdict(prods, N, window)
        out.append(v)
        if v.holds:
            break
    return out


# -- products and derivatives ------------------------------------------------


def n_product(a: Distribution, b: Distribution, op: str, n: int, name: Optional[str] = None) -> Distribution:
    """``(a o_n b)_m = sum_s (-1)^s C(n, s) mu(a_(n-s), b_(m+s))``."""
    if n < 0:
        raise ValueError("n-products need n >= 0")
    prods = _Products(a, b, op)
    a.require(0, n)
    name = name or f"({a.name} {op}_{n} {b.name})"
    if a.is_finite and b.is_finite:
        ms = {j - s for j in b._finite for s in range(n + 1)}
        coeffs = {m: prods.coefficient(n, n, m) for m in ms}
        return Distribution.from_finite(a.algebra, coeffs, name=name)
    return Distribution(a.algebra, builder=lambda m: prods.coefficient(n, n, m),
                        lo=b.lo, hi=b.hi - n, name=name)


def formal_derivative(a: Distribution) -> Distribution:
    """Term-by-term derivative: ``(da)_n = -n a_(n-1)``."""
    alg = a.algebra
    name = f"d{a.name}"
    if a.is_finite:
        return Distribution.from_finite(
            alg, {n + 1: -(n + 1) * x for n, x in a._finite.items()}, name=name
        )
    return Distribution(alg, builder=lambda n: -n * a[n - 1] if n else alg.zero(),
                        lo=a.lo + 1, hi=a.hi + 1, name=name)


def scale_sum(parts, name="sum") -> Distribution:
    """Linear combination of distributions over one algebra."""
    parts = [(Fraction(c), d) for c, d in parts]
    alg = parts[0][1].algebra
    lo = max(d.lo for _, d in parts)
    hi = min(d.hi for _, d in parts)
    return Distribution(alg, builder=lambda n: alg.combine((c, d[n]) for c, d in parts),
                        lo=lo, hi=hi, name=name)


@dataclass
class LambdaPolynomial:
    """``sum_n lambda^n / n! c^(n)(z)`` with the nonzero n-products."""

    entries: dict = field(default_factory=dict)  # n -> Distribution
    locality: int = 0
    window: int = 0

    @property
    def degree(self) -> int:
        return max(self.entries, default=-1)


def lambda_product(a: Distribution, b: Distribution, op: str, window: int,
                   N_max: int = 8) -> LambdaPolynomial:
    N = minimal_locality(a, b, op, window, N_max)
    if N is None:
        raise NotLocalError(f"not local on window {window} up to N_max={N_max}")
    alg = a.algebra
    entries = {}
    for n in range(N_max + 1):
        c = n_product(a, b, op, n)
        if n < N:
            entries[n] = c
            continue
        for m in range(-window, window + 1):
            if not alg.is_zero(c[m]):
                raise AssertionError(f"n-product {n} >= N={N} is nonzero at {m}")
    return LambdaPolynomial(entries, N, window)


# -- two-variable series -----------------------------------------------------


class TwoVarSeries:
    """Coefficients of ``w^(-k-1) z^(-m-1)`` on a box ``[k0,k1] x [m0,m1]``."""

    def __init__(self, algebra: AlgebraHandle, coeffs: dict, kbox: tuple, mbox: tuple):
        self.algebra = algebra
        self.coeffs = coeffs
        self.kbox, self.mbox = kbox, mbox

    @classmethod
    def product(cls, a: Distribution, b: Distribution, op: str, kbox: tuple, mbox: tuple):
        prods = _Products(a, b, op)
        a.require(*kbox)
        b.require(*mbox)
        coeffs = {
            (k, m): prods(k, m)
            for k in range(kbox[0], kbox[1] + 1)
            for m in range(mbox[0], mbox[1] + 1)
        }
        return cls(a.algebra, coeffs, kbox, mbox)

    def __getitem__(self, km):
        k, m = km
        if not (self.kbox[0] <= k <= self.kbox[1] and self.mbox[0] <= m <= self.mbox[1]):
            raise WindowError(f"window underflow: ({k}, {m}) outside the series box")
        return self.coeffs.get(km, self.algebra.zero())

    def times_w_minus_z(self, N: int) -> "TwoVarSeries":
        """Multiply by ``(w - z)^N``; the box shrinks by N on both upper ends."""
        kbox = (self.kbox[0], self.kbox[1] - N)
        mbox = (self.mbox[0], self.mbox[1] - N)
        alg = self.algebra
        coeffs = {}
        for k in range(kbox[0], kbox[1] + 1):
            for m in range(mbox[0], mbox[1] + 1):
                x = alg.combine(
                    ((-1) ** j * comb(N, j), self[k + N - j, m + j]) for j in range(N + 1)
                )
                coeffs[(k, m)] = alg.normal_form(x)
        return TwoVarSeries(alg, coeffs, kbox, mbox)

    def residue_w(self) -> dict:
        """``Res_(w=0)``: the ``w^(-1)`` row, as ``m -> coefficient``."""
        if not self.kbox[0] <= 0 <= self.kbox[1]:
            raise WindowError("window underflow: k = 0 is outside the series box")
        return {m: self[0, m] for m in range(self.mbox[0], self.mbox[1] + 1)}

    def is_zero(self) -> bool:
        return all(self.algebra.is_zero(x) for x in self.coeffs.values())

    def equals(self, other: "TwoVarSeries") -> bool:
        alg = self.algebra
        keys = set(self.coeffs) | set(other.coeffs)
        return all(alg.is_zero(self[km] - other[km]) for km in keys)


def delta_derivative(j: int, k: int, m: int) -> int:
    """Coefficient of ``w^(-k-1) z^(-m-1)`` in ``d_z^j delta(w - z)``."""
    return falling(k, j) if k + m == j - 1 else 0


def ope_rhs(products: Mapping[int, Distribution], kbox: tuple, mbox: tuple, algebra) -> TwoVarSeries:
    """``sum_s (1/s!) c^(s)(z) d_z^s delta(w - z)`` on a box."""
    coeffs = {}
    for k in range(kbox[0], kbox[1] + 1):
        for m in range(mbox[0], mbox[1] + 1):
            parts = []
            for s, c in products.items():
                # z-part of the delta derivative sits at m' = s - 1 - k
                mp = s - 1 - k
                d = delta_derivative(s, k, mp)
                if d:
                    parts.append((Fraction(d, factorial(s)), c[m - mp - 1]))
            coeffs[(k, m)] = algebra.normal_form(algebra.combine(parts))
    return TwoVarSeries(algebra, coeffs, kbox, mbox)


def ope_box(a: Distribution, b: Distribution, N: int, window: int) -> int:
    """Largest interior half-width on which both OPE sides are computable."""
    # c^(s) at k + m - s reads b down to -2W - (N-1) and up to 2W
    lim = [window, -a.lo, a.hi, b.hi // 2, (-b.lo - max(N - 1, 0)) // 2]
    return int(max(0, min(lim)))


def ope_check(a: Distribution, b: Distribution, op: str, window: int,
              N: Optional[int] = None, N_max: int = 8) -> bool:
    """Compare ``a(w) b(z)`` with its operator product expansion on a box."""
    if N is None:
        N = minimal_locality(a, b, op, window, N_max)
        if N is None:
            raise NotLocalError(f"not local on window {window} up to N_max={N_max}")
    W = ope_box(a, b, N, window)
    box = (-W, W)
    lhs = TwoVarSeries.product(a, b, op, box, box)
    products = {s: n_product(a, b, op, s) for s in range(N)}
    rhs = ope_rhs(products, box, box, a.algebra)
    return lhs.equals(rhs)
