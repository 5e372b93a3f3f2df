"""Varieties of algebras, free normal forms at bounded degree, identity checks.

Each variety is given by multilinear identity templates in formal variables
``x, y, z``.  :class:`NormalFormEngine` reduces elements of the free algebra
by a per-variety orientation of those identities; the orientations are
confluent up to degree 3, which :func:`identity_span` and
:func:`free_dimension` certify independently by exact linear algebra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

from .core import (
    GenSymbol,
    LinComb,
    Node,
    Term,
    as_lincomb,
    bilinear,
    lincomb_combine,
    ops_of,
    rank_key,
    substitute_lincomb,
    term_key,
)
from .linalg import EchelonBasis
from .syntax import parse_lincomb


class DegreeOverflowError(ValueError):
    pass


class SignatureMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Identity:
    name: str
    template: LinComb
    arity: int


@dataclass(frozen=True)
class Variety:
    name: str
    cli_name: str
    signature: tuple
    identities: tuple

    def __str__(self):
        return self.name


def _ids(*pairs) -> tuple:
    out = []
    for name, text in pairs:
        t = parse_lincomb(text)
        arity = len({g for term in t for g in _leafset(term)})
        out.append(Identity(name, t, arity))
    return tuple(out)


def _leafset(t: Term) -> set:
    if isinstance(t, GenSymbol):
        return {t}
    return _leafset(t.left) | _leafset(t.right)


RSYM = ("right-symmetry", "((x o y) o z) - (x o (y o z)) - ((x o z) o y) + (x o (z o y))")
LCOM = ("left-commutativity", "(x o (y o z)) - (y o (x o z))")
LEIBNIZ_ID = ("leibniz", "[x,[y,z]] - [y,[x,z]] - [[x,y],z]")

ASSOCIATIVE = Variety(
    "Associative", "assoc", ("star",), _ids(("associativity", "((x * y) * z) - (x * (y * z))"))
)
LIE = Variety(
    "Lie",
    "lie",
    ("bracket",),
    _ids(("anticommutativity", "[x,y] + [y,x]"), ("jacobi", LEIBNIZ_ID[1])),
)
RIGHT_SYMMETRIC = Variety("RightSymmetric", "rsym", ("circ",), _ids(RSYM))
NOVIKOV = Variety("Novikov", "novikov", ("circ",), _ids(RSYM, LCOM))
PRE_ASSOCIATIVE = Variety(
    "PreAssociative",
    "preassoc",
    ("star", "succ"),
    _ids(
        ("star-associativity", "((x * y) * z) - (x * (y * z))"),
        ("star-succ", "((x * y) . z) - (x . (y . z))"),
        ("succ-star", "(x . (y * z)) - ((x . y) * z) - (x . (y . z)) + ((x . y) . z)"),
    ),
)
LEIBNIZ = Variety("Leibniz", "leibniz", ("bracket",), _ids(LEIBNIZ_ID))

VARIETIES = {
    v.cli_name: v
    for v in (ASSOCIATIVE, LIE, RIGHT_SYMMETRIC, NOVIKOV, PRE_ASSOCIATIVE, LEIBNIZ)
}


def get_variety(name: str) -> Variety:
    for v in VARIETIES.values():
        if name in (v.cli_name, v.name):
            return v
    raise KeyError(f"unknown variety {name!r}; expected one of {sorted(VARIETIES)}")


def _gt(s: Term, t: Term) -> bool:
    return rank_key(s) > rank_key(t)


def _lc(*items) -> LinComb:
    """Build a LinComb from (coef, term) pairs."""
    return lincomb_combine((c, LinComb.of(t)) for c, t in items)


# Root rewriting rules.  Each takes an operation and two normal-form children
# and returns None when ``op(s, t)`` is irreducible, otherwise a LinComb that
# still needs normalization.


def _root_assoc(op, s, t):
    if isinstance(s, Node):
        return _lc((1, Node(op, s.left, Node(op, s.right, t))))
    return None


def _root_lie(op, s, t):
    if s == t:
        return LinComb()
    if _gt(s, t):
        return _lc((-1, Node(op, t, s)))
    if isinstance(t, Node) and _gt(s, t.right):
        x, y, z = t.left, t.right, s
        return _lc(
            (-1, Node(op, x, Node(op, y, z))),
            (1, Node(op, y, Node(op, x, z))),
        )
    return None


def _root_rsym(op, s, t):
    if isinstance(s, Node) and _gt(s.right, t):
        x, y, z = s.left, s.right, t
        return _lc(
            (1, Node(op, Node(op, x, z), y)),
            (1, Node(op, x, Node(op, y, z))),
            (-1, Node(op, x, Node(op, z, y))),
        )
    return None


def _root_novikov(op, s, t):
    r = _root_rsym(op, s, t)
    if r is not None:
        return r
    if isinstance(t, Node) and _gt(s, t.left):
        return _lc((1, Node(op, t.left, Node(op, s, t.right))))
    return None


def _root_leibniz(op, s, t):
    if isinstance(s, Node):
        x, y = s.left, s.right
        return _lc(
            (1, Node(op, x, Node(op, y, t))),
            (-1, Node(op, y, Node(op, x, t))),
        )
    return None


def _root_preassoc(op, s, t):
    s_star = isinstance(s, Node) and s.op == "star"
    if op == "star":
        if s_star:
            return _lc((1, Node("star", s.left, Node("star", s.right, t))))
        return None
    if s_star:
        return _lc((1, Node("succ", s.left, Node("succ", s.right, t))))
    if isinstance(t, Node) and t.op == "star":
        y, z = t.left, t.right
        sy = Node("succ", s, y)
        return _lc(
            (1, Node("star", sy, z)),
            (1, Node("succ", s, Node("succ", y, z))),
            (-1, Node("succ", sy, z)),
        )
    return None


ROOT_RULES = {
    "assoc": _root_assoc,
    "lie": _root_lie,
    "rsym": _root_rsym,
    "novikov": _root_novikov,
    "preassoc": _root_preassoc,
    "leibniz": _root_leibniz,
}


class NormalFormEngine:
    """Free-algebra normal forms for one variety, up to a degree cap."""

    def __init__(self, variety: Variety, cap: int = 3):
        self.variety = variety
        self.cap = cap
        self._root = ROOT_RULES[variety.cli_name]
        self._term_cache: dict = {}
        self._root_cache: dict = {}

    def check_input(self, x: LinComb) -> None:
        for t, _ in x.unordered_items():
            if t.degree > self.cap:
                raise DegreeOverflowError(
                    f"degree overflow: degree {t.degree} exceeds cap {self.cap}"
                )
            bad = ops_of(t) - set(self.variety.signature)
            if bad:
                raise SignatureMismatchError(
                    f"signature mismatch: {sorted(bad)} not in {self.variety.name}"
                )

    def normal_form(self, x) -> LinComb:
        x = as_lincomb(x)
        self.check_input(x)
        return self._nf(x)

    __call__ = normal_form

    def _nf(self, x: LinComb) -> LinComb:
        return lincomb_combine((c, self._nf_term(t)) for t, c in x.unordered_items())

    def _nf_term(self, t: Term) -> LinComb:
        hit = self._term_cache.get(t)
        if hit is not None:
            return hit
        if isinstance(t, GenSymbol):
            out = LinComb.of(t)
        else:
            left = self._nf_term(t.left)
            right = self._nf_term(t.right)
            out = lincomb_combine(
                (c * d, self._nf_root(t.op, s, u))
                for s, c in left.unordered_items()
                for u, d in right.unordered_items()
            )
        self._term_cache[t] = out
        return out

    def _nf_root(self, op: str, s: Term, t: Term) -> LinComb:
        k = (op, s, t)
        hit = self._root_cache.get(k)
        if hit is not None:
            return hit
        r = self._root(op, s, t)
        out = LinComb.of(Node(op, s, t)) if r is None else self._nf(r)
        self._root_cache[k] = out
        return out

    def is_normal(self, t: Term) -> bool:
        return self.normal_form(t) == LinComb.of(t)


@lru_cache(maxsize=None)
def engine(variety: Variety, cap: int = 3) -> NormalFormEngine:
    return NormalFormEngine(variety, cap)


def free_normal_form(v: Variety, x, cap: int = 3) -> LinComb:
    return engine(v, cap).normal_form(x)


def fresh_generators(k: int, name: str = "g") -> list:
    return [GenSymbol(name, i) for i in range(1, k + 1)]


def template_variables(template: LinComb) -> list:
    seen: list = []
    for t in template.terms():
        for g in _ordered_leaves(t):
            if g not in seen:
                seen.append(g)
    return sorted(seen)


def _ordered_leaves(t):
    if isinstance(t, GenSymbol):
        yield t
    else:
        yield from _ordered_leaves(t.left)
        yield from _ordered_leaves(t.right)


def instantiate_identity(template: LinComb, values: Sequence) -> LinComb:
    """Substitute ``values`` for the template's variables (sorted x, y, z...)."""
    variables = template_variables(template)
    if len(values) != len(variables):
        raise ValueError(f"template needs {len(variables)} arguments, got {len(values)}")
    return substitute_lincomb(template, dict(zip(variables, map(as_lincomb, values))))


def check_identity(v: Variety, template, arity: Optional[int] = None, cap: int = 3) -> bool:
    """True iff the multilinear instance on fresh generators reduces to zero."""
    if isinstance(template, str):
        template = parse_lincomb(template)
    variables = template_variables(template)
    if arity is not None and arity != len(variables):
        raise ValueError(f"arity {arity} does not match template variables {len(variables)}")
    if len(variables) > cap:
        raise DegreeOverflowError(f"degree overflow: arity {len(variables)} exceeds cap {cap}")
    inst = instantiate_identity(template, fresh_generators(len(variables)))
    return free_normal_form(v, inst, cap).is_zero()


def magmatic_words(gens: Sequence[GenSymbol], degree: int, ops: Sequence[str]) -> list:
    """All magma monomials of the given degree over ``gens`` with operations ``ops``."""

    @lru_cache(maxsize=None)
    def words(d: int) -> tuple:
        if d == 1:
            return tuple(gens)
        out = []
        for i in range(1, d):
            for left in words(i):
                for right in words(d - i):
                    for op in ops:
                        out.append(Node(op, left, right))
        return tuple(out)

    return list(words(degree))


def _compositions(n: int):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest


def _star_chain(parts: Sequence[Term]) -> Term:
    t = parts[-1]
    for u in reversed(parts[:-1]):
        t = Node("star", u, t)
    return t


def preassoc_basis_monomials(gens: Sequence[GenSymbol], degree: int, cap: int = 3) -> list:
    """Basis u_1*u_2*...*u_k of the free pre-associative algebra in one degree.

    Each u_i is a magmatic word in the juxtaposition (succ) operation; star
    chains are stored right-nested.
    """
    if degree > cap:
        raise DegreeOverflowError(f"degree overflow: degree {degree} exceeds cap {cap}")
    out = []
    for comp in _compositions(degree):
        pools = [magmatic_words(gens, d, ("succ",)) for d in comp]
        for parts in itertools.product(*pools):
            out.append(_star_chain(parts))
    return out


def identity_span(v: Variety, gens: Sequence[GenSymbol], degree: int) -> list:
    """Relations spanning the degree component of the identity ideal over ``gens``.

    Built only from identity instances and multiplications, independently of
    :class:`NormalFormEngine`.
    """
    ops = v.signature
    by_degree: dict = {}
    for d in range(1, degree + 1):
        rels = []
        for ident in v.identities:
            k = ident.arity
            if k > d:
                continue
            for split in _compositions(d):
                if len(split) != k:
                    continue
                pools = [magmatic_words(gens, e, ops) for e in split]
                for args in itertools.product(*pools):
                    rels.append(instantiate_identity(ident.template, args))
        for e in range(1, d):
            for r in by_degree.get(e, []):
                for w in magmatic_words(gens, d - e, ops):
                    for op in ops:
                        rels.append(bilinear(op, r, w))
                        rels.append(bilinear(op, w, r))
        by_degree[d] = [r for r in rels if not r.is_zero()]
    return by_degree.get(degree, [])


def free_dimension(v: Variety, gens: Sequence[GenSymbol], degree: int,
                   select: Optional[Callable[[Term], bool]] = None) -> int:
    """Dimension of a degree component of the free algebra via exact rank.

    ``select`` restricts to monomials (and relations) supported on a subset
    closed under the relations, e.g. the multilinear part.
    """
    monos = magmatic_words(gens, degree, v.signature)
    rels = identity_span(v, gens, degree)
    if select is not None:
        monos = [m for m in monos if select(m)]
        rels = [r for r in rels if all(select(t) for t in r)]
    basis = EchelonBasis(term_key)
    for r in rels:
        basis.add({t: c for t, c in r.unordered_items()})
    return len(monos) - basis.rank


def is_multilinear(t: Term) -> bool:
    ls = list(_ordered_leaves(t))
    return len(ls) == len(set(ls))


def irreducible_monomials(v: Variety, gens: Sequence[GenSymbol], degree: int,
                          select: Optional[Callable[[Term], bool]] = None) -> list:
    eng = engine(v, max(3, degree))
    monos = magmatic_words(gens, degree, v.signature)
    if select is not None:
        monos = [m for m in monos if select(m)]
    return [m for m in monos if eng.normal_form(m) == LinComb.of(m)]


def evaluate_template(template: LinComb, multiply: Callable, values: Sequence):
    """Evaluate an identity template in a concrete algebra.

    ``multiply(op, x, y)`` is the algebra product; ``values`` are elements
    substituted for the sorted template variables.
    """
    variables = template_variables(template)
    env = dict(zip(variables, values))

    def ev(t):
        if isinstance(t, GenSymbol):
            return env[t]
        return multiply(t.op, ev(t.left), ev(t.right))

    total = None
    for t, c in template.items():
        term = c * ev(t)
        total = term if total is None else total + term
    return total


def identity_witness(v: Variety, multiply: Callable, basis: Sequence, is_zero: Callable):
    """First identity instance on basis elements that fails, or None."""
    for ident in v.identities:
        for args in itertools.product(range(len(basis)), repeat=ident.arity):
            val = evaluate_template(ident.template, multiply, [basis[i] for i in args])
            if not is_zero(val):
                return ident.name, args
    return None
