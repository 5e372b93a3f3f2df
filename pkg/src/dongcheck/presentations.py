"""Finitely presented quotients with integer-parametrized relation families.

A :class:`Presentation` pairs a variety with

* ``generators``: relation families spanning the defining ideal, and
* ``rules``: oriented rewriting families (the generators plus consequences)
  used by :func:`quotient_normal_form`.

:func:`oracle_membership` decides ideal membership from the generators alone
by exact elimination in the free magma, so it never trusts the rewriting rules.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import AlgebraHandle
from .core import (
    GenSymbol,
    LinComb,
    Node,
    Term,
    as_lincomb,
    bilinear,
    leaves,
    lincomb_combine,
    term_key,
)
from .distributions import Distribution
from .linalg import EchelonBasis
from .syntax import (
    ParseError,
    Template,
    TemplateComb,
    TLeaf,
    _Parser,
    format_template,
    instantiate,
    instantiate_comb,
    match,
    parse_template,
    parse_template_comb,
    template_degree,
    template_vars,
    template_weight,
)
from .varieties import (
    PRE_ASSOCIATIVE,
    RIGHT_SYMMETRIC,
    DegreeOverflowError,
    Variety,
    engine,
    get_variety,
    instantiate_identity,
    template_variables,
)

#: rewrite steps allowed per quotient_normal_form call
STEP_BUDGET = 10**6


class PresentationError(ValueError):
    pass


class ReductionBudgetError(RuntimeError):
    pass


class WindowUnderflowError(ValueError):
    pass


_CMP = {
    "!=": lambda a, b: a != b,
    "==": lambda a, b: a == b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


@dataclass(frozen=True)
class Condition:
    """Conjunction of comparisons between index expressions."""

    clauses: tuple = ()  # (IndexExpr, op, IndexExpr)

    def holds(self, env) -> bool:
        return all(_CMP[op](a.evaluate(env), b.evaluate(env)) for a, op, b in self.clauses)

    def __str__(self):
        return " and ".join(f"{a} {op} {b}" for a, op, b in self.clauses)


def parse_condition(text: str) -> Condition:
    clauses = []
    for part in re.split(r"\band\b", text):
        part = part.strip()
        if not part:
            continue
        p = _Parser(part)
        lhs = p.index_expr()
        op = p.take()[1]
        if op not in _CMP:
            raise ParseError(f"unknown comparison {op!r} in {text!r}")
        rhs = p.index_expr()
        if not p.at_end():
            raise ParseError(f"trailing input in condition {text!r}")
        clauses.append((lhs, op, rhs))
    return Condition(tuple(clauses))


@dataclass(frozen=True)
class RuleFamily:
    """``pattern -> replacement when condition`` over index variables."""

    name: str
    pattern: Template
    replacement: TemplateComb = field(compare=False)
    condition: Condition = Condition()
    text: str = field(default="", compare=False)

    def __post_init__(self):
        pvars = template_vars(self.pattern)
        _check_pattern_leaves(self.pattern, self.name)
        deg = template_degree(self.pattern)
        weight = template_weight(self.pattern)
        for c, t in self.replacement.items:
            extra = template_vars(t) - pvars
            if extra:
                raise PresentationError(f"{self.name}: unbound variables {sorted(extra)}")
            if template_degree(t) != deg:
                raise PresentationError(f"{self.name}: replacement is not degree-homogeneous")
            if template_weight(t) != weight:
                raise PresentationError(
                    f"{self.name}: not weight-homogeneous "
                    f"({template_weight(t)} vs {weight})"
                )
        for a, _, b in self.condition.clauses:
            if (a.variables | b.variables) - pvars:
                raise PresentationError(f"{self.name}: condition uses unbound variables")

    @property
    def variables(self) -> list:
        return sorted(template_vars(self.pattern))

    @property
    def degree(self) -> int:
        return template_degree(self.pattern)

    def instance(self, env) -> tuple:
        return instantiate(self.pattern, env), instantiate_comb(self.replacement, env)

    def relation(self, env) -> LinComb:
        lhs, rhs = self.instance(env)
        return LinComb.of(lhs) - rhs

    def try_apply(self, t: Term) -> Optional[LinComb]:
        env = match(self.pattern, t)
        if env is None or not self.condition.holds(env):
            return None
        return instantiate_comb(self.replacement, env)

    def sample_envs(self, lo: int = -3, hi: int = 3):
        names = self.variables
        for vals in itertools.product(range(lo, hi + 1), repeat=len(names)):
            env = dict(zip(names, vals))
            if self.condition.holds(env):
                yield env

    def check_decreasing(self, lo: int = -3, hi: int = 3) -> None:
        for env in self.sample_envs(lo, hi):
            lhs, rhs = self.instance(env)
            for t in rhs.terms():
                if not term_key(t) < term_key(lhs):
                    raise PresentationError(
                        f"{self.name}: {t} does not precede {lhs} in the term order"
                    )

    def __str__(self):
        rhs = " + ".join(
            f"{c}*{format_template(t)}" if c != 1 else format_template(t)
            for c, t in self.replacement.items
        ) or "0"
        cond = f" when {self.condition}" if self.condition.clauses else ""
        return f"{format_template(self.pattern)} -> {rhs}{cond}"


def _check_pattern_leaves(t: Template, name: str) -> None:
    if isinstance(t, TLeaf):
        if t.index is None:
            return
        e = t.index
        if e.coeffs and not e.is_var():
            raise PresentationError(
                f"{name}: pattern subscripts must be integers or plain variables"
            )
        return
    _check_pattern_leaves(t.left, name)
    _check_pattern_leaves(t.right, name)


def parse_rule(text: str, name: Optional[str] = None) -> RuleFamily:
    body, _, cond = text.partition(" when ")
    lhs, arrow, rhs = body.partition("->")
    if not arrow:
        raise ParseError(f"rule needs '->': {text!r}")
    return RuleFamily(
        name or text.strip(),
        parse_template(lhs.strip()),
        parse_template_comb(rhs.strip()) if rhs.strip() != "0" else TemplateComb([]),
        parse_condition(cond) if cond else Condition(),
        text.strip(),
    )


@dataclass(frozen=True)
class Presentation:
    name: str
    variety: Variety
    gen_name: str
    generators: tuple  # RuleFamily values whose relations span the ideal
    rules: tuple  # RuleFamily values used for rewriting
    cap: int = 3
    builtin: bool = False

    def __post_init__(self):
        for r in self.rules:
            r.check_decreasing()

    @property
    def label(self) -> str:
        return "confluent built-in" if self.builtin else "window-oracle only"

    def gen(self, n: int) -> GenSymbol:
        return GenSymbol(self.gen_name, n)


def builtin_preassoc_presentation() -> Presentation:
    """Pre-associative algebra with a_n*a_m = a_0*a_{n+m}, a_n a_m = a_0 a_{n+m}."""
    gens = (
        parse_rule("a(n) . a(m) -> a(0) . a(n+m) when n != 0", "succ-pair"),
        parse_rule("a(n) * a(m) -> a(0) * a(n+m) when n != 0", "star-pair"),
    )
    consequences = (
        # star chains are right-nested, so the leading pair of a chain is not a subterm
        parse_rule("a(n) * (a(m) * a(k)) -> a(0) * (a(n+m) * a(k)) when n != 0", "star-chain-pair"),
        parse_rule("a(n) . (a(0) . a(k)) -> a(0) . (a(0) . a(n+k)) when n != 0", "succ-shift"),
        parse_rule(
            "(a(0) . a(n)) * a(m) -> ((a(0) . a(n)) . a(m)) + ((a(0) . a(0)) * a(n+m))"
            " - ((a(0) . a(0)) . a(n+m)) when n != 0",
            "star-over-succ",
        ),
    )
    return Presentation("preassoc", PRE_ASSOCIATIVE, "a", gens, gens + consequences, builtin=True)


def builtin_prelie_presentation() -> Presentation:
    """Right-symmetric algebra with a_n o a_m = a_0 o a_{n+m} for n != 0."""
    h = parse_rule("a(n) o a(m) -> a(0) o a(n+m) when n != 0", "h")
    rules = (
        h,
        parse_rule("a(k) o (a(n) o a(m)) -> a(k) o (a(0) o a(n+m)) when n != 0", "h-right"),
        parse_rule("(a(n) o a(m)) o a(k) -> (a(0) o a(n+m)) o a(k) when n != 0", "h-left"),
        # telescoped g-family: (a0 o a_{k+1}) o a_m = (a0 o a_k) o a_{m+1} mod I
        parse_rule("(a(0) o a(k)) o a(m) -> (a(0) o a(0)) o a(k+m) when k != 0", "g"),
    )
    return Presentation("prelie", RIGHT_SYMMETRIC, "a", (h,), rules, builtin=True)


BUILTIN_PRESENTATIONS = {
    "preassoc": builtin_preassoc_presentation,
    "prelie": builtin_prelie_presentation,
}


def parse_presentation(text: str, name: str = "custom") -> Presentation:
    variety = None
    gen_name = "a"
    rules = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" in line:
            rules.append(parse_rule(line, f"rule{len(rules) + 1}"))
            continue
        key, _, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if key == "variety":
            variety = get_variety(value)
        elif key == "gens":
            m = re.fullmatch(r"([A-Za-z_]\w*)\(Z\)", value)
            if not m:
                raise ParseError(f"generator family must look like a(Z), got {value!r}")
            gen_name = m.group(1)
        else:
            raise ParseError(f"unknown header {key!r}")
    if variety is None:
        raise ParseError("presentation needs a 'variety:' header")
    for r in rules:
        bad = {l.name for l in _template_leaves(r.pattern)} - {gen_name}
        if bad:
            raise ParseError(f"{r.name}: leaves {sorted(bad)} outside family {gen_name}")
    rules = tuple(rules)
    return Presentation(name, variety, gen_name, rules, rules)


def _template_leaves(t):
    if isinstance(t, TLeaf):
        yield t
    else:
        yield from _template_leaves(t.left)
        yield from _template_leaves(t.right)


def load_presentation(spec: str) -> Presentation:
    if spec in BUILTIN_PRESENTATIONS:
        return BUILTIN_PRESENTATIONS[spec]()
    with open(spec) as fh:
        return parse_presentation(fh.read(), name=spec)


# -- rewriting ---------------------------------------------------------------


def _redexes(t: Term):
    """Subterm positions, innermost first, with a function rebuilding the context."""
    if isinstance(t, Node):
        right = LinComb.of(t.right)
        left = LinComb.of(t.left)
        for sub, rebuild in _redexes(t.left):
            yield sub, (lambda X, rb=rebuild: bilinear(t.op, rb(X), right))
        for sub, rebuild in _redexes(t.right):
            yield sub, (lambda X, rb=rebuild: bilinear(t.op, left, rb(X)))
    yield t, (lambda X: X)


class _Reducer:
    def __init__(self, p: Presentation):
        self.p = p
        self.engine = engine(p.variety, p.cap)
        self.cache: dict = {}

    def one_step(self, t: Term) -> Optional[LinComb]:
        for sub, rebuild in _redexes(t):
            for rule in self.p.rules:
                out = rule.try_apply(sub)
                if out is not None:
                    return rebuild(out)
        return None

    def reduce(self, x: LinComb) -> LinComb:
        budget = [STEP_BUDGET]
        return self._reduce(self.engine.normal_form(x), budget, set())

    def _reduce(self, x: LinComb, budget, active) -> LinComb:
        return lincomb_combine((c, self._term(t, budget, active)) for t, c in x.unordered_items())

    def _term(self, t: Term, budget, active) -> LinComb:
        hit = self.cache.get(t)
        if hit is not None:
            return hit
        if t in active:
            raise ReductionBudgetError(f"reduction budget exceeded: cycle through {t}")
        step = self.one_step(t)
        if step is None:
            out = LinComb.of(t)
        else:
            budget[0] -= 1
            if budget[0] < 0:
                raise ReductionBudgetError("reduction budget exceeded")
            active.add(t)
            try:
                out = self._reduce(self.engine.normal_form(step), budget, active)
            finally:
                active.discard(t)
        self.cache[t] = out
        return out


_REDUCERS: dict = {}


def _reducer(p: Presentation) -> _Reducer:
    r = _REDUCERS.get(p)
    if r is None:
        r = _REDUCERS[p] = _Reducer(p)
    return r


def _check_element(p: Presentation, x: LinComb) -> None:
    for t, _ in x.unordered_items():
        if t.degree > p.cap:
            raise DegreeOverflowError(f"degree overflow: degree {t.degree} exceeds cap {p.cap}")
        for g in leaves(t):
            if g.name != p.gen_name or g.index is None:
                raise PresentationError(f"leaf {g} is not in the generator family {p.gen_name}(Z)")


def quotient_normal_form(p: Presentation, x) -> LinComb:
    x = as_lincomb(x)
    _check_element(p, x)
    return _reducer(p).reduce(x)


class QuotientAlgebra(AlgebraHandle):
    def __init__(self, p: Presentation):
        self.presentation = p
        self.signature = p.variety.signature
        self.name = f"{p.name} quotient"

    def multiply(self, op, x, y) -> LinComb:
        self.check_op(op)
        return quotient_normal_form(self.presentation, bilinear(op, x, y))

    def normal_form(self, x) -> LinComb:
        return quotient_normal_form(self.presentation, x)

    def zero(self) -> LinComb:
        return LinComb()

    def is_zero(self, x) -> bool:
        return self.normal_form(x).is_zero()

    def gen(self, n: int) -> LinComb:
        return LinComb.of(self.presentation.gen(n))


# -- linear-algebra oracle ---------------------------------------------------


@dataclass(frozen=True)
class MembershipVerdict:
    status: str  # "zero-in-quotient" or "nonzero"
    normal_form: LinComb
    oracle_agrees: bool
    window: int
    label: str = "confluent built-in"

    @property
    def is_zero(self) -> bool:
        return self.status == "zero-in-quotient"


class _WindowSpan:
    """Relation spans of the presented ideal, by (degree, weight), inside a window."""

    def __init__(self, p: Presentation, window: int):
        self.p = p
        self.W = window
        self.mono_cache: dict = {}
        self.rel_cache: dict = {}
        self.basis_cache: dict = {}

    def monos(self, d: int, w: int) -> list:
        k = (d, w)
        if k in self.mono_cache:
            return self.mono_cache[k]
        if abs(w) > d * self.W:
            out = []
        elif d == 1:
            out = [self.p.gen(w)]
        else:
            out = []
            for e in range(1, d):
                lo = max(-e * self.W, w - (d - e) * self.W)
                hi = min(e * self.W, w + (d - e) * self.W)
                for u in range(lo, hi + 1):
                    for left in self.monos(e, u):
                        for right in self.monos(d - e, w - u):
                            for op in self.p.variety.signature:
                                out.append(Node(op, left, right))
        self.mono_cache[k] = out
        return out

    def _in_window(self, x: LinComb) -> bool:
        return all(abs(g.index) <= self.W for t in x for g in leaves(t))

    def relations(self, d: int, w: int) -> list:
        k = (d, w)
        if k in self.rel_cache:
            return self.rel_cache[k]
        rels = []
        # identity instances of the variety
        for ident in self.p.variety.identities:
            variables = template_variables(ident.template)
            first = ident.template.terms()[0]
            occ = [sum(1 for g in leaves(first) if g == v) for v in variables]
            for degs in itertools.product(range(1, d + 1), repeat=len(occ)):
                if sum(o * e for o, e in zip(occ, degs)) != d:
                    continue
                ranges = [range(-e * self.W, e * self.W + 1) for e in degs]
                for ws in itertools.product(*ranges):
                    if sum(o * u for o, u in zip(occ, ws)) != w:
                        continue
                    pools = [self.monos(e, u) for e, u in zip(degs, ws)]
                    for args in itertools.product(*pools):
                        rels.append(instantiate_identity(ident.template, args))
        # defining relations
        for fam in self.p.generators:
            if fam.degree != d:
                continue
            for env in fam.sample_envs(-self.W, self.W):
                rel = fam.relation(env)
                if rel and self._in_window(rel) and next(iter(rel)).weight == w:
                    rels.append(rel)
        # multiplicative closure from lower degrees
        for e in range(1, d):
            for u in range(-e * self.W, e * self.W + 1):
                lower = self.relations(e, u)
                if not lower:
                    continue
                for m in self.monos(d - e, w - u):
                    for op in self.p.variety.signature:
                        for r in lower:
                            rels.append(bilinear(op, r, LinComb.of(m)))
                            rels.append(bilinear(op, LinComb.of(m), r))
        rels = [r for r in rels if r]
        self.rel_cache[k] = rels
        return rels

    def basis(self, d: int, w: int) -> EchelonBasis:
        k = (d, w)
        b = self.basis_cache.get(k)
        if b is None:
            b = EchelonBasis(term_key)
            for r in self.relations(d, w):
                b.add(dict(r.unordered_items()))
            self.basis_cache[k] = b
        return b


_SPANS: dict = {}


def _span(p: Presentation, window: int) -> _WindowSpan:
    k = (p, window)
    s = _SPANS.get(k)
    if s is None:
        s = _SPANS[k] = _WindowSpan(p, window)
    return s


def oracle_in_ideal(p: Presentation, x, window: int) -> bool:
    """Exact membership of ``x`` in the span of window relation instances."""
    x = as_lincomb(x)
    _check_element(p, x)
    for t in x:
        for g in leaves(t):
            if abs(g.index) > window:
                raise WindowUnderflowError(
                    f"window underflow: index {g.index} outside [-{window}, {window}]"
                )
    span = _span(p, window)
    parts: dict = {}
    for t, c in x.unordered_items():
        parts.setdefault((t.degree, t.weight), {})[t] = c
    return all(span.basis(d, w).contains(vec) for (d, w), vec in parts.items())


def oracle_membership(p: Presentation, x, window: int) -> MembershipVerdict:
    x = as_lincomb(x)
    in_span = oracle_in_ideal(p, x, window)
    nf = quotient_normal_form(p, x)
    return MembershipVerdict(
        "zero-in-quotient" if in_span else "nonzero",
        nf,
        in_span == nf.is_zero(),
        window,
        p.label,
    )


def random_homogeneous_element(p: Presentation, rng: random.Random, weight: int,
                               index_range: int = 3, degree: int = 3,
                               relation_terms: int = 2, free_terms: int = 1) -> LinComb:
    """Random weight-homogeneous element mixing ideal elements and stray monomials."""
    span = _span(p, index_range)
    rels = span.relations(degree, weight)
    monos = span.monos(degree, weight)
    parts = []
    for _ in range(relation_terms):
        if rels:
            parts.append((Fraction(rng.randint(-3, 3), rng.randint(1, 3)), rng.choice(rels)))
    for _ in range(free_terms):
        if monos:
            parts.append((Fraction(rng.randint(-2, 2)), LinComb.of(rng.choice(monos))))
    return lincomb_combine(parts)


def generator_distribution(algebra: QuotientAlgebra, window: int, name: str = "a"):
    """``a(z) = sum_n (a_n + I) z^(-n-1)``, valid on ``[-window, window]``."""
    return Distribution.from_builder(algebra, algebra.gen, window, name=name)
