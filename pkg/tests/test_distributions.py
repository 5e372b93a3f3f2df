import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dongcheck.distributions import (
    Distribution,
    NotLocalError,
    TwoVarSeries,
    WindowError,
    binom,
    check_locality,
    delta_derivative,
    falling,
    formal_derivative,
    grid,
    lambda_product,
    locality_coefficient,
    locality_scan,
    minimal_locality,
    n_product,
    ope_check,
    scale_sum,
)
from dongcheck.models import WEYL, LaurentLie, WeylElement, virasoro_model, weyl_distribution
from dongcheck.presentations import (
    QuotientAlgebra,
    builtin_prelie_presentation,
    generator_distribution,
)

BASE = 40
q = [weyl_distribution(m, BASE) for m in range(4)]
VIR = LaurentLie(virasoro_model())
E = VIR.distribution("e", BASE)


class TestCoefficients:
    def test_weyl_family(self):
        assert q[0][5] == WeylElement.t(5)
        assert q[1][0] == WeylElement.q()
        assert q[2][1] == Fraction(1, 2) * WeylElement.monomial(1, 2)

    def test_builder_outside_window_raises(self):
        d = weyl_distribution(0, 4)
        with pytest.raises(WindowError, match="window underflow: index 5"):
            d[5]

    def test_finite_is_zero_elsewhere(self):
        d = Distribution.from_finite(WEYL, {0: WeylElement.t()})
        assert d[100].is_zero()

    def test_helpers(self):
        assert falling(5, 2) == 20 and falling(-1, 3) == -6
        assert binom(-1, 2) == 1
        assert grid(1)[0] == (0, 0) and len(grid(2)) == 25


class TestLocality:
    def test_constant_family_cancels(self):
        for n, m in itertools.product(range(-3, 4), repeat=2):
            assert locality_coefficient(q[0], q[0], "star", 1, n, m).is_zero()

    def test_q1_q0_at_origin(self):
        assert locality_coefficient(q[1], q[0], "star", 1, 0, 0) == -1 * WeylElement.t(-1)

    def test_order_zero_is_the_product(self):
        for n, m in ((2, -1), (0, 3)):
            assert locality_coefficient(q[2], q[1], "star", 0, n, m) == q[2][n] * q[1][m]

    def test_check_locality(self):
        assert check_locality(q[1], q[0], "star", 2, 6).holds
        v = check_locality(q[1], q[0], "star", 1, 6)
        assert not v.holds and v.witness[:2] == (0, 0)
        assert v.status == "fails"

    def test_zero_distribution(self):
        z = Distribution.zero(WEYL)
        assert check_locality(z, q[2], "star", 0, 6).holds

    def test_minimal_values(self):
        assert minimal_locality(q[3], q[0], "star", 8) == 4
        assert minimal_locality(E, E, "bracket", 8) == 2
        P = QuotientAlgebra(builtin_prelie_presentation())
        a = generator_distribution(P, BASE)
        assert minimal_locality(a, a, "circ", 8) == 1

    def test_scan_stops_at_first_success(self):
        scan = locality_scan(q[2], q[1], "star", 5)
        assert [v.holds for v in scan] == [False, False, False, True]

    def test_window_too_wide_for_builder(self):
        with pytest.raises(WindowError):
            check_locality(weyl_distribution(0, 5), weyl_distribution(0, 5), "star", 1, 5)

    def test_mixed_algebras_refused(self):
        with pytest.raises(ValueError, match="different algebras"):
            check_locality(q[0], E, "star", 0, 2)


class TestProducts:
    def test_weyl_zero_product(self):
        c0 = n_product(q[1], q[0], "star", 0)
        c1 = n_product(q[1], q[0], "star", 1)
        for m in range(-5, 6):
            assert c0[m] == q[1][0] * q[0][m]
            assert c1[m] == q[1][1] * q[0][m] - q[1][0] * q[0][m + 1]

    def test_n_product_window(self):
        c = n_product(q[0], q[0], "star", 3)
        assert (c.lo, c.hi) == (-BASE, BASE - 3)

    def test_derivative(self):
        d = formal_derivative(q[0])
        assert d[3] == -3 * q[0][2]
        assert d[0].is_zero()
        assert (d.lo, d.hi) == (q[0].lo + 1, q[0].hi + 1)

    def test_lambda_products(self):
        assert list(lambda_product(q[0], q[0], "star", 6).entries) == [0]
        assert list(lambda_product(E, E, "bracket", 6).entries) == [0, 1]
        P = QuotientAlgebra(builtin_prelie_presentation())
        a = generator_distribution(P, BASE)
        with pytest.raises(NotLocalError, match="not local"):
            lambda_product(a, n_product(a, a, "circ", 0), "circ", 6, 3)

    def test_virasoro_first_product_against_residue(self):
        c = n_product(E, E, "bracket", 1)
        series = TwoVarSeries.product(E, E, "bracket", (-6, 7), (-6, 7)).times_w_minus_z(1)
        res = series.residue_w()
        for m in range(-6, 7):
            assert c[m] == res[m]
        # closed form: sum over s of (-1)^s [e t^(1-s), e t^(m+s)]
        for m in range(-6, 7):
            expected = (1 - m) * VIR.basis_element("e", m) + (m + 1) * VIR.basis_element("e", m)
            assert c[m] == expected


class TestOPE:
    def test_weyl(self):
        assert ope_check(q[0], q[0], "star", 6)

    def test_virasoro(self):
        assert ope_check(E, E, "bracket", 6)

    def test_understated_order_fails(self):
        assert not ope_check(E, E, "bracket", 6, N=1)
        assert not ope_check(q[2], q[1], "star", 6, N=2)

    def test_non_local_input(self):
        P = QuotientAlgebra(builtin_prelie_presentation())
        a = generator_distribution(P, BASE)
        with pytest.raises(NotLocalError):
            ope_check(a, n_product(a, a, "circ", 0), "circ", 4, N_max=2)

    def test_delta_coefficients(self):
        # delta(w - z) = sum_k w^(-k-1) z^k, i.e. (k, m) with k + m = -1
        assert delta_derivative(0, 2, -3) == 1
        assert delta_derivative(0, 2, -2) == 0
        assert delta_derivative(2, 3, -2) == 6


# -- properties ----------------------------------------------------------------

small = st.integers(-3, 3)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 4), small, small)
def test_locality_coefficient_matches_series(mu, nu, N, n, m):
    """The coefficient identity equals the (n - N, m) entry of (w - z)^N a(w) b(z)."""
    series = TwoVarSeries.product(q[mu], q[nu], "star", (n - N - 1, n + 1), (m - 1, m + N + 1))
    shifted = series.times_w_minus_z(N)
    assert shifted[n - N, m] == locality_coefficient(q[mu], q[nu], "star", N, n, m)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 4), small)
def test_n_product_is_a_residue(mu, nu, n, m):
    series = TwoVarSeries.product(q[mu], q[nu], "star", (-1, n + 1), (m - 1, m + n + 1))
    assert n_product(q[mu], q[nu], "star", n)[m] == series.times_w_minus_z(n).residue_w()[m]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3), st.integers(-3, 3),
       st.fractions(min_value=-4, max_value=4, max_denominator=4))
def test_locality_coefficient_is_bilinear(mu, nu, n, m, c):
    s = scale_sum([(c, q[mu]), (1, q[nu])])
    lhs = locality_coefficient(s, q[1], "star", 2, n, m)
    rhs = (c * locality_coefficient(q[mu], q[1], "star", 2, n, m)
           + locality_coefficient(q[nu], q[1], "star", 2, n, m))
    assert lhs == rhs


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.booleans())
def test_derivative_raises_locality_by_at_most_one(mu, nu, left):
    N = minimal_locality(q[mu], q[nu], "star", 6)
    a = formal_derivative(q[mu]) if left else q[mu]
    b = q[nu] if left else formal_derivative(q[nu])
    assert check_locality(a, b, "star", N + 1, 5).holds


def _weyl_elements():
    mono = st.tuples(st.integers(-2, 2), st.integers(0, 2), st.integers(-2, 2).filter(bool))
    return st.lists(mono, min_size=1, max_size=3).map(
        lambda ms: sum((WeylElement.monomial(n, m, c) for n, m, c in ms), WeylElement()))


def _act(x: WeylElement, p: int) -> dict:
    """Apply a normal-ordered operator t^n q^m to the Laurent monomial t^p."""
    out = {}
    for (n, m), c in x.items():
        f = falling(p, m)
        if f:
            out[p - m + n] = out.get(p - m + n, 0) + c * f
    return {k: v for k, v in out.items() if v}


def _act_poly(x, poly):
    out = {}
    for p, c in poly.items():
        for e, v in _act(x, p).items():
            out[e] = out.get(e, 0) + c * v
    return {k: v for k, v in out.items() if v}


@settings(max_examples=40, deadline=None)
@given(_weyl_elements(), _weyl_elements(), _weyl_elements())
def test_weyl_product_matches_operator_action(x, y, z):
    xy = x * y
    for p in (-4, -1, 0, 1, 3, 7):
        assert _act(xy, p) == _act_poly(x, _act(y, p))
    assert (x * y) * z == x * (y * z)


def test_weyl_commutation_examples():
    t, qq = WeylElement.t(), WeylElement.q()
    assert qq * t == t * qq + WeylElement.monomial(0, 0)
    assert WeylElement.q(2) * t == WeylElement.monomial(1, 2) + 2 * qq
    assert WeylElement.t(2) * WeylElement.t(-2) == WeylElement.monomial(0, 0)
    assert str(qq * t) == "t*q + 1"
