import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dongcheck import doubling
from dongcheck.algebra import FreeAlgebra
from dongcheck.core import LinComb
from dongcheck.distributions import n_product
from dongcheck.doubling import (
    DoubledAlgebra,
    DoubledElement,
    DoublingKind,
    LeibnizQuotient,
    bar_lift,
    barred_part,
    certify_sectors,
    certify_target_variety,
    double_multiply,
    leibniz_quotient_map,
    plain_lift,
    plain_part,
)
from dongcheck.models import polynomial_family, sample_leibniz_algebra, sample_lie_algebra
from dongcheck.syntax import parse_lincomb
from dongcheck.varieties import LEIBNIZ, PRE_ASSOCIATIVE, RIGHT_SYMMETRIC, fresh_generators

g1, g2, g3 = (LinComb.of(g) for g in fresh_generators(3))


def doubled(kind, variety):
    return DoubledAlgebra(kind, FreeAlgebra(variety))


class TestTables:
    def test_barred_products_vanish_in_assoc_double(self):
        D = doubled(DoublingKind.PRE_ASSOC_TO_ASSOC, PRE_ASSOCIATIVE)
        assert D.is_zero(D.multiply("star", D.bar(g1), D.bar(g2)))

    def test_assoc_double_sectors(self):
        D = doubled(DoublingKind.PRE_ASSOC_TO_ASSOC, PRE_ASSOCIATIVE)
        star = parse_lincomb("(g(1) * g(2))")
        succ = parse_lincomb("(g(1) . g(2))")
        assert D.multiply("star", D.plain(g1), D.plain(g2)) == D.plain(star)
        assert D.multiply("star", D.bar(g1), D.plain(g2)) == D.bar(star - succ)
        assert D.multiply("star", D.plain(g1), D.bar(g2)) == D.bar(succ)

    def test_prelie_double(self):
        D = doubled(DoublingKind.PRE_LIE_TO_LIE, RIGHT_SYMMETRIC)
        uv = parse_lincomb("(g(1) o g(2))")
        vu = parse_lincomb("(g(2) o g(1))")
        assert D.multiply("bracket", D.bar(g1), D.plain(g2)) == D.bar(uv)
        assert D.multiply("bracket", D.plain(g1), D.bar(g2)) == D.bar(-1 * vu)
        assert D.multiply("bracket", D.plain(g1), D.plain(g2)) == D.plain(uv - vu)

    def test_leibniz_double(self):
        D = doubled(DoublingKind.LEIBNIZ_TO_LIE, LEIBNIZ)
        assert D.is_zero(D.multiply("bracket", D.plain(g1), D.plain(g2)))
        assert D.multiply("bracket", D.bar(g1), D.plain(g2)) == D.plain(parse_lincomb("[g(1),g(2)]"))
        # barred copy lives in the Lie quotient: [g1,g1] is zero there
        assert D.is_zero(D.bar(parse_lincomb("[g(1),g(1)]")))

    def test_tables_have_four_sectors(self):
        for kind in DoublingKind:
            assert len(kind.table) == 4

    def test_double_multiply_type_check(self):
        D = doubled(DoublingKind.PRE_LIE_TO_LIE, RIGHT_SYMMETRIC)
        with pytest.raises(TypeError):
            double_multiply(D, g1, D.plain(g2))


class TestCertification:
    @pytest.mark.parametrize("kind, count", [(DoublingKind.PRE_ASSOC_TO_ASSOC, 8),
                                             (DoublingKind.PRE_LIE_TO_LIE, 12),
                                             (DoublingKind.LEIBNIZ_TO_LIE, 12)])
    def test_all_sectors(self, kind, count):
        results = certify_sectors(kind)
        assert len(results) == count
        assert all(r.ok for r in results), [r.label for r in results if not r.ok]
        assert certify_target_variety(kind)

    def test_sector_labels(self):
        res = certify_sectors(DoublingKind.PRE_ASSOC_TO_ASSOC)
        assert {r.label for r in res} >= {"plain,bar,plain", "bar,plain,plain", "bar,bar,plain"}

    def test_sabotaged_table_fails(self, monkeypatch):
        original = doubling._sector_products

        def broken(D, u, v, ub, vb):
            out = original(D, u, v, ub, vb)
            if D.kind is DoublingKind.PRE_LIE_TO_LIE and ub and not vb:
                # swap the order of the barred product
                return DoubledElement(None, D.source.multiply("circ", v, u))
            return out

        monkeypatch.setattr(doubling, "_sector_products", broken)
        assert not certify_target_variety(DoublingKind.PRE_LIE_TO_LIE)


class TestLeibnizQuotient:
    def test_symmetric_part_vanishes(self):
        L = sample_leibniz_algebra()
        x, y = L.e("x"), L.e("y")
        s = L.multiply("bracket", x, y) + L.multiply("bracket", y, x)
        assert leibniz_quotient_map(L, s).is_zero()
        assert LeibnizQuotient(L).ideal_dimension == 1

    def test_lie_input_is_untouched(self):
        L = sample_lie_algebra()
        Q = LeibnizQuotient(L)
        assert Q.ideal_dimension == 0
        for v in (L.e("x"), L.e("y"), L.e("x") - 2 * L.e("y")):
            assert Q.reduce(v) == v

    def test_free_leibniz_quotient_is_lie(self):
        Q = LeibnizQuotient(FreeAlgebra(LEIBNIZ))
        assert Q.reduce(parse_lincomb("[g(1),g(2)] + [g(2),g(1)]")).is_zero()
        assert not Q.reduce(parse_lincomb("[g(1),g(2)]")).is_zero()

    def test_rejects_other_free_algebras(self):
        with pytest.raises(ValueError):
            LeibnizQuotient(FreeAlgebra(RIGHT_SYMMETRIC))


vec = st.lists(st.integers(-3, 3), min_size=2, max_size=2)


@settings(max_examples=40, deadline=None)
@given(vec, vec)
def test_quotient_map_is_a_homomorphism(a, b):
    L = sample_leibniz_algebra()
    Q = LeibnizQuotient(L)
    u, v = L.element(a), L.element(b)
    br = lambda p, q: L.multiply("bracket", p, q)
    assert Q.reduce(br(u, v)) == Q.reduce(br(Q.reduce(u), Q.reduce(v)))
    assert Q.reduce(br(u, v) + br(v, u)).is_zero()


def test_lifted_distributions():
    L = sample_leibniz_algebra()
    H = DoubledAlgebra(DoublingKind.LEIBNIZ_TO_LIE, L)
    X = polynomial_family(L, {"x": [1]}, 20, "X")
    Xb, Xp = bar_lift(X, H), plain_lift(X, H)
    assert barred_part(Xb)[3] == LeibnizQuotient(L).reduce(X[3])
    assert plain_part(Xp)[3] == X[3]
    # [bar(a)_n a] lands in the plain copy as the Leibniz product
    c = n_product(Xb, Xp, "bracket", 0)
    direct = n_product(X, X, "bracket", 0)
    for m in range(-4, 5):
        assert c[m].plain == direct[m]
