import itertools
import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dongcheck.models import (
    LaurentLie,
    LaurentNovikov,
    ModelError,
    NovikovModel,
    load_model,
    make_novikov_from_derivation,
    model_from_data,
    novikov_laurent_bracket,
    sample_leibniz_algebra,
    sample_lie_algebra,
    scalar_model,
    truncated_polynomial_model,
    virasoro_model,
)
from dongcheck.varieties import LEIBNIZ, LIE, NOVIKOV

TRUNC_PRODUCTS = {(0, 0): [1, 0, 0], (0, 1): [0, 1, 0], (1, 0): [0, 1, 0],
                  (0, 2): [0, 0, 1], (2, 0): [0, 0, 1], (1, 1): [0, 0, 1]}
SAMPLES = Path(__file__).parent.parent / "sample_inputs"


class TestNovikovModels:
    def test_truncated_model_table(self):
        M = truncated_polynomial_model()
        u, u2 = M.e("u"), M.e("u2")
        # x o y = d(x) y with d = u d/du
        assert M.multiply("circ", u, u) == u2
        assert M.multiply("circ", M.e("1"), u).is_zero()
        assert M.multiply("circ", u2, M.e("1")) == 2 * u2
        assert M.identity_witness(NOVIKOV) is None

    def test_plain_d_du_is_rejected(self):
        d = [[0, 1, 0], [0, 0, 2], [0, 0, 0]]
        with pytest.raises(ModelError, match=r"not a derivation: Leibniz rule fails on \(u, u2\)"):
            make_novikov_from_derivation(("1", "u", "u2"), TRUNC_PRODUCTS, d)

    def test_scalar_multiple_of_identity(self):
        with pytest.raises(ModelError, match="not a derivation"):
            make_novikov_from_derivation(("e",), {(0, 0): [1]}, [[3]])
        # with the zero product every scalar is a derivation, and e o e = d(e) e = 0
        M = make_novikov_from_derivation(("e",), {}, [[3]])
        assert M.multiply("circ", M.e("e"), M.e("e")).is_zero()
        # the table e o e = alpha e is Novikov for every alpha
        T = NovikovModel.from_table(("e",), {(0, 0): [5]})
        assert T.multiply("circ", T.e("e"), T.e("e")) == 5 * T.e("e")

    def test_non_commutative_base_rejected(self):
        with pytest.raises(ModelError, match="not commutative-associative"):
            make_novikov_from_derivation(("x", "y"), {(0, 1): [1, 0]}, [[0, 0], [0, 0]])

    def test_non_novikov_table_rejected(self):
        with pytest.raises(ModelError, match="not a Novikov algebra"):
            NovikovModel.from_table(("x", "y"), {(0, 1): [1, 0], (1, 0): [0, 1]})

    def test_dimension_limit(self):
        with pytest.raises(ModelError, match="dimension 6"):
            NovikovModel.from_table(tuple(f"e{i}" for i in range(7)), {})


class TestModelFiles:
    def test_yaml_sample(self):
        M = load_model(str(SAMPLES / "trunc_model.yaml"))
        assert M.dimension == 3
        assert M.multiply("circ", M.e("u"), M.e("u")) == M.e("u2")

    def test_json_round_trip(self, tmp_path):
        data = {"dimension": 1, "basis": ["e"], "circ": [[0, 0, [1]]]}
        path = tmp_path / "vir.json"
        path.write_text(json.dumps(data))
        M = load_model(str(path))
        assert M.multiply("circ", M.e("e"), M.e("e")) == M.e("e")

    def test_bad_rows(self):
        with pytest.raises(ModelError, match="wrong length"):
            model_from_data({"dimension": 2, "circ": [[0, 0, [1]]]})
        with pytest.raises(ModelError, match="dimension"):
            model_from_data({"basis": ["e"]})
        with pytest.raises(ModelError, match="needs 'derivation'"):
            model_from_data({"dimension": 1})


class TestLaurentLie:
    def test_witt_relations(self):
        V = LaurentLie(virasoro_model())
        for n, m in itertools.product(range(-4, 5), repeat=2):
            got = V.multiply("bracket", V.basis_element("e", n), V.basis_element("e", m))
            assert got == (n - m) * V.basis_element("e", n + m - 1)

    def test_degree_zero_pair_vanishes(self):
        T = LaurentLie(truncated_polynomial_model())
        for a, b in itertools.product(T.model.basis, repeat=2):
            assert T.multiply("bracket", T.basis_element(a, 0), T.basis_element(b, 0)).is_zero()

    def test_first_coefficient(self):
        T = LaurentLie(truncated_polynomial_model())
        M = T.model
        for a, b in itertools.product(M.basis, repeat=2):
            got = T.multiply("bracket", T.basis_element(a, 1), T.basis_element(b, 0))
            assert got == T.element(M.multiply("circ", M.e(b), M.e(a)), 0)

    def test_bracket_helper(self):
        T = LaurentLie(truncated_polynomial_model())
        x, y = T.basis_element("u", 2), T.basis_element("1", -1)
        assert novikov_laurent_bracket(T, x, y) == T.multiply("bracket", x, y)

    @pytest.mark.parametrize("model", [virasoro_model, truncated_polynomial_model])
    def test_lie_identities_on_basis(self, model):
        L = LaurentLie(model())
        br = lambda x, y: L.multiply("bracket", x, y)
        elems = [L.basis_element(b, n) for b in L.model.basis for n in range(-4, 5)]
        for x, y in itertools.product(elems, repeat=2):
            assert (br(x, y) + br(y, x)).is_zero()
        # Jacobi on a spread of triples; every basis triple for the 1-dim model
        triples = itertools.product(elems, repeat=3) if len(L.model.basis) == 1 else \
            itertools.product(elems[::2], elems[1::3], elems[::4])
        for x, y, z in triples:
            assert (br(x, br(y, z)) + br(y, br(z, x)) + br(z, br(x, y))).is_zero()


class TestLaurentNovikov:
    @pytest.mark.parametrize("model", [scalar_model, truncated_polynomial_model])
    def test_is_novikov(self, model):
        LN = LaurentNovikov(model())
        circ = lambda x, y: LN.multiply("circ", x, y)
        elems = [LN.basis_element(b, n) for b in LN.model.basis for n in (-2, 0, 1, 3)]
        for x, y, z in itertools.product(elems, repeat=3):
            assoc_xyz = circ(circ(x, y), z) - circ(x, circ(y, z))
            assoc_xzy = circ(circ(x, z), y) - circ(x, circ(z, y))
            assert (assoc_xyz - assoc_xzy).is_zero()
            assert (circ(x, circ(y, z)) - circ(y, circ(x, z))).is_zero()

    def test_witt_type_product(self):
        LN = LaurentNovikov(scalar_model())
        x, y = LN.basis_element("1", 3), LN.basis_element("1", -1)
        assert LN.multiply("circ", x, y) == 3 * LN.basis_element("1", 1)


class TestLeibnizSamples:
    def test_sample_is_leibniz_not_lie(self):
        L = sample_leibniz_algebra()
        x, y = L.e("x"), L.e("y")
        assert L.identity_witness(LEIBNIZ) is None
        assert L.identity_witness(LIE) is not None
        assert L.multiply("bracket", x, x) == y

    def test_lie_sample(self):
        assert sample_lie_algebra().identity_witness(LIE) is None


coeffs = st.lists(st.integers(-3, 3), min_size=3, max_size=3)


@settings(max_examples=40, deadline=None)
@given(coeffs, coeffs, coeffs)
def test_truncated_model_novikov_identities(a, b, c):
    M = truncated_polynomial_model()
    x, y, z = M.element(a), M.element(b), M.element(c)
    o = lambda u, v: M.multiply("circ", u, v)
    assert (o(o(x, y), z) - o(x, o(y, z)) - o(o(x, z), y) + o(x, o(z, y))).is_zero()
    assert (o(x, o(y, z)) - o(y, o(x, z))).is_zero()
    assert (o(x + 2 * y, z) - o(x, z) - 2 * o(y, z)).is_zero()
