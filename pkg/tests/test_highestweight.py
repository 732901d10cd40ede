import logging
from math import comb

import pytest

from modular_flags import exact
from modular_flags.chevalley import GradedOperator, LoweringWord, commutation_terms
from modular_flags.errors import CapExceededError, InputError
from modular_flags.highestweight import (
    build_weyl_module,
    decompose_weyl,
    gram_elementary_divisor_valuations,
    lowering_images,
    simple_head_mod_p,
    simple_module,
    weight_table,
)
from modular_flags.rootsys import Weight, root_system


class TestWeylModule:

    @pytest.mark.parametrize("m", range(1, 7))
    def test_sl2_gram_is_binomial(self, A1, m):
        V = build_weyl_module(A1, Weight((m,)))
        grams = [exact.rows(V.gram(Weight((m - 2 * k,)))) for k in range(m + 1)]
        assert grams == [[[comb(m, k)]] for k in range(m + 1)]

    def test_sl2_blocks(self, A1):
        V = build_weyl_module(A1, Weight((2,)))
        top, middle = Weight((2,)), Weight((0,))
        assert exact.rows(V.lowering_blocks[(top, 0, 1)]) == [[1]]
        assert exact.rows(V.lowering_blocks[(middle, 0, 1)]) == [[2]]
        assert exact.rows(V.raising_blocks[(middle, 0, 1)]) == [[2]]

    @pytest.mark.parametrize("name, coords", [
        ("A2", (1, 1)), ("A2", (2, 1)), ("B2", (1, 1)), ("C3", (0, 1, 0)), ("G2", (1, 0)),
    ])
    def test_dimension_and_symmetry(self, name, coords):
        R = root_system(name)
        V = build_weyl_module(R, Weight(coords))
        assert V.dim == sum(V.dims.values())
        for mu in V.weights:
            assert exact.is_symmetric(V.gram(mu))
            assert exact.elementary_divisors(V.gram(mu))[-1] != 0

    def test_c4_omega4(self, c4_omega4_simple):
        assert c4_omega4_simple.module.dim == 42

    def test_size_cap(self, C4):
        with pytest.raises(CapExceededError):
            build_weyl_module(C4, Weight.fundamental(4, 4), size_cap=10)

    def test_non_dominant(self, A2):
        with pytest.raises(InputError):
            build_weyl_module(A2, Weight((1, -1)))

    def test_summary(self, B2):
        summary = build_weyl_module(B2, Weight((1, 0))).summary()
        assert summary["dim"] == 5
        assert summary["weights"][0] == {"weight": "10", "multiplicity": 1, "gram": [[1]]}


def _dense(op, mu, V):
    "Block of a graded operator at mu as rows, zero when absent"
    if mu in op.blocks:
        return exact.rows(exact.to_qq(op.blocks[mu]))
    return [[0] * V.dims[mu] for _ in range(V.dims[mu + op.shift])]


def _op(V, kind, i, m):
    if m == 0:
        return GradedOperator.identity(V.dims)
    return V.raising(i, m) if kind == "e" else V.lowering(i, m)


ACTION_CASES = [("A1", (4,)), ("B2", (1, 1)), ("B2", (2, 0)), ("C3", (0, 1, 0))]


class TestActions:

    @pytest.mark.parametrize("name, coords", ACTION_CASES)
    def test_divided_powers_of_generators(self, name, coords):
        R = root_system(name)
        V = build_weyl_module(R, Weight(coords))
        for i in range(R.rank):
            for m in (2, 3):
                for kind in "ef":
                    op = _op(V, kind, i, m)
                    power = _op(V, kind, i, 1).divided_power(m, V.dims)
                    for mu in V.weights:
                        if mu + op.shift in V.dims:
                            assert _dense(power, mu, V) == _dense(op, mu, V)

    @pytest.mark.parametrize("name, coords", ACTION_CASES)
    def test_commutation_on_blocks(self, name, coords):
        R = root_system(name)
        V = build_weyl_module(R, Weight(coords))
        for i in range(R.rank):
            for m in range(1, 4):
                for n in range(1, 4):
                    product = _op(V, "e", i, m) @ _op(V, "f", i, n)
                    for mu in V.weights:
                        target = mu + product.shift
                        if target not in V.dims:
                            continue
                        expected = [[0] * V.dims[mu] for _ in range(V.dims[target])]
                        for f_exp, coeff, e_exp in commutation_terms(m, n, mu.coords[i]):
                            term = _dense(_op(V, "f", i, f_exp) @ _op(V, "e", i, e_exp), mu, V)
                            expected = [[x + coeff * y for x, y in zip(a, b)] for a, b in zip(expected, term)]
                        assert _dense(product, mu, V) == expected, (i, m, n, mu)
        # distinct simple roots commute
        for i in range(R.rank):
            for j in range(R.rank):
                if i == j:
                    continue
                ef = _op(V, "e", i, 1) @ _op(V, "f", j, 1)
                fe = _op(V, "f", j, 1) @ _op(V, "e", i, 1)
                for mu in V.weights:
                    if mu + ef.shift in V.dims:
                        assert _dense(ef, mu, V) == _dense(fe, mu, V)

    @pytest.mark.parametrize("name, coords", ACTION_CASES)
    def test_form_is_contravariant(self, name, coords):
        # <f^(m) x, y> = <x, e^(m) y> on every pair of weight spaces
        V = build_weyl_module(root_system(name), Weight(coords))
        for (mu, i, m), lowering in V.lowering_blocks.items():
            target = mu - V.R.root_weight(V.R.simple_root(i)) * m
            raising = V.raising_blocks[(target, i, m)]
            lhs = exact.matmul(exact.transpose(exact.to_qq(lowering)), exact.to_qq(V.gram(target)))
            rhs = exact.matmul(exact.to_qq(V.gram(mu)), exact.to_qq(raising))
            assert exact.rows(lhs) == exact.rows(rhs)


class TestSimpleHead:

    def test_c4_omega4(self, c4_omega4_simple):
        assert c4_omega4_simple.dim == 16

    def test_b2_omega(self, b2_omega_simple):
        assert b2_omega_simple.dim == 4
        assert Weight((0, 0)) not in b2_omega_simple.dims

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_restricted_sl2_is_simple(self, A1, p):
        L = simple_module(A1, Weight((p - 1,)), p)
        assert L.dim == p

    def test_sl2_steinberg_tensor(self, A1):
        # L(p) = L(1)^[1] has weights +-p only
        L = simple_module(A1, Weight((3,)), 3)
        assert sorted(w.coords for w in L.weights) == [(-3,), (3,)]

    def test_adjoint_sl3_char_3(self, A2):
        L = simple_module(A2, Weight((1, 1)), 3)
        assert L.dim == 7
        assert L.dims.get(Weight((0, 0))) == 1

    def test_non_prime(self, A1):
        with pytest.raises(InputError):
            simple_module(A1, Weight((2,)), 4)

    def test_characteristic_warning_logged(self, b2_omega_weyl, caplog):
        with caplog.at_level(logging.WARNING):
            simple_head_mod_p(b2_omega_weyl, 2)
        assert "characteristic bound" in caplog.text

    def test_lowering_images(self, b2_omega_simple):
        image = lowering_images(b2_omega_simple, LoweringWord(((0, 1),)))
        assert not exact.is_zero(image)
        # f2 f1 v lands on the zero weight, which is radical
        assert lowering_images(b2_omega_simple, LoweringWord(((1, 1), (0, 1)))) is None

    def test_action_rows(self, b2_omega_simple):
        rows = b2_omega_simple.action_rows()
        assert rows and all({"source", "target", "simple_root", "exponent", "matrix"} <= set(r) for r in rows)


class TestDecomposition:

    def test_b2_omega(self, B2):
        assert decompose_weyl(B2, Weight((1, 0)), 2) == {Weight((1, 0)): 1, Weight((0, 0)): 1}

    def test_sl2(self, A1):
        assert decompose_weyl(A1, Weight((2,)), 2) == {Weight((2,)): 1, Weight((0,)): 1}
        assert decompose_weyl(A1, Weight((2,)), 3) == {Weight((2,)): 1}

    def test_adjoint_sl3(self, A2):
        assert decompose_weyl(A2, Weight((1, 1)), 3) == {Weight((1, 1)): 1, Weight((0, 0)): 1}

    @pytest.mark.parametrize("name, coords, p", [
        ("A2", (2, 1), 2), ("A2", (3, 0), 3), ("B2", (1, 1), 2), ("B2", (0, 2), 3), ("A3", (1, 0, 1), 2),
    ])
    def test_dimension_bookkeeping(self, name, coords, p):
        R = root_system(name)
        lam = Weight(coords)
        factors = decompose_weyl(R, lam, p)
        total = sum(c * simple_module(R, mu, p).dim for mu, c in factors.items())
        assert total == build_weyl_module(R, lam).dim


class TestGramValuations:

    def test_sl2(self, A1):
        V = build_weyl_module(A1, Weight((2,)))
        assert gram_elementary_divisor_valuations(V, 2) == {Weight((2,)): 0, Weight((0,)): 1, Weight((-2,)): 0}

    def test_weight_table(self, b2_omega_simple):
        rows = weight_table(b2_omega_simple.module, b2_omega_simple)
        zero = next(r for r in rows if r["weight"] == "00")
        assert zero["weyl_multiplicity"] == 1
        assert zero["simple_multiplicity"] == 0
        assert zero["gram_valuation"] >= 1
