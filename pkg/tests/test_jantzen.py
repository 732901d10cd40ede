import pytest

from modular_flags.diagnostics import jantzen_sweep
from modular_flags.errors import InputError
from modular_flags.highestweight import decompose_weyl
from modular_flags.jantzen import (
    VirtualWeylCharacter,
    euler_normalize,
    jantzen_sum,
    jantzen_terms,
    jantzen_vs_gram,
)
from modular_flags.rootsys import Weight, root_system


def test_euler_normalize(A1):
    assert euler_normalize(A1, Weight((-1,))) is None
    assert euler_normalize(A1, Weight((-3,))) == (-1, Weight((1,)))
    assert euler_normalize(A1, Weight((2,))) == (1, Weight((2,)))


def test_virtual_character_cancellation(A1):
    chi = VirtualWeylCharacter(A1)
    chi.add(Weight((1,)), 1)
    chi.add(Weight((-3,)), 1)
    assert chi.is_zero()


def test_sl2_sum(A1):
    assert jantzen_sum(A1, Weight((2,)), 2).terms == {Weight((0,)): 1}
    # restricted weights have an empty sum
    assert jantzen_sum(A1, Weight((1,)), 2).is_zero()


def test_sl2_terms(A1):
    terms = jantzen_terms(A1, Weight((4,)), 2)
    # 0 < mp < 5: levels 2 and 4
    assert [(t.level, t.valuation) for t in terms] == [(2, 1), (4, 2)]
    # level 2 gives s . (-2) = 0 with sign -1
    assert jantzen_sum(A1, Weight((4,)), 2).terms == {Weight((2,)): 2, Weight((0,)): -1}


def test_adjoint_sl3(A2):
    assert jantzen_sum(A2, Weight((1, 1)), 3).terms == {Weight((0, 0)): 1}


def test_b2_omega(B2):
    assert jantzen_sum(B2, Weight((1, 0)), 2).terms == {Weight((0, 0)): 1}


@pytest.mark.parametrize("name, coords, p", [
    ("A1", (2,), 2), ("A1", (4,), 2), ("A1", (5,), 3), ("A1", (6,), 2),
    ("A2", (1, 1), 2), ("A2", (1, 1), 3), ("A2", (2, 1), 2), ("A2", (3, 0), 3),
    ("B2", (1, 0), 2), ("B2", (0, 1), 2), ("B2", (1, 1), 2), ("B2", (0, 2), 3),
    ("A3", (1, 0, 1), 2), ("C3", (0, 0, 1), 2),
])
def test_jantzen_matches_gram(name, coords, p):
    report = jantzen_vs_gram(root_system(name), Weight(coords), p)
    assert report.ok
    assert all(d == 0 for d in report.deltas.values())


def test_report_rows(B2):
    rows = jantzen_vs_gram(B2, Weight((1, 0)), 2).as_rows()
    zero = next(r for r in rows if r["weight"] == "00")
    assert zero == {"weight": "00", "jantzen": 1, "gram_valuation": 1, "delta": 0}


def test_non_dominant(A2):
    with pytest.raises(InputError):
        jantzen_sum(A2, Weight((-1, 0)), 2)


def test_reduced_sweep():
    df = jantzen_sweep(["A1", "A2", "B2"], [2, 3], cap=16)
    assert len(df) > 0
    assert df.match.all()


@pytest.mark.slow
def test_full_sweep():
    df = jantzen_sweep()
    assert df.match.all()


@pytest.mark.parametrize("name, coords, p", [
    ("A1", (6,), 2), ("A2", (2, 1), 2), ("A2", (3, 0), 3), ("A2", (1, 1), 3), ("B2", (1, 0), 2),
    ("C3", (0, 0, 1), 2),
])
def test_expansion_sees_every_composition_factor(name, coords, p):
    R = root_system(name)
    lam = Weight(coords)
    expansion = jantzen_sum(R, lam, p).weight_expansion()
    assert all(c > 0 for c in expansion.values())
    factors = decompose_weyl(R, lam, p)
    below = [mu for mu in factors if mu != lam]
    assert below
    assert all(expansion.get(mu, 0) > 0 for mu in below)
