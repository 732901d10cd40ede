import random

import pytest

from modular_flags.errors import InputError
from modular_flags.rootsys import (
    RootSystemSpec,
    Weight,
    binom_valuation,
    binom_valuation_direct,
    characteristic_warning,
    dominant_conjugate,
    dominant_weights_below,
    freudenthal_multiplicities,
    is_weight_of,
    nu_p,
    pairing,
    parse_root_label,
    reflect_dot,
    root_labels,
    root_system,
    simple_reflection,
    weyl_dimension,
)
from modular_flags.utils import INF, format_coordinates, parse_coordinates


@pytest.mark.parametrize("name, count", [
    ("A1", 1), ("A3", 6), ("B2", 4), ("C4", 16), ("D4", 12),
    ("G2", 6), ("F4", 24), ("E6", 36), ("E8", 120),
])
def test_positive_root_count(name, count):
    assert len(root_system(name).positive_roots) == count


@pytest.mark.parametrize("name", ["Z9", "A0", "B1", "D2", "E9", "G3", "C", ""])
def test_invalid_root_systems(name):
    with pytest.raises(InputError):
        root_system(name)


def test_spec_parse():
    spec = RootSystemSpec.parse("c4")
    assert (spec.family, spec.rank, spec.name) == ("C", 4, "C4")


def test_cartan_convention(B2):
    # alpha_1 long, alpha_2 short: <alpha_2, alpha_1^vee> = -1, <alpha_1, alpha_2^vee> = -2
    assert B2.cartan.tolist() == [[2, -1], [-2, 2]]
    assert B2.simple_norms == (4, 2)


def test_c4_labels(C4):
    labels = root_labels(C4)
    for label in ("0001", "0011", "0021", "0221", "2221", "1111"):
        assert label in labels
    assert C4.positive_roots[-1] == (2, 2, 2, 1)
    assert C4.norm((0, 0, 0, 1)) == 4 and C4.norm((0, 0, 1, 1)) == 2


@pytest.mark.parametrize("name, coords, dim", [
    ("A1", (4,), 5),
    ("A2", (1, 1), 8),
    ("A2", (2, 0), 6),
    ("A3", (0, 1, 0), 6),
    ("B2", (1, 0), 5),
    ("B2", (0, 1), 4),
    ("C3", (1, 0, 0), 6),
    ("C4", (0, 0, 0, 1), 42),
    ("C4", (1, 0, 0, 0), 8),
    ("D4", (1, 0, 0, 0), 8),
    ("F4", (0, 0, 0, 1), 26),
    ("E6", (1, 0, 0, 0, 0, 0), 27),
])
def test_weyl_dimension(name, coords, dim):
    assert weyl_dimension(root_system(name), Weight(coords)) == dim


def test_g2_fundamental_dimensions():
    G2 = root_system("G2")
    dims = sorted(weyl_dimension(G2, Weight.fundamental(i, 2)) for i in (1, 2))
    assert dims == [7, 14]


@pytest.mark.parametrize("name, coords", [
    ("A2", (1, 1)), ("A2", (3, 1)), ("B2", (1, 1)), ("C3", (0, 1, 0)), ("G2", (1, 0)),
])
def test_freudenthal_sums_to_weyl_dimension(name, coords):
    R = root_system(name)
    lam = Weight(coords)
    mult = freudenthal_multiplicities(R, lam)
    assert sum(mult.values()) == weyl_dimension(R, lam)
    assert next(iter(mult)) == lam


def test_adjoint_zero_weight(A2):
    mult = freudenthal_multiplicities(A2, Weight((1, 1)))
    assert mult[Weight((0, 0))] == 2


def test_freudenthal_returns_a_copy(A2):
    mult = freudenthal_multiplicities(A2, Weight((1, 0)))
    mult.clear()
    assert len(freudenthal_multiplicities(A2, Weight((1, 0)))) == 3


def test_dominant_weights_below(B2):
    assert dominant_weights_below(B2, Weight((1, 0))) == [Weight((1, 0)), Weight((0, 0))]
    assert dominant_weights_below(B2, Weight((0, 1))) == [Weight((0, 1))]


def test_is_weight_of(B2):
    assert is_weight_of(B2, Weight((1, 0)), Weight((0, 0)))
    assert not is_weight_of(B2, Weight((0, 1)), Weight((0, 0)))


def test_non_dominant_rejected(A2):
    with pytest.raises(InputError):
        weyl_dimension(A2, Weight((-1, 2)))


class TestValuations:

    def test_nu_p(self):
        assert nu_p(0, 2) is INF
        assert nu_p(12, 2) == 2
        assert nu_p(7, 7) == 1
        assert nu_p(5, 3) == 0

    def test_nu_p_rejects_non_prime(self):
        with pytest.raises(InputError):
            nu_p(4, 4)

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_kummer_matches_direct(self, p):
        for m in range(-6, 30):
            for n in range(0, 12):
                assert binom_valuation(m, n, p) == binom_valuation_direct(m, n, p)


class TestWeylGroup:

    def test_simple_reflection(self, A2):
        assert simple_reflection(A2, Weight((1, 0)), 0) == Weight((-1, 1))

    def test_dominant_conjugate(self, A1, A2):
        assert dominant_conjugate(A1, Weight((-3,))) == (Weight((3,)), 1)
        assert dominant_conjugate(A2, Weight((-1, 0))) == (Weight((0, 1)), 0)

    def test_reflect_dot(self, A1):
        # <2 + 1, alpha^vee> = 3, level 2: lam - alpha
        assert reflect_dot(A1, Weight((2,)), 0, 2) == Weight((0,))

    def test_pairing_long_and_short(self, B2):
        lam = Weight((1, 0))
        assert pairing(B2, lam, (1, 0)) == 1
        assert pairing(B2, lam, (1, 1)) == 2
        assert pairing(B2, lam, (1, 2)) == 1
        assert pairing(B2, lam, (-1, -1)) == -2


@pytest.mark.parametrize("name, p, warns", [
    ("B2", 2, True), ("B2", 3, False), ("C4", 2, True), ("G2", 3, True), ("G2", 5, False),
    ("F4", 2, True), ("A2", 2, False), ("D4", 2, False),
])
def test_characteristic_warning(name, p, warns):
    assert (characteristic_warning(root_system(name), p) is not None) == warns


class TestParsing:

    def test_digit_and_comma_forms(self):
        assert Weight.parse("0001", 4) == Weight.parse("0,0,0,1", 4)

    def test_large_coordinates_need_commas(self):
        assert parse_coordinates("10,0", 2) == (10, 0)
        assert format_coordinates((10, 0)) == "10,0"
        assert format_coordinates((1, 0)) == "10"

    @pytest.mark.parametrize("text", ["001", "0,0,1", "a001", "", "00001"])
    def test_bad_weights(self, text):
        with pytest.raises(InputError):
            Weight.parse(text, 4)

    def test_sweep_round_trip(self):
        for coords in [(0, 0, 0, 1), (3, 0, 2, 9), (12, 0, 4, 25)]:
            assert parse_coordinates(format_coordinates(coords), 4) == coords

    def test_root_labels(self, C4):
        assert parse_root_label(C4, "0021") == (0, 0, 2, 1)
        with pytest.raises(InputError):
            parse_root_label(C4, "0012")


@pytest.mark.parametrize("name", ["A3", "B2", "C3", "G2", "F4"])
def test_pairing_is_bilinear(name):
    R = root_system(name)
    rng = random.Random(7)
    for _ in range(20):
        lam = Weight(tuple(rng.randint(-5, 5) for _ in range(R.rank)))
        mu = Weight(tuple(rng.randint(-5, 5) for _ in range(R.rank)))
        k = rng.randint(3, 4)
        for alpha in range(len(R.positive_roots)):
            assert pairing(R, lam + mu, alpha) == pairing(R, lam, alpha) + pairing(R, mu, alpha)
            assert pairing(R, lam * k, alpha) == k * pairing(R, lam, alpha)


@pytest.mark.parametrize("name, coords", [
    ("A2", (2, 1)), ("B2", (1, 1)), ("B2", (0, 3)), ("C3", (1, 0, 1)), ("G2", (1, 1)),
])
def test_freudenthal_is_weyl_invariant(name, coords):
    R = root_system(name)
    mult = freudenthal_multiplicities(R, Weight(coords))
    for mu, m in mult.items():
        for i in range(R.rank):
            assert mult.get(simple_reflection(R, mu, i), 0) == m
