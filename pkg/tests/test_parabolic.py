import itertools

import pytest

from modular_flags.chevalley import structure_constants
from modular_flags.errors import InputError, NotACharacterError, UnsupportedCaseError
from modular_flags.highestweight import simple_module
from modular_flags.parabolic import (
    ParabolicStandardSpec,
    character_lattice,
    compare_reference_table,
    embedding_dimension,
    exponents_from_table,
    frobenius_thickening,
    full_exponents,
    incidence_stabilizer,
    intersect_exponents,
    is_exceptional,
    is_very_ample,
    lattice_for_exponents,
    orbit_dimension,
    simple_exponents,
    standard_closure,
    standard_spec_from_exponents,
)
from modular_flags.rootsys import Weight, root_system
from modular_flags.settings import C4_OMEGA4_TABLE
from modular_flags.utils import INF


@pytest.fixture(scope="module")
def c4_exponents(c4_omega4_simple):
    return full_exponents(c4_omega4_simple)


@pytest.fixture(scope="module")
def b2_exponents(b2_omega_simple):
    return full_exponents(b2_omega_simple)


class TestC4:

    def test_table(self, c4_exponents):
        assert c4_exponents.as_dict() == C4_OMEGA4_TABLE

    def test_compare(self, c4_exponents):
        report = compare_reference_table(c4_exponents, "C4")
        assert report["match"]
        assert len(report["rows"]) == 16
        assert report["notes"] == []

    def test_dimensions(self, c4_exponents, c4_omega4_simple):
        assert orbit_dimension(c4_exponents) == 10
        assert embedding_dimension(c4_omega4_simple) == 15

    def test_exceptional(self, c4_exponents):
        assert c4_exponents.simple() == (INF, INF, INF, 0)
        assert is_exceptional(c4_exponents)
        with pytest.raises(UnsupportedCaseError):
            standard_spec_from_exponents(c4_exponents)
        with pytest.raises(UnsupportedCaseError):
            lattice_for_exponents(c4_exponents, 2)


class TestB2:

    def test_exponents(self, b2_exponents):
        assert set(b2_exponents.simple()) == {0, INF}
        assert b2_exponents["11"] == 1
        assert b2_exponents["12"] == 0
        assert orbit_dimension(b2_exponents) == 3

    def test_compare_reports_labels(self, b2_exponents):
        report = compare_reference_table(b2_exponents, "B2")
        assert report["match"]
        assert report["notes"]

    def test_wrong_table(self, b2_exponents):
        with pytest.raises(InputError):
            compare_reference_table(b2_exponents, "C4")
        with pytest.raises(InputError):
            compare_reference_table(b2_exponents, "G2")

    def test_sign_convention_invariance(self, B2, b2_omega_simple, b2_exponents):
        flipped = structure_constants(B2, frozenset({(1, 1)}))
        assert full_exponents(b2_omega_simple, flipped) == b2_exponents


class TestStandard:

    def test_simple_exponents(self, A2):
        assert simple_exponents(A2, Weight((1, 2)), 2) == (0, 1)
        assert simple_exponents(A2, Weight((0, 3)), 3) == (INF, 1)

    def test_standard_module_has_standard_exponents(self, A2):
        L = simple_module(A2, Weight((1, 2)), 2)
        E = full_exponents(L)
        assert not is_exceptional(E)
        assert E == standard_closure(A2, (0, 1))
        assert standard_spec_from_exponents(E) == ParabolicStandardSpec.from_mapping(2, {0: 0, 1: 1})

    def test_thickening_and_intersection(self, B2):
        E = exponents_from_table(B2, {"10": 0, "01": "inf", "11": 1, "12": 0})
        assert frobenius_thickening(E, 2).as_dict() == {"10": 2, "01": "inf", "11": 2, "12": 2}
        other = standard_closure(B2, (INF, 0))
        assert intersect_exponents(E, other).as_dict() == {"10": 0, "01": 0, "11": 0, "12": 0}
        with pytest.raises(InputError):
            frobenius_thickening(E, -1)

    def test_trivial_module_has_no_embedding(self, A2):
        with pytest.raises(InputError):
            embedding_dimension(simple_module(A2, Weight((0, 0)), 2))

    def test_bad_spec(self):
        with pytest.raises(InputError):
            ParabolicStandardSpec(2, ((2, 0),))
        with pytest.raises(InputError):
            ParabolicStandardSpec(2, ((0, -1),))


class TestLattice:

    def test_incidence_stabilizer(self):
        spec, lam = incidence_stabilizer(2, 3, 1)
        assert spec.finite_part == ((0, 0), (1, 1))
        assert lam == Weight((1, 3))
        with pytest.raises(InputError):
            incidence_stabilizer(1, 3, 1)

    def test_coefficients(self):
        spec, _ = incidence_stabilizer(3, 2, 2)
        lattice = character_lattice(spec, 2)
        assert lattice.coefficients(Weight((2, 0, 8))) == {0: 2, 2: 2}
        assert lattice.contains(Weight((1, 0, 4)))
        assert not lattice.contains(Weight((1, 0, 2)))
        assert not lattice.contains(Weight((1, 1, 4)))
        with pytest.raises(NotACharacterError):
            lattice.coefficients(Weight((0, 1, 0)))

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("r", [1, 2])
    @pytest.mark.parametrize("p", [2, 3])
    def test_very_ample_iff_positive(self, n, r, p):
        spec, _ = incidence_stabilizer(n, p, r)
        for a in range(3):
            for b in range(3):
                chi = Weight(tuple(a if i == 0 else (b * p ** r if i == n - 1 else 0) for i in range(n)))
                assert is_very_ample(chi, spec, p) == (a > 0 and b > 0)

    def test_not_a_character(self):
        spec, _ = incidence_stabilizer(2, 2, 1)
        with pytest.raises(NotACharacterError):
            is_very_ample(Weight((1, 1)), spec, 2)


@pytest.mark.parametrize("name", ["A2", "B2", "C3", "G2"])
def test_standard_closure_is_idempotent_and_monotone(name):
    R = root_system(name)
    for simple in itertools.product((0, 1, 2, INF), repeat=R.rank):
        E = standard_closure(R, simple)
        assert standard_closure(R, E.simple()) == E
        assert not is_exceptional(E)
        for i, n in enumerate(simple):
            if n is INF:
                continue
            raised = standard_closure(R, simple[:i] + (n + 1,) + simple[i + 1:])
            assert not any(raised.entries[a] < E.entries[a] for a in R.positive_roots)
