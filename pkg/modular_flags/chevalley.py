"""Chevalley basis structure constants and divided power calculus.

Structure constants follow the extraspecial pair algorithm: for every
non-simple positive root xi, the pair (gamma, delta) with gamma minimal in
the positive root order is extraspecial and gets N = +(p + 1); every other
constant follows from the Chevalley relations. Module actions are stored as
weight graded blocks (``GradedOperator``), one exact rational matrix per
source weight.
"""
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from . import exact
from .errors import ConsistencyError, InputError
from .rootsys import Root, RootSystem, Weight, root_label
from .utils import general_binomial, get_logger

logger = get_logger(__name__)


def _add(a: Root, b: Root) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Root, b: Root) -> Root:
    return tuple(x - y for x, y in zip(a, b))


def _neg(a: Root) -> Root:
    return tuple(-x for x in a)


# Structure constants
################################################

@dataclass(frozen=True, eq=False)
class StructureConstants:
    R: RootSystem
    table: Dict[Tuple[Root, Root], int]
    extraspecial: Dict[Root, Tuple[Root, Root]]
    decompositions: Dict[Root, Tuple[Root, int]]
    flipped: FrozenSet[Root] = frozenset()

    def N(self, a: Root, b: Root) -> int:
        "N_{a,b}, zero when a + b is not a root"
        return self.table.get((tuple(a), tuple(b)), 0)

    def as_rows(self) -> List[dict]:
        return [{"a": _signed_label(a), "b": _signed_label(b), "N": n}
                for (a, b), n in sorted(self.table.items())]


def _signed_label(root: Root) -> str:
    if all(c <= 0 for c in root):
        return "-" + root_label(_neg(root))
    return root_label(root)


def _general_constant(R: RootSystem, base: Dict[Tuple[Root, Root], int], x: Root, y: Root) -> int:
    """
    N_{x,y} pour deux racines quelconques, à partir des constantes entre
    racines positives déjà calculées.
    """
    s = _add(x, y)
    if not R.is_root(s):
        return 0
    px, py = R.is_positive_root(x), R.is_positive_root(y)
    if px and py:
        return base[(x, y)]
    if not px and not py:
        return -base[(_neg(x), _neg(y))]
    if not px:
        return -_general_constant(R, base, y, x)

    # x > 0 > y, z = -(x + y); N_{x,y}/(z,z) = N_{y,z}/(x,x) = N_{z,x}/(y,y)
    z = _neg(s)
    if R.is_positive_root(s):
        value = Fraction(R.norm(z), R.norm(x)) * -base[(_neg(y), _neg(z))]
    else:
        value = Fraction(R.norm(z), R.norm(y)) * base[(z, x)]
    if value.denominator != 1:
        raise ConsistencyError(f"Non integral structure constant N({x}, {y}) = {value}")
    return int(value)


@lru_cache(maxsize=None)
def structure_constants(R: RootSystem, flipped: FrozenSet[Root] = frozenset()) -> StructureConstants:
    """Signed structure constants N_{a,b} for every pair of roots with a + b a root.

    Args:
        R (RootSystem): Root system.
        flipped (frozenset): Positive roots whose extraspecial sign is taken
            negative instead of positive (alternative sign convention).

    Returns:
        StructureConstants: Complete table, with the extraspecial pairs and
        the decompositions alpha = beta + alpha_i used to build root vectors.
    """
    positive = R.positive_roots
    order = {r: k for k, r in enumerate(positive)}
    flipped = frozenset(tuple(r) for r in flipped)
    base: Dict[Tuple[Root, Root], int] = {}
    extraspecial: Dict[Root, Tuple[Root, Root]] = {}
    decompositions: Dict[Root, Tuple[Root, int]] = {}

    for xi in positive:
        if R.height(xi) == 1:
            continue
        pairs = sorted(
            ((a, _sub(xi, a)) for a in positive
             if R.is_positive_root(_sub(xi, a)) and order[a] < order[_sub(xi, a)]),
            key=lambda ab: order[ab[0]],
        )
        gamma, delta = pairs[0]
        extraspecial[xi] = (gamma, delta)
        n_gd = R.string_bottom(gamma, delta) + 1
        if xi in flipped:
            n_gd = -n_gd
        base[(gamma, delta)], base[(delta, gamma)] = n_gd, -n_gd

        for a, b in pairs[1:]:
            total = Fraction(0)
            b_gamma = _sub(b, gamma)
            if R.is_root(b_gamma):
                total += Fraction(_general_constant(R, base, b, _neg(gamma))
                                  * _general_constant(R, base, a, _neg(delta)), R.norm(b_gamma))
            a_gamma = _sub(a, gamma)
            if R.is_root(a_gamma):
                total += Fraction(_general_constant(R, base, _neg(gamma), a)
                                  * _general_constant(R, base, b, _neg(delta)), R.norm(a_gamma))
            value = Fraction(R.norm(xi), n_gd) * total
            if value.denominator != 1 or abs(value) != R.string_bottom(a, b) + 1:
                raise ConsistencyError(f"Bad structure constant N({a}, {b}) = {value} in {R.name}")
            base[(a, b)], base[(b, a)] = int(value), -int(value)

        for i in range(R.rank):
            beta = _sub(xi, R.simple_root(i))
            if R.is_positive_root(beta):
                decompositions[xi] = (beta, i)
                break

    roots = list(positive) + [_neg(r) for r in positive]
    table = {}
    for x in roots:
        for y in roots:
            if R.is_root(_add(x, y)):
                n = _general_constant(R, base, x, y)
                if abs(n) != R.string_bottom(x, y) + 1:
                    raise ConsistencyError(f"|N({x}, {y})| = {abs(n)} in {R.name}")
                table[(x, y)] = n

    logger.debug(f"{R.name}: {len(table)} structure constants, {len(flipped)} flipped signs")
    return StructureConstants(R, table, extraspecial, decompositions, flipped)


def jacobi_defects(sc: StructureConstants, samples: int = 100, seed: int = 0) -> List[Tuple[Root, Root, Root]]:
    """
    Tire des triplets de racines (a, b, c), deux à deux non opposées et de
    somme une racine, et renvoie ceux qui violent l'identité de Jacobi.
    """
    R = sc.R
    roots = list(R.positive_roots) + [_neg(r) for r in R.positive_roots]
    triples = [(a, b, c) for a in roots for b in roots for c in roots
               if R.is_root(_add(_add(a, b), c))
               and any(c2 != 0 for c2 in _add(a, b)) and any(c2 != 0 for c2 in _add(b, c))
               and any(c2 != 0 for c2 in _add(a, c))]
    rng = random.Random(seed)
    chosen = triples if len(triples) <= samples else rng.sample(triples, samples)
    defects = []
    for a, b, c in chosen:
        value = (sc.N(a, b) * sc.N(_add(a, b), c)
                 + sc.N(b, c) * sc.N(_add(b, c), a)
                 + sc.N(c, a) * sc.N(_add(c, a), b))
        if value:
            defects.append((a, b, c))
    return defects


# Lowering words
################################################

@dataclass(frozen=True)
class LoweringWord:
    "Product f_{i1}^{(m1)} ... f_{ik}^{(mk)}, letters as (simple index from 0, exponent)"
    letters: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        letters = tuple((int(i), int(m)) for i, m in self.letters)
        for i, m in letters:
            if i < 0 or m < 1:
                raise InputError(f"Bad lowering letter ({i}, {m})")
        object.__setattr__(self, "letters", letters)

    def weight_drop(self, R: RootSystem) -> Weight:
        drop = Weight.zero(R.rank)
        for i, m in self.letters:
            drop = drop + R.root_weight(R.simple_root(i)) * m
        return drop

    def apply(self, module, vector: Mapping[Weight, DomainMatrix]) -> Dict[Weight, DomainMatrix]:
        "Applies the word to a graded vector, rightmost letter first"
        for i, m in reversed(self.letters):
            vector = module.lowering(i, m).apply(vector)
        return dict(vector)

    def __str__(self) -> str:
        return " ".join(f"f{i + 1}" if m == 1 else f"f{i + 1}^({m})" for i, m in self.letters) or "1"


# Graded operators
################################################

@dataclass(frozen=True)
class GradedOperator:
    """
    Opérateur homogène de degré ``shift`` : un bloc rationnel par poids
    source, envoyant V_mu dans V_{mu + shift}. Un poids absent des blocs
    est envoyé sur 0.
    """
    shift: Weight
    blocks: Mapping[Weight, DomainMatrix] = field(default_factory=dict)

    @classmethod
    def identity(cls, dims: Mapping[Weight, int]) -> "GradedOperator":
        rank = len(next(iter(dims)).coords)
        return cls(Weight.zero(rank), {mu: exact.identity(d) for mu, d in dims.items()})

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        blocks = {}
        for mu, block in other.blocks.items():
            outer = self.blocks.get(mu + other.shift)
            if outer is not None:
                blocks[mu] = exact.matmul(exact.to_qq(outer), exact.to_qq(block))
        return GradedOperator(self.shift + other.shift, blocks)

    def _combine(self, other: "GradedOperator", sign: int) -> "GradedOperator":
        if self.shift != other.shift:
            raise ConsistencyError(f"Cannot add operators of degrees {self.shift} and {other.shift}")
        blocks = {mu: exact.to_qq(b) for mu, b in self.blocks.items()}
        for mu, block in other.blocks.items():
            block = exact.to_qq(block) if sign > 0 else -exact.to_qq(block)
            blocks[mu] = blocks[mu] + block if mu in blocks else block
        return GradedOperator(self.shift, blocks)

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        return self._combine(other, 1)

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        return self._combine(other, -1)

    def scale(self, c: Union[int, Fraction]) -> "GradedOperator":
        c = Fraction(c)
        factor = QQ(c.numerator, c.denominator)
        return GradedOperator(self.shift, {mu: exact.to_qq(b).scalarmul(factor) for mu, b in self.blocks.items()})

    def apply(self, vector: Mapping[Weight, DomainMatrix]) -> Dict[Weight, DomainMatrix]:
        out: Dict[Weight, DomainMatrix] = {}
        for mu, column in vector.items():
            block = self.blocks.get(mu)
            if block is None:
                continue
            image = exact.matmul(exact.to_qq(block), exact.to_qq(column))
            target = mu + self.shift
            out[target] = out[target] + image if target in out else image
        return out

    def is_zero(self) -> bool:
        return all(exact.is_zero(b) for b in self.blocks.values())

    def is_integral(self) -> bool:
        return all(exact.is_integral(b) for b in self.blocks.values())

    def power(self, m: int, dims: Mapping[Weight, int]) -> "GradedOperator":
        result = GradedOperator.identity(dims)
        for _ in range(m):
            result = self @ result
        return result

    def divided_power(self, m: int, dims: Mapping[Weight, int], lattice: bool = False) -> "GradedOperator":
        "X^m / m! on the graded module with weight dimensions dims"
        result = GradedOperator.identity(dims)
        for k in range(1, m + 1):
            result = (self @ result).scale(Fraction(1, k))
            if lattice and not result.is_integral():
                raise ConsistencyError(f"Divided power X^({k}) of degree {self.shift} is not integral")
        return result


# Divided powers and sl2 commutation
################################################

def sl2_commute_apply(m: int, n: int, pairing_value: int) -> int:
    """Scalar c with X_a^(m) X_-a^(n) v = c X_-a^(n-m) v, v a highest weight vector.

    From X_a^(m) X_-a^(n) = sum_j X_-a^(n-j) C(H_a - m - n + 2j, j) X_a^(m-j),
    only j = m survives on v, giving C(<lam, a^vee> - n + m, m); zero when
    m > n. For m = n this is C(<lam, a^vee>, n).
    """
    if m < 0 or n < 0:
        raise InputError(f"Divided power exponents must be >= 0, got ({m}, {n})")
    if m > n:
        return 0
    return general_binomial(pairing_value - n + m, m)


def commutation_terms(m: int, n: int, h_value: int) -> List[Tuple[int, int, int]]:
    """
    Termes (n - j, coefficient, m - j) de la formule de commutation
    e^(m) f^(n) = sum_j f^(n-j) C(H - m - n + 2j, j) e^(m-j), appliquée à un
    vecteur v de poids h_value = <wt v, a^vee>. H agit sur e^(m-j) v, de
    valeur h_value + 2(m - j), d'où le coefficient C(h_value + m - n, j).
    """
    return [(n - j, general_binomial(h_value + m - n, j), m - j)
            for j in range(min(m, n) + 1)]


def divided_power_matrix(M: DomainMatrix, m: int, lattice: bool = False) -> DomainMatrix:
    """M^m / m! over the rationals.

    Args:
        M (DomainMatrix): Nilpotent square matrix.
        m (int): Exponent, m >= 0.
        lattice (bool): M is written in an admissible lattice basis, the
            result must then be integral.

    Raises:
        ConsistencyError: if lattice is set and the result is not integral.
    """
    if m < 0:
        raise InputError(f"Divided power exponent must be >= 0, got {m}")
    n = M.shape[0]
    if M.shape != (n, n):
        raise InputError(f"Divided powers need a square matrix, got shape {M.shape}")
    M = exact.to_qq(M)
    result = exact.identity(n)
    for k in range(1, m + 1):
        result = exact.matmul(M, result).scalarmul(QQ(1, k))
    if lattice and not exact.is_integral(result):
        raise ConsistencyError(f"Divided power M^({m}) is not integral on the lattice basis")
    return result


def root_vectors(module, sc: Optional[StructureConstants] = None) -> Dict[Root, GradedOperator]:
    """
    X_{-alpha} pour toutes les racines positives, par crochets successifs le
    long des décompositions alpha = beta + alpha_i :
    X_{-alpha} = [X_{-beta}, X_{-alpha_i}] / N_{-beta,-alpha_i}.
    """
    R = module.R
    sc = sc or structure_constants(R)
    ops: Dict[Root, GradedOperator] = {}
    for alpha in R.positive_roots:
        if R.height(alpha) == 1:
            ops[alpha] = module.lowering(alpha.index(1), 1)
            continue
        beta, i = sc.decompositions[alpha]
        simple = R.simple_root(i)
        n = sc.N(_neg(beta), _neg(simple))
        if n == 0:
            raise ConsistencyError(f"No bracket for {alpha} = {beta} + alpha_{i + 1}")
        x_beta, x_i = ops[beta], ops[simple]
        ops[alpha] = (x_beta @ x_i - x_i @ x_beta).scale(Fraction(1, n))
    return ops


def root_vector_matrix(alpha: Root, module, sc: Optional[StructureConstants] = None) -> GradedOperator:
    """Weight graded matrix of X_{-alpha} on a module providing simple lowering blocks.

    Raises:
        InputError: if alpha is not a positive root.
    """
    alpha = tuple(alpha)
    module.R.index(alpha)
    return root_vectors(module, sc)[alpha]


def bracket_defects(module, sc: Optional[StructureConstants] = None) -> List[Root]:
    """
    Vérifie [X_{-a}, X_{-b}] = N_{-a,-b} X_{-a-b} pour toutes les paires de
    racines positives ; renvoie les sommes a + b en défaut.
    """
    R = module.R
    sc = sc or structure_constants(R)
    ops = root_vectors(module, sc)
    defects = []
    for a in R.positive_roots:
        for b in R.positive_roots:
            s = _add(a, b)
            if not R.is_positive_root(s):
                continue
            lhs = ops[a] @ ops[b] - ops[b] @ ops[a]
            rhs = ops[s].scale(sc.N(_neg(a), _neg(b)))
            if not (lhs - rhs).is_zero():
                defects.append(s)
    return defects
