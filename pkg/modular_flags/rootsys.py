"""Root systems, weights and the classical character formulas.

Conventions (Bourbaki numbering):

- roots are integer vectors in simple-root coordinates, weights integer
  vectors in fundamental-weight coordinates;
- ``cartan[i][j] = <alpha_j, alpha_i^vee>``, so the weight coordinates of
  ``alpha_j`` form the column ``j`` of the Cartan matrix;
- short roots have squared norm 2.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from sympy import Matrix

from .errors import ConsistencyError, InputError
from .settings import CHARACTERISTIC_BOUNDS, FAMILY_RANKS
from .utils import (
    INF,
    ExtNat,
    check_prime,
    format_coordinates,
    general_binomial,
    get_logger,
    parse_coordinates,
    parse_root_system_name,
)

logger = get_logger(__name__)

Root = Tuple[int, ...]


# Domain types
################################################

@dataclass(frozen=True)
class RootSystemSpec:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in FAMILY_RANKS:
            raise InputError(f"Unknown root system family {self.family!r}")
        if isinstance(self.rank, bool) or not isinstance(self.rank, int):
            raise InputError(f"Rank must be an integer, got {self.rank!r}")
        low, high = FAMILY_RANKS[self.family]
        if self.rank < low or (high is not None and self.rank > high):
            raise InputError(f"{self.family}{self.rank} is not a valid root system")

    @classmethod
    def parse(cls, name: str) -> "RootSystemSpec":
        family, rank = parse_root_system_name(name)
        return cls(family, rank)

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Weight:
    coords: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @classmethod
    def zero(cls, rank: int) -> "Weight":
        return cls((0,) * rank)

    @classmethod
    def fundamental(cls, i: int, rank: int) -> "Weight":
        "omega_i, with i counted from 1"
        if not 1 <= i <= rank:
            raise InputError(f"No fundamental weight omega_{i} in rank {rank}")
        return cls(tuple(1 if k == i - 1 else 0 for k in range(rank)))

    @classmethod
    def parse(cls, text: str, rank: int) -> "Weight":
        return cls(parse_coordinates(text, rank))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_dominant(self) -> bool:
        return all(c >= 0 for c in self.coords)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords))

    def __mul__(self, k: int) -> "Weight":
        return Weight(tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return format_coordinates(self.coords)


@dataclass(frozen=True, eq=False)
class RootSystem:
    spec: RootSystemSpec
    cartan: np.ndarray
    simple_norms: Tuple[int, ...]
    positive_roots: Tuple[Root, ...]
    root_norms: Tuple[int, ...]
    rho: Weight
    _cartan_inverse: Tuple[Tuple[Fraction, ...], ...] = field(repr=False)
    _index: Dict[Root, int] = field(repr=False)
    _root_weights: Tuple[Weight, ...] = field(repr=False)

    @property
    def rank(self) -> int:
        return self.spec.rank

    @property
    def name(self) -> str:
        return self.spec.name

    def simple_root(self, i: int) -> Root:
        "alpha_i with i counted from 0"
        return tuple(1 if k == i else 0 for k in range(self.rank))

    def index(self, root: Root) -> int:
        try:
            return self._index[tuple(root)]
        except KeyError:
            raise InputError(f"{root} is not a positive root of {self.name}")

    def is_positive_root(self, vec: Root) -> bool:
        return tuple(vec) in self._index

    def is_root(self, vec: Root) -> bool:
        vec = tuple(vec)
        return vec in self._index or tuple(-c for c in vec) in self._index

    def norm(self, vec: Root) -> int:
        "Squared length of a vector given in simple-root coordinates"
        s = self.symmetric_form()
        return int(sum(vec[i] * vec[j] * s[i][j]
                       for i in range(self.rank) for j in range(self.rank)))

    def symmetric_form(self) -> np.ndarray:
        "(alpha_i, alpha_j) as an integer matrix"
        return np.array([[self.cartan[i][j] * self.simple_norms[i] // 2
                          for j in range(self.rank)] for i in range(self.rank)],
                        dtype=np.int64)

    def root_weight(self, root: Union[Root, int]) -> Weight:
        "Weight coordinates of a root (positive index or coefficient vector)"
        if isinstance(root, int):
            return self._root_weights[root]
        vec = np.array(root, dtype=np.int64)
        return Weight(tuple(int(x) for x in self.cartan @ vec))

    def simple_coordinates(self, weight: Weight) -> Tuple[Fraction, ...]:
        "Coordinates of a weight in the basis of simple roots (rational)"
        return tuple(sum((row[j] * weight.coords[j] for j in range(self.rank)), Fraction(0))
                     for row in self._cartan_inverse)

    def inner(self, lam: Weight, mu: Weight) -> Fraction:
        "Invariant form on weights, (omega_i, alpha_j) = delta_ij |alpha_j|^2 / 2"
        m = self.simple_coordinates(mu)
        return sum((Fraction(lam.coords[i] * self.simple_norms[i], 2) * m[i]
                    for i in range(self.rank)), Fraction(0))

    def height(self, root: Root) -> int:
        return int(sum(root))

    def depth(self, lam: Weight, mu: Weight) -> int:
        "Height of lam - mu, which must lie in the root lattice"
        total = sum(self.simple_coordinates(lam - mu), Fraction(0))
        if total.denominator != 1:
            raise InputError(f"{lam} - {mu} is not in the root lattice")
        return int(total)

    def string_bottom(self, a: Root, b: Root) -> int:
        "Largest k >= 0 with b - k a a root (b itself a root)"
        k = 0
        while self.is_root(tuple(bb - (k + 1) * aa for aa, bb in zip(a, b))):
            k += 1
        return k


# Cartan data
################################################

def _symmetric_form(family: str, rank: int) -> List[List[int]]:
    """
    Matrice de Gram (alpha_i, alpha_j) des racines simples, les racines
    courtes étant de norme 2.
    """
    s = [[0] * rank for _ in range(rank)]

    def link(i, j, value):
        s[i][j] = s[j][i] = value

    if family == "A":
        norms = [2] * rank
        edges = [(i, i + 1, -1) for i in range(rank - 1)]
    elif family == "B":
        norms = [4] * (rank - 1) + [2]
        edges = [(i, i + 1, -2) for i in range(rank - 1)]
    elif family == "C":
        norms = [2] * (rank - 1) + [4]
        edges = [(i, i + 1, -1) for i in range(rank - 2)] + [(rank - 2, rank - 1, -2)]
    elif family == "D":
        norms = [2] * rank
        edges = [(i, i + 1, -1) for i in range(rank - 2)] + [(rank - 3, rank - 1, -1)]
    elif family == "E":
        norms = [2] * rank
        edges = [(0, 2, -1), (1, 3, -1)] + [(i, i + 1, -1) for i in range(2, rank - 1)]
    elif family == "F":
        norms = [4, 4, 2, 2]
        edges = [(0, 1, -2), (1, 2, -2), (2, 3, -1)]
    elif family == "G":
        norms = [2, 6]
        edges = [(0, 1, -3)]
    else:
        raise InputError(f"Unknown root system family {family!r}")

    for i, n in enumerate(norms):
        s[i][i] = n
    for i, j, value in edges:
        link(i, j, value)
    return s


def _positive_roots(cartan: np.ndarray) -> List[Root]:
    """
    Positive roots by the root-string algorithm: beta + alpha_i is a root
    iff p - <beta, alpha_i^vee> > 0, p being the length of the alpha_i-string
    below beta.
    """
    rank = cartan.shape[0]
    simple = [tuple(1 if k == i else 0 for k in range(rank)) for i in range(rank)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        new_layer = []
        for beta in layer:
            for i in range(rank):
                p = 0
                while tuple(c - (p + 1) * (k == i) for k, c in enumerate(beta)) in roots:
                    p += 1
                pairing_value = int(sum(cartan[i][j] * beta[j] for j in range(rank)))
                if p - pairing_value > 0:
                    gamma = tuple(c + (k == i) for k, c in enumerate(beta))
                    if gamma not in roots:
                        roots.add(gamma)
                        new_layer.append(gamma)
        layer = new_layer
    return sorted(roots, key=lambda r: (sum(r), r))


@lru_cache(maxsize=None)
def build_root_system(spec: RootSystemSpec) -> RootSystem:
    """Builds the root datum of a simply connected group of the given type.

    Positive roots are ordered by height, ties broken lexicographically on
    the coefficient vectors.
    """
    if isinstance(spec, str):
        spec = RootSystemSpec.parse(spec)
    rank = spec.rank
    s = _symmetric_form(spec.family, rank)
    cartan = np.array([[2 * s[i][j] // s[i][i] for j in range(rank)] for i in range(rank)],
                      dtype=np.int64)

    if not all(cartan[i][i] == 2 for i in range(rank)):
        raise ConsistencyError(f"Cartan matrix of {spec} has a bad diagonal")
    if any(cartan[i][j] > 0 for i in range(rank) for j in range(rank) if i != j):
        raise ConsistencyError(f"Cartan matrix of {spec} has a positive off-diagonal entry")

    inverse = Matrix(cartan.tolist()).inv()
    cartan_inverse = tuple(
        tuple(Fraction(int(inverse[i, j].p), int(inverse[i, j].q)) for j in range(rank))
        for i in range(rank)
    )

    roots = _positive_roots(cartan)
    simple_norms = tuple(int(s[i][i]) for i in range(rank))
    norms = tuple(int(sum(r[i] * r[j] * s[i][j] for i in range(rank) for j in range(rank)))
                  for r in roots)
    root_weights = tuple(Weight(tuple(int(x) for x in cartan @ np.array(r, dtype=np.int64)))
                         for r in roots)

    logger.debug(f"{spec}: {len(roots)} positive roots")
    return RootSystem(
        spec=spec,
        cartan=cartan,
        simple_norms=simple_norms,
        positive_roots=tuple(roots),
        root_norms=norms,
        rho=Weight((1,) * rank),
        _cartan_inverse=cartan_inverse,
        _index={r: k for k, r in enumerate(roots)},
        _root_weights=root_weights,
    )


def root_system(name: str) -> RootSystem:
    "Shortcut: root_system('C4')"
    return build_root_system(RootSystemSpec.parse(name))


# Pairings and valuations
################################################

def pairing(R: RootSystem, lam: Weight, alpha: Union[int, Root]) -> int:
    """<lam, alpha^vee> for a root given by positive index or coefficient vector.

    Negative roots are accepted: <lam, (-alpha)^vee> = -<lam, alpha^vee>.
    """
    if isinstance(alpha, (int, np.integer)) and not isinstance(alpha, bool):
        if not 0 <= alpha < len(R.positive_roots):
            raise InputError(f"No positive root with index {alpha} in {R.name}")
        root = R.positive_roots[int(alpha)]
    else:
        root = tuple(int(c) for c in alpha)
    if len(root) != R.rank or len(lam.coords) != R.rank:
        raise InputError(f"Rank mismatch in pairing for {R.name}")
    sign = 1
    if not R.is_positive_root(root):
        if not R.is_positive_root(tuple(-c for c in root)):
            raise InputError(f"{root} is not a root of {R.name}")
        sign, root = -1, tuple(-c for c in root)
    numerator = sum(root[j] * lam.coords[j] * R.simple_norms[j] for j in range(R.rank))
    norm = R.root_norms[R.index(root)]
    if numerator % norm:
        raise ConsistencyError(f"Non integral coroot pairing for {root} in {R.name}")
    return sign * (numerator // norm)


def nu_p(m: int, p: int) -> ExtNat:
    "p-adic valuation, nu_p(0) = INF"
    p = check_prime(p)
    if m < 0:
        raise InputError(f"nu_p expects a nonnegative integer, got {m}")
    if m == 0:
        return INF
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def _digit_sum(m: int, p: int) -> int:
    total = 0
    while m:
        m, d = divmod(m, p)
        total += d
    return total


def binom_valuation(m: int, n: int, p: int) -> ExtNat:
    """
    nu_p(C(m, n)) par le comptage des retenues de Kummer.

    Pour m < 0 on utilise C(m, n) = (-1)^n C(n - m - 1, n).
    """
    p = check_prime(p)
    if n < 0:
        raise InputError(f"binom_valuation expects n >= 0, got {n}")
    if m < 0:
        m = n - m - 1
    if n > m:
        return INF
    carries, remainder = divmod(_digit_sum(n, p) + _digit_sum(m - n, p) - _digit_sum(m, p), p - 1)
    if remainder:
        raise ConsistencyError(f"Kummer count failed for C({m}, {n}) at p={p}")
    return carries


def binom_valuation_direct(m: int, n: int, p: int) -> ExtNat:
    "nu_p of the exactly computed binomial coefficient"
    value = general_binomial(m, n)
    return nu_p(abs(value), p)


# Weyl group
################################################

def simple_reflection(R: RootSystem, mu: Weight, i: int) -> Weight:
    "s_i mu = mu - <mu, alpha_i^vee> alpha_i (i counted from 0)"
    return mu - R.root_weight(R.simple_root(i)) * mu.coords[i]


def dominant_conjugate(R: RootSystem, mu: Weight) -> Tuple[Weight, int]:
    "Dominant weight in the W-orbit of mu and the parity of the reflections used"
    parity = 0
    while True:
        negative = [i for i, c in enumerate(mu.coords) if c < 0]
        if not negative:
            return mu, parity
        mu = simple_reflection(R, mu, negative[0])
        parity ^= 1


def reflect_dot(R: RootSystem, lam: Weight, alpha: Union[int, Root], level: int) -> Weight:
    "Affine dot action s_{alpha,c} . lam = lam + (c - <lam + rho, alpha^vee>) alpha"
    if isinstance(alpha, int):
        root = R.positive_roots[alpha]
    else:
        root = tuple(alpha)
    if not R.is_positive_root(root):
        raise InputError(f"{root} is not a positive root of {R.name}")
    shift = level - pairing(R, lam + R.rho, root)
    return lam + R.root_weight(root) * shift


# Characteristic zero characters
################################################

def _require_dominant(R: RootSystem, lam: Weight) -> None:
    if lam.rank != R.rank:
        raise InputError(f"Weight {lam} does not have rank {R.rank}")
    if not lam.is_dominant():
        raise InputError(f"Weight {lam} is not dominant")


def weyl_dimension(R: RootSystem, lam: Weight) -> int:
    "Weyl's dimension formula, computed over the rationals"
    _require_dominant(R, lam)
    dim = Fraction(1)
    for root in R.positive_roots:
        dim *= Fraction(pairing(R, lam + R.rho, root), pairing(R, R.rho, root))
    if dim.denominator != 1:
        raise ConsistencyError(f"Weyl dimension of {lam} in {R.name} is not integral: {dim}")
    return int(dim)


def is_weight_of(R: RootSystem, lam: Weight, mu: Weight) -> bool:
    "True iff mu is a weight of the irreducible module of highest weight lam"
    dominant, _ = dominant_conjugate(R, mu)
    coords = R.simple_coordinates(lam - dominant)
    return all(c.denominator == 1 and c >= 0 for c in coords)


def freudenthal_multiplicities(R: RootSystem, lam: Weight) -> Dict[Weight, int]:
    """Weight multiplicities of the characteristic zero module of highest weight lam.

    Freudenthal's recursion, layer by layer below lam. The returned mapping
    is ordered by depth.
    """
    _require_dominant(R, lam)
    return dict(_freudenthal(R, lam))


@lru_cache(maxsize=256)
def _freudenthal(R: RootSystem, lam: Weight) -> Dict[Weight, int]:
    lam_rho = lam + R.rho
    norm_top = R.inner(lam_rho, lam_rho)
    roots = [(R.root_weight(k), R.root_norms[k]) for k in range(len(R.positive_roots))]
    simple = [R.root_weight(R.simple_root(i)) for i in range(R.rank)]

    mult: Dict[Weight, int] = {lam: 1}
    layer = [lam]
    while layer:
        candidates = []
        seen = set()
        for nu in layer:
            for alpha_i in simple:
                mu = nu - alpha_i
                if mu not in seen and mu not in mult and is_weight_of(R, lam, mu):
                    seen.add(mu)
                    candidates.append(mu)
        for mu in sorted(candidates):
            total = Fraction(0)
            for alpha, _ in roots:
                k = 1
                while (mu + alpha * k) in mult:
                    nu = mu + alpha * k
                    total += mult[nu] * R.inner(nu, alpha)
                    k += 1
            mu_rho = mu + R.rho
            value = 2 * total / (norm_top - R.inner(mu_rho, mu_rho))
            if value.denominator != 1 or value <= 0:
                raise ConsistencyError(f"Freudenthal recursion gave {value} at {mu} in V({lam})")
            mult[mu] = int(value)
        layer = sorted(candidates)
    return mult


def dominant_weights_below(R: RootSystem, lam: Weight) -> List[Weight]:
    "Dominant weights of V(lam), highest first"
    return [mu for mu in freudenthal_multiplicities(R, lam) if mu.is_dominant()]


def root_label(root: Root) -> str:
    "Coefficient string of a root, e.g. (0, 0, 1, 1) -> '0011'"
    return format_coordinates(root)


def parse_root_label(R: RootSystem, text: str) -> Root:
    root = parse_coordinates(text, R.rank)
    R.index(root)
    return root


def root_labels(R: RootSystem) -> List[str]:
    return [root_label(r) for r in R.positive_roots]


def characteristic_warning(R: RootSystem, p: int) -> Optional[str]:
    """
    Message lorsque p est en dessous de la borne de caractéristique de la
    famille (G2 : p > 3 ; B, C, F4 : p > 2), sous laquelle un sous-schéma
    en groupes parabolique n'est plus déterminé par ses exposants simples.
    """
    bound = CHARACTERISTIC_BOUNDS.get(R.spec.family)
    if bound is None or p >= bound:
        return None
    return (f"p={p} is below the characteristic bound p >= {bound} for type {R.spec.family}: "
            f"parabolic subgroup schemes are not determined by their simple exponents")
