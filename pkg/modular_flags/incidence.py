"""Line bundle cohomology on the unseparated incidence variety X = Z(s) in P^n x P^n.

s = x_0^q y_0 + ... + x_n^q y_n with q = p^r, so X is a divisor of bidegree
(q, 1) and L(a, b) = O(a, b)|_X fits in

    0 -> O(a - q, b - 1) --s--> O(a, b) -> L(a, b) -> 0.

The cohomology of the two outer terms comes from Kunneth and Bott's formula
on P^n; the connecting ranks are known in degree 0 (injective) and 2n
(surjective), and in degree n they are computed as ranks of the
multiplication by s on Cech representatives over the prime field.
"""
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb, factorial
from typing import Dict, List, Optional, Tuple

import sympy
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from .errors import CapExceededError, IndeterminateError, InputError
from .settings import ORACLE_CAP
from .utils import check_prime, get_logger

logger = get_logger(__name__)

CLOSED_FORM = "closed-form"
ORACLE = "oracle"
INDETERMINATE = "indeterminate"


# Domain types
################################################

@dataclass(frozen=True)
class IncidenceSpec:
    n: int
    p: int
    r: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 2:
            raise InputError(f"The incidence variety needs n >= 2, got {self.n!r}")
        check_prime(self.p)
        if isinstance(self.r, bool) or not isinstance(self.r, int) or self.r < 1:
            raise InputError(f"The Frobenius twist needs r >= 1, got {self.r!r}")

    @property
    def q(self) -> int:
        return self.p ** self.r

    @property
    def dim(self) -> int:
        return 2 * self.n - 1

    def as_dict(self) -> dict:
        return {"n": self.n, "p": self.p, "r": self.r, "q": self.q}


@dataclass(frozen=True)
class BiDegree:
    a: int
    b: int

    def is_effective(self) -> bool:
        return self.a >= 0 and self.b >= 0

    def swapped(self) -> "BiDegree":
        return BiDegree(self.b, self.a)

    def as_list(self) -> List[int]:
        return [self.a, self.b]


@dataclass
class CohomologyTable:
    spec: IncidenceSpec
    degree: BiDegree
    dims: Dict[int, int]
    status: str = CLOSED_FORM
    # degree -> (lower bound, upper bound), only for indeterminate entries
    bounds: Dict[int, Tuple[int, int]] = field(default_factory=dict)

    def h(self, i: int) -> int:
        if i in self.bounds:
            raise IndeterminateError(f"h^{i} of L{self.degree.as_list()} is only bounded: {self.bounds[i]}")
        return self.dims.get(i, 0)

    def euler_characteristic(self) -> int:
        if self.bounds:
            raise IndeterminateError("Euler characteristic of an indeterminate table")
        return sum((-1) ** i * h for i, h in self.dims.items())

    def higher_vanishes(self) -> bool:
        return all(self.h(i) == 0 for i in range(1, self.spec.dim + 1))

    def as_dict(self) -> dict:
        out = {
            "table": {f"h{i}": self.dims[i] for i in sorted(self.dims)},
            "status": self.status,
        }
        if self.bounds:
            out["bounds"] = {f"h{i}": list(b) for i, b in sorted(self.bounds.items())}
        return out


@dataclass(frozen=True)
class Section:
    expression: sympy.Expr
    bidegree: Tuple[int, int]
    x: Tuple[sympy.Symbol, ...]
    y: Tuple[sympy.Symbol, ...]

    def __str__(self) -> str:
        return str(self.expression)


# Projective space
################################################

def h0_projective(n: int, d: int) -> int:
    "h^0(P^n, O(d))"
    return comb(n + d, n) if d >= 0 else 0


def projective_cohomology(n: int, d: int) -> Dict[int, int]:
    "Bott's formula, h^0 and h^n of O(d) on P^n"
    return {0: h0_projective(n, d), n: comb(-d - 1, n) if d <= -n - 1 else 0}


def chi_projective(n: int, d: int) -> int:
    "chi(P^n, O(d)) = C(n + d, n) as a polynomial in d"
    value = 1
    for i in range(1, n + 1):
        value *= d + i
    return value // factorial(n)


def kunneth(n: int, a: int, b: int) -> Dict[int, int]:
    "h^k(P^n x P^n, O(a, b)), for k in 0, n, 2n"
    left, right = projective_cohomology(n, a), projective_cohomology(n, b)
    out = {0: 0, n: 0, 2 * n: 0}
    for i, hi in left.items():
        for j, hj in right.items():
            out[i + j] += hi * hj
    return out


def _monomials(n: int, d: int) -> List[Tuple[int, ...]]:
    "Exponent vectors of the monomials of degree d in n + 1 variables"
    if d < 0:
        return []
    out = []
    for combo in combinations_with_replacement(range(n + 1), d):
        e = [0] * (n + 1)
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def _inverse_monomials(n: int, d: int) -> List[Tuple[int, ...]]:
    "Cech basis of H^n(P^n, O(d)): exponents all <= -1 summing to d"
    return [tuple(-1 - f for f in e) for e in _monomials(n, -d - n - 1)]


# Incidence variety
################################################

def defining_section(spec: IncidenceSpec) -> Section:
    x = sympy.symbols(f"x0:{spec.n + 1}")
    y = sympy.symbols(f"y0:{spec.n + 1}")
    expr = sympy.Add(*[x[i] ** spec.q * y[i] for i in range(spec.n + 1)])
    return Section(expr, (spec.q, 1), x, y)


def swapped_section(spec: IncidenceSpec) -> Section:
    "The same divisor with the Frobenius twist on the second factor"
    x = sympy.symbols(f"x0:{spec.n + 1}")
    y = sympy.symbols(f"y0:{spec.n + 1}")
    expr = sympy.Add(*[x[i] * y[i] ** spec.q for i in range(spec.n + 1)])
    return Section(expr, (1, spec.q), x, y)


def canonical_bidegree(spec: IncidenceSpec) -> BiDegree:
    "omega_X = O(q - n - 1, -n) by adjunction"
    return BiDegree(spec.q - spec.n - 1, -spec.n)


def is_ample(d: BiDegree) -> bool:
    return d.a > 0 and d.b > 0


def euler_characteristic(spec: IncidenceSpec, d: BiDegree) -> int:
    n, q = spec.n, spec.q
    return (chi_projective(n, d.a) * chi_projective(n, d.b)
            - chi_projective(n, d.a - q) * chi_projective(n, d.b - 1))


def cohomology_effective(spec: IncidenceSpec, d: BiDegree) -> CohomologyTable:
    """Closed formulas for a, b >= 0.

    h^0 = h0(a) h0(b) - h0(a - q) h0(b - 1) and, by Serre duality,
    h^{n-1} = h0(q - a - n - 1) h0(b - 1); every other h^i vanishes.

    Raises:
        InputError: a or b is negative.
    """
    if not d.is_effective():
        raise InputError(f"L{d.as_list()} is not effective, use general_cohomology")
    n, q = spec.n, spec.q
    dims = {i: 0 for i in range(spec.dim + 1)}
    dims[0] = h0_projective(n, d.a) * h0_projective(n, d.b) - h0_projective(n, d.a - q) * h0_projective(n, d.b - 1)
    dims[n - 1] += h0_projective(n, q - d.a - n - 1) * h0_projective(n, d.b - 1)
    return CohomologyTable(spec, d, dims, CLOSED_FORM)


def _middle_rank(spec: IncidenceSpec, d: BiDegree, size_cap: int) -> Optional[int]:
    """
    Rang de la multiplication par s en degré n, somme des deux blocs de
    Künneth H^0 x H^n et H^n x H^0. None si un bloc dépasse la taille limite.
    """
    n, q, p = spec.n, spec.q, spec.p
    blocks = [
        # H^0(a - q) x H^n(b - 1) -> H^0(a) x H^n(b)
        (_monomials(n, d.a - q), _inverse_monomials(n, d.b - 1),
         _monomials(n, d.a), _inverse_monomials(n, d.b)),
        # H^n(a - q) x H^0(b - 1) -> H^n(a) x H^0(b)
        (_inverse_monomials(n, d.a - q), _monomials(n, d.b - 1),
         _inverse_monomials(n, d.a), _monomials(n, d.b)),
    ]
    total = 0
    for src_x, src_y, tgt_x, tgt_y in blocks:
        rows_n, cols_n = len(tgt_x) * len(tgt_y), len(src_x) * len(src_y)
        if not rows_n or not cols_n:
            continue
        if max(rows_n, cols_n) > size_cap:
            return None
        total += _multiplication_rank(n, q, p, src_x, src_y, tgt_x, tgt_y)
    return total


def _multiplication_rank(n, q, p, src_x, src_y, tgt_x, tgt_y) -> int:
    "Rank over GF(p) of u x v -> sum_i x_i^q u x y_i v, zero outside the target basis"
    tx = {e: k for k, e in enumerate(tgt_x)}
    ty = {e: k for k, e in enumerate(tgt_y)}
    field_p = GF(p)
    entries: Dict[int, Dict[int, object]] = {}
    for cu, u in enumerate(src_x):
        for cv, v in enumerate(src_y):
            col = cu * len(src_y) + cv
            for i in range(n + 1):
                u2 = tuple(c + q * (k == i) for k, c in enumerate(u))
                v2 = tuple(c + (k == i) for k, c in enumerate(v))
                if u2 in tx and v2 in ty:
                    row = tx[u2] * len(tgt_y) + ty[v2]
                    entries.setdefault(row, {})[col] = field_p(1)
    if not entries:
        return 0
    matrix = DomainMatrix(entries, (len(tgt_x) * len(tgt_y), len(src_x) * len(src_y)), field_p)
    return int(matrix.rank())


def general_cohomology(spec: IncidenceSpec, d: BiDegree, size_cap: int = ORACLE_CAP) -> CohomologyTable:
    """All h^i(X, L(a, b)) from the long exact sequence of the structure sequence.

    h^k(L) = (h^k(B) - rk_k) + (h^{k+1}(A) - rk_{k+1}) with A = O(a - q, b - 1),
    B = O(a, b) and rk_k the rank of the multiplication by s on H^k.
    """
    n, q = spec.n, spec.q
    A = kunneth(n, d.a - q, d.b - 1)
    B = kunneth(n, d.a, d.b)
    top = 2 * n

    status = CLOSED_FORM
    ranks: Dict[int, Optional[int]] = {k: 0 for k in range(top + 2)}
    # s is a nonzerodivisor; H^{2n}(L) = 0 as dim X = 2n - 1
    ranks[0] = A[0]
    ranks[top] = B[top]
    if A[n] and B[n]:
        ranks[n] = _middle_rank(spec, d, size_cap)
        status = ORACLE if ranks[n] is not None else INDETERMINATE

    def rank_range(k: int) -> Tuple[int, int]:
        if ranks.get(k) is None:
            return 0, min(A.get(k, 0), B.get(k, 0))
        return ranks[k], ranks[k]

    dims, bounds = {}, {}
    for k in range(spec.dim + 1):
        (lo_k, hi_k), (lo_next, hi_next) = rank_range(k), rank_range(k + 1)
        low = B.get(k, 0) - hi_k + A.get(k + 1, 0) - hi_next
        high = B.get(k, 0) - lo_k + A.get(k + 1, 0) - lo_next
        if low != high:
            bounds[k] = (low, high)
        elif low < 0:
            raise IndeterminateError(f"Negative h^{k} for L{d.as_list()}")
        else:
            dims[k] = low
    if bounds:
        logger.warning(f"{spec}: L{d.as_list()} only bounded in degrees {sorted(bounds)}")
    return CohomologyTable(spec, d, dims, status, bounds)


def kodaira_check(spec: IncidenceSpec, d: BiDegree, size_cap: int = ORACLE_CAP) -> bool:
    """Vanishing of h^i(L (x) omega_X), i > 0, for ample L.

    Raises:
        InputError: d is not ample.
        IndeterminateError: the twisted table could not be decided.
    """
    if not is_ample(d):
        raise InputError(f"L{d.as_list()} is not ample")
    canonical = canonical_bidegree(spec)
    table = general_cohomology(spec, BiDegree(d.a + canonical.a, d.b + canonical.b), size_cap)
    if table.bounds:
        raise IndeterminateError(f"Cannot decide the cohomology of L{d.as_list()} (x) omega_X: {table.bounds}")
    return table.higher_vanishes()


def brute_force_h0(spec: IncidenceSpec, d: BiDegree, size_cap: int = ORACLE_CAP) -> int:
    """Dimension of the bidegree (a, b) piece of k[x, y]/(s) over GF(p).

    Raises:
        CapExceededError: h0(a) h0(b) exceeds size_cap.
    """
    if not d.is_effective():
        raise InputError(f"brute_force_h0 needs a, b >= 0, got {d.as_list()}")
    n, q = spec.n, spec.q
    size = h0_projective(n, d.a) * h0_projective(n, d.b)
    if size > size_cap:
        raise CapExceededError(f"Graded piece of dimension {size} exceeds the oracle cap {size_cap}")
    rank = _multiplication_rank(n, q, spec.p,
                                _monomials(n, d.a - q), _monomials(n, d.b - 1),
                                _monomials(n, d.a), _monomials(n, d.b))
    return size - rank


def vanishing_threshold(spec: IncidenceSpec) -> int:
    "Higher cohomology of L(a, b), b >= 0, vanishes for a above this value"
    return spec.q - spec.n - 1
