"""Weyl modules over Z with their contravariant form, and their simple heads mod p.

The module V(lam) is built weight by weight, by depth below lam. At a
weight mu the candidates are the images f_i^(m) b of the basis vectors b of
the spaces V_{mu + m alpha_i}. Their Gram matrix comes from the contravariant
identity <f_i^(m) x, y> = <x, e_i^(m) y>, the raising operators being
evaluated through the divided power commutation formula on spaces already
built. The lattice spanned by the candidates is then reduced to a basis by
Hermite normal form.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from . import exact
from .chevalley import GradedOperator, LoweringWord, commutation_terms
from .errors import CapExceededError, ConsistencyError
from .rootsys import (
    RootSystem,
    Weight,
    characteristic_warning,
    freudenthal_multiplicities,
    nu_p,
    weyl_dimension,
)
from .settings import MODULE_DIM_CAP
from .utils import check_prime, format_coordinates, get_logger

logger = get_logger(__name__)

# (source weight, simple index from 0, divided power exponent)
BlockKey = Tuple[Weight, int, int]


# Domain types
################################################

@dataclass(frozen=True, eq=False)
class WeightSpace:
    weight: Weight
    dim: int
    gram: DomainMatrix
    # basis vectors as columns, in coordinates of the pivot candidates
    basis: DomainMatrix
    pivots: Tuple[Tuple[int, int, int], ...]
    witness: LoweringWord


@dataclass(frozen=True, eq=False)
class AdmissibleModule:
    """
    Forme entière admissible minimale de V(lam) : espaces de poids, matrices
    de Gram de la forme contravariante et blocs entiers des e_i^(m), f_i^(m).
    """
    R: RootSystem
    lam: Weight
    spaces: Dict[Weight, WeightSpace]
    raising_blocks: Dict[BlockKey, DomainMatrix]
    lowering_blocks: Dict[BlockKey, DomainMatrix]

    @property
    def dims(self) -> Dict[Weight, int]:
        return {mu: space.dim for mu, space in self.spaces.items()}

    @property
    def dim(self) -> int:
        return sum(space.dim for space in self.spaces.values())

    @property
    def weights(self) -> List[Weight]:
        return list(self.spaces)

    def gram(self, mu: Weight) -> DomainMatrix:
        return self.spaces[mu].gram

    def lowering(self, i: int, m: int = 1) -> GradedOperator:
        "f_i^(m) as a graded operator"
        shift = -(self.R.root_weight(self.R.simple_root(i)) * m)
        return GradedOperator(shift, {mu: exact.to_qq(b) for (mu, j, k), b in self.lowering_blocks.items()
                                      if j == i and k == m})

    def raising(self, i: int, m: int = 1) -> GradedOperator:
        "e_i^(m) as a graded operator"
        shift = self.R.root_weight(self.R.simple_root(i)) * m
        return GradedOperator(shift, {mu: exact.to_qq(b) for (mu, j, k), b in self.raising_blocks.items()
                                      if j == i and k == m})

    def highest_vector(self) -> Dict[Weight, DomainMatrix]:
        return {self.lam: exact.qq_matrix([[1]])}

    def summary(self) -> dict:
        return {
            "root_system": self.R.name,
            "weight": format_coordinates(self.lam.coords),
            "dim": self.dim,
            "weights": [{"weight": format_coordinates(mu.coords), "multiplicity": s.dim,
                         "gram": exact.to_json_rows(s.gram)}
                        for mu, s in self.spaces.items()],
        }


@dataclass(frozen=True, eq=False)
class ModularSimple:
    module: AdmissibleModule
    p: int
    dims: Dict[Weight, int]
    projections: Dict[Weight, DomainMatrix]
    sections: Dict[Weight, Tuple[int, ...]]
    raising_blocks: Dict[BlockKey, DomainMatrix] = field(repr=False)
    lowering_blocks: Dict[BlockKey, DomainMatrix] = field(repr=False)

    @property
    def R(self) -> RootSystem:
        return self.module.R

    @property
    def lam(self) -> Weight:
        return self.module.lam

    @property
    def dim(self) -> int:
        return sum(self.dims.values())

    @property
    def weights(self) -> List[Weight]:
        return list(self.dims)

    def project(self, mu: Weight, column: DomainMatrix) -> DomainMatrix:
        "Image in L(lam)_mu of an integral column of V(lam)_mu"
        if mu not in self.dims:
            return exact.gf_matrix([], self.p, (0, 1))
        return exact.matmul(self.projections[mu], exact.to_gf(column, self.p))

    def is_nonzero(self, mu: Weight, column: DomainMatrix) -> bool:
        return not exact.is_zero(self.project(mu, column))

    def action_rows(self) -> List[dict]:
        "Lowering matrices of L(lam), JSON friendly"
        out = []
        for (mu, i, m), block in self.lowering_blocks.items():
            target = mu - self.R.root_weight(self.R.simple_root(i)) * m
            out.append({"source": format_coordinates(mu.coords), "target": format_coordinates(target.coords),
                        "simple_root": i + 1, "exponent": m, "matrix": exact.rows(block)})
        return out


# Weyl module construction
################################################

def build_weyl_module(R: RootSystem, lam: Weight, size_cap: int = MODULE_DIM_CAP) -> AdmissibleModule:
    """Builds the minimal admissible Z-form of V(lam).

    Args:
        R (RootSystem): Root system.
        lam (Weight): Dominant highest weight.
        size_cap (int): Largest Weyl dimension accepted.

    Raises:
        InputError: lam is not dominant.
        CapExceededError: dim V(lam) > size_cap.
    """
    dim = weyl_dimension(R, lam)
    if dim > size_cap:
        raise CapExceededError(f"dim V({lam}) = {dim} exceeds the size cap {size_cap}")
    return _build_weyl_module(R, lam)


@lru_cache(maxsize=64)
def _build_weyl_module(R: RootSystem, lam: Weight) -> AdmissibleModule:
    mult = freudenthal_multiplicities(R, lam)
    builder = _ModuleBuilder(R, lam, mult)
    for mu in mult:
        builder.add_weight(mu)
    module = AdmissibleModule(R, lam, builder.spaces, builder.raising, builder.lowering)
    logger.info(f"{R.name}: built V({lam}) of dimension {module.dim} over {len(mult)} weights")
    return module


class _ModuleBuilder:

    def __init__(self, R: RootSystem, lam: Weight, mult: Dict[Weight, int]):
        self.R = R
        self.lam = lam
        self.mult = mult
        self.alphas = [R.root_weight(R.simple_root(i)) for i in range(R.rank)]
        self.spaces: Dict[Weight, WeightSpace] = {}
        self.raising: Dict[BlockKey, DomainMatrix] = {}
        self.lowering: Dict[BlockKey, DomainMatrix] = {}

    def _e(self, mu: Weight, j: int, m: int) -> DomainMatrix:
        if m == 0:
            return exact.identity(self.mult[mu])
        return exact.to_qq(self.raising[(mu, j, m)])

    def _f(self, mu: Weight, j: int, m: int) -> DomainMatrix:
        if m == 0:
            return exact.identity(self.mult[mu])
        return exact.to_qq(self.lowering[(mu, j, m)])

    def _raise_block(self, mu: Weight, j: int, m: int, k: int, n: int) -> DomainMatrix:
        """
        Bloc de e_j^(m) f_k^(n) restreint à V_{mu + n alpha_k}, à valeurs
        dans V_{mu + m alpha_j}.
        """
        source = mu + self.alphas[k] * n
        target = mu + self.alphas[j] * m
        block = exact.zeros(self.mult[target], self.mult[source])
        if j != k:
            middle = source + self.alphas[j] * m
            if middle in self.mult:
                block = exact.matmul(self._f(middle, k, n), self._e(source, j, m))
            return block
        for f_exp, coeff, e_exp in commutation_terms(m, n, source.coords[j]):
            middle = source + self.alphas[j] * e_exp
            if coeff == 0 or middle not in self.mult:
                continue
            term = exact.matmul(self._f(middle, j, f_exp), self._e(source, j, e_exp))
            block = block + term.scalarmul(QQ(coeff))
        return block

    def add_weight(self, mu: Weight) -> None:
        R, mult = self.R, self.mult
        if mu == self.lam:
            self.spaces[mu] = WeightSpace(mu, 1, exact.zz_matrix([[1]]), exact.identity(1), (),
                                          LoweringWord(()))
            return

        groups = []
        for i in range(R.rank):
            m = 1
            while mu + self.alphas[i] * m in mult:
                groups.append((i, m, mu + self.alphas[i] * m))
                m += 1
        labels = [(i, m, s) for i, m, nu in groups for s in range(mult[nu])]
        ncand = len(labels)

        raise_blocks = {}
        for j, m, nu in groups:
            raise_blocks[(j, m)] = exact.hstack(
                [self._raise_block(mu, j, m, k, n) for k, n, _ in groups], mult[nu])

        gram_full = exact.vstack(
            [exact.matmul(exact.to_qq(self.spaces[nu].gram), raise_blocks[(j, m)]) for j, m, nu in groups],
            ncand)
        if not exact.is_symmetric(gram_full):
            raise ConsistencyError(f"Candidate Gram matrix at {mu} in V({self.lam}) is not symmetric")

        reduced, pivots = exact.rref_qq(gram_full)
        if len(pivots) != mult[mu]:
            raise ConsistencyError(
                f"Rank {len(pivots)} at weight {mu} of V({self.lam}), expected multiplicity {mult[mu]}")

        coords = exact.row_block(reduced, range(len(pivots)))
        basis = exact.lattice_basis(coords)
        in_basis = exact.to_zz(exact.matmul(exact.inverse(basis), coords), f"lowering block at {mu}")

        start = 0
        for i, m, nu in groups:
            width = mult[nu]
            self.lowering[(nu, i, m)] = exact.column_block(in_basis, range(start, start + width))
            start += width

        gram_pivots = exact.row_block(exact.column_block(gram_full, pivots), pivots)
        gram = exact.matmul(exact.matmul(exact.transpose(basis), gram_pivots), basis)
        gram = exact.to_zz(gram, f"Gram matrix at {mu}")

        for j, m, nu in groups:
            block = exact.matmul(exact.column_block(raise_blocks[(j, m)], pivots), basis)
            self.raising[(mu, j, m)] = exact.to_zz(block, f"raising block e_{j + 1}^({m}) at {mu}")

        first_i, first_m, first_nu = groups[0]
        witness = LoweringWord(((first_i, first_m),) + self.spaces[first_nu].witness.letters)
        self.spaces[mu] = WeightSpace(mu, mult[mu], gram, basis, tuple(labels[c] for c in pivots), witness)
        logger.debug(f"V({self.lam}): weight {mu}, {ncand} candidates, multiplicity {mult[mu]}")


# Reduction mod p
################################################

def simple_head_mod_p(V: AdmissibleModule, p: int) -> ModularSimple:
    """Quotient of V mod p by the radical of the contravariant form.

    The projection at mu is given by the nonzero rows of the reduced row
    echelon form of Gram_mu mod p; the pivot columns give a section. Every
    simple e_i^(m), f_i^(m) is checked to descend to the quotient.

    Raises:
        ConsistencyError: an action does not preserve the radical, the
            highest weight space is not a line, or L(lam) is not generated by
            its highest weight vector.
    """
    p = check_prime(p)
    warning = characteristic_warning(V.R, p)
    if warning:
        logger.warning(warning)

    dims, projections, sections = {}, {}, {}
    for mu, space in V.spaces.items():
        reduced, pivots = exact.rref_gf(space.gram, p)
        if pivots:
            dims[mu] = len(pivots)
            projections[mu] = exact.row_block(reduced, range(len(pivots)))
            sections[mu] = pivots
    if dims.get(V.lam) != 1:
        raise ConsistencyError(f"Highest weight space of L({V.lam}) has dimension {dims.get(V.lam, 0)}")

    def descend(blocks: Dict[BlockKey, DomainMatrix], sign: int) -> Dict[BlockKey, DomainMatrix]:
        out = {}
        for (mu, i, m), block in blocks.items():
            target = mu + V.R.root_weight(V.R.simple_root(i)) * (sign * m)
            if mu not in dims or target not in dims:
                if target in dims and not exact.is_zero(exact.matmul(projections[target], exact.to_gf(block, p))):
                    # mu is entirely radical, its image must be too
                    raise ConsistencyError(f"Action ({i + 1}, {m}) does not preserve the radical at {mu}")
                continue
            block_p = exact.to_gf(block, p)
            reduced = exact.matmul(projections[target], exact.column_block(block_p, sections[mu]))
            lhs = exact.matmul(projections[target], block_p)
            rhs = exact.matmul(reduced, projections[mu])
            if exact.rows(lhs) != exact.rows(rhs):
                raise ConsistencyError(f"Action ({i + 1}, {m}) does not preserve the radical at {mu}")
            out[(mu, i, m)] = reduced
        return out

    lowering = descend(V.lowering_blocks, -1)
    raising = descend(V.raising_blocks, 1)
    L = ModularSimple(V, p, dims, projections, sections, raising, lowering)
    _check_reachability(L)
    logger.info(f"{V.R.name}: dim L({V.lam}) = {L.dim} in characteristic {p}")
    return L


def _check_reachability(L: ModularSimple) -> None:
    "Every weight space of L is spanned by simple divided lowerings of higher ones"
    images: Dict[Weight, List[DomainMatrix]] = {}
    for (nu, i, m), block in L.lowering_blocks.items():
        target = nu - L.R.root_weight(L.R.simple_root(i)) * m
        images.setdefault(target, []).append(block)
    for mu, d in L.dims.items():
        if mu == L.lam:
            continue
        spanned = exact.hstack(images.get(mu, []), d)
        rank = exact.rank_mod_p(spanned, L.p) if spanned.shape[1] else 0
        if rank != d:
            raise ConsistencyError(f"Weight space {mu} of L({L.lam}) is not reached from the highest weight")


def gram_elementary_divisor_valuations(V: AdmissibleModule, p: int) -> Dict[Weight, int]:
    "Per weight, the sum of nu_p over the elementary divisors of the Gram matrix"
    p = check_prime(p)
    out = {}
    for mu, space in V.spaces.items():
        divisors = exact.elementary_divisors(space.gram)
        if any(d == 0 for d in divisors):
            raise ConsistencyError(f"Singular Gram matrix at {mu} in V({V.lam})")
        out[mu] = sum(nu_p(abs(d), p) for d in divisors)
    return out


def simple_module(R: RootSystem, lam: Weight, p: int, size_cap: int = MODULE_DIM_CAP) -> ModularSimple:
    return _simple_module(R, lam, check_prime(p), size_cap)


@lru_cache(maxsize=128)
def _simple_module(R: RootSystem, lam: Weight, p: int, size_cap: int) -> ModularSimple:
    return simple_head_mod_p(build_weyl_module(R, lam, size_cap), p)


def decompose_weyl(R: RootSystem, lam: Weight, p: int,
                   size_cap: int = MODULE_DIM_CAP) -> Dict[Weight, int]:
    """Composition multiplicities [V(lam) : L(mu)] by character subtraction.

    Returns:
        dict: Dominant weight -> multiplicity, highest first.

    Raises:
        CapExceededError: some V(mu) met on the way exceeds the size cap.
        ConsistencyError: the subtraction leaves a negative remainder.
    """
    p = check_prime(p)
    remaining = freudenthal_multiplicities(R, lam)
    result: Dict[Weight, int] = {}
    while True:
        pending = [mu for mu, c in remaining.items() if c and mu.is_dominant()]
        if not pending:
            break
        mu = pending[0]
        count = remaining[mu]
        if count < 0:
            raise ConsistencyError(f"Negative remainder {count} at {mu} while decomposing V({lam})")
        L = simple_module(R, mu, p, size_cap)
        for nu, d in L.dims.items():
            remaining[nu] -= count * d
        result[mu] = count
    leftovers = {mu: c for mu, c in remaining.items() if c}
    if leftovers:
        raise ConsistencyError(f"Non dominant remainder {leftovers} while decomposing V({lam})")
    return result


def lowering_images(L: ModularSimple, word: LoweringWord) -> DomainMatrix:
    "Image of the highest weight vector of L under a lowering word"
    vector = {L.lam: exact.gf_matrix([[1]], L.p)}
    for i, m in reversed(word.letters):
        out = {}
        for mu, column in vector.items():
            block = L.lowering_blocks.get((mu, i, m))
            if block is None:
                continue
            target = mu - L.R.root_weight(L.R.simple_root(i)) * m
            out[target] = exact.matmul(block, column)
        vector = out
    return next(iter(vector.values()), None)


def weight_table(V: AdmissibleModule, L: Optional[ModularSimple] = None) -> List[dict]:
    "One row per weight of V: multiplicity in V, in L and Gram valuation"
    rows = []
    valuations = gram_elementary_divisor_valuations(V, L.p) if L is not None else {}
    for mu, space in V.spaces.items():
        row = {"weight": format_coordinates(mu.coords), "weyl_multiplicity": space.dim}
        if L is not None:
            row["simple_multiplicity"] = L.dims.get(mu, 0)
            row["gram_valuation"] = valuations[mu]
        rows.append(row)
    return rows
