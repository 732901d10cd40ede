"""Jantzen sum formula as a virtual Weyl character, checked against Gram valuations."""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import ConsistencyError
from .highestweight import AdmissibleModule, build_weyl_module, gram_elementary_divisor_valuations
from .rootsys import (
    RootSystem,
    Weight,
    _require_dominant,
    dominant_conjugate,
    freudenthal_multiplicities,
    nu_p,
    pairing,
    reflect_dot,
    root_label,
)
from .settings import MODULE_DIM_CAP
from .utils import check_prime, format_coordinates, get_logger

logger = get_logger(__name__)

# sum over positive roots alpha and levels 0 < mp < <lam + rho, alpha^vee>
# of nu_p(mp) chi(s_{alpha,mp} . lam), s_{alpha,mp} . lam = lam - (<lam + rho, alpha^vee> - mp) alpha
CONVENTION = "sum_{alpha>0} sum_{0<mp<<lam+rho,alpha^vee>} nu_p(mp) chi(lam - (<lam+rho,alpha^vee> - mp) alpha)"


@dataclass
class VirtualWeylCharacter:
    R: RootSystem
    terms: Dict[Weight, int] = field(default_factory=dict)

    def add(self, mu: Weight, coefficient: int) -> None:
        "Adds coefficient * chi(mu), mu arbitrary (normalized through the dot action)"
        normalized = euler_normalize(self.R, mu)
        if normalized is None or coefficient == 0:
            return
        sign, dominant = normalized
        value = self.terms.get(dominant, 0) + sign * coefficient
        if value:
            self.terms[dominant] = value
        else:
            self.terms.pop(dominant, None)

    def weight_expansion(self) -> Dict[Weight, int]:
        "Formal character sum_mu c_mu ch V(mu), as weight -> coefficient"
        out: Dict[Weight, int] = {}
        for mu, c in self.terms.items():
            for nu, m in freudenthal_multiplicities(self.R, mu).items():
                out[nu] = out.get(nu, 0) + c * m
        return {nu: c for nu, c in out.items() if c}

    def is_zero(self) -> bool:
        return not self.terms

    def as_rows(self) -> List[dict]:
        return [{"weight": format_coordinates(mu.coords), "coefficient": c}
                for mu, c in sorted(self.terms.items(), key=lambda t: (-sum(t[0].coords), t[0].coords))]

    def __eq__(self, other) -> bool:
        if not isinstance(other, VirtualWeylCharacter):
            return NotImplemented
        return self.R is other.R and self.terms == other.terms


def euler_normalize(R: RootSystem, mu: Weight) -> Optional[Tuple[int, Weight]]:
    """
    chi(w . mu) = (-1)^l(w) chi(mu). Renvoie None quand mu + rho est
    singulier, sinon (signe, représentant dominant pour l'action point).
    """
    conjugate, parity = dominant_conjugate(R, mu + R.rho)
    if any(c == 0 for c in conjugate.coords):
        return None
    return (-1 if parity else 1), conjugate - R.rho


@dataclass
class JantzenTerm:
    root: str
    level: int
    valuation: int
    weight: Weight
    normalized: Optional[Tuple[int, Weight]]


def jantzen_terms(R: RootSystem, lam: Weight, p: int) -> List[JantzenTerm]:
    "Every (alpha, mp) term of the sum, in positive root order then by level"
    _require_dominant(R, lam)
    p = check_prime(p)
    terms = []
    for k, alpha in enumerate(R.positive_roots):
        top = pairing(R, lam + R.rho, k)
        for mp in range(p, top, p):
            mu = reflect_dot(R, lam, k, mp)
            terms.append(JantzenTerm(root_label(alpha), mp, nu_p(mp, p), mu, euler_normalize(R, mu)))
    return terms


def jantzen_sum(R: RootSystem, lam: Weight, p: int) -> VirtualWeylCharacter:
    """Right hand side of the Jantzen sum formula.

    Returns:
        VirtualWeylCharacter: sum_{i>0} ch V(lam)^i as a combination of
        Euler characters of dominant weights.
    """
    total = VirtualWeylCharacter(R)
    for term in jantzen_terms(R, lam, p):
        total.add(term.weight, term.valuation)
    logger.debug(f"{R.name}: Jantzen sum of {lam} at p={p} has {len(total.terms)} terms")
    return total


@dataclass
class JantzenReport:
    root_system: str
    weight: Weight
    p: int
    convention: str
    expansion: Dict[Weight, int]
    valuations: Dict[Weight, int]
    deltas: Dict[Weight, int]

    @property
    def ok(self) -> bool:
        return not any(self.deltas.values())

    def as_rows(self) -> List[dict]:
        return [{"weight": format_coordinates(mu.coords),
                 "jantzen": self.expansion.get(mu, 0),
                 "gram_valuation": self.valuations.get(mu, 0),
                 "delta": d}
                for mu, d in self.deltas.items()]


def jantzen_vs_gram(R: RootSystem, lam: Weight, p: int, module: Optional[AdmissibleModule] = None,
                    size_cap: int = MODULE_DIM_CAP, strict: bool = True) -> JantzenReport:
    """Compares the weight expansion of the sum formula with the Gram valuations.

    Args:
        module (AdmissibleModule): V(lam), built on demand when omitted.
        strict (bool): raise on any nonzero delta.

    Raises:
        ConsistencyError: some delta is nonzero and strict is set.
    """
    p = check_prime(p)
    V = module if module is not None else build_weyl_module(R, lam, size_cap)
    valuations = gram_elementary_divisor_valuations(V, p)
    expansion = jantzen_sum(R, lam, p).weight_expansion()
    weights = list(V.spaces) + [mu for mu in expansion if mu not in V.spaces]
    deltas = {mu: expansion.get(mu, 0) - valuations.get(mu, 0) for mu in weights}
    report = JantzenReport(R.name, lam, p, CONVENTION, expansion, valuations, deltas)
    if not report.ok:
        bad = {format_coordinates(mu.coords): d for mu, d in deltas.items() if d}
        message = f"Jantzen sum and Gram valuations disagree for {R.name}, {lam}, p={p}: {bad}"
        if strict:
            raise ConsistencyError(message)
        logger.warning(message)
    return report
