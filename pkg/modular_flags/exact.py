"""Exact matrix helpers on top of sympy's DomainMatrix (ZZ, QQ and GF(p))."""
from fractions import Fraction
from math import lcm
from typing import List, Sequence, Tuple

from sympy.polys.domains import GF, QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form, invariant_factors
from sympy.polys.polyerrors import CoercionFailed

from .errors import ConsistencyError


def zz_matrix(rows: Sequence[Sequence[int]], shape: Tuple[int, int] = None) -> DomainMatrix:
    rows = [[ZZ(int(x)) for x in row] for row in rows]
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    return DomainMatrix(rows, shape, ZZ)


def qq_matrix(rows: Sequence[Sequence], shape: Tuple[int, int] = None) -> DomainMatrix:
    def conv(x):
        f = Fraction(x)
        return QQ(f.numerator, f.denominator)

    rows = [[conv(x) for x in row] for row in rows]
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    return DomainMatrix(rows, shape, QQ)


def gf_matrix(rows: Sequence[Sequence[int]], p: int, shape: Tuple[int, int] = None) -> DomainMatrix:
    field = GF(p)
    rows = [[field(int(x)) for x in row] for row in rows]
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    return DomainMatrix(rows, shape, field)


def _builder(a: DomainMatrix):
    "Matrix constructor matching the domain of a"
    if a.domain == QQ:
        return qq_matrix
    if a.domain == ZZ:
        return zz_matrix
    p = a.domain.characteristic()
    return lambda data, shape=None: gf_matrix(data, p, shape)


def zeros(m: int, n: int, domain=QQ) -> DomainMatrix:
    return DomainMatrix.zeros((m, n), domain)


def identity(n: int, domain=QQ) -> DomainMatrix:
    return DomainMatrix.eye(n, domain)


def matmul(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    "Product, tolerant of empty inner or outer dimensions"
    if a.shape[1] != b.shape[0]:
        raise ConsistencyError(f"Shape mismatch {a.shape} x {b.shape}")
    if 0 in a.shape or 0 in b.shape:
        return zeros(a.shape[0], b.shape[1], a.domain)
    return a * b


def to_qq(a: DomainMatrix) -> DomainMatrix:
    return a if a.domain == QQ else a.convert_to(QQ)


def to_zz(a: DomainMatrix, what: str = "matrix") -> DomainMatrix:
    "Converts to ZZ, raising ConsistencyError on a non integral entry"
    if a.domain == ZZ:
        return a
    try:
        return a.convert_to(ZZ)
    except CoercionFailed:
        raise ConsistencyError(f"Non integral {what}: {rows(a)}")


def to_gf(a: DomainMatrix, p: int) -> DomainMatrix:
    if a.domain.is_FiniteField:
        return a
    return to_zz(a).convert_to(GF(p))


def is_integral(a: DomainMatrix) -> bool:
    if a.domain == ZZ:
        return True
    return all(Fraction(int(x.numerator), int(x.denominator)).denominator == 1
               for row in a.to_list() for x in row)


def is_zero(a: DomainMatrix) -> bool:
    zero = a.domain.zero
    return all(x == zero for row in a.to_list() for x in row)


def rows(a: DomainMatrix) -> List[List]:
    "Entries as python ints (ZZ, GF(p)) or Fractions (QQ)"
    if a.domain == QQ:
        return [[Fraction(int(x.numerator), int(x.denominator)) for x in row]
                for row in a.to_list()]
    if a.domain == ZZ:
        return [[int(x) for x in row] for row in a.to_list()]
    p = a.domain.characteristic()
    return [[int(a.domain.to_int(x)) % p for x in row] for row in a.to_list()]


def column_block(a: DomainMatrix, columns: Sequence[int]) -> DomainMatrix:
    data = rows(a)
    builder = _builder(a)
    return builder([[row[c] for c in columns] for row in data], (a.shape[0], len(columns)))


def row_block(a: DomainMatrix, row_ids: Sequence[int]) -> DomainMatrix:
    data = rows(a)
    builder = _builder(a)
    return builder([data[r] for r in row_ids], (len(row_ids), a.shape[1]))


def rref_qq(a: DomainMatrix) -> Tuple[DomainMatrix, Tuple[int, ...]]:
    reduced, pivots = to_qq(a).rref()
    return reduced, tuple(pivots)


def rref_gf(a: DomainMatrix, p: int) -> Tuple[DomainMatrix, Tuple[int, ...]]:
    reduced, pivots = to_gf(a, p).rref()
    return reduced, tuple(pivots)


def rank_mod_p(a: DomainMatrix, p: int) -> int:
    if 0 in a.shape:
        return 0
    return len(rref_gf(a, p)[1])


def lattice_basis(coords: DomainMatrix) -> DomainMatrix:
    """
    Base d'un réseau donné par ses générateurs (colonnes rationnelles d'une
    matrice de rang ligne plein), obtenue par forme normale d'Hermite.
    """
    data = rows(to_qq(coords))
    denominator = lcm(*[x.denominator for row in data for x in row]) if data else 1
    scaled = zz_matrix([[int(x * denominator) for x in row] for row in data], coords.shape)
    hnf = hermite_normal_form(scaled)
    if hnf.shape != (coords.shape[0], coords.shape[0]):
        raise ConsistencyError(f"Hermite normal form has shape {hnf.shape}, expected square of size {coords.shape[0]}")
    return to_qq(hnf).scalarmul(QQ(1, denominator))


def elementary_divisors(a: DomainMatrix) -> Tuple[int, ...]:
    "Invariant factors of an integer matrix (Smith normal form diagonal)"
    return tuple(int(x) for x in invariant_factors(to_zz(a)))


def to_json_rows(a: DomainMatrix) -> List[List]:
    "JSON friendly entries, Fractions rendered as 'n/d'"
    out = []
    for row in rows(a):
        out.append([x if isinstance(x, int) else (int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}")
                    for x in row])
    return out


def _stack_builder(blocks: Sequence[DomainMatrix]):
    domains = {b.domain for b in blocks}
    return _builder(blocks[0]) if len(domains) == 1 else qq_matrix


def hstack(blocks: Sequence[DomainMatrix], nrows: int, domain=QQ) -> DomainMatrix:
    if not blocks:
        return zeros(nrows, 0, domain)
    data = [[] for _ in range(nrows)]
    for block in blocks:
        for r, row in enumerate(rows(block)):
            data[r].extend(row)
    width = sum(b.shape[1] for b in blocks)
    return _stack_builder(blocks)(data, (nrows, width))


def vstack(blocks: Sequence[DomainMatrix], ncols: int, domain=QQ) -> DomainMatrix:
    if not blocks:
        return zeros(0, ncols, domain)
    data = [row for block in blocks for row in rows(block)]
    return _stack_builder(blocks)(data, (len(data), ncols))


def transpose(a: DomainMatrix) -> DomainMatrix:
    if 0 in a.shape:
        return zeros(a.shape[1], a.shape[0], a.domain)
    return a.transpose()


def inverse(a: DomainMatrix) -> DomainMatrix:
    return to_qq(a).inv()


def is_symmetric(a: DomainMatrix) -> bool:
    data = rows(a)
    return all(data[i][j] == data[j][i] for i in range(len(data)) for j in range(i))
