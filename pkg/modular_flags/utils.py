import logging
import re
from functools import total_ordering
from math import comb
from typing import Any, Iterable, Tuple, Union

from sympy import isprime

from .errors import InputError
from .settings import INF_TOKEN, SUPPORTED_FAMILIES


# Logging
################################################

_LOG_FORMAT = "%(name)s:%(levelname)s:%(message)s"
_configured = False


def get_logger(name: str) -> logging.Logger:
    "Returns the module logger, installing the package format once"
    global _configured
    if not _configured:
        logging.basicConfig(format=_LOG_FORMAT)
        _configured = True
    return logging.getLogger(name)


def set_verbosity(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.INFO
    if verbose:
        level = logging.DEBUG
    elif quiet:
        level = logging.WARNING
    logging.getLogger("modular_flags").setLevel(level)


# N ∪ {inf}
################################################

@total_ordering
class _Infinity:
    """
    Valeur infinie de N ∪ {inf}.

    Plus grande que tout entier, égale uniquement à elle-même ; ``min`` et
    ``max`` fonctionnent directement avec des entiers.
    """
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other: Any) -> bool:
        return other is self

    def __lt__(self, other: Any) -> bool:
        if other is self or isinstance(other, int):
            return False
        return NotImplemented

    def __gt__(self, other: Any) -> bool:
        if isinstance(other, int):
            return True
        if other is self:
            return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash(INF_TOKEN)

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return INF_TOKEN

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

ExtNat = Union[int, _Infinity]


def ext_to_json(value: ExtNat) -> Union[int, str]:
    "Serialises an element of N ∪ {inf}, inf -> 'inf'"
    return INF_TOKEN if value is INF else int(value)


def ext_from_json(value: Union[int, str]) -> ExtNat:
    if isinstance(value, str):
        if value.strip().lower() in (INF_TOKEN, "∞", "infinity"):
            return INF
        value = int(value)
    if value < 0:
        raise InputError(f"Exponent must be >= 0 or inf, got {value}")
    return int(value)


# Arithmetic helpers
################################################

def check_prime(p: int) -> int:
    "Validates a prime, returning it as a python int"
    if isinstance(p, bool) or not isinstance(p, int) or not isprime(p):
        raise InputError(f"{p!r} is not a prime number")
    return int(p)


def general_binomial(x: int, k: int) -> int:
    """
    Coefficient binomial C(x, k) pour x entier quelconque (éventuellement
    négatif), k >= 0.
    """
    if k < 0:
        return 0
    if x >= 0:
        return comb(x, k)
    # C(-m, k) = (-1)^k C(m + k - 1, k)
    return (-1) ** k * comb(-x + k - 1, k)


# Parsing
################################################

_ROOT_SYSTEM_RE = re.compile(r"^\s*([A-Za-z])\s*(\d+)\s*$")


def parse_root_system_name(name: str) -> Tuple[str, int]:
    """
    Lit un nom de système de racines, ex: "C4" -> ("C", 4).

    Raises:
        InputError: si le nom ne suit pas le format lettre + rang.
    """
    match = _ROOT_SYSTEM_RE.match(str(name))
    if not match:
        raise InputError(f"Cannot read root system {name!r} (expected e.g. 'C4')")
    family = match.group(1).upper()
    if family not in SUPPORTED_FAMILIES:
        raise InputError(f"Unknown root system family {family!r}")
    return family, int(match.group(2))


def parse_coordinates(text: str, rank: int) -> Tuple[int, ...]:
    """
    Lit des coordonnées entières : "0,0,0,1" ou, en notation compacte
    d'un chiffre par coordonnée, "0001".

    Args:
        text (str): Chaîne à lire.
        rank (int): Nombre de coordonnées attendu.

    Returns:
        tuple: Coordonnées entières.
    """
    text = str(text).strip()
    if not text:
        raise InputError("Empty coordinate string")
    try:
        if "," in text:
            coords = tuple(int(tok) for tok in text.split(","))
        elif rank == 1 and re.fullmatch(r"-?\d+", text):
            coords = (int(text),)
        elif re.fullmatch(r"\d+", text):
            coords = tuple(int(ch) for ch in text)
        else:
            raise ValueError(text)
    except ValueError:
        raise InputError(f"Cannot read coordinates {text!r}")
    if len(coords) != rank:
        raise InputError(f"Expected {rank} coordinates, got {len(coords)} in {text!r}")
    return coords


def format_coordinates(coords: Iterable[int]) -> str:
    "Digits form when every coordinate is a single digit, comma form otherwise"
    coords = tuple(int(c) for c in coords)
    if all(0 <= c <= 9 for c in coords):
        return "".join(str(c) for c in coords)
    return ",".join(str(c) for c in coords)


def parse_exponent_list(text: str, rank: int) -> Tuple[ExtNat, ...]:
    "Reads simple exponents such as '0,inf,inf,1'"
    tokens = [tok for tok in str(text).split(",") if tok.strip()]
    if len(tokens) != rank:
        raise InputError(f"Expected {rank} exponents, got {len(tokens)} in {text!r}")
    try:
        return tuple(ext_from_json(tok) for tok in tokens)
    except ValueError:
        raise InputError(f"Cannot read exponents {text!r}")
