"""Command line front end.

Every invocation parses and validates one ``CommandRequest``, dispatches it
to the owning module through the result cache and prints a
``ResultEnvelope`` as JSON, TSV or text. Exit codes follow the exception
hierarchy of ``errors.py``: 0 success, 2 invalid input, 3 unsupported case
or size cap, 4 indeterminate result, 5 internal consistency failure.
"""
import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

from .cache import ResultCache
from .chevalley import structure_constants
from .diagnostics import (
    SWEEP_FAMILIES,
    SWEEP_PRIMES,
    bookkeeping_sweep,
    exponent_sweep,
    incidence_sweep,
    jantzen_sweep,
)
from .errors import InputError, ModularFlagsError
from .formatting import FORMATS, render
from .highestweight import decompose_weyl, simple_module, weight_table
from .incidence import (
    INDETERMINATE,
    BiDegree,
    IncidenceSpec,
    brute_force_h0,
    canonical_bidegree,
    cohomology_effective,
    defining_section,
    euler_characteristic,
    general_cohomology,
    is_ample,
    swapped_section,
    vanishing_threshold,
)
from .jantzen import jantzen_sum, jantzen_vs_gram
from .parabolic import (
    ParabolicStandardSpec,
    character_lattice,
    compare_reference_table,
    embedding_dimension,
    full_exponents,
    is_exceptional,
    is_very_ample,
    orbit_dimension,
    simple_exponents,
)
from .rootsys import (
    RootSystem,
    Weight,
    characteristic_warning,
    freudenthal_multiplicities,
    root_label,
    root_system,
    weyl_dimension,
)
from .settings import CACHE_ENV_VAR, CACHE_PATH, MODULE_DIM_CAP, ORACLE_CAP, REFERENCE_TABLES, SCHEMA_VERSION
from .utils import check_prime, ext_to_json, format_coordinates, get_logger, parse_exponent_list, set_verbosity

logger = get_logger(__name__)

SUBCOMMANDS = ("roots", "weyl-dim", "weyl-char", "simple", "decompose", "jantzen",
               "stabilizer", "lattice", "very-ample", "incidence", "sweep")
SWEEPS = ("exponents", "jantzen", "bookkeeping", "incidence")

# subcommands taking a root system, a weight, a prime
_NEEDS_ROOT_SYSTEM = {"roots", "weyl-dim", "weyl-char", "simple", "decompose", "jantzen",
                      "stabilizer", "lattice", "very-ample"}
_NEEDS_WEIGHT = {"weyl-dim", "weyl-char", "simple", "decompose", "jantzen", "stabilizer", "very-ample"}
_NEEDS_PRIME = {"simple", "decompose", "jantzen", "stabilizer", "lattice", "very-ample", "incidence"}


# Requests and envelopes
################################################

@dataclass
class CommandRequest:
    subcommand: str
    root_system: Optional[str] = None
    weight: Optional[str] = None
    p: Optional[int] = None
    fmt: str = "json"
    use_cache: bool = True
    verify_cache: bool = False
    cache_dir: Optional[str] = None
    size_cap: Optional[int] = None
    options: Dict[str, Any] = field(default_factory=dict)
    # filled by validate()
    R: Optional[RootSystem] = field(default=None, repr=False, compare=False)
    lam: Optional[Weight] = field(default=None, repr=False, compare=False)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CommandRequest":
        options = {}
        for name in ("dump_action", "expand", "check_reference_table", "swap", "oracle", "exponents",
                     "constants", "kind", "families", "primes", "rs", "max_degree",
                     "n", "r", "a", "b"):
            value = getattr(args, name, None)
            if value is not None and value is not False:
                options[name] = list(value) if isinstance(value, (list, tuple)) else value
        request = cls(
            subcommand=args.subcommand,
            root_system=getattr(args, "root_system", None),
            weight=getattr(args, "weight", None),
            p=getattr(args, "p", None),
            fmt=args.format,
            use_cache=not args.no_cache,
            verify_cache=args.verify_cache,
            cache_dir=args.cache_dir,
            size_cap=args.size_cap,
            options=options,
        )
        request.validate()
        return request

    def validate(self) -> "CommandRequest":
        """Parses every argument before any computation.

        Raises:
            InputError: unknown subcommand, root system, malformed weight,
                non prime p, missing or inconsistent options.
        """
        if self.subcommand not in SUBCOMMANDS:
            raise InputError(f"Unknown subcommand {self.subcommand!r}")
        if self.fmt not in FORMATS:
            raise InputError(f"Unknown format {self.fmt!r}")
        if self.size_cap is not None and self.size_cap < 1:
            raise InputError(f"--size-cap must be positive, got {self.size_cap}")

        if self.subcommand in _NEEDS_ROOT_SYSTEM:
            if not self.root_system:
                raise InputError(f"{self.subcommand} needs a root system")
            self.R = root_system(self.root_system)
        if self.subcommand in _NEEDS_WEIGHT:
            if self.weight is None:
                raise InputError(f"{self.subcommand} needs a weight")
            self.lam = Weight.parse(self.weight, self.R.rank)
            if self.subcommand != "very-ample" and not self.lam.is_dominant():
                raise InputError(f"Weight {self.weight} is not dominant")
        if self.subcommand in _NEEDS_PRIME:
            if self.p is None:
                raise InputError(f"{self.subcommand} needs a prime p")
            self.p = check_prime(self.p)

        if self.subcommand in ("lattice", "very-ample"):
            if "exponents" not in self.options:
                raise InputError(f"{self.subcommand} needs --exponents")
            parse_exponent_list(self.options["exponents"], self.R.rank)
        if self.subcommand == "incidence":
            missing = [k for k in ("n", "r", "a", "b") if k not in self.options]
            if missing:
                raise InputError(f"incidence needs {', '.join('--' + k for k in missing)}")
            IncidenceSpec(self.options["n"], self.p, self.options["r"])
        if self.subcommand == "sweep":
            if self.options.get("kind") not in SWEEPS:
                raise InputError(f"sweep needs one of {SWEEPS}")
            for name in self.options.get("families", []):
                root_system(name)
            for q in self.options.get("primes", []):
                check_prime(q)
        table = self.options.get("check_reference_table")
        if table is not None:
            self._validate_reference_table(table)
        return self

    def _validate_reference_table(self, name: str) -> None:
        if name not in REFERENCE_TABLES:
            raise InputError(f"No embedded table named {name!r}, expected one of {sorted(REFERENCE_TABLES)}")
        table = REFERENCE_TABLES[name]
        if (self.R.name, format_coordinates(self.lam.coords), self.p) != (table["root_system"], table["weight"], table["p"]):
            raise InputError(f"Table {name} is for {table['root_system']} {table['weight']} p={table['p']}")

    def echo(self) -> Dict[str, Any]:
        "JSON description of the request, without output and cache flags"
        out = {"subcommand": self.subcommand}
        if self.R is not None:
            out["root_system"] = self.R.name
        if self.lam is not None:
            out["weight"] = format_coordinates(self.lam.coords)
        if self.p is not None:
            out["p"] = self.p
        out.update(self.options)
        return out

    def key(self) -> Dict[str, Any]:
        return {**self.echo(), "size_cap": self.size_cap}

    def module_cap(self) -> int:
        return self.size_cap if self.size_cap is not None else MODULE_DIM_CAP

    def oracle_cap(self) -> int:
        return self.size_cap if self.size_cap is not None else ORACLE_CAP


@dataclass
class ResultEnvelope:
    request: Dict[str, Any]
    payload: Optional[Dict[str, Any]] = None
    warnings: List[str] = field(default_factory=list)
    timing_s: float = 0.0
    cache: Optional[str] = None
    error: Optional[Dict[str, str]] = None
    exit_code: int = 0
    schema_version: str = SCHEMA_VERSION

    def as_dict(self) -> Dict[str, Any]:
        out = {
            "schema_version": self.schema_version,
            "request": self.request,
            "payload": self.payload,
            "warnings": self.warnings,
            "timing_s": round(self.timing_s, 6),
            "cache": self.cache,
        }
        if self.error is not None:
            out["error"] = self.error
        return out


# Handlers
################################################

def _roots(req: CommandRequest) -> dict:
    R = req.R
    payload = {
        "root_system": R.name,
        "rank": R.rank,
        "cartan": R.cartan.tolist(),
        "rho": format_coordinates(R.rho.coords),
        "count": len(R.positive_roots),
        "rows": [{"root": root_label(a), "height": R.height(a), "norm": R.norm(a),
                  "weight": format_coordinates(R.root_weight(a).coords)} for a in R.positive_roots],
    }
    if req.options.get("constants"):
        payload["structure_constants"] = structure_constants(R).as_rows()
    return payload


def _weyl_dim(req: CommandRequest) -> dict:
    return {"root_system": req.R.name, "weight": format_coordinates(req.lam.coords), "dim": weyl_dimension(req.R, req.lam)}


def _weyl_char(req: CommandRequest) -> dict:
    mult = freudenthal_multiplicities(req.R, req.lam)
    return {
        "root_system": req.R.name,
        "dim": sum(mult.values()),
        "rows": [{"weight": format_coordinates(mu.coords), "multiplicity": m, "dominant": mu.is_dominant()}
                 for mu, m in mult.items()],
    }


def _simple(req: CommandRequest) -> dict:
    L = simple_module(req.R, req.lam, req.p, req.module_cap())
    payload = {
        "root_system": req.R.name,
        "p": req.p,
        "dim": L.dim,
        "weyl_dim": L.module.dim,
        "rows": weight_table(L.module, L),
    }
    if req.options.get("dump_action"):
        payload["action"] = L.action_rows()
    return payload


def _decompose(req: CommandRequest) -> dict:
    cap = req.module_cap()
    factors = decompose_weyl(req.R, req.lam, req.p, cap)
    rows = [{"weight": format_coordinates(mu.coords), "multiplicity": c,
             "simple_dim": simple_module(req.R, mu, req.p, cap).dim} for mu, c in factors.items()]
    return {
        "root_system": req.R.name,
        "p": req.p,
        "weyl_dim": weyl_dimension(req.R, req.lam),
        "composition_dim": sum(r["multiplicity"] * r["simple_dim"] for r in rows),
        "rows": rows,
    }


def _jantzen(req: CommandRequest) -> dict:
    report = jantzen_vs_gram(req.R, req.lam, req.p, size_cap=req.module_cap())
    payload = {
        "root_system": req.R.name,
        "p": req.p,
        "convention": report.convention,
        "gram_check": report.ok,
        "rows": jantzen_sum(req.R, req.lam, req.p).as_rows(),
    }
    if req.options.get("expand"):
        payload["expansion"] = report.as_rows()
    return payload


def _stabilizer(req: CommandRequest) -> dict:
    L = simple_module(req.R, req.lam, req.p, req.module_cap())
    E = full_exponents(L)
    exceptional = is_exceptional(E)
    payload = {
        "root_system": req.R.name,
        "p": req.p,
        "simple_dim": L.dim,
        "simple_exponents": [ext_to_json(v) for v in simple_exponents(req.R, req.lam, req.p)],
        "exceptional": exceptional,
        "orbit_dimension": orbit_dimension(E),
        "embedding_dimension": embedding_dimension(L) if any(req.lam.coords) else None,
        "rows": E.as_rows(),
    }
    if not exceptional:
        payload["standard_form"] = {f"alpha_{i + 1}": n for i, n in
                                    ParabolicStandardSpec.from_simple_exponents(E.simple()).finite_part}
    table = req.options.get("check_reference_table")
    if table is not None:
        payload["reference_table"] = compare_reference_table(E, table)
    return payload


def _parabolic_spec(req: CommandRequest) -> ParabolicStandardSpec:
    return ParabolicStandardSpec.from_simple_exponents(parse_exponent_list(req.options["exponents"], req.R.rank))


def _lattice(req: CommandRequest) -> dict:
    spec = _parabolic_spec(req)
    lattice = character_lattice(spec, req.p)
    return {"root_system": req.R.name, "p": req.p, "finite_part": [i + 1 for i, _ in spec.finite_part],
            "rows": lattice.as_rows()}


def _very_ample(req: CommandRequest) -> dict:
    spec = _parabolic_spec(req)
    coefficients = character_lattice(spec, req.p).coefficients(req.lam)
    return {
        "root_system": req.R.name,
        "p": req.p,
        "character": format_coordinates(req.lam.coords),
        "very_ample": is_very_ample(req.lam, spec, req.p),
        "rows": [{"simple_root": i + 1, "coefficient": a} for i, a in sorted(coefficients.items())],
    }


def _incidence(req: CommandRequest) -> dict:
    spec = IncidenceSpec(req.options["n"], req.p, req.options["r"])
    requested = BiDegree(req.options["a"], req.options["b"])
    # on Z(sum x_i y_i^q), L(a, b) is L(b, a) on Z(sum x_i^q y_i)
    swap = bool(req.options.get("swap"))
    d = requested.swapped() if swap else requested
    section = swapped_section(spec) if swap else defining_section(spec)
    if d.is_effective():
        table = cohomology_effective(spec, d)
    else:
        table = general_cohomology(spec, d, req.oracle_cap())
    payload = {
        **spec.as_dict(),
        "bidegree": requested.as_list(),
        "computed_as": d.as_list(),
        "section": str(section),
        "ample": is_ample(d),
        "canonical_bidegree": canonical_bidegree(spec).as_list(),
        "vanishing_threshold": vanishing_threshold(spec),
        "euler_characteristic": euler_characteristic(spec, d),
        **table.as_dict(),
        "rows": [{"degree": i, "h": table.dims.get(i),
                  "bounds": list(table.bounds[i]) if i in table.bounds else None}
                 for i in range(spec.dim + 1)],
    }
    if req.options.get("oracle") and d.is_effective():
        payload["oracle_h0"] = brute_force_h0(spec, d, req.oracle_cap())
    return payload


def _sweep(req: CommandRequest) -> dict:
    kind = req.options["kind"]
    families = req.options.get("families") or list(SWEEP_FAMILIES)
    primes = req.options.get("primes") or list(SWEEP_PRIMES)
    if kind == "incidence":
        df = incidence_sweep(req.options.get("n", 2), req.options.get("primes") or [2, 3],
                             req.options.get("rs") or [1, 2], req.options.get("max_degree", 4),
                             req.oracle_cap())
        checks = [c for c in ("h0_match", "sequence_match", "chi_additive", "kodaira") if c in df.columns]
    else:
        sweep = {"exponents": exponent_sweep, "jantzen": jantzen_sweep,
                 "bookkeeping": bookkeeping_sweep}[kind]
        df = sweep(families, primes, req.module_cap())
        checks = ["match"]
    rows = json.loads(df.to_json(orient="records"))
    ok = all(row[c] is not False for row in rows for c in checks)
    return {"sweep": kind, "count": len(rows), "all_match": ok, "rows": rows}


HANDLERS: Dict[str, Callable[[CommandRequest], dict]] = {
    "roots": _roots,
    "weyl-dim": _weyl_dim,
    "weyl-char": _weyl_char,
    "simple": _simple,
    "decompose": _decompose,
    "jantzen": _jantzen,
    "stabilizer": _stabilizer,
    "lattice": _lattice,
    "very-ample": _very_ample,
    "incidence": _incidence,
    "sweep": _sweep,
}


# Dispatch
################################################

def _request_warnings(req: CommandRequest) -> List[str]:
    if req.R is not None and req.p is not None and req.subcommand in ("simple", "decompose", "stabilizer",
                                                                       "lattice", "very-ample"):
        message = characteristic_warning(req.R, req.p)
        if message:
            return [message]
    return []


def run(request: CommandRequest) -> ResultEnvelope:
    """Dispatches a validated request through the result cache.

    Raises:
        ModularFlagsError: any library error, with its exit code.
    """
    start = time.perf_counter()
    cache = ResultCache(request.cache_dir or os.environ.get(CACHE_ENV_VAR, CACHE_PATH))
    handler = HANDLERS[request.subcommand]
    payload, provenance = cache.roundtrip(request.key(), lambda: handler(request),
                                          use_cache=request.use_cache, verify=request.verify_cache)
    warnings = _request_warnings(request) + cache.warnings
    warnings += (payload.get("reference_table") or {}).get("notes", [])
    envelope = ResultEnvelope(request.echo(), payload, warnings, time.perf_counter() - start, provenance)
    if payload.get("status") == INDETERMINATE:
        envelope.exit_code = 4
    return envelope


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json", help="Output format")
    common.add_argument("--cache-dir", default=None,
                        help=f"Cache directory (default: ${CACHE_ENV_VAR} or {CACHE_PATH})")
    common.add_argument("--no-cache", action="store_true", help="Bypass the result cache")
    common.add_argument("--verify-cache", action="store_true",
                        help="On a cache hit, recompute and compare the bytes")
    common.add_argument("--size-cap", type=int, default=None, help="Largest module or graded piece handled")
    common.add_argument("-v", "--verbose", action="store_true")
    common.add_argument("-q", "--quiet", action="store_true")

    parser = argparse.ArgumentParser(prog="modular_flags",
                                     description="Flag varieties with non reduced stabilizers")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name: str, help_text: str, weight: bool = False, prime: bool = False,
            root: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        if root:
            p.add_argument("root_system", help="Root system, e.g. C4")
        if weight:
            p.add_argument("weight", help="Weight in fundamental coordinates, e.g. 0001 or 0,0,0,1")
        if prime:
            p.add_argument("-p", "--p", dest="p", type=int, required=True, help="Characteristic")
        return p

    roots = add("roots", "Positive roots and Cartan data")
    roots.add_argument("--constants", action="store_true", help="Add the Chevalley structure constants")
    add("weyl-dim", "Weyl dimension", weight=True)
    add("weyl-char", "Weight multiplicities in characteristic 0", weight=True)
    simple = add("simple", "Simple module L(lam) in characteristic p", weight=True, prime=True)
    simple.add_argument("--dump-action", action="store_true", help="Add the lowering matrices of L(lam)")
    add("decompose", "Composition factors of V(lam) mod p", weight=True, prime=True)
    jantzen = add("jantzen", "Jantzen sum formula, checked against the Gram valuations", weight=True, prime=True)
    jantzen.add_argument("--expand", action="store_true", help="Add the weight expansion comparison")
    stabilizer = add("stabilizer", "Exponents of the stabilizer of the highest weight line", weight=True, prime=True)
    stabilizer.add_argument("--check-paper-table", "--check-reference-table", dest="check_reference_table",
                            choices=sorted(REFERENCE_TABLES), default=None,
                            help="Compare with an embedded exponent table")
    lattice = add("lattice", "Character lattice of a standard parabolic", prime=True)
    lattice.add_argument("--exponents", required=True, help="Simple exponents, e.g. 0,inf,inf,1")
    ample = add("very-ample", "Very ampleness of a character", weight=True, prime=True)
    ample.add_argument("--exponents", required=True, help="Simple exponents, e.g. 0,inf,inf,1")

    incidence = add("incidence", "Line bundle cohomology on the unseparated incidence variety",
                    prime=True, root=False)
    incidence.add_argument("--n", type=int, required=True)
    incidence.add_argument("--r", type=int, required=True)
    incidence.add_argument("--a", type=int, required=True)
    incidence.add_argument("--b", type=int, required=True)
    incidence.add_argument("--swap", action="store_true", help="Frobenius twist on the second factor")
    incidence.add_argument("--oracle", action="store_true", help="Add the brute force h0")

    sweep = add("sweep", "Batch checks", root=False)
    sweep.add_argument("kind", choices=SWEEPS)
    sweep.add_argument("--families", nargs="+", default=None)
    sweep.add_argument("--primes", nargs="+", type=int, default=None)
    sweep.add_argument("--rs", nargs="+", type=int, default=None)
    sweep.add_argument("--n", type=int, default=None)
    sweep.add_argument("--max-degree", type=int, default=None)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    set_verbosity(args.verbose, args.quiet)
    fmt = args.format
    try:
        request = CommandRequest.from_args(args)
        envelope = run(request)
    except ModularFlagsError as e:
        logger.error(f"[{e.code}] {e}")
        envelope = ResultEnvelope({"subcommand": args.subcommand}, error={"code": e.code, "message": str(e)},
                                  exit_code=e.exit_code)
    print(render(envelope.as_dict(), fmt))
    return envelope.exit_code


if __name__ == "__main__":
    sys.exit(main())
