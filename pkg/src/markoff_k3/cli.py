"""Command-line entry point.

Exit codes: 0 when a verdict was computed (including "no obstruction"),
2 when the computation was inconclusive, 1 on usage or precision errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import enum
import json
import os
import sys
from fractions import Fraction
from importlib import resources
from typing import Any, Callable, Sequence

from . import __version__
from .brauer import default_classes, obstruction_verdict, rational_bm_witness, strong_approximation_failure
from .census import (
    ALL_INTEGERS,
    PRIME_ELL,
    admissible_count,
    hasse_failure_census,
)
from .frobenius import FieldTooLargeError, SignUndeterminedError, SingularReductionError, frobenius_report
from .hilbert import REAL, PrecisionError, hilbert_symbol
from .local_points import (
    OBSTRUCTION_PROFILE,
    PROFILES,
    SOLVABILITY_PROFILE,
    everywhere_locally_solvable,
    surface_for,
)
from .padic_core import FactorizationTooLargeError
from .surfaces import FamilyId, Surface, integral_point_search, rational_point_search

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2
PRIME_BOUND_ENV = "MARKOFF_K3_PRIME_BOUND"
DEFAULT_PRIME_BOUND = 200


class UsageError(ValueError):
    pass


def jsonable(obj: Any) -> Any:
    """Plain JSON data: Fractions as strings, sets sorted, dataclasses as dicts."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj.value if isinstance(obj, enum.Enum) else obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, Surface):
        return {"family": obj.family.value, "k": obj.k}
    if dataclasses.is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(jsonable(k)): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return sorted((jsonable(v) for v in obj), key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return str(obj)


def dumps(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2)


def schema() -> dict:
    return json.loads(resources.files("markoff_k3").joinpath("report.schema.json").read_text())


# ---------------------------------------------------------------------------
# argument helpers


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed integer {text!r}") from None


def _positive(text: str) -> int:
    v = _int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"malformed rational {text!r}") from None


def _place(text: str) -> int | str:
    return REAL if text in ("inf", "oo", "infinity", "R") else _int(text)


def _pair(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected a,b got {text!r}")
    return _int(parts[0]), _int(parts[1])


def _default_bound() -> int:
    raw = os.environ.get(PRIME_BOUND_ENV)
    if raw is None:
        return DEFAULT_PRIME_BOUND
    try:
        v = int(raw)
    except ValueError:
        raise UsageError(f"{PRIME_BOUND_ENV} must be an integer") from None
    if v <= 0:
        raise UsageError(f"{PRIME_BOUND_ENV} must be positive")
    return v


def _surface(args: argparse.Namespace) -> tuple[Surface, str | None, int | None]:
    """Resolve --k or --ell (exactly one) into a surface and its profile.

    --ell defaults to the family's obstruction profile, --k to its solvability profile.
    """
    fam = FamilyId.parse(args.family)
    profile = getattr(args, "profile", None)
    if (args.k is None) == (args.ell is None):
        raise UsageError("give exactly one of --k and --ell")
    if profile is not None and PROFILES[profile].family is not fam:
        raise UsageError(f"profile {profile} belongs to another family")
    if args.ell is not None:
        profile = profile or OBSTRUCTION_PROFILE[fam]
        if PROFILES[profile].parameterization != "ell-derived":
            raise UsageError(f"profile {profile} takes --k, not --ell")
        return surface_for(profile, args.ell), profile, args.ell
    profile = profile or SOLVABILITY_PROFILE[fam]
    if PROFILES[profile].parameterization != "k-direct":
        raise UsageError(f"profile {profile} takes --ell, not --k")
    return Surface(fam, args.k), profile, None


def _add_surface_args(p: argparse.ArgumentParser, profile: bool = True) -> None:
    p.add_argument("--family", required=True, choices=[f.value for f in FamilyId])
    p.add_argument("--k", type=_int)
    p.add_argument("--ell", type=_int)
    if profile:
        p.add_argument("--profile", choices=sorted(PROFILES))


# ---------------------------------------------------------------------------
# subcommands; each returns (exit code, report, text lines)

Outcome = tuple[int, dict, list[str]]


def cmd_hilbert(args: argparse.Namespace) -> Outcome:
    v = hilbert_symbol(args.a, args.b, args.place)
    return EXIT_OK, {"a": args.a, "b": args.b, "place": args.place, "invariant": v}, [str(v)]


def cmd_search(args: argparse.Namespace) -> Outcome:
    s, _, ell = _surface(args)
    if args.height is not None:
        found = rational_point_search(s, args.height)
        pts = [{"representative": list(r), "orbit_size": n} for r, n in found]
        lines = [f"{tuple(str(c) for c in r)} orbit {n}" for r, n in found] or ["no non-integral rational points"]
        return EXIT_OK, {"surface": s, "ell": ell, "height": args.height, "rational_points": pts}, lines
    pts = integral_point_search(s, args.box)
    lines = [str(p) for p in pts] or ["no integral points"]
    return EXIT_OK, {"surface": s, "ell": ell, "box": args.box, "integral_points": [list(p.as_tuple()) for p in pts]}, lines


def cmd_solvable(args: argparse.Namespace) -> Outcome:
    s, profile, ell = _surface(args)
    bound = args.bound or _default_bound()
    rep = everywhere_locally_solvable(s, bound, profile)
    wit = {str(e.prime): (list(e.witness.point) if e.witness else None) for e in rep.entries}
    report = {
        "surface": s, "ell": ell, "bound": bound, "profile": profile, "profile_passed": rep.profile_passed,
        "solvable": rep.solvable, "failures": list(rep.failures), "real": rep.real, "witnesses": wit,
        "tail_note": rep.tail_note,
    }
    lines = [f"{s.family.value} k={s.k}: " + ("locally solvable" if rep.solvable else f"fails at {list(rep.failures)}")]
    lines.append(rep.tail_note)
    return EXIT_OK, report, lines


def _place_table(rep: Any) -> dict:
    return {str(e.place): {"values": e.values, "complete": e.complete, "method": e.method} for e in rep.places}


def cmd_obstruction(args: argparse.Namespace) -> Outcome:
    s, profile, ell = _surface(args)
    bound = args.bound or _default_bound()
    rep = obstruction_verdict(s, bound=bound, depth=args.depth, profile=profile)
    report = {
        "surface": s, "ell": ell, "profile": profile, "bound": bound, "depth": args.depth, "verdict": rep.verdict,
        "classes": list(rep.classes), "places": _place_table(rep), "selection": rep.selection,
        "locally_solvable": rep.locally_solvable, "tail_note": rep.tail_note, "notes": list(rep.notes),
    }
    lines = [f"{s.family.value} k={s.k}: {rep.verdict}"]
    for e in rep.places:
        vals = ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in e.values)
        lines.append(f"  place {e.place}: {{{vals}}}" + ("" if e.complete else " (incomplete)"))
    lines.extend(f"  note: {n}" for n in rep.notes)
    code = EXIT_INCONCLUSIVE if rep.verdict == "inconclusive" else EXIT_OK
    return code, report, lines


def cmd_sa_failure(args: argparse.Namespace) -> Outcome:
    s, profile, ell = _surface(args)
    classes = default_classes(s.family, profile)
    labels = [c.label for c in classes]
    label = args.label or labels[0]
    if label not in labels:
        raise UsageError(f"class {label} not among {labels}")
    rep = strong_approximation_failure(s, classes[labels.index(label)], depth=args.depth, box=args.box)
    report = {
        "surface": s, "ell": ell, "label": label, "integral_point": rep.integral_point,
        "integral_point_invariant": rep.integral_point_invariant,
        "witnesses": [{"point": list(p), "modulus_exponent": m, "invariant": v} for p, m, v in rep.witnesses],
        "failure_exhibited": rep.failure_exhibited, "note": rep.note,
    }
    lines = [f"{s.family.value} k={s.k} class {label}: {rep.note}"]
    lines.extend(f"  {p} mod 2^{m}: {v}" for p, m, v in rep.witnesses)
    return EXIT_OK, report, lines


def cmd_rational_bm(args: argparse.Namespace) -> Outcome:
    s, profile, ell = _surface(args)
    res = rational_bm_witness(
        s, prime=args.prime, min_valuation=args.min_valuation, max_depth=args.max_depth,
        valuations=args.valuations, profile=profile, z_valuation=args.z_valuation,
    )
    report = {
        "surface": s, "ell": ell, "prime": res.prime, "found": res.found, "point": res.point,
        "valuations": res.valuations, "invariants": res.invariants, "selection": res.selection, "bounds": res.bounds,
    }
    if not res.found:
        return EXIT_INCONCLUSIVE, report, [f"no witness within {res.bounds}"]
    x, y, z2 = res.point  # type: ignore[misc]
    lines = [f"x={x} y={y} z^2={z2} valuations {tuple(str(v) for v in res.valuations)} invariants "  # type: ignore[union-attr]
             + ", ".join(str(v) for v in res.invariants)]  # type: ignore[union-attr]
    return EXIT_OK, report, lines


def cmd_picard(args: argparse.Namespace) -> Outcome:
    from . import lattice as lat_mod

    lat = lat_mod.lattice()
    action = lat_mod.galois_action(lat)
    open_action = lat_mod.open_part_action(lat)
    report: dict[str, Any] = {
        "determinant": lat_mod.determinant(lat.gram),
        "signature": lat_mod.signature(lat.gram),
        "alternative_basis": lat_mod.alternative_basis_report(lat),
        "fibre_quotient": lat_mod.quotient_by_fibers(lat),
    }
    if args.verify:
        report.update({
            "relations_hold": action.relations_hold(),
            "isometries": {g: lat_mod.is_isometry(m, lat.gram) for g, m in action.matrices.items()},
            "h1_closed": lat_mod.h1_group(action).factors,
            "h1_open": lat_mod.h1_group(open_action).factors,
            "h1_rho": lat_mod.h1_cyclic(action.matrices["rho"], 2).factors,
            "h1_sigma_open_rho_fixed": lat_mod.h1_sigma_on_rho_invariants(open_action).factors,
            "half_sums": lat_mod.sublattice_index_check(lat),
            "expansion_table_mismatches": lat_mod.expansion_table_mismatches(lat),
            "sigma_block": lat_mod.compare_sigma_block(action, lat),
            "claimed_kernels": lat_mod.check_claimed_kernels(action=action),
            "involutions": lat_mod.involution_isometry_check(),
        })
    if args.dump:
        with open(args.dump, "w") as fh:
            fh.write("# gram\n" + lat_mod.format_matrix(lat.gram) + "\n")
            for g, m in action.matrices.items():
                fh.write(f"# {g}\n" + lat_mod.format_matrix(m) + "\n")
    lines = [f"det {report['determinant']}", f"signature {report['signature']}",
             f"alternative basis det {report['alternative_basis']['determinant']}",
             f"fibre quotient rank {report['fibre_quotient'].rank} torsion {report['fibre_quotient'].torsion}"]
    if args.verify:
        lines += [f"H1 closed {report['h1_closed']}", f"H1 open {report['h1_open']}", f"H1 rho {report['h1_rho']}",
                  f"relations {report['relations_hold']} isometries {all(report['isometries'].values())}"]
    ok = report["determinant"] == -48 and (not args.verify or (report["relations_hold"] and all(report["isometries"].values())))
    return (EXIT_OK if ok else EXIT_ERROR), report, lines


def cmd_frobenius(args: argparse.Namespace) -> Outcome:
    rep = frobenius_report(args.p, args.kmod, args.max_n)
    report = {
        "p": args.p, "kmod": args.kmod % args.p, "counts": dict(rep.table.counts), "traces": rep.traces,
        "quotient_coefficients": rep.charpoly.coefficients, "quotient": str(rep.charpoly),
        "unity_eigenvalues": rep.unity_eigenvalues, "quotient_unity_eigenvalues": rep.quotient_unity_eigenvalues,
        "quotient_irreducible": rep.quotient_irreducible,
    }
    lines = [f"#W(F_{args.p}^{n}) = {c}" for n, c in rep.table.counts]
    lines += [f"traces {[str(t) for t in rep.traces]}", f"f(t) = {rep.charpoly}",
              f"roots of unity among eigenvalues: {rep.unity_eigenvalues}"]
    return EXIT_OK, report, lines


def cmd_census(args: argparse.Namespace) -> Outcome:
    fam = FamilyId.parse(args.family)
    mode = PRIME_ELL if args.prime_ell else ALL_INTEGERS
    bound = args.bound or 50
    if args.verify_obstruction:
        res = hasse_failure_census(fam, args.max_M, bound, args.depth, mode, True, args.row_budget)
        summary = res.summary.as_dict()
        summary["truncated"] = res.truncated
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(res.csv_text())
    else:
        pids = [SOLVABILITY_PROFILE[fam], OBSTRUCTION_PROFILE[fam]]
        summary = admissible_count(pids, args.max_M, mode).as_dict()
        if args.out:
            with open(args.out, "w") as fh:
                fh.write("profile,M,count\n")
                for pid, c in summary["counts"].items():
                    fh.write(f"{pid},{args.max_M},{c}\n")
    report = {"family": fam, "summary": summary}
    return EXIT_OK, report, [json.dumps(jsonable(summary), sort_keys=True)]


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="markoff-k3", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable[[argparse.Namespace], Outcome], help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", help="print a JSON report")
        p.set_defaults(fn=fn)
        return p

    p = add("hilbert", cmd_hilbert, "quadratic Hilbert symbol, written additively")
    p.add_argument("a", type=_rational)
    p.add_argument("b", type=_rational)
    p.add_argument("place", type=_place)

    p = add("search", cmd_search, "integral points in a box or rational points of bounded height")
    _add_surface_args(p)
    p.add_argument("--box", type=_positive, default=1000)
    p.add_argument("--height", type=_positive)

    p = add("solvable", cmd_solvable, "local solvability at the real place and primes up to a bound")
    _add_surface_args(p)
    p.add_argument("--bound", type=_positive)

    p = add("obstruction", cmd_obstruction, "Brauer-Manin verdict for integral points")
    _add_surface_args(p)
    p.add_argument("--bound", type=_positive)
    p.add_argument("--depth", type=_positive, default=5)

    p = add("sa-failure", cmd_sa_failure, "two 2-adic cells with different invariants")
    _add_surface_args(p)
    p.add_argument("--label")
    p.add_argument("--depth", type=_positive, default=5)
    p.add_argument("--box", type=_positive, default=20)

    p = add("rational-bm", cmd_rational_bm, "local point with bounded poles cancelling the integral invariants")
    _add_surface_args(p)
    p.add_argument("--prime", type=_positive)
    p.add_argument("--min-valuation", type=_int, default=-4)
    p.add_argument("--max-depth", type=_positive, default=6)
    p.add_argument("--valuations", type=_pair, action="append")
    p.add_argument("--z-valuation", type=_int)

    p = add("picard", cmd_picard, "geometric Picard lattice and its Galois cohomology")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--dump", help="write Gram and generator matrices as plain text")

    p = add("frobenius", cmd_frobenius, "point counts and the Frobenius polynomial")
    p.add_argument("--p", type=_positive, default=5)
    p.add_argument("--kmod", type=_int, default=3)
    p.add_argument("--max-n", type=_positive, default=3)

    p = add("census", cmd_census, "count admissible parameters and Hasse failures up to a bound")
    p.add_argument("--family", required=True, choices=[f.value for f in FamilyId])
    p.add_argument("--max-M", dest="max_M", type=_positive, required=True)
    p.add_argument("--prime-ell", action="store_true")
    p.add_argument("--verify-obstruction", action="store_true")
    p.add_argument("--bound", type=_positive)
    p.add_argument("--depth", type=_positive, default=5)
    p.add_argument("--row-budget", type=_positive, default=500)
    p.add_argument("--out")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        code, report, lines = args.fn(args)
    except (UsageError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (PrecisionError, FactorizationTooLargeError, FieldTooLargeError, SingularReductionError,
            SignUndeterminedError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.json:
        print(dumps({"command": args.command, "exit_code": code, "result": report}))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
