"""Command-line front end.

Every command prints one JSON report.  Exit codes: 0 when all checks pass,
1 when a counterexample is found, 2 for usage or parse errors, 3 for input
the requested computation does not support.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from pathlib import Path

from . import __version__
from .core import ClassCoords, Partition, SchubertIndex, brill_noether_number, is_generic, schubert_to_partition
from .errors import ChainError, InvalidInput, UnsupportedInput
from .lifting import build_ladder, verify_ladder
from .locus import DEFAULT_GRID_CAP, bn_locus, cross_validate_grid, sample_point
from .oracle import ENGINES, rank_class
from .specfile import chain_summary, load_chain_spec
from .tableaux import castelnuovo_number, count_tableaux_closed_form, enumerate_tableaux

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE, EXIT_UNSUPPORTED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _rationals(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(","))


def _shape_from_args(args, g: int) -> tuple[Partition, dict]:
    if args.shape is not None:
        if any(v is not None for v in (args.r, args.d, args.alpha)):
            raise UsageError("give either --shape or --r/--d/--alpha, not both")
        return Partition(args.shape), {"shape": list(args.shape)}
    if args.r is None or args.d is None:
        raise UsageError("give --shape, or --r and --d (with optional --alpha)")
    alpha = args.alpha if args.alpha is not None else (0,) * (args.r + 1)
    idx = SchubertIndex(args.r, args.d, alpha)
    return schubert_to_partition(g, idx), {"r": args.r, "d": args.d, "alpha": list(alpha)}


def _report(command: str, inputs: dict, result: dict, verdict: str, digest: str | None = None) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "chain_digest": digest,
        "result": result,
        "verdict": verdict,
    }


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_chain_validate(args) -> tuple[dict, int]:
    spec = load_chain_spec(args.spec)
    summary = chain_summary(spec.chain)
    verdict = "pass" if summary["generic"] else "advisory"
    return _report("chain validate", {"spec": args.spec}, summary, verdict, spec.digest), EXIT_OK


def cmd_tableaux(args) -> tuple[dict, int]:
    spec = load_chain_spec(args.spec)
    chain = spec.chain
    shape, echo = _shape_from_args(args, chain.g)
    rows = []
    count = 0
    for t in enumerate_tableaux(shape, chain):
        count += 1
        if args.limit is None or len(rows) < args.limit:
            rows.append(t.as_matrix())
    result = {"shape": list(shape.rows), "count": count, "tableaux": rows}
    generic = is_generic(chain)[0]
    if generic:
        result["closed_form"] = count_tableaux_closed_form(shape, chain.g)
    verdict = "pass" if not generic or result["closed_form"] == count else "fail"
    code = EXIT_OK if verdict == "pass" else EXIT_COUNTEREXAMPLE
    return _report("tableaux", {"spec": args.spec, **echo, "limit": args.limit}, result, verdict, spec.digest), code


def cmd_locus(args) -> tuple[dict, int]:
    spec = load_chain_spec(args.spec)
    chain = spec.chain
    shape, echo = _shape_from_args(args, chain.g)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        locus = bn_locus(shape, chain)
    tori = []
    for T, ts in zip(locus.tori, locus.tableaux):
        entry = T.as_dict()
        entry["tableaux"] = [t.as_matrix() for t in ts]
        if chain.is_rational:
            entry["sample"] = str(sample_point(T, chain))
        tori.append(entry)
    generic = is_generic(chain)[0]
    result = {
        "shape": list(shape.rows),
        "expected_dim": chain.g - shape.size,
        "tori_count": len(locus.tori),
        "dims": sorted(set(locus.dims)),
        "pure": locus.is_pure(),
        "conflicting_tableaux": locus.conflicts,
        "tori": tori,
    }
    verdict = ("pass" if locus.is_pure() else "fail") if generic else "advisory"
    code = EXIT_COUNTEREXAMPLE if verdict == "fail" else EXIT_OK
    return _report("locus", {"spec": args.spec, **echo}, result, verdict, spec.digest), code


def cmd_rank(args) -> tuple[dict, int]:
    spec = load_chain_spec(args.spec)
    xi = ClassCoords(args.xi)
    value = rank_class(xi, args.degree, spec.chain, engine=args.engine)
    inputs = {"spec": args.spec, "xi": list(args.xi), "degree": args.degree, "engine": args.engine}
    return _report("rank", inputs, {"rank": value}, "pass", spec.digest), EXIT_OK


def cmd_verify_pflueger(args) -> tuple[dict, int]:
    spec = load_chain_spec(args.spec)
    chain = spec.chain
    shape, echo = _shape_from_args(args, chain.g)
    grid = cross_validate_grid(shape, chain, args.step, cap=args.cap, force=args.force, engine=args.engine)
    verdict = "pass" if grid.ok else "fail"
    if grid.ok and not is_generic(chain)[0]:
        verdict = "advisory"
    inputs = {"spec": args.spec, **echo, "step": args.step, "engine": args.engine}
    code = EXIT_OK if grid.ok else EXIT_COUNTEREXAMPLE
    return _report("verify pflueger", inputs, grid.as_dict(), verdict, spec.digest), code


def cmd_verify_lifting(args) -> tuple[dict, int]:
    spec = load_chain_spec(args.spec)
    chain = spec.chain
    alpha = args.alpha if args.alpha is not None else (0,) * (args.r + 1)
    ladder = build_ladder(chain.g, args.r, args.d, alpha)
    reports = verify_ladder(ladder, chain)
    ok = all(r.ok for r in reports)
    verdict = "fail" if not ok else ("pass" if is_generic(chain)[0] else "advisory")
    result = {"ladder": ladder.as_dict(), "checks": [r.as_dict() for r in reports]}
    inputs = {"spec": args.spec, "r": args.r, "d": args.d, "alpha": list(alpha)}
    return _report("verify lifting", inputs, result, verdict, spec.digest), EXIT_OK if ok else EXIT_COUNTEREXAMPLE


def cmd_castelnuovo(args) -> tuple[dict, int]:
    rho = brill_noether_number(args.g, args.r, args.d)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        value = castelnuovo_number(args.g, args.r, args.d)
    result = {"value": value, "rho": rho, "enumerative": rho == 0}
    inputs = {"g": args.g, "r": args.r, "d": args.d}
    return _report("castelnuovo", inputs, result, "pass" if rho == 0 else "advisory"), EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="also write the report to this file")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")


def _add_shape(p: argparse.ArgumentParser) -> None:
    p.add_argument("--shape", type=_ints, help="partition rows, bottom row first, e.g. 2,2")
    p.add_argument("--r", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--alpha", type=_ints, help="Schubert index, e.g. 0,1,2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chainbn", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    chain = sub.add_parser("chain", help="chain spec utilities")
    chain_sub = chain.add_subparsers(dest="action", required=True)
    p = chain_sub.add_parser("validate", help="parse a spec and report torsion and genericity")
    p.add_argument("--spec", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_chain_validate)

    p = sub.add_parser("tableaux", help="enumerate displacement tableaux on a shape")
    p.add_argument("--spec", required=True)
    _add_shape(p)
    p.add_argument("--limit", type=int, help="list at most this many tableaux")
    _add_common(p)
    p.set_defaults(func=cmd_tableaux)

    p = sub.add_parser("locus", help="tori of a Brill-Noether locus")
    p.add_argument("--spec", required=True)
    _add_shape(p)
    _add_common(p)
    p.set_defaults(func=cmd_locus)

    p = sub.add_parser("rank", help="rank of a class given in coordinates")
    p.add_argument("--spec", required=True)
    p.add_argument("--xi", type=_rationals, required=True, help="coordinates, e.g. 0,-1 or 1/2,1/3")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--engine", choices=ENGINES, default="metric")
    _add_common(p)
    p.set_defaults(func=cmd_rank)

    verify = sub.add_parser("verify", help="verification suites")
    verify_sub = verify.add_subparsers(dest="suite", required=True)
    p = verify_sub.add_parser("pflueger", help="grid cross-check of the two membership tests")
    p.add_argument("--spec", required=True)
    _add_shape(p)
    p.add_argument("--step", required=True, help="grid step, e.g. 1/2")
    p.add_argument("--cap", type=int, default=DEFAULT_GRID_CAP, help="refuse grids larger than this")
    p.add_argument("--force", action="store_true", help="run even above the grid cap")
    p.add_argument("--engine", choices=ENGINES, default="metric")
    _add_common(p)
    p.set_defaults(func=cmd_verify_pflueger)

    p = verify_sub.add_parser("lifting", help="containment and properness checks along the ladder")
    p.add_argument("--spec", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alpha", type=_ints)
    _add_common(p)
    p.set_defaults(func=cmd_verify_lifting)

    p = sub.add_parser("castelnuovo", help="number of maximal tori when rho = 0")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_castelnuovo)
    return parser


def render(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        report, code = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"chainbn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedInput as exc:
        print(f"chainbn: unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (InvalidInput, ChainError) as exc:
        print(f"chainbn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
    text = render(report)
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    return code


if __name__ == "__main__":
    sys.exit(main())
