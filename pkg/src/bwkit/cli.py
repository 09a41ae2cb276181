"""bwkit command line.

Exit codes: 0 success, 1 a verify check failed, 2 usage error, 3 the
oracle refused an instance as too large.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bounds, catalog, verify
from .errors import BwkitError, TooLarge
from .graph import cartesian_product, coord_of
from .oracle import DEFAULT_CAP, cut_size, default_jobs, exact_bisection_width, search_space


class UsageError(Exception):
    pass


def _dims(text: str) -> list[int]:
    try:
        dims = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--dims expects comma-separated integers, got {text!r}")
    if not dims or any(k < 1 for k in dims):
        raise argparse.ArgumentTypeError(f"--dims expects positive integers, got {text!r}")
    return dims


def _kinds(text: str) -> list[str]:
    return [x.strip().lower() for x in text.split(",") if x.strip()]


def _capacity(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"capacity must be non-negative, got {text!r}")
    return value


def _add_topology(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--topology", choices=catalog.ALL_FAMILIES, required=required)
    p.add_argument("--dims", type=_dims, help="factor sizes k1,k2,... (any order)")
    p.add_argument("--factors", type=_kinds, help="factor kinds per dim for mctp/mcxr, e.g. path,cbt")
    p.add_argument("--k", type=int, help="BCube switch size")
    p.add_argument("--d", type=int, help="BCube dimension count")


def _add_output(p: argparse.ArgumentParser, formats=("text", "json"), default="text") -> None:
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--out", help="write the report to FILE instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bwkit", description="Bisection width of product networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("topo", help="materialize a topology and export it as JSON")
    _add_topology(p)
    _add_output(p, ("json",), "json")

    p = sub.add_parser("bounds", help="lower/upper bounds and closed form")
    _add_topology(p)
    _add_output(p)

    p = sub.add_parser("exact", help="exact bisection width by exhaustive search")
    _add_topology(p)
    p.add_argument("--max-n", type=int, default=DEFAULT_CAP, help="refuse instances with more servers")
    p.add_argument("--budget", type=int, help="refuse instances needing more subsets than this")
    p.add_argument("--jobs", type=int, default=default_jobs())
    _add_output(p)

    p = sub.add_parser("partition", help="constructive bisection and its cut")
    _add_topology(p)
    _add_output(p)

    p = sub.add_parser("bbw", help="bisection bandwidth")
    _add_topology(p)
    p.add_argument("--T", type=_capacity, help="link capacity per direction")
    p.add_argument("--s", type=_capacity, help="switching capacity")
    _add_output(p)

    p = sub.add_parser("table1", help="summary table of bandwidth formulas")
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--T", type=_capacity)
    p.add_argument("--s", type=_capacity)
    _add_output(p, ("md", "csv", "text"), "md")

    p = sub.add_parser("verify", help="check every formula against the oracle on small instances")
    p.add_argument("--max-n", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1)
    _add_output(p)
    return parser


def entry_from_args(args) -> catalog.CatalogEntry:
    name = args.topology
    if name.startswith("bcube"):
        if args.dims is None and (args.k is None or args.d is None):
            raise UsageError(f"--topology {name} needs --k and --d (or --dims)")
        return catalog.entry(name, args.dims or (), k=args.k, d=args.d)
    if args.dims is None:
        raise UsageError(f"--topology {name} needs --dims")
    if name in ("mctp", "mcxr") and args.factors is None:
        raise UsageError(f"--topology {name} needs --factors")
    if args.factors is not None and len(args.factors) != len(args.dims):
        raise UsageError("--factors must list one kind per entry of --dims")
    return catalog.entry(name, args.dims, args.factors)


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2)


def _fmt(x) -> str:
    return str(Fraction(x))


def cmd_topo(args) -> int:
    e = entry_from_args(args)
    _emit(args, cartesian_product(e.spec).to_json(indent=None))
    return 0


def _report_text(rep: catalog.BoundReport) -> str:
    d = rep.to_dict()
    lines = [
        f"{catalog.describe(rep.entry)}",
        f"alpha = {rep.alpha}, Psi(alpha) = {rep.psi}",
        f"lower bound = {d['lower']['rational']} (ceil {d['lower']['ceil']}, {rep.lower.mode}"
        + (", derived extension" if rep.lower.derived_extension else "") + ")",
        f"upper bound = {rep.upper}",
    ]
    cf = d["closed_form"]
    if cf is None:
        lines.append("closed form: none (bounds only)")
    elif isinstance(cf, list):
        lines.append(f"closed form interval: [{cf[0]}, {cf[1]}]")
    else:
        lines.append(f"BW = {cf}")
    if "bbw" in d:
        bbw = d["bbw"]
        lines.append(f"BBW = [{bbw[0]}, {bbw[1]}]" if isinstance(bbw, list) else f"BBW = {bbw}")
    return "\n".join(lines)


def cmd_bounds(args) -> int:
    rep = catalog.report(entry_from_args(args))
    _emit(args, _json(rep.to_dict()) if args.format == "json" else _report_text(rep))
    return 0


def cmd_exact(args) -> int:
    e = entry_from_args(args)
    try:
        if e.spec.n > args.max_n:
            # refuse before materializing
            raise TooLarge(f"{e.spec.n} servers exceeds the oracle cap of {args.max_n}",
                           e.spec.n, search_space(e.spec.n))
        t = cartesian_product(e.spec)
        res = exact_bisection_width(t, budget=args.budget, cap=args.max_n, jobs=args.jobs)
    except TooLarge as exc:
        rep = catalog.report(e)
        lo = _fmt(rep.lower.value)
        if args.format == "json":
            _emit(args, _json({"error": "too_large", "message": str(exc), "n": exc.n,
                               "subsets": exc.subsets, "interval": [lo, rep.upper]}))
        else:
            _emit(args, f"too large for the oracle: {exc}\nBW in [{lo}, {rep.upper}]")
        return 3
    witness = [list(coord_of(e.spec.radices, x)) for x in res.witness.sorted()]
    if args.format == "json":
        _emit(args, _json({
            "width": res.width,
            "witness": list(res.witness.sorted()),
            "witness_coords": witness,
            "subsets_examined": res.subsets_examined,
            "cut_model": res.model.value,
            "dims": list(e.spec.radices),
        }))
    else:
        coords = " ".join("(" + ",".join(map(str, c)) + ")" for c in witness)
        _emit(args, f"BW = {res.width} (witness: {coords})\nsubsets examined: {res.subsets_examined}")
    return 0


def cmd_partition(args) -> int:
    e = entry_from_args(args)
    t = cartesian_product(e.spec)
    part = bounds.constructive_bisection(e.spec)
    cut = cut_size(t, part)
    upper = bounds.upper_bound(e.spec)
    if args.format == "json":
        _emit(args, _json({"members": list(part.sorted()), "size": part.size,
                           "complement_size": part.n - part.size, "cut": cut, "upper": upper,
                           "dims": list(e.spec.radices)}))
    else:
        _emit(args, f"{catalog.describe(e)}\nside size {part.size} (complement {part.n - part.size})\n"
                    f"cut = {cut} (upper bound {upper})\nmembers: {' '.join(map(str, part.sorted()))}")
    return 0


def cmd_bbw(args) -> int:
    e = entry_from_args(args)
    cap = catalog.CapacityModel(args.T, args.s)
    value = catalog.bisection_bandwidth(e, cap)
    out = {"topology": e.name, "dims": list(e.spec.radices)}
    if isinstance(value, tuple):
        out["bbw"] = [_fmt(value[0]), _fmt(value[1])]
    else:
        out["bbw"] = _fmt(value)
    if e.name.startswith("bcube") and args.T is not None and args.s is not None:
        k = e.spec.radices[0]
        out["recommended_models"] = list(cap.bcube_models(k))
        if not out["recommended_models"]:
            # intermediate regime: report both models, recommend neither
            for name in ("bcube-a", "bcube-b"):
                lo, hi = catalog.bisection_bandwidth(catalog.entry(name, k=k, d=e.spec.d), cap)
                out[name] = [_fmt(lo), _fmt(hi)]
    if args.format == "json":
        _emit(args, _json(out))
    else:
        bbw = out["bbw"]
        text = f"BBW = [{bbw[0]}, {bbw[1]}]" if isinstance(bbw, list) else f"BBW = {bbw}"
        if "recommended_models" in out:
            rec = out["recommended_models"]
            text += "\nmodel rule: " + (", ".join(rec) if rec else "neither applies")
            for name in ("bcube-a", "bcube-b"):
                if name in out:
                    text += f"\n{name}: [{out[name][0]}, {out[name][1]}]"
        _emit(args, text)
    return 0


def cmd_table1(args) -> int:
    cap = catalog.CapacityModel(args.T, args.s)
    if (args.k is None) != (args.d is None):
        raise UsageError("--k and --d go together")
    rows = catalog.table1(args.k, args.d, cap)
    render = {"md": catalog.render_markdown, "csv": catalog.render_csv, "text": catalog.render_text}
    _emit(args, render[args.format](rows))
    return 0


def cmd_verify(args) -> int:
    per_family: dict[str, list] = {name: [] for name in catalog.ALL_FAMILIES}
    for c in verify.run(args.max_n, jobs=args.jobs):
        per_family[c.entry.name].append(c)
    all_ok = all(c.ok for checks in per_family.values() for c in checks)
    if args.format == "json":
        _emit(args, _json({
            "max_n": args.max_n,
            "ok": all_ok,
            "families": {
                name: {
                    "instances": len(checks),
                    "failures": [
                        {"dims": list(c.entry.spec.radices), "factors": [f.label() for f in c.entry.spec.factors],
                         "exact": c.exact, "lower": _fmt(c.lower), "upper": c.upper}
                        for c in checks if not c.ok
                    ],
                }
                for name, checks in per_family.items()
            },
        }))
    else:
        lines = []
        for name, checks in per_family.items():
            bad = [c for c in checks if not c.ok]
            lines.append(f"{'PASS' if not bad else 'FAIL'} {name}: {len(checks) - len(bad)}/{len(checks)} instances")
            for c in bad:
                lines.append(f"    {catalog.describe(c.entry)}: exact {c.exact}, "
                             f"bounds [{_fmt(c.lower)}, {c.upper}], closed form {c.closed_form}")
        _emit(args, "\n".join(lines))
    return 0 if all_ok else 1


COMMANDS = {
    "topo": cmd_topo,
    "bounds": cmd_bounds,
    "exact": cmd_exact,
    "partition": cmd_partition,
    "bbw": cmd_bbw,
    "table1": cmd_table1,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, BwkitError, ValueError) as exc:
        parser.error(f"{args.command}: {exc}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
