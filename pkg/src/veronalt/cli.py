"""Command-line interface: ``veronalt <command> [options]``.

Exit status is 0 on success, 1 when a check-style verdict is false and 2
on usage, parse or cap errors.  Results go to standard output; progress
and errors go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .engine import CapExceededError, algebra, is_identity
from .groups import GroupError, load_group_file
from .identities import variety
from .split import SplitRankError, is_zero_split
from .structure import (
    assoc_nucleus_component,
    center_component,
    d_chain_slice,
    nucleus_component,
    pigeonhole_bound,
    pigeonhole_witness,
)
from .termlang import TermSyntaxError, default_names, format_poly, format_rational, parse_with_names
from .veronese import GeneratorReport, VeroneseConfig, invariant_generators, new_generators

log = logging.getLogger("veronalt.cli")

EXIT_OK, EXIT_FALSE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# -- output


class Output:
    """Result of one command: JSON payload plus a flat table view."""

    def __init__(self, results: dict, header: Sequence[str], rows: List[Sequence], verdict: bool = True):
        self.results = results
        self.header = list(header)
        self.rows = [list(r) for r in rows]
        self.verdict = verdict


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, (list, tuple)):
        return "(" + ",".join(_cell(x) for x in v) + ")"
    return str(v)


def render(fmt: str, command: str, config: dict, out: Output, timings: dict) -> str:
    if fmt == "json":
        doc = {"command": command, "config": config, "results": out.results, "timings": timings}
        return json.dumps(doc, indent=2) + "\n"
    cells = [[_cell(v) for v in row] for row in out.rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(out.header)
        w.writerows(cells)
        return buf.getvalue()
    widths = [len(h) for h in out.header]
    for row in cells:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(out.header, widths)).rstrip()]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"


# -- helpers


def _ids(args):
    return variety(args.variety)


def _rank(args, default: int = 2) -> int:
    return args.rank if args.rank is not None else default


def _parse_expr(args) -> Tuple[object, List[str], int]:
    if args.names:
        from .termlang import parse

        names = [n.strip() for n in args.names.split(",") if n.strip()]
        poly = parse(args.expr, names=names)
    else:
        poly, names = parse_with_names(args.expr)
    rank = args.rank if args.rank is not None else max(len(names), 1)
    if poly.max_generator() >= rank:
        raise UsageError(f"expression uses {poly.max_generator() + 1} generators but --rank is {rank}")
    return poly, names, rank


def _report(report: GeneratorReport, rank: int, show: bool, ids, cap) -> Tuple[list, list]:
    alg = algebra(ids, rank, cap)
    names = default_names(rank)
    degrees, rows = [], []
    for r in report.degrees:
        entry = {
            "degree": r.degree,
            "dim_target": r.dim_target,
            "dim_generated": r.dim_generated,
            "new_count": r.new_count,
        }
        if show:
            polys = []
            for parts in r.new_basis:
                total = None
                for nv in parts:
                    p = alg.to_poly((nv.multidegree, dict(nv.coords)))
                    total = p if total is None else total + p
                polys.append(format_poly(total, names))
            entry["new_generators"] = polys
        degrees.append(entry)
        rows.append([r.degree, r.dim_target, r.dim_generated, r.new_count])
    return degrees, rows


def _slice_output(kind: str, sub, extra: dict) -> Output:
    comps, rows = [], []
    for m in sorted(sub.components):
        s = sub.components[m]
        comps.append({"multidegree": list(m), "dim": s.dim, "ambient": s.ambient})
        rows.append([m, s.dim, s.ambient])
    results = dict(extra)
    results.update({"kind": kind, "dim": sub.dim, "components": comps})
    return Output(results, ["multidegree", "dim", "ambient"], rows)


# -- commands


def cmd_dims(args) -> Output:
    ids = _ids(args)
    rank = _rank(args)
    alg = algebra(ids, rank, args.cap)
    top = args.max_degree if args.max_degree is not None else alg.cap
    alg.check_cap(top, args.cap)
    dims, rows = [], []
    for d in range(1, top + 1):
        comps = alg.build_degree(d, args.threads, args.cap)
        log.info("degree %d built", d)
        if args.by_multidegree:
            for comp in comps:
                dims.append({"degree": d, "multidegree": list(comp.m), "dim": comp.dim})
                rows.append([d, comp.m, comp.dim])
        else:
            total = sum(c.dim for c in comps)
            dims.append({"degree": d, "dim": total})
            rows.append([d, total])
    header = ["degree", "multidegree", "dim"] if args.by_multidegree else ["degree", "dim"]
    return Output({"rank": rank, "max_degree": top, "dims": dims}, header, rows)


def cmd_check(args) -> Output:
    ids = _ids(args)
    poly, names, rank = _parse_expr(args)
    ok = is_identity(ids, poly, rank=rank, cap=args.cap)
    results = {"expression": args.expr, "names": names, "rank": rank, "identity": ok}
    return Output(results, ["expression", "identity"], [[args.expr, ok]], verdict=ok)


def cmd_nf(args) -> Output:
    ids = _ids(args)
    poly, names, rank = _parse_expr(args)
    alg = algebra(ids, rank, args.cap)
    for d in poly.degrees():
        alg.check_cap(d, args.cap)
    nf = alg.normal_form(poly)
    comps, rows = [], []
    total = None
    for m in sorted(nf):
        v = nf[m]
        p = alg.to_poly((m, v))
        total = p if total is None else total + p
        text = format_poly(p, names)
        comps.append({
            "multidegree": list(m),
            "coords": [[i, format_rational(v[i])] for i in sorted(v)],
            "normal_form": text,
        })
        rows.append([m, text])
    whole = format_poly(total, names) if total is not None else "0"
    results = {"expression": args.expr, "names": names, "rank": rank, "normal_form": whole, "components": comps}
    if not rows:
        rows.append([None, "0"])
    return Output(results, ["multidegree", "normal_form"], rows)


def cmd_veronese(args) -> Output:
    ids = _ids(args)
    rank = _rank(args)
    top = args.max_degree if args.max_degree is not None else algebra(ids, rank, args.cap).cap
    cfg = VeroneseConfig(args.n, ids, rank, top, args.cap)
    report = new_generators(cfg, threads=args.threads)
    degrees, rows = _report(report, rank, args.show_generators, ids, args.cap)
    results = {"n": args.n, "rank": rank, "max_degree": top, "degrees": degrees}
    return Output(results, ["degree", "dim_target", "dim_generated", "new_count"], rows)


def cmd_invariants(args) -> Output:
    ids = _ids(args)
    action = load_group_file(args.group_file, bound=args.bound)
    rank = action.rank
    if args.rank is not None and args.rank != rank:
        raise UsageError(f"group matrices are {rank}x{rank} but --rank is {args.rank}")
    top = args.max_degree if args.max_degree is not None else algebra(ids, rank, args.cap).cap
    report = invariant_generators(action, ids, top, cap=args.cap)
    degrees, rows = _report(report, rank, args.show_generators, ids, args.cap)
    results = {"group_order": action.order, "rank": rank, "max_degree": top, "degrees": degrees}
    return Output(results, ["degree", "dim_target", "dim_generated", "new_count"], rows)


def cmd_nucleus(args) -> Output:
    ids = _ids(args)
    rank = _rank(args, 3)
    fn = assoc_nucleus_component if args.associative else nucleus_component
    sub = fn(ids, rank, args.degree, args.cutoff, args.cap)
    kind = "assoc_nucleus" if args.associative else "nucleus"
    return _slice_output(kind, sub, {"rank": rank, "degree": args.degree, "cutoff": args.cutoff})


def cmd_center(args) -> Output:
    ids = _ids(args)
    rank = _rank(args, 3)
    sub = center_component(ids, rank, args.degree, args.cutoff, args.cap)
    return _slice_output("center", sub, {"rank": rank, "degree": args.degree, "cutoff": args.cutoff})


def cmd_dchain(args) -> Output:
    ids = _ids(args)
    rank = _rank(args, 3)
    if args.index < 0:
        raise UsageError("chain index must be nonnegative")
    sub = d_chain_slice(ids, rank, args.index, args.degree, args.cap)
    return _slice_output("d_chain", sub, {"rank": rank, "index": args.index, "degree": args.degree})


def cmd_split_check(args) -> Output:
    poly, names, rank = _parse_expr(args)
    zero = is_zero_split(poly)
    results = {"expression": args.expr, "names": names, "zero": zero}
    return Output(results, ["expression", "zero"], [[args.expr, zero]], verdict=zero)


def cmd_pigeonhole(args) -> Output:
    w = pigeonhole_witness(args.n, args.residues)
    results = {"n": args.n, "residues": list(args.residues), "bound": pigeonhole_bound(args.n), "witness": w}
    return Output(results, ["n", "count", "bound", "witness"], [[args.n, len(args.residues), pigeonhole_bound(args.n), w]], verdict=w is not None)


COMMANDS = {
    "dims": cmd_dims,
    "check": cmd_check,
    "nf": cmd_nf,
    "veronese": cmd_veronese,
    "invariants": cmd_invariants,
    "nucleus": cmd_nucleus,
    "center": cmd_center,
    "dchain": cmd_dchain,
    "split-check": cmd_split_check,
    "pigeonhole": cmd_pigeonhole,
}


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--variety", default="alt", help="alt | assoc | ralt | nonassoc | custom:<path>")
    common.add_argument("--rank", type=_positive, default=None)
    common.add_argument("--cap", type=_positive, default=None, help="total-degree cap (defaults by rank: 8, 6, 5)")
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--timings", action="store_true", help="report wall-clock timings in JSON output")
    common.add_argument("-q", "--quiet", action="store_true", help="suppress progress on stderr")

    p = _Parser(prog="veronalt", description="Normal forms and subalgebras of relatively free algebras.")
    p.add_argument("--version", action="version", version=f"veronalt {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("dims", parents=[common], help="dimension table by degree")
    s.add_argument("--max-degree", type=_positive)
    s.add_argument("--by-multidegree", action="store_true")

    for name, text in (("check", "is the expression an identity of the variety"), ("nf", "normal form")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("expr")
        s.add_argument("--names", help="comma-separated generator names (default: inferred)")

    s = sub.add_parser("veronese", parents=[common], help="new generators of the Veronese subalgebra")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--max-degree", type=_positive)
    s.add_argument("--show-generators", action="store_true")

    s = sub.add_parser("invariants", parents=[common], help="new generators of an invariant subalgebra")
    s.add_argument("group_file")
    s.add_argument("--max-degree", type=_positive)
    s.add_argument("--bound", type=_positive, default=10000, help="group closure size bound")
    s.add_argument("--show-generators", action="store_true")

    for name, text in (("nucleus", "truncated nucleus"), ("center", "truncated center")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("-d", "--degree", type=_positive, required=True)
        s.add_argument("-D", "--cutoff", type=_positive, required=True)
        if name == "nucleus":
            s.add_argument("--associative", action="store_true", help="largest ideal inside the nucleus")

    s = sub.add_parser("dchain", parents=[common], help="dimensions of D_i")
    s.add_argument("-i", "--index", type=int, required=True)
    s.add_argument("-d", "--degree", type=_positive, required=True)

    s = sub.add_parser("split-check", parents=[common], help="zero test in the split representation (rank <= 3)")
    s.add_argument("expr")
    s.add_argument("--names")

    s = sub.add_parser("pigeonhole", parents=[common], help="residue class holding n of the residues")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("residues", type=int, nargs="*")
    return p


def _config(args) -> dict:
    cfg = {
        "variety": args.variety,
        "rank": args.rank,
        "cap": args.cap,
        "format": args.format,
        "seed": args.seed,
        "threads": args.threads,
    }
    skip = set(cfg) | {"command", "quiet", "timings"}
    for k, v in sorted(vars(args).items()):
        if k not in skip:
            cfg[k] = v
    return cfg


def _setup_logging(quiet: bool) -> None:
    logger = logging.getLogger("veronalt")
    for h in [h for h in logger.handlers if getattr(h, "veronalt_cli", False)]:
        logger.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.veronalt_cli = True
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(logging.WARNING if quiet else logging.INFO)
    logger.propagate = False


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    _setup_logging(args.quiet)
    start = time.perf_counter()
    try:
        out = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"veronalt {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceededError as exc:
        print(f"veronalt {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TermSyntaxError, SplitRankError, GroupError, ValueError, OSError) as exc:
        print(f"veronalt {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    timings = {"total_seconds": round(time.perf_counter() - start, 3)} if args.timings else {}
    sys.stdout.write(render(args.format, args.command, _config(args), out, timings))
    sys.stdout.flush()
    return EXIT_OK if out.verdict else EXIT_FALSE


if __name__ == "__main__":
    sys.exit(main())
