"""Command-line front end.

Exit codes: 0 success (or the checked property holds), 1 a checked property
is violated, 2 input error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from . import bounds
from .constructions import CoverSpec, build_clique_family, build_cover_family, random_family
from .core import (
    DEFAULT_ENUMERATION_CAP,
    FamilyTuple,
    InputError,
    ProductSpace,
    ResourceError,
    format_family,
    read_family,
)
from .matching import has_rainbow_matching, matching_number
from .montecarlo import (
    averaging_check,
    concentration_run,
    sample_matching,
    write_samples_csv,
)
from .search import max_family_with_matching_cap, max_rainbow_free_tuple, verify_theorem
from .shifting import shift_to_fixpoint
from .spectral import kneser_spectrum, mixing_audit, product_graph_spectrum

log = logging.getLogger("dirprod")

EXIT_OK, EXIT_VIOLATED, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="random seed (default 0)")
    p.add_argument("--trials", type=int, default=d(10000), help="Monte Carlo trials")
    p.add_argument("--cap", type=int, default=d(DEFAULT_ENUMERATION_CAP), help="enumeration cap")
    p.add_argument("--json", action="store_true", default=d(False), help="emit JSON")
    p.add_argument("--quiet", action="store_true", default=d(False), help="only errors on stderr")
    p.add_argument("--threads", type=int, default=d(1), help="worker threads")


FORMULAS = (
    "emc", "product-matching", "product-rainbow", "overlapping-sum", "averaging",
    "composition", "composition-min", "ratio-chain", "rainbow-threshold", "claim1", "intersecting",
)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dirprod", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    def space_args(p, s=True):
        p.add_argument("--n", type=_int_list, required=True, help="comma list n_1,...,n_l")
        p.add_argument("--k", type=_int_list, required=True, help="comma list k_1,...,k_l")
        if s:
            p.add_argument("--s", type=int, required=True)

    p = add("bound", "evaluate a bound formula")
    p.add_argument("--formula", choices=FORMULAS, required=True)
    space_args(p, s=False)
    p.add_argument("--s", type=int)
    p.add_argument("--m", type=int, help="number of families (overlapping-sum)")
    p.add_argument("--total", type=int, help="composition total (composition-min)")

    p = add("construct", "write a family file")
    p.add_argument("--kind", choices=("cover", "clique", "random"), required=True)
    space_args(p, s=False)
    p.add_argument("--s", type=int, help="cover size / clique parameter")
    p.add_argument("--part", type=int, default=1, help="cover part (1-based)")
    p.add_argument("--size", type=int, help="random family size")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")

    p = add("nu", "matching number of a family file")
    p.add_argument("file")
    p.add_argument("--limit", type=int, help="stop once limit + 1 disjoint edges are found")

    p = add("rainbow", "rainbow matching in a tuple of family files")
    p.add_argument("files", nargs="+")

    p = add("shift", "shift a family to a fixpoint")
    p.add_argument("file")
    p.add_argument("--out", help="write the shifted family here")
    p.add_argument("--log", help="write the shift log (JSON lines) here")

    p = add("spectrum", "Kneser / product graph spectrum")
    space_args(p, s=False)

    p = add("mixing", "expander mixing audit of a family file")
    p.add_argument("file")

    p = add("sample", "draw a random m-matching")
    space_args(p, s=False)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--parts", type=_int_list, help="1-based parts to use (default all)")

    p = add("average", "Monte Carlo check of the averaging identity")
    p.add_argument("file")
    p.add_argument("--s", type=int, help="also check the overlapping-sum bound for nu <= s")

    p = add("concentrate", "Monte Carlo concentration run")
    p.add_argument("file")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--csv", help="write raw X samples here")

    p = add("search", "exact extremal search")
    space_args(p)
    p.add_argument("--problem", choices=("matching", "rainbow"), default="matching")
    p.add_argument("--mode", choices=("exhaustive", "bnb"))
    p.add_argument("--shifted", action=argparse.BooleanOptionalAction, default=None,
                   help="restrict to shifted families (default: off for matching, on for rainbow)")

    p = add("verify", "compare exact search with the bound")
    space_args(p)
    p.add_argument("--theorem", choices=("matching", "rainbow"), default="matching")
    p.add_argument("--mode", choices=("exhaustive", "bnb"))
    p.add_argument("--timings", action="store_true", help="include timings in the report")
    return parser


def _space(args) -> ProductSpace:
    return ProductSpace.from_lists(args.n, args.k)


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise InputError(f"--{name} is required here")
    return value


def _family_edges(family) -> list[list[str]]:
    return [[f"{i}:{j}" for i, j in family.space.vertices(e)] for e in family]


def cmd_bound(args):
    f, ns, ks = args.formula, args.n, args.k
    if f in ("emc", "overlapping-sum", "ratio-chain") and len(ns) != 1:
        raise InputError(f"{f} takes a single part")
    if f == "emc":
        rep = bounds.emc_bound(ns[0], ks[0], _need(args, "s")).to_json()
    elif f == "product-matching":
        rep = bounds.product_matching_bound(ns, ks, _need(args, "s")).to_json()
    elif f == "product-rainbow":
        rep = bounds.product_rainbow_bound(ns, ks, _need(args, "s")).to_json()
    elif f == "overlapping-sum":
        rep = bounds.overlapping_sum_bound(ns[0], ks[0], _need(args, "s"), _need(args, "m")).to_json()
    elif f == "averaging":
        rep = bounds.averaging_bound(ns, ks, _need(args, "s")).to_json()
    elif f == "composition":
        rep = bounds.composition_bound(ns, ks, _need(args, "s")).to_json()
    elif f == "composition-min":
        total = args.total if args.total is not None else _need(args, "s")
        value, comp = bounds.composition_min(ns, ks, total)
        rep = {"schema": 1, "formula": f, "value": str(value), "witness": list(comp.x),
               "clamped": comp.clamped, "inputs": {"n": ns, "k": ks, "total": total}}
    elif f == "ratio-chain":
        s = _need(args, "s")
        terms = bounds.ratio_chain(ns[0], ks[0], s)
        links = bounds.check_ratio_inequality(ns[0], ks[0], s)
        rep = {"schema": 1, "formula": f, "terms": [str(t) for t in terms], "links": list(links),
               "inputs": {"n": ns[0], "k": ks[0], "s": s}}
        return rep, (EXIT_OK if all(links) else EXIT_VIOLATED)
    elif f == "rainbow-threshold":
        rep = bounds.rainbow_threshold_bound(ns, ks, _need(args, "s")).to_json()
    elif f == "claim1":
        rep = bounds.claim1_bound(ns, ks, _need(args, "s")).to_json()
    else:
        rep = bounds.intersecting_bound(ns, ks).to_json()
    return rep, EXIT_OK


def cmd_construct(args):
    space = _space(args)
    if args.kind == "cover":
        fam = build_cover_family(space, CoverSpec(args.part, _need(args, "s")), cap=args.cap)
    elif args.kind == "clique":
        fam = build_clique_family(space, _need(args, "s"))
    else:
        fam = random_family(space, _need(args, "size"), args.seed)
    text = format_family(fam)
    if args.out == "-":
        sys.stdout.write(text)
        return None, EXIT_OK
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return {"schema": 1, "kind": args.kind, "size": len(fam), "out": args.out}, EXIT_OK


def cmd_nu(args):
    fam = read_family(args.file)
    value, cert = matching_number(fam, cap=args.limit)
    rep = {"schema": 1, "nu": value, "certificate": cert.to_json()}
    if args.limit is not None:
        rep["capped"] = value > args.limit
    return rep, EXIT_OK


def cmd_rainbow(args):
    fams = FamilyTuple(tuple(read_family(f) for f in args.files))
    found, cert = has_rainbow_matching(fams)
    return {"schema": 1, "s": fams.s, "found": found,
            "certificate": cert.to_json() if cert else None}, EXIT_OK


def cmd_shift(args):
    fam = read_family(args.file)
    shifted, slog = shift_to_fixpoint(fam)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(format_family(shifted))
    if args.log:
        with open(args.log, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(slog.to_jsonl())
    return {"schema": 1, "size": len(shifted), "steps": len(slog),
            "moved": sum(m for _, _, m in slog.steps), "edges": _family_edges(shifted)}, EXIT_OK


def cmd_spectrum(args):
    if len(args.n) == 1:
        if len(args.k) != 1:
            raise InputError("n and k have different lengths")
        rep = kneser_spectrum(args.n[0], args.k[0])
    else:
        rep = product_graph_spectrum(args.n, args.k)
    return rep.to_json(), EXIT_OK


def cmd_mixing(args):
    fam = read_family(args.file)
    audit = mixing_audit(fam.space, fam)
    return audit.to_json(), (EXIT_OK if audit.holds else EXIT_VIOLATED)


def cmd_sample(args):
    space = _space(args)
    edges = sample_matching(space, args.m, args.seed, args.parts)
    return {"schema": 1, "m": args.m, "seed": args.seed,
            "edges": [[f"{i}:{j}" for i, j in space.vertices(e)] for e in edges]}, EXIT_OK


def cmd_average(args):
    rep = averaging_check(read_family(args.file), args.trials, args.seed, args.s, args.threads)
    return rep.to_json(), (EXIT_OK if rep.passed else EXIT_VIOLATED)


def cmd_concentrate(args):
    stats = concentration_run(read_family(args.file), args.s, args.trials, args.seed, args.threads)
    if args.csv:
        write_samples_csv(stats, args.csv)
    return stats.to_json(), (EXIT_OK if stats.passed else EXIT_VIOLATED)


def cmd_search(args):
    space = _space(args)
    if args.problem == "matching":
        mode = args.mode or ("exhaustive" if space.size <= 24 else "bnb")
        res = max_family_with_matching_cap(space, args.s, mode, bool(args.shifted))
        return {"schema": 1, "problem": "matching", "mode": mode, "size": str(res.size),
                "witness": _family_edges(res.witness)}, EXIT_OK
    mode = args.mode or "bnb"
    shifted = True if args.shifted is None else args.shifted
    res = max_rainbow_free_tuple(space, args.s, mode, shifted)
    return {"schema": 1, "problem": "rainbow", "mode": mode, "min_size": str(res.min_size),
            "witness": [_family_edges(f) for f in res.witness]}, EXIT_OK


def cmd_verify(args):
    rep = verify_theorem(_space(args), args.s, args.theorem, args.mode)
    return rep.to_json(timings=args.timings), (EXIT_OK if rep.bound_holds else EXIT_VIOLATED)


COMMANDS = {
    "bound": cmd_bound, "construct": cmd_construct, "nu": cmd_nu, "rainbow": cmd_rainbow,
    "shift": cmd_shift, "spectrum": cmd_spectrum, "mixing": cmd_mixing, "sample": cmd_sample,
    "average": cmd_average, "concentrate": cmd_concentrate, "search": cmd_search,
    "verify": cmd_verify,
}


def _text(rep: dict) -> str:
    lines = []
    for key, value in rep.items():
        if key == "schema":
            continue
        if isinstance(value, (list, dict)):
            value = json.dumps(value)
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.INFO,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        rep, code = COMMANDS[args.command](args)
    except InputError as exc:
        log.error("input error: %s", exc)
        return EXIT_INPUT
    except ResourceError as exc:
        log.error("resource cap: %s", exc)
        return EXIT_RESOURCE
    except (OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    if rep is not None:
        if args.json:
            sys.stdout.write(json.dumps(rep, sort_keys=True) + "\n")
        else:
            sys.stdout.write(_text(rep) + "\n")
    return code


def main() -> None:
    sys.exit(run())
