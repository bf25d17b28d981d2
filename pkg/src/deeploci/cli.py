"""Command-line entry point: ``python3 -m deeploci <command> ...``."""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

from .braid_matrix import (
    coordinate_weights,
    format_point,
    in_braid_variety,
    in_double_bs,
    is_free_point,
    parse_point,
    point_stabilizer,
)
from .braids import BraidWord, demazure_product, is_reduced, length, parse_word
from .chart_finder import (
    find_chart,
    find_chart_two_strand,
    sample_chart_point,
    sample_deep_point,
    sample_two_strand_point,
)
from .cluster import amalgamation_quiver, aut_group, finite_type_classify, rank_flags
from .errors import DomainError
from .flags import chain_in_braid_variety, chain_in_double_bs, point_to_chain
from .loci import (
    deep_locus_finite_type,
    deep_locus_two_strand,
    deep_locus_xab,
    stabilizer_components_bs,
    t_stabilizer_components_braid,
)
from .weave import complete_weave, propagate


class UsageError(Exception):
    pass


def _word(args):
    try:
        return parse_word(args.word, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _point(text: str):
    try:
        return parse_point(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad point {text!r}: {exc}") from exc


def _emit(args, payload: dict, text: str) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) if args.json else text


def _bool(x: bool) -> str:
    return "true" if x else "false"


def _map(fn: Callable, items: Sequence, jobs: int) -> list:
    """Ordered map, optionally across worker processes."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# Commands


def cmd_demazure(args) -> str:
    beta = _word(args)
    d = demazure_product(beta)
    payload = {"demazure": list(d), "length": length(d), "word_reduced": is_reduced(beta)}
    return _emit(args, payload, " ".join(map(str, d)))


def cmd_weave(args) -> str:
    beta = _word(args)
    weave = complete_weave(beta, args.strategy, random.Random(args.rng_seed))
    if args.dot:
        return weave.to_dot()
    payload = {
        "top": list(beta.letters),
        "moves": [str(m) for m in weave.moves],
        "bottom": list(weave.bottom.letters),
        "trivalent": weave.trivalent_count,
    }
    lines = [weave.to_text()] if weave.moves else []
    if args.point is not None:
        trace = propagate(weave, _point(args.point))
        payload["bottom_point"] = format_point(trace.bottom)
        payload["s_variables"] = format_point(trace.s_variables)
        lines.append("bottom: " + ", ".join(payload["bottom_point"]))
        lines.append("s: " + ", ".join(payload["s_variables"]))
    return _emit(args, payload, "\n".join(lines))


def cmd_quiver(args) -> str:
    beta = _word(args)
    Q = amalgamation_quiver(beta)
    if args.dot:
        return Q.to_dot()
    B = Q.exchange_matrix()
    label = finite_type_classify(Q, args.depth_limit)
    aut = aut_group(B)
    payload = dict(Q.to_json(), type=label, aut=aut.to_json(), **rank_flags(B))
    text = "\n".join(
        [f"{u} -> {v}" + (f" x{m}" if m > 1 else "") for u, v, m in Q.arrows]
        + [
            "frozen: " + " ".join(map(str, Q.frozen)),
            f"type: {label}",
            f"aut: rank {aut.torus_rank}, torsion {list(aut.torsion)}",
        ]
    )
    return _emit(args, payload, text)


def cmd_membership(args) -> str:
    beta = _word(args)
    p = _point(args.point)
    x = in_braid_variety(beta, p)
    bs = in_double_bs(beta, p)
    payload = {"in_braid_variety": x, "in_double_bs": bs}
    if args.flags:
        chain = point_to_chain(beta, p)
        payload["flag_braid_variety"] = chain_in_braid_variety(chain)
        payload["flag_double_bs"] = chain_in_double_bs(chain)
    lines = [f"in X(beta): {_bool(x)}"]
    if args.bs:
        lines.append(f"in BS(beta): {_bool(bs)}")
    return _emit(args, payload, "\n".join(lines))


def cmd_weights(args) -> str:
    beta = _word(args)
    ws = coordinate_weights(beta)
    return _emit(args, {"weights": [list(w) for w in ws]}, "\n".join(" ".join(map(str, w)) for w in ws))


def cmd_stabilizer(args) -> str:
    beta = _word(args)
    if args.point is None:
        comps = (
            t_stabilizer_components_braid(beta) if args.braid else stabilizer_components_bs(beta)
        )
        payload = {"components": [c.to_json() for c in comps]}
        text = "\n".join(
            f"{c.partition}  dim {c.dimension}" + ("  (empty)" if c.empty else "")
            + (f"  {c.dynkin}" if c.dynkin else "")
            for c in comps
        ) or "no components"
        return _emit(args, payload, text)
    p = _point(args.point)
    wit = point_stabilizer(beta, p)
    payload = dict(wit.to_json(), free=is_free_point(beta, p))
    return _emit(args, payload, f"{wit.partition}  rank {wit.rank}")


def cmd_loci(args) -> str:
    if args.family == "xab":
        report = deep_locus_xab(args.a, args.b)
    elif args.family == "two-strand":
        report = deep_locus_two_strand(args.ell)
    else:
        report = deep_locus_finite_type(args.label, args.rank)
    payload = report.to_json()
    if report.empty:
        text = "empty"
    else:
        text = "\n".join(
            f"{c['dynkin']} frozen {c['frozen']} dim {c['dimension']}" for c in report.components
        )
        for it in report.intersections:
            text += f"\nC{it['pair'][0] + 1} & C{it['pair'][1] + 1}: {it['kind']}"
    return _emit(args, payload, text)


def _chart_job(job):
    kind, params, p = job
    wit = find_chart_two_strand(params[0], p) if kind == "two-strand" else find_chart(*params, p)
    return wit.to_json()


def cmd_chart_find(args) -> str:
    points = [_point(t) for t in args.point]
    if not points:
        raise UsageError("at least one --point is required")
    if args.family == "two-strand":
        jobs = [("two-strand", (args.ell,), p) for p in points]
    else:
        jobs = [("xab", (args.a, args.b), p) for p in points]
    results = _map(_chart_job, jobs, args.jobs)
    if args.json:
        return json.dumps(results if len(results) > 1 else results[0], indent=2, sort_keys=True)
    lines = []
    for r in results:
        if r["kind"] == "chart":
            lines.append(f"chart: {len(r['certificate']['stages'])} stages")
        else:
            lines.append(f"stabilizer: {r['stabilizer']['partition']}")
    return "\n".join(lines)


def _sample_job(job):
    kind, params, seed = job
    if kind == "chart":
        n, letters, strategy = params
        return format_point(sample_chart_point(BraidWord(n, letters), seed, strategy))
    if kind == "deep":
        return format_point(sample_deep_point(*params, seed=seed))
    return format_point(sample_two_strand_point(params[0], seed))


def cmd_sample(args) -> str:
    base = random.Random(args.rng_seed)
    seeds = [base.randrange(2**63) for _ in range(args.count)]
    if args.family == "chart":
        beta = _word(args)
        jobs = [("chart", (beta.n, beta.letters, args.strategy), s) for s in seeds]
    elif args.family == "deep":
        jobs = [("deep", (args.a, args.b), s) for s in seeds]
    else:
        jobs = [("two-strand", (args.ell,), s) for s in seeds]
    points = _map(_sample_job, jobs, args.jobs)
    return _emit(args, {"points": points}, "\n".join(", ".join(p) for p in points))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="number of strands")
    common.add_argument("--json", action="store_true")
    common.add_argument("--dot", action="store_true")
    common.add_argument("--rng-seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--depth-limit", type=int, default=12)

    parser = argparse.ArgumentParser(prog="deeploci", description="Braid varieties, weaves and deep loci.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("demazure", parents=[common], help="Demazure product of a word")
    p.add_argument("word")
    p.set_defaults(func=cmd_demazure)

    p = sub.add_parser("weave", parents=[common], help="complete Demazure weave of a word")
    p.add_argument("word")
    p.add_argument("--strategy", choices=["leftmost", "random"], default="leftmost")
    p.add_argument("--point", default=None, help="propagate this point through the weave")
    p.set_defaults(func=cmd_weave)

    p = sub.add_parser("quiver", parents=[common], help="amalgamation quiver of a word")
    p.add_argument("word")
    p.set_defaults(func=cmd_quiver)

    p = sub.add_parser("membership", parents=[common], help="test X(beta) and BS(beta) membership")
    p.add_argument("word")
    p.add_argument("--point", required=True)
    p.add_argument("--bs", action="store_true", help="also report BS(beta) membership")
    p.add_argument("--flags", action="store_true", help="include the flag-chain route in JSON")
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("weights", parents=[common], help="torus weights of the coordinates")
    p.add_argument("word")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("stabilizer", parents=[common], help="point stabilizer or stabilizer components")
    p.add_argument("word")
    p.add_argument("--point", default=None)
    p.add_argument("--braid", action="store_true", help="braid-variety components instead of BS")
    p.set_defaults(func=cmd_stabilizer)

    loci = sub.add_parser("loci", help="deep locus reports").add_subparsers(dest="family", required=True)
    p = loci.add_parser("xab", parents=[common])
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p = loci.add_parser("two-strand", parents=[common])
    p.add_argument("ell", type=int)
    p = loci.add_parser("finite", parents=[common])
    p.add_argument("label", help="A, D, E6, E7 or E8")
    p.add_argument("rank", type=int, nargs="?", default=None)
    for p in loci.choices.values():
        p.set_defaults(func=cmd_loci)

    chart = sub.add_parser("chart-find", help="certify chart membership of points").add_subparsers(
        dest="family", required=True
    )
    p = chart.add_parser("xab", parents=[common])
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p = chart.add_parser("two-strand", parents=[common])
    p.add_argument("ell", type=int)
    for p in chart.choices.values():
        p.add_argument("--point", action="append", default=[], help="repeat for a batch")
        p.set_defaults(func=cmd_chart_find)

    sample = sub.add_parser("sample", help="sample chart, deep or two-strand points").add_subparsers(
        dest="family", required=True
    )
    p = sample.add_parser("chart", parents=[common])
    p.add_argument("word")
    p.add_argument("--strategy", choices=["leftmost", "random"], default="leftmost")
    p = sample.add_parser("deep", parents=[common])
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p = sample.add_parser("two-strand", parents=[common])
    p.add_argument("ell", type=int)
    for p in sample.choices.values():
        p.add_argument("--count", type=int, default=1)
        p.set_defaults(func=cmd_sample)
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = args.func(args)
    except DomainError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return 1
    except (UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=err)
        return 2
    if text:
        print(text, file=out)
    return 0


def main() -> None:
    sys.exit(run())
