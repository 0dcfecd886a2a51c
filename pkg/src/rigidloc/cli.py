"""Command-line entry point.

Every flag can also be set through an environment variable named
RIGIDLOC_<FLAG>, e.g. RIGIDLOC_MAX_ORDER=1000000 or RIGIDLOC_CROSS_CHECK=1.
Flags given on the command line win. Exit status: 0 for a decisive answer,
2 for Undecided, 1 for errors (including a verdict that contradicts --expect).
"""

from __future__ import annotations

import argparse
import os
import sys

from . import rigid_graph as rg
from .atlas import Atlas, load_atlas, load_bundled, validate_record
from .errors import GuardExceeded, ParseError, RigidLocError
from .fp import DEFAULT_MAX_COSETS
from .localization import ROUTES, UNDECIDED, Options, is_localization, resolve
from .search import MAX_CHAIN_ORDER, MAX_TARGET_DEGREE

ENV_PREFIX = "RIGIDLOC_"
EXIT_OK, EXIT_ERROR, EXIT_UNDECIDED = 0, 1, 2


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _truthy(text) -> bool:
    return str(text).lower() in ("1", "true", "yes", "on")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--atlas", default=_env("atlas"), help="atlas file (default: bundled)")
    common.add_argument("--edges", default=_env("edges"), help="edge file (default: bundled)")
    common.add_argument("--max-order", type=_positive,
                        default=_positive(_env("max_order", str(MAX_CHAIN_ORDER))))
    common.add_argument("--max-degree", type=_positive,
                        default=_positive(_env("max_degree", str(MAX_TARGET_DEGREE))))
    common.add_argument("--max-cosets", type=_positive,
                        default=_positive(_env("max_cosets", str(DEFAULT_MAX_COSETS))))
    common.add_argument("--cross-check", action="store_true",
                        default=_truthy(_env("cross_check", "0")))
    common.add_argument("--format", choices=("text", "dot"), default=_env("format", "text"))

    p = argparse.ArgumentParser(prog="rigidloc", description="Localizations of finite simple groups.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="decide whether H -> G is a localization")
    v.add_argument("source")
    v.add_argument("target")
    v.add_argument("--route", choices=("auto",) + ROUTES, default=_env("route", "auto"))
    v.add_argument("--expect", choices=("Localization", "NotLocalization", "Undecided"))
    v.add_argument("--details", action="store_true", help="print the full criterion report")

    e = sub.add_parser("embed", parents=[common], help="coset representations of a group")
    e.add_argument("group")
    e.add_argument("--subgroup", help="label of a stored subgroup (default: all)")

    a = sub.add_parser("aut", parents=[common], help="automorphism group order and realization")
    a.add_argument("group")

    c = sub.add_parser("components", parents=[common], help="rigid components of the edge set")
    c.add_argument("--verified-only", action="store_true")

    pa = sub.add_parser("path", parents=[common], help="zigzag of localizations between two groups")
    pa.add_argument("start")
    pa.add_argument("end")
    pa.add_argument("--all-edges", action="store_true",
                    help="also use the further examples, not just the main component edges")

    sub.add_parser("validate-atlas", parents=[common], help="load and validate an atlas file")
    sub.add_parser("export", parents=[common], help="write the edge set as text or DOT")
    return p


def _atlas(args) -> Atlas:
    return load_bundled(args.atlas) if args.atlas else load_bundled()


def _graph(args) -> rg.RigidGraph:
    return rg.load_graph(args.edges) if args.edges else rg.bundled_graph()


def _cmd_verify(args, out) -> int:
    options = Options(route=args.route, cross_check=args.cross_check, max_order=args.max_order,
                      max_degree=args.max_degree, max_cosets=args.max_cosets)
    v = is_localization(args.source, args.target, options, _atlas(args))
    head = v.value
    if v.reason.endswith("(criterion+oracle agree)"):
        head += " (criterion+oracle agree)"
    out.write(f"{args.source} -> {args.target}: {head}\n")
    out.write(f"reason {v.reason}\n")
    if v.route:
        out.write(f"route {v.route}\n")
    if args.details and v.report is not None:
        out.write(v.report.to_text())
    if args.expect and v.value != args.expect:
        out.write(f"expected {args.expect}\n")
        return EXIT_ERROR
    return EXIT_UNDECIDED if v.value == UNDECIDED else EXIT_OK


def _cmd_embed(args, out) -> int:
    from .embed import MIN_DEGREE, PASS, check_largest_maximal, coset_embedding
    H = resolve(_atlas(args), args.group)
    labels = [args.subgroup] if args.subgroup else sorted(H.subgroups)
    if not labels:
        raise RigidLocError(f"{H.name} has no stored subgroups")
    status = EXIT_OK
    for label in labels:
        words = H.subgroup_words(label)
        emb = coset_embedding(H, words, args.max_cosets)
        if emb.degree >= MIN_DEGREE:
            emb = check_largest_maximal(H, words, args.max_cosets)
        out.write(f"subgroup {label}\n")
        out.write(emb.to_text())
        for k in sorted(emb.witnesses):
            out.write(f"witness {k} {emb.witnesses[k]}\n")
        if any(c != PASS for c in emb.conditions.values()):
            status = EXIT_UNDECIDED
    return status


def _cmd_aut(args, out) -> int:
    from .aut import aut_order, aut_realization
    G = resolve(_atlas(args), args.group)
    order = aut_order(G)
    out.write(f"group {G.name}\norder {G.order()}\naut_order {order.value} {order.tag}\n"
              f"method {order.method}\nout_order {order.value // G.order()}\n")
    if order.tag != "derived":
        return EXIT_UNDECIDED
    rep = aut_realization(G, order)
    out.write(f"realization {rep.mode} degree {rep.realization.degree}\n")
    for k in sorted(rep.certificate):
        out.write(f"certificate {k} {rep.certificate[k]}\n")
    return EXIT_OK


def _cmd_components(args, out) -> int:
    g = _graph(args)
    comps = rg.components(g, "verified_only" if args.verified_only else "all")
    out.write(f"{len(comps)} components\n")
    for block in comps:
        out.write(f"{block[0]}: {' '.join(block)}\n")
    return EXIT_OK


def _cmd_path(args, out) -> int:
    g = _graph(args)
    steps = rg.zigzag_path(g, args.start, args.end, "all" if args.all_edges else "main")
    if steps is None:
        out.write("none\n")
        return EXIT_OK
    out.write(rg.render_path(steps, g.canonical(args.start)) + "\n")
    for s in steps:
        arrow = "->" if s.forward else "<-"
        out.write(f"  {s.start} {arrow} {s.end} {s.edge.status} {s.edge.ref}"
                  + (f" ({s.weight} steps)" if s.weight > 1 else "") + "\n")
    return EXIT_OK


def _cmd_validate(args, out) -> int:
    records = load_atlas(args.atlas) if args.atlas else list(load_bundled())
    for r in records:
        validate_record(r)
        kind = "stub" if r.is_stub else f"degree {r.degree}"
        out.write(f"{r.name} {kind} order {r.order()} simplicity {r.simplicity_status}\n")
    out.write(f"{len(records)} records ok\n")
    return EXIT_OK


def _cmd_export(args, out) -> int:
    data = rg.export(_graph(args), "dot" if args.format == "dot" else "structured")
    out.write(data.decode())
    return EXIT_OK


_HANDLERS = {"verify": _cmd_verify, "embed": _cmd_embed, "aut": _cmd_aut,
             "components": _cmd_components, "path": _cmd_path,
             "validate-atlas": _cmd_validate, "export": _cmd_export}


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        parser = build_parser()
    except (argparse.ArgumentTypeError, ValueError) as e:
        sys.stderr.write(f"error (environment): {e}\n")
        return EXIT_ERROR
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args, out)
    except GuardExceeded as e:
        out.write(f"Undecided: guard: {e}\n")
        return EXIT_UNDECIDED
    except (RigidLocError, ParseError, OSError, KeyError, ValueError) as e:
        sys.stderr.write(f"error ({args.command}): {e}\n")
        return EXIT_ERROR


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
