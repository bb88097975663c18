"""Command-line interface: ``rc generate | apply | virtualize | verify-paper | properties``."""
from __future__ import annotations

import argparse
import json
import random
import sys

from .cartan import CartanError, build_cartan, canonicalize_weight, format_weight, parse_weight
from .graph import BudgetExceeded, DEFAULT_BUDGET, generate, to_dot, to_json
from .kashiwara import apply_string, epsilon_vector, parse_ops, phi_vector
from .rigged import DecodeError, decode, encode, highest_weight_empty, horizontal_display, infinity_empty, weight
from .virtualization import VirtualizationError, lookup_folding, virtualize

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _start_element(args):
    try:
        datum = build_cartan(args.type)
    except CartanError as exc:
        raise UsageError(str(exc)) from None
    if args.hw is not None:
        try:
            lam = parse_weight(args.hw, datum)
            return highest_weight_empty(datum, lam)
        except (ValueError, CartanError) as exc:
            raise UsageError(f"bad weight {args.hw!r}: {exc}") from None
    return infinity_empty(datum)


def _weight_text(rc) -> str:
    w = weight(rc)
    if rc.datum.is_finite:
        w = canonicalize_weight(rc.datum, w)
    return format_weight(w)


def describe(rc) -> str:
    """Horizontal display followed by weight, epsilon and phi."""
    return "\n".join([
        horizontal_display(rc),
        f"wt: {_weight_text(rc)}",
        f"epsilon: {list(epsilon_vector(rc))}",
        f"phi: {list(phi_vector(rc))}",
    ])


def _graph_text(graph) -> str:
    lines = [f"nodes: {len(graph.nodes)}", f"edges: {len(graph.edges)}", f"exhaustive: {graph.exhaustive}"]
    for k, x in enumerate(graph.elements):
        lines.append(f"[{k}]")
        lines.append(horizontal_display(x.rc) if hasattr(x, "rc") else repr(x))
    for u, a, v in graph.edges:
        lines.append(f"{u} -{a}-> {v}")
    return "\n".join(lines)


def cmd_generate(args, out) -> int:
    start = _start_element(args)
    depth = None if args.depth is None or args.depth < 0 else args.depth
    try:
        graph = generate(start, depth, budget=args.budget)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if args.format == "dot":
        out.write(to_dot(graph))
    elif args.format == "json":
        out.write(to_json(graph) + "\n")
    else:
        out.write(_graph_text(graph) + "\n")
    return EXIT_OK


def cmd_apply(args, out) -> int:
    start = _start_element(args)
    try:
        ops = parse_ops(args.ops, start.datum)
    except (ValueError, CartanError) as exc:
        raise UsageError(f"bad operator list {args.ops!r}: {exc}") from None
    rc = apply_string(start, ops)
    if rc is None:
        out.write("null\n")
    elif args.format == "json":
        out.write(json.dumps(encode(rc)) + "\n")
    else:
        out.write(describe(rc) + "\n")
    return EXIT_OK


def _read_element_text(spec: str) -> str:
    if spec == "-":
        return sys.stdin.read()
    if spec.lstrip().startswith("{"):
        return spec
    with open(spec) as fh:
        return fh.read()


def cmd_virtualize(args, out) -> int:
    try:
        fold = lookup_folding(args.folding)
    except VirtualizationError as exc:
        raise UsageError(str(exc)) from None
    try:
        text = _read_element_text(args.element)
        rc = decode(json.loads(text), fold.source)
    except (OSError, json.JSONDecodeError, DecodeError, CartanError, ValueError) as exc:
        raise UsageError(f"bad element: {exc}") from None
    out.write(json.dumps(encode(virtualize(rc, fold))) + "\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from .reference_checks import format_results, run_checks

    results = run_checks()
    out.write(format_results(results) + "\n")
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


def cmd_properties(args, out) -> int:
    """Random walks from the start element checking the crystal axioms."""
    from .properties import crystal_axiom_violations

    start = _start_element(args)
    rng = random.Random(args.seed)
    depth = 5 if args.depth is None else args.depth
    samples = []
    for _ in range(args.samples):
        cur = start
        for _ in range(rng.randint(0, depth)):
            nxt = apply_string(cur, [("f", rng.choice(start.datum.labels))])
            if nxt is None:
                break
            cur = nxt
        samples.append(cur)
    bad = crystal_axiom_violations(samples)
    out.write(f"checked {len(samples)} elements (seed {args.seed}): {len(bad)} violations\n")
    for msg in bad[:20]:
        out.write(f"  {msg}\n")
    return EXIT_OK if not bad else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rc", description="Rigged-configuration crystals.")
    sub = p.add_subparsers(dest="command", required=True)

    def model_flags(sp):
        sp.add_argument("--type", required=True, help='e.g. "A5", "A2~", "A2^2" or "matrix:[[2,-1],[-1,2]]"')
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--inf", action="store_true", help="RC(infinity) (default)")
        g.add_argument("--hw", metavar="WEIGHT", help='highest weight, e.g. "La[0]+2*La[3]"')

    g = sub.add_parser("generate", help="generate a crystal graph")
    model_flags(g)
    g.add_argument("--depth", type=int, default=None, help="lowering steps (omit to run until closed)")
    g.add_argument("--format", choices=["dot", "json", "text"], default="text")
    g.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("apply", help="apply an operator string to the empty element")
    model_flags(a)
    a.add_argument("--ops", required=True, help='e.g. "f4,f2,e3" or "4,2,3"')
    a.add_argument("--format", choices=["text", "json"], default="text")
    a.set_defaults(func=cmd_apply)

    v = sub.add_parser("virtualize", help="virtualize an element under a folding")
    v.add_argument("--folding", required=True, help='e.g. "C2->A3"')
    v.add_argument("--element", required=True, help="element JSON, a file path, or - for stdin")
    v.set_defaults(func=cmd_virtualize)

    r = sub.add_parser("verify-paper", help="run the built-in worked examples")
    r.set_defaults(func=cmd_verify)

    pr = sub.add_parser("properties", help="randomized crystal-axiom checks")
    model_flags(pr)
    pr.add_argument("--depth", type=int, default=None)
    pr.add_argument("--samples", type=int, default=100)
    pr.add_argument("--seed", type=int, default=0)
    pr.set_defaults(func=cmd_properties)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
