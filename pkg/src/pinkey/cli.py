"""Command-line entry point.

Subcommands: ``capacity``, ``upper-bound``, ``pack``, ``simulate``,
``validate``.  Text output is human-readable; ``--format structured``
emits one line of versioned JSON with sorted keys, so identical inputs
(and seeds) give byte-identical output.  Rationals are rendered as
``p/q`` strings (plain ``p`` for integers); exact mode never prints
floats.

Exit codes: 0 success, 2 usage or parse error, 3 size-limit, 4 audit
failure, 1 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .audit import audit
from .capacity import solve_capacity
from .errors import (
    AuditFailureError,
    InvalidScaleError,
    ModelFormatError,
    PinkeyError,
    SizeLimitError,
    UnsupportedModeError,
)
from .model import PinModel, TerminalSet, base_scale, format_rational, realize_multigraph
from .modelfile import load_model
from .partitions import best_partition
from .packing import steiner_packing
from .protocol import draw_edge_keys, export_transcript, run_protocol

FORMAT_VERSION = 1

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_SIZE_LIMIT = 3
EXIT_AUDIT = 4


class _UsageError(Exception):
    pass


def _parse_terminals(spec: str | None, model: PinModel) -> TerminalSet:
    if spec is None:
        return TerminalSet.full(model.m)
    try:
        members = tuple(int(part) for part in spec.split(","))
    except ValueError:
        raise _UsageError(f"--set expects comma-separated integers, got {spec!r}")
    try:
        target = TerminalSet(members)
        target.validate_within(model.m)
    except ValueError as exc:
        raise _UsageError(str(exc))
    return target


def _emit(args: argparse.Namespace, report: dict, text_lines: list[str]) -> None:
    if args.format == "structured":
        report["format_version"] = FORMAT_VERSION
        print(json.dumps(report, sort_keys=True, separators=(",", ":")))
    else:
        for line in text_lines:
            print(line)


def _serialize_weights(result) -> list[dict]:
    return [
        {"subset": list(members), "value": format_rational(value)}
        for members, value in result.assignment.support()
    ]


def _cmd_capacity(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    target = _parse_terminals(args.set, model)
    result = solve_capacity(model, target)
    bound, _ = best_partition(model, target)
    tight_expected = len(target) == 2 or len(target) == model.m
    if tight_expected and result.value != bound:
        print(
            f"internal error: capacity {format_rational(result.value)} and "
            f"upper bound {format_rational(bound)} must coincide for this set",
            file=sys.stderr,
        )
        return EXIT_INTERNAL
    report = {
        "command": "capacity",
        "terminals": model.m,
        "set": list(target.members),
        "capacity": format_rational(result.value),
        "upper_bound": format_rational(bound),
        "tight": result.value == bound,
        "optimal_weights": _serialize_weights(result),
    }
    lines = [
        f"capacity C(A) = {format_rational(result.value)}",
        f"upper bound   = {format_rational(bound)}"
        + ("  (tight)" if result.value == bound else ""),
        "optimal subset weights:",
    ]
    for members, value in result.assignment.support():
        lines.append(f"  {{{','.join(map(str, members))}}} -> {format_rational(value)}")
    _emit(args, report, lines)
    return EXIT_OK


def _cmd_upper_bound(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    target = _parse_terminals(args.set, model)
    bound, partition = best_partition(model, target)
    atoms = [list(atom) for atom in partition.atoms()]
    report = {
        "command": "upper-bound",
        "terminals": model.m,
        "set": list(target.members),
        "upper_bound": format_rational(bound),
        "minimizing_partition": atoms,
    }
    lines = [
        f"upper bound = {format_rational(bound)}",
        "minimizing partition: "
        + " | ".join(",".join(map(str, atom)) for atom in atoms),
    ]
    _emit(args, report, lines)
    return EXIT_OK


def _resolve_scale(args: argparse.Namespace, model: PinModel) -> int:
    if args.scale is not None:
        return args.scale
    return base_scale(model)


def _serialize_trees(packing) -> list[list[list[int]]]:
    return [[list(edge) for edge in tree.edges] for tree in packing.trees]


def _cmd_pack(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    target = _parse_terminals(args.set, model)
    scale = _resolve_scale(args, model)
    graph = realize_multigraph(model, scale)
    packing = steiner_packing(graph, target, mode=args.mode)
    rate = Fraction(packing.count, scale)
    report = {
        "command": "pack",
        "terminals": model.m,
        "set": list(target.members),
        "scale": scale,
        "mode": args.mode,
        "edge_total": graph.total_edges(),
        "tree_count": packing.count,
        "rate": format_rational(rate),
        "trees": _serialize_trees(packing),
    }
    lines = [
        f"scale n = {scale}, edges = {graph.total_edges()}",
        f"packed {packing.count} edge-disjoint trees (rate {format_rational(rate)})",
    ]
    for k, tree in enumerate(packing.trees):
        edge_text = " ".join(f"{i}-{j}#{c}" for (i, j, c) in tree.edges)
        lines.append(f"  tree {k}: {edge_text}")
    _emit(args, report, lines)
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    target = _parse_terminals(args.set, model)
    scale = _resolve_scale(args, model)
    graph = realize_multigraph(model, scale)
    packing = steiner_packing(graph, target, mode=args.mode)
    keys = draw_edge_keys(graph, args.seed)
    run = run_protocol(graph, packing, keys, target)
    report_card = audit(run)
    report = {
        "command": "simulate",
        "terminals": model.m,
        "set": list(target.members),
        "scale": scale,
        "mode": args.mode,
        "seed": args.seed,
        "tree_count": packing.count,
        "rate": format_rational(Fraction(packing.count, scale)),
        "edge_total": graph.total_edges(),
        "key_bits": len(run.key_bits),
        "transcript_bits": len(run.transcript),
        "residual_bits": len(run.residual_bits),
        "security_index": format_rational(report_card.security_index),
        "audit_method": report_card.method,
        "recovered": [
            {"terminal": t, "ok": report_card.recoverability[t]}
            for t in sorted(report_card.recoverability)
        ],
        "audit_passed": report_card.passed,
        "trees": _serialize_trees(packing),
        "transcript": [
            {
                "tree": b.tree,
                "terminal": b.terminal,
                "bit": b.bit,
                "support": [run.edge_index(b.support[0]), run.edge_index(b.support[1])],
            }
            for b in run.transcript
        ],
    }
    lines = [
        f"scale n = {scale}, seed = {args.seed}",
        f"key bits |K| = {len(run.key_bits)}, transcript |F| = "
        f"{len(run.transcript)}, residual |K_R| = {len(run.residual_bits)}",
        f"security index s = {format_rational(report_card.security_index)} "
        f"({report_card.method})",
        "recovery: "
        + " ".join(
            f"{t}:{'ok' if ok else 'FAIL'}"
            for t, ok in sorted(report_card.recoverability.items())
        ),
        "transcript:",
    ]
    lines.extend("  " + line for line in export_transcript(run).splitlines())
    _emit(args, report, lines)
    if not report_card.passed:
        print("audit failed", file=sys.stderr)
        return EXIT_AUDIT
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    nonzero = sum(1 for pair in model.pairs() if model.mi(*pair) > 0)
    report = {
        "command": "validate",
        "terminals": model.m,
        "exact": model.exact,
        "pairs_nonzero": nonzero,
        "pmf_pairs": len(model.pmfs),
        "valid": True,
    }
    if model.exact:
        report["base_scale"] = base_scale(model)
    lines = [
        f"model ok: {model.m} terminals, "
        f"{'exact' if model.exact else 'float'} mode, "
        f"{nonzero} correlated pairs"
    ]
    if model.exact:
        lines.append(f"base scale n0 = {report['base_scale']}")
    _emit(args, report, lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pinkey",
        description="Secret-key capacity, tree packing and protocol "
        "simulation for pairwise independent networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, with_set: bool = True) -> None:
        p.add_argument("model", help="path to a JSON model file")
        if with_set:
            p.add_argument(
                "--set",
                help="comma-separated target terminals (default: all)",
            )
        p.add_argument(
            "--format",
            choices=("text", "structured"),
            default="text",
            help="output format (structured = one line of JSON)",
        )

    p = sub.add_parser("capacity", help="exact capacity and upper bound")
    common(p)
    p.set_defaults(func=_cmd_capacity)

    p = sub.add_parser("upper-bound", help="partition upper bound only")
    common(p)
    p.set_defaults(func=_cmd_upper_bound)

    for name, handler in (("pack", _cmd_pack), ("simulate", _cmd_simulate)):
        p = sub.add_parser(
            name,
            help="construct a tree packing"
            + (" and run the key protocol" if name == "simulate" else ""),
        )
        common(p)
        p.add_argument(
            "--scale",
            type=int,
            help="blocklength n (default: the model's base scale)",
        )
        p.add_argument(
            "--mode",
            choices=("exact", "greedy"),
            default="exact",
            help="Steiner packing mode for intermediate target sets",
        )
        if name == "simulate":
            p.add_argument(
                "--seed", type=int, default=0, help="edge-key seed (default 0)"
            )
        p.set_defaults(func=handler)

    p = sub.add_parser("validate", help="check a model file against the schema")
    common(p, with_set=False)
    p.set_defaults(func=_cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (_UsageError, ModelFormatError, UnsupportedModeError,
            InvalidScaleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE_LIMIT
    except AuditFailureError as exc:
        print(f"audit failure: {exc}", file=sys.stderr)
        return EXIT_AUDIT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PinkeyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
