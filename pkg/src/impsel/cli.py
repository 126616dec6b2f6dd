"""Command-line entry point.

One binary, five subcommands:

    impsel run         run the twin-threshold mechanism on a graph file
    impsel plan        plan/validate threshold pairs for a target class
    impsel audit       impartiality / gap / trace audits over a graph class
    impsel partitions  composition table, multiplicities, certificate
    impsel reduce      apply a graph reduction and emit the result

Exit codes: 0 success, 1 an audit found violations (or failed trace checks),
2 usage or input errors.  With --json every report is a single JSON document;
output is deterministic for deterministic inputs and independent of --jobs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .audit import (
    AUDIT_CAP,
    Exhaustive,
    Sampled,
    check_impartiality,
    check_trace_invariants,
    measure_gap,
)
from .graphs import CapExceeded, GraphClassSpec, GraphFormatError, parse_graph, sample_stream
from .mechanisms import MechanismId
from .partitions import (
    build_certificate,
    enumerate_compositions,
    fubini,
    lambda_of,
    reduce_add_inneighbors,
    reduce_add_isolated,
)
from .twin_threshold import (
    ThresholdPair,
    plan_thresholds_general,
    plan_thresholds_k1,
    run_twin_threshold,
    validate_thresholds,
)


def _emit(payload: dict, as_json: bool, lines: list[str]) -> None:
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


def _load_graph(path: str):
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def _outdegree_bound(text: str) -> int | None:
    if text == "unbounded":
        return None
    return int(text)


def _class_spec(args) -> GraphClassSpec:
    return GraphClassSpec(args.n, args.k, args.positive_outdegree)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_run(args) -> int:
    graph = _load_graph(args.graph)
    outcome, trace = run_twin_threshold(graph, ThresholdPair(args.T, args.t))
    selected = sorted(outcome.selected)
    gap = graph.max_indegree - outcome.selected_indegree
    payload = {
        "n": graph.n,
        "T": args.T,
        "t": args.t,
        "selected": selected,
        "selected_indegree": outcome.selected_indegree,
        "max_indegree": graph.max_indegree,
        "gap": gap,
        "trace": [{"i": i, "v": v, "dstar": d} for i, v, d in trace.deletions],
        "final_degrees": list(trace.final_degrees),
    }
    lines = [
        f"n={graph.n} thresholds T={args.T} t={args.t}",
        f"selected: {selected[0] if selected else 'nothing'}"
        + (f" (indegree {outcome.selected_indegree})" if selected else ""),
        f"max indegree {graph.max_indegree}, gap {gap}",
    ]
    if args.trace:
        lines.append("deletions (iteration, vertex, degree):")
        lines.extend(f"  {i:4d} {v:6d} {d:6d}" for i, v, d in trace.deletions)
        lines.append("final degrees: " + " ".join(str(d) for d in trace.final_degrees))
    _emit(payload, args.json, lines)
    return 0


def _cmd_plan(args) -> int:
    if args.kappa is not None or args.c is not None:
        if args.kappa is None or args.c is None:
            raise ValueError("--kappa and --c must be given together")
        report = plan_thresholds_general(args.n, args.k, args.kappa, args.c)
    elif args.T is not None or args.t is not None:
        if args.T is None or args.t is None:
            raise ValueError("--T and --t must be given together")
        report = validate_thresholds(args.n, args.k, ThresholdPair(args.T, args.t))
    elif args.k == 1:
        report = plan_thresholds_k1(args.n)
    else:
        report = plan_thresholds_general(args.n, args.k, 0.0, float(args.k))
    payload = {
        "n": report.n,
        "k": report.k,
        "t": report.thresholds.lower,
        "T": report.thresholds.upper,
        "alpha_bound": report.alpha_bound,
        "certified": report.impartial_certified,
        "degenerate": report.degenerate,
        "condition_lhs": str(report.condition_lhs),
        "condition_rhs": report.condition_rhs,
        "note": report.note,
    }
    lines = [
        f"n={report.n} k={report.k}: t={report.thresholds.lower} T={report.thresholds.upper}",
        f"worst-gap bound alpha={report.alpha_bound}",
        f"impartiality condition: {report.condition_lhs} > {report.condition_rhs}"
        f" -> certified={report.impartial_certified}",
    ]
    if report.degenerate:
        lines.append(f"degenerate: {report.note}")
    _emit(payload, args.json, lines)
    return 0


def _audit_mode(args):
    if args.exhaustive:
        return Exhaustive()
    if args.samples is None:
        raise ValueError("choose --exhaustive or --samples N")
    if args.seed is None:
        raise ValueError("sampled audits need an explicit --seed")
    return Sampled(args.seed, args.samples)


def _cmd_audit(args) -> int:
    mid = MechanismId.parse(args.mechanism)
    spec = _class_spec(args)
    if args.kind == "impartiality":
        mode = _audit_mode(args)
        violations = check_impartiality(mid, spec, mode, cap=args.cap, jobs=args.jobs)
        payload = {
            "kind": "impartiality",
            "mechanism": mid.text(),
            "class": spec.describe(),
            "mode": mode.describe(),
            "violation_count": len(violations),
            "violations": [
                {
                    "deviator": w.deviator,
                    "selected_a": w.selected_a,
                    "selected_b": w.selected_b,
                    "graph_a": w.graph_a.serialize(),
                    "graph_b": w.graph_b.serialize(),
                }
                for w in violations
            ],
        }
        lines = [
            f"impartiality audit of {mid.text()} on {spec.describe()} ({mode.describe()})",
            f"violations found: {len(violations)}",
        ]
        for w in violations[:10]:
            lines.append(
                f"  deviator {w.deviator}: selected {w.selected_a} vs {w.selected_b} across"
                f" {w.graph_a.key} / {w.graph_b.key}"
            )
        _emit(payload, args.json, lines)
        return 1 if violations else 0
    if args.kind == "gap":
        mode = _audit_mode(args)
        report = measure_gap(mid, spec, mode, cap=args.cap, jobs=args.jobs)
        payload = {
            "kind": "gap",
            "mechanism": mid.text(),
            "class": spec.describe(),
            "mode": report.mode,
            "worst_gap": report.worst_gap,
            "graphs_checked": report.graphs_checked,
            "witness": report.witness.serialize(),
        }
        lines = [
            f"gap audit of {mid.text()} on {spec.describe()} ({report.mode})",
            f"worst additive gap {report.worst_gap} over {report.graphs_checked} graphs",
            "witness: " + " / ".join(report.witness.serialize().splitlines()),
        ]
        _emit(payload, args.json, lines)
        return 0
    # trace invariants over sampled graphs
    if args.samples is None or args.seed is None:
        raise ValueError("trace audits need --samples N and --seed S")
    if (args.T is None) != (args.t is None):
        raise ValueError("--T and --t must be given together")
    if args.T is not None:
        pair = ThresholdPair(args.T, args.t)
    elif args.k == 1:
        pair = plan_thresholds_k1(args.n).thresholds
    else:
        k = spec.bound
        pair = plan_thresholds_general(args.n, k, 0.0, float(k)).thresholds
    failures = []
    count = 0
    for graph in sample_stream(spec, args.seed, args.samples):
        report = check_trace_invariants(graph, pair)
        count += 1
        if not report.ok:
            failures.append(
                {
                    "graph": graph.serialize(),
                    "failed": [c.name for c in report.checks if not c.ok],
                    "detail": "; ".join(c.detail for c in report.checks if not c.ok),
                }
            )
    payload = {
        "kind": "trace",
        "class": spec.describe(),
        "T": pair.upper,
        "t": pair.lower,
        "runs": count,
        "failure_count": len(failures),
        "failures": failures,
    }
    lines = [
        f"trace audit on {spec.describe()} with T={pair.upper} t={pair.lower}",
        f"runs: {count}, failures: {len(failures)}",
    ]
    _emit(payload, args.json, lines)
    return 1 if failures else 0


def _cmd_partitions(args) -> int:
    rows = []
    for p in enumerate_compositions(args.n, args.cap):
        rows.append({"composition": list(p.parts), "r": p.r, "lambda": lambda_of(p)})
    total = fubini(args.n, args.cap)
    payload = {
        "n": args.n,
        "compositions": len(rows),
        "fubini": total.value,
        "odd": total.odd,
        "rows": rows,
    }
    lines = [f"compositions of {args.n}: {len(rows)}, multiplicity sum {total.value} (odd={total.odd})"]
    if args.certificate:
        cert = build_certificate(args.n, args.cap)
        for row, crow in zip(rows, cert.rows):
            row["sign"] = crow.sign
            row["sense"] = crow.sense
            row["multiplier"] = crow.multiplier
        payload["certificate"] = {
            "rhs_total": cert.rhs_total,
            "rhs_alternate": cert.rhs_alternate,
            "sign_even_parts": cert.sign_even_parts,
            "odd": cert.rhs_total % 2 != 0,
            "cancellation_ok": cert.cancellation_ok,
        }
        lines.append(
            f"certificate: rhs_total={cert.rhs_total} (alternate {cert.rhs_alternate}),"
            f" cancellation_ok={cert.cancellation_ok}"
        )
    header = f"{'composition':<20} {'r':>3} {'lambda':>10}"
    if args.certificate:
        header += f" {'sign':>5} {'sense':>13} {'multiplier':>11}"
    lines.append(header)
    for row in rows:
        text = f"{str(tuple(row['composition'])):<20} {row['r']:>3} {row['lambda']:>10}"
        if args.certificate:
            text += f" {row['sign']:>5} {row['sense']:>13} {row['multiplier']:>11}"
        lines.append(text)
    _emit(payload, args.json, lines)
    return 0


def _cmd_reduce(args) -> int:
    graph = _load_graph(args.graph)
    if args.mode == "isolated":
        result = reduce_add_isolated(graph, args.n_target)
    else:
        result = reduce_add_inneighbors(graph, args.n_target)
    text = result.serialize()
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="impsel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the twin-threshold mechanism on a graph file")
    run.add_argument("--graph", required=True, help="path to a graph file")
    run.add_argument("--T", type=int, required=True, help="upper (selection) threshold")
    run.add_argument("--t", type=int, required=True, help="lower (deletion) threshold")
    run.add_argument("--json", action="store_true")
    run.add_argument("--trace", action="store_true", help="print the deletion trace")
    run.set_defaults(func=_cmd_run)

    plan = sub.add_parser("plan", help="plan or validate threshold pairs")
    plan.add_argument("--n", type=int, required=True)
    plan.add_argument("--k", type=int, default=1, help="outdegree bound (default 1)")
    plan.add_argument("--kappa", type=float, help="outdegree growth exponent in [0, 1]")
    plan.add_argument("--c", type=float, help="outdegree growth coefficient (k <= c*n^kappa)")
    plan.add_argument("--T", type=int, help="validate this upper threshold instead of planning")
    plan.add_argument("--t", type=int, help="validate this lower threshold instead of planning")
    plan.add_argument("--json", action="store_true")
    plan.set_defaults(func=_cmd_plan)

    audit = sub.add_parser("audit", help="impartiality / gap / trace audits")
    audit.add_argument("kind", choices=("impartiality", "gap", "trace"))
    audit.add_argument("--mechanism", default="twin:2,1", help="e.g. never, max-naive, follow:1, twin:4,1")
    audit.add_argument("--n", type=int, required=True)
    audit.add_argument("--k", type=_outdegree_bound, default=None, help="outdegree bound or 'unbounded'")
    audit.add_argument("--positive-outdegree", action="store_true")
    audit.add_argument("--exhaustive", action="store_true")
    audit.add_argument("--samples", type=int)
    audit.add_argument("--seed", type=int)
    audit.add_argument("--jobs", type=int, default=1)
    audit.add_argument("--cap", type=int, default=AUDIT_CAP)
    audit.add_argument("--T", type=int, help="trace audits: upper threshold (default: planned)")
    audit.add_argument("--t", type=int, help="trace audits: lower threshold (default: planned)")
    audit.add_argument("--json", action="store_true")
    audit.set_defaults(func=_cmd_audit)

    partitions = sub.add_parser("partitions", help="composition table and certificate")
    partitions.add_argument("--n", type=int, required=True)
    partitions.add_argument("--certificate", action="store_true")
    partitions.add_argument("--cap", type=int, default=24)
    partitions.add_argument("--json", action="store_true")
    partitions.set_defaults(func=_cmd_partitions)

    reduce = sub.add_parser("reduce", help="apply a padding reduction to a graph file")
    reduce.add_argument("--graph", required=True)
    reduce.add_argument("--mode", choices=("isolated", "inneighbors"), required=True)
    reduce.add_argument("--n-target", type=int, required=True)
    reduce.add_argument("--output", help="write here instead of stdout")
    reduce.set_defaults(func=_cmd_reduce)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, CapExceeded, GraphFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
