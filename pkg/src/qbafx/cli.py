"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 non-convergent evaluation,
4 invalid input file.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import datasets
from .analysis import classify_edge, paths_to_topic, predict_sign
from .attribution import (
    AttributionMap,
    ConvergenceFailure,
    ExactSizeLimitError,
    classify_attributions,
    efficiency_decomposition,
    exact_attribution,
    monte_carlo_attribution,
)
from .experiments import (
    GenerationError,
    GenSpec,
    benchmark_runtime,
    generate,
    trace_convergence,
)
from .io import (
    DocumentError,
    export_dot,
    path_contribution,
    read_qbaf_file,
    serialize_qbaf,
)
from .model import ArgumentId, Qbaf, QbafError
from .properties import (
    check_counterfactuality,
    check_dummy,
    check_efficiency,
    check_monotonicity,
    check_qualitative_invariability,
    check_stability,
    check_symmetry,
)
from .semantics import ConvergenceConfig, Semantics, evaluate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3
EXIT_INVALID_INPUT = 4

_SEMANTICS_CHOICES = [s.value for s in Semantics]
_PROPERTY_CHOICES = [
    "efficiency",
    "dummy",
    "symmetry",
    "counterfactuality",
    "qualitative-invariability",
    "monotonicity",
    "stability",
]


class _UsageError(Exception):
    pass


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def _resolve_topic(qbaf: Qbaf, raw: str) -> ArgumentId:
    if qbaf.has_argument(raw):
        return raw
    try:
        as_int = int(raw)
    except ValueError:
        as_int = None
    if as_int is not None and qbaf.has_argument(as_int):
        return as_int
    raise _UsageError(f"unknown topic argument: {raw!r}")


def _convergence_config(args) -> ConvergenceConfig:
    return ConvergenceConfig(
        tolerance=args.tolerance, max_iterations=args.max_iter
    )


def _add_convergence_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tolerance", type=float, default=1e-9)
    parser.add_argument("--max-iter", type=int, default=10_000)


def _print_strengths(qbaf: Qbaf, assignment) -> None:
    print(f"{'argument':<16} {'base':>10} {'strength':>12}")
    for a in qbaf.arguments:
        print(
            f"{str(a):<16} {_fmt(qbaf.base_scores[a]):>10} "
            f"{_fmt(assignment[a]):>12}"
        )


def _cmd_evaluate(args) -> int:
    qbaf = read_qbaf_file(args.file).qbaf
    assignment = evaluate(qbaf, Semantics(args.semantics), _convergence_config(args))
    _print_strengths(qbaf, assignment)
    if not assignment.converged:
        print(
            f"did not converge after {assignment.iterations_used} iterations "
            f"(residual {assignment.residual:.3g})",
            file=sys.stderr,
        )
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def _attribution_for(qbaf: Qbaf, topic, args) -> AttributionMap:
    semantics = Semantics(args.semantics)
    config = _convergence_config(args)
    if args.method == "exact":
        return exact_attribution(qbaf, semantics, topic, config)
    return monte_carlo_attribution(
        qbaf, semantics, topic, samples=args.samples, seed=args.seed, config=config
    )


def _edge_class_text(klass) -> str:
    if klass.kind.value == "indirect":
        return f"indirect(attacks={klass.attacks_on_path})"
    if klass.kind.value == "multifold":
        suffix = "+" if klass.truncated else ""
        return f"multifold(paths={klass.path_count}{suffix})"
    return klass.kind.value


def _print_attribution(qbaf: Qbaf, topic, attribution: AttributionMap, epsilon) -> None:
    contributions = classify_attributions(attribution, epsilon)
    print(
        f"{'edge':<24} {'value':>12} {'contribution':>13} "
        f"{'class':>22} {'predicted':>14}"
    )
    for edge in qbaf.edges:
        klass = classify_edge(qbaf, edge, topic)
        print(
            f"{str(edge):<24} {_fmt(attribution[edge]):>12} "
            f"{contributions[edge].value:>13} {_edge_class_text(klass):>22} "
            f"{predict_sign(qbaf, edge, topic).value:>14}"
        )
    report_total = sum(attribution.values[e] for e in qbaf.edges)
    print(f"total attribution: {_fmt(report_total)}")


def _cmd_explain(args) -> int:
    qbaf = read_qbaf_file(args.file).qbaf
    topic = _resolve_topic(qbaf, args.topic)
    attribution = _attribution_for(qbaf, topic, args)
    _print_attribution(qbaf, topic, attribution, args.epsilon)
    return EXIT_OK


def _cmd_classify(args) -> int:
    qbaf = read_qbaf_file(args.file).qbaf
    topic = _resolve_topic(qbaf, args.topic)
    print(f"{'edge':<24} {'class':>22} {'paths':>6} {'predicted':>14}")
    for edge in qbaf.edges:
        klass = classify_edge(qbaf, edge, topic)
        paths = len(paths_to_topic(qbaf, edge, topic))
        print(
            f"{str(edge):<24} {_edge_class_text(klass):>22} {paths:>6} "
            f"{predict_sign(qbaf, edge, topic).value:>14}"
        )
    return EXIT_OK


def _run_property(name: str, qbaf: Qbaf, topic, semantics, config, args):
    if name == "efficiency":
        yield check_efficiency(qbaf, semantics, topic, config=config)
    elif name == "dummy":
        for edge in qbaf.edges:
            yield check_dummy(qbaf, semantics, topic, edge, config=config)
    elif name == "symmetry":
        edges = qbaf.edges
        for i in range(len(edges)):
            for j in range(i + 1, len(edges)):
                yield check_symmetry(
                    qbaf, semantics, topic, edges[i], edges[j], config=config
                )
    elif name == "counterfactuality":
        for edge in qbaf.edges:
            yield check_counterfactuality(qbaf, semantics, topic, edge, config=config)
    elif name == "qualitative-invariability":
        for edge in qbaf.edges:
            yield check_qualitative_invariability(
                qbaf, semantics, topic, edge, config=config
            )
    elif name == "monotonicity":
        yield check_monotonicity(semantics, trials=args.trials, seed=args.seed)
    elif name == "stability":
        yield check_stability(semantics, trials=args.trials, seed=args.seed)
    else:
        raise _UsageError(f"unknown property: {name!r}")


def _cmd_check(args) -> int:
    qbaf = read_qbaf_file(args.file).qbaf
    topic = _resolve_topic(qbaf, args.topic)
    semantics = Semantics(args.semantics)
    config = _convergence_config(args)
    names = (
        _PROPERTY_CHOICES
        if args.properties == "all"
        else [p.strip() for p in args.properties.split(",") if p.strip()]
    )
    reports = []
    for name in names:
        reports.extend(_run_property(name, qbaf, topic, semantics, config, args))
    if args.json:
        print(json.dumps([r.to_json_dict() for r in reports], indent=2))
    else:
        for r in reports:
            flag = "" if r.guaranteed else " (not guaranteed)"
            print(f"{r.property_id:<28} {r.status.value:>15}{flag}  {r.details}")
    return EXIT_OK


def _cmd_export_dot(args) -> int:
    qbaf = read_qbaf_file(args.file).qbaf
    topic = _resolve_topic(qbaf, args.topic)
    attribution = _attribution_for(qbaf, topic, args)
    text = export_dot(qbaf, attribution, args.epsilon)
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write(text)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_gen(args) -> int:
    spec = GenSpec(
        num_arguments=args.args,
        num_edges=args.edges,
        cyclic=args.cyclic,
        support_fraction=args.support_fraction,
        seed=args.seed,
    )
    qbaf = generate(spec)
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write(serialize_qbaf(qbaf))
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    with open(args.spec, "r", encoding="utf-8") as handle:
        spec_doc = json.load(handle)
    specs = [GenSpec(**entry) for entry in spec_doc["specs"]]
    semantics = Semantics(spec_doc.get("semantics", "dfquad"))
    repetitions = int(spec_doc.get("repetitions", 100))
    rows = benchmark_runtime(specs, semantics, repetitions)
    with open(args.out, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow([
            "num_arguments", "num_edges", "cyclic", "support_fraction",
            "seed", "samples_per_edge", "mean_ms_per_evaluation",
        ])
        for row in rows:
            writer.writerow([
                row.spec.num_arguments, row.spec.num_edges, row.spec.cyclic,
                row.spec.support_fraction, row.spec.seed,
                row.samples_per_edge, f"{row.mean_ms_per_evaluation:.6f}",
            ])
    print(f"wrote {args.out} ({len(rows)} rows)")
    return EXIT_OK


def _cmd_trace(args) -> int:
    qbaf = read_qbaf_file(args.file).qbaf
    topic = _resolve_topic(qbaf, args.topic)
    trace = trace_convergence(
        qbaf,
        Semantics(args.semantics),
        topic,
        max_samples=args.max_samples,
        stride=args.stride,
        seed=args.seed,
        config=_convergence_config(args),
    )
    diffs = trace.successive_differences
    with open(args.out, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["edge", "sample_index", "estimate", "abs_diff"])
        for edge, series in trace.estimates.items():
            diff_at = {idx: d for idx, d in diffs[edge]}
            for idx, estimate in series:
                writer.writerow([
                    str(edge), idx, f"{estimate:.9g}",
                    f"{diff_at[idx]:.9g}" if idx in diff_at else "",
                ])
    print(f"wrote {args.out}")
    return EXIT_OK


def _case_study_fraud() -> int:
    document = datasets.fraud_detection()
    qbaf = document.qbaf
    meta = document.metadata
    topic = 1
    semantics = Semantics(meta["semantics"])
    assignment = evaluate(qbaf, semantics)
    reference = meta["reference"]
    print(f"strength({topic}) = {_fmt(assignment[topic])}"
          f"   (reference {reference['strengths']['1']})")
    attribution = monte_carlo_attribution(
        qbaf, semantics, topic, samples=1000, seed=0
    )
    print(f"{'edge':<16} {'estimate':>12} {'reference':>12} {'signs':>6}")
    agree = 0
    for entry in reference["attributions"]:
        edge = qbaf.edge_between(entry["source"], entry["target"])
        estimate = attribution[edge]
        same = (estimate > 0) == (entry["value"] > 0)
        agree += same
        print(
            f"{str(edge):<16} {_fmt(estimate):>12} {entry['value']:>12.3g} "
            f"{'ok' if same else 'DIFFER':>6}"
        )
    print(f"sign agreement: {agree}/{len(reference['attributions'])}")
    return EXIT_OK


def _case_study_llm() -> int:
    document = datasets.language_claim()
    qbaf = document.qbaf
    meta = document.metadata
    topic = "alpha"
    semantics = Semantics(meta["semantics"])
    assignment = evaluate(qbaf, semantics)
    reference = meta["reference"]
    for a, ref in reference["strengths"].items():
        print(f"strength({a}) = {_fmt(assignment[a])}   (reference {ref})")
    attribution = exact_attribution(qbaf, semantics, topic)
    print(f"{'edge':<16} {'value':>12} {'reference':>12}")
    for entry in reference["attributions"]:
        edge = qbaf.edge_between(entry["source"], entry["target"])
        print(f"{str(edge):<16} {_fmt(attribution[edge]):>12} {entry['value']:>12}")
    for entry in reference["path_contributions"]:
        path = tuple(
            qbaf.edge_between(source, target) for source, target in entry["path"]
        )
        value = path_contribution(attribution, path)
        label = " -> ".join(str(e) for e in path)
        print(f"path {label}: {_fmt(value)}   (reference {entry['value']})")
    report = efficiency_decomposition(qbaf, semantics, topic, attribution)
    print(
        f"total attribution = {_fmt(report.attribution_total)}   "
        f"(reference {reference['attribution_total']}); "
        f"base {_fmt(report.base_score)} + total = "
        f"{_fmt(report.base_score + report.attribution_total)} "
        f"vs strength {_fmt(report.strength)}"
    )
    return EXIT_OK


def _cmd_case_study(args) -> int:
    if args.name == "fraud":
        return _case_study_fraud()
    return _case_study_llm()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbafx",
        description="Evaluate bipolar argumentation frameworks and explain a "
                    "topic argument's strength edge by edge.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="compute argument strengths")
    p.add_argument("file")
    p.add_argument("--semantics", required=True, choices=_SEMANTICS_CHOICES)
    _add_convergence_flags(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("explain", help="attribute the topic's strength to edges")
    p.add_argument("file")
    p.add_argument("--topic", required=True)
    p.add_argument("--semantics", required=True, choices=_SEMANTICS_CHOICES)
    p.add_argument("--method", choices=["exact", "approx"], default="exact")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=None)
    _add_convergence_flags(p)
    p.set_defaults(func=_cmd_explain)

    p = sub.add_parser("classify", help="classify edges relative to a topic")
    p.add_argument("file")
    p.add_argument("--topic", required=True)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("check", help="run property checks")
    p.add_argument("file")
    p.add_argument("--topic", required=True)
    p.add_argument("--semantics", required=True, choices=_SEMANTICS_CHOICES)
    p.add_argument(
        "--properties", default="all",
        help=f"comma-separated list or 'all' ({', '.join(_PROPERTY_CHOICES)})",
    )
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    _add_convergence_flags(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("export-dot", help="write a Graphviz view of an attribution")
    p.add_argument("file")
    p.add_argument("--topic", required=True)
    p.add_argument("--semantics", required=True, choices=_SEMANTICS_CHOICES)
    p.add_argument("--method", choices=["exact", "approx"], default="exact")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--out", required=True)
    _add_convergence_flags(p)
    p.set_defaults(func=_cmd_export_dot)

    p = sub.add_parser("gen", help="generate a random framework")
    p.add_argument("--args", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--cyclic", action="store_true")
    p.add_argument("--support-fraction", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("bench", help="time Monte Carlo sampling on generated frameworks")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("trace", help="record running Monte Carlo estimates")
    p.add_argument("file")
    p.add_argument("--topic", required=True)
    p.add_argument("--semantics", required=True, choices=_SEMANTICS_CHOICES)
    p.add_argument("--max-samples", type=int, default=1000)
    p.add_argument("--stride", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_convergence_flags(p)
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("case-study", help="run a bundled case study end to end")
    p.add_argument("name", choices=sorted(datasets.CASE_STUDIES))
    p.set_defaults(func=_cmd_case_study)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExactSizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (DocumentError, GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except QbafError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
