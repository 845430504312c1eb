"""Random framework generation and the empirical harness.

Generation draws a fixed number of edges over integer-labelled arguments.
Acyclic mode orients every edge along a random topological order (no
self-edges); cyclic mode draws uniformly over all ordered pairs including
self-edges and re-draws until the result actually contains a cycle. The
harness records per-edge Monte Carlo convergence traces and coarse runtime
figures; timing output is meant for trend comparisons, not absolute
milliseconds.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .attribution import _edge_sample_deltas
from .engine import StrengthKernel
from .model import Edge, Polarity, Qbaf, QbafError
from .semantics import ConvergenceConfig, Semantics, is_acyclic

_CYCLIC_REDRAW_LIMIT = 100


class GenerationError(QbafError):
    """The requested random framework is infeasible."""


@dataclass(frozen=True)
class GenSpec:
    """Shape of a randomly generated framework.

    Arguments are the integers 0..num_arguments-1. Each edge is a support
    with probability `support_fraction`, otherwise an attack. Base scores
    are either drawn uniformly from [0, 1] or all set to
    `constant_base_score`.
    """

    num_arguments: int
    num_edges: int
    cyclic: bool = False
    support_fraction: float = 0.5
    base_score_distribution: str = "uniform"  # "uniform" | "constant"
    constant_base_score: float = 0.5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.num_arguments < 1:
            raise ValueError("num_arguments must be positive")
        if self.num_edges < 0:
            raise ValueError("num_edges must be non-negative")
        if not 0.0 <= self.support_fraction <= 1.0:
            raise ValueError("support_fraction must lie in [0, 1]")
        if self.base_score_distribution not in ("uniform", "constant"):
            raise ValueError(
                f"unknown base score distribution: {self.base_score_distribution!r}"
            )
        if not 0.0 <= self.constant_base_score <= 1.0:
            raise ValueError("constant_base_score must lie in [0, 1]")


def _base_scores(spec: GenSpec, rng: np.random.Generator) -> dict[int, float]:
    if spec.base_score_distribution == "constant":
        return {a: spec.constant_base_score for a in range(spec.num_arguments)}
    draws = rng.random(spec.num_arguments)
    return {a: float(draws[a]) for a in range(spec.num_arguments)}


def _edges_from_pairs(
    pairs: Sequence[tuple[int, int]], rng: np.random.Generator, support_fraction: float
) -> list[Edge]:
    polarity_draws = rng.random(len(pairs))
    return [
        Edge(s, t, Polarity.SUPPORT if u < support_fraction else Polarity.ATTACK)
        for (s, t), u in zip(pairs, polarity_draws)
    ]


def generate(spec: GenSpec) -> Qbaf:
    """A random framework matching `spec`, deterministic per seed."""
    rng = np.random.default_rng(spec.seed)
    m = spec.num_arguments

    if not spec.cyclic:
        limit = m * (m - 1) // 2
        if spec.num_edges > limit:
            raise GenerationError(
                f"an acyclic framework on {m} arguments admits at most {limit} "
                f"edges, requested {spec.num_edges}"
            )
        order = rng.permutation(m)
        candidates = [
            (int(order[i]), int(order[j]))
            for i in range(m)
            for j in range(i + 1, m)
        ]
        chosen = rng.choice(len(candidates), size=spec.num_edges, replace=False)
        pairs = [candidates[int(c)] for c in sorted(chosen)]
        edges = _edges_from_pairs(pairs, rng, spec.support_fraction)
        return Qbaf(range(m), edges, _base_scores(spec, rng))

    limit = m * m
    if spec.num_edges > limit:
        raise GenerationError(
            f"a framework on {m} arguments admits at most {limit} ordered "
            f"pairs, requested {spec.num_edges}"
        )
    candidates = [(s, t) for s in range(m) for t in range(m)]
    for _ in range(_CYCLIC_REDRAW_LIMIT):
        chosen = rng.choice(len(candidates), size=spec.num_edges, replace=False)
        pairs = [candidates[int(c)] for c in sorted(chosen)]
        edges = _edges_from_pairs(pairs, rng, spec.support_fraction)
        qbaf = Qbaf(range(m), edges, _base_scores(spec, rng))
        if not is_acyclic(qbaf):
            return qbaf
    raise GenerationError(
        f"failed to draw a cyclic framework with {spec.num_edges} edges on "
        f"{m} arguments after {_CYCLIC_REDRAW_LIMIT} attempts"
    )


@dataclass(frozen=True)
class ConvergenceTrace:
    """Running Monte Carlo estimates recorded every `stride` samples.

    `estimates[edge]` is a list of (sample_index, running estimate);
    `successive_differences[edge]` pairs each stride point after the first
    with the absolute change of the estimate since the previous point.
    """

    topic: object
    semantics: Semantics
    stride: int
    estimates: Mapping[Edge, list[tuple[int, float]]]

    @property
    def successive_differences(self) -> dict[Edge, list[tuple[int, float]]]:
        out: dict[Edge, list[tuple[int, float]]] = {}
        for edge, series in self.estimates.items():
            diffs = [
                (series[k][0], abs(series[k][1] - series[k - 1][1]))
                for k in range(1, len(series))
            ]
            out[edge] = diffs
        return out


def trace_convergence(
    qbaf: Qbaf,
    semantics: Semantics,
    topic,
    max_samples: int,
    stride: int,
    seed: int,
    config: ConvergenceConfig | None = None,
) -> ConvergenceTrace:
    """Per-edge running estimates, sampled identically to the estimator.

    The estimate at `max_samples` equals what `monte_carlo_attribution`
    returns for the same seed. Samples whose restricted evaluations did not
    converge are dropped from the running mean.
    """
    if stride < 1 or max_samples < stride:
        raise ValueError("need stride >= 1 and max_samples >= stride")
    semantics = Semantics(semantics)
    kernel = StrengthKernel(qbaf, semantics, config)
    estimates: dict[Edge, list[tuple[int, float]]] = {}
    for i, edge in enumerate(qbaf.edges):
        deltas, ok = _edge_sample_deltas(kernel, topic, i, max_samples, seed)
        cum_sum = np.cumsum(np.where(ok, deltas, 0.0))
        cum_count = np.cumsum(ok)
        series = []
        for t in range(stride, max_samples + 1, stride):
            count = max(int(cum_count[t - 1]), 1)
            series.append((t, float(cum_sum[t - 1] / count)))
        estimates[edge] = series
    return ConvergenceTrace(topic, semantics, stride, estimates)


@dataclass(frozen=True)
class BenchmarkRow:
    spec: GenSpec
    samples_per_edge: int
    num_edges: int
    mean_ms_per_evaluation: float


def benchmark_runtime(
    specs: Sequence[GenSpec],
    semantics: Semantics,
    repetitions: int,
    config: ConvergenceConfig | None = None,
) -> list[BenchmarkRow]:
    """Mean wall-clock milliseconds per marginal-contribution evaluation.

    Each spec is generated, then `repetitions` samples per edge are drawn
    with the Monte Carlo machinery on a single thread. With
    `repetitions=0` no timing runs happen and the table is empty.
    """
    if repetitions == 0:
        return []
    if repetitions < 0:
        raise ValueError("repetitions must be non-negative")
    semantics = Semantics(semantics)
    rows = []
    for spec in specs:
        qbaf = generate(spec)
        if not qbaf.edges:
            raise GenerationError("cannot benchmark a framework without edges")
        topic = qbaf.arguments[0]
        kernel = StrengthKernel(qbaf, semantics, config)
        start = time.perf_counter()
        for i in range(len(qbaf.edges)):
            _edge_sample_deltas(kernel, topic, i, repetitions, spec.seed)
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        rows.append(
            BenchmarkRow(
                spec=spec,
                samples_per_edge=repetitions,
                num_edges=len(qbaf.edges),
                mean_ms_per_evaluation=elapsed_ms / (repetitions * len(qbaf.edges)),
            )
        )
    return rows
