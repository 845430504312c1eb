"""Shapley-style attribution of a topic argument's strength to edges.

Every edge of the framework is treated as a player in a coalitional game
whose payoff for a coalition S of edges is the topic's strength in the
framework restricted to S. An edge's attribution value is its Shapley
value in that game:

    value(r) = sum over S subset of R\\{r} of
               |S|! (|R|-|S|-1)! / |R|!  *  [ strength_{S+r} - strength_S ]

The exact computation enumerates all subsets once (strengths are shared
across edges through the subset bitmask) and is limited to small edge
counts. The Monte Carlo estimator draws, per edge, random
permutation-prefix coalitions, which realises the subset weights exactly,
and averages the observed marginal contributions. Sampling uses an
independent random substream per (seed, canonical edge index), so
estimates do not depend on edge iteration order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import numpy as np

from .engine import StrengthKernel
from .model import ArgumentId, Edge, Qbaf, QbafError, UnknownArgumentError
from .semantics import ConvergenceConfig, Semantics, evaluate

DEFAULT_EXACT_EDGE_LIMIT = 25
DEFAULT_MAX_FAILURE_FRACTION = 0.01
EXACT_NEUTRALITY_EPSILON = 1e-9
_CHUNK_BITS = 16


class ExactSizeLimitError(QbafError):
    """The framework has too many edges for exact subset enumeration."""


class ConvergenceFailure(QbafError):
    """A restricted evaluation did not converge, so strengths are undefined."""


class Contribution(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class AttributionMap:
    """Per-edge attribution values for one (framework, semantics, topic).

    `method` is "exact" or "monte-carlo"; the sampling fields are only set
    for the latter. `standard_errors` hold the per-edge standard error of
    the Monte Carlo mean.
    """

    topic: ArgumentId
    semantics: Semantics
    values: Mapping[Edge, float]
    method: str
    samples: int | None = None
    seed: int | None = None
    standard_errors: Mapping[Edge, float] | None = None
    failed_samples: int = 0

    def __getitem__(self, edge: Edge) -> float:
        return self.values[edge]

    def total(self) -> float:
        return float(sum(self.values.values()))

    @property
    def is_exact(self) -> bool:
        return self.method == "exact"


@dataclass(frozen=True)
class EfficiencyReport:
    """How the topic's strength decomposes into base score plus attributions."""

    topic: ArgumentId
    base_score: float
    strength: float
    attribution_total: float
    residual: float


def subset_weight(num_edges: int, subset_size: int) -> float:
    """Shapley weight of one subset of the given size among `num_edges` players."""
    if not 0 <= subset_size < num_edges:
        raise ValueError(f"subset size {subset_size} invalid for {num_edges} edges")
    # |S|! (n-|S|-1)! / n!  ==  1 / (n * C(n-1, |S|)), computed without
    # forming large factorials
    return 1.0 / (num_edges * math.comb(num_edges - 1, subset_size))


def _mask_edges(edges: list[Edge], mask: int) -> list[Edge]:
    return [e for i, e in enumerate(edges) if mask >> i & 1]


def _enumerate_strengths(
    kernel: StrengthKernel, topic: ArgumentId
) -> np.ndarray:
    """Topic strength for every edge subset, indexed by subset bitmask."""
    n = kernel.num_edges
    total = 1 << n
    sigma = np.empty(total)
    chunk = 1 << min(n, _CHUNK_BITS)
    bits = np.arange(n, dtype=np.int64)
    for start in range(0, total, chunk):
        ints = np.arange(start, min(start + chunk, total), dtype=np.int64)
        masks = (ints[:, None] >> bits) & 1
        values, converged = kernel.topic_strengths(masks.astype(bool), topic)
        if not converged.all():
            bad = int(ints[np.nonzero(~converged)[0][0]])
            subset = [str(e) for e in _mask_edges(kernel.edges, bad)]
            raise ConvergenceFailure(
                f"evaluation did not converge for edge subset {subset}; "
                "strengths are not well defined for this framework"
            )
        sigma[start : start + len(ints)] = values
    return sigma


def _popcounts(ints: np.ndarray, num_bits: int) -> np.ndarray:
    counts = np.zeros(len(ints), dtype=np.int64)
    for b in range(num_bits):
        counts += (ints >> b) & 1
    return counts


def exact_attribution(
    qbaf: Qbaf,
    semantics: Semantics,
    topic: ArgumentId,
    config: ConvergenceConfig | None = None,
    *,
    edge_limit: int = DEFAULT_EXACT_EDGE_LIMIT,
    force: bool = False,
) -> AttributionMap:
    """Exact attribution values by full subset enumeration.

    Cost grows as 2^edges; frameworks above `edge_limit` edges are refused
    unless `force=True`. Raises `ConvergenceFailure` if any restricted
    evaluation fails to converge.
    """
    if not qbaf.has_argument(topic):
        raise UnknownArgumentError(f"unknown topic argument: {topic!r}")
    semantics = Semantics(semantics)
    n = len(qbaf.edges)
    if n > edge_limit and not force:
        raise ExactSizeLimitError(
            f"{n} edges exceed the exact enumeration limit of {edge_limit} "
            f"(2^{n} subsets); use monte_carlo_attribution or pass force=True"
        )
    if n == 0:
        return AttributionMap(topic, semantics, {}, "exact")

    kernel = StrengthKernel(qbaf, semantics, config)
    sigma = _enumerate_strengths(kernel, topic)
    weights = np.array([subset_weight(n, k) for k in range(n)])

    values: dict[Edge, float] = {}
    chunk = 1 << min(n, _CHUNK_BITS)
    all_ints = np.arange(1 << n, dtype=np.int64)
    for i, edge in enumerate(qbaf.edges):
        bit = np.int64(1) << i
        phi = 0.0
        for start in range(0, len(all_ints), chunk):
            ints = all_ints[start : start + chunk]
            without = ints[(ints & bit) == 0]
            sizes = _popcounts(without, n)
            deltas = sigma[without | bit] - sigma[without]
            phi += float(np.sum(weights[sizes] * deltas))
        values[edge] = phi
    return AttributionMap(topic, semantics, values, "exact")


def _prefix_subset_masks(
    rng: np.random.Generator, edge_index: int, num_edges: int, samples: int
) -> np.ndarray:
    """Coalitions distributed as uniform-permutation prefixes before the edge.

    Drawing the prefix of a uniformly random permutation of all edges,
    cut at the chosen edge, gives subset S with probability
    |S|! (n-|S|-1)! / n! — exactly the Shapley weight. Equivalently: the
    edge's position k is uniform on 0..n-1 and S is a uniform k-subset of
    the remaining edges, which is what we sample here.
    """
    others = np.array(
        [j for j in range(num_edges) if j != edge_index], dtype=np.intp
    )
    masks = np.zeros((samples, num_edges), dtype=bool)
    if others.size == 0:
        return masks
    positions = rng.integers(0, num_edges, size=samples)
    uniforms = rng.random((samples, others.size))
    ranks = uniforms.argsort(axis=1).argsort(axis=1)
    masks[:, others] = ranks < positions[:, None]
    return masks


def _edge_sample_deltas(
    kernel: StrengthKernel,
    topic: ArgumentId,
    edge_index: int,
    samples: int,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Marginal contributions of one edge over `samples` random coalitions.

    Returns (deltas, ok) in sample order; `ok[j]` is False when either
    restricted evaluation of sample j failed to converge.
    """
    rng = np.random.default_rng([seed, edge_index])
    masks = _prefix_subset_masks(rng, edge_index, kernel.num_edges, samples)
    with_edge = masks.copy()
    with_edge[:, edge_index] = True
    base_vals, base_ok = kernel.topic_strengths(masks, topic)
    edge_vals, edge_ok = kernel.topic_strengths(with_edge, topic)
    return edge_vals - base_vals, base_ok & edge_ok


def monte_carlo_attribution(
    qbaf: Qbaf,
    semantics: Semantics,
    topic: ArgumentId,
    samples: int,
    seed: int,
    config: ConvergenceConfig | None = None,
    *,
    max_failure_fraction: float = DEFAULT_MAX_FAILURE_FRACTION,
) -> AttributionMap:
    """Monte Carlo estimate of the attribution values.

    Per edge, `samples` marginal contributions are drawn and averaged.
    Non-convergent restricted evaluations are dropped from the average and
    counted; if more than `max_failure_fraction` of all samples fail the
    whole computation is aborted with diagnostics.
    """
    if not qbaf.has_argument(topic):
        raise UnknownArgumentError(f"unknown topic argument: {topic!r}")
    semantics = Semantics(semantics)
    if samples < 1:
        raise ValueError(f"samples must be at least 1, got {samples}")
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    n = len(qbaf.edges)
    if n == 0:
        return AttributionMap(
            topic, semantics, {}, "monte-carlo", samples=samples, seed=seed
        )

    kernel = StrengthKernel(qbaf, semantics, config)
    values: dict[Edge, float] = {}
    errors: dict[Edge, float] = {}
    failures_per_edge: dict[Edge, int] = {}
    for i, edge in enumerate(qbaf.edges):
        deltas, ok = _edge_sample_deltas(kernel, topic, i, samples, seed)
        good = deltas[ok]
        failures_per_edge[edge] = int(np.sum(~ok))
        if good.size == 0:
            values[edge] = math.nan
            errors[edge] = math.inf
            continue
        values[edge] = float(np.sum(good) / good.size)
        if good.size > 1:
            errors[edge] = float(np.std(good, ddof=1) / math.sqrt(good.size))
        else:
            errors[edge] = math.inf

    failed_total = sum(failures_per_edge.values())
    if failed_total > max_failure_fraction * n * samples:
        worst = sorted(
            failures_per_edge.items(), key=lambda kv: kv[1], reverse=True
        )[:5]
        detail = ", ".join(f"{e}: {c}/{samples}" for e, c in worst)
        raise ConvergenceFailure(
            f"{failed_total} of {n * samples} sampled evaluations did not "
            f"converge (> {max_failure_fraction:.0%} allowed); worst edges: {detail}"
        )
    return AttributionMap(
        topic,
        semantics,
        values,
        "monte-carlo",
        samples=samples,
        seed=seed,
        standard_errors=errors,
        failed_samples=failed_total,
    )


def classify_contribution(value: float, epsilon: float) -> Contribution:
    """Sign of an attribution value against a neutrality band of width epsilon."""
    if epsilon < 0:
        raise ValueError(f"epsilon must be non-negative, got {epsilon}")
    if value > epsilon:
        return Contribution.POSITIVE
    if value < -epsilon:
        return Contribution.NEGATIVE
    return Contribution.NEUTRAL


def neutrality_epsilon(attribution: AttributionMap, edge: Edge) -> float:
    """Default neutrality band: tiny for exact values, 2 standard errors for
    Monte Carlo estimates."""
    if attribution.is_exact or attribution.standard_errors is None:
        return EXACT_NEUTRALITY_EPSILON
    return 2.0 * attribution.standard_errors[edge]


def classify_attributions(
    attribution: AttributionMap, epsilon: float | None = None
) -> dict[Edge, Contribution]:
    """Contribution class of every edge; per-edge default epsilon if not given."""
    return {
        edge: classify_contribution(
            value,
            epsilon if epsilon is not None else neutrality_epsilon(attribution, edge),
        )
        for edge, value in attribution.values.items()
    }


def efficiency_decomposition(
    qbaf: Qbaf,
    semantics: Semantics,
    topic: ArgumentId,
    attribution: AttributionMap,
    config: ConvergenceConfig | None = None,
) -> EfficiencyReport:
    """Compare strength minus base score against the attribution total.

    For exact attributions on convergent frameworks the residual is zero up
    to floating-point rounding.
    """
    if attribution.topic != topic or Semantics(semantics) != attribution.semantics:
        raise ValueError("attribution was computed for a different topic/semantics")
    assignment = evaluate(qbaf, semantics, config)
    strength = assignment[topic]
    base = qbaf.base_scores[topic]
    total = attribution.total()
    return EfficiencyReport(
        topic=topic,
        base_score=base,
        strength=strength,
        attribution_total=total,
        residual=abs(strength - base - total),
    )
