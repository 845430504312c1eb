"""Executable checkers for the attribution axioms.

Each checker examines one property instance and returns a `PropertyReport`
carrying the outcome, the tolerance used and, on violation, a witness with
enough data to replay the failure. Properties whose theory only covers
direct and indirect edges under monotone semantics are still evaluated on
multifold edges, but then flagged as not guaranteed so callers report
rather than assert. Brute-force preconditions (dummy, symmetry, dominance)
are only attempted up to 12 edges; larger inputs come back "not-checked".

Checkers on cyclic frameworks are marked conjectural: the monotonicity the
guarantees rest on is proven for acyclic frameworks only.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Sequence

import numpy as np

from .analysis import EdgeKind, classify_edge
from .attribution import (
    ConvergenceFailure,
    ExactSizeLimitError,
    exact_attribution,
    _enumerate_strengths,
)
from .engine import StrengthKernel
from .experiments import GenerationError, GenSpec, generate
from .io import qbaf_to_document
from .model import ArgumentId, Edge, Polarity, Qbaf
from .semantics import ConvergenceConfig, Semantics, evaluate, is_acyclic

BRUTE_FORCE_EDGE_LIMIT = 12
_EQ_SLACK = 1e-12


class CheckStatus(str, Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    NOT_APPLICABLE = "not-applicable"
    NOT_CHECKED = "not-checked"


@dataclass
class PropertyReport:
    """Outcome of one property check.

    `guaranteed` says whether theory promises the property for this
    instance (it may still hold when not guaranteed); `conjectural` marks
    cyclic inputs. A violated report always carries a witness sufficient to
    replay the check.
    """

    property_id: str
    status: CheckStatus
    tolerance: float
    guaranteed: bool = True
    conjectural: bool = False
    witness: dict[str, Any] | None = None
    details: str = ""

    @property
    def holds(self) -> bool:
        return self.status is CheckStatus.HOLDS

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "property": self.property_id,
            "status": self.status.value,
            "tolerance": self.tolerance,
            "guaranteed": self.guaranteed,
            "conjectural": self.conjectural,
            "witness": self.witness,
            "details": self.details,
        }


def _edge_ref(edge: Edge) -> dict[str, Any]:
    return {
        "source": edge.source,
        "target": edge.target,
        "polarity": edge.polarity.value,
    }


def _subset_table(
    qbaf: Qbaf, semantics: Semantics, topic: ArgumentId, config
) -> np.ndarray:
    kernel = StrengthKernel(qbaf, semantics, config)
    return _enumerate_strengths(kernel, topic)


def check_efficiency(
    qbaf: Qbaf,
    semantics: Semantics,
    topic: ArgumentId,
    *,
    tolerance: float = 1e-6,
    config: ConvergenceConfig | None = None,
) -> PropertyReport:
    """Strength of the topic equals base score plus the attribution total."""
    cyclic = not is_acyclic(qbaf)
    try:
        attribution = exact_attribution(qbaf, semantics, topic, config)
    except (ExactSizeLimitError, ConvergenceFailure) as exc:
        return PropertyReport(
            "efficiency", CheckStatus.NOT_CHECKED, tolerance,
            conjectural=cyclic, details=str(exc),
        )
    assignment = evaluate(qbaf, semantics, config)
    strength = assignment[topic]
    base = qbaf.base_scores[topic]
    total = attribution.total()
    residual = abs(strength - base - total)
    ok = residual <= tolerance
    return PropertyReport(
        "efficiency",
        CheckStatus.HOLDS if ok else CheckStatus.VIOLATED,
        tolerance,
        conjectural=cyclic,
        witness=None if ok else {
            "topic": topic, "strength": strength, "base_score": base,
            "attribution_total": total, "residual": residual,
        },
        details=f"strength={strength:.9g} base={base:.9g} total={total:.9g}",
    )


def check_dummy(
    qbaf: Qbaf,
    semantics: Semantics,
    topic: ArgumentId,
    edge: Edge,
    *,
    tolerance: float = 1e-9,
    config: ConvergenceConfig | None = None,
) -> PropertyReport:
    """An edge whose marginal contribution vanishes everywhere gets value 0."""
    n = len(qbaf.edges)
    cyclic = not is_acyclic(qbaf)
    if n > BRUTE_FORCE_EDGE_LIMIT:
        return PropertyReport(
            "dummy", CheckStatus.NOT_CHECKED, tolerance, conjectural=cyclic,
            details=f"{n} edges exceed the brute-force limit of {BRUTE_FORCE_EDGE_LIMIT}",
        )
    sigma = _subset_table(qbaf, semantics, topic, config)
    index = list(qbaf.edges).index(edge)
    bit = 1 << index
    ints = np.arange(1 << n, dtype=np.int64)
    without = ints[(ints & bit) == 0]
    marginals = sigma[without | bit] - sigma[without]
    if np.abs(marginals).max(initial=0.0) > _EQ_SLACK:
        return PropertyReport(
            "dummy", CheckStatus.NOT_APPLICABLE, tolerance, conjectural=cyclic,
            details="edge has a non-zero marginal contribution for some subset",
        )
    value = exact_attribution(qbaf, semantics, topic, config)[edge]
    ok = abs(value) <= tolerance
    return PropertyReport(
        "dummy",
        CheckStatus.HOLDS if ok else CheckStatus.VIOLATED,
        tolerance,
        conjectural=cyclic,
        witness=None if ok else {"edge": _edge_ref(edge), "value": value},
        details=f"attribution value {value:.3g}",
    )


def check_symmetry(
    qbaf: Qbaf,
    semantics: Semantics,
    topic: ArgumentId,
    edge_i: Edge,
    edge_j: Edge,
    *,
    tolerance: float = 1e-9,
    config: ConvergenceConfig | None = None,
) -> PropertyReport:
    """Edges with interchangeable effects get equal attribution values."""
    n = len(qbaf.edges)
    cyclic = not is_acyclic(qbaf)
    if n > BRUTE_FORCE_EDGE_LIMIT:
        return PropertyReport(
            "symmetry", CheckStatus.NOT_CHECKED, tolerance, conjectural=cyclic,
            details=f"{n} edges exceed the brute-force limit of {BRUTE_FORCE_EDGE_LIMIT}",
        )
    edges = list(qbaf.edges)
    bit_i = 1 << edges.index(edge_i)
    bit_j = 1 << edges.index(edge_j)
    sigma = _subset_table(qbaf, semantics, topic, config)
    ints = np.arange(1 << n, dtype=np.int64)
    neither = ints[(ints & (bit_i | bit_j)) == 0]
    if np.abs(sigma[neither | bit_i] - sigma[neither | bit_j]).max(initial=0.0) > _EQ_SLACK:
        return PropertyReport(
            "symmetry", CheckStatus.NOT_APPLICABLE, tolerance, conjectural=cyclic,
            details="edges are not interchangeable on every subset",
        )
    attribution = exact_attribution(qbaf, semantics, topic, config)
    diff = abs(attribution[edge_i] - attribution[edge_j])
    ok = diff <= tolerance
    return PropertyReport(
        "symmetry",
        CheckStatus.HOLDS if ok else CheckStatus.VIOLATED,
        tolerance,
        conjectural=cyclic,
        witness=None if ok else {
            "edge_i": _edge_ref(edge_i), "edge_j": _edge_ref(edge_j),
            "value_i": attribution[edge_i], "value_j": attribution[edge_j],
        },
        details=f"values differ by {diff:.3g}",
    )


def check_dominance(
    qbaf: Qbaf,
    semantics: Semantics,
    topic: ArgumentId,
    edge_i: Edge,
    edge_j: Edge,
    *,
    config: ConvergenceConfig | None = None,
) -> PropertyReport:
    """An edge that always contributes at least as much, and once strictly
    more, gets a strictly larger attribution value."""
    n = len(qbaf.edges)
    cyclic = not is_acyclic(qbaf)
    if n > BRUTE_FORCE_EDGE_LIMIT:
        return PropertyReport(
            "dominance", CheckStatus.NOT_CHECKED, 0.0, conjectural=cyclic,
            details=f"{n} edges exceed the brute-force limit of {BRUTE_FORCE_EDGE_LIMIT}",
        )
    edges = list(qbaf.edges)
    bit_i = 1 << edges.index(edge_i)
    bit_j = 1 << edges.index(edge_j)
    sigma = _subset_table(qbaf, semantics, topic, config)
    ints = np.arange(1 << n, dtype=np.int64)
    neither = ints[(ints & (bit_i | bit_j)) == 0]
    with_i = sigma[neither | bit_i]
    with_j = sigma[neither | bit_j]
    if not ((with_i >= with_j - _EQ_SLACK).all() and (with_i > with_j + _EQ_SLACK).any()):
        return PropertyReport(
            "dominance", CheckStatus.NOT_APPLICABLE, 0.0, conjectural=cyclic,
            details="no strict advantage on some subset, or a reversal exists",
        )
    attribution = exact_attribution(qbaf, semantics, topic, config)
    ok = attribution[edge_i] > attribution[edge_j]
    return PropertyReport(
        "dominance",
        CheckStatus.HOLDS if ok else CheckStatus.VIOLATED,
        0.0,
        conjectural=cyclic,
        witness=None if ok else {
            "edge_i": _edge_ref(edge_i), "edge_j": _edge_ref(edge_j),
            "value_i": attribution[edge_i], "value_j": attribution[edge_j],
        },
        details=(
            f"value_i={attribution[edge_i]:.9g} value_j={attribution[edge_j]:.9g}"
        ),
    )


def check_counterfactuality(
    qbaf: Qbaf,
    semantics: Semantics,
    topic: ArgumentId,
    edge: Edge,
    *,
    epsilon: float = 1e-9,
    config: ConvergenceConfig | None = None,
) -> PropertyReport:
    """Removing a positively contributing edge must not raise the topic's
    strength, and symmetrically for negative contributions.

    Guaranteed for direct and indirect edges on acyclic frameworks; for
    multifold edges the outcome is reported but not guaranteed.
    """
    cyclic = not is_acyclic(qbaf)
    klass = classify_edge(qbaf, edge, topic)
    guaranteed = klass.kind in (EdgeKind.DIRECT, EdgeKind.INDIRECT) and not cyclic
    try:
        value = exact_attribution(qbaf, semantics, topic, config)[edge]
    except (ExactSizeLimitError, ConvergenceFailure) as exc:
        return PropertyReport(
            "counterfactuality", CheckStatus.NOT_CHECKED, epsilon,
            guaranteed=guaranteed, conjectural=cyclic, details=str(exc),
        )
    full = evaluate(qbaf, semantics, config)[topic]
    removed = evaluate(qbaf.remove_edge(edge), semantics, config)[topic]
    if value > epsilon:
        ok = full >= removed - _EQ_SLACK
    elif value < -epsilon:
        ok = full <= removed + _EQ_SLACK
    else:
        ok = True
    return PropertyReport(
        "counterfactuality",
        CheckStatus.HOLDS if ok else CheckStatus.VIOLATED,
        epsilon,
        guaranteed=guaranteed,
        conjectural=cyclic,
        witness=None if ok else {
            "edge": _edge_ref(edge), "value": value,
            "strength": full, "strength_without_edge": removed,
            "edge_kind": klass.kind.value,
        },
        details=(
            f"value={value:.6g} strength={full:.9g} without-edge={removed:.9g} "
            f"({klass.kind.value} edge)"
        ),
    )


def check_qualitative_invariability(
    qbaf: Qbaf,
    semantics: Semantics,
    topic: ArgumentId,
    edge: Edge,
    delta_grid: Sequence[float] | None = None,
    *,
    epsilon: float = 1e-9,
    config: ConvergenceConfig | None = None,
) -> PropertyReport:
    """The sign of an edge's value survives any base score of its source.

    Checked over a grid of override values (continuous quantification is
    unattainable); defaults to 11 evenly spaced points including both
    endpoints.
    """
    cyclic = not is_acyclic(qbaf)
    klass = classify_edge(qbaf, edge, topic)
    guaranteed = klass.kind in (EdgeKind.DIRECT, EdgeKind.INDIRECT) and not cyclic
    grid = list(delta_grid) if delta_grid is not None else [i / 10 for i in range(11)]
    try:
        base_value = exact_attribution(qbaf, semantics, topic, config)[edge]
    except (ExactSizeLimitError, ConvergenceFailure) as exc:
        return PropertyReport(
            "qualitative-invariability", CheckStatus.NOT_CHECKED, epsilon,
            guaranteed=guaranteed, conjectural=cyclic, details=str(exc),
        )
    if abs(base_value) <= epsilon:
        return PropertyReport(
            "qualitative-invariability", CheckStatus.HOLDS, epsilon,
            guaranteed=guaranteed, conjectural=cyclic,
            details="neutral edge: nothing to preserve",
        )
    flipped = []
    for delta in grid:
        shifted = qbaf.with_base_score(edge.source, delta)
        value = exact_attribution(shifted, semantics, topic, config)[edge]
        if base_value > epsilon and value < -epsilon:
            flipped.append((delta, value))
        if base_value < -epsilon and value > epsilon:
            flipped.append((delta, value))
    ok = not flipped
    return PropertyReport(
        "qualitative-invariability",
        CheckStatus.HOLDS if ok else CheckStatus.VIOLATED,
        epsilon,
        guaranteed=guaranteed,
        conjectural=cyclic,
        witness=None if ok else {
            "edge": _edge_ref(edge), "base_value": base_value,
            "sign_flips": [{"delta": d, "value": v} for d, v in flipped],
        },
        details=f"base value {base_value:.6g} over a {len(grid)}-point grid",
    )


def check_quantitative_variability(
    qbaf: Qbaf,
    semantics: Semantics,
    topic: ArgumentId,
    edge: Edge,
    delta: float,
    *,
    mode: str = "strict",
    config: ConvergenceConfig | None = None,
) -> PropertyReport:
    """Lowering the source's base score must not grow the edge's magnitude,
    raising it must not shrink it.

    In "strict" mode the theory's precondition is enforced: the edge must
    be the source's only outgoing edge and be direct or indirect. In
    "observational" mode the comparison is reported regardless, without a
    guarantee.
    """
    if mode not in ("strict", "observational"):
        raise ValueError(f"unknown mode: {mode!r}")
    cyclic = not is_acyclic(qbaf)
    klass = classify_edge(qbaf, edge, topic)
    sole_edge = qbaf.outgoing(edge.source) == (edge,)
    in_theory = (
        klass.kind in (EdgeKind.DIRECT, EdgeKind.INDIRECT)
        and sole_edge
        and edge.source != topic
    )
    if mode == "strict" and not in_theory:
        reasons = []
        if not sole_edge:
            reasons.append("source has more than one outgoing edge")
        if klass.kind not in (EdgeKind.DIRECT, EdgeKind.INDIRECT):
            reasons.append(f"edge is {klass.kind.value}")
        if edge.source == topic:
            reasons.append("source is the topic")
        return PropertyReport(
            "quantitative-variability", CheckStatus.NOT_APPLICABLE, _EQ_SLACK,
            guaranteed=False, conjectural=cyclic, details="; ".join(reasons),
        )
    try:
        base_value = exact_attribution(qbaf, semantics, topic, config)[edge]
        shifted = qbaf.with_base_score(edge.source, delta)
        new_value = exact_attribution(shifted, semantics, topic, config)[edge]
    except (ExactSizeLimitError, ConvergenceFailure) as exc:
        return PropertyReport(
            "quantitative-variability", CheckStatus.NOT_CHECKED, _EQ_SLACK,
            guaranteed=False, conjectural=cyclic, details=str(exc),
        )
    before = qbaf.base_scores[edge.source]
    if delta < before:
        ok = abs(new_value) <= abs(base_value) + _EQ_SLACK
    elif delta > before:
        ok = abs(new_value) >= abs(base_value) - _EQ_SLACK
    else:
        ok = abs(new_value - base_value) <= _EQ_SLACK
    return PropertyReport(
        "quantitative-variability",
        CheckStatus.HOLDS if ok else CheckStatus.VIOLATED,
        _EQ_SLACK,
        guaranteed=in_theory and not cyclic,
        conjectural=cyclic,
        witness=None if ok else {
            "edge": _edge_ref(edge), "base_score": before, "delta": delta,
            "value_before": base_value, "value_after": new_value,
        },
        details=(
            f"source base {before:.4g} -> {delta:.4g}: "
            f"value {base_value:.6g} -> {new_value:.6g}"
        ),
    )


def _leaf_extension_instance(
    trial: int, seed: int, *, max_arguments: int = 7, max_edges: int = 8
) -> tuple[Qbaf, Edge, ArgumentId]:
    """Random acyclic framework plus a fresh leaf with a single edge in.

    The leaf's polarity alternates with the trial index so both the attack
    and the support clauses get exercised.
    """
    rng = np.random.default_rng([seed, trial])
    m = int(rng.integers(2, max_arguments))
    limit = m * (m - 1) // 2
    num_edges = int(rng.integers(0, min(max_edges, limit) + 1))
    base = generate(
        GenSpec(
            num_arguments=m,
            num_edges=num_edges,
            cyclic=False,
            seed=int(rng.integers(2**31)),
        )
    )
    leaf = m  # fresh argument id
    alpha = int(rng.integers(0, m))
    polarity = Polarity.ATTACK if trial % 2 == 0 else Polarity.SUPPORT
    edge = Edge(leaf, alpha, polarity)
    scores = dict(base.base_scores)
    scores[leaf] = float(rng.random())
    qbaf = Qbaf(list(base.arguments) + [leaf], list(base.edges) + [edge], scores)
    return qbaf, edge, alpha


def check_monotonicity(
    semantics: Semantics,
    trials: int,
    seed: int,
    *,
    config: ConvergenceConfig | None = None,
) -> PropertyReport:
    """Fuzz all four monotonicity clauses on random acyclic frameworks.

    Each trial builds a framework with a leaf whose only edge targets some
    argument, then checks that deleting the edge and raising the leaf's
    base score move the target's strength in the expected direction.
    """
    semantics = Semantics(semantics)
    violations: list[dict[str, Any]] = []
    for trial in range(trials):
        qbaf, edge, alpha = _leaf_extension_instance(trial, seed)
        rng = np.random.default_rng([seed, trial, 1])
        strength = evaluate(qbaf, semantics, config)[alpha]
        without = evaluate(qbaf.remove_edge(edge), semantics, config)[alpha]
        tau_leaf = qbaf.base_scores[edge.source]
        raised = tau_leaf + (1.0 - tau_leaf) * float(rng.random())
        shifted = evaluate(
            qbaf.with_base_score(edge.source, raised), semantics, config
        )[alpha]
        if edge.is_attack:
            removal_ok = strength <= without + _EQ_SLACK
            raise_ok = strength >= shifted - _EQ_SLACK
        else:
            removal_ok = strength >= without - _EQ_SLACK
            raise_ok = strength <= shifted + _EQ_SLACK
        if not (removal_ok and raise_ok):
            violations.append({
                "trial": trial,
                "framework": qbaf_to_document(qbaf),
                "edge": _edge_ref(edge),
                "target": alpha,
                "strength": strength,
                "strength_without_edge": without,
                "raised_base_score": raised,
                "strength_with_raised_base": shifted,
            })
    ok = not violations
    return PropertyReport(
        "monotonicity",
        CheckStatus.HOLDS if ok else CheckStatus.VIOLATED,
        _EQ_SLACK,
        witness=None if ok else {"violations": violations[:5]},
        details=f"{trials} random acyclic trials, {len(violations)} violations",
    )


def check_stability(
    semantics: Semantics,
    trials: int,
    seed: int,
    *,
    config: ConvergenceConfig | None = None,
) -> PropertyReport:
    """Arguments without incoming edges keep exactly their base score."""
    semantics = Semantics(semantics)
    violations: list[dict[str, Any]] = []
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        m = int(rng.integers(1, 9))
        cyclic = bool(trial % 3 == 2 and m >= 2)
        limit = m * m if cyclic else m * (m - 1) // 2
        num_edges = int(rng.integers(0, limit + 1)) if limit else 0
        if cyclic and num_edges == 0:
            cyclic = False
        try:
            qbaf = generate(GenSpec(
                num_arguments=m, num_edges=num_edges, cyclic=cyclic,
                seed=int(rng.integers(2**31)),
            ))
        except GenerationError:
            continue  # a cyclic draw can be infeasible for tiny edge counts
        assignment = evaluate(qbaf, semantics, config)
        targets = {e.target for e in qbaf.edges}
        for a in qbaf.arguments:
            if a in targets:
                continue
            if assignment[a] != qbaf.base_scores[a]:
                violations.append({
                    "trial": trial,
                    "framework": qbaf_to_document(qbaf),
                    "argument": a,
                    "base_score": qbaf.base_scores[a],
                    "strength": assignment[a],
                })
    ok = not violations
    return PropertyReport(
        "stability",
        CheckStatus.HOLDS if ok else CheckStatus.VIOLATED,
        0.0,
        witness=None if ok else {"violations": violations[:5]},
        details=f"{trials} random trials, {len(violations)} violations",
    )
