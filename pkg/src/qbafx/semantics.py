"""Gradual semantics: final strength of every argument in a framework.

Three semantics are implemented. Each aggregates the current strengths of
an argument's attackers and supporters and combines the aggregate with the
argument's base score t:

  product form ("dfquad"):
      v_att = 1 - prod(1 - s_i) over attackers, v_sup analogously;
      result = t - t*(v_att - v_sup)        if v_att >= v_sup
               t + (1-t)*(v_sup - v_att)    otherwise

  quadratic energy ("qe"):
      E = sum(supporters) - sum(attackers), h = E^2 / (1 + E^2);
      result = t - t*h  if E <= 0  else  t + (1-t)*h

  restricted Euler ("reb"):
      E as above; result = 1 - (1 - t^2) / (1 + t * e^E)

On acyclic frameworks a single sweep in topological order is exact. On
cyclic frameworks strengths are iterated synchronously from the base
scores until the largest componentwise change falls below a tolerance;
failure to converge is reported on the result, not raised, so callers can
probe well-definedness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Mapping

from .model import ArgumentId, Edge, Qbaf


class Semantics(str, Enum):
    DF_QUAD = "dfquad"
    QUADRATIC_ENERGY = "qe"
    RESTRICTED_EULER = "reb"


@dataclass(frozen=True)
class ConvergenceConfig:
    """Stopping rule for the iterative evaluation of cyclic frameworks."""

    tolerance: float = 1e-9
    max_iterations: int = 10_000

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(
                f"max_iterations must be at least 1, got {self.max_iterations}"
            )


DEFAULT_CONFIG = ConvergenceConfig()


@dataclass(frozen=True)
class StrengthAssignment:
    """Final strengths plus convergence metadata.

    `converged` is always True for acyclic frameworks. For cyclic ones it
    records whether the last sweep changed any strength by more than the
    configured tolerance; when False the last iterate is still exposed.
    """

    strengths: Mapping[ArgumentId, float]
    converged: bool
    iterations_used: int
    residual: float

    def __getitem__(self, argument: ArgumentId) -> float:
        return self.strengths[argument]


def _check_unit_interval(values: Iterable[float], who: str) -> list[float]:
    out = []
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{who} strength {v} outside [0, 1]")
        out.append(v)
    return out


def aggregate_df_quad(
    attacker_strengths: Iterable[float],
    supporter_strengths: Iterable[float],
    base: float,
) -> float:
    """Product-form combination of attacker/supporter strengths with `base`."""
    att = _check_unit_interval(attacker_strengths, "attacker")
    sup = _check_unit_interval(supporter_strengths, "supporter")
    _check_unit_interval([base], "base")
    v_att = 1.0
    for s in att:
        v_att *= 1.0 - s
    v_att = 1.0 - v_att
    v_sup = 1.0
    for s in sup:
        v_sup *= 1.0 - s
    v_sup = 1.0 - v_sup
    if v_att >= v_sup:
        return base - base * (v_att - v_sup)
    return base + (1.0 - base) * (v_sup - v_att)


def aggregate_qe(
    attacker_strengths: Iterable[float],
    supporter_strengths: Iterable[float],
    base: float,
) -> float:
    """Quadratic-energy combination of attacker/supporter strengths with `base`."""
    att = _check_unit_interval(attacker_strengths, "attacker")
    sup = _check_unit_interval(supporter_strengths, "supporter")
    _check_unit_interval([base], "base")
    energy = sum(sup) - sum(att)
    h = energy * energy / (1.0 + energy * energy)
    if energy <= 0:
        return base - base * h
    return base + (1.0 - base) * h


def aggregate_reb(
    attacker_strengths: Iterable[float],
    supporter_strengths: Iterable[float],
    base: float,
) -> float:
    """Restricted-Euler combination of attacker/supporter strengths with `base`."""
    att = _check_unit_interval(attacker_strengths, "attacker")
    sup = _check_unit_interval(supporter_strengths, "supporter")
    _check_unit_interval([base], "base")
    energy = sum(sup) - sum(att)
    return 1.0 - (1.0 - base * base) / (1.0 + base * math.exp(energy))


_AGGREGATORS = {
    Semantics.DF_QUAD: aggregate_df_quad,
    Semantics.QUADRATIC_ENERGY: aggregate_qe,
    Semantics.RESTRICTED_EULER: aggregate_reb,
}


def topological_order(qbaf: Qbaf) -> list[ArgumentId]:
    """Arguments ordered so every edge source precedes its target.

    Raises `CycleError` when the framework is cyclic. The order is
    deterministic for a given framework.
    """
    sorter: TopologicalSorter = TopologicalSorter()
    for a in qbaf.arguments:
        sorter.add(a)
    for e in qbaf.edges:
        sorter.add(e.target, e.source)
    return list(sorter.static_order())


def is_acyclic(qbaf: Qbaf) -> bool:
    try:
        topological_order(qbaf)
    except CycleError:
        return False
    return True


def _incoming_map(qbaf: Qbaf) -> dict[ArgumentId, tuple[Edge, ...]]:
    incoming: dict[ArgumentId, list[Edge]] = {a: [] for a in qbaf.arguments}
    for e in qbaf.edges:
        incoming[e.target].append(e)
    return {a: tuple(es) for a, es in incoming.items()}


def _update(
    semantics: Semantics,
    incoming: tuple[Edge, ...],
    base: float,
    current: Mapping[ArgumentId, float],
) -> float:
    if not incoming:
        # keeps source-less arguments at their base score exactly,
        # independent of rounding in the combination formulas
        return base
    attackers = [current[e.source] for e in incoming if e.is_attack]
    supporters = [current[e.source] for e in incoming if e.is_support]
    return _AGGREGATORS[semantics](attackers, supporters, base)


def _sweep_topological(
    qbaf: Qbaf, semantics: Semantics, order: list[ArgumentId]
) -> dict[ArgumentId, float]:
    incoming = _incoming_map(qbaf)
    strengths = dict(qbaf.base_scores)
    for a in order:
        strengths[a] = _update(semantics, incoming[a], strengths[a], strengths)
    return strengths


def _iterate_synchronous(
    qbaf: Qbaf, semantics: Semantics, config: ConvergenceConfig
) -> tuple[dict[ArgumentId, float], bool, int, float]:
    incoming = _incoming_map(qbaf)
    base = dict(qbaf.base_scores)
    strengths = dict(base)
    residual = math.inf
    iterations = 0
    for iterations in range(1, config.max_iterations + 1):
        updated = {
            a: _update(semantics, incoming[a], base[a], strengths)
            for a in qbaf.arguments
        }
        residual = max(
            (abs(updated[a] - strengths[a]) for a in qbaf.arguments), default=0.0
        )
        strengths = updated
        if residual <= config.tolerance:
            return strengths, True, iterations, residual
    return strengths, False, iterations, residual


def evaluate(
    qbaf: Qbaf,
    semantics: Semantics,
    config: ConvergenceConfig | None = None,
) -> StrengthAssignment:
    """Strength of every argument under the given semantics.

    Acyclic frameworks are evaluated exactly with one pass per argument.
    Cyclic frameworks are iterated until convergence or `max_iterations`;
    a non-convergent result is returned with `converged=False`.
    """
    cfg = config or DEFAULT_CONFIG
    semantics = Semantics(semantics)
    try:
        order = topological_order(qbaf)
    except CycleError:
        strengths, converged, iterations, residual = _iterate_synchronous(
            qbaf, semantics, cfg
        )
        return StrengthAssignment(strengths, converged, iterations, residual)
    return StrengthAssignment(_sweep_topological(qbaf, semantics, order), True, 1, 0.0)
