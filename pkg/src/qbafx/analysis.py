"""Structural analysis of edges relative to a topic argument.

An edge influences the topic through the directed paths from its target to
the topic. Edges landing directly on the topic are `direct`; edges whose
target reaches the topic through exactly one simple path are `indirect`,
and the number of attacks on that continuation path determines whether the
influence is flipped an odd number of times; edges with two or more paths
are `multifold`, where no sign can be predicted in general. Path counting
uses simple paths (no repeated argument), the only finite reading on
cyclic inputs, and such inputs are flagged on the classification.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from .model import ArgumentId, Edge, Qbaf, QbafError, UnknownArgumentError
from .semantics import is_acyclic

DEFAULT_PATH_LIMIT = 10_000

PathToTopic = tuple[Edge, ...]


class EdgeKind(str, Enum):
    DIRECT = "direct"
    INDIRECT = "indirect"
    MULTIFOLD = "multifold"
    DISCONNECTED = "disconnected"


class SignPrediction(str, Enum):
    NON_NEGATIVE = "non-negative"
    NON_POSITIVE = "non-positive"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class EdgeClass:
    """Classification of one edge with respect to a topic argument.

    `attacks_on_path` is the number of attack edges on the unique
    continuation path of an indirect edge (the edge itself not counted).
    `path_count` is set for multifold edges; `truncated` means enumeration
    stopped at the path limit, so `path_count` is a lower bound.
    `cyclic_input` marks classifications on cyclic frameworks, where
    simple-path counting is a convention rather than a theorem.
    """

    kind: EdgeKind
    attacks_on_path: int | None = None
    path_count: int | None = None
    truncated: bool = False
    cyclic_input: bool = False


def _require_edge(qbaf: Qbaf, edge: Edge) -> None:
    if edge not in set(qbaf.edges):
        raise QbafError(f"edge not in the framework: {edge}")


def _simple_continuations(
    qbaf: Qbaf, start: ArgumentId, goal: ArgumentId
) -> Iterator[PathToTopic]:
    """All simple directed edge paths from `start` to `goal`, depth first.

    Successors are explored in canonical edge order, so enumeration order
    is deterministic.
    """
    outgoing: dict[ArgumentId, list[Edge]] = {a: [] for a in qbaf.arguments}
    for e in qbaf.edges:
        outgoing[e.source].append(e)

    path: list[Edge] = []
    visited = {start}

    def walk(node: ArgumentId) -> Iterator[PathToTopic]:
        for e in outgoing[node]:
            if e.target == goal:
                path.append(e)
                yield tuple(path)
                path.pop()
            elif e.target not in visited:
                visited.add(e.target)
                path.append(e)
                yield from walk(e.target)
                path.pop()
                visited.discard(e.target)

    yield from walk(start)


def paths_to_topic(
    qbaf: Qbaf,
    edge: Edge,
    topic: ArgumentId,
    *,
    max_paths: int = DEFAULT_PATH_LIMIT,
) -> list[PathToTopic]:
    """All simple paths carrying the edge's influence to the topic.

    Each returned path starts with `edge` itself followed by a simple
    continuation from the edge's target to the topic. An edge pointing at
    the topic yields the singleton path. At most `max_paths` paths are
    returned.
    """
    if not qbaf.has_argument(topic):
        raise UnknownArgumentError(f"unknown topic argument: {topic!r}")
    _require_edge(qbaf, edge)
    if edge.target == topic:
        return [(edge,)]
    paths = []
    for continuation in _simple_continuations(qbaf, edge.target, topic):
        paths.append((edge, *continuation))
        if len(paths) >= max_paths:
            break
    return paths


def classify_edge(
    qbaf: Qbaf,
    edge: Edge,
    topic: ArgumentId,
    *,
    max_paths: int = DEFAULT_PATH_LIMIT,
) -> EdgeClass:
    """Direct / indirect / multifold / disconnected status of an edge."""
    if not qbaf.has_argument(topic):
        raise UnknownArgumentError(f"unknown topic argument: {topic!r}")
    _require_edge(qbaf, edge)
    cyclic = not is_acyclic(qbaf)
    if edge.target == topic:
        return EdgeClass(EdgeKind.DIRECT, cyclic_input=cyclic)

    first: PathToTopic | None = None
    count = 0
    truncated = False
    for continuation in _simple_continuations(qbaf, edge.target, topic):
        count += 1
        if first is None:
            first = continuation
        if count > max_paths:
            truncated = True
            break
    if count == 0:
        return EdgeClass(EdgeKind.DISCONNECTED, cyclic_input=cyclic)
    if count == 1:
        attacks = sum(1 for e in first if e.is_attack)
        return EdgeClass(
            EdgeKind.INDIRECT, attacks_on_path=attacks, cyclic_input=cyclic
        )
    return EdgeClass(
        EdgeKind.MULTIFOLD,
        path_count=count,
        truncated=truncated,
        cyclic_input=cyclic,
    )


def predict_sign(qbaf: Qbaf, edge: Edge, topic: ArgumentId) -> SignPrediction:
    """Predicted sign of the edge's attribution value, from structure alone.

    Valid for direct and indirect edges under monotonic semantics: a direct
    attack can only lower the topic, a direct support only raise it, and
    each attack on an indirect edge's continuation path flips the
    direction. Multifold and disconnected edges are unpredictable.
    """
    klass = classify_edge(qbaf, edge, topic)
    if klass.kind is EdgeKind.DIRECT:
        return (
            SignPrediction.NON_POSITIVE
            if edge.is_attack
            else SignPrediction.NON_NEGATIVE
        )
    if klass.kind is EdgeKind.INDIRECT:
        flips = klass.attacks_on_path + (1 if edge.is_attack else 0)
        return (
            SignPrediction.NON_POSITIVE
            if flips % 2 == 1
            else SignPrediction.NON_NEGATIVE
        )
    return SignPrediction.UNKNOWN
