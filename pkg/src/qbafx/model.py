"""Immutable quantitative bipolar argumentation frameworks.

A framework is a set of arguments, each with a base score in [0, 1], plus
disjoint attack and support relations between arguments. Instances are
validated at construction and never mutated afterwards; the two
transformation primitives (`restrict`, `override_base_scores`) return new
frameworks. All collections are kept in a canonical order so that equal
frameworks compare equal regardless of how their parts were listed, and so
that every downstream computation is deterministic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Mapping, Union

ArgumentId = Union[str, int]


class QbafError(Exception):
    """Base class for all framework-related errors."""


class FrameworkValidationError(QbafError):
    """A framework invariant is violated at construction time."""


class UnknownArgumentError(QbafError):
    """An operation referenced an argument that is not in the framework."""


class InvalidSubsetError(QbafError):
    """An edge-subset operation received edges outside the framework."""


class InvalidBaseScoresError(QbafError):
    """A base-score override is incomplete or out of range."""


class Polarity(str, Enum):
    ATTACK = "attack"
    SUPPORT = "support"


def argument_sort_key(argument: ArgumentId) -> tuple:
    """Total order over mixed int/str identifiers: ints first, numerically."""
    if isinstance(argument, int):
        return (0, argument, "")
    return (1, 0, str(argument))


@dataclass(frozen=True)
class Edge:
    """A directed attack or support between two arguments."""

    source: ArgumentId
    target: ArgumentId
    polarity: Polarity

    @property
    def is_attack(self) -> bool:
        return self.polarity is Polarity.ATTACK

    @property
    def is_support(self) -> bool:
        return self.polarity is Polarity.SUPPORT

    def __str__(self) -> str:
        sign = "-" if self.is_attack else "+"
        return f"{sign}({self.source},{self.target})"


def edge_sort_key(edge: Edge) -> tuple:
    return (
        argument_sort_key(edge.source),
        argument_sort_key(edge.target),
        edge.polarity.value,
    )


def attack(source: ArgumentId, target: ArgumentId) -> Edge:
    return Edge(source, target, Polarity.ATTACK)


def support(source: ArgumentId, target: ArgumentId) -> Edge:
    return Edge(source, target, Polarity.SUPPORT)


def _validate_score(argument: ArgumentId, score: object) -> float:
    if isinstance(score, bool) or not isinstance(score, (int, float)):
        raise FrameworkValidationError(
            f"base score of {argument!r} must be a number, got {score!r}"
        )
    value = float(score)
    if not 0.0 <= value <= 1.0:
        raise FrameworkValidationError(
            f"base score of {argument!r} must lie in [0, 1], got {value}"
        )
    return value


@dataclass(frozen=True, eq=False)
class Qbaf:
    """A quantitative bipolar argumentation framework.

    Parameters may be given in any order and any iterable form; they are
    normalised to canonical tuples. Arguments missing from `base_scores`
    default to 0.5. Self-edges are allowed; a pair may carry edges in both
    directions, but a single ordered pair may not appear twice (in
    particular it cannot both attack and support).
    """

    arguments: tuple[ArgumentId, ...]
    edges: tuple[Edge, ...]
    base_scores: Mapping[ArgumentId, float]

    def __init__(
        self,
        arguments: Iterable[ArgumentId],
        edges: Iterable[Edge] = (),
        base_scores: Mapping[ArgumentId, float] | None = None,
    ) -> None:
        args = list(arguments)
        arg_set = set(args)
        if len(arg_set) != len(args):
            counts = Counter(args)
            dupes = sorted(
                (a for a, c in counts.items() if c > 1), key=argument_sort_key
            )
            raise FrameworkValidationError(f"duplicate arguments: {dupes}")

        scores = dict(base_scores or {})
        unknown = set(scores) - arg_set
        if unknown:
            raise FrameworkValidationError(
                f"base scores given for unknown arguments: {sorted(unknown, key=argument_sort_key)}"
            )
        normalised = {
            a: _validate_score(a, scores.get(a, 0.5)) for a in args
        }

        edge_list = list(edges)
        pairs: set[tuple[ArgumentId, ArgumentId]] = set()
        for edge in edge_list:
            if not isinstance(edge, Edge):
                raise FrameworkValidationError(f"not an Edge: {edge!r}")
            if edge.source not in arg_set or edge.target not in arg_set:
                raise FrameworkValidationError(
                    f"edge {edge} references an argument outside the framework"
                )
            pair = (edge.source, edge.target)
            if pair in pairs:
                raise FrameworkValidationError(
                    f"ordered pair {pair} appears more than once; attack and "
                    "support relations must be disjoint"
                )
            pairs.add(pair)

        object.__setattr__(
            self, "arguments", tuple(sorted(args, key=argument_sort_key))
        )
        object.__setattr__(self, "edges", tuple(sorted(edge_list, key=edge_sort_key)))
        object.__setattr__(
            self,
            "base_scores",
            MappingProxyType({a: normalised[a] for a in self.arguments}),
        )
        object.__setattr__(self, "_argument_set", arg_set)
        object.__setattr__(
            self, "_by_pair", {(e.source, e.target): e for e in self.edges}
        )

    # -- queries ---------------------------------------------------------

    @property
    def attacks(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.is_attack)

    @property
    def supports(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.is_support)

    def has_argument(self, argument: ArgumentId) -> bool:
        return argument in self._argument_set

    def edge_between(self, source: ArgumentId, target: ArgumentId) -> Edge | None:
        return self._by_pair.get((source, target))

    def outgoing(self, argument: ArgumentId) -> tuple[Edge, ...]:
        """All edges whose source is `argument`, in canonical order."""
        self._require(argument)
        return tuple(e for e in self.edges if e.source == argument)

    def incoming(self, argument: ArgumentId) -> tuple[Edge, ...]:
        """All edges whose target is `argument`, in canonical order."""
        self._require(argument)
        return tuple(e for e in self.edges if e.target == argument)

    def base_score(self, argument: ArgumentId) -> float:
        self._require(argument)
        return self.base_scores[argument]

    def _require(self, argument: ArgumentId) -> None:
        if argument not in self._argument_set:
            raise UnknownArgumentError(f"unknown argument: {argument!r}")

    # -- transformations -------------------------------------------------

    def restrict(self, edge_subset: Iterable[Edge]) -> "Qbaf":
        """The framework with the edge set replaced by `edge_subset`.

        Arguments and base scores are unchanged. Every member of the subset
        must be an edge of this framework.
        """
        subset = list(edge_subset)
        own = set(self.edges)
        stray = [e for e in subset if e not in own]
        if stray:
            raise InvalidSubsetError(
                f"edges not in the framework: {[str(e) for e in stray]}"
            )
        return Qbaf(self.arguments, subset, dict(self.base_scores))

    def remove_edge(self, edge: Edge) -> "Qbaf":
        if edge not in set(self.edges):
            raise InvalidSubsetError(f"edge not in the framework: {edge}")
        return self.restrict(e for e in self.edges if e != edge)

    def override_base_scores(self, scores: Mapping[ArgumentId, float]) -> "Qbaf":
        """The framework with the base-score function replaced by `scores`.

        `scores` must assign a value in [0, 1] to every argument.
        """
        missing = [a for a in self.arguments if a not in scores]
        if missing:
            raise InvalidBaseScoresError(
                f"override misses arguments: {missing}"
            )
        unknown = set(scores) - self._argument_set
        if unknown:
            raise InvalidBaseScoresError(
                f"override names unknown arguments: {sorted(unknown, key=argument_sort_key)}"
            )
        for a, v in scores.items():
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not 0.0 <= float(v) <= 1.0:
                raise InvalidBaseScoresError(
                    f"base score of {a!r} must lie in [0, 1], got {v!r}"
                )
        return Qbaf(self.arguments, self.edges, dict(scores))

    def with_base_score(self, argument: ArgumentId, score: float) -> "Qbaf":
        """Convenience: override a single argument's base score."""
        self._require(argument)
        scores = dict(self.base_scores)
        scores[argument] = score
        return self.override_base_scores(scores)

    # -- equality --------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Qbaf):
            return NotImplemented
        return (
            self.arguments == other.arguments
            and self.edges == other.edges
            and dict(self.base_scores) == dict(other.base_scores)
        )

    def __repr__(self) -> str:
        return (
            f"Qbaf({len(self.arguments)} arguments, "
            f"{len(self.attacks)} attacks, {len(self.supports)} supports)"
        )
