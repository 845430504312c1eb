"""Reading, writing and exporting frameworks.

The on-disk format is a JSON document:

    {
      "arguments": [{"id": "alpha", "base_score": 0.5, "label": "..."}, ...],
      "attacks":  [["beta", "alpha"], ...],
      "supports": [["gamma", "alpha"], ...],
      "metadata": {...}
    }

`base_score` defaults to 0.5 and `label` is optional display text; ids may
be strings or integers. Parsing validates everything the model validates
and reports the offending field. DOT export renders an attribution: blue
edges contribute positively, red negatively, gray neutrally, and the pen
width scales with the magnitude.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping

from .attribution import AttributionMap, Contribution, classify_attributions
from .model import (
    ArgumentId,
    Edge,
    FrameworkValidationError,
    Polarity,
    Qbaf,
    QbafError,
)

DEFAULT_BASE_SCORE = 0.5
_MIN_PEN_WIDTH = 0.5
_MAX_PEN_WIDTH = 6.0


class DocumentError(QbafError):
    """A framework document is syntactically or semantically invalid."""


@dataclass(frozen=True)
class QbafDocument:
    """A parsed framework plus its display labels and free-form metadata."""

    qbaf: Qbaf
    labels: Mapping[ArgumentId, str]
    metadata: Mapping[str, Any]


def _check_id(value: Any, where: str) -> ArgumentId:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise DocumentError(f"{where}: argument id must be a string or integer, got {value!r}")
    return value


def _parse_edges(
    raw: Any, polarity: Polarity, field: str, known: set[ArgumentId]
) -> list[Edge]:
    if raw is None:
        return []
    if not isinstance(raw, list):
        raise DocumentError(f"{field}: expected a list of [source, target] pairs")
    edges = []
    for i, pair in enumerate(raw):
        where = f"{field}[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise DocumentError(f"{where}: expected a [source, target] pair")
        source = _check_id(pair[0], where)
        target = _check_id(pair[1], where)
        for endpoint in (source, target):
            if endpoint not in known:
                raise DocumentError(f"{where}: unknown argument {endpoint!r}")
        edges.append(Edge(source, target, polarity))
    return edges


def document_to_qbaf(obj: Any) -> QbafDocument:
    """Validate a decoded JSON object and build the framework."""
    if not isinstance(obj, dict):
        raise DocumentError("document root must be an object")
    raw_args = obj.get("arguments")
    if not isinstance(raw_args, list):
        raise DocumentError("arguments: expected a list of argument objects")

    ids: list[ArgumentId] = []
    scores: dict[ArgumentId, float] = {}
    labels: dict[ArgumentId, str] = {}
    seen: set[ArgumentId] = set()
    for i, entry in enumerate(raw_args):
        where = f"arguments[{i}]"
        if not isinstance(entry, dict) or "id" not in entry:
            raise DocumentError(f"{where}: expected an object with an 'id' field")
        arg = _check_id(entry["id"], where)
        if arg in seen:
            raise DocumentError(f"{where}: duplicate argument id {arg!r}")
        seen.add(arg)
        ids.append(arg)
        score = entry.get("base_score", DEFAULT_BASE_SCORE)
        if isinstance(score, bool) or not isinstance(score, (int, float)):
            raise DocumentError(f"{where}.base_score: expected a number, got {score!r}")
        if not 0.0 <= float(score) <= 1.0:
            raise DocumentError(
                f"{where}.base_score: {score} outside [0, 1] for argument {arg!r}"
            )
        scores[arg] = float(score)
        if "label" in entry:
            if not isinstance(entry["label"], str):
                raise DocumentError(f"{where}.label: expected a string")
            labels[arg] = entry["label"]

    edges = _parse_edges(obj.get("attacks"), Polarity.ATTACK, "attacks", seen)
    edges += _parse_edges(obj.get("supports"), Polarity.SUPPORT, "supports", seen)

    metadata = obj.get("metadata", {})
    if not isinstance(metadata, dict):
        raise DocumentError("metadata: expected an object")

    try:
        qbaf = Qbaf(ids, edges, scores)
    except FrameworkValidationError as exc:
        raise DocumentError(str(exc)) from exc
    return QbafDocument(qbaf=qbaf, labels=labels, metadata=metadata)


def load_document(text: str) -> QbafDocument:
    """Parse a JSON framework document from text."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return document_to_qbaf(obj)


def parse_qbaf(text: str) -> Qbaf:
    """Parse a JSON framework document, returning just the framework."""
    return load_document(text).qbaf


def read_qbaf_file(path) -> QbafDocument:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    return load_document(text)


def qbaf_to_document(qbaf: Qbaf, labels: Mapping[ArgumentId, str] | None = None) -> dict:
    """Plain-JSON representation of a framework, canonically ordered."""
    labels = labels or {}
    arguments = []
    for a in qbaf.arguments:
        entry: dict[str, Any] = {"id": a, "base_score": qbaf.base_scores[a]}
        if a in labels:
            entry["label"] = labels[a]
        arguments.append(entry)
    return {
        "arguments": arguments,
        "attacks": [[e.source, e.target] for e in qbaf.attacks],
        "supports": [[e.source, e.target] for e in qbaf.supports],
    }


def serialize_qbaf(qbaf: Qbaf, labels: Mapping[ArgumentId, str] | None = None) -> str:
    """JSON text such that `parse_qbaf(serialize_qbaf(q)) == q`."""
    return json.dumps(qbaf_to_document(qbaf, labels), indent=2) + "\n"


def _dot_quote(value: Any) -> str:
    text = str(value).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{text}"'


_EDGE_COLORS = {
    Contribution.POSITIVE: "blue",
    Contribution.NEGATIVE: "red",
    Contribution.NEUTRAL: "gray",
}


def export_dot(
    qbaf: Qbaf,
    attribution: AttributionMap,
    epsilon: float | None = None,
) -> str:
    """Graphviz rendering of an attribution over the framework.

    Positive edges are blue, negative red, neutral gray; attack edges are
    labelled "-" and supports "+". Pen widths map |value| affinely onto
    [0.5, 6.0], with neutral edges at the minimum. Output is byte-stable
    for fixed inputs.
    """
    if set(attribution.values) != set(qbaf.edges):
        raise QbafError(
            "attribution does not cover exactly the framework's edges"
        )
    contributions = classify_attributions(attribution, epsilon)
    scale = max(
        (abs(v) for e, v in attribution.values.items()
         if contributions[e] is not Contribution.NEUTRAL),
        default=0.0,
    )

    lines = ["digraph qbaf {"]
    for a in qbaf.arguments:
        label = f"{a} ({qbaf.base_scores[a]:.2f})"
        lines.append(f"  {_dot_quote(a)} [label={_dot_quote(label)}];")
    for edge in qbaf.edges:
        value = attribution.values[edge]
        contribution = contributions[edge]
        if contribution is Contribution.NEUTRAL or scale == 0.0:
            width = _MIN_PEN_WIDTH
        else:
            width = _MIN_PEN_WIDTH + (_MAX_PEN_WIDTH - _MIN_PEN_WIDTH) * (
                abs(value) / scale
            )
        sign = "-" if edge.is_attack else "+"
        lines.append(
            f"  {_dot_quote(edge.source)} -> {_dot_quote(edge.target)} "
            f'[label="{sign}", color={_EDGE_COLORS[contribution]}, '
            f"penwidth={width:.3f}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def path_contribution(attribution: AttributionMap, path) -> float:
    """Sum of the attribution values along a path of edges."""
    total = 0.0
    for edge in path:
        if edge not in attribution.values:
            raise QbafError(f"path edge {edge} missing from the attribution")
        total += attribution.values[edge]
    return total
