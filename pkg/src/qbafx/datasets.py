"""Bundled example frameworks.

Each loader returns a `QbafDocument`; the document metadata carries the
intended topic argument, the semantics the dataset is normally analysed
under, and (for the case studies) reference values used by the
`case-study` command for side-by-side comparison.
"""

from __future__ import annotations

from importlib import resources

from .io import QbafDocument, load_document


def _load(name: str) -> QbafDocument:
    text = resources.files("qbafx.data").joinpath(name).read_text(encoding="utf-8")
    return load_document(text)


def small_demo() -> QbafDocument:
    """Five arguments, five edges; one attacker reaches the topic twice."""
    return _load("small_demo.json")


def movie_review() -> QbafDocument:
    """Movie-rating framework where one review pulls in both directions."""
    return _load("movie_review.json")


def language_claim() -> QbafDocument:
    """Non-tree framework over a claim about children learning languages."""
    return _load("language_claim.json")


def fraud_detection() -> QbafDocument:
    """48-argument fraud-detection evidence framework (47 edges)."""
    return _load("fraud_detection.json")


CASE_STUDIES = {
    "fraud": fraud_detection,
    "llm": language_claim,
}
