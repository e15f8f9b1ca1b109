"""Built-in catalog of presentation files shipped with the package."""

from __future__ import annotations

from importlib import resources

from .dsl import PresentationDoc, parse_presentation

CORPUS_NAMES = (
    "poly2",
    "poly3",
    "weyl",
    "un2",
    "qplane",
    "jordan",
    "qaffine3",
    "aq",
    "broken",
)


def corpus_source(name: str) -> str:
    if name not in CORPUS_NAMES:
        raise KeyError(f"unknown corpus entry {name!r}")
    return resources.files("spbw").joinpath(f"corpus/{name}.spbw").read_text(encoding="utf-8")


def corpus_doc(name: str) -> PresentationDoc:
    return parse_presentation(corpus_source(name))


def corpus() -> list:
    """All built-in documents, parse-validated, in catalog order."""
    return [corpus_doc(name) for name in CORPUS_NAMES]
