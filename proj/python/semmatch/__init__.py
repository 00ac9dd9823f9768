"""Semantic matchmaking over half agreements, with a super-peer simulator.

Schemas, agreements and configs are plain dicts (or paths to their JSON
files); results come back as dicts, except sweeps (CSV text) and traces
(lists of event dicts).
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from . import _core
from ._core import (
    IoError,
    ParseError,
    ProtocolError,
    SemmatchError,
    Taxonomy,
    ValidationError,
    label_similarity,
    tokenize_label,
)

__all__ = [
    "IoError",
    "ParseError",
    "ProtocolError",
    "ScenarioFailure",
    "SemmatchError",
    "Taxonomy",
    "ValidationError",
    "bind",
    "compare",
    "default_config",
    "evaluate",
    "label_similarity",
    "match",
    "score_candidates",
    "simulate",
    "sweep",
    "tokenize_label",
]

Doc = Union[str, os.PathLike, Mapping[str, Any]]

# Keyword spellings accepted by the config helpers.
_CONFIG_KEYS = {
    "label_threshold": "labelThreshold",
    "external_threshold": "externalThreshold",
    "confidence_threshold": "confidenceThreshold",
    "label_weight": "labelWeight",
    "external_weight": "externalWeight",
    "internal_weight": "internalWeight",
    "measure": "measure",
    "one_to_one": "oneToOne",
    "flat_neutral": "flatNeutral",
    "edit_distance_fallback": "editDistanceFallback",
}


def _text(doc: Doc) -> str:
    if isinstance(doc, Mapping):
        return json.dumps(doc)
    path = Path(doc)
    try:
        return path.read_text()
    except OSError as exc:
        raise IoError(f"cannot open '{path}'") from exc


def _config(overrides: Mapping[str, Any]) -> str:
    if not overrides:
        return ""
    out = {}
    for key, value in overrides.items():
        if key not in _CONFIG_KEYS:
            raise TypeError(f"unknown match option '{key}'")
        out[_CONFIG_KEYS[key]] = value
    return json.dumps(out)


def _taxonomy(taxonomy: Optional[Taxonomy]) -> Taxonomy:
    return taxonomy if taxonomy is not None else Taxonomy.bundled()


def default_config() -> dict:
    return json.loads(_core.default_config())


def match(export: Doc, common: Doc, *, taxonomy: Optional[Taxonomy] = None,
          peer_id: str = "", **config: Any) -> dict:
    """Half agreement of an export schema against a common ontology."""
    return json.loads(_core.build_half_agreement(
        _taxonomy(taxonomy), _text(export), _text(common), _config(config), peer_id))


def score_candidates(export: Doc, common: Doc, *, taxonomy: Optional[Taxonomy] = None,
                     **config: Any) -> list:
    """Every scored (source, target) pair, including nonSimilar ones."""
    return json.loads(_core.score_candidates(
        _taxonomy(taxonomy), _text(export), _text(common), _config(config)))


def compare(requester: Doc, provider: Doc, *, exact_floor: float = 0.9,
            similar_floor: float = 0.5) -> dict:
    return json.loads(_core.compare_half_agreements(
        _text(requester), _text(provider), exact_floor, similar_floor))


def bind(requester: Doc, provider: Doc) -> dict:
    return json.loads(_core.compose(_text(requester), _text(provider)))


def evaluate(produced: Doc, gold: Union[str, os.PathLike]) -> dict:
    """Precision, recall and F-measure against a gold TSV file."""
    return json.loads(_core.evaluate(_text(produced), _text(gold)))


def sweep(fixture_dir: Union[str, os.PathLike], grid: Optional[list] = None, *,
          taxonomy: Optional[Taxonomy] = None) -> str:
    d = Path(fixture_dir)
    return _core.sweep(_taxonomy(taxonomy), _text(d / "export.json"), _text(d / "co.json"),
                       _text(d / "gold.tsv"), json.dumps(grid) if grid is not None else "")


class ScenarioFailure(SemmatchError):
    """A scenario stopped early; `trace` holds the events up to the failure."""

    def __init__(self, line: int, message: str, trace: list):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.trace = trace


def simulate(scenario: Union[str, os.PathLike], *, seed: int = 0, latency_ticks: int = 1,
             drop_probability: float = 0.0, max_ticks: int = 1_000_000,
             taxonomy: Optional[Taxonomy] = None, **config: Any) -> list:
    """Run a scenario file and return its trace as a list of event dicts."""
    path = Path(scenario)
    jsonl, line, message = _core.run_scenario(
        _text(path), str(path.parent), _taxonomy(taxonomy), seed, latency_ticks,
        drop_probability, max_ticks, _config(config))
    trace = [json.loads(s) for s in jsonl.splitlines()]
    if line is not None:
        raise ScenarioFailure(line, message, trace)
    return trace
