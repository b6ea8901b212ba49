"""Run configuration, bundle export, and the selection protocol.

A document is the frozen result of one program run: the output view, one
view per designated input, the graph export, and an index of doc-tagged
intermediates.  Selections are stateless queries over it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, EvalError
from .graph import DepGraph, Selection, export_graph, resolve_selection
from .loader import ProgramResult, evaluate_program
from .values import Env, Value, value_subtree
from .views import ViewSpec, apply_slice, build_view

DEFAULT_PORT = 8787


@dataclass
class RunConfig:
    entry: Path
    inputs: list[str]
    port: int = DEFAULT_PORT
    export_path: Path | None = None

    @staticmethod
    def load(entry: str | Path, config_path: str | Path | None = None,
             port: int | None = None, export_path: str | Path | None = None
             ) -> RunConfig:
        """Read fluence.json beside the entry file unless overridden."""
        entry = Path(entry)
        if not entry.is_file():
            raise ConfigError(f"no such file: {entry}")
        path = Path(config_path) if config_path else entry.parent / "fluence.json"
        data = {}
        if config_path is not None and not path.is_file():
            raise ConfigError(f"no such config file: {path}")
        if path.is_file():
            try:
                data = json.loads(path.read_text("utf-8"))
            except json.JSONDecodeError as err:
                raise ConfigError(f"bad config {path}: {err}") from None
            if not isinstance(data, dict):
                raise ConfigError(f"bad config {path}: expected an object")
        inputs = data.get("inputs", [])
        if (not isinstance(inputs, list)
                or any(not isinstance(name, str) for name in inputs)):
            raise ConfigError("config field 'inputs' must be a list of names")
        cfg_port = port if port is not None else data.get("port", DEFAULT_PORT)
        export = export_path if export_path is not None else data.get("export")
        return RunConfig(entry, inputs, int(cfg_port),
                         Path(export) if export else None)


class Document:
    """Immutable post-run state shared by export and the HTTP service."""

    def __init__(self, config: RunConfig, result: ProgramResult):
        self.config = config
        self.result = result
        self.graph: DepGraph = result.graph
        self.output_view = build_view(result.value)
        self.input_views: dict[str, ViewSpec] = {}
        self.input_subtrees: dict[str, set[int]] = {}
        for name in config.inputs:
            try:
                value = result.env.lookup(name)
            except EvalError:
                raise ConfigError(
                    f"input {name!r} is not bound at top level") from None
            self.input_views[name] = build_view(value)
            self.input_subtrees[name] = value_subtree(value)
        self.output_subtree = value_subtree(result.value)

    # -- intermediates ---------------------------------------------------------

    def _intermediate_entry(self, vertex_id: int, paragraph: Value) -> dict:
        value = self.graph.vertices[vertex_id].value
        span = self.graph.vertices[vertex_id].span
        return {
            "vertexId": vertex_id,
            "paragraph": build_view(paragraph).to_json(),
            "view": build_view(value).to_json(),
            "span": span.as_json() if span else None,
        }

    def intermediates_index(self) -> list[dict]:
        return [self._intermediate_entry(addr, vertex.paragraph)
                for addr, vertex in enumerate(self.graph.vertices)
                if vertex.paragraph is not None]

    # -- bundle ------------------------------------------------------------------

    def bundle(self) -> dict:
        return {
            "protocol": "fluence/1",
            "entry": self.config.entry.name,
            "program": self.result.source,
            "output": self.output_view.to_json(),
            "inputs": {name: view.to_json()
                       for name, view in self.input_views.items()},
            "graph": export_graph(self.graph, self.input_subtrees,
                                  self.output_subtree),
            "intermediates": self.intermediates_index(),
        }

    def bundle_text(self) -> str:
        return json.dumps(self.bundle(), indent=2) + "\n"

    # -- selection ----------------------------------------------------------------

    def select(self, roots: list[int], direction: str, mode: str) -> dict:
        """Resolve one selection; identical requests yield identical replies."""
        if direction not in ("upstream", "downstream"):
            raise EvalError(f"unknown direction {direction!r}")
        if mode not in ("persistent", "transient"):
            raise EvalError(f"unknown mode {mode!r}")
        selection = Selection(frozenset(roots), direction, mode)
        result = resolve_selection(self.graph, selection, self.input_subtrees,
                                   self.output_subtree)
        highlights: dict[str, str] = {}
        for name, view in self.input_views.items():
            for eid, state in apply_slice(view, result.reached, mode).items():
                highlights[f"input:{name}/{eid}"] = state
        for eid, state in apply_slice(self.output_view, result.reached, mode).items():
            highlights[f"output/{eid}"] = state
        intermediates = []
        for vertex_id, paragraph in result.intermediates:
            entry = self._intermediate_entry(vertex_id, paragraph)
            intermediates.append(entry)
            view = build_view(self.graph.vertices[vertex_id].value)
            for eid, state in apply_slice(view, result.reached, mode).items():
                highlights[f"intermediate:{vertex_id}/{eid}"] = state
        return {
            "reached": sorted(result.reached),
            "intermediates": intermediates,
            "highlights": highlights,
        }


def build_document(config: RunConfig) -> Document:
    return Document(config, evaluate_program(config.entry))


def export_bundle(config: RunConfig) -> Path:
    """Write the document bundle; byte-identical for identical programs."""
    document = build_document(config)
    out = config.export_path or config.entry.with_suffix(".bundle.json")
    try:
        out.write_text(document.bundle_text(), "utf-8")
    except OSError as err:
        raise ConfigError(f"cannot write bundle: {err}") from None
    return out
