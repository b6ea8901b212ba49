"""The dynamic dependence graph and the slicing queries over it.

Vertices are dense integer addresses; an edge (a, b) means the value at b
depends on the value at a.  Every edge targets a vertex that was fresh when
the edge was added, so the graph is acyclic by construction.  Each vertex
carries a back-reference to the value rooted there, an optional attached
paragraph, a source span, and the kind of rule that created it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import EvalError, Span
from .values import Value, render_value


@dataclass
class Vertex:
    origin: str  # literal | constructor | dict | closure | primitive | result | doc
    span: Span | None
    value: Value | None = None
    paragraph: Value | None = None
    created_with: tuple[int, ...] = ()


class DepGraph:
    def __init__(self):
        self.vertices: list[Vertex] = []
        self.fwd: list[list[int]] = []  # address -> dependents
        self.bwd: list[list[int]] = []  # address -> dependencies

    def __len__(self) -> int:
        return len(self.vertices)

    def fresh_address(self) -> int:
        """Next unused address; the caller must insert it before asking again."""
        return len(self.vertices)

    def add_star(self, active: tuple[int, ...], addr: int, origin: str,
                 span: Span | None = None) -> int:
        """Insert addr with incoming edges exactly active x {addr}."""
        if addr < len(self.vertices):
            raise EvalError(f"address {addr} already present in graph")
        if addr != len(self.vertices):
            raise EvalError(f"address {addr} is not the next fresh address")
        deps = tuple(dict.fromkeys(active))
        self.vertices.append(Vertex(origin, span, created_with=deps))
        self.fwd.append([])
        self.bwd.append(list(deps))
        for src in deps:
            self.fwd[src].append(addr)
        return addr

    def add_result(self, dep_addrs, origin: str, span: Span | None = None) -> int:
        """Vertex for a primitive result, depending on the given operands."""
        return self.add_star(tuple(dep_addrs), self.fresh_address(), origin, span)

    def set_value(self, addr: int, value: Value) -> None:
        self.vertices[addr].value = value

    def attach_paragraph(self, addr: int, paragraph: Value) -> None:
        self.vertices[addr].paragraph = paragraph

    def has_doc(self, addr: int) -> bool:
        return self.vertices[addr].paragraph is not None

    def _check(self, roots) -> None:
        for r in roots:
            if not 0 <= r < len(self.vertices):
                raise EvalError(f"unknown vertex {r}")

    # -- slicing ---------------------------------------------------------------

    def backward_slice(self, roots) -> set[int]:
        """Everything the roots depend on, roots included."""
        return self._reach(roots, self.bwd)

    def forward_slice(self, roots) -> set[int]:
        """Everything depending on the roots, roots included."""
        return self._reach(roots, self.fwd)

    def _reach(self, roots, adjacency) -> set[int]:
        self._check(roots)
        seen = set(roots)
        queue = deque(roots)
        while queue:
            v = queue.popleft()
            for w in adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen

    def collect_intermediates(self, slice_set: set[int], roots,
                              direction: str = "upstream") -> list[tuple[int, Value]]:
        """Doc-tagged vertices inside the slice, in breadth-first discovery
        order from the selection roots (ties by ascending address)."""
        adjacency = self.bwd if direction == "upstream" else self.fwd
        seen = set()
        layer = sorted(set(roots))
        out = []
        while layer:
            nxt = set()
            for v in layer:
                if v in seen or v not in slice_set:
                    continue
                seen.add(v)
                if self.vertices[v].paragraph is not None:
                    out.append((v, self.vertices[v].paragraph))
                nxt.update(w for w in adjacency[v] if w not in seen)
            layer = sorted(nxt)
        return out


@dataclass(frozen=True)
class Selection:
    roots: frozenset[int]
    direction: str = "upstream"  # or "downstream"
    mode: str = "persistent"  # or "transient"


@dataclass
class SliceResult:
    reached: set[int]
    input_vertices: set[int]
    output_vertices: set[int]
    intermediate_roots: list[int]
    constant_vertices: set[int]
    intermediates: list[tuple[int, Value]] = field(default_factory=list)


def resolve_selection(graph: DepGraph, selection: Selection,
                      input_subtrees: dict[str, set[int]],
                      output_subtree: set[int]) -> SliceResult:
    """Slice from the selection roots and partition the reached vertices into
    input parts, output parts, doc-tagged intermediates and bare literals."""
    roots = sorted(selection.roots)
    if selection.direction == "upstream":
        reached = graph.backward_slice(roots)
    elif selection.direction == "downstream":
        reached = graph.forward_slice(roots)
    else:
        raise EvalError(f"unknown slice direction {selection.direction!r}")
    all_inputs: set[int] = set()
    for subtree in input_subtrees.values():
        all_inputs |= subtree
    intermediates = graph.collect_intermediates(reached, roots, selection.direction)
    inter_roots = [v for v, _ in intermediates]
    inputs, outputs, constants = set(), set(), set()
    inter_set = set(inter_roots)
    for v in reached:
        if v in all_inputs:
            inputs.add(v)
        elif v in output_subtree:
            outputs.add(v)
        elif v in inter_set:
            pass
        elif graph.vertices[v].origin == "literal":
            constants.add(v)
    return SliceResult(reached, inputs, outputs, inter_roots, constants, intermediates)


def vertex_role(graph: DepGraph, addr: int, all_inputs: set[int],
                output_subtree: set[int]) -> str:
    if addr in all_inputs:
        return "input"
    if addr in output_subtree:
        return "output"
    if graph.has_doc(addr):
        return "intermediate"
    if graph.vertices[addr].origin == "literal":
        return "constant"
    return "internal"


def export_graph(graph: DepGraph, input_subtrees: dict[str, set[int]],
                 output_subtree: set[int]) -> dict:
    """JSON-ready export: vertices with roles and summaries, plus edge list."""
    all_inputs: set[int] = set()
    for subtree in input_subtrees.values():
        all_inputs |= subtree
    vertices = []
    edges = []
    for addr, vertex in enumerate(graph.vertices):
        summary = render_value(vertex.value, limit=60) if vertex.value is not None else ""
        summary = summary.replace("\n", " ")
        vertices.append({
            "id": addr,
            "role": vertex_role(graph, addr, all_inputs, output_subtree),
            "valueSummary": summary,
            "hasDoc": vertex.paragraph is not None,
            "span": vertex.span.as_json() if vertex.span else None,
        })
        for dst in graph.fwd[addr]:
            edges.append([addr, dst])
    edges.sort()
    return {"vertices": vertices, "edges": edges}
