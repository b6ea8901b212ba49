"""Renderable view specifications for values, and the element <-> vertex
mapping that lets selections travel between the page and the graph.

Supported shapes: matrices, tables (lists of dictionaries with uniform
keys), bar charts, stacked bar charts, multi-views, paragraphs (with
embedded values and sub-views), and scalars.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ViewError
from .values import (
    ConstrVal, DictVal, DocVal, FloatVal, IntVal, StrVal, Value,
    list_elements, render_value, strip_doc,
)


@dataclass
class ViewSpec:
    kind: str
    json: dict
    elements: dict[str, int]  # local element id -> vertex id
    children: dict[str, "ViewSpec"] = field(default_factory=dict)

    def to_json(self) -> dict:
        return self.json


def iter_elements(view: ViewSpec, prefix: str = ""):
    """Yield (qualified element id, vertex id) over a view and its children."""
    for local, vertex in view.elements.items():
        yield (f"{prefix}{local}", vertex)
    for name, child in view.children.items():
        yield from iter_elements(child, f"{prefix}{name}/")


def element_to_vertices(view: ViewSpec, element_id: str) -> set[int]:
    """Vertices of the value underlying one interactive element."""
    for eid, vertex in iter_elements(view):
        if eid == element_id:
            return {vertex}
    raise ViewError(f"unknown element {element_id!r}")


def apply_slice(view: ViewSpec, reached, mode: str = "persistent") -> dict[str, str]:
    """Element id -> highlight mode for every element whose vertex was reached."""
    if hasattr(reached, "reached"):
        reached = reached.reached
    return {eid: mode for eid, vertex in iter_elements(view) if vertex in reached}


class HighlightState:
    """Per-element highlight flags.  Persistent flags survive transient
    updates; transient flags clear on hover exit."""

    def __init__(self):
        self.flags: dict[str, str] = {}

    def apply(self, highlights: dict[str, str]) -> None:
        for eid, mode in highlights.items():
            if mode == "persistent":
                self.flags[eid] = "persistent"
            elif self.flags.get(eid) != "persistent":
                self.flags[eid] = "transient"

    def clear_transient(self) -> None:
        self.flags = {k: v for k, v in self.flags.items() if v == "persistent"}

    def state_of(self, eid: str) -> str:
        return self.flags.get(eid, "none")


# -- building views from values ---------------------------------------------------


def build_view(value: Value) -> ViewSpec:
    """Map a fully evaluated value to its built-in visualisation."""
    v = strip_doc(value)
    if isinstance(v, ConstrVal):
        if v.name == "Matrix":
            return _matrix_view(v)
        if v.name == "Paragraph":
            return _paragraph_view(v)
        if v.name == "BarChart":
            return _bar_chart_view(v)
        if v.name == "StackedBar":
            return _stacked_bar_view(v)
        if v.name == "MultiView":
            return _multi_view(v)
        if v.name in ("Cons", "Nil"):
            elems = [strip_doc(e) for e in list_elements(v)]
            if elems and all(isinstance(e, DictVal) for e in elems):
                return _table_view(v, elems)
    if isinstance(v, DictVal):
        return _table_view(None, [v])
    return _scalar_view(v)


def _scalar_view(v: Value) -> ViewSpec:
    text = render_value(v)
    return ViewSpec("scalar", {
        "kind": "scalar",
        "text": text,
        "elements": [{"elementId": "value", "vertexId": v.addr, "text": text}],
    }, {"value": v.addr})


def _scalar_text(v: Value) -> str:
    v = strip_doc(v)
    if isinstance(v, StrVal):
        return v.value
    if isinstance(v, IntVal):
        return str(v.value)
    if isinstance(v, FloatVal):
        return repr(v.value)
    return render_value(v)


def _matrix_view(v: ConstrVal) -> ViewSpec:
    rows = strip_doc(v.args[0])
    cols = strip_doc(v.args[1])
    if not isinstance(rows, IntVal) or not isinstance(cols, IntVal):
        raise ViewError("matrix dimensions must be integers")
    cells = list_elements(v.args[2])
    if len(cells) != rows.value * cols.value:
        raise ViewError(
            f"ragged matrix: {rows.value}×{cols.value} with {len(cells)} cells")
    elements = {}
    cell_json = []
    for k, cell in enumerate(cells):
        r, c = divmod(k, cols.value)
        eid = f"cell:{r},{c}"
        root = strip_doc(cell)
        elements[eid] = root.addr
        cell_json.append({
            "elementId": eid, "vertexId": root.addr,
            "row": r, "col": c, "text": _scalar_text(root),
        })
    return ViewSpec("matrix", {
        "kind": "matrix", "rows": rows.value, "cols": cols.value,
        "elements": cell_json,
    }, elements)


def _table_view(root: Value | None, rows: list[DictVal]) -> ViewSpec:
    columns = list(rows[0].entries.keys())
    for row in rows[1:]:
        if list(row.entries.keys()) != columns and set(row.entries) != set(columns):
            raise ViewError("heterogeneous table rows")
    elements = {}
    element_json = []
    for i, row in enumerate(rows):
        rid = f"row:{i}"
        elements[rid] = row.addr
        element_json.append({"elementId": rid, "vertexId": row.addr,
                             "type": "row", "row": i})
        for col in columns:
            cell = strip_doc(row.entries[col])
            eid = f"cell:{i},{col}"
            elements[eid] = cell.addr
            element_json.append({
                "elementId": eid, "vertexId": cell.addr, "type": "cell",
                "row": i, "column": col, "text": _scalar_text(cell),
            })
    return ViewSpec("table", {
        "kind": "table", "columns": columns, "elements": element_json,
    }, elements)


def _field(record: DictVal, name: str, context: str) -> Value:
    if name not in record.entries:
        raise ViewError(f"{context} record is missing field {name!r}")
    return record.entries[name]


def _chart_config(v: ConstrVal, context: str) -> DictVal:
    config = strip_doc(v.args[0])
    if not isinstance(config, DictVal):
        raise ViewError(f"{context} expects a dictionary argument")
    return config


def _chart_title(config: DictVal) -> str:
    if "title" in config.entries:
        return _scalar_text(config.entries["title"])
    return ""


def _bar_chart_view(v: ConstrVal) -> ViewSpec:
    config = _chart_config(v, "BarChart")
    bars = list_elements(_field(config, "bars", "BarChart"))
    elements = {}
    element_json = []
    for i, bar in enumerate(bars):
        record = strip_doc(bar)
        if not isinstance(record, DictVal):
            raise ViewError("BarChart bars must be dictionaries")
        eid = f"bar:{i}"
        elements[eid] = record.addr
        element_json.append({
            "elementId": eid, "vertexId": record.addr,
            "label": _scalar_text(_field(record, "label", "bar")),
            "value": _number(_field(record, "value", "bar")),
        })
    return ViewSpec("barChart", {
        "kind": "barChart", "title": _chart_title(config), "elements": element_json,
    }, elements)


def _stacked_bar_view(v: ConstrVal) -> ViewSpec:
    config = _chart_config(v, "StackedBar")
    bars = list_elements(_field(config, "bars", "StackedBar"))
    elements = {}
    element_json = []
    labels = []
    for i, bar in enumerate(bars):
        record = strip_doc(bar)
        if not isinstance(record, DictVal):
            raise ViewError("StackedBar bars must be dictionaries")
        label = _scalar_text(_field(record, "label", "stacked bar"))
        labels.append(label)
        segments = list_elements(_field(record, "segments", "stacked bar"))
        for j, seg in enumerate(segments):
            seg_record = strip_doc(seg)
            if not isinstance(seg_record, DictVal):
                raise ViewError("StackedBar segments must be dictionaries")
            eid = f"seg:{i},{j}"
            elements[eid] = seg_record.addr
            element_json.append({
                "elementId": eid, "vertexId": seg_record.addr, "bar": label,
                "barIndex": i,
                "group": _scalar_text(_field(seg_record, "group", "segment")),
                "value": _number(_field(seg_record, "value", "segment")),
            })
    return ViewSpec("stackedBar", {
        "kind": "stackedBar", "title": _chart_title(config), "bars": labels,
        "elements": element_json,
    }, elements)


def _multi_view(v: ConstrVal) -> ViewSpec:
    config = strip_doc(v.args[0])
    if not isinstance(config, DictVal):
        raise ViewError("MultiView expects a dictionary of named children")
    children = {}
    child_json = {}
    for name, child in config.entries.items():
        view = build_view(child)
        children[name] = view
        child_json[name] = view.to_json()
    return ViewSpec("multi", {"kind": "multi", "children": child_json},
                    {}, children)


_EMBEDDED = ("Matrix", "BarChart", "StackedBar", "MultiView", "Paragraph")


def _paragraph_view(v: ConstrVal) -> ViewSpec:
    runs = []
    elements = {}
    children = {}
    element_json = []
    for i, item in enumerate(list_elements(v.args[0])):
        value = strip_doc(item)
        if isinstance(value, StrVal):
            runs.append({"type": "text", "text": value.value})
            continue
        as_value_run = isinstance(value, (IntVal, FloatVal))
        if isinstance(value, ConstrVal):
            if value.name in ("Cons", "Nil"):
                elems = [strip_doc(e) for e in list_elements(value)]
                as_value_run = not (elems and all(isinstance(e, DictVal)
                                                  for e in elems))
            else:
                as_value_run = value.name not in _EMBEDDED
        if as_value_run:
            eid = f"run:{i}"
            text = _scalar_text(value)
            elements[eid] = value.addr
            runs.append({"type": "value", "elementId": eid,
                         "vertexId": value.addr, "text": text})
            element_json.append({"elementId": eid, "vertexId": value.addr,
                                 "text": text})
            continue
        child_name = f"embed:{i}"
        child = build_view(value)
        children[child_name] = child
        runs.append({"type": "view", "name": child_name, "view": child.to_json()})
    return ViewSpec("paragraph", {
        "kind": "paragraph", "runs": runs, "elements": element_json,
    }, elements, children)


def _number(v: Value):
    v = strip_doc(v)
    if isinstance(v, (IntVal, FloatVal)):
        return v.value
    raise ViewError("expected a numeric field")
