"""Core language: the desugaring target that the evaluator runs.

Expressions carry spans for diagnostics and vertex annotations; spans are
excluded from equality.  A continuation is either a core expression (match
complete) or a nested eliminator (more sub-patterns to consume).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .errors import Span


def _span_field():
    return field(compare=False, repr=False)


@dataclass(frozen=True)
class CVar:
    name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class CInt:
    value: int
    span: Span = _span_field()


@dataclass(frozen=True)
class CFloat:
    value: float
    span: Span = _span_field()


@dataclass(frozen=True)
class CStr:
    value: str
    span: Span = _span_field()


@dataclass(frozen=True)
class CApp:
    fn: CoreExpr
    arg: CoreExpr
    span: Span = _span_field()


@dataclass(frozen=True)
class COp:
    """First-class primitive operator."""

    name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class CConstr:
    name: str
    args: tuple[CoreExpr, ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class CDict:
    entries: tuple[tuple[str, CoreExpr], ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class CProject:
    target: CoreExpr
    field_name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class CDynProject:
    target: CoreExpr
    key: CoreExpr
    span: Span = _span_field()


@dataclass(frozen=True)
class CLambda:
    elim: Eliminator
    span: Span = _span_field()


@dataclass(frozen=True)
class CLet:
    name: str
    bound: CoreExpr
    body: CoreExpr
    span: Span = _span_field()


@dataclass(frozen=True)
class CLetRec:
    defs: tuple[tuple[str, Eliminator], ...]
    body: CoreExpr
    span: Span = _span_field()


@dataclass(frozen=True)
class CDoc:
    doc: CoreExpr
    target: CoreExpr
    span: Span = _span_field()


CoreExpr = Union[
    CVar, CInt, CFloat, CStr, CApp, COp, CConstr, CDict, CProject,
    CDynProject, CLambda, CLet, CLetRec, CDoc,
]


@dataclass(frozen=True)
class ElimVar:
    name: str
    cont: Continuation


@dataclass(frozen=True)
class ElimDict:
    fields: tuple[str, ...]  # sorted, duplicate-free
    cont: Continuation


@dataclass(frozen=True)
class ElimConstr:
    branches: tuple[tuple[str, Continuation], ...]

    def branch(self, name: str) -> Continuation | None:
        for c, cont in self.branches:
            if c == name:
                return cont
        return None


Eliminator = Union[ElimVar, ElimDict, ElimConstr]
Continuation = Union[CoreExpr, Eliminator]  # type: ignore[valid-type]


_CORE_TYPES = (
    CVar, CInt, CFloat, CStr, CApp, COp, CConstr, CDict, CProject,
    CDynProject, CLambda, CLet, CLetRec, CDoc,
)


def is_eliminator(k) -> bool:
    return isinstance(k, (ElimVar, ElimDict, ElimConstr))


def is_core_expr(node) -> bool:
    return isinstance(node, _CORE_TYPES)


# -- s-expression dump (golden tests, --dump-core) ------------------------------


def to_sexpr(node) -> str:
    """Render a core expression or eliminator as a stable s-expression."""
    return "".join(_sexpr(node, 0))


def _atom(text: str) -> str:
    return text


def _sexpr(node, depth: int) -> list[str]:
    pad = "  " * depth
    nl = "\n" + "  " * (depth + 1)

    def group(head: str, children: list) -> list[str]:
        if not children:
            return [pad and "", f"({head})"]
        parts = [f"({head}"]
        for child in children:
            parts.append(nl)
            parts.extend(_sexpr(child, depth + 1))
        parts.append(")")
        return parts

    if isinstance(node, CVar):
        return [f"(var {node.name})"]
    if isinstance(node, CInt):
        return [f"(int {node.value})"]
    if isinstance(node, CFloat):
        return [f"(float {node.value!r})"]
    if isinstance(node, CStr):
        return [f"(str {node.value!r})"]
    if isinstance(node, COp):
        return [f"(op {node.name})"]
    if isinstance(node, CApp):
        return group("app", [node.fn, node.arg])
    if isinstance(node, CConstr):
        return group(f"constr {node.name}", list(node.args))
    if isinstance(node, CDict):
        parts = [f"(dict"]
        for key, value in node.entries:
            parts.append(nl)
            parts.append(f"({key} ")
            parts.extend(_sexpr(value, depth + 1))
            parts.append(")")
        parts.append(")")
        return parts
    if isinstance(node, CProject):
        parts = group("project", [node.target])
        parts.insert(-1, f" {node.field_name}")
        return parts
    if isinstance(node, CDynProject):
        return group("dyn-project", [node.target, node.key])
    if isinstance(node, CLambda):
        return group("lambda", [node.elim])
    if isinstance(node, CLet):
        parts = [f"(let {node.name}"]
        for child in (node.bound, node.body):
            parts.append(nl)
            parts.extend(_sexpr(child, depth + 1))
        parts.append(")")
        return parts
    if isinstance(node, CLetRec):
        parts = ["(letrec"]
        for name, elim in node.defs:
            parts.append(nl)
            parts.append(f"({name} ")
            parts.extend(_sexpr(elim, depth + 1))
            parts.append(")")
        parts.append(nl)
        parts.extend(_sexpr(node.body, depth + 1))
        parts.append(")")
        return parts
    if isinstance(node, CDoc):
        return group("doc", [node.doc, node.target])
    if isinstance(node, ElimVar):
        parts = [f"(elim-var {node.name}"]
        parts.append(nl)
        parts.extend(_sexpr(node.cont, depth + 1))
        parts.append(")")
        return parts
    if isinstance(node, ElimDict):
        parts = [f"(elim-dict ({' '.join(node.fields)})"]
        parts.append(nl)
        parts.extend(_sexpr(node.cont, depth + 1))
        parts.append(")")
        return parts
    if isinstance(node, ElimConstr):
        parts = ["(elim-constr"]
        for name, cont in node.branches:
            parts.append(nl)
            parts.append(f"({name} ")
            parts.extend(_sexpr(cont, depth + 1))
            parts.append(")")
        parts.append(")")
        return parts
    raise TypeError(f"not a core node: {node!r}")
