"""Abstract surface syntax produced by the parser.

Spans never participate in structural equality, so pretty-print/reparse
round trips compare clean.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .errors import Span


def _span_field():
    return field(compare=False, repr=False)


# -- patterns ----------------------------------------------------------------


@dataclass(frozen=True)
class PVar:
    name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class PWild:
    span: Span = _span_field()


@dataclass(frozen=True)
class PConstr:
    name: str
    args: tuple[Pattern, ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class PDict:
    entries: tuple[tuple[str, Pattern], ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class PList:
    """Fixed-length list pattern, optionally capturing the tail via ``*rest``."""

    elems: tuple[Pattern, ...]
    rest: Pattern | None
    span: Span = _span_field()


Pattern = Union[PVar, PWild, PConstr, PDict, PList]


# -- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class SVar:
    name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class SInt:
    value: int
    span: Span = _span_field()


@dataclass(frozen=True)
class SFloat:
    value: float
    span: Span = _span_field()


@dataclass(frozen=True)
class SStr:
    value: str
    span: Span = _span_field()


@dataclass(frozen=True)
class SParagraph:
    elements: tuple[ParaElement, ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class ParaToken:
    text: str
    span: Span = _span_field()


@dataclass(frozen=True)
class ParaUnquote:
    term: Term
    span: Span = _span_field()


ParaElement = Union[ParaToken, ParaUnquote]


@dataclass(frozen=True)
class SCall:
    fn: Term
    args: tuple[Term, ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class SConstr:
    name: str
    args: tuple[Term, ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class SDict:
    entries: tuple[tuple[str, Term], ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class SProject:
    target: Term
    field_name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class SDynProject:
    target: Term
    key: Term
    span: Span = _span_field()


@dataclass(frozen=True)
class SOp:
    """First-class operator, written ``(+)``."""

    name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class SBinary:
    op: str
    left: Term
    right: Term
    span: Span = _span_field()


@dataclass(frozen=True)
class SInfixFun:
    """Backtick application ``a `f` b``."""

    name: str
    left: Term
    right: Term
    span: Span = _span_field()


@dataclass(frozen=True)
class SIf:
    cond: Term
    then: Block
    orelse: Block
    span: Span = _span_field()


@dataclass(frozen=True)
class MatchClause:
    pattern: Pattern
    body: Block
    span: Span = _span_field()


@dataclass(frozen=True)
class SMatch:
    scrutinee: Term
    clauses: tuple[MatchClause, ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class SList:
    elems: tuple[Term, ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class QGuard:
    cond: Term
    span: Span = _span_field()


@dataclass(frozen=True)
class QDecl:
    pattern: Pattern
    term: Term
    span: Span = _span_field()


@dataclass(frozen=True)
class QGen:
    pattern: Pattern
    source: Term
    span: Span = _span_field()


Qualifier = Union[QGuard, QDecl, QGen]


@dataclass(frozen=True)
class SListComp:
    head: Term
    qualifiers: tuple[Qualifier, ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class SLambda:
    params: tuple[Pattern, ...]
    body: Block
    span: Span = _span_field()


@dataclass(frozen=True)
class SDoc:
    doc: Term
    target: Term
    span: Span = _span_field()


Term = Union[
    SVar, SInt, SFloat, SStr, SParagraph, SCall, SConstr, SDict, SProject,
    SDynProject, SOp, SBinary, SInfixFun, SIf, SMatch, SList, SListComp,
    SLambda, SDoc,
]


# -- definitions and modules ---------------------------------------------------


@dataclass(frozen=True)
class Block:
    """Body position: local definitions followed by one result term."""

    defs: tuple[Definition, ...]
    result: Term

    @staticmethod
    def of(term: Term) -> Block:
        return Block((), term)


@dataclass(frozen=True)
class VarDef:
    pattern: Pattern
    body: Block
    span: Span = _span_field()


@dataclass(frozen=True)
class FunClause:
    name: str
    params: tuple[Pattern, ...]
    body: Block
    span: Span = _span_field()


Definition = Union[VarDef, FunClause]


@dataclass(frozen=True)
class SurfaceModule:
    imports: tuple[str, ...]
    definitions: tuple[Definition, ...]
    final: Term | None  # present iff this is a program

    @property
    def is_program(self) -> bool:
        return self.final is not None
