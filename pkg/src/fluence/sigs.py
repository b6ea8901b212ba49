"""Constructor signatures: every constructor belongs to one datatype and has
a fixed arity.  The set is closed; the language has no datatype declarations.

``Nil`` is the internal name of the empty-list constructor, written ``[]``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DesugarError, Span

NIL = "Nil"
CONS = "Cons"


@dataclass(frozen=True)
class ConstructorInfo:
    name: str
    datatype: str
    arity: int


_BUILTINS = [
    ConstructorInfo("True", "Bool", 0),
    ConstructorInfo("False", "Bool", 0),
    ConstructorInfo(CONS, "List", 2),
    ConstructorInfo(NIL, "List", 0),
    ConstructorInfo("Str", "Str", 1),
    ConstructorInfo("Paragraph", "Paragraph", 1),
    ConstructorInfo("Matrix", "Matrix", 3),  # rows, cols, row-major cell list
    ConstructorInfo("BarChart", "View", 1),
    ConstructorInfo("StackedBar", "View", 1),
    ConstructorInfo("MultiView", "View", 1),
]


class ConstructorSignature:
    """Maps constructor names to (datatype, arity); datatype to constructors."""

    def __init__(self, infos=tuple(_BUILTINS)):
        self._by_name: dict[str, ConstructorInfo] = {}
        self._by_datatype: dict[str, list[str]] = {}
        for info in infos:
            self._by_name[info.name] = info
            self._by_datatype.setdefault(info.datatype, []).append(info.name)

    def lookup(self, name: str, span: Span | None = None) -> ConstructorInfo:
        info = self._by_name.get(name)
        if info is None:
            raise DesugarError(f"unknown constructor {name!r}", span)
        return info

    def arity(self, name: str, span: Span | None = None) -> int:
        return self.lookup(name, span).arity

    def datatype(self, name: str, span: Span | None = None) -> str:
        return self.lookup(name, span).datatype

    def constructors_of(self, datatype: str) -> list[str]:
        return list(self._by_datatype[datatype])

    def siblings(self, name: str, span: Span | None = None) -> list[str]:
        """Other constructors of the same datatype, in registry order."""
        info = self.lookup(name, span)
        return [c for c in self._by_datatype[info.datatype] if c != name]


SIGNATURE = ConstructorSignature()
