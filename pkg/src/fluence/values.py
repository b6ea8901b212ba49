"""Runtime values.  Every value is rooted at a graph vertex (its address);
a documented value is anchored at its target's root, with the paragraph
held as metadata.
"""

from __future__ import annotations

from .errors import EvalError


class Value:
    __slots__ = ("addr",)

    def __init__(self, addr: int):
        self.addr = addr


class IntVal(Value):
    __slots__ = ("value",)

    def __init__(self, value: int, addr: int):
        super().__init__(addr)
        self.value = value


class FloatVal(Value):
    __slots__ = ("value",)

    def __init__(self, value: float, addr: int):
        super().__init__(addr)
        self.value = value


class StrVal(Value):
    __slots__ = ("value",)

    def __init__(self, value: str, addr: int):
        super().__init__(addr)
        self.value = value


class ConstrVal(Value):
    __slots__ = ("name", "args")

    def __init__(self, name: str, args: list[Value], addr: int):
        super().__init__(addr)
        self.name = name
        self.args = args


class DictVal(Value):
    __slots__ = ("entries",)

    def __init__(self, entries: dict[str, Value], addr: int):
        super().__init__(addr)
        self.entries = entries


class ClosureVal(Value):
    __slots__ = ("env", "rec", "elim")

    def __init__(self, env, rec, elim, addr: int):
        super().__init__(addr)
        self.env = env
        self.rec = rec  # name -> eliminator, shared by the recursive group
        self.elim = elim


class PrimVal(Value):
    """Partially applied primitive operator."""

    __slots__ = ("name", "collected")

    def __init__(self, name: str, collected: list[Value], addr: int):
        super().__init__(addr)
        self.name = name
        self.collected = collected


class DocVal(Value):
    """Documented value: transparent wrapper anchored at the target's root."""

    __slots__ = ("paragraph", "target")

    def __init__(self, paragraph: Value, target: Value):
        super().__init__(strip_doc(target).addr)
        self.paragraph = paragraph
        self.target = target


def strip_doc(value: Value) -> Value:
    while isinstance(value, DocVal):
        value = value.target
    return value


# -- environments ---------------------------------------------------------------


class Env:
    """Immutable chain of bindings; lookup returns the rightmost (innermost)."""

    __slots__ = ("name", "value", "parent")

    def __init__(self, name: str | None, value, parent: Env | None):
        self.name = name
        self.value = value
        self.parent = parent

    EMPTY: Env

    def bind(self, name: str, value: Value) -> Env:
        return Env(name, value, self)

    def bind_many(self, pairs) -> Env:
        env = self
        for name, value in pairs:
            env = Env(name, value, env)
        return env

    def lookup(self, name: str, span=None) -> Value:
        env = self
        while env is not None:
            if env.name == name:
                return env.value
            if env.name is None and env.value is not None:  # frame
                hit = env.value.get(name)
                if hit is not None:
                    return hit
            env = env.parent
        raise EvalError(f"unbound variable {name!r}", span)

    @staticmethod
    def frame(table: dict[str, Value], parent: Env | None = None) -> Env:
        """Dict-backed frame, used for module/prelude exports."""
        return Env(None, table, parent)


Env.EMPTY = Env(None, None, None)


# -- structural equality and printing --------------------------------------------


def values_equal(a: Value, b: Value, span=None) -> bool:
    """Structural equality, ignoring addresses and documentation.

    Closures and partial primitives have no structural equality.
    """
    a, b = strip_doc(a), strip_doc(b)
    if isinstance(a, (ClosureVal, PrimVal)) or isinstance(b, (ClosureVal, PrimVal)):
        raise EvalError("functions cannot be compared structurally", span)
    if isinstance(a, (IntVal, FloatVal)) and isinstance(b, (IntVal, FloatVal)):
        return a.value == b.value
    if isinstance(a, StrVal) and isinstance(b, StrVal):
        return a.value == b.value
    if isinstance(a, ConstrVal) and isinstance(b, ConstrVal):
        return (a.name == b.name and len(a.args) == len(b.args)
                and all(values_equal(x, y, span) for x, y in zip(a.args, b.args)))
    if isinstance(a, DictVal) and isinstance(b, DictVal):
        if set(a.entries) != set(b.entries):
            return False
        return all(values_equal(v, b.entries[k], span) for k, v in a.entries.items())
    return False


def _is_list(value: Value) -> bool:
    return isinstance(value, ConstrVal) and value.name in ("Cons", "Nil")


def list_elements(value: Value, span=None) -> list[Value]:
    """Python list of a Cons/Nil chain's elements."""
    out = []
    v = strip_doc(value)
    while True:
        if not isinstance(v, ConstrVal):
            raise EvalError("expected a list", span)
        if v.name == "Nil":
            return out
        if v.name != "Cons":
            raise EvalError(f"expected a list, got {v.name}", span)
        out.append(v.args[0])
        v = strip_doc(v.args[1])


def render_value(value: Value, limit: int | None = None) -> str:
    """Literal-style rendering; matrices print as value grids."""
    text = _render(strip_doc(value))
    if limit is not None and len(text) > limit:
        return text[: limit - 1] + "…"
    return text


def _render(v: Value) -> str:
    if isinstance(v, IntVal):
        return str(v.value)
    if isinstance(v, FloatVal):
        return repr(v.value)
    if isinstance(v, StrVal):
        return '"' + v.value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, ClosureVal):
        return "<function>"
    if isinstance(v, PrimVal):
        return f"<primitive {v.name}>"
    if isinstance(v, DictVal):
        inner = ", ".join(f"{k}: {_render(strip_doc(val))}"
                          for k, val in v.entries.items())
        return "{" + inner + "}"
    if isinstance(v, ConstrVal):
        if _is_list(v):
            elems = ", ".join(_render(strip_doc(e)) for e in list_elements(v))
            return f"[{elems}]"
        if v.name == "Matrix":
            return _render_matrix(v)
        if not v.args:
            return v.name
        return f"{v.name}({', '.join(_render(strip_doc(a)) for a in v.args)})"
    return repr(v)


def _render_matrix(v: ConstrVal) -> str:
    rows = strip_doc(v.args[0])
    cols = strip_doc(v.args[1])
    if not isinstance(rows, IntVal) or not isinstance(cols, IntVal):
        return f"Matrix({_render(rows)}, {_render(cols)}, …)"
    try:
        cells = [_render(strip_doc(c)) for c in list_elements(v.args[2])]
    except EvalError:
        return f"Matrix({rows.value}, {cols.value}, …)"
    if len(cells) != rows.value * cols.value:
        return f"Matrix({rows.value}, {cols.value}, [{', '.join(cells)}])"
    width = max((len(c) for c in cells), default=1)
    lines = [f"Matrix {rows.value}×{cols.value}"]
    for i in range(rows.value):
        row = cells[i * cols.value:(i + 1) * cols.value]
        lines.append("  " + " ".join(c.rjust(width) for c in row))
    return "\n".join(lines)


def value_subtree(value: Value) -> set[int]:
    """All vertex ids in the value's structure.  Closures contribute only
    their root; a documented value contributes its target's subtree."""
    out: set[int] = set()
    stack = [value]
    while stack:
        v = strip_doc(stack.pop())
        if v.addr in out:
            continue
        out.add(v.addr)
        if isinstance(v, ConstrVal):
            stack.extend(v.args)
        elif isinstance(v, DictVal):
            stack.extend(v.entries.values())
    return out
