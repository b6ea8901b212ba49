"""Primitive operations.

A primitive result depends on its operands, with one refinement: zero
annihilates multiplication, so a product with a zero factor depends only on
that factor (leftmost wins when both are zero).  Addition-produced zeros
depend on both summands.  The matrix accessors are projection forms and add
no vertices at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import EvalError, Span
from .values import (
    ConstrVal, DictVal, FloatVal, IntVal, StrVal, Value, list_elements,
    strip_doc, values_equal,
)

Number = (IntVal, FloatVal)


@dataclass(frozen=True)
class Primitive:
    name: str
    arity: int
    apply: Callable  # (args, graph, span) -> Value


def _num(v: Value, span: Span | None):
    v = strip_doc(v)
    if not isinstance(v, Number):
        raise EvalError("expected a number", span)
    return v.value


def _wrap_number(x, deps, graph, span) -> Value:
    addr = graph.add_result(deps, "result", span)
    value = IntVal(x, addr) if isinstance(x, int) else FloatVal(x, addr)
    graph.set_value(addr, value)
    return value


def _bool(flag: bool, deps, graph, span) -> Value:
    addr = graph.add_result(deps, "result", span)
    value = ConstrVal("True" if flag else "False", [], addr)
    graph.set_value(addr, value)
    return value


def _arith(fn):
    def apply(args, graph, span):
        a, b = args
        x, y = _num(a, span), _num(b, span)
        return _wrap_number(fn(x, y, span), [a.addr, b.addr], graph, span)

    return apply


def _plus(x, y, span):
    return x + y


def _minus(x, y, span):
    return x - y


def _div(x, y, span):
    if y == 0:
        raise EvalError("division by zero", span)
    if isinstance(x, int) and isinstance(y, int):
        return x // y
    return x / y


def _mod(x, y, span):
    if y == 0:
        raise EvalError("modulo by zero", span)
    return x % y


def _pow(x, y, span):
    return x ** y


def _times(args, graph, span):
    a, b = args
    x, y = _num(a, span), _num(b, span)
    # zero annihilates: the result depends only on the (leftmost) zero factor
    if x == 0:
        deps = [a.addr]
    elif y == 0:
        deps = [b.addr]
    else:
        deps = [a.addr, b.addr]
    return _wrap_number(x * y, deps, graph, span)


def _compare(fn):
    def apply(args, graph, span):
        a, b = args
        av, bv = strip_doc(a), strip_doc(b)
        if isinstance(av, Number) and isinstance(bv, Number):
            flag = fn(av.value, bv.value)
        elif isinstance(av, StrVal) and isinstance(bv, StrVal):
            flag = fn(av.value, bv.value)
        else:
            raise EvalError("ordering is defined on numbers and strings", span)
        return _bool(flag, [a.addr, b.addr], graph, span)

    return apply


def _equal(args, graph, span):
    a, b = args
    return _bool(values_equal(a, b, span), [a.addr, b.addr], graph, span)


def _not_equal(args, graph, span):
    a, b = args
    return _bool(not values_equal(a, b, span), [a.addr, b.addr], graph, span)


def _as_bool(v: Value, span) -> bool:
    v = strip_doc(v)
    if isinstance(v, ConstrVal) and v.name in ("True", "False"):
        return v.name == "True"
    raise EvalError("expected True or False", span)


def _and(args, graph, span):
    a, b = args
    return _bool(_as_bool(a, span) and _as_bool(b, span), [a.addr, b.addr], graph, span)


def _or(args, graph, span):
    a, b = args
    return _bool(_as_bool(a, span) or _as_bool(b, span), [a.addr, b.addr], graph, span)


def _concat(args, graph, span):
    a, b = args
    av, bv = strip_doc(a), strip_doc(b)
    if not (isinstance(av, StrVal) and isinstance(bv, StrVal)):
        raise EvalError("'++' concatenates strings", span)
    addr = graph.add_result([a.addr, b.addr], "result", span)
    value = StrVal(av.value + bv.value, addr)
    graph.set_value(addr, value)
    return value


def _num_to_str(args, graph, span):
    (a,) = args
    av = strip_doc(a)
    if isinstance(av, IntVal):
        text = str(av.value)
    elif isinstance(av, FloatVal):
        text = repr(av.value)  # shortest round-trip form
    else:
        raise EvalError("numToStr expects a number", span)
    addr = graph.add_result([a.addr], "result", span)
    value = StrVal(text, addr)
    graph.set_value(addr, value)
    return value


def _matrix_parts(v: Value, span):
    m = strip_doc(v)
    if not (isinstance(m, ConstrVal) and m.name == "Matrix"):
        raise EvalError("expected a Matrix", span)
    rows = strip_doc(m.args[0])
    cols = strip_doc(m.args[1])
    if not isinstance(rows, IntVal) or not isinstance(cols, IntVal):
        raise EvalError("matrix dimensions must be integers", span)
    return rows, cols, m.args[2]


def _mat_index(args, graph, span):
    # projection form: returns the stored cell, no new vertex or edges
    m, i, j = args
    rows, cols, cells = _matrix_parts(m, span)
    iv, jv = strip_doc(i), strip_doc(j)
    if not isinstance(iv, IntVal) or not isinstance(jv, IntVal):
        raise EvalError("matrix indices must be integers", span)
    if not (0 <= iv.value < rows.value and 0 <= jv.value < cols.value):
        raise EvalError(
            f"matrix index ({iv.value}, {jv.value}) out of bounds "
            f"for {rows.value}×{cols.value}", span)
    elems = list_elements(cells, span)
    k = iv.value * cols.value + jv.value
    if k >= len(elems):
        raise EvalError("matrix cell list shorter than its dimensions", span)
    return elems[k]


def _mat_rows(args, graph, span):
    rows, _, _ = _matrix_parts(args[0], span)
    return rows


def _mat_cols(args, graph, span):
    _, cols, _ = _matrix_parts(args[0], span)
    return cols


PRIMITIVES: dict[str, Primitive] = {}


def _register(name: str, arity: int, apply) -> None:
    PRIMITIVES[name] = Primitive(name, arity, apply)


_register("+", 2, _arith(_plus))
_register("-", 2, _arith(_minus))
_register("*", 2, _times)
_register("/", 2, _arith(_div))
_register("%", 2, _arith(_mod))
_register("**", 2, _arith(_pow))
_register("==", 2, _equal)
_register("!=", 2, _not_equal)
_register("<", 2, _compare(lambda x, y: x < y))
_register("<=", 2, _compare(lambda x, y: x <= y))
_register(">", 2, _compare(lambda x, y: x > y))
_register(">=", 2, _compare(lambda x, y: x >= y))
_register("and", 2, _and)
_register("or", 2, _or)
_register("++", 2, _concat)
_register("numToStr", 1, _num_to_str)
_register("matIndex", 3, _mat_index)
_register("matRows", 1, _mat_rows)
_register("matCols", 1, _mat_cols)

OPERATOR_NAMES = {n for n in PRIMITIVES if not n[0].isalpha()} | {"and", "or"}
PRIMITIVE_IDENTS = {n for n in PRIMITIVES if n[0].isalpha() and n not in ("and", "or")}


def apply_primitive(name: str, args: list[Value], graph, span: Span | None) -> Value:
    """Run a primitive; the result vertex (if any) depends on operand roots."""
    prim = PRIMITIVES.get(name)
    if prim is None:
        raise EvalError(f"unknown primitive {name!r}", span)
    if len(args) != prim.arity:
        raise EvalError(
            f"primitive {name!r} expects {prim.arity} arguments, got {len(args)}", span)
    return prim.apply(args, graph, span)
