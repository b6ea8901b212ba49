"""Big-step evaluation constructing the dynamic dependence graph.

Shapes of the rules:

* introduction forms (literals, constructors, dictionaries, functions)
  allocate a fresh vertex with incoming edges from every active vertex;
* variable lookup and projection return existing values untouched;
* application closes the closure's recursive definitions (active set = the
  closure's own vertex), evaluates the argument, matches it against the
  eliminator (consuming constructor/dictionary roots), then evaluates the
  selected branch with the consumed vertices plus the closure vertex active;
* primitive application delegates to the primitive table; results depend on
  operand roots only;
* a doc expression evaluates the paragraph, then the target, attaches the
  paragraph to the target's root vertex and returns a transparent wrapper.

Evaluation is eager and strictly sequential; the finished (value, graph)
pair is immutable and may be shared freely afterwards.
"""

from __future__ import annotations

from .core import (
    CApp, CConstr, CDict, CDoc, CDynProject, CFloat, CInt, CLambda, CLet,
    CLetRec, COp, CProject, CStr, CVar, ElimConstr, ElimDict, ElimVar,
    is_eliminator,
)
from .errors import EvalError
from .graph import DepGraph
from .primitives import PRIMITIVES, apply_primitive
from .sigs import SIGNATURE
from .values import (
    ClosureVal, ConstrVal, DictVal, DocVal, Env, FloatVal, IntVal, PrimVal,
    StrVal, Value, strip_doc,
)


def evaluate(env: Env, expr, active: tuple[int, ...], graph: DepGraph) -> Value:
    """Evaluate expr, growing the graph in place (the threading is linear)."""
    kind = type(expr)

    if kind is CVar:
        return env.lookup(expr.name, expr.span)

    if kind is CInt:
        addr = graph.add_star(active, graph.fresh_address(), "literal", expr.span)
        value = IntVal(expr.value, addr)
        graph.set_value(addr, value)
        return value

    if kind is CFloat:
        addr = graph.add_star(active, graph.fresh_address(), "literal", expr.span)
        value = FloatVal(expr.value, addr)
        graph.set_value(addr, value)
        return value

    if kind is CStr:
        addr = graph.add_star(active, graph.fresh_address(), "literal", expr.span)
        value = StrVal(expr.value, addr)
        graph.set_value(addr, value)
        return value

    if kind is CLambda:
        addr = graph.add_star(active, graph.fresh_address(), "closure", expr.span)
        value = ClosureVal(env, {}, expr.elim, addr)
        graph.set_value(addr, value)
        return value

    if kind is COp:
        addr = graph.add_star(active, graph.fresh_address(), "primop", expr.span)
        value = PrimVal(expr.name, [], addr)
        graph.set_value(addr, value)
        return value

    if kind is CConstr:
        arity = SIGNATURE.arity(expr.name, expr.span)
        if arity != len(expr.args):
            raise EvalError(f"constructor {expr.name} expects {arity} arguments",
                            expr.span)
        args = evaluate_sequence(env, expr.args, active, graph)
        addr = graph.add_star(active, graph.fresh_address(), "constructor", expr.span)
        value = ConstrVal(expr.name, args, addr)
        graph.set_value(addr, value)
        return value

    if kind is CDict:
        values = evaluate_sequence(env, [v for _, v in expr.entries], active, graph)
        addr = graph.add_star(active, graph.fresh_address(), "dict", expr.span)
        value = DictVal({k: v for (k, _), v in zip(expr.entries, values)}, addr)
        graph.set_value(addr, value)
        return value

    if kind is CProject:
        target = strip_doc(evaluate(env, expr.target, active, graph))
        if not isinstance(target, DictVal):
            raise EvalError("field lookup on a non-dictionary", expr.span)
        if expr.field_name not in target.entries:
            raise EvalError(f"missing field {expr.field_name!r}", expr.span)
        return target.entries[expr.field_name]

    if kind is CDynProject:
        key = strip_doc(evaluate(env, expr.key, active, graph))
        if not isinstance(key, StrVal):
            raise EvalError("dynamic lookup key must be a string", expr.span)
        target = strip_doc(evaluate(env, expr.target, active, graph))
        if not isinstance(target, DictVal):
            raise EvalError("dynamic lookup on a non-dictionary", expr.span)
        if key.value not in target.entries:
            raise EvalError(f"missing field {key.value!r}", expr.span)
        return target.entries[key.value]

    if kind is CApp:
        return _apply(env, expr, active, graph)

    if kind is CLet:
        bound = evaluate(env, expr.bound, active, graph)
        return evaluate(env.bind(expr.name, bound), expr.body, active, graph)

    if kind is CLetRec:
        closures = close_definitions(env, expr.defs, active, graph)
        return evaluate(env.bind_many(closures), expr.body, active, graph)

    if kind is CDoc:
        paragraph = evaluate(env, expr.doc, active, graph)
        target = evaluate(env, expr.target, active, graph)
        graph.attach_paragraph(strip_doc(target).addr, paragraph)
        return DocVal(paragraph, target)

    raise EvalError(f"cannot evaluate {expr!r}", getattr(expr, "span", None))


def _apply(env: Env, expr: CApp, active, graph: DepGraph) -> Value:
    # saturated primitive spine: apply the operator without materialising it
    spine = []
    head = expr
    while type(head) is CApp:
        spine.append(head.arg)
        head = head.fn
    if type(head) is COp and len(spine) == PRIMITIVES[head.name].arity:
        spine.reverse()
        args = evaluate_sequence(env, spine, active, graph)
        return apply_primitive(head.name, args, graph, expr.span)

    fn = strip_doc(evaluate(env, expr.fn, active, graph))
    if isinstance(fn, ClosureVal):
        closures = close_definitions(fn.env, tuple(fn.rec.items()), (fn.addr,), graph)
        argument = evaluate(env, expr.arg, active, graph)
        bindings, branch, consumed = match_value([argument], fn.elim, expr.span)
        body_env = fn.env.bind_many(closures).bind_many(bindings)
        return evaluate(body_env, branch, consumed + (fn.addr,), graph)
    if isinstance(fn, PrimVal):
        argument = evaluate(env, expr.arg, active, graph)
        args = fn.collected + [argument]
        prim = PRIMITIVES[fn.name]
        if len(args) == prim.arity:
            return apply_primitive(fn.name, args, graph, expr.span)
        if len(args) > prim.arity:
            raise EvalError(f"primitive {fn.name!r} applied to too many arguments",
                            expr.span)
        addr = graph.add_star(active, graph.fresh_address(), "primop", expr.span)
        value = PrimVal(fn.name, args, addr)
        graph.set_value(addr, value)
        return value
    raise EvalError("application of a non-function", expr.span)


def evaluate_sequence(env: Env, exprs, active, graph: DepGraph) -> list[Value]:
    """Left to right, threading the graph so later addresses stay fresh."""
    return [evaluate(env, e, active, graph) for e in exprs]


def close_definitions(env: Env, defs, active, graph: DepGraph
                      ) -> list[tuple[str, Value]]:
    """One closure per recursive definition, each holding the whole group."""
    rec = {name: elim for name, elim in defs}
    out = []
    for name, elim in defs:
        addr = graph.add_star(active, graph.fresh_address(), "closure", None)
        value = ClosureVal(env, rec, elim, addr)
        graph.set_value(addr, value)
        out.append((name, value))
    return out


def match_value(values: list[Value], cont, span=None):
    """Match queued values against a continuation.

    Returns (bindings, branch expression, consumed vertex tuple); constructor
    and dictionary matches consume the scrutinee's root vertex, variable
    matches do not.
    """
    bindings: list[tuple[str, Value]] = []
    consumed: list[int] = []
    queue = list(values)
    while True:
        if not is_eliminator(cont):
            if queue:
                raise EvalError("pattern match consumed too few values", span)
            return bindings, cont, tuple(consumed)
        if not queue:
            raise EvalError("pattern match ran out of values", span)
        value = queue.pop(0)
        if type(cont) is ElimVar:
            bindings.append((cont.name, value))
            cont = cont.cont
            continue
        scrutinee = strip_doc(value)
        if type(cont) is ElimConstr:
            if not isinstance(scrutinee, ConstrVal):
                raise EvalError("match expected a constructor value", span)
            branch = cont.branch(scrutinee.name)
            if branch is None:
                raise EvalError(f"no clause for constructor {scrutinee.name}", span)
            consumed.append(scrutinee.addr)
            queue = list(scrutinee.args) + queue
            cont = branch
            continue
        if type(cont) is ElimDict:
            if not isinstance(scrutinee, DictVal):
                raise EvalError("match expected a dictionary value", span)
            missing = [f for f in cont.fields if f not in scrutinee.entries]
            if missing:
                raise EvalError(f"dictionary missing field {missing[0]!r}", span)
            consumed.append(scrutinee.addr)
            queue = [scrutinee.entries[f] for f in cont.fields] + queue
            cont = cont.cont
            continue
        raise EvalError("unknown eliminator", span)


def bind_definition(env: Env, elim, value: Value, span=None) -> Env:
    """Destructure a definition's value through its pattern eliminator."""
    bindings, _sentinel, _ = match_value([value], elim, span)
    return env.bind_many(bindings)
