"""Plain recursive interpreter with no dependence graph.

Independent evaluation oracle: shares the parser and desugarer with the
package but evaluates core expressions directly over Python-native values.
Erasing the graph evaluator's result (addresses and doc attachments
dropped) must match this interpreter's output exactly.
"""

from __future__ import annotations

from pathlib import Path

from fluence.core import (
    CApp, CConstr, CDict, CDoc, CDynProject, CFloat, CInt, CLambda, CLet,
    CLetRec, COp, CProject, CStr, CVar, ElimConstr, ElimDict, ElimVar,
    is_eliminator,
)
from fluence.desugar import RecBinding, ValBinding, desugar_module
from fluence.loader import load_program, prelude_core
from fluence.parser import parse_source
from fluence.values import (
    ClosureVal, ConstrVal, DictVal, DocVal, FloatVal, IntVal, PrimVal,
    StrVal, strip_doc,
)


class RefError(Exception):
    pass


class RClosure:
    __slots__ = ("env", "rec", "elim")

    def __init__(self, env, rec, elim):
        self.env = env
        self.rec = rec
        self.elim = elim


class RPrim:
    __slots__ = ("name", "args")

    def __init__(self, name, args=()):
        self.name = name
        self.args = tuple(args)


class REnv:
    __slots__ = ("name", "value", "parent")

    def __init__(self, name, value, parent):
        self.name = name
        self.value = value
        self.parent = parent

    def bind(self, name, value):
        return REnv(name, value, self)

    def lookup(self, name):
        env = self
        while env is not None:
            if env.name == name:
                return env.value
            env = env.parent
        raise RefError(f"unbound {name}")


EMPTY = REnv(None, None, None)

_PRIM_ARITY = {"+": 2, "-": 2, "*": 2, "/": 2, "%": 2, "**": 2, "==": 2,
               "!=": 2, "<": 2, "<=": 2, ">": 2, ">=": 2, "and": 2, "or": 2,
               "++": 2, "numToStr": 1, "matIndex": 3, "matRows": 1, "matCols": 1}


def _to_list(v):
    out = []
    while True:
        if not (isinstance(v, tuple) and v[0] == "constr"):
            raise RefError("expected a list")
        if v[1] == "Nil":
            return out
        out.append(v[2][0])
        v = v[2][1]


def _requal(a, b):
    if isinstance(a, (RClosure, RPrim)) or isinstance(b, (RClosure, RPrim)):
        raise RefError("functions cannot be compared")
    if isinstance(a, bool) or isinstance(b, bool):  # no native bools in use
        raise RefError("unexpected bool")
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return a == b
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if isinstance(a, tuple) and isinstance(b, tuple):
        return (a[1] == b[1] and len(a[2]) == len(b[2])
                and all(_requal(x, y) for x, y in zip(a[2], b[2])))
    if isinstance(a, dict) and isinstance(b, dict):
        return set(a) == set(b) and all(_requal(v, b[k]) for k, v in a.items())
    return False


def _bool(flag):
    return ("constr", "True" if flag else "False", ())


def _as_bool(v):
    if isinstance(v, tuple) and v[1] in ("True", "False"):
        return v[1] == "True"
    raise RefError("expected a Bool")


def _apply_prim(name, args):
    if name in ("+", "-", "*", "/", "%", "**"):
        x, y = args
        if not isinstance(x, (int, float)) or not isinstance(y, (int, float)):
            raise RefError(f"bad operands for {name}")
        if name == "+":
            return x + y
        if name == "-":
            return x - y
        if name == "*":
            return x * y
        if name == "/":
            if y == 0:
                raise RefError("division by zero")
            return x // y if isinstance(x, int) and isinstance(y, int) else x / y
        if name == "%":
            if y == 0:
                raise RefError("modulo by zero")
            return x % y
        return x ** y
    if name in ("<", "<=", ">", ">="):
        x, y = args
        ok_nums = isinstance(x, (int, float)) and isinstance(y, (int, float))
        ok_strs = isinstance(x, str) and isinstance(y, str)
        if not (ok_nums or ok_strs):
            raise RefError("bad ordering operands")
        return _bool({"<": x < y, "<=": x <= y, ">": x > y, ">=": x >= y}[name])
    if name == "==":
        return _bool(_requal(*args))
    if name == "!=":
        return _bool(not _requal(*args))
    if name == "and":
        return _bool(_as_bool(args[0]) and _as_bool(args[1]))
    if name == "or":
        return _bool(_as_bool(args[0]) or _as_bool(args[1]))
    if name == "++":
        if not all(isinstance(a, str) for a in args):
            raise RefError("'++' wants strings")
        return args[0] + args[1]
    if name == "numToStr":
        (x,) = args
        if isinstance(x, int):
            return str(x)
        if isinstance(x, float):
            return repr(x)
        raise RefError("numToStr wants a number")
    if name in ("matIndex", "matRows", "matCols"):
        m = args[0]
        if not (isinstance(m, tuple) and m[1] == "Matrix"):
            raise RefError("expected a Matrix")
        rows, cols, cells = m[2]
        if name == "matRows":
            return rows
        if name == "matCols":
            return cols
        i, j = args[1], args[2]
        if not isinstance(i, int) or not isinstance(j, int):
            raise RefError("matrix indices must be integers")
        if not (0 <= i < rows and 0 <= j < cols):
            raise RefError("matrix index out of bounds")
        elems = _to_list(cells)
        return elems[i * cols + j]
    raise RefError(f"unknown primitive {name}")


def _match(values, cont):
    bindings = []
    queue = list(values)
    while True:
        if not is_eliminator(cont):
            if queue:
                raise RefError("too few values")
            return bindings, cont
        value = queue.pop(0)
        if isinstance(cont, ElimVar):
            bindings.append((cont.name, value))
            cont = cont.cont
            continue
        if isinstance(cont, ElimConstr):
            if not (isinstance(value, tuple) and value[0] == "constr"):
                raise RefError("match expected a constructor")
            branch = cont.branch(value[1])
            if branch is None:
                raise RefError(f"no clause for {value[1]}")
            queue = list(value[2]) + queue
            cont = branch
            continue
        if isinstance(cont, ElimDict):
            if not isinstance(value, dict):
                raise RefError("match expected a dictionary")
            if any(f not in value for f in cont.fields):
                raise RefError("dictionary missing field")
            queue = [value[f] for f in cont.fields] + queue
            cont = cont.cont
            continue
        raise RefError("bad eliminator")


def evaluate_ref(env, expr):
    kind = type(expr)
    if kind is CVar:
        return env.lookup(expr.name)
    if kind in (CInt, CFloat, CStr):
        return expr.value
    if kind is COp:
        return RPrim(expr.name)
    if kind is CLambda:
        return RClosure(env, {}, expr.elim)
    if kind is CConstr:
        return ("constr", expr.name, tuple(evaluate_ref(env, a) for a in expr.args))
    if kind is CDict:
        return {k: evaluate_ref(env, v) for k, v in expr.entries}
    if kind is CProject:
        target = evaluate_ref(env, expr.target)
        if not isinstance(target, dict) or expr.field_name not in target:
            raise RefError(f"missing field {expr.field_name}")
        return target[expr.field_name]
    if kind is CDynProject:
        key = evaluate_ref(env, expr.key)
        if not isinstance(key, str):
            raise RefError("dynamic key must be a string")
        target = evaluate_ref(env, expr.target)
        if not isinstance(target, dict) or key not in target:
            raise RefError(f"missing field {key}")
        return target[key]
    if kind is CApp:
        spine = []
        head = expr
        while type(head) is CApp:
            spine.append(head.arg)
            head = head.fn
        if type(head) is COp and len(spine) == _PRIM_ARITY[head.name]:
            spine.reverse()
            return _apply_prim(head.name, [evaluate_ref(env, a) for a in spine])
        fn = evaluate_ref(env, expr.fn)
        arg = evaluate_ref(env, expr.arg)
        return _call(fn, arg)
    if kind is CLet:
        return evaluate_ref(env.bind(expr.name, evaluate_ref(env, expr.bound)),
                            expr.body)
    if kind is CLetRec:
        rec = dict(expr.defs)
        inner = env
        for name, elim in expr.defs:
            inner = inner.bind(name, RClosure(env, rec, elim))
        return evaluate_ref(inner, expr.body)
    if kind is CDoc:
        evaluate_ref(env, expr.doc)
        return evaluate_ref(env, expr.target)
    raise RefError(f"cannot evaluate {expr!r}")


def _call(fn, arg):
    if isinstance(fn, RClosure):
        # recursion: each call re-closes the group's definitions
        env = fn.env
        for name, elim in fn.rec.items():
            env = env.bind(name, RClosure(fn.env, fn.rec, elim))
        bindings, branch = _match([arg], fn.elim)
        for name, value in bindings:
            env = env.bind(name, value)
        return evaluate_ref(env, branch)
    if isinstance(fn, RPrim):
        args = fn.args + (arg,)
        arity = _PRIM_ARITY[fn.name]
        if len(args) == arity:
            return _apply_prim(fn.name, list(args))
        if len(args) > arity:
            raise RefError("too many primitive arguments")
        return RPrim(fn.name, args)
    raise RefError("not a function")


def _run_bindings(env, core):
    exports = {}
    for binding in core.bindings:
        if isinstance(binding, ValBinding):
            value = evaluate_ref(env, binding.expr)
            bindings, _ = _match([value], binding.elim)
            for name, v in bindings:
                env = env.bind(name, v)
            exports.update(bindings)
        else:
            assert isinstance(binding, RecBinding)
            rec = dict(binding.defs)
            captured = env
            for name, elim in binding.defs:
                closure = RClosure(captured, rec, elim)
                env = env.bind(name, closure)
                exports[name] = closure
    return env, exports


def run_reference(source: str, file: str = "<input>"):
    """Evaluate a single-module program; returns a Python-native value."""
    env, _ = _run_bindings(EMPTY, prelude_core())
    core = desugar_module(parse_source(source, file))
    env, _ = _run_bindings(env, core)
    if core.final is None:
        raise RefError("no final expression")
    return evaluate_ref(env, core.final)


def run_reference_file(entry: Path):
    """Evaluate a program with imports, mirroring the loader's visibility."""
    entry = Path(entry).resolve()
    module_graph, surfaces = load_program(entry)
    env0, prelude_exports = _run_bindings(EMPTY, prelude_core())
    exports = {}
    envs = {}
    for key in module_graph.order:
        env = env0
        for dep in surfaces[key].imports:
            dep_key = str((entry.parent / (dep if dep.endswith(".fld")
                                           else dep + ".fld")).resolve())
            for name, value in exports[dep_key].items():
                env = env.bind(name, value)
        core = desugar_module(surfaces[key])
        env, own = _run_bindings(env, core)
        exports[key] = own
        envs[key] = (env, core)
    env, core = envs[str(entry)]
    if core.final is None:
        raise RefError("no final expression")
    return evaluate_ref(env, core.final)


# -- erasure -------------------------------------------------------------------


def erase(value):
    """Graph-evaluator value -> Python-native structure (addresses and doc
    attachments dropped)."""
    value = strip_doc(value)
    if isinstance(value, (IntVal, FloatVal, StrVal)):
        return value.value
    if isinstance(value, ConstrVal):
        return ("constr", value.name, tuple(erase(a) for a in value.args))
    if isinstance(value, DictVal):
        return {k: erase(v) for k, v in value.entries.items()}
    if isinstance(value, ClosureVal):
        return "<closure>"
    if isinstance(value, PrimVal):
        return f"<primitive {value.name}>"
    raise RefError(f"cannot erase {value!r}")


def erased_equal(graph_value, ref_value):
    ref = ref_value
    if isinstance(ref, RClosure):
        ref = "<closure>"
    if isinstance(ref, RPrim):
        ref = f"<primitive {ref.name}>"
    return _structural(erase(graph_value), ref)


def _structural(a, b):
    if isinstance(a, tuple) and isinstance(b, tuple):
        return (a[1] == b[1] and len(a[2]) == len(b[2])
                and all(_structural(x, y) for x, y in zip(a[2], b[2])))
    if isinstance(a, dict) and isinstance(b, dict):
        return set(a) == set(b) and all(_structural(v, b[k]) for k, v in a.items())
    if isinstance(a, float) or isinstance(b, float):
        return a == b and isinstance(a, type(b))
    return a == b
