"""Surface-syntax printer.

Emits source that reparses to a structurally equal module.  Keyword forms
(if/match/fun/@doc) print unparenthesized only in trailing position; match
blocks never fit inside brackets, so forcing one there raises.
"""

from __future__ import annotations

from . import surface as s

TOP = -1
_LEVELS = {
    "or": 0, "and": 1,
    "==": 2, "!=": 2, "<": 2, "<=": 2, ">": 2, ">=": 2,
    "++": 4, "+": 5, "-": 5, "*": 6, "/": 6, "%": 6, "**": 7,
}
TICK = 3
UNARY = 8

_TEXT_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t"}


class PrettyError(Exception):
    pass


def _escape(text: str, extra: str = "") -> str:
    out = []
    for ch in text:
        if ch in _TEXT_ESCAPES:
            out.append(_TEXT_ESCAPES[ch])
        elif ch in extra:
            out.append("\\" + ch)
        else:
            out.append(ch)
    return "".join(out)


def print_module(module: s.SurfaceModule) -> str:
    lines = [f'import "{path}"' for path in module.imports]
    for d in module.definitions:
        lines.append(_definition(d, 0))
    if module.final is not None:
        lines.append(_term(module.final, TOP, True, 0))
    return "\n".join(lines) + "\n"


def _indent(level: int) -> str:
    return "    " * level


def _definition(d: s.Definition, level: int) -> str:
    if isinstance(d, s.FunClause):
        params = ", ".join(_pattern(p) for p in d.params)
        return f"{_indent(level)}def {d.name}({params}):{_body(d.body, level)}"
    return f"{_indent(level)}def {_pattern(d.pattern)} ={_body(d.body, level)}"


def _body(block: s.Block, level: int) -> str:
    if not block.defs:
        return " " + _term(block.result, TOP, True, level)
    lines = [""]
    for d in block.defs:
        lines.append(_definition(d, level + 1))
    lines.append(_indent(level + 1) + _term(block.result, TOP, True, level + 1))
    return "\n".join(lines)


def _arm(block: s.Block, level: int) -> str:
    return _body(block, level)


def _term(t, prec: int, trailing: bool, level: int) -> str:
    text, my_prec = _render(t, trailing, level)
    if my_prec < prec and not (trailing and _is_keyword_form(t)):
        if isinstance(t, s.SMatch):
            raise PrettyError("match cannot be parenthesized")
        return f"({text})"
    return text


def _is_keyword_form(t) -> bool:
    return isinstance(t, (s.SIf, s.SMatch, s.SLambda, s.SDoc))


def _render(t, trailing: bool, level: int) -> tuple[str, int]:
    if isinstance(t, s.SVar):
        return t.name, UNARY + 2
    if isinstance(t, s.SInt):
        return str(t.value), UNARY if t.value < 0 else UNARY + 2
    if isinstance(t, s.SFloat):
        return repr(t.value), UNARY if t.value < 0 else UNARY + 2
    if isinstance(t, s.SStr):
        return f'"{_escape(t.value)}"', UNARY + 2
    if isinstance(t, s.SParagraph):
        return _paragraph(t, level), UNARY + 2
    if isinstance(t, s.SOp):
        return f"({t.name})", UNARY + 2
    if isinstance(t, s.SConstr):
        if t.args:
            args = ", ".join(_term(a, TOP, False, level) for a in t.args)
            return f"{t.name}({args})", UNARY + 1
        return t.name, UNARY + 2
    if isinstance(t, s.SCall):
        fn = _term(t.fn, UNARY + 1, False, level)
        args = ", ".join(_term(a, TOP, False, level) for a in t.args)
        return f"{fn}({args})", UNARY + 1
    if isinstance(t, s.SProject):
        return f"{_term(t.target, UNARY + 1, False, level)}.{t.field_name}", UNARY + 1
    if isinstance(t, s.SDynProject):
        target = _term(t.target, UNARY + 1, False, level)
        return f"{target}[{_term(t.key, TOP, False, level)}]", UNARY + 1
    if isinstance(t, s.SBinary):
        lvl = _LEVELS[t.op]
        left = _term(t.left, lvl, False, level)
        right = _term(t.right, lvl + 1, trailing, level)
        return f"{left} {t.op} {right}", lvl
    if isinstance(t, s.SInfixFun):
        left = _term(t.left, TICK, False, level)
        right = _term(t.right, TICK + 1, trailing, level)
        return f"{left} `{t.name}` {right}", TICK
    if isinstance(t, s.SDoc):
        doc = _term(t.doc, TOP, False, level)
        target = _term(t.target, UNARY, trailing, level)
        return f"@doc({doc}) {target}", TOP
    if isinstance(t, s.SList):
        elems = ", ".join(_term(e, 0, False, level) for e in t.elems)
        return f"[{elems}]", UNARY + 2
    if isinstance(t, s.SListComp):
        head = _term(t.head, 0, False, level)
        quals = " ".join(_qualifier(q, level) for q in t.qualifiers)
        return f"[{head} {quals}]", UNARY + 2
    if isinstance(t, s.SDict):
        entries = ", ".join(f"{k}: {_term(v, TOP, False, level)}" for k, v in t.entries)
        return f"{{{entries}}}", UNARY + 2
    if isinstance(t, s.SIf):
        cond = _term(t.cond, 0, False, level)
        if t.then.defs or t.orelse.defs:
            if not trailing:
                raise PrettyError("block-bodied if in non-trailing position")
            return (f"if {cond}:{_arm(t.then, level)}\n{_indent(level)}"
                    f"else:{_arm(t.orelse, level)}"), TOP
        then = _term(t.then.result, TOP, False, level)
        orelse = _term(t.orelse.result, TOP, trailing, level)
        return f"if {cond}: {then} else: {orelse}", TOP
    if isinstance(t, s.SMatch):
        if not trailing:
            raise PrettyError("match in non-trailing position")
        scrut = _term(t.scrutinee, 0, False, level)
        lines = [f"match {scrut}:"]
        for clause in t.clauses:
            lines.append(f"{_indent(level + 1)}{_pattern(clause.pattern)}:"
                         f"{_body(clause.body, level + 1)}")
        return "\n".join(lines), TOP
    if isinstance(t, s.SLambda):
        params = ", ".join(_pattern(p) for p in t.params)
        return f"fun ({params}):{_arm(t.body, level)}", TOP
    raise PrettyError(f"unknown term {t!r}")


def _paragraph(t: s.SParagraph, level: int) -> str:
    parts = ['p"']
    for el in t.elements:
        if isinstance(el, s.ParaToken):
            parts.append(_escape(el.text, "{}"))
        else:
            parts.append("{" + _term(el.term, TOP, False, level) + "}")
    parts.append('"')
    return "".join(parts)


def _qualifier(q, level: int) -> str:
    if isinstance(q, s.QGen):
        return f"for ({_pattern(q.pattern)}) in {_term(q.source, 0, False, level)}"
    if isinstance(q, s.QGuard):
        return f"if {_term(q.cond, 0, False, level)}"
    return f"def {_pattern(q.pattern)} = {_term(q.term, 0, False, level)}"


def _pattern(p: s.Pattern) -> str:
    if isinstance(p, s.PVar):
        return p.name
    if isinstance(p, s.PWild):
        return "_"
    if isinstance(p, s.PConstr):
        if p.args:
            return f"{p.name}({', '.join(_pattern(a) for a in p.args)})"
        return p.name
    if isinstance(p, s.PList):
        elems = [_pattern(e) for e in p.elems]
        if p.rest is not None:
            elems.append("*" + ("_" if isinstance(p.rest, s.PWild) else p.rest.name))
        return f"[{', '.join(elems)}]"
    if isinstance(p, s.PDict):
        return "{" + ", ".join(f"{k}: {_pattern(v)}" for k, v in p.entries) + "}"
    raise PrettyError(f"unknown pattern {p!r}")
