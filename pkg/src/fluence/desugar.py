"""Desugaring from surface syntax to the core language.

Covers: lists to Cons chains, if to a Bool eliminator application, match
and function clauses merged column-by-column into eliminators, the four
list-comprehension qualifier forms (generators totalised via clause
completion with a default of []), paragraph literals to the Paragraph
constructor over a Cons list, and @doc to its core form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from . import surface as s
from .core import (
    CApp, CConstr, CDict, CDoc, CDynProject, CFloat, CInt, CLambda, CLet,
    CLetRec, COp, CoreExpr, CProject, CStr, CVar, Continuation, ElimConstr,
    ElimDict, Eliminator, ElimVar, is_core_expr, is_eliminator,
)
from .errors import DesugarError, Span
from .primitives import OPERATOR_NAMES, PRIMITIVE_IDENTS
from .sigs import CONS, NIL, SIGNATURE


@dataclass(frozen=True)
class ClauseState:
    """One clause mid-merge: active sub-pattern stack, remaining top-level
    patterns, and the clause body (surface block/term or pre-built core)."""

    stack: tuple[s.Pattern, ...]
    remaining: tuple[s.Pattern, ...]
    body: Union[s.Block, s.Term, CoreExpr]


@dataclass(frozen=True)
class ValBinding:
    pattern: s.Pattern
    elim: Eliminator
    expr: CoreExpr
    span: Span


@dataclass(frozen=True)
class RecBinding:
    defs: tuple[tuple[str, Eliminator], ...]
    span: Span


Binding = Union[ValBinding, RecBinding]


@dataclass(frozen=True)
class CoreModule:
    bindings: tuple[Binding, ...]
    final: CoreExpr | None


# Sentinel continuation body used when an eliminator exists only to bind a
# definition pattern; it is never evaluated.
_NOWHERE = Span("<internal>", 0, 0, 0, 0)
BIND_SENTINEL = CInt(0, _NOWHERE)


class Desugarer:
    def __init__(self, signature=SIGNATURE):
        self.sig = signature
        self._wild = 0

    # -- patterns ---------------------------------------------------------

    def _fresh_wild(self) -> str:
        name = f"_·{self._wild}"
        self._wild += 1
        return name

    def normalize_pattern(self, p: s.Pattern) -> s.Pattern:
        """Re-express list patterns via Cons/Nil and validate constructors."""
        if isinstance(p, (s.PVar, s.PWild)):
            if isinstance(p, s.PVar) and p.name in PRIMITIVE_IDENTS:
                raise DesugarError(f"cannot bind reserved primitive {p.name!r}", p.span)
            return p
        if isinstance(p, s.PConstr):
            arity = self.sig.arity(p.name, p.span)
            if arity != len(p.args):
                raise DesugarError(
                    f"constructor {p.name} expects {arity} arguments, got {len(p.args)}",
                    p.span)
            return s.PConstr(p.name, tuple(self.normalize_pattern(a) for a in p.args),
                             p.span)
        if isinstance(p, s.PDict):
            keys = [k for k, _ in p.entries]
            if len(set(keys)) != len(keys):
                raise DesugarError("duplicate field in dictionary pattern", p.span)
            return s.PDict(tuple((k, self.normalize_pattern(v)) for k, v in p.entries),
                           p.span)
        if isinstance(p, s.PList):
            tail: s.Pattern = (self.normalize_pattern(p.rest) if p.rest is not None
                               else s.PConstr(NIL, (), p.span))
            for elem in reversed(p.elems):
                tail = s.PConstr(CONS, (self.normalize_pattern(elem), tail), p.span)
            return tail
        raise DesugarError(f"unknown pattern {p!r}", getattr(p, "span", None))

    # -- terms --------------------------------------------------------------

    def term(self, t: s.Term) -> CoreExpr:
        if isinstance(t, s.SVar):
            if t.name == "_":
                raise DesugarError("wildcard is not an expression", t.span)
            if t.name in PRIMITIVE_IDENTS:
                return COp(t.name, t.span)
            return CVar(t.name, t.span)
        if isinstance(t, s.SInt):
            return CInt(t.value, t.span)
        if isinstance(t, s.SFloat):
            return CFloat(t.value, t.span)
        if isinstance(t, s.SStr):
            return CStr(t.value, t.span)
        if isinstance(t, s.SParagraph):
            return self.paragraph(t.elements, t.span)
        if isinstance(t, s.SOp):
            return COp(t.name, t.span)
        if isinstance(t, s.SCall):
            expr = self.term(t.fn)
            for arg in t.args:
                expr = CApp(expr, self.term(arg), t.span)
            return expr
        if isinstance(t, s.SConstr):
            arity = self.sig.arity(t.name, t.span)
            if arity != len(t.args):
                raise DesugarError(
                    f"constructor {t.name} expects {arity} arguments, got {len(t.args)}",
                    t.span)
            return CConstr(t.name, tuple(self.term(a) for a in t.args), t.span)
        if isinstance(t, s.SDict):
            keys = [k for k, _ in t.entries]
            if len(set(keys)) != len(keys):
                raise DesugarError("duplicate key in dictionary", t.span)
            return CDict(tuple((k, self.term(v)) for k, v in t.entries), t.span)
        if isinstance(t, s.SProject):
            return CProject(self.term(t.target), t.field_name, t.span)
        if isinstance(t, s.SDynProject):
            return CDynProject(self.term(t.target), self.term(t.key), t.span)
        if isinstance(t, s.SBinary):
            op = COp(t.op, t.span)
            return CApp(CApp(op, self.term(t.left), t.span), self.term(t.right), t.span)
        if isinstance(t, s.SInfixFun):
            fn = CVar(t.name, t.span)
            return CApp(CApp(fn, self.term(t.left), t.span), self.term(t.right), t.span)
        if isinstance(t, s.SIf):
            elim = ElimConstr((
                ("True", self.block(t.then)),
                ("False", self.block(t.orelse)),
            ))
            return CApp(CLambda(elim, t.span), self.term(t.cond), t.span)
        if isinstance(t, s.SMatch):
            states = [ClauseState((self.normalize_pattern(c.pattern),), (), c.body)
                      for c in t.clauses]
            elim = self.clauses(states, t.span)
            return CApp(CLambda(elim, t.span), self.term(t.scrutinee), t.span)
        if isinstance(t, s.SList):
            expr: CoreExpr = CConstr(NIL, (), t.span)
            for elem in reversed(t.elems):
                expr = CConstr(CONS, (self.term(elem), expr), t.span)
            return expr
        if isinstance(t, s.SListComp):
            # the parser guarantees parsed comprehensions have qualifiers;
            # empty ones arise only as synthetic rest-terms mid-desugar
            return self.comprehension(t.head, t.qualifiers, t.span)
        if isinstance(t, s.SLambda):
            state = ClauseState((self.normalize_pattern(t.params[0]),),
                                tuple(self.normalize_pattern(p) for p in t.params[1:]),
                                t.body)
            elim = self.clauses([state], t.span)
            return CLambda(elim, t.span)
        if isinstance(t, s.SDoc):
            return CDoc(self.term(t.doc), self.term(t.target), t.span)
        raise DesugarError(f"unknown term {t!r}", getattr(t, "span", None))

    def paragraph(self, elements: tuple[s.ParaElement, ...], span: Span) -> CoreExpr:
        items: CoreExpr = CConstr(NIL, (), span)
        for el in reversed(elements):
            if isinstance(el, s.ParaToken):
                head: CoreExpr = CStr(el.text, el.span)
            else:
                head = self.term(el.term)
            items = CConstr(CONS, (head, items), span)
        return CConstr("Paragraph", (items,), span)

    def comprehension(self, head: s.Term, quals: tuple[s.Qualifier, ...],
                      span: Span) -> CoreExpr:
        if not quals:
            return CConstr(CONS, (self.term(head), CConstr(NIL, (), span)), span)
        q, rest = quals[0], quals[1:]
        rest_term = s.SListComp(head, rest, span)
        if isinstance(q, s.QGuard):
            elim = ElimConstr((
                ("True", self.comprehension(head, rest, span)),
                ("False", CConstr(NIL, (), span)),
            ))
            return CApp(CLambda(elim, q.span), self.term(q.cond), span)
        if isinstance(q, s.QDecl):
            pattern = self.normalize_pattern(q.pattern)
            if not isinstance(pattern, (s.PVar, s.PWild)):
                raise DesugarError(
                    "refutable pattern in comprehension 'def' qualifier", q.span)
            state = ClauseState((pattern,), (), rest_term)
            elim = self.clauses([state], q.span)
            return CApp(CLambda(elim, q.span), self.term(q.term), span)
        if isinstance(q, s.QGen):
            state = ClauseState((self.normalize_pattern(q.pattern),), (), rest_term)
            states = self.complete_clause(state)
            elim = self.clauses(states, q.span)
            fn = CApp(CVar("concatMap", q.span), CLambda(elim, q.span), span)
            return CApp(fn, self.term(q.source), span)
        raise DesugarError(f"unknown qualifier {q!r}", getattr(q, "span", None))

    def block(self, block: s.Block) -> CoreExpr:
        core = self.term(block.result)
        for binding in reversed(self.group_definitions(block.defs)):
            if isinstance(binding, RecBinding):
                core = CLetRec(binding.defs, core, binding.span)
            elif isinstance(binding.pattern, s.PVar):
                core = CLet(binding.pattern.name, binding.expr, core, binding.span)
            elif isinstance(binding.pattern, s.PWild):
                core = CLet(self._fresh_wild(), binding.expr, core, binding.span)
            else:
                state = ClauseState((binding.pattern,), (), core)
                elim = self.clauses([state], binding.span)
                core = CApp(CLambda(elim, binding.span), binding.expr, binding.span)
        return core

    def _body_to_core(self, body) -> CoreExpr:
        if isinstance(body, s.Block):
            return self.block(body)
        if is_core_expr(body):
            return body  # pre-built core (nested blocks, sentinels)
        return self.term(body)

    # -- clause merging (trie construction) ------------------------------------

    def clauses(self, states: list[ClauseState], span: Span) -> Continuation:
        depths = {(len(st.stack), len(st.remaining)) for st in states}
        if len(depths) > 1:
            raise DesugarError("clauses have inconsistent arities", span)
        stack_len, rem_len = depths.pop()
        if stack_len == 0 and rem_len == 0:
            if len(states) > 1:
                raise DesugarError("overlapping clauses are never reached", span)
            return self._body_to_core(states[0].body)
        if stack_len == 0:
            pushed = [ClauseState((st.remaining[0],), st.remaining[1:], st.body)
                      for st in states]
            cont = self.clauses(pushed, span)
            assert is_eliminator(cont)
            return CLambda(cont, span)
        heads = [st.stack[0] for st in states]
        if all(isinstance(h, (s.PVar, s.PWild)) for h in heads):
            names = {h.name for h in heads if isinstance(h, s.PVar)}
            if len(names) > 1 or (names and any(isinstance(h, s.PWild) for h in heads)):
                raise DesugarError(
                    "variable patterns at the same position must agree", span)
            name = names.pop() if names else self._fresh_wild()
            tails = [ClauseState(st.stack[1:], st.remaining, st.body) for st in states]
            return ElimVar(name, self.clauses(tails, span))
        if all(isinstance(h, s.PDict) for h in heads):
            key_sets = {tuple(sorted(k for k, _ in h.entries)) for h in heads}
            if len(key_sets) > 1:
                raise DesugarError(
                    "dictionary patterns with different fields cannot merge", span)
            fields = key_sets.pop()
            pushed = []
            for st in states:
                entries = dict(st.stack[0].entries)
                subs = tuple(entries[k] for k in fields)
                pushed.append(ClauseState(subs + st.stack[1:], st.remaining, st.body))
            return ElimDict(fields, self.clauses(pushed, span))
        if all(isinstance(h, s.PConstr) for h in heads):
            datatypes = {self.sig.datatype(h.name, h.span) for h in heads}
            if len(datatypes) > 1:
                raise DesugarError(
                    "constructors from different datatypes in one match position", span)
            order: list[str] = []
            grouped: dict[str, list[ClauseState]] = {}
            for st in states:
                head = st.stack[0]
                if head.name not in grouped:
                    order.append(head.name)
                    grouped[head.name] = []
                grouped[head.name].append(
                    ClauseState(head.args + st.stack[1:], st.remaining, st.body))
            branches = tuple((c, self.clauses(grouped[c], span)) for c in order)
            return ElimConstr(branches)
        raise DesugarError(
            "ambiguous clauses: variable and constructor patterns collide", span)

    # -- clause completion (totalising generator patterns) ----------------------

    def complete_clause(self, state: ClauseState) -> list[ClauseState]:
        """Original clause plus siblings mapping non-matching constructors of
        the same datatype to a literal []."""
        stack, remaining, body = state.stack, state.remaining, state.body
        if not stack:
            return [state]
        head, tail = stack[0], stack[1:]
        if isinstance(head, (s.PVar, s.PWild)):
            return [ClauseState((head,) + st.stack, st.remaining, st.body)
                    for st in self.complete_clause(ClauseState(tail, remaining, body))]
        if isinstance(head, s.PDict):
            fields = tuple(sorted(k for k, _ in head.entries))
            entries = dict(head.entries)
            subs = tuple(entries[k] for k in fields)
            out = []
            for st in self.complete_clause(ClauseState(subs + tail, remaining, body)):
                n = len(subs)
                pat = s.PDict(tuple(zip(fields, st.stack[:n])), head.span)
                out.append(ClauseState((pat,) + st.stack[n:], st.remaining, st.body))
            return out
        if isinstance(head, s.PConstr):
            n = len(head.args)
            out = []
            for st in self.complete_clause(
                    ClauseState(head.args + tail, remaining, body)):
                pat = s.PConstr(head.name, st.stack[:n], head.span)
                out.append(ClauseState((pat,) + st.stack[n:], st.remaining, st.body))
            for sibling in self.sig.siblings(head.name, head.span):
                wilds = tuple(s.PWild(head.span)
                              for _ in range(self.sig.arity(sibling)))
                pad = tuple(s.PWild(head.span) for _ in tail)
                default = s.SList((), head.span)
                out.append(ClauseState((s.PConstr(sibling, wilds, head.span),) + pad,
                                       remaining, default))
            return out
        raise DesugarError(f"cannot complete pattern {head!r}",
                           getattr(head, "span", None))

    # -- definitions and modules --------------------------------------------------

    def group_definitions(self, defs: tuple[s.Definition, ...]) -> list[Binding]:
        bindings: list[Binding] = []
        i = 0
        while i < len(defs):
            d = defs[i]
            if isinstance(d, s.VarDef):
                pattern = self.normalize_pattern(d.pattern)
                state = ClauseState((pattern,), (), BIND_SENTINEL)
                elim = self.clauses([state], d.span)
                bindings.append(ValBinding(pattern, elim, self.block(d.body), d.span))
                i += 1
                continue
            run = []
            while i < len(defs) and isinstance(defs[i], s.FunClause):
                run.append(defs[i])
                i += 1
            bindings.extend(self._clause_run(run))
        return bindings

    def _clause_run(self, run: list[s.FunClause]) -> list[RecBinding]:
        # consecutive clauses of one name form a clause set
        sets: list[tuple[str, list[s.FunClause]]] = []
        for clause in run:
            if clause.name in PRIMITIVE_IDENTS or clause.name in OPERATOR_NAMES:
                raise DesugarError(
                    f"cannot bind reserved primitive {clause.name!r}", clause.span)
            if sets and sets[-1][0] == clause.name:
                sets[-1][1].append(clause)
            else:
                sets.append((clause.name, [clause]))
        compiled: list[tuple[str, Eliminator, Span]] = []
        for name, clauses in sets:
            arities = {len(c.params) for c in clauses}
            if len(arities) > 1:
                raise DesugarError(
                    f"clauses of {name!r} have inconsistent parameter counts",
                    clauses[0].span)
            states = [ClauseState((self.normalize_pattern(c.params[0]),),
                                  tuple(self.normalize_pattern(p) for p in c.params[1:]),
                                  c.body)
                      for c in clauses]
            elim = self.clauses(states, clauses[0].span)
            assert is_eliminator(elim)
            compiled.append((name, elim, clauses[0].span))
        return self._segment_recursive(compiled)

    def _segment_recursive(self, sets: list[tuple[str, Eliminator, Span]]
                           ) -> list[RecBinding]:
        """Split a clause run into minimal recursive groups: a group extends
        only while some member references a name defined later in the run."""
        free = [free_names(elim) for _, elim, _ in sets]
        names = [name for name, _, _ in sets]
        bindings = []
        i = 0
        while i < len(sets):
            end = i + 1
            while True:
                later = set(names[end:])
                if any(free[j] & later for j in range(i, end)):
                    end += 1
                else:
                    break
            group = tuple((name, elim) for name, elim, _ in sets[i:end])
            bindings.append(RecBinding(group, sets[i][2]))
            i = end
        return bindings

    def module(self, module: s.SurfaceModule) -> CoreModule:
        bindings = tuple(self.group_definitions(module.definitions))
        final = self.term(module.final) if module.final is not None else None
        return CoreModule(bindings, final)


def free_names(node, bound: frozenset[str] = frozenset()) -> set[str]:
    """Free variable names of a core expression or eliminator."""
    if isinstance(node, CVar):
        return set() if node.name in bound else {node.name}
    if isinstance(node, (CInt, CFloat, CStr, COp)):
        return set()
    if isinstance(node, CApp):
        return free_names(node.fn, bound) | free_names(node.arg, bound)
    if isinstance(node, CConstr):
        return set().union(*[free_names(a, bound) for a in node.args], set())
    if isinstance(node, CDict):
        return set().union(*[free_names(v, bound) for _, v in node.entries], set())
    if isinstance(node, CProject):
        return free_names(node.target, bound)
    if isinstance(node, CDynProject):
        return free_names(node.target, bound) | free_names(node.key, bound)
    if isinstance(node, CLambda):
        return free_names(node.elim, bound)
    if isinstance(node, CLet):
        return free_names(node.bound, bound) | free_names(node.body,
                                                          bound | {node.name})
    if isinstance(node, CLetRec):
        inner = bound | {name for name, _ in node.defs}
        out = free_names(node.body, inner)
        for _, elim in node.defs:
            out |= free_names(elim, inner)
        return out
    if isinstance(node, CDoc):
        return free_names(node.doc, bound) | free_names(node.target, bound)
    if isinstance(node, ElimVar):
        return free_names(node.cont, bound | {node.name})
    if isinstance(node, ElimDict):
        return free_names(node.cont, bound)
    if isinstance(node, ElimConstr):
        out: set[str] = set()
        for _, cont in node.branches:
            out |= free_names(cont, bound)
        return out
    raise TypeError(f"not a core node: {node!r}")


def desugar_term(term: s.Term) -> CoreExpr:
    return Desugarer().term(term)


def desugar_module(module: s.SurfaceModule) -> CoreModule:
    return Desugarer().module(module)
