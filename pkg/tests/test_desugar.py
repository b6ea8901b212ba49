"""Desugarer: error cases, structural invariants, clause completion."""

from __future__ import annotations

import pytest

from conftest import CORPUS
from fluence.core import (
    CApp, CConstr, CDict, CDoc, CDynProject, CLambda, CLet, CLetRec, COp,
    CProject, CStr, CVar, ElimConstr, ElimDict, ElimVar, is_core_expr,
    is_eliminator,
)
from fluence.desugar import Desugarer, RecBinding, desugar_module, desugar_term
from fluence.errors import DesugarError
from fluence.parser import parse_source
from fluence.sigs import SIGNATURE
from oracles.randprog import generate


def desugar_final(source: str):
    module = parse_source(source)
    return desugar_term(module.final)


def test_unknown_constructor():
    with pytest.raises(DesugarError, match="unknown constructor"):
        desugar_final("Whatsit(1)\n")


def test_constructor_arity_mismatch():
    with pytest.raises(DesugarError, match="expects 2 arguments"):
        desugar_final("Cons(1)\n")


def test_constructor_pattern_arity_mismatch():
    with pytest.raises(DesugarError, match="expects 0 arguments"):
        desugar_module(parse_source("def f(True(x)): 1\n0\n"))


def test_variable_constructor_collision_is_ambiguous():
    source = "def f([]): 1\ndef f(x): 2\n0\n"
    with pytest.raises(DesugarError, match="ambiguous"):
        desugar_module(parse_source(source))


def test_differently_named_variables_cannot_merge():
    source = "def f(x, []): 1\ndef f(y, [h, *t]): 2\n0\n"
    with pytest.raises(DesugarError, match="must agree"):
        desugar_module(parse_source(source))


def test_overlapping_clauses_unreachable():
    source = "def f(x): 1\ndef f(x): 2\n0\n"
    with pytest.raises(DesugarError, match="overlapping"):
        desugar_module(parse_source(source))


def test_mixed_datatype_constructors_rejected():
    source = "def f(True): 1\ndef f([]): 2\n0\n"
    with pytest.raises(DesugarError, match="different datatypes"):
        desugar_module(parse_source(source))


def test_inconsistent_clause_arity():
    source = "def f(x): 1\ndef f(x, y): 2\n0\n"
    with pytest.raises(DesugarError, match="parameter counts"):
        desugar_module(parse_source(source))


def test_duplicate_dict_keys():
    with pytest.raises(DesugarError, match="duplicate key"):
        desugar_final("{a: 1, a: 2}\n")


def test_refutable_comprehension_declaration():
    with pytest.raises(DesugarError, match="refutable"):
        desugar_final("[x for (y) in [1] def [x, *t] = [y]]\n")


def test_wildcards_merge_and_bind_fresh_names():
    module = parse_source("def f(_, _): 7\n0\n")
    core = desugar_module(module)
    binding = core.bindings[0]
    assert isinstance(binding, RecBinding)
    elim = binding.defs[0][1]
    assert isinstance(elim, ElimVar) and elim.name.startswith("_")
    inner = elim.cont
    assert isinstance(inner, CLambda)


def test_reserved_primitive_names_cannot_be_bound():
    with pytest.raises(DesugarError, match="reserved primitive"):
        desugar_module(parse_source("def numToStr = 1\n0\n"))


def test_dict_eliminator_fields_sorted():
    core = desugar_final("match d:\n    {b: x, a: y}: x\n")
    elim = core.fn.elim
    assert isinstance(elim, ElimDict)
    assert elim.fields == ("a", "b")
    # sub-patterns reordered with the keys: a's pattern first
    assert elim.cont.name == "y"


def test_infix_function_desugars_to_nested_application():
    core = desugar_final("a `f` b\n")
    assert isinstance(core, CApp)
    assert isinstance(core.fn, CApp)
    assert core.fn.fn == CVar("f", None)


def test_paragraph_element_count_matches_list_length():
    for source, count in [('p""\n', 0), ('p"hi"\n', 1), ('p"n={x}"\n', 2),
                          ('p"{a}{b} tail"\n', 3)]:
        core = desugar_final(source)
        assert core.name == "Paragraph"
        spine = core.args[0]
        n = 0
        while spine.name == "Cons":
            n += 1
            spine = spine.args[1]
        assert n == count, source


def _walk_core(node):
    yield node
    if isinstance(node, CApp):
        yield from _walk_core(node.fn)
        yield from _walk_core(node.arg)
    elif isinstance(node, CConstr):
        for a in node.args:
            yield from _walk_core(a)
    elif isinstance(node, CDict):
        for _, v in node.entries:
            yield from _walk_core(v)
    elif isinstance(node, (CProject,)):
        yield from _walk_core(node.target)
    elif isinstance(node, CDynProject):
        yield from _walk_core(node.target)
        yield from _walk_core(node.key)
    elif isinstance(node, CLambda):
        yield from _walk_core(node.elim)
    elif isinstance(node, CLet):
        yield from _walk_core(node.bound)
        yield from _walk_core(node.body)
    elif isinstance(node, CLetRec):
        for _, elim in node.defs:
            yield from _walk_core(elim)
        yield from _walk_core(node.body)
    elif isinstance(node, CDoc):
        yield from _walk_core(node.doc)
        yield from _walk_core(node.target)
    elif isinstance(node, ElimVar):
        yield from _walk_core(node.cont)
    elif isinstance(node, ElimDict):
        yield from _walk_core(node.cont)
    elif isinstance(node, ElimConstr):
        for _, cont in node.branches:
            yield from _walk_core(cont)


def _assert_core_only(core_module):
    for binding in core_module.bindings:
        roots = ([elim for _, elim in binding.defs]
                 if isinstance(binding, RecBinding) else [binding.expr])
        for root in roots:
            for node in _walk_core(root):
                assert is_core_expr(node) or is_eliminator(node), node
    if core_module.final is not None:
        for node in _walk_core(core_module.final):
            assert is_core_expr(node) or is_eliminator(node), node


def _assert_homogeneous_eliminators(core_module):
    def check(node):
        if isinstance(node, ElimConstr):
            datatypes = {SIGNATURE.datatype(c) for c, _ in node.branches}
            assert len(datatypes) == 1, node
        return node

    for binding in core_module.bindings:
        roots = ([elim for _, elim in binding.defs]
                 if isinstance(binding, RecBinding) else [binding.expr])
        for root in roots:
            for node in _walk_core(root):
                check(node)


def test_output_is_pure_core_on_corpus_and_random():
    sources = [p.read_text("utf-8") for p in sorted(CORPUS.rglob("*.fld"))]
    sources += [generate(seed) for seed in range(60)]
    for source in sources:
        core = desugar_module(parse_source(source))
        _assert_core_only(core)
        _assert_homogeneous_eliminators(core)


def test_desugaring_is_deterministic():
    source = CORPUS.joinpath("comprehensions.fld").read_text("utf-8")
    a = desugar_module(parse_source(source))
    b = desugar_module(parse_source(source))
    assert a == b


def test_empty_module():
    core = desugar_module(parse_source(""))
    assert core.bindings == ()
    assert core.final is None


def test_shadowing_produces_two_bindings():
    core = desugar_module(parse_source("def x = 1\ndef x = 2\nx\n"))
    assert len(core.bindings) == 2


def test_mutual_groups_split_minimally():
    source = ("def a(n): n\n"
              "def b(n): c(n)\n"
              "def c(n): b(n)\n"
              "def d(n): a(n)\n"
              "0\n")
    core = desugar_module(parse_source(source))
    groups = [[name for name, _ in b.defs] for b in core.bindings]
    assert groups == [["a"], ["b", "c"], ["d"]]
