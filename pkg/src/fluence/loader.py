"""Module loading and whole-program evaluation.

Imports are header lines ``import "relative/path"`` resolved against the
entry file's directory and loaded exactly once; the module graph must sort
topologically.  Visibility is non-transitive: a module sees the prelude,
its direct imports' own definitions, and itself.  One dependence graph is
threaded through prelude, modules (in order) and the final program term.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .desugar import CoreModule, Desugarer, RecBinding, ValBinding, desugar_module
from .errors import ConfigError, EvalError
from .evaluator import close_definitions, evaluate, match_value
from .graph import DepGraph
from .parser import parse_source
from .surface import SurfaceModule
from .values import Env, Value

PRELUDE_NAME = "<prelude>"


@dataclass
class ModuleGraph:
    nodes: list[str]
    edges: list[tuple[str, str]]  # (importer, imported)
    order: list[str]  # topological, prelude excluded


@dataclass
class ProgramResult:
    value: Value
    graph: DepGraph
    env: Env
    exports: dict[str, dict[str, Value]]  # per module path
    core: CoreModule  # entry module core
    source: str  # entry source text
    module_graph: ModuleGraph = field(default=None)


def _read(path: Path) -> str:
    if not path.is_file():
        raise ConfigError(f"no such file: {path}")
    return path.read_text(encoding="utf-8")


def _resolve(root: Path, spec: str) -> Path:
    name = spec if spec.endswith(".fld") else spec + ".fld"
    return (root / name).resolve()


def load_program(entry: Path) -> tuple[ModuleGraph, dict[str, SurfaceModule]]:
    """Parse the entry file and its transitive imports exactly once; order
    modules topologically (ties broken by path)."""
    entry = Path(entry).resolve()
    root = entry.parent
    modules: dict[str, SurfaceModule] = {}
    imports: dict[str, list[str]] = {}

    def load(path: Path, stack: tuple[str, ...]) -> None:
        key = str(path)
        if key in stack:
            cycle = " -> ".join(list(stack[stack.index(key):]) + [key])
            raise ConfigError(f"import cycle: {cycle}")
        if key in modules:
            return
        module = parse_source(_read(path), key)
        modules[key] = module
        imports[key] = [str(_resolve(root, spec)) for spec in module.imports]
        for dep in imports[key]:
            load(Path(dep), stack + (key,))

    load(entry, ())

    # Kahn's algorithm; the ready set is kept sorted for determinism.
    incoming = {k: set(deps) for k, deps in imports.items()}
    order: list[str] = []
    ready = sorted(k for k, deps in incoming.items() if not deps)
    while ready:
        node = ready.pop(0)
        order.append(node)
        changed = False
        for other, deps in incoming.items():
            if node in deps:
                deps.remove(node)
                if not deps and other not in order and other not in ready:
                    ready.append(other)
                    changed = True
        if changed:
            ready.sort()
    if len(order) != len(modules):
        raise ConfigError("import cycle detected")
    edges = [(src, dst) for src, deps in imports.items() for dst in deps]
    graph = ModuleGraph(sorted(modules), sorted(edges), order)
    return graph, modules


def _evaluate_bindings(env: Env, core: CoreModule, graph: DepGraph
                       ) -> tuple[Env, dict[str, Value]]:
    """Fig-style definition evaluation: left to right, empty active set."""
    exports: dict[str, Value] = {}
    for binding in core.bindings:
        if isinstance(binding, ValBinding):
            value = evaluate(env, binding.expr, (), graph)
            pairs, _, _ = match_value([value], binding.elim, binding.span)
            env = env.bind_many(pairs)
            exports.update(pairs)
        elif isinstance(binding, RecBinding):
            closures = close_definitions(env, binding.defs, (), graph)
            env = env.bind_many(closures)
            exports.update(closures)
        else:
            raise EvalError(f"unknown binding {binding!r}")
    return env, exports


def _prelude_source() -> str:
    return resources.files("fluence").joinpath("prelude.fld").read_text("utf-8")


_PRELUDE_CORE: CoreModule | None = None


def prelude_core() -> CoreModule:
    """Parse and desugar the prelude once; the core tree is immutable."""
    global _PRELUDE_CORE
    if _PRELUDE_CORE is None:
        _PRELUDE_CORE = desugar_module(parse_source(_prelude_source(), PRELUDE_NAME))
    return _PRELUDE_CORE


def evaluate_program(entry: Path) -> ProgramResult:
    """Load, desugar and evaluate a program end to end."""
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))
    entry = Path(entry).resolve()
    module_graph, surfaces = load_program(entry)

    graph = DepGraph()
    _, prelude_exports = _evaluate_bindings(Env.EMPTY, prelude_core(), graph)
    base = Env.frame(prelude_exports)

    cores: dict[str, CoreModule] = {}
    exports: dict[str, dict[str, Value]] = {PRELUDE_NAME: prelude_exports}
    envs: dict[str, Env] = {}
    for key in module_graph.order:
        desugarer = Desugarer()
        core = desugarer.module(surfaces[key])
        cores[key] = core
        env: Env = base
        for dep in surfaces[key].imports:
            dep_key = str(_resolve(entry.parent, dep))
            env = Env.frame(exports[dep_key], env)
        env, own = _evaluate_bindings(env, core, graph)
        exports[key] = own
        envs[key] = env

    entry_key = str(entry)
    core = cores[entry_key]
    if core.final is None:
        raise EvalError("entry module has no final expression to run")
    value = evaluate(envs[entry_key], core.final, (), graph)
    return ProgramResult(value, graph, envs[entry_key], exports, core,
                         _read(entry), module_graph)


def evaluate_source(source: str, file: str = "<input>") -> tuple[Value, DepGraph, Env]:
    """Evaluate a single-module program given as text (no imports)."""
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))
    module = parse_source(source, file)
    if module.imports:
        raise ConfigError("evaluate_source does not resolve imports")
    graph = DepGraph()
    _, prelude_exports = _evaluate_bindings(Env.EMPTY, prelude_core(), graph)
    core = desugar_module(module)
    env, _ = _evaluate_bindings(Env.frame(prelude_exports), core, graph)
    if core.final is None:
        raise EvalError("program has no final expression")
    value = evaluate(env, core.final, (), graph)
    return value, graph, env
