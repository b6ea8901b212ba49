"""Walkthrough: the pipeline stage by stage on a tiny program.

    python3 demos/02_language.py
"""

from fluence import evaluate_source, parse_source, tokenize
from fluence.core import to_sexpr
from fluence.desugar import desugar_module
from fluence.values import render_value

SOURCE = '''def squares = [x * x for (x) in range(0, 5) if x % 2 == 1]
def label = @doc(p"Squares of the odd numbers below 5: {squares}") (sum(squares))
label + 0
'''

print("tokens of the first line:")
print(" ", [f"{t.kind}:{t.text}" for t in tokenize(SOURCE)[:12]])

module = parse_source(SOURCE)
print(f"\nparsed: {len(module.definitions)} definitions + a final term")

core = desugar_module(module)
print("\ncore of the final term (comprehensions become concatMap chains):")
print(to_sexpr(core.bindings[0].expr)[:400], "...")

value, graph, env = evaluate_source(SOURCE)
print(f"\nresult: {render_value(value)}  ({len(graph)} graph vertices)")

label = env.lookup("label")
print("backward slice from the documented sum:",
      sorted(graph.backward_slice([label.addr]))[:10], "...")
docs = [addr for addr in range(len(graph)) if graph.has_doc(addr)]
print("doc-tagged vertices:", docs)
