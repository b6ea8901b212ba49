"""Walkthrough: run the convolution document and trace one output cell.

    python3 demos/01_slices.py
"""

from pathlib import Path

from fluence import RunConfig, build_document
from fluence.values import render_value

ROOT = Path(__file__).parent.parent

document = build_document(
    RunConfig.load(ROOT / "corpus" / "convolution" / "convolution.fld"))

print("final value:")
print(render_value(document.result.value))
print(f"\ngraph: {len(document.graph)} vertices")

# click output cell (2, 2): trace upstream
root = document.output_view.elements["cell:2,2"]
reply = document.select([root], direction="upstream", mode="persistent")

print(f"\nselecting output cell (2,2) reaches {len(reply['reached'])} vertices")
(intermediate,) = reply["intermediates"]
print("documented intermediate (the averaged window):")
for element in intermediate["view"]["elements"]:
    end = "\n" if element["col"] == 2 else " "
    print(f"  {element['text']:>2}", end=end)
paragraph = "".join(run.get("text", "") for run in intermediate["paragraph"]["runs"])
print(f"its paragraph: {paragraph}")

image_cells = sorted(k for k in reply["highlights"] if k.startswith("input:image/"))
filter_cells = sorted(k for k in reply["highlights"] if k.startswith("input:filter/"))
print(f"\nhighlighted image cells ({len(image_cells)}): {image_cells}")
print(f"highlighted filter cells ({len(filter_cells)}): {filter_cells}")
print("(filter cells multiplied by zero image values are absent: zero"
      " annihilates multiplication)")
