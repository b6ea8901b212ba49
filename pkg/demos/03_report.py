"""Walkthrough: the stacked-bar report and its segment provenance.

    python3 demos/03_report.py
"""

from pathlib import Path

from fluence import RunConfig, build_document

ROOT = Path(__file__).parent.parent

document = build_document(RunConfig.load(ROOT / "corpus" / "report" / "report.fld"))
chart = document.output_view.children["chart"]
table = document.output_view.children["table"]

print("bars:", chart.json["bars"])
for element in chart.json["elements"]:
    print(f"  {element['elementId']}: {element['bar']} / {element['group']}"
          f" = {element['value']}")

print("\nhovering segment seg:0,0 (Water / Good):")
reply = document.select([chart.elements["seg:0,0"]], "upstream", "transient")
rows = sorted(k for k in reply["highlights"] if k.startswith("output/table/row:"))
print("  table rows highlighted:", rows)
paragraph = "".join(run.get("text", "")
                    for run in reply["intermediates"][0]["paragraph"]["runs"])
print("  computed doc:", paragraph)

print("\nevery segment's paragraph (the intermediates index):")
for entry in document.intermediates_index():
    text = "".join(run.get("text", "") for run in entry["paragraph"]["runs"])
    print(f"  [{entry['vertexId']}] {text}")
