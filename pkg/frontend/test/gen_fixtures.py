"""Regenerate the recorded wire fixtures from the primary component.

    python3 test/gen_fixtures.py

The exporter is deterministic, so the files only change when the
convolution fixture or the protocol changes.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE.parent.parent / "src"))

from fluence.document import RunConfig, build_document  # noqa: E402

ENTRY = HERE.parent.parent / "corpus" / "convolution" / "convolution.fld"


def main() -> None:
    document = build_document(RunConfig.load(ENTRY))
    fixtures = HERE / "fixtures"
    fixtures.mkdir(exist_ok=True)
    (fixtures / "bundle.json").write_text(document.bundle_text(), "utf-8")

    cell = document.output_view.elements
    image_cells = document.input_views["image"].elements
    recorded = []

    def record(roots, direction, mode):
        request = {"roots": roots, "direction": direction, "mode": mode}
        recorded.append({"request": request,
                         "response": document.select(roots, direction, mode)})
        return recorded[-1]["response"]

    click_2_2 = record([cell["cell:2,2"]], "upstream", "persistent")
    record([cell["cell:2,2"]], "upstream", "transient")
    record([cell["cell:1,1"]], "upstream", "persistent")
    record([image_cells["cell:2,2"]], "downstream", "transient")
    # hovering the whole intermediate card queries root + every element
    window = click_2_2["intermediates"][0]
    card_roots = [window["vertexId"]]
    card_roots += [e["vertexId"] for e in window["view"]["elements"]
                   if e["vertexId"] not in card_roots]
    record(card_roots, "upstream", "transient")
    record(card_roots, "downstream", "transient")

    (fixtures / "selects.json").write_text(
        json.dumps(recorded, indent=2) + "\n", "utf-8")
    print(f"wrote bundle.json and {len(recorded)} recorded selections")


if __name__ == "__main__":
    main()
