// DOM renderers for view specs.  Every interactive element carries
// data-element-id (qualified with its view prefix) and data-vertex-id so
// event handlers and highlight application can stay generic.

import type { Mode, ParagraphRun, ViewElement, ViewJson } from "./protocol";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function interactive<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  prefix: string,
  element: ViewElement,
  className: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = el(tag, className, text);
  node.dataset.elementId = `${prefix}${element.elementId}`;
  node.dataset.vertexId = String(element.vertexId);
  return node;
}

export function renderView(view: ViewJson, prefix: string): HTMLElement {
  switch (view.kind) {
    case "matrix":
      return renderMatrix(view, prefix);
    case "table":
      return renderTable(view, prefix);
    case "barChart":
      return renderBarChart(view, prefix);
    case "stackedBar":
      return renderStackedBar(view, prefix);
    case "paragraph":
      return renderParagraph(view, prefix);
    case "multi":
      return renderMulti(view, prefix);
    default:
      return renderScalar(view, prefix);
  }
}

function renderScalar(view: ViewJson, prefix: string): HTMLElement {
  const box = el("div", "view view-scalar");
  const [only] = view.elements ?? [];
  if (only) {
    box.appendChild(interactive("span", prefix, only, "scalar-value", view.text));
  } else {
    box.textContent = view.text ?? "";
  }
  return box;
}

function renderMatrix(view: ViewJson, prefix: string): HTMLElement {
  const rows = view.rows ?? 0;
  const cols = view.cols ?? 0;
  const table = el("table", "view view-matrix");
  const body = el("tbody");
  const cells = new Map((view.elements ?? []).map((e) => [`${e.row},${e.col}`, e]));
  for (let r = 0; r < rows; r += 1) {
    const tr = el("tr");
    for (let c = 0; c < cols; c += 1) {
      const cell = cells.get(`${r},${c}`);
      tr.appendChild(cell
        ? interactive("td", prefix, cell, "matrix-cell", cell.text)
        : el("td", "matrix-cell"));
    }
    body.appendChild(tr);
  }
  table.appendChild(body);
  return table;
}

function renderTable(view: ViewJson, prefix: string): HTMLElement {
  const columns = view.columns ?? [];
  const table = el("table", "view view-table");
  const head = el("thead");
  const headRow = el("tr");
  for (const column of columns) {
    headRow.appendChild(el("th", undefined, column));
  }
  head.appendChild(headRow);
  table.appendChild(head);
  const body = el("tbody");
  const rows = (view.elements ?? []).filter((e) => e.type === "row");
  const cells = (view.elements ?? []).filter((e) => e.type === "cell");
  for (const row of rows) {
    const tr = interactive("tr", prefix, row, "table-row");
    for (const column of columns) {
      const cell = cells.find((e) => e.row === row.row && e.column === column);
      tr.appendChild(cell
        ? interactive("td", prefix, cell, "table-cell", cell.text)
        : el("td", "table-cell"));
    }
    body.appendChild(tr);
  }
  table.appendChild(body);
  return table;
}

function renderBarChart(view: ViewJson, prefix: string): HTMLElement {
  const box = el("div", "view view-barchart");
  if (view.title) box.appendChild(el("div", "chart-title", view.title));
  const area = el("div", "chart-area");
  const values = (view.elements ?? []).map((e) => e.value ?? 0);
  const top = Math.max(1, ...values);
  for (const element of view.elements ?? []) {
    const wrap = el("div", "bar-wrap");
    const bar = interactive("div", prefix, element, "bar");
    bar.style.height = `${(100 * (element.value ?? 0)) / top}%`;
    bar.title = `${element.label}: ${element.value}`;
    wrap.appendChild(bar);
    wrap.appendChild(el("div", "bar-label", element.label));
    area.appendChild(wrap);
  }
  box.appendChild(area);
  return box;
}

function renderStackedBar(view: ViewJson, prefix: string): HTMLElement {
  const box = el("div", "view view-stackedbar");
  if (view.title) box.appendChild(el("div", "chart-title", view.title));
  const area = el("div", "chart-area");
  const byBar = new Map<number, ViewElement[]>();
  for (const element of view.elements ?? []) {
    const index = element.barIndex ?? 0;
    if (!byBar.has(index)) byBar.set(index, []);
    byBar.get(index)!.push(element);
  }
  const totals = [...byBar.values()].map((segments) =>
    segments.reduce((acc, s) => acc + (s.value ?? 0), 0));
  const top = Math.max(1, ...totals);
  (view.bars ?? []).forEach((label, index) => {
    const wrap = el("div", "bar-wrap");
    const stack = el("div", "stack");
    for (const segment of byBar.get(index) ?? []) {
      const part = interactive("div", prefix, segment, `segment group-${segment.group}`);
      part.style.height = `${(100 * (segment.value ?? 0)) / top}%`;
      part.title = `${label} / ${segment.group}: ${segment.value}`;
      stack.appendChild(part);
    }
    wrap.appendChild(stack);
    wrap.appendChild(el("div", "bar-label", label));
    area.appendChild(wrap);
  });
  box.appendChild(area);
  return box;
}

function renderParagraph(view: ViewJson, prefix: string): HTMLElement {
  const box = el("div", "view view-paragraph");
  for (const run of view.runs ?? []) {
    box.appendChild(renderRun(run, prefix));
  }
  return box;
}

function renderRun(run: ParagraphRun, prefix: string): HTMLElement {
  if (run.type === "text") {
    return el("span", "para-text", run.text);
  }
  if (run.type === "value") {
    return interactive("span", prefix,
      { elementId: run.elementId, vertexId: run.vertexId }, "para-value", run.text);
  }
  const embed = el("span", "para-embed");
  embed.appendChild(renderView(run.view, `${prefix}${run.name}/`));
  return embed;
}

function renderMulti(view: ViewJson, prefix: string): HTMLElement {
  const box = el("div", "view view-multi");
  for (const [name, child] of Object.entries(view.children ?? {})) {
    const section = el("section", "multi-child");
    section.appendChild(el("div", "multi-label", name));
    section.appendChild(renderView(child, `${prefix}${name}/`));
    box.appendChild(section);
  }
  return box;
}

function escapeAttr(value: string): string {
  return value.replace(/\\/g, "\\\\").replace(/"/g, '\\"');
}

/** Replace all highlight classes under root with the given map.
 *  Persistent highlights render in the green family, transient in blue. */
export function applyHighlights(root: ParentNode,
                                highlights: Record<string, Mode>): void {
  for (const node of root.querySelectorAll(".hl-persistent, .hl-transient")) {
    node.classList.remove("hl-persistent", "hl-transient");
  }
  for (const [elementId, mode] of Object.entries(highlights)) {
    const selector = `[data-element-id="${escapeAttr(elementId)}"]`;
    for (const node of root.querySelectorAll(selector)) {
      node.classList.add(mode === "persistent" ? "hl-persistent" : "hl-transient");
    }
  }
}
