// Page wiring: fetch the bundle, lay out inputs (left), discovered
// intermediates with their paragraphs (central column), output (right),
// and translate hover/click on any addressable element into selection
// queries.  Clicks establish persistent (green) selections and surface
// intermediate cards; hovers are transient (blue) and clear on exit.

import { DocumentClient, SelectionQueries } from "./client";
import type { Bundle, Direction, IntermediateJson, Mode, SelectRequest } from "./protocol";
import { applyHighlights, renderView } from "./render";
import { SelectionState } from "./state";

type Region = "input" | "output" | "intermediate";

function regionOf(elementId: string): Region {
  if (elementId.startsWith("input:")) return "input";
  if (elementId.startsWith("intermediate:")) return "intermediate";
  return "output";
}

/** Outputs trace upstream, inputs downstream, intermediates both ways. */
function directionsFor(region: Region): Direction[] {
  if (region === "input") return ["downstream"];
  if (region === "intermediate") return ["upstream", "downstream"];
  return ["upstream"];
}

export class ExplorerApp {
  readonly state = new SelectionState();
  private readonly queries: SelectionQueries;
  private work: Promise<void> = Promise.resolve();
  private bundle!: Bundle;

  constructor(private readonly root: HTMLElement,
              private readonly client: DocumentClient) {
    this.queries = new SelectionQueries(client);
  }

  /** All interactions settle when this resolves. */
  idle(): Promise<void> {
    return this.work;
  }

  private enqueue(task: () => Promise<void>): void {
    this.work = this.work.then(task).catch((error) => {
      this.toast(`request failed: ${error}`);
    });
  }

  async start(): Promise<void> {
    this.bundle = await this.client.document();
    if (this.bundle.protocol !== "fluence/1") {
      this.root.appendChild(banner(
        `unsupported document protocol: ${this.bundle.protocol}`));
      return;
    }
    this.root.innerHTML = "";
    this.root.appendChild(this.column("inputs-column", "Inputs"));
    this.root.appendChild(this.column("intermediates-column", "Intermediates"));
    this.root.appendChild(this.column("output-column", "Output"));

    const inputs = this.root.querySelector("#inputs-column")!;
    for (const [name, view] of Object.entries(this.bundle.inputs)) {
      const card = document.createElement("div");
      card.className = "card input-card";
      card.appendChild(label(name));
      card.appendChild(renderView(view, `input:${name}/`));
      inputs.appendChild(card);
    }
    const output = this.root.querySelector("#output-column")!;
    const card = document.createElement("div");
    card.className = "card output-card";
    card.appendChild(label(this.bundle.entry));
    card.appendChild(renderView(this.bundle.output, "output/"));
    output.appendChild(card);

    this.root.addEventListener("click", (event) => this.onClick(event));
    this.root.addEventListener("mouseover", (event) => this.onHover(event));
    this.root.addEventListener("mouseout", (event) => this.onHoverExit(event));
  }

  private column(id: string, title: string): HTMLElement {
    const section = document.createElement("section");
    section.id = id;
    section.className = "column";
    section.appendChild(label(title));
    return section;
  }

  private hit(event: Event): { elementId: string; roots: number[]; region: Region } | null {
    const origin = event.target as HTMLElement | null;
    const target = origin?.closest?.("[data-element-id]");
    if (target instanceof HTMLElement) {
      const elementId = target.dataset.elementId!;
      return {
        elementId,
        roots: [Number(target.dataset.vertexId)],
        region: regionOf(elementId),
      };
    }
    // hovering an intermediate card (not one of its cells) queries the
    // whole value: its root plus every addressable element
    const card = origin?.closest?.("[data-intermediate]");
    if (card instanceof HTMLElement) {
      const roots = [Number(card.dataset.intermediate)];
      // the paragraph is metadata, not part of the documented value
      const scope = card.querySelector(".intermediate-view") ?? card;
      for (const node of scope.querySelectorAll("[data-vertex-id]")) {
        const vertex = Number((node as HTMLElement).dataset.vertexId);
        if (!roots.includes(vertex)) roots.push(vertex);
      }
      return { elementId: `intermediate:${card.dataset.intermediate}`,
               roots, region: "intermediate" };
    }
    return null;
  }

  private requestsFor(roots: number[], region: Region, mode: Mode): SelectRequest[] {
    return directionsFor(region).map((direction) => ({ roots, direction, mode }));
  }

  onClick(event: Event): void {
    const hit = this.hit(event);
    if (!hit) return;
    this.enqueue(async () => {
      const key = hit.roots[0];
      if (this.state.isPersistent(key)) {
        this.state.togglePersistent(key, []);
        this.refresh();
        return;
      }
      const responses = await this.queries.run(
        this.requestsFor(hit.roots, hit.region, "persistent"));
      if (!responses) return;
      this.state.togglePersistent(key, responses);
      this.refresh();
    });
  }

  onHover(event: Event): void {
    const hit = this.hit(event);
    if (!hit) return;
    this.enqueue(async () => {
      const responses = await this.queries.run(
        this.requestsFor(hit.roots, hit.region, "transient"));
      if (!responses) return;
      this.state.setTransient(responses);
      this.refresh();
    });
  }

  onHoverExit(event: Event): void {
    if (!this.hit(event)) return;
    this.enqueue(async () => {
      this.state.clearTransient();
      this.refresh();
    });
  }

  private refresh(): void {
    this.renderIntermediates(this.state.intermediates());
    applyHighlights(this.root, this.state.highlights());
  }

  private renderIntermediates(cards: IntermediateJson[]): void {
    const column = this.root.querySelector("#intermediates-column")!;
    for (const stale of column.querySelectorAll(".intermediate-card")) {
      stale.remove();
    }
    for (const card of cards) {
      const box = document.createElement("div");
      box.className = "card intermediate-card";
      box.dataset.intermediate = String(card.vertexId);
      const body = document.createElement("div");
      body.className = "intermediate-view";
      body.appendChild(renderView(card.view, `intermediate:${card.vertexId}/`));
      box.appendChild(body);
      const para = document.createElement("div");
      para.className = "intermediate-doc";
      para.appendChild(renderView(card.paragraph, `doc:${card.vertexId}/`));
      box.appendChild(para);
      column.appendChild(box);
    }
  }

  private toast(message: string): void {
    const note = document.createElement("div");
    note.className = "toast";
    note.textContent = message;
    this.root.appendChild(note);
  }
}

function label(text: string): HTMLElement {
  const node = document.createElement("div");
  node.className = "label";
  node.textContent = text;
  return node;
}

function banner(text: string): HTMLElement {
  const node = document.createElement("div");
  node.className = "banner-error";
  node.textContent = text;
  return node;
}

export async function initApp(root: HTMLElement, base = ""): Promise<ExplorerApp> {
  const app = new ExplorerApp(root, new DocumentClient(base));
  await app.start();
  return app;
}

declare global {
  interface Window {
    fluenceExplorer?: ExplorerApp;
  }
}

if (typeof document !== "undefined") {
  const mount = document.getElementById("app");
  if (mount) {
    initApp(mount).then((app) => {
      window.fluenceExplorer = app;
    });
  }
}
