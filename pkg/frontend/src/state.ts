// Client-side selection state.  The server is stateless: persistent
// selections (clicks, toggled off by a second click) and the transient
// hover selection live here, and the visible highlight map is a pure
// function of both.  Persistent wins where they overlap.

import type { IntermediateJson, Mode, SelectResponse } from "./protocol";

export class SelectionState {
  private persistent = new Map<number, SelectResponse[]>();
  private transient: SelectResponse[] = [];

  /** Toggle a click selection; returns true if it is now active. */
  togglePersistent(rootVertex: number, responses: SelectResponse[]): boolean {
    if (this.persistent.has(rootVertex)) {
      this.persistent.delete(rootVertex);
      return false;
    }
    this.persistent.set(rootVertex, responses);
    return true;
  }

  isPersistent(rootVertex: number): boolean {
    return this.persistent.has(rootVertex);
  }

  setTransient(responses: SelectResponse[]): void {
    this.transient = responses;
  }

  clearTransient(): void {
    this.transient = [];
  }

  highlights(): Record<string, Mode> {
    const out: Record<string, Mode> = {};
    for (const response of this.transient) {
      for (const elementId of Object.keys(response.highlights)) {
        out[elementId] = "transient";
      }
    }
    for (const responses of this.persistent.values()) {
      for (const response of responses) {
        for (const elementId of Object.keys(response.highlights)) {
          out[elementId] = "persistent";
        }
      }
    }
    return out;
  }

  /** Intermediate cards: click order, then server discovery order. */
  intermediates(): IntermediateJson[] {
    const seen = new Set<number>();
    const cards: IntermediateJson[] = [];
    for (const responses of this.persistent.values()) {
      for (const response of responses) {
        for (const card of response.intermediates) {
          if (!seen.has(card.vertexId)) {
            seen.add(card.vertexId);
            cards.push(card);
          }
        }
      }
    }
    return cards;
  }
}
