// HTTP client with a sequence number so stale selection responses are
// discarded when a newer interaction has already fired.

import type { Bundle, SelectRequest, SelectResponse } from "./protocol";

export class DocumentClient {
  constructor(private readonly base: string = "") {}

  async document(): Promise<Bundle> {
    const response = await fetch(`${this.base}/document`);
    if (!response.ok) {
      throw new Error(`GET /document failed: ${response.status}`);
    }
    return (await response.json()) as Bundle;
  }

  async select(request: SelectRequest): Promise<SelectResponse> {
    const response = await fetch(`${this.base}/select`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!response.ok) {
      throw new Error(`POST /select failed: ${response.status}`);
    }
    return (await response.json()) as SelectResponse;
  }
}

/** Runs batches of selection queries; only the newest batch lands. */
export class SelectionQueries {
  private seq = 0;

  constructor(private readonly client: DocumentClient) {}

  async run(requests: SelectRequest[]): Promise<SelectResponse[] | null> {
    const ticket = ++this.seq;
    const responses = await Promise.all(
      requests.map((request) => this.client.select(request)),
    );
    return ticket === this.seq ? responses : null;
  }
}
