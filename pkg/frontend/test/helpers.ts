// Recorded-fixture plumbing: fetch is stubbed with the deterministic
// exports produced by the primary component (test/gen_fixtures.py).

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { vi } from "vitest";

import type { Bundle, SelectRequest, SelectResponse } from "../src/protocol";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function loadBundle(): Bundle {
  return JSON.parse(readFileSync(join(FIXTURES, "bundle.json"), "utf-8"));
}

interface Recorded {
  request: SelectRequest;
  response: SelectResponse;
}

export function loadSelects(): Recorded[] {
  return JSON.parse(readFileSync(join(FIXTURES, "selects.json"), "utf-8"));
}

function sameRequest(a: SelectRequest, b: SelectRequest): boolean {
  return (
    a.direction === b.direction &&
    a.mode === b.mode &&
    a.roots.length === b.roots.length &&
    a.roots.every((root, i) => root === b.roots[i])
  );
}

/** Stub global fetch with the recorded document and selection replies. */
export function stubFetch(): { calls: SelectRequest[] } {
  const bundle = loadBundle();
  const selects = loadSelects();
  const calls: SelectRequest[] = [];
  vi.stubGlobal("fetch", async (url: string, init?: RequestInit) => {
    if (String(url).endsWith("/document")) {
      return new Response(JSON.stringify(bundle), { status: 200 });
    }
    if (String(url).endsWith("/select")) {
      const request = JSON.parse(String(init?.body)) as SelectRequest;
      calls.push(request);
      const hit = selects.find((entry) => sameRequest(entry.request, request));
      if (!hit) {
        return new Response(
          JSON.stringify({ detail: `no fixture for ${init?.body}` }),
          { status: 400 },
        );
      }
      return new Response(JSON.stringify(hit.response), { status: 200 });
    }
    return new Response("not found", { status: 404 });
  });
  return { calls };
}

export function recordedResponse(roots: number[], direction: string,
                                 mode: string): SelectResponse {
  const hit = loadSelects().find((entry) =>
    sameRequest(entry.request, { roots, direction, mode } as SelectRequest));
  if (!hit) throw new Error(`no recorded response for ${roots} ${direction}`);
  return hit.response;
}
