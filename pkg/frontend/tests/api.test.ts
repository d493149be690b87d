import { describe, expect, it } from "vitest";

import { ApiError, Client, isAbort } from "../src/api";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("Client", () => {
  it("parses scenario responses", async () => {
    const client = new Client("", async () => jsonResponse({ delta_kt: -16.25, map: [] }));
    const result = await client.scenario({ regions: ["C"], effectiveness: 1, basis: "pog" });
    expect(result.delta_kt).toBe(-16.25);
  });

  it("surfaces API errors with status and detail", async () => {
    const client = new Client("", async () => jsonResponse({ detail: "no regions to ban" }, 400));
    await expect(
      client.scenario({ regions: [], effectiveness: 1, basis: "pog" }),
    ).rejects.toMatchObject({ status: 400, message: "no regions to ban" });
    const err = await client
      .scenario({ regions: [], effectiveness: 1, basis: "pog" })
      .catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
  });

  it("aborts the in-flight scenario when a newer one is submitted", async () => {
    const client = new Client("", (_input, init) => {
      return new Promise<Response>((resolve, reject) => {
        const signal = init?.signal as AbortSignal | undefined;
        signal?.addEventListener("abort", () =>
          reject(new DOMException("aborted", "AbortError")),
        );
        setTimeout(() => resolve(jsonResponse({ delta_kt: 1, map: [] })), 5);
      });
    });
    const first = client.scenario({ regions: ["A"], effectiveness: 1, basis: "pog" });
    const second = client.scenario({ regions: ["B"], effectiveness: 1, basis: "pog" });
    const firstErr = await first.catch((e) => e);
    expect(isAbort(firstErr)).toBe(true);
    await expect(second).resolves.toMatchObject({ delta_kt: 1 });
  });

  it("does not touch GET endpoints when superseding scenarios", async () => {
    const calls: string[] = [];
    const client = new Client("", async (input) => {
      calls.push(input);
      return jsonResponse([]);
    });
    await client.regions();
    await client.groups();
    await client.baseline("lca");
    expect(calls).toEqual(["/api/regions", "/api/groups", "/api/baseline?basis=lca"]);
  });
});
