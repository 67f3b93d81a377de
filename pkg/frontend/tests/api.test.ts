import { describe, expect, it } from "vitest";

import { HttpTransport } from "../src/api.js";
import { ConflictError } from "../src/types.js";

function fetchStub(status: number, body: unknown, capture?: { url?: string; init?: RequestInit }) {
  return (async (url: RequestInfo | URL, init?: RequestInit) => {
    if (capture) {
      capture.url = String(url);
      capture.init = init;
    }
    return {
      ok: status >= 200 && status < 300,
      status,
      json: async () => body,
      text: async () => JSON.stringify(body),
    } as Response;
  }) as typeof fetch;
}

describe("HttpTransport", () => {
  it("posts commands with If-Match and parses the result", async () => {
    const capture: { url?: string; init?: RequestInit } = {};
    const t = new HttpTransport(
      "http://x",
      fetchStub(200, { revision: 4, changeset: { created: [], deleted: [], modified: [], diagnostics: [] } }, capture),
    );
    const result = await t.postCommand(2, { kind: "move_project", d: [1, 2] }, 3);
    expect(result.revision).toBe(4);
    expect(capture.url).toBe("http://x/v1/projects/2/commands");
    expect((capture.init!.headers as Record<string, string>)["If-Match"]).toBe("3");
    expect(JSON.parse(String(capture.init!.body))).toEqual({ kind: "move_project", d: [1, 2] });
  });

  it("maps 409 to ConflictError with the server revision", async () => {
    const t = new HttpTransport("", fetchStub(409, { detail: "revision mismatch", revision: 9 }));
    await expect(t.postCommand(1, { kind: "move_project", d: [0, 0] }, 1)).rejects.toThrowError(
      ConflictError,
    );
    await t.postCommand(1, { kind: "move_project", d: [0, 0] }, 1).catch((err: ConflictError) => {
      expect(err.serverRevision).toBe(9);
    });
  });

  it("raises on other failures with the body text", async () => {
    const t = new HttpTransport("", fetchStub(422, { detail: "bad" }));
    await expect(t.queryHeight(1, 0, 0)).rejects.toThrow(/422/);
  });

  it("builds query urls with coordinates", async () => {
    const capture: { url?: string } = {};
    const t = new HttpTransport("", fetchStub(200, { height_mm: 7800 }, capture));
    await expect(t.queryHeight(5, 100, -200)).resolves.toBe(7800);
    expect(capture.url).toBe("/v1/projects/5/query/height?x=100&y=-200");
  });
});
