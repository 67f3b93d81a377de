/** fetch-backed transport for the /v1 API. */

import {
  Command,
  CommandResult,
  ConflictError,
  ProjectDocument,
  ReliefLevel,
  SectionQuery,
  TableData,
  Transport,
} from "./types.js";

type FetchLike = typeof fetch;

export class HttpTransport implements Transport {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = fetch.bind(globalThis),
  ) {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.base}/v1${path}`, init);
    if (response.status === 409) {
      const body = (await response.json()) as { revision: number };
      throw new ConflictError(body.revision);
    }
    if (!response.ok) {
      const text = await response.text();
      throw new Error(`${response.status}: ${text}`);
    }
    return (await response.json()) as T;
  }

  getProject(id: number): Promise<ProjectDocument> {
    return this.json(`/projects/${id}`);
  }

  postCommand(id: number, command: Command, ifMatch: number): Promise<CommandResult> {
    return this.json(`/projects/${id}/commands`, {
      method: "POST",
      headers: { "Content-Type": "application/json", "If-Match": String(ifMatch) },
      body: JSON.stringify(command),
    });
  }

  async renderPlan(id: number): Promise<string> {
    const response = await this.fetchFn(`${this.base}/v1/projects/${id}/render/plan`);
    if (!response.ok) {
      throw new Error(`render failed: ${response.status}`);
    }
    return response.text();
  }

  async queryHeight(id: number, x: number, y: number): Promise<number> {
    const body = await this.json<{ height_mm: number }>(
      `/projects/${id}/query/height?x=${x}&y=${y}`,
    );
    return body.height_mm;
  }

  querySection(id: number, x: number, y: number): Promise<SectionQuery> {
    return this.json(`/projects/${id}/query/section?x=${x}&y=${y}`);
  }

  relief(id: number): Promise<ReliefLevel[]> {
    return this.json(`/projects/${id}/relief`);
  }

  table(id: number): Promise<TableData> {
    return this.json(`/projects/${id}/table`);
  }
}
