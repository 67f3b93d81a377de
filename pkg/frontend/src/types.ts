/** Wire types of the /v1 HTTP API. Lengths are mm Nature unless noted. */

export type PathOp =
  | ["M", number, number]
  | ["L", number, number]
  /** circular arc: center x, center y, radius, start angle, sweep (CCW > 0) */
  | ["A", number, number, number, number, number];

export type ContourPath = PathOp[];

export interface ChangeSet {
  created: number[];
  deleted: number[];
  modified: number[];
  diagnostics: string[];
}

export interface CommandResult {
  revision: number;
  changeset: ChangeSet;
}

export interface ReliefLevel {
  level_mm: number;
  contours: ContourPath[];
}

export interface SectionQuery {
  height_mm: number;
  contours: ContourPath[];
}

export interface TableRow {
  labels: string;
  h: number | null;
  h0: number | null;
  hx: number | null;
  rx: number | null;
  L: number | null;
  hc: number | null;
  rcx: number | null;
  type: string;
}

export interface TableData {
  headers: { names: string[]; symbols: string[] };
  unit: string;
  precision: number;
  rows: TableRow[];
  warnings: string[];
}

export interface ProjectDocument {
  revision: number;
  project: Record<string, unknown>;
}

/** One editing command; the kind tag names the server-side payload. */
export type Command = { kind: string } & Record<string, unknown>;

/** Everything the editor needs from the server. */
export interface Transport {
  getProject(id: number): Promise<ProjectDocument>;
  postCommand(id: number, command: Command, ifMatch: number): Promise<CommandResult>;
  renderPlan(id: number): Promise<string>;
  queryHeight(id: number, x: number, y: number): Promise<number>;
  querySection(id: number, x: number, y: number): Promise<SectionQuery>;
  relief(id: number): Promise<ReliefLevel[]>;
  table(id: number): Promise<TableData>;
}

/** 409: someone else moved the project forward. */
export class ConflictError extends Error {
  constructor(public readonly serverRevision: number) {
    super(`revision conflict, server at ${serverRevision}`);
    this.name = "ConflictError";
  }
}
