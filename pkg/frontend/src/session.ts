/** Editor state machine, DOM-free so the whole contract is unit-testable.
 *
 * The session never mutates geometry locally: every visible change is a
 * server ack (command -> new revision -> re-fetched plan). Pointer queries
 * are throttled and read-only.
 */

import { LatestWins, Throttled, throttle } from "./throttle.js";
import {
  Command,
  ConflictError,
  ContourPath,
  ReliefLevel,
  TableData,
  Transport,
} from "./types.js";

export type Tool =
  | "select"
  | "add-rod"
  | "add-mesh"
  | "add-wire"
  | "add-double-wire"
  | "add-grounding"
  | "cut-segment"
  | "measure";

export interface Readout {
  x: number;
  y: number;
  heightMm: number;
  contours: ContourPath[] | null;
}

/** Everything the session tells the shell to repaint. */
export interface ViewHooks {
  planChanged(svg: string): void;
  tableChanged(table: TableData): void;
  readoutChanged(readout: Readout | null): void;
  reliefChanged(levels: ReliefLevel[] | null): void;
  conflict(serverRevision: number): void;
  error(message: string): void;
}

export interface SessionOptions {
  /** Pointer queries run at most once per this many ms (default 34 ~ 30/s). */
  queryIntervalMs?: number;
  /** Default height of rods placed by the cyclic add, mm. */
  rodHeightMm?: number;
  wireHeightMm?: number;
  wireSpanMm?: number;
  doubleWireOffsetMm?: number;
}

export class EditorSession {
  revision = 0;
  tool: Tool = "select";
  sectionReadout = false;
  reliefShown = false;

  private readonly queryThrottled: Throttled<[number, number]>;
  private readonly race = new LatestWins();
  private pendingVertices: Array<[number, number]> = [];
  private readonly rodHeightMm: number;
  private readonly wireHeightMm: number;
  private readonly doubleWireOffsetMm: number;

  constructor(
    readonly projectId: number,
    private readonly transport: Transport,
    private readonly view: ViewHooks,
    options: SessionOptions = {},
  ) {
    this.rodHeightMm = options.rodHeightMm ?? 10_000;
    this.wireHeightMm = options.wireHeightMm ?? 12_000;
    this.doubleWireOffsetMm = options.doubleWireOffsetMm ?? 8_000;
    this.queryThrottled = throttle(
      (x: number, y: number) => void this.runQuery(x, y),
      options.queryIntervalMs ?? 34,
    );
  }

  /** Initial load: plan, table, revision. */
  async load(): Promise<void> {
    const doc = await this.transport.getProject(this.projectId);
    this.revision = doc.revision;
    await this.refresh();
  }

  setTool(tool: Tool): void {
    this.tool = tool;
    this.pendingVertices = [];
  }

  /** The cyclic add ends on Escape with no command sent. */
  escape(): void {
    this.tool = "select";
    this.pendingVertices = [];
    this.queryThrottled.cancel();
  }

  setSectionReadout(on: boolean): void {
    this.sectionReadout = on;
  }

  /** Cursor moved over the plan (nature mm). Read-only; never posts. */
  pointerMove(x: number, y: number): void {
    this.queryThrottled(x, y);
  }

  pointerLeft(): void {
    this.queryThrottled.cancel();
    this.view.readoutChanged(null);
  }

  private async runQuery(x: number, y: number): Promise<void> {
    const ticket = this.race.ticket();
    try {
      if (this.sectionReadout) {
        const result = await this.transport.querySection(this.projectId, x, y);
        if (this.race.accept(ticket)) {
          this.view.readoutChanged({ x, y, heightMm: result.height_mm, contours: result.contours });
        }
      } else {
        const height = await this.transport.queryHeight(this.projectId, x, y);
        if (this.race.accept(ticket)) {
          this.view.readoutChanged({ x, y, heightMm: height, contours: null });
        }
      }
    } catch (err) {
      this.view.error(String(err));
    }
  }

  /** Click while an add tool is armed places one object; the tool stays
   * armed so placement repeats until Escape. */
  async clickAt(x: number, y: number): Promise<void> {
    switch (this.tool) {
      case "add-rod":
        await this.post({
          kind: "add_terminal",
          construction: { kind: "rod", apex: [x, y, this.rodHeightMm], freestanding: true },
          label: null,
          type_text: "",
          height: null,
          freestanding: null,
          color: null,
          linetype: null,
        });
        return;
      case "add-grounding":
        await this.post({ kind: "add_grounding_electrode", center_offset: [x, y] });
        return;
      case "add-wire":
      case "add-double-wire":
        this.pendingVertices.push([x, y]);
        if (this.pendingVertices.length === 2) {
          const [[x1, y1], [x2, y2]] = this.pendingVertices as [
            [number, number],
            [number, number],
          ];
          this.pendingVertices = [];
          const construction =
            this.tool === "add-wire"
              ? {
                  kind: "wire",
                  support1: [x1, y1, this.wireHeightMm],
                  support2: [x2, y2, this.wireHeightMm],
                }
              : {
                  kind: "double-wire",
                  support1: [x1, y1, this.wireHeightMm],
                  support2: [x2, y2, this.wireHeightMm],
                  offset2: this.doubleWireOffsetMm,
                  height2: this.wireHeightMm,
                };
          await this.post({
            kind: "add_terminal",
            construction,
            label: null,
            type_text: "",
            height: null,
            freestanding: null,
            color: null,
            linetype: null,
          });
        }
        return;
      case "add-mesh":
        this.pendingVertices.push([x, y]);
        return;
      default:
        return;
    }
  }

  /** Commit the mesh collected by add-mesh clicks (needs >= 3 vertices). */
  async commitMesh(zMm: number): Promise<void> {
    if (this.tool !== "add-mesh" || this.pendingVertices.length < 3) {
      return;
    }
    const ring = orientCcw(this.pendingVertices).map(([x, y]) => [x, y, zMm]);
    this.pendingVertices = [];
    await this.post({
      kind: "add_terminal",
      construction: { kind: "mesh", ring },
      label: null,
      type_text: "",
      height: null,
      freestanding: null,
      color: null,
      linetype: null,
    });
  }

  /** Drag of a terminal on the plan, nature deltas. */
  async dragTerminal(id: number, dxMm: number, dyMm: number): Promise<void> {
    await this.post({
      kind: "move_terminal",
      id,
      dx: dxMm,
      dy: dyMm,
      dz: 0,
      section_context: null,
    });
  }

  async deleteObject(kind: string, id: number): Promise<void> {
    await this.post({ kind: `delete_${kind}`, id } as Command);
  }

  async toggleRelief(): Promise<void> {
    if (this.reliefShown) {
      this.reliefShown = false;
      this.view.reliefChanged(null);
      return;
    }
    try {
      const levels = await this.transport.relief(this.projectId);
      this.reliefShown = true;
      this.view.reliefChanged(levels);
    } catch (err) {
      this.view.error(String(err));
    }
  }

  async updateSettings(command: Command): Promise<void> {
    await this.post(command);
  }

  /** Send one command with the optimistic revision; repaint on ack. */
  private async post(command: Command): Promise<void> {
    try {
      const result = await this.transport.postCommand(this.projectId, command, this.revision);
      this.revision = result.revision;
      await this.refresh();
    } catch (err) {
      if (err instanceof ConflictError) {
        const doc = await this.transport.getProject(this.projectId);
        this.revision = doc.revision;
        await this.refresh();
        this.view.conflict(err.serverRevision);
        return;
      }
      this.view.error(String(err));
    }
  }

  /** Re-fetch everything visible; the server is the only geometry source. */
  private async refresh(): Promise<void> {
    const [svg, table] = await Promise.all([
      this.transport.renderPlan(this.projectId),
      this.transport.table(this.projectId),
    ]);
    this.view.planChanged(svg);
    this.view.tableChanged(table);
    if (this.reliefShown) {
      this.view.reliefChanged(await this.transport.relief(this.projectId));
    }
  }
}

function orientCcw(points: Array<[number, number]>): Array<[number, number]> {
  let area = 0;
  for (let i = 0; i < points.length; i += 1) {
    const [x1, y1] = points[i]!;
    const [x2, y2] = points[(i + 1) % points.length]!;
    area += x1 * y2 - x2 * y1;
  }
  return area >= 0 ? points : [...points].reverse();
}
