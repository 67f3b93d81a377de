/** Browser shell: canvas, toolbar, table panel. All geometry comes from
 * the server (SVG underlay + path arrays); this file only paints. */

import { drawPath, pathsBounds, toNature, ViewTransform } from "./paths.js";
import { EditorSession, Readout, Tool } from "./session.js";
import { ReliefLevel, TableData } from "./types.js";

const TOOLS: Tool[] = [
  "select",
  "add-rod",
  "add-mesh",
  "add-wire",
  "add-double-wire",
  "add-grounding",
];

export class PlanEditor {
  private readonly overlay: CanvasRenderingContext2D;
  private readonly underlay: HTMLImageElement;
  private transform: ViewTransform = { scale: 0.01, offsetX: 400, offsetY: 300 };
  private readout: Readout | null = null;
  private relief: ReliefLevel[] | null = null;
  private dragFrom: [number, number] | null = null;
  private dragId: number | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly session: EditorSession,
    private readonly canvas: HTMLCanvasElement,
    private readonly tablePanel: HTMLElement,
    private readonly status: HTMLElement,
  ) {
    const ctx = canvas.getContext("2d");
    if (!ctx) {
      throw new Error("canvas 2d context unavailable");
    }
    this.overlay = ctx;
    this.underlay = new Image();
    this.underlay.onload = () => this.paint();
    this.bindEvents();
  }

  hooks() {
    return {
      planChanged: (svg: string) => {
        this.underlay.src = `data:image/svg+xml;charset=utf-8,${encodeURIComponent(svg)}`;
      },
      tableChanged: (table: TableData) => this.renderTable(table),
      readoutChanged: (readout: Readout | null) => {
        this.readout = readout;
        this.paint();
      },
      reliefChanged: (levels: ReliefLevel[] | null) => {
        this.relief = levels;
        if (levels) {
          const bounds = pathsBounds(levels.flatMap((l) => l.contours));
          if (bounds) {
            this.fit(bounds);
          }
        }
        this.paint();
      },
      conflict: (revision: number) => this.toast(`Проект изменён извне (ревизия ${revision}); перезагружено`),
      error: (message: string) => this.toast(message),
    };
  }

  private fit([minX, minY, maxX, maxY]: [number, number, number, number]): void {
    const pad = 40;
    const sx = (this.canvas.width - 2 * pad) / Math.max(maxX - minX, 1);
    const sy = (this.canvas.height - 2 * pad) / Math.max(maxY - minY, 1);
    const scale = Math.min(sx, sy);
    this.transform = {
      scale,
      offsetX: pad - minX * scale,
      offsetY: this.canvas.height - pad + minY * scale,
    };
  }

  private bindEvents(): void {
    const bar = document.createElement("div");
    bar.className = "toolbar";
    for (const tool of TOOLS) {
      const button = document.createElement("button");
      button.textContent = tool;
      button.onclick = () => {
        this.session.setTool(tool);
        this.toast(`Инструмент: ${tool}`);
      };
      bar.appendChild(button);
    }
    const reliefButton = document.createElement("button");
    reliefButton.textContent = "рельеф";
    reliefButton.onclick = () => void this.session.toggleRelief();
    bar.appendChild(reliefButton);
    const sectionToggle = document.createElement("button");
    sectionToggle.textContent = "сечение в точке";
    sectionToggle.onclick = () => this.session.setSectionReadout(!this.session.sectionReadout);
    bar.appendChild(sectionToggle);
    this.root.insertBefore(bar, this.canvas);

    window.addEventListener("keydown", (event) => {
      if (event.key === "Escape") {
        this.session.escape();
        this.toast("Инструмент: select");
      }
      if (event.key === "Enter") {
        void this.session.commitMesh(5000);
      }
    });

    this.canvas.addEventListener("pointermove", (event) => {
      const [x, y] = this.cursorNature(event);
      this.session.pointerMove(x, y);
      if (this.dragFrom && this.dragId != null) {
        this.paint();
      }
    });
    this.canvas.addEventListener("pointerleave", () => this.session.pointerLeft());
    this.canvas.addEventListener("pointerdown", (event) => {
      if (this.session.tool === "select") {
        this.dragFrom = this.cursorNature(event);
        this.dragId = this.pickTerminal();
      }
    });
    this.canvas.addEventListener("pointerup", (event) => {
      const at = this.cursorNature(event);
      if (this.session.tool === "select" && this.dragFrom && this.dragId != null) {
        const [x0, y0] = this.dragFrom;
        const dx = at[0] - x0;
        const dy = at[1] - y0;
        if (Math.hypot(dx, dy) > 1) {
          void this.session.dragTerminal(this.dragId, dx, dy);
        }
      } else if (this.session.tool !== "select") {
        void this.session.clickAt(at[0], at[1]);
      }
      this.dragFrom = null;
      this.dragId = null;
    });
  }

  private pickTerminal(): number | null {
    const raw = window.prompt("id молниеприемника для переноса", "1");
    if (!raw) {
      return null;
    }
    const id = Number(raw);
    return Number.isInteger(id) && id > 0 ? id : null;
  }

  private cursorNature(event: PointerEvent): [number, number] {
    const rect = this.canvas.getBoundingClientRect();
    return toNature(this.transform, event.clientX - rect.left, event.clientY - rect.top);
  }

  private paint(): void {
    const ctx = this.overlay;
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    if (this.underlay.complete && this.underlay.naturalWidth > 0) {
      ctx.drawImage(this.underlay, 0, 0);
    }
    if (this.relief) {
      const n = this.relief.length;
      this.relief.forEach((level, i) => {
        ctx.beginPath();
        for (const path of level.contours) {
          drawPath(ctx, path, this.transform);
        }
        ctx.fillStyle = `rgba(30, 90, 200, ${0.04 + (0.3 * i) / Math.max(n - 1, 1)})`;
        ctx.fill("evenodd");
      });
    }
    if (this.readout) {
      if (this.readout.contours) {
        ctx.beginPath();
        for (const path of this.readout.contours) {
          drawPath(ctx, path, this.transform);
        }
        ctx.strokeStyle = "#d40000";
        ctx.stroke();
      }
      ctx.fillStyle = "#000";
      ctx.font = "12px sans-serif";
      const [sx, sy] = [
        this.transform.offsetX + this.readout.x * this.transform.scale,
        this.transform.offsetY - this.readout.y * this.transform.scale,
      ];
      ctx.fillText(`h = ${(this.readout.heightMm / 1000).toFixed(2)} м`, sx + 10, sy - 10);
    }
  }

  private renderTable(table: TableData): void {
    const rows = table.rows
      .map(
        (r) =>
          `<tr><td>${r.labels}</td><td>${fmt(r.h)}</td><td>${fmt(r.h0)}</td><td>${fmt(r.hx)}</td>` +
          `<td>${fmt(r.rx)}</td><td>${fmt(r.L)}</td><td>${fmt(r.hc)}</td><td>${fmt(r.rcx)}</td>` +
          `<td>${r.type}</td></tr>`,
      )
      .join("");
    this.tablePanel.innerHTML =
      `<table><thead><tr>${table.headers.symbols
        .map((s, i) => `<th>${s || (i === 0 ? "№№" : "Тип")}</th>`)
        .join("")}</tr></thead><tbody>${rows}</tbody></table>`;
  }

  private toast(message: string): void {
    this.status.textContent = message;
  }
}

function fmt(value: number | null): string {
  return value == null ? "" : String(value);
}
