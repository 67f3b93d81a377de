/** Drawing of server path arrays. The client never recomputes zone
 * geometry; it replays exactly what the service sent. */

import { ContourPath } from "./types.js";

/** Nature (mm, y up) to screen (px, y down). */
export interface ViewTransform {
  scale: number; // px per mm
  offsetX: number; // px of nature origin
  offsetY: number;
}

export function toScreen(t: ViewTransform, x: number, y: number): [number, number] {
  return [t.offsetX + x * t.scale, t.offsetY - y * t.scale];
}

export function toNature(t: ViewTransform, px: number, py: number): [number, number] {
  return [(px - t.offsetX) / t.scale, (t.offsetY - py) / t.scale];
}

/** The subset of CanvasRenderingContext2D path calls we use; tests pass a
 * recording fake. */
export interface PathSink {
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number, counterclockwise?: boolean): void;
  closePath(): void;
}

/**
 * Replay one contour path into a canvas-style sink under a view transform.
 * Screen space flips y, so a CCW nature arc runs clockwise on screen and
 * its angles negate.
 */
export function drawPath(sink: PathSink, path: ContourPath, t: ViewTransform): void {
  for (const op of path) {
    if (op[0] === "M") {
      const [sx, sy] = toScreen(t, op[1], op[2]);
      sink.moveTo(sx, sy);
    } else if (op[0] === "L") {
      const [sx, sy] = toScreen(t, op[1], op[2]);
      sink.lineTo(sx, sy);
    } else {
      const [, cx, cy, r, a0, sweep] = op;
      const [sx, sy] = toScreen(t, cx, cy);
      sink.arc(sx, sy, r * t.scale, -a0, -(a0 + sweep), sweep > 0);
    }
  }
  sink.closePath();
}

/** SVG `d` attribute equivalent (arcs in endpoint form). */
export function pathToSvgD(path: ContourPath): string {
  const parts: string[] = [];
  for (const op of path) {
    if (op[0] === "M") {
      parts.push(`M ${op[1]} ${op[2]}`);
    } else if (op[0] === "L") {
      parts.push(`L ${op[1]} ${op[2]}`);
    } else {
      const [, cx, cy, r, a0, sweep] = op;
      const split = Math.abs(sweep) > Math.PI ? 2 : 1;
      for (let i = 0; i < split; i += 1) {
        const from = a0 + (sweep / split) * i;
        const to = a0 + (sweep / split) * (i + 1);
        if (i === 0 && parts.length === 0) {
          parts.push(`M ${cx + r * Math.cos(from)} ${cy + r * Math.sin(from)}`);
        }
        const large = Math.abs(to - from) > Math.PI ? 1 : 0;
        const flag = sweep > 0 ? 1 : 0;
        parts.push(`A ${r} ${r} 0 ${large} ${flag} ${cx + r * Math.cos(to)} ${cy + r * Math.sin(to)}`);
      }
    }
  }
  return parts.join(" ") + " Z";
}

/** Bounding box of paths in nature mm: [minX, minY, maxX, maxY]. */
export function pathsBounds(paths: ContourPath[]): [number, number, number, number] | null {
  let minX = Infinity;
  let minY = Infinity;
  let maxX = -Infinity;
  let maxY = -Infinity;
  const grow = (x: number, y: number) => {
    minX = Math.min(minX, x);
    minY = Math.min(minY, y);
    maxX = Math.max(maxX, x);
    maxY = Math.max(maxY, y);
  };
  for (const path of paths) {
    for (const op of path) {
      if (op[0] === "A") {
        grow(op[1] - op[3], op[2] - op[3]);
        grow(op[1] + op[3], op[2] + op[3]);
      } else {
        grow(op[1], op[2]);
      }
    }
  }
  return minX === Infinity ? null : [minX, minY, maxX, maxY];
}
