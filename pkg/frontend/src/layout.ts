// Node placement. Any readable arrangement will do; nothing here is load-bearing.

import type { BoardState } from "./board.js";

const RING_RADIUS = 130;
const COLLISION = 46;
const NUDGE = 28;

export interface Point {
  x: number;
  y: number;
}

function tooClose(a: Point, b: Point): boolean {
  const dx = a.x - b.x;
  const dy = a.y - b.y;
  return dx * dx + dy * dy < COLLISION * COLLISION;
}

function occupied(state: BoardState, p: Point, extra: Point[]): boolean {
  return state.nodes.some((n) => tooClose(n, p)) || extra.some((q) => tooClose(q, p));
}

/** Nearest free spot to (x, y), spiralling outward in small steps. */
export function freePosition(state: BoardState, x: number, y: number, extra: Point[] = []): Point {
  let p = { x, y };
  let step = 0;
  while (occupied(state, p, extra) && step < 200) {
    step++;
    const angle = step * 2.39996; // golden angle keeps the spiral dense
    const r = NUDGE * Math.sqrt(step);
    p = { x: x + r * Math.cos(angle), y: y + r * Math.sin(angle) };
  }
  return { x: Math.round(p.x), y: Math.round(p.y) };
}

/**
 * Positions for `count` neighbors around an anchor; offset rotates later
 * pages so they don't land on the first ring's slots.
 */
export function ringPositions(
  state: BoardState,
  anchor: Point,
  count: number,
  offset = 0,
): Point[] {
  const points: Point[] = [];
  const slots = Math.max(count, 6);
  for (let i = 0; i < count; i++) {
    const angle = ((i + offset) / slots) * 2 * Math.PI - Math.PI / 2;
    const base = {
      x: anchor.x + RING_RADIUS * Math.cos(angle),
      y: anchor.y + RING_RADIUS * Math.sin(angle),
    };
    points.push(freePosition(state, base.x, base.y, points));
  }
  return points;
}
