/** Client-side mirror of the drawing discipline: incremental convex vertex
 * input, edge-to-halfspace conversion for display and containment tests, and
 * the recession-cone check behind the red unbounded-objective arrow.  Solver
 * logic stays behind the worker protocol. */

import type { ConstraintJson, Point } from "./types.js";

const COLLINEAR_RTOL = 1e-9;
const DUPLICATE_TOL = 1e-12;
const RAY_TOL = 1e-9;
// minimum distance from a vertex to any non-incident edge line; keeps every
// accepted polygon clear of the 1e-9 tightness tolerance used downstream
const CLEARANCE_TOL = 1e-8;

export type RejectReason = "nonconvex" | "duplicate" | "collinear";

export interface AddResult {
  accepted: boolean;
  reason?: RejectReason;
}

export type BuilderState = "drawing" | "closed" | "open";

export interface RegionBuilder {
  vertices: Point[];
  state: BuilderState;
}

export function newBuilder(): RegionBuilder {
  return { vertices: [], state: "drawing" };
}

const cross = (e1: Point, e2: Point): number => e1[0] * e2[1] - e1[1] * e2[0];
const edge = (p: Point, q: Point): Point => [q[0] - p[0], q[1] - p[1]];

function cycleTurnSigns(points: Point[]): number[] {
  const n = points.length;
  const signs: number[] = [];
  for (let i = 0; i < n; i++) {
    const a = points[i]!, b = points[(i + 1) % n]!, c = points[(i + 2) % n]!;
    const e1 = edge(a, b);
    const e2 = edge(b, c);
    const x = cross(e1, e2);
    const lim = COLLINEAR_RTOL * Math.hypot(...e1) * Math.hypot(...e2);
    signs.push(Math.abs(x) <= lim ? 0 : x > 0 ? 1 : -1);
  }
  return signs;
}

function minEdgeClearance(points: Point[]): number {
  const n = points.length;
  let best = Infinity;
  for (let i = 0; i < n; i++) {
    const p = points[i]!, q = points[(i + 1) % n]!;
    const e = edge(p, q);
    const length = Math.hypot(...e);
    if (length <= DUPLICATE_TOL) return 0;
    for (let k = 0; k < n; k++) {
      if (k === i || k === (i + 1) % n) continue;
      best = Math.min(best, Math.abs(cross(e, edge(p, points[k]!))) / length);
    }
  }
  return best;
}

/** Append candidate if the sequence (with its implicit closing edge) stays a
 * strictly convex cycle with every vertex clear of the other edges' boundary
 * lines, so closing always yields a valid region. */
export function tryAddVertex(builder: RegionBuilder, candidate: Point): AddResult {
  if (builder.state !== "drawing") throw new Error("builder is not in drawing state");
  for (const v of builder.vertices) {
    if (Math.max(Math.abs(v[0] - candidate[0]), Math.abs(v[1] - candidate[1])) <= DUPLICATE_TOL) {
      return { accepted: false, reason: "duplicate" };
    }
  }
  if (builder.vertices.length >= 2) {
    const cycle = [...builder.vertices, candidate];
    const signs = cycleTurnSigns(cycle);
    if (signs.includes(0)) return { accepted: false, reason: "collinear" };
    if (new Set(signs).size > 1) return { accepted: false, reason: "nonconvex" };
    if (minEdgeClearance(cycle) <= CLEARANCE_TOL) return { accepted: false, reason: "collinear" };
  }
  builder.vertices.push([candidate[0], candidate[1]]);
  return { accepted: true };
}

export function ensureCcw(vertices: Point[], closed: boolean): Point[] {
  if (vertices.length < 3) return vertices.slice();
  if (closed) {
    let area2 = 0;
    for (let i = 0; i < vertices.length; i++) {
      const a = vertices[i]!, b = vertices[(i + 1) % vertices.length]!;
      area2 += a[0] * b[1] - b[0] * a[1];
    }
    return area2 >= 0 ? vertices.slice() : vertices.slice().reverse();
  }
  for (let i = 0; i + 2 < vertices.length; i++) {
    const x = cross(edge(vertices[i]!, vertices[i + 1]!), edge(vertices[i + 1]!, vertices[i + 2]!));
    if (x > 0) return vertices.slice();
    if (x < 0) return vertices.slice().reverse();
  }
  return vertices.slice();
}

/** Unit-normal halfspaces through consecutive vertices, interior to the left
 * of the CCW edges; two-vertex open chains take the side of `interiorHint`
 * (default: one unit left of the edge midpoint). */
function chainTurnSigns(points: Point[]): number[] {
  const signs: number[] = [];
  for (let i = 0; i + 2 < points.length; i++) {
    const e1 = edge(points[i]!, points[i + 1]!);
    const e2 = edge(points[i + 1]!, points[i + 2]!);
    const x = cross(e1, e2);
    const lim = COLLINEAR_RTOL * Math.hypot(...e1) * Math.hypot(...e2);
    signs.push(Math.abs(x) <= lim ? 0 : x > 0 ? 1 : -1);
  }
  return signs;
}

export function halfspacesOf(
  vertices: Point[],
  closed: boolean,
  interiorHint?: Point,
): ConstraintJson[] {
  const pts = ensureCcw(vertices, closed);
  const n = pts.length;
  if (closed && n < 3) throw new Error("degenerate region");
  if (!closed && n < 2) throw new Error("degenerate region");
  if (n >= 3) {
    const signs = closed ? cycleTurnSigns(pts) : chainTurnSigns(pts);
    if (closed && signs.every((s) => s === 0)) throw new Error("degenerate region: zero area");
    if (signs.includes(0)) throw new Error("collinear vertex sequence");
    if (signs.some((s) => s < 0)) throw new Error("nonconvex vertex sequence");
  }

  let flip = false;
  if (!closed && n === 2) {
    const [p, q] = [pts[0]!, pts[1]!];
    const e = edge(p, q);
    const len = Math.hypot(...e);
    const hint: Point = interiorHint ?? [
      (p[0] + q[0]) / 2 - e[1] / len,
      (p[1] + q[1]) / 2 + e[0] / len,
    ];
    const side = cross(e, edge(p, hint));
    if (Math.abs(side) <= COLLINEAR_RTOL * len * len) {
      throw new Error("interior hint lies on the boundary");
    }
    flip = side < 0;
  }

  const out: ConstraintJson[] = [];
  const count = closed ? n : n - 1;
  for (let i = 0; i < count; i++) {
    const p = pts[i]!, q = pts[(i + 1) % n]!;
    const e = edge(p, q);
    const len = Math.hypot(...e);
    if (len <= DUPLICATE_TOL) throw new Error("duplicate consecutive vertices");
    let a1 = e[1] / len;
    let a2 = -e[0] / len;
    if (flip) { a1 = -a1; a2 = -a2; }
    out.push({ a: [a1 + 0, a2 + 0], b: a1 * p[0] + a2 * p[1] });
  }
  return out;
}

export function contains(constraints: ConstraintJson[], p: Point, tol = 1e-9): boolean {
  return constraints.every((c) => c.a[0] * p[0] + c.a[1] * p[1] - c.b <= tol);
}

/** Extreme rays of {d : A d <= 0}; empty for bounded regions. */
export function recessionRays(constraints: ConstraintJson[]): Point[] {
  const rays: Point[] = [];
  for (const c of constraints) {
    for (const d of [[-c.a[1], c.a[0]], [c.a[1], -c.a[0]]] as Point[]) {
      const feasible = constraints.every((k) => k.a[0] * d[0] + k.a[1] * d[1] <= RAY_TOL);
      if (feasible && !rays.some((r) => d[0] * r[0] + d[1] * r[1] > 1 - 1e-9)) {
        rays.push([d[0] + 0, d[1] + 0]);
      }
    }
  }
  rays.sort((r, s) => Math.atan2(r[1], r[0]) - Math.atan2(s[1], s[0]));
  return rays;
}

/** True iff sup c.x over the region is infinite (drives the red arrow). */
export function objectiveUnbounded(constraints: ConstraintJson[], c: Point): boolean {
  const norm = Math.hypot(c[0], c[1]);
  if (norm === 0) throw new Error("degenerate objective");
  const rays = recessionRays(constraints);
  if (rays.length === 0) return false;
  if (rays.some((r) => c[0] * r[0] + c[1] * r[1] > RAY_TOL)) return true;
  const chat: Point = [c[0] / norm, c[1] / norm];
  return constraints.every((k) => k.a[0] * chat[0] + k.a[1] * chat[1] <= RAY_TOL);
}
