/** Interactive canvas session: drawing, editing, objective rotation, solver
 * dispatch, and frame rendering, glued together over the layer stack and the
 * worker protocol client.  All solver work crosses the protocol boundary;
 * this module never computes iterates itself. */

import {
  contains,
  ensureCcw,
  halfspacesOf,
  newBuilder,
  objectiveUnbounded,
  tryAddVertex,
  type AddResult,
  type RegionBuilder,
} from "./geometry.js";
import { LayerStack, type FrameStats } from "./layers.js";
import { SolverClient, type SolverBackend } from "./protocol.js";
import type { Algorithm, ConstraintJson, Point, ProblemJson, SettingsJson, TraceJson } from "./types.js";

export type Mode = "drawing" | "editing" | "solving";
export type View = "2d" | "3d";

export interface CameraPose {
  position: [number, number, number];
  target: [number, number, number];
  zoom: number;
}

export interface ClickOptions {
  /** hold-modifier bypass for grid snapping */
  snapDisabled?: boolean;
}

export interface ClickFeedback {
  action: "added" | "closed" | "rejected" | "ignored";
  reason?: string;
}

const GRID_SNAP = 0.5;
const CLOSE_PIXELS = 10;

export interface SessionOptions {
  algorithm?: Algorithm;
  settings?: SettingsJson;
  /** world units to screen pixels */
  pixelsPerUnit?: number;
  gridExtent?: number;
}

export class CanvasSession {
  builder: RegionBuilder = newBuilder();
  mode: Mode = "drawing";
  view: View = "2d";
  camera: CameraPose = { position: [0, 0, 10], target: [0, 0, 0], zoom: 1 };
  objective: Point | null = null;
  objectiveIsUnbounded = false;
  constraints: ConstraintJson[] = [];
  traces: TraceJson[] = [];
  layers = new LayerStack();
  algorithm: Algorithm;
  settings: SettingsJson;
  activeRequest: number | null = null;
  readonly client: SolverClient;
  private pixelsPerUnit: number;
  private gridExtent: number;

  constructor(backend: SolverBackend, options: SessionOptions = {}) {
    this.client = new SolverClient(backend);
    this.algorithm = options.algorithm ?? "simplex";
    this.settings = options.settings ?? {};
    this.pixelsPerUnit = options.pixelsPerUnit ?? 40;
    this.gridExtent = options.gridExtent ?? 12;
  }

  screenToWorld(p: Point): Point {
    return [p[0] / this.pixelsPerUnit, p[1] / this.pixelsPerUnit];
  }

  worldToScreen(p: Point): Point {
    return [p[0] * this.pixelsPerUnit, p[1] * this.pixelsPerUnit];
  }

  snap(p: Point): Point {
    return [Math.round(p[0] / GRID_SNAP) * GRID_SNAP, Math.round(p[1] / GRID_SNAP) * GRID_SNAP];
  }

  /** Drawing-mode click: snap and add a vertex, or finish the region when the
   * click lands on the first vertex (within 10 px) or inside the partial
   * region.  Rejections leave the builder untouched. */
  handleClick(screen: Point, options: ClickOptions = {}): ClickFeedback {
    if (this.mode !== "drawing") return { action: "ignored", reason: "not drawing" };
    const world = this.screenToWorld(screen);
    const verts = this.builder.vertices;

    if (verts.length >= 3) {
      const first = this.worldToScreen(verts[0]!);
      const distPx = Math.hypot(first[0] - screen[0], first[1] - screen[1]);
      const insidePartial = contains(halfspacesOf(verts, true), world, 1e-9);
      if (distPx <= CLOSE_PIXELS || insidePartial) {
        this.closeRegion();
        return { action: "closed" };
      }
    }

    const candidate = options.snapDisabled ? world : this.snap(world);
    const result: AddResult = tryAddVertex(this.builder, candidate);
    if (!result.accepted) return { action: "rejected", reason: result.reason };
    this.layers.markDirty("polytope", "overlay");
    return { action: "added" };
  }

  /** Enter finishes an unbounded region (needs two vertices or more). */
  handleEnter(interiorHint?: Point): ClickFeedback {
    if (this.mode !== "drawing") return { action: "ignored", reason: "not drawing" };
    if (this.builder.vertices.length < 2) {
      return { action: "ignored", reason: "need at least 2 vertices" };
    }
    const vertices = ensureCcw(this.builder.vertices, false);
    this.constraints = halfspacesOf(vertices, false, interiorHint);
    this.builder = { vertices, state: "open" };
    this.mode = "editing";
    this.layers.markDirty("polytope", "overlay");
    this.refreshObjectiveFlag();
    return { action: "closed" };
  }

  private closeRegion(): void {
    const vertices = ensureCcw(this.builder.vertices, true);
    this.constraints = halfspacesOf(vertices, true);
    this.builder = { vertices, state: "closed" };
    this.mode = "editing";
    this.layers.markDirty("polytope", "overlay");
    this.refreshObjectiveFlag();
  }

  setObjective(c: Point): void {
    if (c[0] === 0 && c[1] === 0) throw new Error("degenerate objective");
    this.objective = [c[0], c[1]];
    this.layers.markDirty("objective");
    this.refreshObjectiveFlag();
  }

  private refreshObjectiveFlag(): void {
    if (this.objective && this.constraints.length > 0) {
      const before = this.objectiveIsUnbounded;
      this.objectiveIsUnbounded = objectiveUnbounded(this.constraints, this.objective);
      if (before !== this.objectiveIsUnbounded) this.layers.markDirty("objective");
    }
  }

  problemJson(): ProblemJson {
    if (this.constraints.length === 0) throw new Error("region not finished");
    if (!this.objective) throw new Error("objective not set");
    const problem: ProblemJson = {
      version: 1,
      objective: [this.objective[0], this.objective[1]],
      vertices: this.builder.vertices.map((v) => [v[0], v[1]] as [number, number]),
      closed: this.builder.state === "closed",
      constraints: this.constraints.map((c) => ({ a: [...c.a] as [number, number], b: c.b })),
    };
    return problem;
  }

  /** Move a vertex, keeping convexity; accepted moves re-derive constraints
   * and re-solve, cancelling any in-flight request for this session.  Drags
   * are legal while a background solve is running (that is the live-editing
   * loop), just not while still drawing. */
  dragVertex(index: number, to: Point): boolean {
    if (this.mode === "drawing") throw new Error("session is still drawing");
    const verts = this.builder.vertices;
    if (index < 0 || index >= verts.length) throw new Error("vertex index out of range");
    const moved = verts.map((v, i) => (i === index ? to : v));
    const closed = this.builder.state === "closed";
    let constraints: ConstraintJson[];
    try {
      constraints = halfspacesOf(moved, closed);
    } catch {
      return false; // snap back: the move broke convexity
    }
    this.builder = { ...this.builder, vertices: ensureCcw(moved, closed) };
    this.constraints = constraints;
    this.layers.markDirty("polytope", "overlay");
    this.refreshObjectiveFlag();
    if (this.objective) this.requestSolve({ replaceTraces: true });
    return true;
  }

  /** Remove a vertex if the region stays valid: at least 3 vertices closed,
   * 2 open, and still convex. */
  deleteVertex(index: number): boolean {
    if (this.mode === "drawing") throw new Error("session is still drawing");
    const verts = this.builder.vertices;
    if (index < 0 || index >= verts.length) throw new Error("vertex index out of range");
    const closed = this.builder.state === "closed";
    if (verts.length <= (closed ? 3 : 2)) return false;
    const remaining = verts.filter((_, i) => i !== index);
    let constraints: ConstraintJson[];
    try {
      constraints = halfspacesOf(remaining, closed);
    } catch {
      return false;
    }
    this.builder = { ...this.builder, vertices: ensureCcw(remaining, closed) };
    this.constraints = constraints;
    this.layers.markDirty("polytope", "overlay");
    this.refreshObjectiveFlag();
    if (this.objective) this.requestSolve({ replaceTraces: true });
    return true;
  }

  /** One rotation tick: rotate the arrow, re-solve; traced mode accumulates
   * the returned traces into the batched trace layer. */
  rotateObjective(step: number, traced: boolean): void {
    if (!this.objective) throw new Error("objective not set");
    const [c1, c2] = this.objective;
    const cos = Math.cos(step);
    const sin = Math.sin(step);
    this.objective = [cos * c1 - sin * c2, sin * c1 + cos * c2];
    this.layers.markDirty("objective");
    this.refreshObjectiveFlag();
    this.requestSolve({ replaceTraces: !traced });
  }

  /** Post a solve over the worker boundary; never solves in-line. */
  requestSolve(opts: { replaceTraces: boolean }): number {
    if (this.activeRequest !== null && this.client.isPending(this.activeRequest)) {
      this.client.cancel(this.activeRequest);
    }
    this.mode = "solving";
    const requestId = this.client.solve(this.algorithm, this.problemJson(), this.settings, {
      onDone: (trace) => {
        if (requestId !== this.activeRequest) return; // superseded
        if (opts.replaceTraces) this.traces = [trace];
        else this.traces.push(trace);
        this.layers.markDirty("traces", "iterates");
        this.activeRequest = null;
        this.mode = "editing";
      },
      onError: () => {
        if (requestId !== this.activeRequest) return;
        this.activeRequest = null;
        this.mode = "editing";
      },
    });
    this.activeRequest = requestId;
    return requestId;
  }

  /** Append an externally produced trace (e.g. a sweep fixture). */
  addTrace(trace: TraceJson): void {
    this.traces.push(trace);
    this.layers.markDirty("traces", "iterates");
  }

  clearTraces(): void {
    this.traces = [];
    this.layers.markDirty("traces", "iterates");
  }

  setView(view: View): void {
    if (view === this.view) return;
    this.view = view;
    // heights change, so trace geometry re-tessellates; the camera does not
    this.layers.markDirty("traces", "iterates");
  }

  moveCamera(pose: Partial<CameraPose>): void {
    this.camera = { ...this.camera, ...pose };
    this.layers.markDirty("camera");
  }

  renderFrame(): FrameStats {
    return this.layers.renderFrame({
      gridExtent: this.gridExtent,
      regionVertices: this.builder.vertices.map((v) => [v[0], v[1]] as [number, number]),
      regionClosed: this.builder.state === "closed",
      objective: this.objective,
      objectiveUnbounded: this.objectiveIsUnbounded,
      traces: this.traces,
      view: this.view,
    });
  }
}
