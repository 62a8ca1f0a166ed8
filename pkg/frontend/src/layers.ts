/** Layered rendering with dirty flags.
 *
 * The scene is a stack of independently-updated layers; a frame re-tessellates
 * only layers whose inputs changed, so camera-only frames rebuild nothing and
 * all accumulated trace segments live in one batched geometry (one draw
 * object no matter how many traces were accumulated).
 *
 * Geometry handles are renderer-agnostic counters: a WebGL binding would hang
 * buffers off them; tests instrument the counts.
 */

import type { TraceJson } from "./types.js";

export type LayerName =
  | "grid"
  | "polytope"
  | "objective"
  | "traces"
  | "iterates"
  | "overlay"
  | "camera";

export const GEOMETRY_LAYERS: readonly LayerName[] = [
  "grid",
  "polytope",
  "objective",
  "traces",
  "iterates",
  "overlay",
];

export interface GeometryHandle {
  /** number of GPU objects this layer submits; batched layers keep this at 1 */
  drawObjects: number;
  segments: number;
  points: number;
  /** lifted heights of the most recent tessellation (3d view) */
  heights: number[];
  rebuilds: number;
}

export interface RenderLayer {
  name: LayerName;
  dirty: boolean;
  geometry: GeometryHandle;
}

export interface FrameStats {
  layersRebuilt: number;
  drawObjects: Partial<Record<LayerName, number>>;
}

export interface SceneSnapshot {
  gridExtent: number;
  regionVertices: [number, number][];
  regionClosed: boolean;
  objective: [number, number] | null;
  objectiveUnbounded: boolean;
  traces: TraceJson[];
  view: "2d" | "3d";
}

function emptyGeometry(): GeometryHandle {
  return { drawObjects: 0, segments: 0, points: 0, heights: [], rebuilds: 0 };
}

export class LayerStack {
  readonly layers: RenderLayer[];

  constructor() {
    this.layers = [...GEOMETRY_LAYERS, "camera"].map((name) => ({
      name: name as LayerName,
      dirty: name !== "camera", // first frame tessellates everything
      geometry: emptyGeometry(),
    }));
  }

  layer(name: LayerName): RenderLayer {
    const found = this.layers.find((l) => l.name === name);
    if (!found) throw new Error(`no such layer: ${name}`);
    return found;
  }

  markDirty(...names: LayerName[]): void {
    for (const name of names) this.layer(name).dirty = true;
  }

  /** Rebuild dirty geometry layers from the snapshot; camera is a transform,
   * never a rebuild. */
  renderFrame(scene: SceneSnapshot): FrameStats {
    let rebuilt = 0;
    for (const layer of this.layers) {
      if (layer.name === "camera") {
        layer.dirty = false;
        continue;
      }
      if (!layer.dirty) continue;
      this.tessellate(layer, scene);
      layer.geometry.rebuilds += 1;
      layer.dirty = false;
      rebuilt += 1;
    }
    const drawObjects: Partial<Record<LayerName, number>> = {};
    for (const layer of this.layers) {
      if (layer.name !== "camera") drawObjects[layer.name] = layer.geometry.drawObjects;
    }
    return { layersRebuilt: rebuilt, drawObjects };
  }

  private tessellate(layer: RenderLayer, scene: SceneSnapshot): void {
    const g = layer.geometry;
    switch (layer.name) {
      case "grid": {
        const lines = 2 * (2 * scene.gridExtent + 1);
        g.segments = lines;
        g.points = 0;
        g.drawObjects = 1;
        g.heights = [];
        break;
      }
      case "polytope": {
        const n = scene.regionVertices.length;
        g.points = n;
        g.segments = n === 0 ? 0 : scene.regionClosed ? n : n - 1;
        g.drawObjects = n > 0 ? 1 : 0;
        g.heights = [];
        break;
      }
      case "objective": {
        g.segments = scene.objective ? 1 : 0;
        g.points = 0;
        g.drawObjects = scene.objective ? 1 : 0;
        g.heights = [];
        break;
      }
      case "traces": {
        // every accumulated trace goes into one batched mesh
        let segments = 0;
        for (const t of scene.traces) segments += Math.max(t.iterates.length - 1, 0);
        g.segments = segments;
        g.points = 0;
        g.drawObjects = scene.traces.length > 0 ? 1 : 0;
        g.heights = liftHeights(scene);
        break;
      }
      case "iterates": {
        let points = 0;
        for (const t of scene.traces) points += t.iterates.length;
        g.points = points;
        g.segments = 0;
        g.drawObjects = scene.traces.length > 0 ? 1 : 0;
        g.heights = liftHeights(scene);
        break;
      }
      case "overlay": {
        g.points = scene.regionVertices.length;
        g.segments = 0;
        g.drawObjects = scene.regionVertices.length > 0 ? 1 : 0;
        g.heights = [];
        break;
      }
      default:
        throw new Error(`unhandled layer ${layer.name}`);
    }
  }
}

/** In 3d view iterates sit at their solver-specific height z; in 2d (and for
 * simplex, whose z is identically zero) everything stays in the plane. */
function liftHeights(scene: SceneSnapshot): number[] {
  const heights: number[] = [];
  for (const t of scene.traces) {
    for (const it of t.iterates) heights.push(scene.view === "3d" ? it.z : 0);
  }
  return heights;
}
