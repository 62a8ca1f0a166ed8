import { describe, expect, it } from "vitest";

import { GEOMETRY_LAYERS, LayerStack, type SceneSnapshot } from "../src/layers.js";
import { makeTrace } from "./fixtures.js";

function scene(overrides: Partial<SceneSnapshot> = {}): SceneSnapshot {
  return {
    gridExtent: 10,
    regionVertices: [[0, 0], [1, 0], [1, 1], [0, 1]],
    regionClosed: true,
    objective: [1, 1],
    objectiveUnbounded: false,
    traces: [],
    view: "2d",
    ...overrides,
  };
}

describe("LayerStack", () => {
  it("first frame tessellates every geometry layer, second frame none", () => {
    const stack = new LayerStack();
    expect(stack.renderFrame(scene()).layersRebuilt).toBe(GEOMETRY_LAYERS.length);
    expect(stack.renderFrame(scene()).layersRebuilt).toBe(0);
  });

  it("camera dirt never counts as a rebuild", () => {
    const stack = new LayerStack();
    stack.renderFrame(scene());
    stack.markDirty("camera");
    const stats = stack.renderFrame(scene());
    expect(stats.layersRebuilt).toBe(0);
  });

  it("a new trace rebuilds exactly the trace/iterate layers", () => {
    const stack = new LayerStack();
    stack.renderFrame(scene());
    stack.markDirty("traces", "iterates");
    const stats = stack.renderFrame(scene({ traces: [makeTrace("simplex", 4)] }));
    expect(stats.layersRebuilt).toBe(2);
    expect(stack.layer("polytope").geometry.rebuilds).toBe(1);
    expect(stack.layer("traces").geometry.rebuilds).toBe(2);
  });

  it("accumulated traces stay one batched draw object", () => {
    const stack = new LayerStack();
    const traces = Array.from({ length: 250 }, () => makeTrace("pdhg", 12));
    const stats = stack.renderFrame(scene({ traces }));
    expect(stats.drawObjects.traces).toBe(1);
    expect(stack.layer("traces").geometry.segments).toBe(250 * 11);
  });

  it("3d view lifts iterates to their z, simplex stays flat", () => {
    const stack = new LayerStack();
    const mus = [1e3, 1, 1e-5];
    const central = makeTrace("central_path", 3, { zs: mus });
    stack.renderFrame(scene({ traces: [central], view: "3d" }));
    expect(stack.layer("traces").geometry.heights).toEqual(mus);

    stack.markDirty("traces");
    const flat = makeTrace("simplex", 3, { zs: [0, 0, 0] });
    stack.renderFrame(scene({ traces: [flat], view: "3d" }));
    expect(stack.layer("traces").geometry.heights).toEqual([0, 0, 0]);

    stack.markDirty("traces");
    stack.renderFrame(scene({ traces: [central], view: "2d" }));
    expect(stack.layer("traces").geometry.heights).toEqual([0, 0, 0]);
  });
});
