import type { IterateJson, TraceJson, Algorithm, Status } from "../src/types.js";
import type { ScriptedSolver } from "../src/scripted.js";

export function makeIterates(count: number, zs?: number[]): IterateJson[] {
  return Array.from({ length: count }, (_, i) => ({
    x: [i / Math.max(count - 1, 1), 1 - i / Math.max(count - 1, 1)] as [number, number],
    z: zs ? zs[i]! : 0,
    phase: "test",
    basis: null,
    meta: {},
  }));
}

export function makeTrace(
  algorithm: Algorithm,
  iterateCount: number,
  opts: { zs?: number[]; status?: Status } = {},
): TraceJson {
  return {
    version: 1,
    algorithm,
    settings: {},
    status: opts.status ?? "optimal",
    objective_value: 2.0,
    iterates: makeIterates(iterateCount, opts.zs),
    ray: null,
  };
}

/** A scripted solver producing a fixed-size synthetic trace. */
export function syntheticSolver(iterateCount = 5): ScriptedSolver {
  return (msg) => makeTrace(msg.algorithm, iterateCount);
}
