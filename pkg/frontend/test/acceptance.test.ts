/** Frontend acceptance: rendering instrumentation (criterion 10) and worker
 * protocol discipline (criterion 11), plus an end-to-end run against the
 * actual solver core through its CLI.  Requires python3 with the lp2d package
 * installed (the sibling directory of this frontend).
 */
import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { CliBackend } from "../src/cli_backend.js";
import { SolverClient, type SolverBackend, type WorkerMessage } from "../src/protocol.js";
import { ScriptedBackend, mulberry32 } from "../src/scripted.js";
import { CanvasSession } from "../src/session.js";
import { isTraceJson, type TraceJson } from "../src/types.js";
import { makeTrace } from "./fixtures.js";

const PX = 40;
const SQUARE = {
  version: 1 as const,
  objective: [1, 1] as [number, number],
  vertices: [[0, 0], [1, 0], [1, 1], [0, 1]] as [number, number][],
  closed: true,
};

let workdir: string;
let sweep: TraceJson[] = [];

beforeAll(() => {
  workdir = mkdtempSync(join(tmpdir(), "lp2d-acceptance-"));
  const problem = join(workdir, "square.json");
  const out = join(workdir, "sweep.json");
  writeFileSync(problem, JSON.stringify(SQUARE));
  // quarter rotation at angle step 0.001: floor((pi/2)/0.001) = 1570 steps
  const run = spawnSync(
    "python3",
    ["-m", "lp2d.cli", "rotate", "--algorithm", "simplex", "--input", problem,
     "--out", out, "--steps", "1570", "--quarter"],
    { encoding: "utf-8", timeout: 300_000 },
  );
  if (run.status !== 0) throw new Error(`sweep generation failed: ${run.stderr}`);
  const parsed: unknown = JSON.parse(readFileSync(out, "utf-8"));
  if (!Array.isArray(parsed) || !parsed.every(isTraceJson)) {
    throw new Error("sweep fixture is not a trace array");
  }
  sweep = parsed;
}, 300_000);

afterAll(() => {
  rmSync(workdir, { recursive: true, force: true });
});

function drawnSession(backend: SolverBackend): CanvasSession {
  const session = new CanvasSession(backend, { algorithm: "simplex" });
  for (const p of [[0, 0], [1, 0], [1, 1], [0, 1]] as const) {
    session.handleClick([p[0] * PX, p[1] * PX]);
  }
  session.handleClick([0.5 * PX, 0.5 * PX]); // click inside: close
  session.setObjective([1, 1]);
  return session;
}

describe("criterion 10: rendering instrumentation", () => {
  it("camera-only frames rebuild zero geometry layers", () => {
    const session = drawnSession(new ScriptedBackend(() => makeTrace("simplex", 3)));
    session.renderFrame(); // initial tessellation
    for (let i = 0; i < 25; i++) {
      session.moveCamera({ zoom: 1 + i / 10, position: [i, i, 10] });
      const stats = session.renderFrame();
      expect(stats.layersRebuilt).toBe(0);
    }
  });

  it("1571 accumulated sweep traces render as one batched draw object", () => {
    expect(sweep).toHaveLength(1571);
    const session = drawnSession(new ScriptedBackend(() => makeTrace("simplex", 3)));
    for (const trace of sweep) session.addTrace(trace);
    const stats = session.renderFrame();
    expect(stats.drawObjects.traces).toBe(1);
    const expectedSegments = sweep.reduce((acc, t) => acc + Math.max(t.iterates.length - 1, 0), 0);
    expect(session.layers.layer("traces").geometry.segments).toBe(expectedSegments);
    // and a camera orbit over the loaded scene still rebuilds nothing
    session.moveCamera({ position: [3, 4, 5] });
    expect(session.renderFrame().layersRebuilt).toBe(0);
  });
});

describe("criterion 11: worker protocol discipline", () => {
  class RecordingBackend implements SolverBackend {
    log: WorkerMessage[] = [];
    constructor(private inner: SolverBackend) {}
    post(message: Parameters<SolverBackend["post"]>[0]): void {
      this.inner.post(message);
    }
    onMessage(handler: (msg: WorkerMessage) => void): void {
      this.inner.onMessage((msg) => {
        this.log.push(msg);
        handler(msg);
      });
    }
  }

  it("100 fuzzed solve/cancel sequences: one terminal each, no late chunks", () => {
    const rand = mulberry32(20260810);
    const backend = new ScriptedBackend((msg) =>
      makeTrace(msg.algorithm, 1 + Math.floor(rand() * 3000)),
    );
    const recorder = new RecordingBackend(backend);
    const client = new SolverClient(recorder);
    const ids: number[] = [];
    while (ids.length < 100 || backend.runnable().length > 0) {
      const roll = rand();
      if (ids.length < 100 && roll < 0.4) {
        ids.push(client.solve("pdhg", SQUARE));
      } else if (roll < 0.6 && ids.length > 0) {
        client.cancel(ids[Math.floor(rand() * ids.length)]!);
      } else {
        const runnable = backend.runnable();
        if (runnable.length > 0) backend.step(runnable[Math.floor(rand() * runnable.length)]!);
        else if (ids.length < 100) ids.push(client.solve("pdhg", SQUARE));
      }
    }
    backend.drain();

    const terminals = new Map<number, number>();
    for (const msg of recorder.log) {
      if (msg.type === "iterates") {
        expect(terminals.has(msg.requestId)).toBe(false);
      } else {
        terminals.set(msg.requestId, (terminals.get(msg.requestId) ?? 0) + 1);
      }
    }
    expect(terminals.size).toBe(100);
    for (const count of terminals.values()) expect(count).toBe(1);
    expect(client.violations).toEqual([]);
  });
});

describe("end to end against the solver core", () => {
  it("a drawn square solved over the CLI backend lands at (1,1)", async () => {
    const backend = new CliBackend();
    const session = drawnSession(backend);
    session.requestSolve({ replaceTraces: true });
    await backend.idle();
    expect(session.traces).toHaveLength(1);
    const trace = session.traces[0]!;
    expect(trace.status).toBe("optimal");
    expect(trace.objective_value).toBeCloseTo(2.0, 6);
    const last = trace.iterates.at(-1)!;
    expect(last.x[0]).toBeCloseTo(1, 6);
    expect(last.x[1]).toBeCloseTo(1, 6);
  }, 120_000);

  it("ipm over the CLI carries mu heights for the 3d view", async () => {
    const backend = new CliBackend();
    const session = drawnSession(backend);
    session.algorithm = "ipm";
    session.settings = { alpha_max: 0.99 };
    session.requestSolve({ replaceTraces: true });
    await backend.idle();
    const trace = session.traces[0]!;
    expect(trace.algorithm).toBe("ipm");
    expect(trace.iterates[0]!.z).toBe(1.0); // cold-start mu
    session.setView("3d");
    session.renderFrame();
    const heights = session.layers.layer("traces").geometry.heights;
    expect(heights[0]).toBe(1.0);
    expect(heights.at(-1)!).toBeLessThan(1e-8);
  }, 120_000);
});
