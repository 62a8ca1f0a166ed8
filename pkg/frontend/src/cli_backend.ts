/** Node-side bridge that runs solves through the headless CLI of the solver
 * core, streaming the resulting trace back through the worker protocol.  This
 * is the test-bench analogue of the production worker wrapping the compiled
 * core: the UI touches nothing but Problem/Trace JSON.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { chunkIterates, type ClientMessage, type SolverBackend, type WorkerMessage } from "./protocol.js";
import type { SolveMessage } from "./protocol.js";
import { isTraceJson, type SettingsJson, type TraceJson } from "./types.js";

const FLAG_BY_SETTING: Record<string, string> = {
  tolerance: "--tol",
  max_iterations: "--maxit",
  alpha_max: "--alpha-max",
  corrector_threshold: "--corrector-threshold",
  pdhg_mode: "--mode",
  pdhg_step: "--step",
  restart_factor: "--restart-factor",
  mu_count: "--mu-count",
};

function settingsFlags(settings: SettingsJson | undefined): string[] {
  if (!settings) return [];
  const flags: string[] = [];
  for (const [key, flag] of Object.entries(FLAG_BY_SETTING)) {
    const value = (settings as Record<string, unknown>)[key];
    if (value !== undefined && value !== null) flags.push(flag, String(value));
  }
  if (settings.halpern) flags.push("--halpern");
  return flags;
}

export class CliBackend implements SolverBackend {
  private handler: ((msg: WorkerMessage) => void) | null = null;
  private queue: SolveMessage[] = [];
  private cancelled = new Set<number>();
  private scheduled = false;

  constructor(private python: string = "python3") {}

  post(message: ClientMessage): void {
    if (message.type === "cancel") {
      this.cancelled.add(message.requestId);
      return;
    }
    this.queue.push(message);
    if (!this.scheduled) {
      this.scheduled = true;
      queueMicrotask(() => this.flush());
    }
  }

  onMessage(handler: (msg: WorkerMessage) => void): void {
    this.handler = handler;
  }

  /** Resolves once every queued solve has been answered. */
  idle(): Promise<void> {
    return new Promise((resolve) => {
      const check = () => (this.queue.length === 0 && !this.scheduled ? resolve() : setTimeout(check, 5));
      check();
    });
  }

  private flush(): void {
    this.scheduled = false;
    while (this.queue.length > 0) {
      const msg = this.queue.shift()!;
      if (!this.handler) continue;
      if (this.cancelled.has(msg.requestId)) {
        this.handler({
          type: "done",
          requestId: msg.requestId,
          trace: {
            version: 1,
            algorithm: msg.algorithm,
            settings: msg.settings ?? {},
            status: "max_iterations",
            objective_value: null,
            iterates: [],
            ray: null,
          },
        });
        continue;
      }
      try {
        const trace = this.runSolve(msg);
        for (const chunk of chunkIterates(trace.iterates)) {
          this.handler({ type: "iterates", requestId: msg.requestId, iterates: chunk });
        }
        this.handler({ type: "done", requestId: msg.requestId, trace });
      } catch (err) {
        this.handler({
          type: "error",
          requestId: msg.requestId,
          message: err instanceof Error ? err.message : String(err),
        });
      }
    }
  }

  private runSolve(msg: SolveMessage): TraceJson {
    const dir = mkdtempSync(join(tmpdir(), "lp2d-ui-"));
    try {
      const problemPath = join(dir, "problem.json");
      const tracePath = join(dir, "trace.json");
      writeFileSync(problemPath, JSON.stringify(msg.problem));
      const algorithm = msg.algorithm === "central_path" ? "central-path" : msg.algorithm;
      const args = [
        "-m",
        "lp2d.cli",
        "solve",
        "--algorithm",
        algorithm,
        "--input",
        problemPath,
        "--out",
        tracePath,
        ...settingsFlags(msg.settings),
      ];
      const run = spawnSync(this.python, args, { encoding: "utf-8", timeout: 120_000 });
      if (run.error) throw run.error;
      // exit codes 2/3/4 still write a trace (unbounded/infeasible/cap)
      const parsed: unknown = JSON.parse(readFileSync(tracePath, "utf-8"));
      if (!isTraceJson(parsed)) throw new Error(`solver returned malformed trace: ${run.stderr}`);
      return parsed;
    } finally {
      rmSync(dir, { recursive: true, force: true });
    }
  }
}
