/** In-memory stand-in for the solver worker.
 *
 * Each solve becomes a queue of delivery steps (iterate chunks, then one
 * terminal).  Steps only run when the test pumps the scheduler, which makes
 * arbitrary solve/cancel interleavings reproducible; nothing executes inside
 * post(), mirroring the real worker's asynchrony.
 */

import { chunkIterates, type ClientMessage, type SolverBackend, type WorkerMessage } from "./protocol.js";
import type { SolveMessage, } from "./protocol.js";
import type { TraceJson } from "./types.js";

export type ScriptedSolver = (msg: SolveMessage) => TraceJson;

interface Job {
  requestId: number;
  msg: SolveMessage;
  /** null until the (deferred) compute step has run */
  queue: WorkerMessage[] | null;
  cancelled: boolean;
  terminalSent: boolean;
  deliveredIterates: number;
}

export class ScriptedBackend implements SolverBackend {
  private handler: ((msg: WorkerMessage) => void) | null = null;
  private jobs = new Map<number, Job>();
  private order: number[] = [];
  /** set while the scripted solver itself is running (instrumentation) */
  computing = false;
  computeCount = 0;

  constructor(private solver: ScriptedSolver) {}

  post(message: ClientMessage): void {
    if (message.type === "solve") {
      this.jobs.set(message.requestId, {
        requestId: message.requestId,
        msg: message,
        queue: null,
        cancelled: false,
        terminalSent: false,
        deliveredIterates: 0,
      });
      this.order.push(message.requestId);
      return;
    }
    // cancel: idempotent, unknown ids ignored
    const job = this.jobs.get(message.requestId);
    if (job && !job.terminalSent) job.cancelled = true;
  }

  onMessage(handler: (msg: WorkerMessage) => void): void {
    this.handler = handler;
  }

  /** Request ids that still have work to do. */
  runnable(): number[] {
    return this.order.filter((id) => {
      const job = this.jobs.get(id);
      return job !== undefined && !job.terminalSent;
    });
  }

  /** Advance one job by one step: compute, deliver a chunk, or terminate. */
  step(requestId: number): void {
    const job = this.jobs.get(requestId);
    if (!job || job.terminalSent || !this.handler) return;

    if (job.cancelled) {
      // a cancelled run stops streaming and reports what it had
      job.terminalSent = true;
      this.handler({
        type: "done",
        requestId,
        trace: this.truncatedTrace(job),
      });
      return;
    }

    if (job.queue === null) {
      this.computing = true;
      this.computeCount += 1;
      const trace = this.solver(job.msg);
      this.computing = false;
      job.queue = [
        ...chunkIterates(trace.iterates).map<WorkerMessage>((chunk) => ({
          type: "iterates",
          requestId,
          iterates: chunk,
        })),
        { type: "done", requestId, trace },
      ];
      return;
    }

    const next = job.queue.shift()!;
    if (next.type === "iterates") job.deliveredIterates += next.iterates.length;
    if (next.type !== "iterates") job.terminalSent = true;
    this.handler(next);
  }

  /** Run everything to completion in submission order. */
  drain(): void {
    let guard = 0;
    while (this.runnable().length > 0) {
      if (++guard > 1_000_000) throw new Error("scripted backend did not drain");
      this.step(this.runnable()[0]!);
    }
  }

  private truncatedTrace(job: Job): TraceJson {
    return {
      version: 1,
      algorithm: job.msg.algorithm,
      settings: job.msg.settings ?? {},
      status: "max_iterations",
      objective_value: null,
      iterates: [],
      ray: null,
    };
  }
}

/** Tiny deterministic generator for fuzz schedules. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}
