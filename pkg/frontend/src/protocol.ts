/** Worker protocol: the interaction thread posts solve/cancel messages and a
 * solver worker answers each solve with zero or more iterate chunks followed
 * by exactly one done/error carrying the same request id.  Cancel is
 * idempotent; nothing arrives for a request after its terminal message. */

import type { Algorithm, IterateJson, ProblemJson, SettingsJson, TraceJson } from "./types.js";

export interface SolveMessage {
  type: "solve";
  requestId: number;
  algorithm: Algorithm;
  problem: ProblemJson;
  settings?: SettingsJson;
}

export interface CancelMessage {
  type: "cancel";
  requestId: number;
}

export interface IteratesMessage {
  type: "iterates";
  requestId: number;
  iterates: IterateJson[];
}

export interface DoneMessage {
  type: "done";
  requestId: number;
  trace: TraceJson;
}

export interface ErrorMessage {
  type: "error";
  requestId: number;
  message: string;
}

export type ClientMessage = SolveMessage | CancelMessage;
export type WorkerMessage = IteratesMessage | DoneMessage | ErrorMessage;
export type WorkerProtocolMessage = ClientMessage | WorkerMessage;

/** Iterate chunks are capped so a single message stays small. */
export const CHUNK_SIZE = 1000;

/** Transport seam: a real deployment posts to a Web Worker; tests use the
 * scripted backend or a child-process CLI bridge. */
export interface SolverBackend {
  post(message: ClientMessage): void;
  onMessage(handler: (message: WorkerMessage) => void): void;
}

export interface SolveHandlers {
  onIterates?: (iterates: IterateJson[]) => void;
  onDone?: (trace: TraceJson) => void;
  onError?: (message: string) => void;
}

interface PendingRequest extends SolveHandlers {
  terminal: boolean;
}

export interface ProtocolViolation {
  requestId: number;
  kind: "post-terminal-iterates" | "duplicate-terminal" | "unknown-request";
}

/** Request bookkeeping on the interaction side.
 *
 * Tracks one pending entry per request id, drops (and records) anything a
 * worker sends out of contract, and exposes idempotent cancellation.
 */
export class SolverClient {
  private nextId = 1;
  private pending = new Map<number, PendingRequest>();
  readonly violations: ProtocolViolation[] = [];

  constructor(private backend: SolverBackend) {
    backend.onMessage((msg) => this.dispatch(msg));
  }

  solve(
    algorithm: Algorithm,
    problem: ProblemJson,
    settings?: SettingsJson,
    handlers: SolveHandlers = {},
  ): number {
    const requestId = this.nextId++;
    this.pending.set(requestId, { ...handlers, terminal: false });
    this.backend.post({ type: "solve", requestId, algorithm, problem, settings });
    return requestId;
  }

  /** Safe to call repeatedly or after completion. */
  cancel(requestId: number): void {
    this.backend.post({ type: "cancel", requestId });
  }

  isPending(requestId: number): boolean {
    const entry = this.pending.get(requestId);
    return entry !== undefined && !entry.terminal;
  }

  private dispatch(msg: WorkerMessage): void {
    const entry = this.pending.get(msg.requestId);
    if (entry === undefined) {
      this.violations.push({ requestId: msg.requestId, kind: "unknown-request" });
      return;
    }
    if (msg.type === "iterates") {
      if (entry.terminal) {
        this.violations.push({ requestId: msg.requestId, kind: "post-terminal-iterates" });
        return;
      }
      entry.onIterates?.(msg.iterates);
      return;
    }
    if (entry.terminal) {
      this.violations.push({ requestId: msg.requestId, kind: "duplicate-terminal" });
      return;
    }
    entry.terminal = true;
    if (msg.type === "done") entry.onDone?.(msg.trace);
    else entry.onError?.(msg.message);
    this.pending.delete(msg.requestId);
  }
}

export function chunkIterates(iterates: IterateJson[]): IterateJson[][] {
  const chunks: IterateJson[][] = [];
  for (let i = 0; i < iterates.length; i += CHUNK_SIZE) {
    chunks.push(iterates.slice(i, i + CHUNK_SIZE));
  }
  return chunks;
}
