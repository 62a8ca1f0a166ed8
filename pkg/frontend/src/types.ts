/** Wire formats shared with the solver core (Problem/Trace JSON, version 1). */

export type Algorithm = "simplex" | "ipm" | "pdhg" | "central_path";
export type Status = "optimal" | "unbounded" | "infeasible" | "max_iterations";

export interface ConstraintJson {
  a: [number, number];
  b: number;
}

export interface ProblemJson {
  version: 1;
  objective: [number, number];
  vertices?: [number, number][];
  closed: boolean;
  constraints?: ConstraintJson[];
  interior_hint?: [number, number];
}

export interface SettingsJson {
  tolerance?: number;
  max_iterations?: number | null;
  alpha_max?: number;
  corrector_threshold?: number;
  pdhg_mode?: "equality" | "inequality";
  pdhg_step?: number | null;
  halpern?: boolean;
  restart_factor?: number;
  mu_count?: number;
  angle?: number | null;
}

export interface IterateJson {
  x: [number, number];
  z: number;
  phase: string;
  basis: number[] | null;
  meta: Record<string, number | boolean | string>;
}

export interface TraceJson {
  version: 1;
  algorithm: Algorithm;
  settings: SettingsJson;
  status: Status;
  objective_value: number | null;
  iterates: IterateJson[];
  ray: [number, number] | null;
}

export type Point = [number, number];

export function isTraceJson(value: unknown): value is TraceJson {
  if (typeof value !== "object" || value === null) return false;
  const t = value as Record<string, unknown>;
  return (
    t.version === 1 &&
    typeof t.algorithm === "string" &&
    typeof t.status === "string" &&
    Array.isArray(t.iterates)
  );
}
