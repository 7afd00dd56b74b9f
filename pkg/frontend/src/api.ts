/** Typed client for the proof-session HTTP API.
 *
 * Every call goes to an /api/v1 endpoint; nothing here interprets proofs.
 * Formulas travel as the server's s-expression strings, and rule arguments
 * use the server's wire shapes: plain integers for line citations,
 * two-element arrays for subproof ranges, {"f": sexpr} for formulas and
 * {"subst": {...}} for axiom substitutions.
 */

export type Style = "backward" | "fitch" | "hilbert";

export interface RuleInfo {
  name: string;
  style: Style;
  kind: string | null;
  args: string[];
  lines?: string[];
  ranges?: string[];
  formula?: string | null;
  resultFree?: boolean;
  schema?: string;
  schemaAtoms?: string[];
}

export interface SystemInfo {
  name: string;
  style: Style;
  extends: string | null;
  rules: string[];
  ruleInfo: RuleInfo[];
  strategies: string[];
  examples: string[];
}

export type ArgValue =
  | number
  | [number, number]
  | string
  | { f: string }
  | { subst: Record<string, string> };

export type Assignment = Record<string, ArgValue>;

export type NodeStatus = "goal" | "leaf" | "regular";

export interface TreeNode {
  id: number;
  formula: string;
  status: NodeStatus;
  rule: string | null;
  leafKind: string | null;
  parent: number | null;
  children: number[];
  hypotheses: string[];
}

interface SnapshotBase {
  sessionId: string;
  system: string;
  goal: string;
  version: number;
  steps: number;
  complete: boolean;
}

export interface TreeSnapshot extends SnapshotBase {
  style: "backward";
  root: number;
  nodes: TreeNode[];
  openGoals: number[];
}

export interface ProofLine {
  index: number;
  depth: number;
  formula: string;
  rule: string;
  kind: string;
  cites: number[];
  ranges: [number, number][];
}

export interface OpenFrame {
  start: number;
  hypothesis: string | null;
  target: string | null;
  strict: boolean;
  openedFor: string | null;
}

export interface LineSnapshot extends SnapshotBase {
  style: "fitch" | "hilbert";
  lines: ProofLine[];
  frames: OpenFrame[];
  subproofs: [number, number][];
}

export type Snapshot = TreeSnapshot | LineSnapshot;

export interface RuleCandidates {
  rule: string;
  assignments: Assignment[];
}

export interface ApplicableResponse {
  target: number | null;
  rules: RuleCandidates[];
}

export interface ApplyRequest {
  version: number;
  rule: string;
  target?: number | null;
  args?: Assignment;
  resultFormula?: string;
}

export interface TacticRequest {
  version: number;
  tactic?: string;
  strategy?: string;
  fuel?: number;
}

export interface TacticResponse {
  outcome: "success" | "failure";
  reason: string | null;
  trace: [string, Assignment][];
  state: Snapshot;
}

/** An error response from the service, keeping the engine's error name. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly error: string,
    readonly detail: string,
  ) {
    super(`${error}: ${detail}`);
    this.name = "ApiError";
  }
}

export class Client {
  constructor(
    readonly base: string,
    private readonly token?: string,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "content-type": "application/json" };
    if (this.token) headers["authorization"] = `Bearer ${this.token}`;
    const response = await fetch(this.base + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    let data: unknown = null;
    try {
      data = text ? JSON.parse(text) : null;
    } catch {
      data = null;
    }
    if (!response.ok) {
      const record = (data ?? {}) as Record<string, unknown>;
      const error =
        typeof record["error"] === "string" ? (record["error"] as string) : `HTTP ${response.status}`;
      const detail =
        typeof record["detail"] === "string" ? (record["detail"] as string) : text;
      throw new ApiError(response.status, error, detail);
    }
    return data as T;
  }

  systems(): Promise<{ systems: SystemInfo[] }> {
    return this.request("GET", "/api/v1/systems");
  }

  createSession(system: string, goal: string): Promise<{ sessionId: string; state: Snapshot }> {
    return this.request("POST", "/api/v1/sessions", { system, goal });
  }

  getSession(id: string): Promise<Snapshot> {
    return this.request("GET", `/api/v1/sessions/${id}`);
  }

  applicable(id: string, target?: number | null): Promise<ApplicableResponse> {
    return this.request("POST", `/api/v1/sessions/${id}/applicable`, { target: target ?? null });
  }

  apply(id: string, req: ApplyRequest): Promise<Snapshot> {
    return this.request("POST", `/api/v1/sessions/${id}/apply`, req);
  }

  tactic(id: string, req: TacticRequest): Promise<TacticResponse> {
    return this.request("POST", `/api/v1/sessions/${id}/tactic`, req);
  }

  undo(id: string, version: number): Promise<Snapshot> {
    return this.request("POST", `/api/v1/sessions/${id}/undo`, { version });
  }

  exportDocument(id: string): Promise<unknown> {
    return this.request("GET", `/api/v1/sessions/${id}/export`);
  }
}
