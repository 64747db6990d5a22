// Typed client for the schemaforge HTTP service. The UI talks only to these
// endpoints; the LLM key never reaches the browser.

export type JsonValue =
  | null
  | boolean
  | number
  | string
  | JsonValue[]
  | { [key: string]: JsonValue };

export type PathSegment = string | number;

export interface ValidationReport {
  valid: boolean;
  violations?: Array<{
    instance_path: PathSegment[];
    schema_path: PathSegment[];
    keyword: string;
    message: string;
  }>;
  diagnostics?: Array<{ offset: number; length: number; message: string }>;
  rendered?: string[];
}

export interface SessionInfo {
  id: string;
  phase: string;
  kind: string | null;
  proposal: string;
  validation: ValidationReport | null;
  context_path: PathSegment[] | null;
}

export interface ProjectInfo {
  id: string;
  schema: JsonValue;
  document: JsonValue;
}

export interface TruncationSummary {
  final_n: number;
  iterations: number;
  bytes: number;
  budget_met: boolean;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
    public body: JsonValue = null,
  ) {
    super(message);
  }
}

export class Client {
  constructor(private baseUrl: string = "") {}

  private async request(method: string, path: string, body?: unknown): Promise<any> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    let parsed: any = null;
    try {
      parsed = text ? JSON.parse(text) : null;
    } catch {
      parsed = text;
    }
    if (!response.ok) {
      const message =
        parsed && typeof parsed === "object" && "error" in parsed
          ? String(parsed.error)
          : `${method} ${path} failed with ${response.status}`;
      throw new ApiError(response.status, message, parsed);
    }
    return parsed;
  }

  async createProject(): Promise<ProjectInfo> {
    const out = await this.request("POST", "/projects", {});
    return out.project;
  }

  async getProject(id: string): Promise<ProjectInfo> {
    const out = await this.request("GET", `/projects/${id}`);
    return out.project;
  }

  async putSchema(id: string, schema: JsonValue): Promise<void> {
    await this.request("PUT", `/projects/${id}/schema`, schema);
  }

  async putDocument(id: string, document: JsonValue): Promise<void> {
    await this.request("PUT", `/projects/${id}/document`, document);
  }

  async createSession(
    projectId: string,
    kind: string,
    inputs: Record<string, unknown>,
  ): Promise<SessionInfo> {
    const out = await this.request("POST", `/projects/${projectId}/sessions`, {
      kind,
      inputs,
    });
    return out.session;
  }

  async editSession(sessionId: string, proposal: string): Promise<SessionInfo> {
    const out = await this.request("POST", `/sessions/${sessionId}/edit`, { proposal });
    return out.session;
  }

  async applySession(sessionId: string): Promise<{ session: SessionInfo; result: JsonValue }> {
    const out = await this.request("POST", `/sessions/${sessionId}/apply`);
    return { session: out.session, result: out.result };
  }

  async discardSession(sessionId: string): Promise<SessionInfo> {
    const out = await this.request("POST", `/sessions/${sessionId}/discard`);
    return out.session;
  }

  async validateMapping(source: string): Promise<ValidationReport> {
    return await this.request("POST", "/mapping/validate", { source });
  }

  async evaluateMapping(source: string, document: JsonValue): Promise<JsonValue> {
    const out = await this.request("POST", "/mapping/evaluate", { source, document });
    return out.result;
  }

  async truncate(document: JsonValue): Promise<TruncationSummary & { document: JsonValue }> {
    return await this.request("POST", "/truncate", { document });
  }

  async inferSchema(document: JsonValue): Promise<JsonValue> {
    const out = await this.request("POST", "/infer", { document });
    return out.schema;
  }
}
