// Thin typed client. Every call carries the selected identity in the
// X-GW-User header and returns the envelope's seq alongside the data, so
// callers can discard stale poll responses.

import type {
  DocRow,
  FolderListing,
  InboxRow,
  PreviewView,
  RouteStarted,
  StepResult,
  TraceView,
  UserRow,
  WorkgroupRow,
} from "./types.js";

export interface Reply<T> {
  seq: number;
  data: T;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
    readonly reason?: string,
  ) {
    super(reason ? `${code}: ${reason}` : code);
  }

  // Policy denials render as the engine's reason code, e.g. Deny(NoSignRight)
  display(): string {
    if (this.status === 403) {
      return `Deny(${this.reason || this.code})`;
    }
    return this.detail ? `${this.code}: ${this.detail}` : this.code;
  }
}

type FetchLike = (url: string, init: RequestInit) => Promise<Response>;

export class Client {
  user = "";

  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<Reply<T>> {
    const init: RequestInit = { method, headers: { "X-GW-User": this.user } };
    if (body !== undefined) {
      (init.headers as Record<string, string>)["Content-Type"] =
        "application/json";
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchFn(this.base + path, init);
    const payload = await resp.json();
    if (!resp.ok || payload.ok !== true) {
      throw new ApiError(
        resp.status,
        payload.error ?? "UnknownError",
        payload.detail ?? "",
        payload.reason,
      );
    }
    return { seq: payload.seq, data: payload.data as T };
  }

  users(): Promise<Reply<UserRow[]>> {
    return this.request("GET", "/users");
  }

  workgroups(): Promise<Reply<WorkgroupRow[]>> {
    return this.request("GET", "/workgroups");
  }

  folder(handle: number): Promise<Reply<FolderListing>> {
    return this.request("GET", `/folders/${handle}`);
  }

  document(handle: number): Promise<Reply<DocRow>> {
    return this.request("GET", `/documents/${handle}`);
  }

  inbox(): Promise<Reply<InboxRow[]>> {
    return this.request("GET", "/inbox");
  }

  trace(handle: number): Promise<Reply<TraceView>> {
    return this.request("GET", `/documents/${handle}/route`);
  }

  routeStart(handle: number): Promise<Reply<RouteStarted>> {
    return this.request("POST", `/documents/${handle}/route`);
  }

  advance(
    doc: number,
    action: string,
    content?: string,
    forward = true,
  ): Promise<Reply<StepResult>> {
    const body: Record<string, unknown> = { doc, action, forward };
    if (content !== undefined) body.content = content;
    return this.request("POST", "/actions/advance", body);
  }

  reject(doc: number): Promise<Reply<StepResult>> {
    return this.request("POST", "/actions/reject", { doc });
  }

  preview(doc: number, action?: string): Promise<Reply<PreviewView>> {
    const body: Record<string, unknown> = { doc };
    if (action) body.action = action;
    return this.request("POST", "/actions/preview", body);
  }
}
