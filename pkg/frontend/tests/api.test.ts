import { describe, expect, it } from "vitest";

import { ApiError, Client } from "../src/api.js";
import { FIX } from "./fixtures.js";

function stubFetch(status: number, payload: unknown) {
  const calls: { url: string; init: RequestInit }[] = [];
  const fn = async (url: string, init: RequestInit) => {
    calls.push({ url, init });
    return {
      ok: status >= 200 && status < 300,
      status,
      json: async () => payload,
    } as Response;
  };
  return { fn, calls };
}

describe("client requests", () => {
  it("sends the identity header on every call", async () => {
    const { fn, calls } = stubFetch(200, FIX.inbox_sonya);
    const api = new Client("", fn);
    api.user = "sonya";
    await api.inbox();
    const headers = calls[0].init.headers as Record<string, string>;
    expect(headers["X-GW-User"]).toBe("sonya");
    expect(calls[0].url).toBe("/inbox");
    expect(calls[0].init.method).toBe("GET");
  });

  it("unwraps the envelope into seq and data", async () => {
    const { fn } = stubFetch(200, FIX.inbox_sonya);
    const api = new Client("", fn);
    api.user = "sonya";
    const { seq, data } = await api.inbox();
    expect(seq).toBe(FIX.inbox_sonya.seq);
    expect(data).toEqual(FIX.inbox_sonya.data);
  });

  it("posts advance with doc, action and forward flag", async () => {
    const { fn, calls } = stubFetch(200, FIX.advance_modify);
    const api = new Client("", fn);
    api.user = "sonya";
    await api.advance(6, "Modify", "v2");
    expect(calls[0].url).toBe("/actions/advance");
    expect(JSON.parse(calls[0].init.body as string)).toEqual({
      doc: 6,
      action: "Modify",
      forward: true,
      content: "v2",
    });
  });

  it("posts preview without inventing an action", async () => {
    const { fn, calls } = stubFetch(200, FIX.preview_sign_step);
    const api = new Client("", fn);
    api.user = "sonya";
    await api.preview(6);
    expect(JSON.parse(calls[0].init.body as string)).toEqual({ doc: 6 });
  });

  it("maps denial bodies onto ApiError with the verbatim reason", async () => {
    const { fn } = stubFetch(FIX.sign_denied.status, FIX.sign_denied.body);
    const api = new Client("", fn);
    api.user = "sonya";
    const err = await api.advance(6, "Sign").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(403);
    expect(err.code).toBe("AccessDenied");
    expect(err.reason).toBe("NoSignRight");
  });

  it("maps not-found bodies without a reason", async () => {
    const { fn } = stubFetch(FIX.not_found.status, FIX.not_found.body);
    const api = new Client("", fn);
    api.user = "sonya";
    const err = await api.document(999).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("UnknownHandle");
    expect(err.reason).toBeUndefined();
    expect(err.display()).toBe("UnknownHandle: 999");
  });
});
