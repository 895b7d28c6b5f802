import { describe, expect, it } from "vitest";

import { ApiError } from "../src/api.js";
import { freshState, setListing, toggleFolder } from "../src/state.js";
import {
  esc,
  renderInbox,
  renderNotice,
  renderPreview,
  renderTree,
  renderUserPicker,
} from "../src/render.js";
import type {
  FolderListing,
  InboxRow,
  PreviewView,
  UserRow,
} from "../src/types.js";
import { FIX } from "./fixtures.js";

const USERS = FIX.users.data as unknown as UserRow[];

describe("inbox fidelity", () => {
  it("renders exactly one row per pending step the API returned", () => {
    const rows = FIX.inbox_sonya.data as unknown as InboxRow[];
    const html = renderInbox(rows);
    expect(html.match(/class="inbox-row"/g)).toHaveLength(rows.length);
    expect(html).toContain("Vendor deal");
    expect(html).toContain(`data-doc="6"`);
    expect(html).toContain(`<span class="action">Modify</span>`);
    expect(html).toContain("ContractSigning");
  });

  it("renders an empty inbox with no rows", () => {
    const html = renderInbox(FIX.inbox_boyan_empty.data as unknown as InboxRow[]);
    expect(html).not.toContain("inbox-row");
    expect(html).toContain("Nothing pending");
  });

  it("moves with the step: after the forward only the Boss sees it", () => {
    const boyan = FIX.inbox_boyan.data as unknown as InboxRow[];
    const html = renderInbox(boyan);
    expect(html.match(/class="inbox-row"/g)).toHaveLength(1);
    expect(html).toContain(`<span class="action">Sign</span>`);
  });
});

describe("denials render inline and verbatim", () => {
  it("a Secretary pressing Sign shows Deny(NoSignRight)", () => {
    const b = FIX.sign_denied.body;
    const err = new ApiError(FIX.sign_denied.status, b.error, b.detail, b.reason);
    expect(err.display()).toBe("Deny(NoSignRight)");
    const html = renderNotice(err.display());
    expect(html).toContain(`class="banner"`);
    expect(html).toContain("Deny(NoSignRight)");
  });

  it("an empty notice renders nothing", () => {
    expect(renderNotice("")).toBe("");
  });
});

describe("preview panel", () => {
  const view = FIX.preview_sign_step.data as unknown as PreviewView;

  it("shows every candidate with the engine's verdict text", () => {
    const html = renderPreview(view, USERS);
    expect(html).toContain("Preview: Sign");
    for (const v of view.verdicts) {
      expect(html).toContain(`<td>${v.name}</td>`);
      expect(html).toContain(`<td>${v.decision}</td>`);
    }
    expect(html.match(/<tr class="(allow|deny)"/g)).toHaveLength(
      view.verdicts.length,
    );
  });

  it("verdicts match the commit outcomes that followed", () => {
    const byName = new Map(view.verdicts.map((v) => [v.name, v.decision]));
    // boyan's committed Sign was refused with the same reason the
    // preview showed; olga's committed Sign succeeded
    expect(byName.get("boyan")).toBe(
      `Deny:${FIX.sign_flow_denied.body.reason}`,
    );
    expect(FIX.sign_flow_denied.status).toBe(403);
    expect(byName.get("olga")).toBe("Allow");
    expect(FIX.sign_committed.ok).toBe(true);
    expect(FIX.sign_committed.data.run_status).toBe("Completed");
  });
});

describe("tree and chrome", () => {
  it("collapsed root renders without children, expanded shows them", () => {
    const s = freshState("sonya");
    setListing(s, FIX.folders_root.seq, FIX.folders_root.data as unknown as FolderListing);
    let html = renderTree(s, 1);
    expect(html).not.toContain("Shared");
    toggleFolder(s, 1);
    html = renderTree(s, 1);
    expect(html).toContain("Shared");
    expect(html).toContain("FrontDesk");
    expect(html).toContain("Ledgers");
  });

  it("documents appear inside their expanded folder", () => {
    const s = freshState("sonya");
    setListing(s, FIX.folders_frontdesk.seq, FIX.folders_frontdesk.data as unknown as FolderListing);
    toggleFolder(s, 4);
    const html = renderTree(s, 4);
    expect(html).toContain(`data-doc="6"`);
    expect(html).toContain("Vendor deal");
  });

  it("identity picker lists every registered user", () => {
    const html = renderUserPicker(USERS, "sonya");
    expect(html.match(/<option/g)).toHaveLength(USERS.length);
    expect(html).toContain(`value="sonya" selected`);
    expect(html).toContain("(Secretary)");
  });

  it("escapes markup in user-controlled text", () => {
    expect(esc(`<img src=x onerror="x">`)).toBe(
      "&lt;img src=x onerror=&quot;x&quot;&gt;",
    );
    const rows: InboxRow[] = [
      {
        doc: 9,
        title: `<b>bold & "quoted"</b>`,
        route_name: "R",
        cursor: 0,
        pending: { kind: "role", selector: 1, action: "Modify" },
      },
    ];
    const html = renderInbox(rows);
    expect(html).not.toContain("<b>");
    expect(html).toContain("&lt;b&gt;bold &amp; &quot;quoted&quot;&lt;/b&gt;");
  });
});
