// Pure HTML renderers: state in, markup out. No fetches, no policy
// decisions; verdicts and reasons appear exactly as the API sent them.

import type { AppState } from "./state.js";
import type {
  DocRow,
  FolderListing,
  InboxRow,
  PreviewView,
  TraceView,
  UserRow,
} from "./types.js";

export function esc(text: unknown): string {
  return String(text)
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function userName(users: UserRow[], id: number): string {
  const u = users.find((row) => row.id === id);
  return u ? u.name : `#${id}`;
}

export function renderUserPicker(users: UserRow[], current: string): string {
  const opts = users
    .map((u) => {
      const sel = u.name === current ? " selected" : "";
      return `<option value="${esc(u.name)}"${sel}>${esc(u.name)} (${esc(u.role_name)})</option>`;
    })
    .join("");
  return `<select id="who">${opts}</select>`;
}

export function renderInbox(rows: InboxRow[]): string {
  if (rows.length === 0) {
    return `<p class="empty">Nothing pending.</p>`;
  }
  const items = rows
    .map(
      (r) =>
        `<li class="inbox-row" data-doc="${r.doc}">` +
        `<span class="title">${esc(r.title)}</span> ` +
        `<span class="action">${esc(r.pending.action)}</span> ` +
        `<span class="route">${esc(r.route_name)} · step ${r.cursor + 1}</span>` +
        `</li>`,
    )
    .join("");
  return `<ul class="inbox">${items}</ul>`;
}

function renderDocRow(d: DocRow): string {
  return (
    `<li class="doc" data-doc="${d.handle}">` +
    `${esc(d.title)} <span class="muted">${esc(d.class_name)} · ${esc(d.status)}</span>` +
    `</li>`
  );
}

export function renderTree(state: AppState, handle: number): string {
  const listing = state.listings.get(handle);
  if (!listing) {
    return `<p class="empty">Loading…</p>`;
  }
  return `<ul class="tree">${renderFolderNode(state, listing)}</ul>`;
}

function renderFolderNode(state: AppState, listing: FolderListing): string {
  const f = listing.folder;
  const open = state.expanded.has(f.handle);
  let children = "";
  if (open) {
    const parts: string[] = [];
    for (const sub of listing.folders) {
      const nested = state.listings.get(sub.handle);
      if (nested) {
        parts.push(renderFolderNode(state, nested));
      } else {
        parts.push(
          `<li class="folder" data-folder="${sub.handle}">` +
            `<span class="caret" data-folder="${sub.handle}">▸</span> ${esc(sub.name)}</li>`,
        );
      }
    }
    for (const d of listing.documents) parts.push(renderDocRow(d));
    children = `<ul>${parts.join("")}</ul>`;
  }
  return (
    `<li class="folder" data-folder="${f.handle}">` +
    `<span class="caret" data-folder="${f.handle}">${open ? "▾" : "▸"}</span> ` +
    `${esc(f.name)}${children}</li>`
  );
}

export function renderHistory(run: TraceView, users: UserRow[]): string {
  const rows = run.history
    .map(
      (h) =>
        `<li>${esc(h.action)} by ${esc(userName(users, h.user))} (step ${h.step + 1})</li>`,
    )
    .join("");
  const pending = run.pending
    ? `<li class="pending">waiting: ${esc(run.pending.action)}</li>`
    : "";
  return `<ol class="history">${rows}${pending}</ol>`;
}

export function renderDetail(doc: DocRow, users: UserRow[]): string {
  const rows: [string, string][] = [
    ["Class", doc.class_name],
    ["Status", doc.status],
    ["Path", doc.path],
    ["Owner", userName(users, doc.owner)],
    ["Secrecy", doc.label.secrecy],
    ["Level", String(doc.label.level)],
  ];
  if (doc.acl.length) {
    rows.push(["Readers", doc.acl.map((u) => userName(users, u)).join(", ")]);
  }
  if (doc.signed_by.length) {
    rows.push([
      "Signed by",
      doc.signed_by.map((u) => userName(users, u)).join(", "),
    ]);
  }
  const table = rows
    .map(([k, v]) => `<tr><th>${esc(k)}</th><td>${esc(v)}</td></tr>`)
    .join("");
  const content =
    doc.content !== undefined
      ? `<pre class="content">${esc(doc.content)}</pre>`
      : "";
  const run = doc.run ? renderHistory(doc.run, users) : "";
  const buttons =
    doc.run && doc.run.status === "Active"
      ? `<div class="actions">` +
        `<button data-act="forward">Forward</button>` +
        `<button data-act="sign">Sign</button>` +
        `<button data-act="reject">Reject</button>` +
        `<button data-act="preview">Preview</button>` +
        `</div>`
      : doc.status === "Draft"
        ? `<div class="actions"><button data-act="start">Start route</button></div>`
        : "";
  return (
    `<h2>${esc(doc.title)}</h2><table>${table}</table>` +
    content +
    run +
    buttons
  );
}

export function renderPreview(view: PreviewView, users: UserRow[]): string {
  const rows = view.verdicts
    .map((v) => {
      const cls = v.decision === "Allow" ? "allow" : "deny";
      return (
        `<tr class="${cls}"><td>${esc(v.name || userName(users, v.user))}</td>` +
        `<td>${esc(v.decision)}</td></tr>`
      );
    })
    .join("");
  return (
    `<h3>Preview: ${esc(view.action)}</h3>` +
    `<table class="preview"><tr><th>candidate</th><th>verdict</th></tr>${rows}</table>`
  );
}

export function renderNotice(notice: string): string {
  return notice ? `<div class="banner">${esc(notice)}</div>` : "";
}
