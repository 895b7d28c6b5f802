// DOM wiring: one state object, one render pass per change, a 2 s inbox
// poll. All verdicts and denials come from the service verbatim.

import { ApiError, Client } from "./api.js";
import {
  accept,
  freshState,
  setInbox,
  setListing,
  switchUser,
  toggleFolder,
  type AppState,
} from "./state.js";
import {
  renderDetail,
  renderInbox,
  renderNotice,
  renderPreview,
  renderTree,
  renderUserPicker,
} from "./render.js";

const POLL_MS = 2000;
const ROOT_FOLDER = 1;

const api = new Client("");
let state: AppState = freshState();

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function draw(): void {
  el("identity").innerHTML = renderUserPicker(state.users, state.user);
  el("notice").innerHTML = renderNotice(state.notice);
  el("inbox").innerHTML = renderInbox(state.inbox);
  el("tree").innerHTML = renderTree(state, ROOT_FOLDER);
  el("detail").innerHTML = state.selected
    ? renderDetail(state.selected, state.users)
    : `<p class="empty">Select a document.</p>`;
  el("preview").innerHTML = state.preview
    ? renderPreview(state.preview, state.users)
    : "";
}

function showError(err: unknown): void {
  state.notice = err instanceof ApiError ? err.display() : String(err);
  draw();
}

async function refreshInbox(): Promise<void> {
  try {
    const { seq, data } = await api.inbox();
    if (setInbox(state, seq, data)) draw();
  } catch (err) {
    showError(err);
  }
}

async function loadFolder(handle: number): Promise<void> {
  try {
    const { seq, data } = await api.folder(handle);
    if (setListing(state, seq, data)) draw();
  } catch (err) {
    showError(err);
  }
}

async function openDocument(handle: number): Promise<void> {
  try {
    const { seq, data } = await api.document(handle);
    if (!accept(state, seq)) return;
    state.selected = data;
    state.preview = null;
    state.notice = "";
    draw();
  } catch (err) {
    showError(err);
  }
}

async function act(kind: string): Promise<void> {
  const doc = state.selected;
  if (!doc) return;
  try {
    state.notice = "";
    if (kind === "forward") {
      await api.advance(doc.handle, doc.run?.pending?.action ?? "Modify");
    } else if (kind === "sign") {
      await api.advance(doc.handle, "Sign");
    } else if (kind === "reject") {
      await api.reject(doc.handle);
    } else if (kind === "start") {
      await api.routeStart(doc.handle);
    } else if (kind === "preview") {
      const { seq, data } = await api.preview(doc.handle);
      if (accept(state, seq)) {
        state.preview = data;
        draw();
      }
      return;
    }
    await openDocument(doc.handle); // re-read: status, history, buttons
    await refreshInbox();
  } catch (err) {
    showError(err); // denials render inline, e.g. Deny(NoSignRight)
  }
}

async function switchIdentity(name: string): Promise<void> {
  state = switchUser(state, name);
  api.user = name;
  draw();
  await Promise.all([refreshInbox(), loadFolder(ROOT_FOLDER)]);
  state.expanded.add(ROOT_FOLDER);
  draw();
}

function wire(): void {
  el("identity").addEventListener("change", (ev) => {
    const target = ev.target as HTMLSelectElement;
    void switchIdentity(target.value);
  });
  el("inbox").addEventListener("click", (ev) => {
    const row = (ev.target as HTMLElement).closest<HTMLElement>("[data-doc]");
    if (row) void openDocument(Number(row.dataset.doc));
  });
  el("tree").addEventListener("click", (ev) => {
    const target = ev.target as HTMLElement;
    const caret = target.closest<HTMLElement>(".caret");
    if (caret) {
      const handle = Number(caret.dataset.folder);
      // expanding is a local toggle plus, at most, a GET
      if (toggleFolder(state, handle) && !state.listings.has(handle)) {
        void loadFolder(handle);
      }
      draw();
      return;
    }
    const doc = target.closest<HTMLElement>("[data-doc]");
    if (doc) void openDocument(Number(doc.dataset.doc));
  });
  el("detail").addEventListener("click", (ev) => {
    const btn = (ev.target as HTMLElement).closest<HTMLElement>("[data-act]");
    if (btn) void act(btn.dataset.act ?? "");
  });
}

async function boot(): Promise<void> {
  wire();
  const { data } = await api.users();
  state.users = data;
  const first = data[0];
  if (first) await switchIdentity(first.name);
  setInterval(() => void refreshInbox(), POLL_MS);
}

void boot().catch((err) => showError(err));
