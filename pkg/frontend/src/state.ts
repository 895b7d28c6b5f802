// Client-side state. One rendering thread mutates it; async replies are
// admitted through accept(), which drops anything older than what the
// view already shows. Expand/collapse is purely local.

import type {
  DocRow,
  FolderListing,
  InboxRow,
  PreviewView,
  UserRow,
} from "./types.js";

export interface AppState {
  user: string;
  users: UserRow[];
  seq: number; // high-water sequence number the view reflects
  inbox: InboxRow[];
  listings: Map<number, FolderListing>; // folder handle -> loaded children
  expanded: Set<number>;
  selected: DocRow | null;
  preview: PreviewView | null;
  notice: string; // inline error/denial banner, empty when clear
}

export function freshState(user = ""): AppState {
  return {
    user,
    users: [],
    seq: 0,
    inbox: [],
    listings: new Map(),
    expanded: new Set(),
    selected: null,
    preview: null,
    notice: "",
  };
}

// Same seq is fine (idempotent reads are byte-identical); older is stale.
export function accept(state: AppState, seq: number): boolean {
  if (seq < state.seq) return false;
  state.seq = seq;
  return true;
}

export function setInbox(state: AppState, seq: number, rows: InboxRow[]): boolean {
  if (!accept(state, seq)) return false;
  state.inbox = rows;
  return true;
}

export function setListing(
  state: AppState,
  seq: number,
  listing: FolderListing,
): boolean {
  if (!accept(state, seq)) return false;
  state.listings.set(listing.folder.handle, listing);
  return true;
}

export function toggleFolder(state: AppState, handle: number): boolean {
  if (state.expanded.has(handle)) {
    state.expanded.delete(handle);
    return false;
  }
  state.expanded.add(handle);
  return true;
}

export function switchUser(state: AppState, user: string): AppState {
  const next = freshState(user);
  next.users = state.users; // the directory does not depend on identity
  return next;
}
