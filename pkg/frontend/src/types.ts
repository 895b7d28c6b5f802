// Wire shapes of the service API. Field names are the stable contract;
// the client never invents or rewrites policy data.

export interface LabelView {
  level: number;
  secrecy: string;
  groups: number[];
}

export interface UserRow {
  id: number;
  name: string;
  role: number;
  role_name: string;
  level: number;
  level_name: string;
  clearance: string;
  groups: number[];
  label: LabelView;
}

export interface WorkgroupRow {
  id: number;
  name: string;
  members: number[];
}

export interface FolderRow {
  handle: number;
  name: string;
  folder: number; // parent handle, 0 for the root
  index: number;
  level: number;
  path: string;
  groups: number[];
}

export interface HistoryRow {
  user: number;
  action: string;
  step: number;
}

export interface PendingStep {
  kind: string; // "role" | "user"
  selector: number;
  action: string;
  min?: number;
  max?: number;
}

export interface TraceView {
  doc: number;
  route: number;
  route_name: string;
  status: string;
  cursor: number;
  visits: number;
  history: HistoryRow[];
  pending?: PendingStep;
  candidates?: number[];
}

export interface DocRow {
  handle: number;
  title: string;
  folder: number;
  doc_class: number;
  class_name: string;
  status: string;
  owner: number;
  path: string;
  index: number;
  level: number;
  label: LabelView;
  acl: number[];
  signed_by: number[];
  content?: string;
  run?: TraceView;
}

export interface FolderListing {
  folder: FolderRow;
  folders: FolderRow[];
  documents: DocRow[];
}

export interface InboxRow {
  doc: number;
  title: string;
  route_name: string;
  cursor: number;
  pending: PendingStep;
}

export interface Verdict {
  user: number;
  name: string;
  decision: string; // "Allow" or "Deny:Reason", verbatim from the engine
}

export interface PreviewView extends TraceView {
  action: string;
  verdicts: Verdict[];
}

export interface StepResult {
  doc: number;
  cursor: number;
  visits: number;
  run_status: string;
  doc_status: string;
}

export interface RouteStarted {
  doc: number;
  route: number;
  route_name: string;
  status: string;
}
