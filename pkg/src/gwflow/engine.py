"""Command execution, event logging, replay and snapshots.

The engine is command-sourced: every successful mutation appends exactly
one event (the submitted op, acting user and original arguments) to the
log, and replaying the log against the canonical empty state rebuilds
the exact same state, digest included. Replay skips policy checks since
an event is by definition a command that already succeeded; everything a
handler derives (ids, owning workgroups, content digests) is a pure
function of the current state and the arguments, which is what makes the
rebuild deterministic.

Denied attempts are not events. They land in the audit stream and raise.
"""

from __future__ import annotations

import logging
import os

from . import routing
from .access import (
    Action,
    REASON_NOT_IN_WORKGROUP,
    SYSTEM_USER,
    action_of,
    check_access,
    decision_matrix,
    require,
    sign_matrix,
    user_label,
)
from .errors import (
    ArchivedDocument,
    DocumentLocked,
    InUse,
    MalformedInput,
    MalformedRoute,
    PolicyError,
    PolicyViolation,
    StorageFailure,
    UnknownTarget,
)
from .events import AuditLog, FileEventLog, MemoryEventLog, read_snapshot, write_snapshot
from .hierarchy import HierarchyKind
from .lattice import Label, Secrecy
from .routing import RunStatus, Stage, Step
from .state import EngineState
from .store import DocStatus, Document, Folder

log = logging.getLogger(__name__)

EVENTS_FILE = "events.log"
SNAPSHOT_FILE = "snapshot.txt"
AUDIT_FILE = "audit.log"


class Engine:
    # compact automatically once this many events pile up past the last
    # snapshot; 0 leaves compaction fully manual
    snapshot_every = 0

    def __init__(self, state: EngineState, event_log, audit: AuditLog | None = None,
                 data_dir: str | None = None):
        self.state = state
        self.log = event_log
        self.audit = audit
        self.data_dir = data_dir

    @property
    def seq(self) -> int:
        return self.log.last_seq

    @classmethod
    def in_memory(cls) -> "Engine":
        return cls(EngineState.empty(), MemoryEventLog())

    @classmethod
    def open(cls, data_dir: str) -> "Engine":
        """Snapshot (if any) plus tail replay. Survives a torn log tail."""
        os.makedirs(data_dir, exist_ok=True)
        snap_path = os.path.join(data_dir, SNAPSHOT_FILE)
        if os.path.exists(snap_path):
            base_seq, _, body = read_snapshot(snap_path)
            state = EngineState.from_text(body)
        else:
            base_seq = 0
            state = EngineState.empty()
        elog = FileEventLog(os.path.join(data_dir, EVENTS_FILE), base_seq)
        engine = cls(state, elog, AuditLog(os.path.join(data_dir, AUDIT_FILE)),
                     data_dir)
        for event in elog.events():
            engine.apply(event["op"], event["user"], event["args"], check=False)
        return engine

    # --- command path ------------------------------------------------------

    def execute(self, op: str, user: int, args: dict) -> tuple[int, dict]:
        """Run one command; on success append its event and return
        (seq, result). Policy denials are audited before they raise."""
        try:
            result = self.apply(op, user, args, check=True)
        except PolicyError as exc:
            if self.audit is not None:
                reason = getattr(exc, "reason", "") or exc.code
                self.audit.record(user, op, _target_of(args), reason, exc.detail)
            raise
        seq = self.log.append(op, user, args)
        if (self.snapshot_every and self.data_dir is not None
                and seq - self.log.base_seq >= self.snapshot_every):
            self.snapshot_and_compact(SYSTEM_USER)
        return seq, result

    def apply(self, op: str, user: int, args: dict, check: bool) -> dict:
        handler = _HANDLERS.get(op)
        if handler is None:
            raise MalformedInput(f"unknown operation {op!r}")
        if not isinstance(args, dict):
            raise MalformedInput("operation arguments must be an object")
        return handler(self.state, user, args, check)

    def replay_digest(self) -> str:
        """Rebuild state from the empty state plus this engine's event list
        and return the rebuilt digest. Diagnostic, does not touch disk."""
        clone = Engine(EngineState.empty(), MemoryEventLog())
        for event in self.log.events():
            clone.apply(event["op"], event["user"], event["args"], check=False)
        return clone.state.digest()

    # --- snapshots -----------------------------------------------------------

    def snapshot_and_compact(self, user: int = SYSTEM_USER) -> dict:
        """Freeze the state at the current seq and drop the replayed prefix
        of the log. Requires store administration rights."""
        require(check_access(self.state, user, Action.MANAGE_STORE))
        if self.data_dir is None:
            raise StorageFailure("engine has no data directory to snapshot into")
        path = os.path.join(self.data_dir, SNAPSHOT_FILE)
        digest = write_snapshot(path, self.seq, self.state.to_text())
        self.log.rewrite([], self.seq)
        return {"seq": self.seq, "digest": digest}

    def close(self) -> None:
        self.log.close()
        if self.audit is not None:
            self.audit.close()


def _target_of(args: dict) -> str:
    for key in ("doc", "handle", "folder", "target", "id", "name"):
        if key in args:
            return f"{key}={args[key]}"
    return ""


# --- shared lookups ----------------------------------------------------------


def _hier(state: EngineState, ref) -> "HierarchyKind":
    try:
        return HierarchyKind(ref)
    except ValueError:
        raise MalformedInput(f"unknown hierarchy kind {ref!r}") from None


def _int_arg(args: dict, key: str) -> int:
    v = args.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise MalformedInput(f"argument {key!r} must be an integer")
    return v


def _str_arg(args: dict, key: str) -> str:
    v = args.get(key)
    if not isinstance(v, str) or not v:
        raise MalformedInput(f"argument {key!r} must be a non-empty string")
    return v


def _live_digests(state: EngineState) -> set[str]:
    return {d.digest for d in state.tree.documents() if d.digest}


def _sign_needed(state: EngineState, doc_class: int) -> bool:
    return any(state.docs.is_subtype(doc_class, c) for c in state.sign_required
               if c in state.docs.nodes)


def _doc_summary(state: EngineState, doc: Document) -> dict:
    return {
        "handle": doc.handle,
        "title": doc.name,
        "folder": doc.parent,
        "path": state.tree.path(doc.handle),
        "doc_class": doc.doc_class,
        "class_name": state.docs.node(doc.doc_class).name,
        "status": doc.status.value,
        "owner": doc.owner,
        "label": doc.label.to_json(),
        "acl": sorted(doc.acl),
        "signed_by": sorted(doc.signed_by),
        "index": state.tree.index(doc.handle),
        "level": state.tree.level(doc.handle),
    }


def _folder_summary(state: EngineState, folder: Folder) -> dict:
    return {
        "handle": folder.handle,
        "name": folder.name,
        "folder": folder.parent,
        "path": state.tree.path(folder.handle),
        "groups": sorted(folder.groups),
        "index": state.tree.index(folder.handle),
        "level": state.tree.level(folder.handle),
    }


# --- hierarchy commands --------------------------------------------------------


def _h_class_add(state, user, args, check):
    kind = _hier(state, args.get("kind"))
    h = state.hierarchy(kind)
    if check:
        require(check_access(state, user, Action.MANAGE_USERS))
    parent = h.resolve(args.get("parent", h.root_id))
    cid = h.add_class(_str_arg(args, "name"), parent)
    return {"id": cid, "kind": kind.value}


def _h_class_remove(state, user, args, check):
    kind = _hier(state, args.get("kind"))
    h = state.hierarchy(kind)
    if check:
        require(check_access(state, user, Action.MANAGE_USERS))
    cid = h.resolve(args.get("id"))
    doomed = h.descendants(cid)

    if kind is HierarchyKind.DOCUMENT:
        used = [d.handle for d in state.tree.documents() if d.doc_class in doomed]
        if used:
            raise InUse(f"document class {cid} has live documents {used}")
    elif kind is HierarchyKind.ROLE:
        used_u = [u.id for u in state.directory.users.values() if u.role in doomed]
        if used_u:
            raise InUse(f"role class {cid} is held by users {used_u}")
        for r in state.routes.routes.values():
            refs = {s.selector for s in r.steps if not s.by_user}
            refs |= {st.role for st in r.stages}
            if refs & doomed:
                raise InUse(f"role class {cid} is referenced by route {r.id}")
    else:
        used_u = [u.id for u in state.directory.users.values() if u.level in doomed]
        if used_u:
            raise InUse(f"access class {cid} is the level of users {used_u}")
        used_d = [d.handle for d in state.tree.documents()
                  if d.label.level in doomed]
        if used_d:
            raise InUse(f"access class {cid} labels documents {used_d}")

    removed = h.remove_class(cid)
    dropped = []
    if kind is HierarchyKind.DOCUMENT:
        dropped = state.routes.drop_for_classes(removed)
        state.sign_required -= removed
    return {"removed": sorted(removed), "routes_dropped": sorted(dropped)}


# --- directory commands ---------------------------------------------------------


def _h_user_add(state, user, args, check):
    if check:
        require(check_access(state, user, Action.MANAGE_USERS))
    role = state.roles.resolve(args.get("role"))
    level = state.access.resolve(args.get("level"))
    clearance = Secrecy(args.get("clearance", Secrecy.PUBLIC.value))
    u = state.directory.add_user(_str_arg(args, "name"), role, level, clearance)
    return {"id": u.id, "name": u.name}


def _h_wg_add(state, user, args, check):
    if check:
        require(check_access(state, user, Action.MANAGE_USERS))
    w = state.directory.add_workgroup(_str_arg(args, "name"))
    return {"id": w.id, "name": w.name}


def _h_wg_attach(state, user, args, check):
    if check:
        require(check_access(state, user, Action.MANAGE_USERS))
    u = state.directory.resolve_user(args.get("user"))
    w = state.directory.resolve_workgroup(args.get("wg"))
    state.directory.attach(u.id, w.id)
    return {"user": u.id, "wg": w.id}


def _h_wg_detach(state, user, args, check):
    if check:
        require(check_access(state, user, Action.MANAGE_USERS))
    u = state.directory.resolve_user(args.get("user"))
    w = state.directory.resolve_workgroup(args.get("wg"))
    state.directory.detach(u.id, w.id)
    return {"user": u.id, "wg": w.id}


def _h_grant_add(state, user, args, check):
    if check:
        require(check_access(state, user, Action.MANAGE_USERS))
    u = state.directory.resolve_user(args.get("user"))
    folder = state.tree.folder(_int_arg(args, "folder")).handle
    g = state.directory.add_grant(u.id, folder, _int_arg(args, "lo"),
                                  _int_arg(args, "hi"))
    return {"id": g.id, "user": g.user, "folder": g.folder}


def _h_grant_revoke(state, user, args, check):
    if check:
        require(check_access(state, user, Action.MANAGE_USERS))
    g = state.directory.revoke_grant(_int_arg(args, "id"))
    return {"id": g.id}


def _h_signreq_set(state, user, args, check):
    if check:
        require(check_access(state, user, Action.MANAGE_USERS))
    classes = args.get("classes")
    if not isinstance(classes, list):
        raise MalformedInput("argument 'classes' must be a list")
    ids = {state.docs.resolve(c) for c in classes}
    state.sign_required = ids
    return {"classes": sorted(ids)}


# --- store commands --------------------------------------------------------------


def _h_folder_add(state, user, args, check):
    if check:
        require(check_access(state, user, Action.MANAGE_STORE))
    f = state.tree.add_folder(_str_arg(args, "name"), _int_arg(args, "parent"))
    return {"handle": f.handle, "index": state.tree.index(f.handle)}


def _h_folder_attach(state, user, args, check):
    if check:
        require(check_access(state, user, Action.MANAGE_STORE))
    f = state.tree.folder(_int_arg(args, "folder"))
    w = state.directory.resolve_workgroup(args.get("wg"))
    f.groups.add(w.id)
    return {"folder": f.handle, "wg": w.id}


def _h_folder_detach(state, user, args, check):
    if check:
        require(check_access(state, user, Action.MANAGE_STORE))
    f = state.tree.folder(_int_arg(args, "folder"))
    w = state.directory.resolve_workgroup(args.get("wg"))
    if w.id not in f.groups:
        raise UnknownTarget(f"workgroup {w.id} on folder {f.handle}")
    f.groups.discard(w.id)
    return {"folder": f.handle, "wg": w.id}


def _h_node_move(state, user, args, check):
    if check:
        require(check_access(state, user, Action.MANAGE_STORE))
    handle = _int_arg(args, "handle")
    state.tree.move(handle, _int_arg(args, "parent"))
    return {"handle": handle, "index": state.tree.index(handle)}


def _h_node_remove(state, user, args, check):
    handle = _int_arg(args, "handle")
    node = state.tree.node(handle)
    if check:
        require(check_access(state, user, Action.DELETE, handle))
    if isinstance(node, Document) and state.runs.get(handle) is not None:
        run = state.runs[handle]
        if run.status is RunStatus.ACTIVE:
            routing.reject(run)
    removed = state.tree.remove(handle)
    for h in removed:
        state.runs.pop(h, None)
    state.blobs.sweep(_live_digests(state))
    return {"removed": removed}


def _owning_group(state: EngineState, uid: int, folder: int) -> int:
    """Nearest attached workgroup the creator belongs to, walking up from
    the folder. The engine principal takes the nearest attachment outright."""
    ug = state.directory.user_groups(uid)
    for h in state.tree.ancestors(folder):
        n = state.tree.nodes[h]
        if isinstance(n, Folder) and n.groups:
            pool = sorted(n.groups & ug)
            if not pool and uid == SYSTEM_USER:
                pool = sorted(n.groups)
            if pool:
                return pool[0]
    raise PolicyViolation(REASON_NOT_IN_WORKGROUP,
                          f"no owning workgroup reachable from folder {folder}")


def _h_doc_create(state, user, args, check):
    folder = state.tree.folder(_int_arg(args, "folder")).handle
    doc_class = state.docs.resolve(args.get("doc_class"))
    level = state.access.resolve(args.get("level"))
    secrecy = Secrecy(args.get("secrecy", Secrecy.PUBLIC.value))
    content = args.get("content", "")
    if not isinstance(content, str):
        raise MalformedInput("argument 'content' must be text")

    if secrecy is Secrecy.PRIVATE:
        groups = frozenset({_owning_group(state, user, folder)})
    else:
        groups = frozenset()
    label = Label(level, secrecy, groups)

    acl_arg = args.get("acl", [])
    if acl_arg and secrecy is not Secrecy.CONFIDENTIAL:
        raise MalformedInput("only Confidential documents carry an ACL")
    acl = {state.directory.resolve_user(ref).id for ref in acl_arg}

    if check:
        require(check_access(state, user, Action.CREATE, folder, label))

    doc = state.tree.add_document(_str_arg(args, "title"), folder, doc_class,
                                  label, user)
    if secrecy is Secrecy.CONFIDENTIAL:
        # the owner always reads what they wrote
        doc.acl = set(acl)
        if user != SYSTEM_USER:
            doc.acl.add(user)
    doc.digest = state.blobs.put(content)
    return {"handle": doc.handle, "digest": doc.digest,
            "label": doc.label.to_json(), "index": state.tree.index(doc.handle)}


def _require_unlocked(doc: Document) -> None:
    if doc.status is DocStatus.ARCHIVED:
        raise ArchivedDocument(f"document {doc.handle}")
    if doc.status in (DocStatus.ROUTED, DocStatus.SIGNED):
        raise DocumentLocked(f"document {doc.handle} is {doc.status.value}")


def _h_doc_modify(state, user, args, check):
    doc = state.tree.document(_int_arg(args, "doc"))
    if check:
        require(check_access(state, user, Action.MODIFY, doc.handle))
    _require_unlocked(doc)
    content = args.get("content")
    if not isinstance(content, str):
        raise MalformedInput("argument 'content' must be text")
    doc.digest = state.blobs.put(content)
    state.blobs.sweep(_live_digests(state))
    return {"handle": doc.handle, "digest": doc.digest}


def _h_doc_retitle(state, user, args, check):
    doc = state.tree.document(_int_arg(args, "doc"))
    if check:
        require(check_access(state, user, Action.MODIFY, doc.handle))
    _require_unlocked(doc)
    doc.name = _str_arg(args, "title")
    return {"handle": doc.handle, "title": doc.name}


def _acl_gate(state, user, doc, check):
    if not check:
        return
    if user == SYSTEM_USER or user == doc.owner:
        return
    require(check_access(state, user, Action.MANAGE_USERS),
            f"ACL of document {doc.handle}")


def _h_acl_add(state, user, args, check):
    doc = state.tree.document(_int_arg(args, "doc"))
    if doc.label.secrecy is not Secrecy.CONFIDENTIAL:
        raise MalformedInput("only Confidential documents carry an ACL")
    if doc.status is DocStatus.ARCHIVED:
        raise ArchivedDocument(f"document {doc.handle}")
    _acl_gate(state, user, doc, check)
    u = state.directory.resolve_user(args.get("user"))
    doc.acl.add(u.id)
    return {"doc": doc.handle, "acl": sorted(doc.acl)}


def _h_acl_remove(state, user, args, check):
    doc = state.tree.document(_int_arg(args, "doc"))
    if doc.label.secrecy is not Secrecy.CONFIDENTIAL:
        raise MalformedInput("only Confidential documents carry an ACL")
    if doc.status is DocStatus.ARCHIVED:
        raise ArchivedDocument(f"document {doc.handle}")
    _acl_gate(state, user, doc, check)
    u = state.directory.resolve_user(args.get("user"))
    if u.id not in doc.acl:
        raise UnknownTarget(f"user {u.id} on ACL of document {doc.handle}")
    doc.acl.discard(u.id)
    return {"doc": doc.handle, "acl": sorted(doc.acl)}


def _h_doc_archive(state, user, args, check):
    doc = state.tree.document(_int_arg(args, "doc"))
    if check:
        require(check_access(state, user, Action.ARCHIVE, doc.handle))
    if doc.status is DocStatus.ARCHIVED:
        raise ArchivedDocument(f"document {doc.handle} already archived")
    run = state.runs.get(doc.handle)
    if run is not None and run.status is RunStatus.ACTIVE:
        routing.reject(run)
    doc.status = DocStatus.ARCHIVED
    return {"handle": doc.handle, "status": doc.status.value}


# --- routing commands ---------------------------------------------------------


def _h_route_register(state, user, args, check):
    if check:
        require(check_access(state, user, Action.MANAGE_STORE))
    applies_to = state.docs.resolve(args.get("applies_to"))
    kind = args.get("kind")
    name = _str_arg(args, "name")
    steps: list[Step] = []
    stages: list[Stage] = []
    terminal = Action.MODIFY
    if kind == "explicit":
        for raw in _list_arg(args, "steps"):
            action = action_of(raw.get("action", Action.MODIFY.value))
            if "user" in raw:
                steps.append(Step(True, state.directory.resolve_user(raw["user"]).id,
                                  action))
            elif "role" in raw:
                steps.append(Step(False, state.roles.resolve(raw["role"]), action))
            else:
                raise MalformedRoute("step needs a 'role' or 'user' selector")
        final = steps[-1].action
    elif kind == "spectrum":
        stages = [Stage(state.roles.resolve(raw.get("role")),
                        int(raw.get("min", 1)), int(raw.get("max", 1)))
                  for raw in _list_arg(args, "stages")]
        terminal = action_of(args.get("terminal", Action.MODIFY.value))
        final = terminal
    else:
        raise MalformedRoute(f"unknown route kind {kind!r}")
    # refuse before replacing any existing binding for the class
    if _sign_needed(state, applies_to) and final is not Action.SIGN:
        raise MalformedRoute(
            f"class {applies_to} requires signing, route must end in Sign")
    if kind == "explicit":
        route = state.routes.register_explicit(name, applies_to, steps)
    else:
        route = state.routes.register_spectrum(name, applies_to, stages, terminal)
    return {"id": route.id, "applies_to": applies_to, "kind": kind}


def _list_arg(args: dict, key: str) -> list:
    v = args.get(key)
    if not isinstance(v, list) or not v:
        raise MalformedRoute(f"argument {key!r} must be a non-empty list")
    return v


def _h_route_start(state, user, args, check):
    doc = state.tree.document(_int_arg(args, "doc"))
    if check:
        require(check_access(state, user, Action.ROUTE, doc.handle))
    if doc.status is DocStatus.ARCHIVED:
        raise ArchivedDocument(f"document {doc.handle}")
    if doc.status is not DocStatus.DRAFT:
        raise DocumentLocked(f"document {doc.handle} is {doc.status.value}")
    route = state.routes.route_for(doc.doc_class, state.docs)
    if _sign_needed(state, doc.doc_class) and route.final_action() is not Action.SIGN:
        raise MalformedRoute(
            f"document class {doc.doc_class} requires signing, route "
            f"{route.id} ends in {route.final_action().value}")
    state.runs[doc.handle] = routing.start_run(doc.handle, route)
    doc.status = DocStatus.ROUTED
    return {"doc": doc.handle, "route": route.id, "route_name": route.name,
            "status": doc.status.value}


def _active_run(state: EngineState, handle: int) -> routing.RouteRun:
    run = state.runs.get(handle)
    if run is None:
        raise UnknownTarget(f"route run for document {handle}")
    return run


def _h_route_step(state, user, args, check):
    doc = state.tree.document(_int_arg(args, "doc"))
    run = _active_run(state, doc.handle)
    route = state.routes.route(run.route)
    action = action_of(args.get("action", Action.MODIFY.value))
    forward = bool(args.get("forward", True))
    if check:
        require(check_access(state, user, action, doc.handle))
    actor = state.directory.user(user) if user != SYSTEM_USER else None
    role = actor.role if actor is not None else state.roles.root_id
    status = routing.advance(run, route, user, role, state.roles, action, forward)

    if action is Action.MODIFY and isinstance(args.get("content"), str):
        doc.digest = state.blobs.put(args["content"])
        state.blobs.sweep(_live_digests(state))
    if action is Action.SIGN and user != SYSTEM_USER:
        doc.signed_by.add(user)

    if status is RunStatus.COMPLETED:
        final = route.final_action()
        doc.status = DocStatus.SIGNED if final is Action.SIGN else DocStatus.DRAFT
    return {"doc": doc.handle, "run_status": status.value,
            "cursor": run.cursor, "visits": run.visits,
            "doc_status": doc.status.value}


def _h_route_reject(state, user, args, check):
    doc = state.tree.document(_int_arg(args, "doc"))
    run = _active_run(state, doc.handle)
    route = state.routes.route(run.route)
    if check:
        require(check_access(state, user, Action.ROUTE, doc.handle))
        actor = state.directory.user(user)
        sysadm = check_access(state, user, Action.MANAGE_STORE).allowed
        if not sysadm and not routing.eligible(run, route, user, actor.role,
                                               state.roles):
            raise PolicyViolation("NotACandidate",
                                  f"user {user} cannot reject run on {doc.handle}")
    routing.reject(run)
    doc.status = DocStatus.DRAFT
    return {"doc": doc.handle, "run_status": run.status.value,
            "doc_status": doc.status.value}


_HANDLERS = {
    "class.add": _h_class_add,
    "class.remove": _h_class_remove,
    "user.add": _h_user_add,
    "wg.add": _h_wg_add,
    "wg.attach": _h_wg_attach,
    "wg.detach": _h_wg_detach,
    "grant.add": _h_grant_add,
    "grant.revoke": _h_grant_revoke,
    "signreq.set": _h_signreq_set,
    "folder.add": _h_folder_add,
    "folder.attach": _h_folder_attach,
    "folder.detach": _h_folder_detach,
    "node.move": _h_node_move,
    "node.remove": _h_node_remove,
    "doc.create": _h_doc_create,
    "doc.modify": _h_doc_modify,
    "doc.retitle": _h_doc_retitle,
    "acl.add": _h_acl_add,
    "acl.remove": _h_acl_remove,
    "doc.archive": _h_doc_archive,
    "route.register": _h_route_register,
    "route.start": _h_route_start,
    "route.step": _h_route_step,
    "route.reject": _h_route_reject,
}

OPS = tuple(sorted(_HANDLERS))


# --- queries (no events) -------------------------------------------------------


def q_read_doc(engine: Engine, user: int, handle: int) -> dict:
    state = engine.state
    doc = state.tree.document(handle)
    decision = check_access(state, user, Action.READ, handle)
    if not decision.allowed:
        if engine.audit is not None:
            engine.audit.record(user, "read", f"doc={handle}", decision.reason)
        require(decision, f"document {handle}")
    out = _doc_summary(state, doc)
    out["content"] = state.blobs.get(doc.digest) if doc.digest else ""
    run = state.runs.get(handle)
    if run is not None:
        out["run"] = _run_view(state, run)
    return out


def q_list_folder(engine: Engine, user: int, handle: int) -> dict:
    state = engine.state
    folder = state.tree.folder(handle)
    require(check_access(state, user, Action.READ, handle), f"folder {handle}")
    folders, docs = [], []
    for h in state.tree.children(handle):
        node = state.tree.nodes[h]
        if isinstance(node, Folder):
            if check_access(state, user, Action.READ, h).allowed:
                folders.append(_folder_summary(state, node))
        elif check_access(state, user, Action.READ, h).allowed:
            docs.append(_doc_summary(state, node))
    return {"folder": _folder_summary(state, folder),
            "folders": folders, "documents": docs}


def q_search(engine: Engine, user: int, title: str = "", doc_class=None,
             status: str = "", folder: int | None = None) -> list[dict]:
    """Documents visible to the user, filtered. Invisible documents are
    silently dropped rather than reported."""
    state = engine.state
    class_ids = None
    if doc_class is not None and doc_class != "":
        class_ids = state.docs.descendants(state.docs.resolve(doc_class))
    scope = None
    if folder is not None:
        scope = set(state.tree.subtree(state.tree.folder(folder).handle))
    want_status = DocStatus(status) if status else None
    hits = []
    for doc in state.tree.documents():
        if title and title.lower() not in doc.name.lower():
            continue
        if class_ids is not None and doc.doc_class not in class_ids:
            continue
        if want_status is not None and doc.status is not want_status:
            continue
        if scope is not None and doc.handle not in scope:
            continue
        if not check_access(state, user, Action.READ, doc.handle).allowed:
            continue
        hits.append(_doc_summary(state, doc))
    return hits


def q_classes(engine: Engine, kind) -> list[dict]:
    h = engine.state.hierarchy(kind)
    return [{"id": n.id, "name": n.name, "parent": n.parent,
             "depth": h.depth(n.id)}
            for n in (h.nodes[i] for i in sorted(h.nodes))]


def q_users(engine: Engine, user: int) -> list[dict]:
    # identity is an unauthenticated header, so the directory listing is
    # not a secret; management (writes) stays admin-gated
    state = engine.state
    out = []
    for uid in sorted(state.directory.users):
        u = state.directory.users[uid]
        out.append({
            "id": u.id, "name": u.name,
            "role": u.role, "role_name": state.roles.node(u.role).name,
            "level": u.level, "level_name": state.access.node(u.level).name,
            "clearance": u.clearance.value,
            "groups": sorted(state.directory.user_groups(u.id)),
            "label": user_label(state, u).to_json(),
        })
    return out


def q_workgroups(engine: Engine, user: int) -> list[dict]:
    state = engine.state
    return [{"id": w.id, "name": w.name, "members": sorted(w.members)}
            for w in (state.directory.workgroups[i]
                      for i in sorted(state.directory.workgroups))]


def q_grants(engine: Engine, user: int) -> list[dict]:
    state = engine.state
    require(check_access(state, user, Action.MANAGE_USERS))
    return [{"id": g.id, "user": g.user, "folder": g.folder,
             "lo": g.lo, "hi": g.hi}
            for g in (state.directory.grants[i]
                      for i in sorted(state.directory.grants))]


def q_matrix(engine: Engine, user: int, uids=None, handles=None,
             action: Action = Action.READ) -> list[dict]:
    state = engine.state
    require(check_access(state, user, Action.MANAGE_USERS))
    uids = list(uids) if uids else sorted(state.directory.users)
    handles = (list(handles) if handles
               else [d.handle for d in state.tree.documents()])
    rows = decision_matrix(state, uids, handles, action_of(action))
    return [{"user": u, "doc": d, "decision": dec} for u, d, dec in rows]


def q_sign_matrix(engine: Engine) -> list[dict]:
    return [{"role": name, "can_sign": ok}
            for name, ok in sign_matrix(engine.state)]


def _run_view(state: EngineState, run: routing.RouteRun) -> dict:
    route = state.routes.routes.get(run.route)
    view = {
        "doc": run.doc,
        "route": run.route,
        "route_name": route.name if route else "?",
        "status": run.status.value,
        "cursor": run.cursor,
        "visits": run.visits,
        "history": [{"user": u, "action": a, "step": i} for u, a, i in run.history],
    }
    if route is not None and run.status is RunStatus.ACTIVE:
        if route.kind == "explicit":
            step = route.steps[run.cursor]
            view["pending"] = {
                "kind": "user" if step.by_user else "role",
                "selector": step.selector,
                "action": step.action.value,
            }
        else:
            stage = route.stages[run.cursor]
            view["pending"] = {
                "kind": "role", "selector": stage.role,
                "action": routing.pending_action(run, route).value,
                "min": stage.min_visits, "max": stage.max_visits,
            }
    return view


def q_trace(engine: Engine, user: int, handle: int) -> dict:
    state = engine.state
    state.tree.document(handle)
    require(check_access(state, user, Action.READ, handle), f"document {handle}")
    run = state.runs.get(handle)
    if run is None:
        raise UnknownTarget(f"route run for document {handle}")
    view = _run_view(state, run)
    view["candidates"] = q_candidates(engine, handle)
    return view


def q_candidates(engine: Engine, handle: int) -> list[int]:
    """Users eligible to work the pending step of a document's run."""
    state = engine.state
    run = state.runs.get(handle)
    if run is None or run.status is not RunStatus.ACTIVE:
        return []
    route = state.routes.routes.get(run.route)
    if route is None:
        return []
    return sorted(
        u.id for u in state.directory.users.values()
        if routing.eligible(run, route, u.id, u.role, state.roles))


def q_inbox(engine: Engine, user: int) -> list[dict]:
    """Pending steps of every active run the user is a candidate for.

    Candidacy only: whether the user also clears the access check is
    decided when they act (or shown by a preview)."""
    state = engine.state
    u = state.directory.user(user)
    rows = []
    for handle in sorted(state.runs):
        run = state.runs[handle]
        if run.status is not RunStatus.ACTIVE:
            continue
        route = state.routes.routes.get(run.route)
        if route is None or not routing.eligible(run, route, u.id, u.role,
                                                 state.roles):
            continue
        view = _run_view(state, run)
        rows.append({"doc": handle, "title": state.tree.document(handle).name,
                     "route_name": view["route_name"], "cursor": run.cursor,
                     "pending": view["pending"]})
    return rows


def q_preview(engine: Engine, user: int, handle: int, action=None) -> dict:
    """What-if view of a pending step: no event, no state change.

    Lists the step's candidates with the verdict each would get for the
    pending action (or a proposed one), so a client can show outcomes
    before anybody commits."""
    state = engine.state
    state.tree.document(handle)
    require(check_access(state, user, Action.READ, handle), f"document {handle}")
    run = state.runs.get(handle)
    if run is None:
        raise UnknownTarget(f"route run for document {handle}")
    view = _run_view(state, run)
    pending = view.get("pending")
    if action:
        act = action_of(action)
    elif pending is not None:
        act = Action(pending["action"])
    else:
        act = Action.MODIFY
    view["action"] = act.value
    view["verdicts"] = [
        {"user": cid, "name": state.directory.user(cid).name,
         "decision": str(check_access(state, cid, act, handle))}
        for cid in q_candidates(engine, handle)]
    return view


def q_audit_tail(engine: Engine, user: int, n: int = 20) -> list[dict]:
    require(check_access(engine.state, user, Action.MANAGE_USERS))
    if engine.audit is None:
        return []
    return engine.audit.tail(n)


def q_routes(engine: Engine) -> list[dict]:
    state = engine.state
    out = []
    for rid in sorted(state.routes.routes):
        r = state.routes.routes[rid]
        row = {"id": r.id, "name": r.name, "applies_to": r.applies_to,
               "class_name": state.docs.node(r.applies_to).name
               if r.applies_to in state.docs.nodes else "?",
               "kind": r.kind, "terminal": r.final_action().value}
        if r.kind == "explicit":
            row["steps"] = [{"kind": "user" if s.by_user else "role",
                             "selector": s.selector, "action": s.action.value}
                            for s in r.steps]
        else:
            row["stages"] = [{"role": st.role, "min": st.min_visits,
                              "max": st.max_visits} for st in r.stages]
        out.append(row)
    return out
