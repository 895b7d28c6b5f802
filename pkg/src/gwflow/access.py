"""Users, workgroups, tree grants and the access decision procedure.

Rights come from three places, checked in a fixed order:

1. role gates keyed to well-known role classes (signing needs a Boss
   descendant, administration needs the matching admin role),
2. the per-secrecy rule of the target document (Confidential is ACL-only,
   Private needs owning-workgroup membership, Public needs membership in a
   workgroup attached along the folder chain),
3. tree grants, which can rescue a failed Read by covering the document's
   subtree and tree level.

A passed rule is still subject to the flow check: the document label must
sit at or below the user's own label in the security lattice. Every deny
carries a machine-readable reason code.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Iterable

from .errors import (
    AccessDenied,
    DuplicateSibling,
    MalformedInput,
    UnknownTarget,
    UnknownUser,
    UnknownWorkgroup,
)
from .hierarchy import check_text_field
from .lattice import Label, Secrecy
from .store import DocStatus, Document, Folder

if TYPE_CHECKING:  # pragma: no cover
    from .state import EngineState

log = logging.getLogger(__name__)

# Principal 0 is the engine itself: bootstrap and replay bypass policy.
SYSTEM_USER = 0

# Role class names that carry built-in rights. Configurations that omit a
# name simply have nobody holding the matching right.
ROLE_BOSS = "Boss"
ROLE_EMPLOYEE = "Employee"
ROLE_ADMIN = "Admin"
ROLE_SECURITY_ADM = "Security_adm"
ROLE_SYSTEM_ADM = "System_adm"


class Action(str, Enum):
    READ = "Read"
    CREATE = "Create"
    MODIFY = "Modify"
    SIGN = "Sign"
    ROUTE = "Route"
    ARCHIVE = "Archive"
    DELETE = "Delete"
    MANAGE_USERS = "ManageUsers"
    MANAGE_STORE = "ManageStore"


def action_of(raw) -> "Action":
    """Parse a wire action value; unknown strings are client errors."""
    try:
        return Action(raw)
    except ValueError:
        raise MalformedInput(f"unknown action {raw!r}") from None


REASON_NOT_IN_WORKGROUP = "NotInWorkgroup"
REASON_NOT_ON_ACL = "NotOnAcl"
REASON_NO_SIGN_RIGHT = "NoSignRight"
REASON_FLOW_VIOLATION = "FlowViolation"
REASON_ADMIN_ONLY = "AdminOnly"
REASON_OUTSIDE_GRANT = "OutsideGrant"

DENY_REASONS = (
    REASON_NOT_IN_WORKGROUP,
    REASON_NOT_ON_ACL,
    REASON_NO_SIGN_RIGHT,
    REASON_FLOW_VIOLATION,
    REASON_ADMIN_ONLY,
    REASON_OUTSIDE_GRANT,
)


@dataclass(frozen=True)
class Decision:
    allowed: bool
    reason: str = ""

    def __str__(self) -> str:
        return "Allow" if self.allowed else f"Deny:{self.reason}"


ALLOW = Decision(True)


def deny(reason: str) -> Decision:
    return Decision(False, reason)


def require(decision: Decision, detail: str = "") -> None:
    """Raise AccessDenied carrying the decision's reason code."""
    if not decision.allowed:
        raise AccessDenied(decision.reason, detail)


@dataclass
class User:
    id: int
    name: str
    role: int       # role class id
    level: int      # access class id
    clearance: Secrecy


@dataclass
class Workgroup:
    id: int
    name: str
    members: set[int] = field(default_factory=set)


@dataclass
class TreeGrant:
    """Read window for one user over a folder subtree, bounded by tree level."""
    id: int
    user: int
    folder: int
    lo: int
    hi: int


class Directory:
    """Registry of users, workgroups and grants. Ids are never reused."""

    def __init__(self):
        self.users: dict[int, User] = {}
        self.workgroups: dict[int, Workgroup] = {}
        self.grants: dict[int, TreeGrant] = {}
        self._next_user = 1
        self._next_wg = 1
        self._next_grant = 1

    # --- users ---------------------------------------------------------

    def add_user(self, name: str, role: int, level: int, clearance: Secrecy) -> User:
        check_text_field(name)
        if any(u.name == name for u in self.users.values()):
            raise DuplicateSibling(f"user {name!r}")
        u = User(self._next_user, name, role, level, Secrecy(clearance))
        self._next_user += 1
        self.users[u.id] = u
        return u

    def user(self, uid: int) -> User:
        try:
            return self.users[uid]
        except (KeyError, TypeError):
            raise UnknownUser(str(uid)) from None

    def find_user(self, name: str) -> User:
        for u in self.users.values():
            if u.name == name:
                return u
        raise UnknownUser(name)

    def resolve_user(self, ref) -> User:
        if isinstance(ref, int) and not isinstance(ref, bool):
            return self.user(ref)
        if isinstance(ref, str):
            if ref.isdigit():
                return self.user(int(ref))
            return self.find_user(ref)
        raise UnknownUser(repr(ref))

    # --- workgroups -------------------------------------------------------

    def add_workgroup(self, name: str) -> Workgroup:
        check_text_field(name)
        if any(w.name == name for w in self.workgroups.values()):
            raise DuplicateSibling(f"workgroup {name!r}")
        w = Workgroup(self._next_wg, name)
        self._next_wg += 1
        self.workgroups[w.id] = w
        return w

    def workgroup(self, wid: int) -> Workgroup:
        try:
            return self.workgroups[wid]
        except (KeyError, TypeError):
            raise UnknownWorkgroup(str(wid)) from None

    def resolve_workgroup(self, ref) -> Workgroup:
        if isinstance(ref, int) and not isinstance(ref, bool):
            return self.workgroup(ref)
        if isinstance(ref, str):
            if ref.isdigit():
                return self.workgroup(int(ref))
            for w in self.workgroups.values():
                if w.name == ref:
                    return w
        raise UnknownWorkgroup(repr(ref))

    def attach(self, uid: int, wid: int) -> None:
        self.user(uid)
        self.workgroup(wid).members.add(uid)

    def detach(self, uid: int, wid: int) -> None:
        self.user(uid)
        wg = self.workgroup(wid)
        if uid not in wg.members:
            raise UnknownTarget(f"user {uid} in workgroup {wid}")
        wg.members.discard(uid)

    def user_groups(self, uid: int) -> frozenset[int]:
        return frozenset(w.id for w in self.workgroups.values() if uid in w.members)

    # --- grants ------------------------------------------------------------

    def add_grant(self, uid: int, folder: int, lo: int, hi: int) -> TreeGrant:
        self.user(uid)
        if lo < 1 or hi < lo:
            raise MalformedInput(f"grant level range [{lo},{hi}] is empty or negative")
        g = TreeGrant(self._next_grant, uid, folder, lo, hi)
        self._next_grant += 1
        self.grants[g.id] = g
        return g

    def revoke_grant(self, gid: int) -> TreeGrant:
        try:
            return self.grants.pop(gid)
        except (KeyError, TypeError):
            raise UnknownTarget(f"grant {gid}") from None

    def grants_for(self, uid: int) -> list[TreeGrant]:
        return sorted((g for g in self.grants.values() if g.user == uid),
                      key=lambda g: g.id)

    # --- serialization -------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"next|{self._next_user}|{self._next_wg}|{self._next_grant}"]
        for uid in sorted(self.users):
            u = self.users[uid]
            lines.append(f"U|{u.id}|{u.name}|{u.role}|{u.level}|{u.clearance.value}")
        for wid in sorted(self.workgroups):
            w = self.workgroups[wid]
            ms = ",".join(str(m) for m in sorted(w.members))
            lines.append(f"W|{w.id}|{w.name}|{ms}")
        for gid in sorted(self.grants):
            g = self.grants[gid]
            lines.append(f"G|{g.id}|{g.user}|{g.folder}|{g.lo}|{g.hi}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Directory":
        d = cls()
        for raw in text.splitlines():
            if not raw.strip():
                continue
            parts = raw.split("|")
            if parts[0] == "next" and len(parts) == 4:
                d._next_user, d._next_wg, d._next_grant = (int(x) for x in parts[1:])
            elif parts[0] == "U" and len(parts) == 6:
                u = User(int(parts[1]), parts[2], int(parts[3]), int(parts[4]),
                         Secrecy(parts[5]))
                d.users[u.id] = u
            elif parts[0] == "W" and len(parts) == 4:
                members = {int(x) for x in parts[3].split(",") if x}
                w = Workgroup(int(parts[1]), parts[2], members)
                d.workgroups[w.id] = w
            elif parts[0] == "G" and len(parts) == 6:
                g = TreeGrant(*(int(x) for x in parts[1:]))
                d.grants[g.id] = g
            else:
                raise MalformedInput(f"bad directory record: {raw!r}")
        return d


# --- decision procedure ----------------------------------------------------


def _role_named(state: "EngineState", name: str) -> int | None:
    hits = [n.id for n in state.roles.nodes.values() if n.name == name]
    return hits[0] if len(hits) == 1 else None


def _has_role(state: "EngineState", user: User, name: str) -> bool:
    rid = _role_named(state, name)
    return rid is not None and state.roles.is_subtype(user.role, rid)


def is_staff(state: "EngineState", user: User) -> bool:
    return _has_role(state, user, ROLE_EMPLOYEE) or _has_role(state, user, ROLE_ADMIN)


def can_sign(state: "EngineState", user: User) -> bool:
    return _has_role(state, user, ROLE_BOSS)


def user_label(state: "EngineState", user: User) -> Label:
    return Label(user.level, user.clearance, state.directory.user_groups(user.id))


def attached_groups(state: "EngineState", handle: int) -> frozenset[int]:
    """Workgroups attached to any folder on the path from the node to the root."""
    out: set[int] = set()
    for h in state.tree.ancestors(handle):
        n = state.tree.nodes[h]
        if isinstance(n, Folder):
            out |= n.groups
    return frozenset(out)


def _grant_check(state: "EngineState", user: User, handle: int) -> str:
    """Returns 'allow', 'range' (covered subtree, level outside window)
    or 'none'."""
    level = state.tree.level(handle)
    covered = False
    for g in state.directory.grants_for(user.id):
        if g.folder not in state.tree.nodes:
            continue
        if handle in state.tree.subtree(g.folder):
            covered = True
            if g.lo <= level <= g.hi:
                return "allow"
    return "range" if covered else "none"


def _secrecy_rule(state: "EngineState", user: User, doc: Document) -> Decision:
    if doc.label.secrecy is Secrecy.CONFIDENTIAL:
        if user.id in doc.acl:
            return ALLOW
        return deny(REASON_NOT_ON_ACL)
    if doc.label.secrecy is Secrecy.PRIVATE:
        if state.directory.user_groups(user.id) & doc.label.groups:
            return ALLOW
        return deny(REASON_NOT_IN_WORKGROUP)
    # Public: membership in a workgroup attached along the folder chain.
    if state.directory.user_groups(user.id) & attached_groups(state, doc.handle):
        return ALLOW
    return deny(REASON_NOT_IN_WORKGROUP)


def _flow_gate(state: "EngineState", user: User, doc_label: Label) -> Decision:
    if state.lattice().can_flow(doc_label, user_label(state, user)):
        return ALLOW
    return deny(REASON_FLOW_VIOLATION)


def _read_folder(state: "EngineState", user: User, folder: Folder) -> Decision:
    if is_staff(state, user):
        return ALLOW
    # Guests may see folders on the way to, or inside, a granted subtree.
    level = state.tree.level(folder.handle)
    covered = False
    for g in state.directory.grants_for(user.id):
        if g.folder not in state.tree.nodes:
            continue
        if folder.handle in state.tree.ancestors(g.folder):
            return ALLOW
        if folder.handle in state.tree.subtree(g.folder):
            covered = True
            if g.lo <= level <= g.hi:
                return ALLOW
    return deny(REASON_OUTSIDE_GRANT if covered else REASON_NOT_IN_WORKGROUP)


def check_access(state: "EngineState", uid: int, action: Action,
                 target: int | None = None, label: Label | None = None) -> Decision:
    """Single policy entry point. ``target`` is a tree handle for document
    and folder actions; ``label`` is the proposed label for Create."""
    if uid == SYSTEM_USER:
        return ALLOW
    user = state.directory.user(uid)
    action = Action(action)

    if action is Action.MANAGE_USERS:
        return ALLOW if _has_role(state, user, ROLE_SECURITY_ADM) else deny(REASON_ADMIN_ONLY)
    if action is Action.MANAGE_STORE:
        return ALLOW if _has_role(state, user, ROLE_SYSTEM_ADM) else deny(REASON_ADMIN_ONLY)

    if action is Action.CREATE:
        folder = state.tree.folder(target)
        if not is_staff(state, user):
            return deny(REASON_NOT_IN_WORKGROUP)
        if not state.directory.user_groups(user.id) & attached_groups(state, folder.handle):
            return deny(REASON_NOT_IN_WORKGROUP)
        if label is not None:
            return _flow_gate(state, user, label)
        return ALLOW

    node = state.tree.node(target)
    if isinstance(node, Folder):
        if action is Action.READ:
            return _read_folder(state, user, node)
        if action is Action.DELETE:
            return ALLOW if _has_role(state, user, ROLE_SYSTEM_ADM) else deny(REASON_ADMIN_ONLY)
        return deny(REASON_ADMIN_ONLY)

    doc = node

    if action is Action.ARCHIVE:
        return ALLOW if _has_role(state, user, ROLE_SYSTEM_ADM) else deny(REASON_ADMIN_ONLY)
    if action is Action.DELETE:
        if _has_role(state, user, ROLE_SYSTEM_ADM):
            return ALLOW
        if doc.owner == user.id and doc.status is DocStatus.DRAFT:
            return ALLOW
        return deny(REASON_ADMIN_ONLY)

    if action is Action.SIGN and not can_sign(state, user):
        return deny(REASON_NO_SIGN_RIGHT)
    if action in (Action.MODIFY, Action.ROUTE) and not is_staff(state, user):
        return deny(REASON_NOT_IN_WORKGROUP)

    rule = _secrecy_rule(state, user, doc)
    if not rule.allowed:
        if action is Action.READ and rule.reason == REASON_NOT_IN_WORKGROUP:
            got = _grant_check(state, user, doc.handle)
            if got == "allow":
                return _flow_gate(state, user, doc.label)
            if got == "range":
                return deny(REASON_OUTSIDE_GRANT)
        return rule

    return _flow_gate(state, user, doc.label)


def decision_matrix(state: "EngineState", uids: Iterable[int],
                    handles: Iterable[int],
                    action: Action = Action.READ) -> list[tuple[str, str, str]]:
    """Rows of (user name, document name, decision) for reporting."""
    rows = []
    for uid in uids:
        u = state.directory.user(uid)
        for h in handles:
            d = state.tree.document(h)
            rows.append((u.name, d.name, str(check_access(state, uid, action, h))))
    return rows


def sign_matrix(state: "EngineState") -> list[tuple[str, bool]]:
    """(role class name, may sign) for every role class, by Boss descent."""
    boss = _role_named(state, ROLE_BOSS)
    out = []
    for rid in sorted(state.roles.nodes):
        node = state.roles.nodes[rid]
        ok = boss is not None and state.roles.is_subtype(rid, boss)
        out.append((node.name, ok))
    return out
