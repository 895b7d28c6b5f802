"""Document tree and content store.

Folders and documents live in one tree. Handles are dense positive
integers assigned in creation order and never reused; the root folder is
handle 1 and carries the parent sentinel 0. Position queries (level,
pre-order index) are derived from the tree on demand, never stored.

Document bodies are kept in a content-addressed blob store keyed by the
SHA-256 of the text, so identical revisions share storage and a document
record only ever holds a digest.
"""

from __future__ import annotations

import base64
import hashlib
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    DuplicateSibling,
    MalformedInput,
    ParentNotFolder,
    RootRemoval,
    UnknownHandle,
    UnknownTarget,
)
from .hierarchy import check_text_field
from .lattice import Label

ROOT_HANDLE = 1
NO_PARENT = 0


class DocStatus(str, Enum):
    DRAFT = "Draft"
    ROUTED = "Routed"
    SIGNED = "Signed"
    ARCHIVED = "Archived"


@dataclass
class Folder:
    handle: int
    parent: int
    name: str
    groups: set[int] = field(default_factory=set)  # attached workgroups


@dataclass
class Document:
    handle: int
    parent: int
    name: str
    doc_class: int
    label: Label
    owner: int
    status: DocStatus = DocStatus.DRAFT
    digest: str = ""
    acl: set[int] = field(default_factory=set)  # named readers, confidential only
    signed_by: set[int] = field(default_factory=set)


class Tree:
    def __init__(self, root_name: str = "Root"):
        self.nodes: dict[int, Folder | Document] = {}
        self._next = ROOT_HANDLE
        root = Folder(self._take(), NO_PARENT, check_text_field(root_name))
        self.nodes[root.handle] = root
        self.root = root.handle

    def _take(self) -> int:
        h = self._next
        self._next += 1
        return h

    # --- accessors -------------------------------------------------------

    def node(self, handle: int) -> Folder | Document:
        try:
            return self.nodes[handle]
        except (KeyError, TypeError):
            raise UnknownHandle(str(handle)) from None

    def folder(self, handle: int) -> Folder:
        n = self.node(handle)
        if not isinstance(n, Folder):
            raise UnknownTarget(f"folder {handle}")
        return n

    def document(self, handle: int) -> Document:
        n = self.node(handle)
        if not isinstance(n, Document):
            raise UnknownTarget(f"document {handle}")
        return n

    def children(self, handle: int) -> list[int]:
        self.node(handle)
        return sorted(h for h, n in self.nodes.items() if n.parent == handle)

    def documents(self) -> list[Document]:
        return [n for _, n in sorted(self.nodes.items()) if isinstance(n, Document)]

    def folders(self) -> list[Folder]:
        return [n for _, n in sorted(self.nodes.items()) if isinstance(n, Folder)]

    # --- derived position --------------------------------------------------

    def level(self, handle: int) -> int:
        """Distance from the root, with the root itself at level 1."""
        n = self.node(handle)
        depth = 1
        while n.parent != NO_PARENT:
            n = self.nodes[n.parent]
            depth += 1
        return depth

    def preorder(self) -> list[int]:
        """Depth-first walk from the root, children in handle order."""
        out: list[int] = []
        stack = [self.root]
        while stack:
            cur = stack.pop()
            out.append(cur)
            stack.extend(reversed(self.children(cur)))
        return out

    def index(self, handle: int) -> int:
        """1-based position of the handle in the pre-order walk."""
        self.node(handle)
        return self.preorder().index(handle) + 1

    def path(self, handle: int) -> str:
        parts = []
        n = self.node(handle)
        while True:
            parts.append(n.name)
            if n.parent == NO_PARENT:
                break
            n = self.nodes[n.parent]
        return "/".join(reversed(parts))

    def subtree(self, handle: int) -> list[int]:
        """Handles under a node (inclusive), in pre-order."""
        self.node(handle)
        out = []
        stack = [handle]
        while stack:
            cur = stack.pop()
            out.append(cur)
            stack.extend(reversed(self.children(cur)))
        return out

    def ancestors(self, handle: int) -> list[int]:
        """Handles from the node up to the root, inclusive."""
        chain = [self.node(handle).handle]
        while self.nodes[chain[-1]].parent != NO_PARENT:
            chain.append(self.nodes[chain[-1]].parent)
        return chain

    # --- mutation ----------------------------------------------------------

    def add_folder(self, name: str, parent: int) -> Folder:
        check_text_field(name)
        pn = self.node(parent)
        if not isinstance(pn, Folder):
            raise ParentNotFolder(str(parent))
        for h in self.children(parent):
            sib = self.nodes[h]
            if isinstance(sib, Folder) and sib.name == name:
                raise DuplicateSibling(f"folder {name!r} under {pn.name!r}")
        f = Folder(self._take(), parent, name)
        self.nodes[f.handle] = f
        return f

    def add_document(self, name: str, parent: int, doc_class: int,
                     label: Label, owner: int) -> Document:
        check_text_field(name)
        pn = self.node(parent)
        if not isinstance(pn, Folder):
            raise ParentNotFolder(str(parent))
        d = Document(self._take(), parent, name, doc_class, label, owner)
        self.nodes[d.handle] = d
        return d

    def remove(self, handle: int) -> list[int]:
        """Delete a node and everything beneath it; returns removed handles."""
        if handle == self.root:
            raise RootRemoval("store root")
        removed = self.subtree(handle)
        for h in removed:
            del self.nodes[h]
        return removed

    def move(self, handle: int, new_parent: int) -> None:
        n = self.node(handle)
        if handle == self.root:
            raise RootRemoval("store root")
        pn = self.node(new_parent)
        if not isinstance(pn, Folder):
            raise ParentNotFolder(str(new_parent))
        if new_parent in self.subtree(handle):
            raise MalformedInput(f"cannot move {handle} under its own subtree")
        n.parent = new_parent

    # --- serialization -------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"next|{self._next}"]
        for h in sorted(self.nodes):
            n = self.nodes[h]
            if isinstance(n, Folder):
                gs = ",".join(str(g) for g in sorted(n.groups))
                lines.append(f"{n.handle}|{n.parent}|folder|{n.name}|{gs}")
            else:
                gs = ",".join(str(g) for g in sorted(n.label.groups))
                acl = ",".join(str(u) for u in sorted(n.acl))
                signed = ",".join(str(u) for u in sorted(n.signed_by))
                lines.append(
                    f"{n.handle}|{n.parent}|document|{n.name}|{n.doc_class}"
                    f"|{n.label.level}|{n.label.secrecy.value}|{gs}"
                    f"|{n.status.value}|{n.owner}|{n.digest}|{acl}|{signed}"
                )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Tree":
        tree = cls.__new__(cls)
        tree.nodes = {}
        tree._next = 0
        tree.root = 0
        for raw in text.splitlines():
            if not raw.strip():
                continue
            parts = raw.split("|")
            if parts[0] == "next" and len(parts) == 2:
                tree._next = int(parts[1])
                continue
            if len(parts) == 5 and parts[2] == "folder":
                f = Folder(int(parts[0]), int(parts[1]), parts[3],
                           _int_set(parts[4]))
                tree.nodes[f.handle] = f
                if f.parent == NO_PARENT:
                    tree.root = f.handle
            elif len(parts) == 13 and parts[2] == "document":
                label = Label.from_text("|".join(parts[5:8]))
                d = Document(int(parts[0]), int(parts[1]), parts[3],
                             int(parts[4]), label, int(parts[9]),
                             DocStatus(parts[8]), parts[10],
                             _int_set(parts[11]), _int_set(parts[12]))
                tree.nodes[d.handle] = d
            else:
                raise MalformedInput(f"bad tree record: {raw!r}")
        if tree.root == 0:
            raise MalformedInput("tree text lacks a root folder")
        if tree._next == 0:
            tree._next = max(tree.nodes) + 1
        return tree


def _int_set(csv: str) -> set[int]:
    return {int(x) for x in csv.split(",") if x}


class BlobStore:
    """Immutable text blobs addressed by SHA-256 hex digest."""

    def __init__(self):
        self._blobs: dict[str, str] = {}

    def put(self, text: str) -> str:
        if not isinstance(text, str):
            raise MalformedInput("document content must be text")
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        self._blobs[digest] = text
        return digest

    def get(self, digest: str) -> str:
        try:
            return self._blobs[digest]
        except KeyError:
            raise UnknownTarget(f"blob {digest}") from None

    def has(self, digest: str) -> bool:
        return digest in self._blobs

    def sweep(self, live: set[str]) -> int:
        """Drop blobs not in the live set; returns how many were removed."""
        dead = [d for d in self._blobs if d not in live]
        for d in dead:
            del self._blobs[d]
        return len(dead)

    def to_text(self) -> str:
        lines = []
        for digest in sorted(self._blobs):
            body = base64.b64encode(self._blobs[digest].encode("utf-8")).decode("ascii")
            lines.append(f"{digest}|{body}")
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str) -> "BlobStore":
        bs = cls()
        for raw in text.splitlines():
            if not raw.strip():
                continue
            parts = raw.split("|")
            if len(parts) != 2:
                raise MalformedInput(f"bad blob record: {raw!r}")
            body = base64.b64decode(parts[1].encode("ascii")).decode("utf-8")
            bs._blobs[parts[0]] = body
        return bs
