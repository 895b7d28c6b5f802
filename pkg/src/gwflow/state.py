"""Whole-engine state: hierarchies, directory, tree, blobs and routes.

The state serializes to a sectioned, line-oriented text whose SHA-256 is
the state digest. Two states are behaviourally identical exactly when
their digests match, which is what the persistence layer leans on to
prove that replaying the event log and loading a snapshot agree.
"""

from __future__ import annotations

import hashlib
import re

from .access import Directory
from .errors import MalformedInput
from .hierarchy import Hierarchy, HierarchyKind
from .lattice import FlowLattice
from .routing import RouteRegistry, RouteRun, runs_from_text, runs_to_text
from .store import BlobStore, Tree

_SECTION = re.compile(r"^\[([a-z]+)\]$")

DOC_ROOT_NAME = "Document"
ROLE_ROOT_NAME = "Role"
ACCESS_ROOT_NAME = "AccessLevel"


class EngineState:
    def __init__(self, docs: Hierarchy, roles: Hierarchy, access: Hierarchy,
                 directory: Directory, tree: Tree, blobs: BlobStore,
                 routes: RouteRegistry, runs: dict[int, RouteRun],
                 sign_required: set[int]):
        self.docs = docs
        self.roles = roles
        self.access = access
        self.directory = directory
        self.tree = tree
        self.blobs = blobs
        self.routes = routes
        self.runs = runs
        self.sign_required = sign_required

    @classmethod
    def empty(cls) -> "EngineState":
        """The canonical starting point every installation shares: three
        hierarchies holding just their root and Other classes, an empty
        directory and a bare root folder."""
        return cls(
            docs=Hierarchy.create(HierarchyKind.DOCUMENT, DOC_ROOT_NAME),
            roles=Hierarchy.create(HierarchyKind.ROLE, ROLE_ROOT_NAME),
            access=Hierarchy.create(HierarchyKind.ACCESS, ACCESS_ROOT_NAME),
            directory=Directory(),
            tree=Tree(),
            blobs=BlobStore(),
            routes=RouteRegistry(),
            runs={},
            sign_required=set(),
        )

    def hierarchy(self, kind) -> Hierarchy:
        kind = HierarchyKind(kind)
        return {
            HierarchyKind.DOCUMENT: self.docs,
            HierarchyKind.ROLE: self.roles,
            HierarchyKind.ACCESS: self.access,
        }[kind]

    def lattice(self) -> FlowLattice:
        return FlowLattice(self.access, self.directory.workgroups.keys())

    # --- serialization -----------------------------------------------------

    def to_text(self) -> str:
        sections = [
            ("docs", self.docs.to_text()),
            ("roles", self.roles.to_text()),
            ("access", self.access.to_text()),
            ("directory", self.directory.to_text()),
            ("tree", self.tree.to_text()),
            ("blobs", self.blobs.to_text()),
            ("routes", self.routes.to_text()),
            ("runs", runs_to_text(self.runs)),
            ("signreq", ",".join(str(c) for c in sorted(self.sign_required)) + "\n"),
        ]
        parts = []
        for name, body in sections:
            parts.append(f"[{name}]\n")
            parts.append(body)
        return "".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "EngineState":
        bodies: dict[str, list[str]] = {}
        current: list[str] | None = None
        for line in text.splitlines():
            m = _SECTION.match(line)
            if m:
                current = bodies.setdefault(m.group(1), [])
                continue
            if current is None:
                raise MalformedInput(f"state text before any section: {line!r}")
            current.append(line)

        def body(name: str) -> str:
            if name not in bodies:
                raise MalformedInput(f"state text lacks section [{name}]")
            return "\n".join(bodies[name]) + "\n"

        signreq_csv = body("signreq").strip()
        return cls(
            docs=Hierarchy.from_text(body("docs")),
            roles=Hierarchy.from_text(body("roles")),
            access=Hierarchy.from_text(body("access")),
            directory=Directory.from_text(body("directory")),
            tree=Tree.from_text(body("tree")),
            blobs=BlobStore.from_text(body("blobs")),
            routes=RouteRegistry.from_text(body("routes")),
            runs=runs_from_text(body("runs")),
            sign_required={int(x) for x in signreq_csv.split(",") if x},
        )

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()
