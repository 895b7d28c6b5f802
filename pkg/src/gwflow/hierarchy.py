"""ISA class hierarchies for document classes, roles and access levels.

Each hierarchy is a strict single-inheritance tree with one root and a
mandatory ``Other`` child of the root that absorbs exceptions. Class ids
are dense unsigned integers, unique within a hierarchy and never reused
after removal.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import (
    DuplicateSibling,
    MalformedInput,
    RootRemoval,
    UnknownClass,
    UnknownParent,
)

# Parent sentinel for the root class (mirrors the tree store's root-parent 0).
ROOT_PARENT = 0

OTHER_NAME = "Other"


class HierarchyKind(str, Enum):
    DOCUMENT = "document"
    ROLE = "role"
    ACCESS = "access"


@dataclass(frozen=True)
class ClassNode:
    id: int
    name: str
    parent: int  # ROOT_PARENT for the root
    kind: HierarchyKind


def check_text_field(value: str, what: str = "name") -> str:
    """Validate a serialized text field: non-empty, no '|' and no newlines."""
    if not isinstance(value, str) or not value:
        raise MalformedInput(f"{what} must be a non-empty string")
    if "|" in value or "\n" in value or "\r" in value:
        raise MalformedInput(f"{what} must not contain '|' or line breaks: {value!r}")
    return value


class Hierarchy:
    """Single-rooted ISA tree answering subtype and subsumption queries."""

    def __init__(self, kind: HierarchyKind):
        self.kind = HierarchyKind(kind)
        self.nodes: dict[int, ClassNode] = {}
        self.root_id = 0
        self.other_id = 0
        self._next_id = 1

    @classmethod
    def create(cls, kind: HierarchyKind, root_name: str) -> "Hierarchy":
        """Build a hierarchy with its root and the auto-created Other child."""
        h = cls(kind)
        root = ClassNode(h._take_id(), check_text_field(root_name), ROOT_PARENT, h.kind)
        h.nodes[root.id] = root
        h.root_id = root.id
        h.other_id = h.add_class(OTHER_NAME, root.id)
        return h

    def _take_id(self) -> int:
        cid = self._next_id
        self._next_id += 1
        return cid

    # --- lookups -------------------------------------------------------

    def node(self, a: int) -> ClassNode:
        try:
            return self.nodes[a]
        except (KeyError, TypeError):
            raise UnknownClass(f"{self.kind.value} class {a!r}") from None

    def find(self, name: str) -> int:
        """Resolve a class by name. Names are only guaranteed unique among
        siblings, so an ambiguous name is rejected rather than guessed at."""
        hits = [n.id for n in self.nodes.values() if n.name == name]
        if not hits:
            raise UnknownClass(f"{self.kind.value} class named {name!r}")
        if len(hits) > 1:
            raise MalformedInput(f"class name {name!r} is ambiguous in {self.kind.value} hierarchy")
        return hits[0]

    def resolve(self, ref) -> int:
        """Accept either a class id or a class name."""
        if isinstance(ref, bool):
            raise UnknownClass(repr(ref))
        if isinstance(ref, int):
            return self.node(ref).id
        if isinstance(ref, str):
            if ref.isdigit():
                return self.node(int(ref)).id
            return self.find(ref)
        raise UnknownClass(repr(ref))

    def children(self, a: int) -> list[int]:
        self.node(a)
        return sorted(n.id for n in self.nodes.values() if n.parent == a and n.id != a)

    def parent_chain(self, a: int) -> list[int]:
        """Ids from a up to the root, inclusive."""
        chain = [self.node(a).id]
        while chain[-1] != self.root_id:
            chain.append(self.nodes[chain[-1]].parent)
        return chain

    def depth(self, a: int) -> int:
        return len(self.parent_chain(a))

    # --- core operations -------------------------------------------------

    def add_class(self, name: str, parent: int) -> int:
        check_text_field(name)
        if parent not in self.nodes:
            raise UnknownParent(f"{self.kind.value} class {parent!r}")
        for sib in self.nodes.values():
            if sib.parent == parent and sib.id != self.root_id and sib.name == name:
                raise DuplicateSibling(f"{name!r} under {self.nodes[parent].name!r}")
        node = ClassNode(self._take_id(), name, parent, self.kind)
        self.nodes[node.id] = node
        return node.id

    def is_subtype(self, a: int, b: int) -> bool:
        """True iff b lies on the parent chain from a to the root (reflexive)."""
        self.node(b)
        return b in self.parent_chain(a)

    def least_common_ancestor(self, a: int, b: int) -> int:
        ancestors_a = set(self.parent_chain(a))
        for cid in self.parent_chain(b):
            if cid in ancestors_a:
                return cid
        return self.root_id  # unreachable on a well-formed tree

    def descendants(self, a: int) -> set[int]:
        """All ids x with is_subtype(x, a), including a itself."""
        self.node(a)
        out = {a}
        frontier = [a]
        while frontier:
            cur = frontier.pop()
            for n in self.nodes.values():
                if n.parent == cur and n.id != self.root_id and n.id not in out:
                    out.add(n.id)
                    frontier.append(n.id)
        return out

    def remove_class(self, a: int) -> set[int]:
        """Remove a class and its whole subtree; returns the removed id set.

        The root and the Other exception class are protected. In-use checks
        against live instances are the engine's responsibility.
        """
        self.node(a)
        if a == self.root_id or a == self.other_id:
            raise RootRemoval(self.nodes[a].name)
        removed = self.descendants(a)
        for cid in removed:
            del self.nodes[cid]
        return removed

    # --- serialization ---------------------------------------------------

    def to_text(self) -> str:
        """Counter line, then one record per node ``id|kind|parent|name``
        sorted by id. Carrying the counter keeps removed ids retired
        across a snapshot and reload."""
        lines = [f"next|{self._next_id}"]
        for cid in sorted(self.nodes):
            n = self.nodes[cid]
            lines.append(f"{n.id}|{n.kind.value}|{n.parent}|{n.name}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Hierarchy":
        nodes: dict[int, ClassNode] = {}
        kind = None
        next_id = None
        for raw in text.splitlines():
            if not raw.strip():
                continue
            parts = raw.split("|")
            if len(parts) == 2 and parts[0] == "next":
                next_id = int(parts[1])
                continue
            if len(parts) != 4:
                raise MalformedInput(f"bad hierarchy record: {raw!r}")
            cid, k, parent, name = int(parts[0]), HierarchyKind(parts[1]), int(parts[2]), parts[3]
            if kind is None:
                kind = k
            elif kind != k:
                raise MalformedInput("mixed hierarchy kinds in one record set")
            nodes[cid] = ClassNode(cid, name, parent, k)
        if kind is None:
            raise MalformedInput("empty hierarchy text")
        h = cls(kind)
        h.nodes = nodes
        roots = [n.id for n in nodes.values() if n.parent == ROOT_PARENT]
        if len(roots) != 1:
            raise MalformedInput(f"hierarchy must have exactly one root, found {len(roots)}")
        h.root_id = roots[0]
        others = [n.id for n in nodes.values()
                  if n.parent == h.root_id and n.name == OTHER_NAME]
        if not others:
            raise MalformedInput("hierarchy lacks the Other exception class")
        h.other_id = others[0]
        h._next_id = next_id if next_id is not None else max(nodes) + 1
        h._check_tree()
        return h

    def _check_tree(self) -> None:
        # Every parent link must terminate at the root without cycles.
        for cid in self.nodes:
            seen = set()
            cur = cid
            while cur != self.root_id:
                if cur in seen:
                    raise MalformedInput(f"cycle through class {cid}")
                seen.add(cur)
                parent = self.nodes[cur].parent
                if parent not in self.nodes:
                    raise MalformedInput(f"class {cur} has missing parent {parent}")
                cur = parent
