"""Security flow lattice over document labels.

A label is a triple of

* an access-level class from the access hierarchy, with an adjoined
  synthetic bottom element below every leaf,
* a secrecy mark from the total order Public < Private < Confidential,
* a finite set of workgroup ids ordered by inclusion.

The triples form a product lattice: ``leq`` holds componentwise, ``join``
is (least common ancestor, max, union) and ``meet`` is (deeper class when
comparable else bottom, min, intersection). Flow from label a to label b
is permitted exactly when ``a <= b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import chain, combinations
from typing import Iterable, Iterator

from .errors import MalformedLabel, UnknownWorkgroup
from .hierarchy import Hierarchy, HierarchyKind

# Synthetic level below every access class. Never a valid class id.
LEVEL_BOTTOM = -1


class Secrecy(str, Enum):
    PUBLIC = "Public"
    PRIVATE = "Private"
    CONFIDENTIAL = "Confidential"

    @property
    def rank(self) -> int:
        return _SECRECY_RANK[self]


_SECRECY_RANK = {Secrecy.PUBLIC: 0, Secrecy.PRIVATE: 1, Secrecy.CONFIDENTIAL: 2}
_SECRECY_BY_RANK = {r: s for s, r in _SECRECY_RANK.items()}


@dataclass(frozen=True)
class Label:
    level: int
    secrecy: Secrecy
    groups: frozenset[int]

    def to_text(self) -> str:
        gs = ",".join(str(g) for g in sorted(self.groups))
        return f"{self.level}|{self.secrecy.value}|{gs}"

    @classmethod
    def from_text(cls, text: str) -> "Label":
        parts = text.split("|")
        if len(parts) != 3:
            raise MalformedLabel(text)
        try:
            level = int(parts[0])
            secrecy = Secrecy(parts[1])
            groups = frozenset(int(g) for g in parts[2].split(",") if g)
        except (ValueError, KeyError):
            raise MalformedLabel(text) from None
        return cls(level, secrecy, groups)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "secrecy": self.secrecy.value,
            "groups": sorted(self.groups),
        }

    @classmethod
    def from_json(cls, obj) -> "Label":
        if not isinstance(obj, dict):
            raise MalformedLabel(repr(obj))
        try:
            level = obj["level"]
            secrecy = Secrecy(obj["secrecy"])
            groups = frozenset(obj.get("groups", ()))
        except (KeyError, ValueError, TypeError):
            raise MalformedLabel(repr(obj)) from None
        if not isinstance(level, int) or not all(isinstance(g, int) for g in groups):
            raise MalformedLabel(repr(obj))
        return cls(level, secrecy, groups)


class FlowLattice:
    """Label ordering bound to an access hierarchy and a workgroup universe."""

    def __init__(self, access: Hierarchy, universe: Iterable[int] = ()):
        if access.kind is not HierarchyKind.ACCESS:
            raise MalformedLabel(f"flow lattice needs an access hierarchy, got {access.kind.value}")
        self.access = access
        self.universe = frozenset(universe)

    # --- construction ----------------------------------------------------

    def label(self, level, secrecy, groups: Iterable[int] = ()) -> Label:
        """Validate and normalize a label against the hierarchy and universe."""
        if level == LEVEL_BOTTOM:
            lid = LEVEL_BOTTOM
        else:
            lid = self.access.resolve(level)
        sec = Secrecy(secrecy)
        gset = frozenset(groups)
        unknown = gset - self.universe
        if unknown:
            raise UnknownWorkgroup(f"{sorted(unknown)}")
        return Label(lid, sec, gset)

    def bottom(self) -> Label:
        return Label(LEVEL_BOTTOM, Secrecy.PUBLIC, frozenset())

    def top(self) -> Label:
        return Label(self.access.root_id, Secrecy.CONFIDENTIAL, self.universe)

    def labels(self) -> Iterator[Label]:
        """Every label in the lattice. Exponential in the universe size;
        intended for small demonstration configurations only."""
        levels = [LEVEL_BOTTOM] + sorted(self.access.nodes)
        gs = sorted(self.universe)
        subsets = chain.from_iterable(combinations(gs, k) for k in range(len(gs) + 1))
        for subset in subsets:
            for level in levels:
                for rank in range(3):
                    yield Label(level, _SECRECY_BY_RANK[rank], frozenset(subset))

    # --- order -----------------------------------------------------------

    def _level_leq(self, a: int, b: int) -> bool:
        if a == LEVEL_BOTTOM:
            return True
        if b == LEVEL_BOTTOM:
            return False
        return self.access.is_subtype(a, b)

    def leq(self, a: Label, b: Label) -> bool:
        return (
            self._level_leq(a.level, b.level)
            and a.secrecy.rank <= b.secrecy.rank
            and a.groups <= b.groups
        )

    def can_flow(self, src: Label, dst: Label) -> bool:
        """Information may move from src to dst exactly when src <= dst."""
        return self.leq(src, dst)

    # --- bounds ------------------------------------------------------------

    def join(self, a: Label, b: Label) -> Label:
        if a.level == LEVEL_BOTTOM:
            level = b.level
        elif b.level == LEVEL_BOTTOM:
            level = a.level
        else:
            level = self.access.least_common_ancestor(a.level, b.level)
        rank = max(a.secrecy.rank, b.secrecy.rank)
        return Label(level, _SECRECY_BY_RANK[rank], a.groups | b.groups)

    def meet(self, a: Label, b: Label) -> Label:
        if a.level == LEVEL_BOTTOM or b.level == LEVEL_BOTTOM:
            level = LEVEL_BOTTOM
        elif self.access.is_subtype(a.level, b.level):
            level = a.level
        elif self.access.is_subtype(b.level, a.level):
            level = b.level
        else:
            level = LEVEL_BOTTOM
        rank = min(a.secrecy.rank, b.secrecy.rank)
        return Label(level, _SECRECY_BY_RANK[rank], a.groups & b.groups)

    def validate(self, label: Label) -> Label:
        """Re-check a deserialized label against the current configuration."""
        return self.label(label.level, label.secrecy, label.groups)


def parse_secrecy(value: str) -> Secrecy:
    try:
        return Secrecy(value)
    except ValueError:
        raise MalformedLabel(f"unknown secrecy mark {value!r}") from None
