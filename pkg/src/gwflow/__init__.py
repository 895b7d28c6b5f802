"""Groupware document workflow engine.

Class hierarchies with subtype reasoning, a security flow lattice over
document labels, workgroup/ACL/grant access control with audited
denials, hybrid document routing, and an event-sourced tree store
behind a single-writer HTTP service and CLI.
"""

from .access import Action, Decision, Directory, TreeGrant, User, Workgroup, check_access
from .engine import Engine
from .errors import EngineError
from .hierarchy import Hierarchy, HierarchyKind
from .lattice import FlowLattice, Label, Secrecy
from .routing import Route, RouteRegistry, RouteRun, RunStatus, Stage, Step
from .state import EngineState
from .store import BlobStore, DocStatus, Document, Folder, Tree

__version__ = "0.1.0"

__all__ = [
    "Action",
    "BlobStore",
    "Decision",
    "Directory",
    "DocStatus",
    "Document",
    "Engine",
    "EngineError",
    "EngineState",
    "FlowLattice",
    "Folder",
    "Hierarchy",
    "HierarchyKind",
    "Label",
    "Route",
    "RouteRegistry",
    "RouteRun",
    "RunStatus",
    "Secrecy",
    "Stage",
    "Step",
    "Tree",
    "TreeGrant",
    "User",
    "Workgroup",
    "check_access",
    "__version__",
]
