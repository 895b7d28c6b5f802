"""Engine error types and the stable reason-code contract.

Every failure the engine can report carries a machine-readable ``code``
that appears verbatim in API error bodies, the denial audit stream and
CLI stderr. ``http_status`` and ``exit_code`` drive the service and CLI
mappings (0 success, 2 policy denial, 3 not-found, 4 malformed input).
"""

from __future__ import annotations


class EngineError(Exception):
    code = "EngineError"
    http_status = 500
    exit_code = 1

    def __init__(self, detail: str = ""):
        self.detail = detail
        super().__init__(f"{self.code}: {detail}" if detail else self.code)


class NotFoundError(EngineError):
    http_status = 404
    exit_code = 3


class PolicyError(EngineError):
    http_status = 403
    exit_code = 2


class ConflictError(EngineError):
    http_status = 409
    exit_code = 4


class MalformedError(EngineError):
    http_status = 400
    exit_code = 4


# --- not-found family -------------------------------------------------------

class UnknownClass(NotFoundError):
    code = "UnknownClass"


class UnknownParent(NotFoundError):
    code = "UnknownParent"


class UnknownHandle(NotFoundError):
    code = "UnknownHandle"


class UnknownUser(NotFoundError):
    code = "UnknownUser"


class UnknownTarget(NotFoundError):
    code = "UnknownTarget"


class UnknownWorkgroup(NotFoundError):
    code = "UnknownWorkgroup"


# --- policy family ----------------------------------------------------------

class AdminOnly(PolicyError):
    code = "AdminOnly"


class AccessDenied(PolicyError):
    code = "AccessDenied"

    def __init__(self, reason: str = "", detail: str = ""):
        self.reason = reason
        # keep the reason visible in rendered messages; .detail stays bare
        super().__init__(f"{reason}: {detail}" if reason and detail
                         else detail or reason)
        self.detail = detail


class PolicyViolation(PolicyError):
    code = "PolicyViolation"

    def __init__(self, reason: str = "", detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if reason and detail
                         else detail or reason)
        self.detail = detail


class NotACandidate(PolicyError):
    code = "NotACandidate"
    reason = "NotACandidate"  # uniform wire contract: denials carry a reason


# --- conflict family --------------------------------------------------------

class DuplicateSibling(ConflictError):
    code = "DuplicateSibling"


class RootRemoval(ConflictError):
    code = "RootRemoval"


class InUse(ConflictError):
    code = "InUse"


class ParentNotFolder(ConflictError):
    code = "ParentNotFolder"


class ArchivedDocument(ConflictError):
    code = "ArchivedDocument"


class DocumentLocked(ConflictError):
    """Document is Routed or Signed and cannot take this mutation."""
    code = "DocumentLocked"


class RouteExhausted(ConflictError):
    code = "RouteExhausted"


class NoRouteRegistry(ConflictError):
    code = "NoRouteRegistry"


# --- malformed family -------------------------------------------------------

class MalformedInput(MalformedError):
    code = "MalformedInput"


class MalformedLabel(MalformedError):
    code = "MalformedLabel"


class MalformedRoute(MalformedError):
    code = "MalformedRoute"


class WrongAction(MalformedError):
    code = "WrongAction"


class StorageFailure(EngineError):
    code = "StorageFailure"


_BY_CODE = {cls.code: cls for cls in list(globals().values())
            if isinstance(cls, type) and issubclass(cls, EngineError)}


def error_for_code(code: str, detail: str = "") -> EngineError:
    """Rebuild a typed error from a wire reason code (used by the HTTP client)."""
    cls = _BY_CODE.get(code, EngineError)
    return cls(detail)
