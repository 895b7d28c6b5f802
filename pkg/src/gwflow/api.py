"""HTTP-shaped service core.

``ApiCore.handle`` maps (method, path, query, headers, body) onto engine
commands and queries and returns (status, payload). It owns a single
writer lock, so any number of server threads funnel into one mutation at
a time. The wire format is JSON with sorted keys; every success payload
carries the sequence number the state was at (for commands, the sequence
of the appended event), and every error payload carries the stable error
code, plus the deny reason verbatim when there is one.

Identity travels in the ``X-GW-User`` header as a user name or id. Only
``GET /health`` is exempt.
"""

from __future__ import annotations

import json
import logging
import threading

from . import engine as eng
from .access import Action, action_of
from .errors import EngineError, MalformedInput, UnknownTarget

log = logging.getLogger(__name__)

MAX_BODY = 10 * 1024 * 1024

_ROUTES: list[tuple[str, list[str], object]] = []


def _route(method: str, pattern: str):
    segments = [s for s in pattern.strip("/").split("/") if s]
    def deco(fn):
        _ROUTES.append((method, segments, fn))
        return fn
    return deco


def _int(value, what: str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise MalformedInput(f"{what} must be an integer, got {value!r}") from None


def canonical_json(payload: dict) -> bytes:
    return (json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")


class ApiCore:
    def __init__(self, engine: eng.Engine):
        self.engine = engine
        self.lock = threading.Lock()

    # --- plumbing ----------------------------------------------------------

    def handle(self, method: str, path: str, query: dict | None = None,
               headers: dict | None = None, body: bytes | None = None) -> tuple[int, dict]:
        query = dict(query or {})
        headers = {k.lower(): v for k, v in (headers or {}).items()}
        try:
            segs = [s for s in path.strip("/").split("/") if s]
            fn, path_args = self._match(method, segs)
            body_obj = self._parse_body(body)
            with self.lock:
                if not (method == "GET" and segs == ["health"]):
                    uid = self._identity(headers)
                else:
                    uid = None
                out = fn(self, uid, path_args, query, body_obj)
            return 200, {"ok": True, **out}
        except EngineError as exc:
            payload = {"ok": False, "error": exc.code, "detail": exc.detail}
            reason = getattr(exc, "reason", "")
            if reason:
                payload["reason"] = reason
            return exc.http_status, payload

    def _match(self, method: str, segs: list[str]):
        saw_path = False
        for m, pattern, fn in _ROUTES:
            if len(pattern) != len(segs):
                continue
            args = {}
            for want, got in zip(pattern, segs):
                if want.startswith("{"):
                    args[want[1:-1]] = got
                elif want != got:
                    break
            else:
                saw_path = True
                if m == method:
                    return fn, args
        if saw_path:
            raise MalformedInput(f"method {method} not supported here")
        raise UnknownTarget(f"no endpoint for {'/'.join(segs) or '/'}")

    def _parse_body(self, body: bytes | None) -> dict:
        if not body:
            return {}
        if len(body) > MAX_BODY:
            raise MalformedInput("request body too large")
        try:
            obj = json.loads(body.decode("utf-8"))
        except (ValueError, UnicodeDecodeError):
            raise MalformedInput("request body is not valid JSON") from None
        if not isinstance(obj, dict):
            raise MalformedInput("request body must be a JSON object")
        return obj

    def _identity(self, headers: dict) -> int:
        who = headers.get("x-gw-user", "")
        if not who:
            raise MalformedInput("X-GW-User header is required")
        return self.engine.state.directory.resolve_user(who).id

    def _exec(self, op: str, uid: int, args: dict) -> dict:
        seq, result = self.engine.execute(op, uid, args)
        return {"seq": seq, "data": result}

    def _query(self, data) -> dict:
        return {"seq": self.engine.seq, "data": data}


# --- meta ---------------------------------------------------------------------


@_route("GET", "/health")
def _ep_health(api, uid, pa, q, body):
    return {"seq": api.engine.seq, "data": {"status": "up"}}


# --- hierarchies ----------------------------------------------------------------


@_route("GET", "/classes/{kind}")
def _ep_classes(api, uid, pa, q, body):
    return api._query(eng.q_classes(api.engine, pa["kind"]))


@_route("POST", "/classes/{kind}")
def _ep_class_add(api, uid, pa, q, body):
    args = {"kind": pa["kind"], "name": body.get("name")}
    if "parent" in body:
        args["parent"] = body["parent"]
    return api._exec("class.add", uid, args)


@_route("DELETE", "/classes/{kind}/{id}")
def _ep_class_remove(api, uid, pa, q, body):
    return api._exec("class.remove", uid,
                     {"kind": pa["kind"], "id": _int(pa["id"], "class id")})


# --- directory -------------------------------------------------------------------


@_route("GET", "/users")
def _ep_users(api, uid, pa, q, body):
    return api._query(eng.q_users(api.engine, uid))


@_route("POST", "/users")
def _ep_user_add(api, uid, pa, q, body):
    return api._exec("user.add", uid, body)


@_route("GET", "/workgroups")
def _ep_wgs(api, uid, pa, q, body):
    return api._query(eng.q_workgroups(api.engine, uid))


@_route("POST", "/workgroups")
def _ep_wg_add(api, uid, pa, q, body):
    return api._exec("wg.add", uid, body)


@_route("POST", "/workgroups/{wg}/members")
def _ep_wg_attach(api, uid, pa, q, body):
    return api._exec("wg.attach", uid,
                     {"wg": _int(pa["wg"], "workgroup"), "user": body.get("user")})


@_route("DELETE", "/workgroups/{wg}/members/{user}")
def _ep_wg_detach(api, uid, pa, q, body):
    return api._exec("wg.detach", uid,
                     {"wg": _int(pa["wg"], "workgroup"), "user": pa["user"]})


@_route("GET", "/grants")
def _ep_grants(api, uid, pa, q, body):
    return api._query(eng.q_grants(api.engine, uid))


@_route("POST", "/grants")
def _ep_grant_add(api, uid, pa, q, body):
    return api._exec("grant.add", uid, body)


@_route("DELETE", "/grants/{id}")
def _ep_grant_revoke(api, uid, pa, q, body):
    return api._exec("grant.revoke", uid, {"id": _int(pa["id"], "grant id")})


# --- store ---------------------------------------------------------------------


@_route("GET", "/folders/{handle}")
def _ep_folder(api, uid, pa, q, body):
    return api._query(eng.q_list_folder(api.engine, uid,
                                        _int(pa["handle"], "folder handle")))


@_route("POST", "/folders")
def _ep_folder_add(api, uid, pa, q, body):
    return api._exec("folder.add", uid, body)


@_route("POST", "/folders/{handle}/groups")
def _ep_folder_attach(api, uid, pa, q, body):
    return api._exec("folder.attach", uid,
                     {"folder": _int(pa["handle"], "folder handle"),
                      "wg": body.get("wg")})


@_route("DELETE", "/folders/{handle}/groups/{wg}")
def _ep_folder_detach(api, uid, pa, q, body):
    return api._exec("folder.detach", uid,
                     {"folder": _int(pa["handle"], "folder handle"),
                      "wg": _int(pa["wg"], "workgroup")})


@_route("POST", "/nodes/{handle}/move")
def _ep_node_move(api, uid, pa, q, body):
    return api._exec("node.move", uid,
                     {"handle": _int(pa["handle"], "handle"),
                      "parent": body.get("parent")})


@_route("DELETE", "/nodes/{handle}")
def _ep_node_remove(api, uid, pa, q, body):
    return api._exec("node.remove", uid, {"handle": _int(pa["handle"], "handle")})


@_route("GET", "/documents/{handle}")
def _ep_doc(api, uid, pa, q, body):
    return api._query(eng.q_read_doc(api.engine, uid,
                                     _int(pa["handle"], "document handle")))


@_route("POST", "/documents")
def _ep_doc_create(api, uid, pa, q, body):
    return api._exec("doc.create", uid, body)


@_route("PUT", "/documents/{handle}/content")
def _ep_doc_modify(api, uid, pa, q, body):
    return api._exec("doc.modify", uid,
                     {"doc": _int(pa["handle"], "document handle"),
                      "content": body.get("content")})


@_route("PUT", "/documents/{handle}/title")
def _ep_doc_retitle(api, uid, pa, q, body):
    return api._exec("doc.retitle", uid,
                     {"doc": _int(pa["handle"], "document handle"),
                      "title": body.get("title")})


@_route("POST", "/documents/{handle}/acl")
def _ep_acl_add(api, uid, pa, q, body):
    return api._exec("acl.add", uid,
                     {"doc": _int(pa["handle"], "document handle"),
                      "user": body.get("user")})


@_route("DELETE", "/documents/{handle}/acl/{user}")
def _ep_acl_remove(api, uid, pa, q, body):
    return api._exec("acl.remove", uid,
                     {"doc": _int(pa["handle"], "document handle"),
                      "user": pa["user"]})


@_route("POST", "/documents/{handle}/archive")
def _ep_doc_archive(api, uid, pa, q, body):
    return api._exec("doc.archive", uid,
                     {"doc": _int(pa["handle"], "document handle")})


@_route("GET", "/search")
def _ep_search(api, uid, pa, q, body):
    folder = q.get("folder")
    hits = eng.q_search(
        api.engine, uid,
        title=q.get("title", ""),
        doc_class=q.get("class") or None,
        status=q.get("status", ""),
        folder=_int(folder, "folder") if folder else None,
    )
    return api._query(hits)


# --- routing ----------------------------------------------------------------------


@_route("GET", "/routes")
def _ep_routes(api, uid, pa, q, body):
    return api._query(eng.q_routes(api.engine))


@_route("POST", "/routes")
def _ep_route_register(api, uid, pa, q, body):
    return api._exec("route.register", uid, body)


@_route("POST", "/documents/{handle}/route")
def _ep_route_start(api, uid, pa, q, body):
    return api._exec("route.start", uid,
                     {"doc": _int(pa["handle"], "document handle")})


@_route("GET", "/documents/{handle}/route")
def _ep_trace(api, uid, pa, q, body):
    return api._query(eng.q_trace(api.engine, uid,
                                  _int(pa["handle"], "document handle")))


@_route("POST", "/documents/{handle}/route/step")
def _ep_route_step(api, uid, pa, q, body):
    args = {"doc": _int(pa["handle"], "document handle")}
    for key in ("action", "content", "forward"):
        if key in body:
            args[key] = body[key]
    return api._exec("route.step", uid, args)


@_route("POST", "/documents/{handle}/route/reject")
def _ep_route_reject(api, uid, pa, q, body):
    return api._exec("route.reject", uid,
                     {"doc": _int(pa["handle"], "document handle")})


@_route("GET", "/inbox")
def _ep_inbox(api, uid, pa, q, body):
    who = uid
    if q.get("user"):
        who = api.engine.state.directory.resolve_user(q["user"]).id
    return api._query(eng.q_inbox(api.engine, who))


# action-centric spellings of the routing endpoints, for thin clients
# that keep the document handle in the request body


@_route("POST", "/actions/advance")
def _ep_advance(api, uid, pa, q, body):
    args = {"doc": _int(body.get("doc"), "document handle")}
    for key in ("action", "content", "forward"):
        if key in body:
            args[key] = body[key]
    return api._exec("route.step", uid, args)


@_route("POST", "/actions/reject")
def _ep_reject(api, uid, pa, q, body):
    return api._exec("route.reject", uid,
                     {"doc": _int(body.get("doc"), "document handle")})


@_route("POST", "/actions/preview")
def _ep_preview(api, uid, pa, q, body):
    handle = _int(body.get("doc"), "document handle")
    return api._query(eng.q_preview(api.engine, uid, handle,
                                    body.get("action") or None))


# --- reporting and administration ---------------------------------------------------


@_route("GET", "/matrix")
def _ep_matrix(api, uid, pa, q, body):
    users = None
    if q.get("users"):
        users = [api.engine.state.directory.resolve_user(u).id
                 for u in q["users"].split(",") if u]
    docs = None
    if q.get("docs"):
        docs = [_int(d, "document handle") for d in q["docs"].split(",") if d]
    action = action_of(q.get("action", Action.READ.value))
    return api._query(eng.q_matrix(api.engine, uid, users, docs, action))


@_route("GET", "/sign-matrix")
def _ep_sign_matrix(api, uid, pa, q, body):
    return api._query(eng.q_sign_matrix(api.engine))


@_route("GET", "/audit")
def _ep_audit(api, uid, pa, q, body):
    n = _int(q.get("n", "20"), "n")
    return api._query(eng.q_audit_tail(api.engine, uid, n))


@_route("POST", "/admin/snapshot")
def _ep_snapshot(api, uid, pa, q, body):
    return api._query(api.engine.snapshot_and_compact(uid))


@_route("POST", "/admin/signreq")
def _ep_signreq(api, uid, pa, q, body):
    return api._exec("signreq.set", uid, {"classes": body.get("classes")})
