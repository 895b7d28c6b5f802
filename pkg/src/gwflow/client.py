"""Clients for the service API.

``HttpClient`` talks to a running server over the wire; ``LocalClient``
drives an ApiCore in-process with the exact same request shapes, which
keeps CLI and tests honest about the HTTP contract without a socket.
Both raise the same typed errors the engine would, rebuilt from the
error code in the response body.
"""

from __future__ import annotations

import json
from urllib import error as urlerror
from urllib import parse as urlparse
from urllib import request as urlrequest

from .api import ApiCore
from .errors import EngineError, StorageFailure, error_for_code


def _raise_from(status: int, payload: dict) -> EngineError:
    code = payload.get("error", "EngineError")
    detail = payload.get("detail", "") or payload.get("reason", "")
    exc = error_for_code(code, detail)
    reason = payload.get("reason")
    if reason is not None:
        exc.reason = reason
    return exc


class BaseClient:
    def request(self, method: str, path: str, query: dict | None = None,
                body: dict | None = None) -> dict:
        raise NotImplementedError

    # --- convenience verbs -------------------------------------------------

    def get(self, path: str, **query) -> dict:
        return self.request("GET", path, query=query or None)

    def post(self, path: str, body: dict | None = None) -> dict:
        return self.request("POST", path, body=body)

    def put(self, path: str, body: dict | None = None) -> dict:
        return self.request("PUT", path, body=body)

    def delete(self, path: str) -> dict:
        return self.request("DELETE", path)


class LocalClient(BaseClient):
    def __init__(self, core: ApiCore, user: str):
        self.core = core
        self.user = user

    def request(self, method, path, query=None, body=None):
        headers = {"X-GW-User": self.user} if self.user else {}
        raw = json.dumps(body).encode("utf-8") if body is not None else None
        status, payload = self.core.handle(method, path, query or {}, headers, raw)
        if status >= 400:
            raise _raise_from(status, payload)
        return payload


class HttpClient(BaseClient):
    def __init__(self, base_url: str, user: str, timeout: float = 10.0):
        self.base_url = base_url.rstrip("/")
        self.user = user
        self.timeout = timeout

    def request(self, method, path, query=None, body=None):
        url = self.base_url + path
        if query:
            url += "?" + urlparse.urlencode(
                {k: v for k, v in query.items() if v is not None and v != ""})
        data = json.dumps(body).encode("utf-8") if body is not None else None
        req = urlrequest.Request(url, data=data, method=method)
        if self.user:
            req.add_header("X-GW-User", self.user)
        if data is not None:
            req.add_header("Content-Type", "application/json")
        try:
            with urlrequest.urlopen(req, timeout=self.timeout) as resp:
                payload = json.loads(resp.read().decode("utf-8"))
        except urlerror.HTTPError as exc:
            try:
                payload = json.loads(exc.read().decode("utf-8"))
            except ValueError:
                payload = {"error": "EngineError", "detail": f"HTTP {exc.code}"}
            raise _raise_from(exc.code, payload) from None
        except urlerror.URLError as exc:
            raise StorageFailure(f"cannot reach {self.base_url}: {exc.reason}") from None
        return payload
