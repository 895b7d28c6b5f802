"""Standard-library HTTP front for the service core.

One ``ThreadingHTTPServer`` accepts connections; every request funnels
through the ApiCore writer lock, so concurrency never reorders
mutations. ``/ui`` serves the prebuilt web client from a static
directory when one is configured.
"""

from __future__ import annotations

import json
import logging
import mimetypes
import os
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .api import MAX_BODY, ApiCore, canonical_json

log = logging.getLogger(__name__)


class _Handler(BaseHTTPRequestHandler):
    server_version = "gwflow"
    protocol_version = "HTTP/1.1"

    # set by make_server
    core: ApiCore = None
    ui_dir: str | None = None

    def log_message(self, fmt, *args):  # route through logging, not stderr
        log.debug("%s %s", self.address_string(), fmt % args)

    def _respond(self, status: int, payload: dict) -> None:
        body = canonical_json(payload)
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _dispatch(self) -> None:
        parsed = urlparse(self.path)
        if parsed.path == "/ui" or parsed.path.startswith("/ui/"):
            self._serve_static(parsed.path)
            return
        query = {k: v[-1] for k, v in parse_qs(parsed.query).items()}
        length = int(self.headers.get("Content-Length") or 0)
        if length > MAX_BODY:
            self._respond(400, {"ok": False, "error": "MalformedInput",
                                "detail": "request body too large"})
            return
        body = self.rfile.read(length) if length else None
        status, payload = self.core.handle(
            self.command, parsed.path, query, dict(self.headers), body)
        self._respond(status, payload)

    def _serve_static(self, path: str) -> None:
        if self.ui_dir is None:
            self._respond(404, {"ok": False, "error": "UnknownTarget",
                                "detail": "no ui directory configured"})
            return
        rel = path[len("/ui"):].lstrip("/") or "index.html"
        full = os.path.normpath(os.path.join(self.ui_dir, rel))
        if not full.startswith(os.path.abspath(self.ui_dir) + os.sep) \
                and full != os.path.abspath(self.ui_dir):
            self._respond(404, {"ok": False, "error": "UnknownTarget",
                                "detail": "bad path"})
            return
        if os.path.isdir(full):
            full = os.path.join(full, "index.html")
        if not os.path.isfile(full):
            self._respond(404, {"ok": False, "error": "UnknownTarget",
                                "detail": f"no asset {rel}"})
            return
        ctype = mimetypes.guess_type(full)[0] or "application/octet-stream"
        with open(full, "rb") as f:
            data = f.read()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def do_GET(self):
        self._dispatch()

    def do_POST(self):
        self._dispatch()

    def do_PUT(self):
        self._dispatch()

    def do_DELETE(self):
        self._dispatch()


def make_server(core: ApiCore, host: str = "127.0.0.1", port: int = 0,
                ui_dir: str | None = None) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {
        "core": core,
        "ui_dir": os.path.abspath(ui_dir) if ui_dir else None,
    })
    server = ThreadingHTTPServer((host, port), handler)
    return server


def serve_in_thread(core: ApiCore, host: str = "127.0.0.1", port: int = 0,
                    ui_dir: str | None = None) -> tuple[ThreadingHTTPServer, threading.Thread]:
    """Start a server on a background thread; returns it plus the thread.
    Port 0 picks a free port; read server.server_address for the real one."""
    server = make_server(core, host, port, ui_dir)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, thread


def default_ui_dir() -> str | None:
    """frontend/dist next to the repository layout, if it exists."""
    here = os.path.dirname(os.path.abspath(__file__))
    candidate = os.path.normpath(os.path.join(here, "..", "..", "frontend", "dist"))
    return candidate if os.path.isdir(candidate) else None


def run(core: ApiCore, host: str, port: int, ui_dir: str | None = None) -> None:
    server = make_server(core, host, port, ui_dir)
    host_out, port_out = server.server_address[:2]
    print(json.dumps({"listening": f"http://{host_out}:{port_out}",
                      "ui": bool(ui_dir)}))
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
