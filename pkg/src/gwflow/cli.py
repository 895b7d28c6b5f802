"""Command-line front end.

Environment:
    GW_DATA_DIR        data directory (default ./gwdata)
    GW_USER            acting user for commands (default: engine principal)
    GW_LISTEN          host:port for serve (default 127.0.0.1:8040)
    GW_SNAPSHOT_EVERY  auto-compact after this many events (0 = never)

Exit codes: 0 success, 2 policy denial, 3 not found, 4 malformed or
conflicting input, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import engine as eng
from . import fixtures, report, server
from .access import SYSTEM_USER, Action
from .api import ApiCore
from .engine import Engine
from .errors import EngineError, InUse, MalformedInput
from .lattice import Secrecy

log = logging.getLogger(__name__)


def _data_dir(args) -> str:
    return args.data_dir or os.environ.get("GW_DATA_DIR") or "./gwdata"


def _open_engine(args) -> Engine:
    engine = Engine.open(_data_dir(args))
    every = os.environ.get("GW_SNAPSHOT_EVERY", "0")
    try:
        engine.snapshot_every = int(every)
    except ValueError:
        raise MalformedInput(f"GW_SNAPSHOT_EVERY must be an integer, got {every!r}")
    return engine

def _actor(args, engine: Engine) -> int:
    who = args.user or os.environ.get("GW_USER", "")
    if not who:
        return SYSTEM_USER
    return engine.state.directory.resolve_user(who).id


def _print(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _print_json(obj) -> None:
    _print(json.dumps(obj, indent=2, sort_keys=True))


# --- subcommand bodies ---------------------------------------------------------


def cmd_init(args) -> int:
    engine = _open_engine(args)
    if engine.seq != 0:
        raise InUse(f"data dir {_data_dir(args)} already holds {engine.seq} events")
    results = fixtures.apply_init(engine)
    _print(f"initialized {_data_dir(args)} with {len(results)} commands "
           f"(seq {engine.seq})")
    return 0


def cmd_load(args) -> int:
    engine = _open_engine(args)
    results = fixtures.load_file(engine, args.file)
    _print(f"applied {len(results)} commands from {args.file} (seq {engine.seq})")
    return 0


def cmd_search(args) -> int:
    engine = _open_engine(args)
    uid = _actor(args, engine)
    folder = None
    if args.folder:
        folder = fixtures.resolve_folder(engine, args.folder)
    hits = eng.q_search(engine, uid, title=args.title or "",
                        doc_class=args.doc_class or None,
                        status=args.status or "", folder=folder)
    _print(report.docs_table(hits))
    return 0


def cmd_matrix(args) -> int:
    engine = _open_engine(args)
    uid = _actor(args, engine)
    users = None
    if args.users:
        users = [engine.state.directory.resolve_user(u).id
                 for u in args.users.split(",") if u]
    docs = None
    if args.docs:
        docs = [fixtures.resolve_doc(engine, d) for d in args.docs.split(",") if d]
    rows = eng.q_matrix(engine, uid, users, docs, Action(args.action))
    _print(report.matrix_table(rows))
    if args.figure:
        report.matrix_figure(rows, args.figure)
        _print(f"figure|{args.figure}")
    return 0


def cmd_signers(args) -> int:
    engine = _open_engine(args)
    rows = eng.q_sign_matrix(engine)
    _print(report.sign_table(rows))
    return 0


def cmd_classes(args) -> int:
    engine = _open_engine(args)
    rows = eng.q_classes(engine, args.kind)
    _print(report.classes_table(rows))
    if args.figure:
        report.hierarchy_figure(rows, args.figure, title=f"{args.kind} classes")
        _print(f"figure|{args.figure}")
    return 0


def cmd_audit_tail(args) -> int:
    engine = _open_engine(args)
    uid = _actor(args, engine)
    _print(report.audit_table(eng.q_audit_tail(engine, uid, args.n)))
    return 0


def cmd_route_trace(args) -> int:
    engine = _open_engine(args)
    uid = _actor(args, engine)
    doc = fixtures.resolve_doc(engine, args.doc)
    _print(report.trace_table(eng.q_trace(engine, uid, doc)))
    return 0


def cmd_route_start(args) -> int:
    engine = _open_engine(args)
    uid = _actor(args, engine)
    doc = fixtures.resolve_doc(engine, args.doc)
    seq, result = engine.execute("route.start", uid, {"doc": doc})
    _print_json({"seq": seq, **result})
    return 0


def cmd_route_step(args) -> int:
    engine = _open_engine(args)
    uid = _actor(args, engine)
    doc = fixtures.resolve_doc(engine, args.doc)
    cmd_args = {"doc": doc, "action": args.action, "forward": not args.hold}
    if args.content is not None:
        cmd_args["content"] = args.content
    seq, result = engine.execute("route.step", uid, cmd_args)
    _print_json({"seq": seq, **result})
    return 0


def cmd_route_reject(args) -> int:
    engine = _open_engine(args)
    uid = _actor(args, engine)
    doc = fixtures.resolve_doc(engine, args.doc)
    seq, result = engine.execute("route.reject", uid, {"doc": doc})
    _print_json({"seq": seq, **result})
    return 0


def cmd_doc_create(args) -> int:
    engine = _open_engine(args)
    uid = _actor(args, engine)
    folder = fixtures.resolve_folder(engine, args.folder)
    cmd_args = {"title": args.title, "folder": folder, "doc_class": args.doc_class,
                "level": args.level, "secrecy": args.secrecy,
                "content": args.content or ""}
    if args.acl:
        cmd_args["acl"] = [u for u in args.acl.split(",") if u]
    seq, result = engine.execute("doc.create", uid, cmd_args)
    _print_json({"seq": seq, **result})
    return 0


def cmd_doc_read(args) -> int:
    engine = _open_engine(args)
    uid = _actor(args, engine)
    doc = fixtures.resolve_doc(engine, args.doc)
    _print_json(eng.q_read_doc(engine, uid, doc))
    return 0


def cmd_doc_modify(args) -> int:
    engine = _open_engine(args)
    uid = _actor(args, engine)
    doc = fixtures.resolve_doc(engine, args.doc)
    seq, result = engine.execute("doc.modify", uid,
                                 {"doc": doc, "content": args.content})
    _print_json({"seq": seq, **result})
    return 0


def cmd_doc_archive(args) -> int:
    engine = _open_engine(args)
    uid = _actor(args, engine)
    doc = fixtures.resolve_doc(engine, args.doc)
    seq, result = engine.execute("doc.archive", uid, {"doc": doc})
    _print_json({"seq": seq, **result})
    return 0


def cmd_snapshot(args) -> int:
    engine = _open_engine(args)
    uid = _actor(args, engine)
    result = engine.snapshot_and_compact(uid)
    _print_json(result)
    return 0


def cmd_serve(args) -> int:
    engine = _open_engine(args)
    if args.snapshot_every is not None:
        engine.snapshot_every = args.snapshot_every
    listen = args.listen or os.environ.get("GW_LISTEN", "127.0.0.1:8040")
    host, _, port_s = listen.rpartition(":")
    if not host or not port_s.isdigit():
        raise MalformedInput(f"GW_LISTEN must be host:port, got {listen!r}")
    ui_dir = args.ui or server.default_ui_dir()
    server.run(ApiCore(engine), host, int(port_s), ui_dir)
    return 0


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gwflow",
        description="Groupware document workflow engine")
    p.add_argument("--data-dir", help="data directory (or GW_DATA_DIR)")
    p.add_argument("--user", help="acting user name or id (or GW_USER)")
    p.add_argument("-v", "--verbose", action="store_true",
                   help="log at DEBUG level")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("init", help="create the starter configuration")
    sp.set_defaults(fn=cmd_init)

    sp = sub.add_parser("load", help="apply a fixture file")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_load)

    sp = sub.add_parser("search", help="list documents visible to the user")
    sp.add_argument("--title", default="")
    sp.add_argument("--class", dest="doc_class", default="")
    sp.add_argument("--status", default="",
                    choices=["", "Draft", "Routed", "Signed", "Archived"])
    sp.add_argument("--folder", default="", help="restrict to a /folder/path")
    sp.set_defaults(fn=cmd_search)

    sp = sub.add_parser("matrix", help="access decision matrix")
    sp.add_argument("--users", default="", help="comma separated user names")
    sp.add_argument("--docs", default="", help="comma separated @titles or handles")
    sp.add_argument("--action", default=Action.READ.value,
                    choices=[a.value for a in Action])
    sp.add_argument("--figure", default="", help="also render a heatmap to this file")
    sp.set_defaults(fn=cmd_matrix)

    sp = sub.add_parser("signers", help="which role classes carry the sign right")
    sp.set_defaults(fn=cmd_signers)

    sp = sub.add_parser("classes", help="list a class hierarchy")
    sp.add_argument("kind", choices=["document", "role", "access"])
    sp.add_argument("--figure", default="", help="also render the tree to this file")
    sp.set_defaults(fn=cmd_classes)

    sp = sub.add_parser("audit", help="denial audit stream")
    asub = sp.add_subparsers(dest="audit_cmd", required=True)
    tail = asub.add_parser("tail", help="print the most recent denials")
    tail.add_argument("-n", type=int, default=20)
    tail.set_defaults(fn=cmd_audit_tail)

    sp = sub.add_parser("route", help="work with document routes")
    rsub = sp.add_subparsers(dest="route_cmd", required=True)
    rt = rsub.add_parser("trace", help="history and pending step of a run")
    rt.add_argument("doc", help="@Title or handle")
    rt.set_defaults(fn=cmd_route_trace)
    rt = rsub.add_parser("start", help="put a document on its route")
    rt.add_argument("doc")
    rt.set_defaults(fn=cmd_route_start)
    rt = rsub.add_parser("step", help="work the pending step")
    rt.add_argument("doc")
    rt.add_argument("--action", default=Action.MODIFY.value,
                    choices=[Action.MODIFY.value, Action.SIGN.value])
    rt.add_argument("--content", default=None)
    rt.add_argument("--hold", action="store_true",
                    help="stay in the current stage (spectrum routes)")
    rt.set_defaults(fn=cmd_route_step)
    rt = rsub.add_parser("reject", help="refuse the pending step")
    rt.add_argument("doc")
    rt.set_defaults(fn=cmd_route_reject)

    sp = sub.add_parser("doc", help="work with single documents")
    dsub = sp.add_subparsers(dest="doc_cmd", required=True)
    dc = dsub.add_parser("create")
    dc.add_argument("title")
    dc.add_argument("--folder", required=True, help="/folder/path")
    dc.add_argument("--class", dest="doc_class", required=True)
    dc.add_argument("--level", required=True)
    dc.add_argument("--secrecy", default=Secrecy.PUBLIC.value,
                    choices=[s.value for s in Secrecy])
    dc.add_argument("--content", default="")
    dc.add_argument("--acl", default="", help="comma separated users (Confidential)")
    dc.set_defaults(fn=cmd_doc_create)
    dr = dsub.add_parser("read")
    dr.add_argument("doc")
    dr.set_defaults(fn=cmd_doc_read)
    dm = dsub.add_parser("modify")
    dm.add_argument("doc")
    dm.add_argument("--content", required=True)
    dm.set_defaults(fn=cmd_doc_modify)
    da = dsub.add_parser("archive")
    da.add_argument("doc")
    da.set_defaults(fn=cmd_doc_archive)

    sp = sub.add_parser("snapshot", help="freeze state and compact the log")
    sp.set_defaults(fn=cmd_snapshot)

    sp = sub.add_parser("serve", help="run the HTTP service")
    sp.add_argument("--listen", default="", help="host:port (or GW_LISTEN)")
    sp.add_argument("--ui", default="", help="directory with the built web client")
    sp.add_argument("--snapshot-every", type=int, default=None,
                    help="auto-compact after N events (or GW_SNAPSHOT_EVERY)")
    sp.set_defaults(fn=cmd_serve)

    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.fn(args)
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
