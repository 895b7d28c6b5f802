"""Line-oriented fixture loader and the builtin starter configuration.

Fixture files drive the engine one command per line::

    # comment
    user.add name=boris role=Clerk level=FrontOffice clearance=Private
    doc.create as=boris title="Weekly bulletin" folder=/Shared doc_class=Report \
        level=FrontOffice secrecy=Public content="numbers attached"

Tokens are shell-quoted key=value pairs. ``as=<user>`` picks the acting
user (default: the engine principal). Folder references are paths like
``/Shared/Reports``, document references are ``@Title``, everything else
resolves by name or id through the engine itself.
"""

from __future__ import annotations

import shlex

from .access import SYSTEM_USER
from .engine import Engine
from .errors import MalformedInput, UnknownTarget
from .store import Folder

_INT_KEYS = {"lo", "hi"}
_BOOL_KEYS = {"forward"}
_LIST_KEYS = {"acl", "classes"}
_FOLDER_KEYS = {
    "folder.add": {"parent"},
    "folder.attach": {"folder"},
    "folder.detach": {"folder"},
    "doc.create": {"folder"},
    "grant.add": {"folder"},
    "node.move": {"parent"},
}
_DOC_KEYS = {"doc"}
_NODE_KEYS = {"handle"}


def resolve_folder(engine: Engine, ref: str) -> int:
    tree = engine.state.tree
    if ref == "/":
        return tree.root
    if ref.startswith("/"):
        cur = tree.root
        for part in ref.strip("/").split("/"):
            nxt = None
            for h in tree.children(cur):
                node = tree.nodes[h]
                if isinstance(node, Folder) and node.name == part:
                    nxt = h
                    break
            if nxt is None:
                raise UnknownTarget(f"folder path {ref!r}")
            cur = nxt
        return cur
    if ref.isdigit():
        return int(ref)
    raise MalformedInput(f"folder reference {ref!r} must be a /path or handle")


def resolve_doc(engine: Engine, ref: str) -> int:
    if ref.startswith("@"):
        title = ref[1:]
        for doc in engine.state.tree.documents():
            if doc.name == title:
                return doc.handle
        raise UnknownTarget(f"document titled {title!r}")
    if ref.isdigit():
        return int(ref)
    raise MalformedInput(f"document reference {ref!r} must be @Title or handle")


def _resolve_node(engine: Engine, ref: str) -> int:
    if ref.startswith("@"):
        return resolve_doc(engine, ref)
    return resolve_folder(engine, ref)


def _steps_from(engine: Engine, text: str) -> list[dict]:
    steps = []
    for item in text.split(","):
        parts = item.split(":")
        if len(parts) != 3 or parts[0] not in ("role", "user"):
            raise MalformedInput(f"bad step {item!r}, want role:Name:Action")
        steps.append({parts[0]: parts[1], "action": parts[2]})
    return steps


def _stages_from(text: str) -> list[dict]:
    stages = []
    for item in text.split(","):
        parts = item.split(":")
        if len(parts) != 3:
            raise MalformedInput(f"bad stage {item!r}, want Role:min:max")
        stages.append({"role": parts[0], "min": int(parts[1]), "max": int(parts[2])})
    return stages


def parse_line(line: str) -> tuple[str, dict] | None:
    """Returns (op, raw key/value pairs) or None for blanks and comments."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    tokens = shlex.split(stripped)
    op, kv = tokens[0], {}
    for tok in tokens[1:]:
        if "=" not in tok:
            raise MalformedInput(f"expected key=value, got {tok!r}")
        key, _, value = tok.partition("=")
        kv[key] = value
    return op, kv


def build_command(engine: Engine, op: str, kv: dict) -> tuple[str, int, dict]:
    """Turn a parsed fixture line into (engine op, acting user, args)."""
    kv = dict(kv)
    actor = SYSTEM_USER
    if "as" in kv:
        actor = engine.state.directory.resolve_user(kv.pop("as")).id

    if op == "route.explicit":
        args = {"name": kv.pop("name"), "applies_to": kv.pop("applies_to"),
                "kind": "explicit", "steps": _steps_from(engine, kv.pop("steps"))}
        _reject_extras(op, kv)
        return "route.register", actor, args
    if op == "route.spectrum":
        args = {"name": kv.pop("name"), "applies_to": kv.pop("applies_to"),
                "kind": "spectrum", "stages": _stages_from(kv.pop("stages")),
                "terminal": kv.pop("terminal", "Modify")}
        _reject_extras(op, kv)
        return "route.register", actor, args

    args: dict = {}
    folder_keys = _FOLDER_KEYS.get(op, set())
    for key, value in kv.items():
        if key in folder_keys:
            args[key] = resolve_folder(engine, value)
        elif key in _DOC_KEYS:
            args[key] = resolve_doc(engine, value)
        elif key in _NODE_KEYS:
            args[key] = _resolve_node(engine, value)
        elif key in _INT_KEYS:
            args[key] = int(value)
        elif key in _BOOL_KEYS:
            args[key] = value.lower() in ("1", "true", "yes")
        elif key in _LIST_KEYS:
            args[key] = [x for x in value.split(",") if x]
        else:
            args[key] = value
    return op, actor, args


def _reject_extras(op: str, kv: dict) -> None:
    if kv:
        raise MalformedInput(f"unexpected keys for {op}: {sorted(kv)}")


def load_text(engine: Engine, text: str, source: str = "<fixture>") -> list[dict]:
    """Run a fixture; returns one row per executed line."""
    results = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        try:
            parsed = parse_line(line)
            if parsed is None:
                continue
            op, kv = parsed
            real_op, actor, args = build_command(engine, op, kv)
            seq, result = engine.execute(real_op, actor, args)
        except MalformedInput as exc:
            raise MalformedInput(f"{source}:{lineno}: {exc.detail}") from exc
        results.append({"line": lineno, "op": real_op, "seq": seq,
                        "result": result})
    return results


def load_file(engine: Engine, path: str) -> list[dict]:
    with open(path, encoding="utf-8") as f:
        return load_text(engine, f.read(), source=path)


# The starter configuration: a small front-office/accounting shop. Class
# ids land in creation order, so tests may rely on the comments below.
INIT_FIXTURE = """\
# document classes
class.add kind=document name=Contract parent=Document
class.add kind=document name=Order parent=Document
class.add kind=document name=Directive parent=Document
class.add kind=document name=Protocol parent=Document
class.add kind=document name=Report parent=Document
class.add kind=document name=Memo parent=Document

# roles: staff under Employee, administrators under Admin
class.add kind=role name=Employee parent=Role
class.add kind=role name=Boss parent=Employee
class.add kind=role name=VP parent=Boss
class.add kind=role name=DeptChief parent=Boss
class.add kind=role name=Secretary parent=Employee
class.add kind=role name=Clerk parent=Employee
class.add kind=role name=Admin parent=Role
class.add kind=role name=Security_adm parent=Admin
class.add kind=role name=System_adm parent=Admin
class.add kind=role name=Guest parent=Role

# access levels: the organization and its units
class.add kind=access name=Organization parent=AccessLevel
class.add kind=access name=FrontOffice parent=Organization
class.add kind=access name=Accounting parent=Organization
class.add kind=access name=Reception parent=FrontOffice

# workgroups
wg.add name=front-office
wg.add name=accounting

# people
user.add name=olga role=VP level=Organization clearance=Confidential
user.add name=greg role=DeptChief level=Accounting clearance=Confidential
user.add name=boris role=Clerk level=FrontOffice clearance=Private
user.add name=sonya role=Secretary level=FrontOffice clearance=Private
user.add name=vera role=Clerk level=Accounting clearance=Private
user.add name=boyan role=Boss level=Reception clearance=Public
user.add name=xadm role=System_adm level=Organization clearance=Confidential
user.add name=sadm role=Security_adm level=Organization clearance=Confidential
user.add name=guestg role=Guest level=FrontOffice clearance=Public

wg.attach user=olga wg=front-office
wg.attach user=olga wg=accounting
wg.attach user=greg wg=accounting
wg.attach user=boris wg=front-office
wg.attach user=sonya wg=front-office
wg.attach user=vera wg=accounting
wg.attach user=boyan wg=front-office

# folders
folder.add name=Shared parent=/
folder.add name=Reports parent=/Shared
folder.add name=FrontDesk parent=/
folder.add name=Ledgers parent=/
folder.attach folder=/Shared wg=front-office
folder.attach folder=/Shared wg=accounting
folder.attach folder=/FrontDesk wg=front-office
folder.attach folder=/Ledgers wg=accounting

# routes; the Other route is the mandatory fallback
route.explicit name=ContractSigning applies_to=Contract steps=role:Secretary:Modify,role:Boss:Sign
route.explicit name=DirectiveApproval applies_to=Directive steps=role:Boss:Sign
route.spectrum name=ProtocolFlow applies_to=Protocol stages=Clerk:1:2,Boss:1:1 terminal=Sign
route.explicit name=DefaultFlow applies_to=Other steps=role:Employee:Modify

# these classes never finish a route unsigned
signreq.set classes=Contract,Directive,Protocol
"""


def apply_init(engine: Engine) -> list[dict]:
    return load_text(engine, INIT_FIXTURE, source="<init>")
