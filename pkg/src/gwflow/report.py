"""Delimited report output and figure rendering.

Every report the CLI prints is pipe-delimited, one record per line, so
the output can be cut/grepped or diffed against golden files. The same
data can optionally be rendered to a figure file next to the delimited
stream: the access matrix as a heatmap, a class hierarchy as a tree.
"""

from __future__ import annotations

import logging

from .access import DENY_REASONS

log = logging.getLogger(__name__)

# cell colors: Allow, then one shade per deny reason, in DENY_REASONS order
_ALLOW_COLOR = "#2e7d32"
_DENY_COLORS = ("#c62828", "#ef6c00", "#6a1b9a", "#283593", "#00838f", "#4e342e")


def matrix_table(rows: list[dict]) -> str:
    lines = ["user|doc|decision"]
    for r in rows:
        lines.append(f"{r['user']}|{r['doc']}|{r['decision']}")
    return "\n".join(lines) + "\n"


def classes_table(rows: list[dict]) -> str:
    lines = ["id|parent|depth|name"]
    for r in rows:
        lines.append(f"{r['id']}|{r['parent']}|{r['depth']}|{r['name']}")
    return "\n".join(lines) + "\n"


def docs_table(rows: list[dict]) -> str:
    lines = ["handle|index|status|secrecy|class|owner|title|path"]
    for r in rows:
        lines.append(f"{r['handle']}|{r['index']}|{r['status']}"
                     f"|{r['label']['secrecy']}|{r['class_name']}"
                     f"|{r['owner']}|{r['title']}|{r['path']}")
    return "\n".join(lines) + "\n"


def audit_table(rows: list[dict]) -> str:
    lines = ["seq|user|action|target|reason"]
    for r in rows:
        lines.append(f"{r['seq']}|{r['user']}|{r['action']}"
                     f"|{r['target']}|{r['reason']}")
    return "\n".join(lines) + "\n"


def sign_table(rows: list[dict]) -> str:
    lines = ["role|can_sign"]
    for r in rows:
        lines.append(f"{r['role']}|{'yes' if r['can_sign'] else 'no'}")
    return "\n".join(lines) + "\n"


def trace_table(view: dict) -> str:
    lines = [f"doc|{view['doc']}",
             f"route|{view['route']}|{view['route_name']}",
             f"status|{view['status']}|cursor={view['cursor']}|visits={view['visits']}"]
    for i, h in enumerate(view["history"], start=1):
        lines.append(f"step|{i}|user={h['user']}|action={h['action']}"
                     f"|at={h['step']}")
    pending = view.get("pending")
    if pending:
        extra = ""
        if "min" in pending:
            extra = f"|min={pending['min']}|max={pending['max']}"
        lines.append(f"pending|{pending['kind']}={pending['selector']}"
                     f"|action={pending['action']}{extra}")
    if view.get("candidates") is not None:
        lines.append("candidates|" + ",".join(str(u) for u in view["candidates"]))
    return "\n".join(lines) + "\n"


def matrix_figure(rows: list[dict], out_path: str) -> str:
    """Render the decision matrix as an annotated heatmap. Returns the path."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.colors import ListedColormap

    users = sorted({r["user"] for r in rows})
    docs = sorted({r["doc"] for r in rows})
    reason_index = {reason: i + 1 for i, reason in enumerate(DENY_REASONS)}
    grid = [[0] * len(docs) for _ in users]
    text = [[""] * len(docs) for _ in users]
    for r in rows:
        i, j = users.index(r["user"]), docs.index(r["doc"])
        decision = r["decision"]
        if decision == "Allow":
            grid[i][j] = 0
            text[i][j] = "Allow"
        else:
            reason = decision.split(":", 1)[-1]
            grid[i][j] = reason_index.get(reason, len(DENY_REASONS))
            text[i][j] = reason

    cmap = ListedColormap([_ALLOW_COLOR, *_DENY_COLORS])
    fig, ax = plt.subplots(
        figsize=(1.9 * max(len(docs), 2) + 1, 0.8 * max(len(users), 2) + 1))
    ax.imshow(grid, cmap=cmap, vmin=0, vmax=len(_DENY_COLORS), aspect="auto")
    ax.set_xticks(range(len(docs)), labels=docs, rotation=20, ha="right")
    ax.set_yticks(range(len(users)), labels=users)
    for i in range(len(users)):
        for j in range(len(docs)):
            ax.text(j, i, text[i][j], ha="center", va="center",
                    color="white", fontsize=8)
    ax.set_title("Access decisions")
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    log.info("wrote matrix figure to %s", out_path)
    return out_path


def hierarchy_figure(rows: list[dict], out_path: str, title: str = "Classes") -> str:
    """Render a class hierarchy as a top-down tree. Returns the path."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    children: dict[int, list[int]] = {}
    byid = {r["id"]: r for r in rows}
    root = None
    for r in rows:
        if r["parent"] in byid:
            children.setdefault(r["parent"], []).append(r["id"])
        else:
            root = r["id"]
    for v in children.values():
        v.sort()

    # leaves get consecutive x slots, parents sit centered above
    xs: dict[int, float] = {}
    next_slot = [0.0]

    def place(node: int) -> float:
        kids = children.get(node, [])
        if not kids:
            xs[node] = next_slot[0]
            next_slot[0] += 1.0
        else:
            positions = [place(k) for k in kids]
            xs[node] = sum(positions) / len(positions)
        return xs[node]

    if root is None:
        raise ValueError("hierarchy rows have no root")
    place(root)

    fig, ax = plt.subplots(figsize=(max(next_slot[0], 3) * 1.4, 4.5))
    for r in rows:
        node = r["id"]
        y = -r["depth"]
        for k in children.get(node, []):
            ax.plot([xs[node], xs[k]], [y, y - 1], color="#90a4ae", zorder=1)
    for r in rows:
        node = r["id"]
        y = -r["depth"]
        ax.scatter([xs[node]], [y], s=600, color="#eceff1",
                   edgecolors="#455a64", zorder=2)
        ax.text(xs[node], y, f"{r['name']}\n#{node}", ha="center", va="center",
                fontsize=7, zorder=3)
    ax.set_title(title)
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    log.info("wrote hierarchy figure to %s", out_path)
    return out_path
