"""Hybrid document routing.

Two route shapes share one registry:

* explicit routes name an ordered list of steps, each bound to a role
  class or a single user and to the action that discharges the step;
* spectrum routes name a sequence of stages, each scoped to a role
  subtree with a visit window [min, max]. Work inside a stage is Modify,
  one visit per call; moving forward needs the minimum met, and the run
  completes when the last stage forwards via the route's terminal action.

A document class is matched to a route by walking its ISA parent chain
and taking the nearest registered ancestor; classes that reach the root
without a hit fall back to the route registered for the Other exception
class, which a usable configuration must provide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .access import Action
from .errors import (
    MalformedInput,
    MalformedRoute,
    NoRouteRegistry,
    NotACandidate,
    RouteExhausted,
    UnknownTarget,
    WrongAction,
)
from .hierarchy import Hierarchy, check_text_field

STEP_ACTIONS = (Action.MODIFY, Action.SIGN)


class RunStatus(str, Enum):
    ACTIVE = "Active"
    COMPLETED = "Completed"
    REJECTED = "Rejected"


@dataclass(frozen=True)
class Step:
    by_user: bool   # selector names a user id instead of a role class
    selector: int
    action: Action


@dataclass(frozen=True)
class Stage:
    role: int       # role class: any descendant may work the stage
    min_visits: int
    max_visits: int


@dataclass
class Route:
    id: int
    name: str
    applies_to: int            # document class id
    kind: str                  # "explicit" | "spectrum"
    steps: tuple[Step, ...] = ()
    stages: tuple[Stage, ...] = ()
    terminal: Action = Action.MODIFY

    def final_action(self) -> Action:
        if self.kind == "explicit":
            return self.steps[-1].action
        return self.terminal


@dataclass
class RouteRun:
    doc: int
    route: int
    status: RunStatus = RunStatus.ACTIVE
    cursor: int = 0     # pending step (explicit) or current stage (spectrum)
    visits: int = 0     # visits inside the current stage
    history: list[tuple[int, str, int]] = field(default_factory=list)
    # history rows are (user id, action value, step/stage index)


class RouteRegistry:
    """Routes keyed by document class; re-registration replaces."""

    def __init__(self):
        self.routes: dict[int, Route] = {}
        self._next = 1

    def register_explicit(self, name: str, applies_to: int,
                          steps: list[Step]) -> Route:
        check_text_field(name)
        if not steps:
            raise MalformedRoute("explicit route needs at least one step")
        for s in steps:
            if s.action not in STEP_ACTIONS:
                raise MalformedRoute(f"step action {s.action.value} not allowed")
        return self._put(Route(self._take(), name, applies_to, "explicit",
                               steps=tuple(steps)))

    def register_spectrum(self, name: str, applies_to: int,
                          stages: list[Stage], terminal: Action) -> Route:
        check_text_field(name)
        if not stages:
            raise MalformedRoute("spectrum route needs at least one stage")
        for st in stages:
            if st.min_visits < 1 or st.max_visits < st.min_visits:
                raise MalformedRoute(
                    f"stage visit window [{st.min_visits},{st.max_visits}] is empty")
        if terminal not in STEP_ACTIONS:
            raise MalformedRoute(f"terminal action {terminal.value} not allowed")
        return self._put(Route(self._take(), name, applies_to, "spectrum",
                               stages=tuple(stages), terminal=terminal))

    def _take(self) -> int:
        rid = self._next
        self._next += 1
        return rid

    def _put(self, route: Route) -> Route:
        old = self.for_class(route.applies_to)
        if old is not None:
            del self.routes[old.id]
        self.routes[route.id] = route
        return route

    def route(self, rid: int) -> Route:
        try:
            return self.routes[rid]
        except (KeyError, TypeError):
            raise UnknownTarget(f"route {rid}") from None

    def for_class(self, doc_class: int) -> Route | None:
        for r in self.routes.values():
            if r.applies_to == doc_class:
                return r
        return None

    def route_for(self, doc_class: int, docs: Hierarchy) -> Route:
        """Nearest registered ancestor, falling back to the Other route."""
        for cid in docs.parent_chain(doc_class):
            r = self.for_class(cid)
            if r is not None:
                return r
        r = self.for_class(docs.other_id)
        if r is not None:
            return r
        raise NoRouteRegistry(f"no route covers document class {doc_class}")

    def drop_for_classes(self, class_ids: set[int]) -> list[int]:
        """Remove routes bound to removed document classes."""
        gone = [r.id for r in self.routes.values() if r.applies_to in class_ids]
        for rid in gone:
            del self.routes[rid]
        return gone

    # --- serialization -----------------------------------------------------

    def to_text(self) -> str:
        lines = [f"next|{self._next}"]
        for rid in sorted(self.routes):
            r = self.routes[rid]
            if r.kind == "explicit":
                body = ";".join(
                    f"{'u' if s.by_user else 'r'}:{s.selector}:{s.action.value}"
                    for s in r.steps)
            else:
                body = ";".join(
                    f"{st.role}:{st.min_visits}:{st.max_visits}" for st in r.stages)
            lines.append(f"{r.id}|{r.name}|{r.applies_to}|{r.kind}"
                         f"|{r.terminal.value}|{body}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RouteRegistry":
        reg = cls()
        for raw in text.splitlines():
            if not raw.strip():
                continue
            parts = raw.split("|")
            if parts[0] == "next" and len(parts) == 2:
                reg._next = int(parts[1])
                continue
            if len(parts) != 6:
                raise MalformedInput(f"bad route record: {raw!r}")
            rid, name, applies, kind, terminal, body = parts
            route = Route(int(rid), name, int(applies), kind,
                          terminal=Action(terminal))
            items = [x for x in body.split(";") if x]
            if kind == "explicit":
                steps = []
                for item in items:
                    k, sel, act = item.split(":")
                    steps.append(Step(k == "u", int(sel), Action(act)))
                route.steps = tuple(steps)
            elif kind == "spectrum":
                route.stages = tuple(
                    Stage(*(int(x) for x in item.split(":"))) for item in items)
            else:
                raise MalformedInput(f"bad route kind {kind!r}")
            reg.routes[route.id] = route
        return reg


# --- run state machine -------------------------------------------------------


def start_run(doc: int, route: Route) -> RouteRun:
    return RouteRun(doc=doc, route=route.id)


def eligible(run: RouteRun, route: Route, user_id: int, user_role: int,
             roles: Hierarchy) -> bool:
    """May this user act on the run's pending step or stage?"""
    if run.status is not RunStatus.ACTIVE:
        return False
    if route.kind == "explicit":
        step = route.steps[run.cursor]
        if step.by_user:
            return user_id == step.selector
        return roles.is_subtype(user_role, step.selector)
    stage = route.stages[run.cursor]
    return roles.is_subtype(user_role, stage.role)


def pending_action(run: RouteRun, route: Route, forward: bool = False) -> Action:
    """The action the next call must carry."""
    if route.kind == "explicit":
        return route.steps[run.cursor].action
    if forward and run.cursor == len(route.stages) - 1:
        return route.terminal
    return Action.MODIFY


def advance(run: RouteRun, route: Route, user_id: int, user_role: int,
            roles: Hierarchy, action: Action, forward: bool = True) -> RunStatus:
    """Apply one work item to an active run. Mutates the run; the caller
    owns access checks and the matching document mutation."""
    if run.status is not RunStatus.ACTIVE:
        raise RouteExhausted(f"run for document {run.doc} is {run.status.value}")
    if not eligible(run, route, user_id, user_role, roles):
        raise NotACandidate(f"user {user_id} on step {run.cursor + 1}")

    if route.kind == "explicit":
        step = route.steps[run.cursor]
        if action is not step.action:
            raise WrongAction(f"step {run.cursor + 1} needs {step.action.value}, "
                              f"got {action.value}")
        run.history.append((user_id, action.value, run.cursor))
        run.cursor += 1
        if run.cursor == len(route.steps):
            run.status = RunStatus.COMPLETED
        return run.status

    stage = route.stages[run.cursor]
    last = run.cursor == len(route.stages) - 1
    needed = route.terminal if (forward and last) else Action.MODIFY
    if action is not needed:
        raise WrongAction(f"stage {run.cursor + 1} needs {needed.value}, "
                          f"got {action.value}")
    visits = run.visits + 1
    if visits > stage.max_visits:
        raise WrongAction(f"stage {run.cursor + 1} exhausted its "
                          f"{stage.max_visits} visit window")
    if forward and visits < stage.min_visits:
        raise WrongAction(f"stage {run.cursor + 1} needs {stage.min_visits} "
                          f"visits before moving on")
    if last and not forward and visits == stage.max_visits:
        raise WrongAction(f"stage {run.cursor + 1} is the last and at its "
                          f"visit limit, it must forward")
    run.history.append((user_id, action.value, run.cursor))
    run.visits = visits
    if forward:
        run.cursor += 1
        run.visits = 0
        if last:
            run.status = RunStatus.COMPLETED
    elif visits == stage.max_visits and stage.min_visits <= visits and not last:
        # window closed: the stage rolls over on its own
        run.cursor += 1
        run.visits = 0
    return run.status


def reject(run: RouteRun) -> RunStatus:
    if run.status is not RunStatus.ACTIVE:
        raise RouteExhausted(f"run for document {run.doc} is {run.status.value}")
    run.status = RunStatus.REJECTED
    return run.status


def runs_to_text(runs: dict[int, RouteRun]) -> str:
    lines = []
    for doc in sorted(runs):
        r = runs[doc]
        hist = ";".join(f"{u}:{a}:{i}" for u, a, i in r.history)
        lines.append(f"{r.doc}|{r.route}|{r.status.value}|{r.cursor}|{r.visits}|{hist}")
    return "\n".join(lines) + ("\n" if lines else "")


def runs_from_text(text: str) -> dict[int, RouteRun]:
    runs: dict[int, RouteRun] = {}
    for raw in text.splitlines():
        if not raw.strip():
            continue
        parts = raw.split("|")
        if len(parts) != 6:
            raise MalformedInput(f"bad run record: {raw!r}")
        run = RouteRun(int(parts[0]), int(parts[1]), RunStatus(parts[2]),
                       int(parts[3]), int(parts[4]))
        for item in parts[5].split(";"):
            if item:
                u, a, i = item.split(":")
                run.history.append((int(u), a, int(i)))
        runs[run.doc] = run
    return runs
