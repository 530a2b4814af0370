"""Verdicts computed on a finished state space, plus brute-force oracles.

Witnesses always start at the BFS-shallowest offending state; since states
are numbered in BFS discovery order, that is simply the smallest index.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ._kernels import kernels
from .explorer import Mode, StateSpace, explore, terminal_states, trace_to
from .kernel import Model, ModelError, StateVector, TransitionId, UsageError, fire_checked
from .stubborn import compute_stubborn

MAY_MESSAGE = "May-type non-progress error"
MUST_MESSAGE = "Must-type non-progress error"
AGEF_MESSAGE = "Not AG EF terminating"
INFINITE_MESSAGE = "Infinite execution avoiding the excluded transitions"


@dataclass(frozen=True)
class Counterexample:
    """A path from the initial state, optionally closed into a lasso.

    ``states[i + 1]`` is reached from ``states[i]`` by ``transitions[i]``.
    ``separator`` is the number of leading states that still satisfy the
    property; the states after it form the bad region. If ``cycle_start``
    is set, firing ``closing_transition`` at the last state leads back to
    ``states[cycle_start]``.
    """

    states: Tuple[StateVector, ...]
    transitions: Tuple[TransitionId, ...]
    message: str
    separator: Optional[int] = None
    cycle_start: Optional[int] = None
    closing_transition: Optional[TransitionId] = None
    depth: int = 0

    @property
    def prefix(self) -> Tuple[StateVector, ...]:
        if self.separator is None:
            return self.states
        return self.states[: self.separator]

    @property
    def continuation(self) -> Tuple[StateVector, ...]:
        if self.separator is None:
            return ()
        return self.states[self.separator :]

    @property
    def is_lasso(self) -> bool:
        return self.cycle_start is not None


def replay(model: Model, ce: Counterexample) -> bool:
    """True iff firing the recorded transitions reproduces the recorded states."""
    if not ce.states or tuple(ce.states[0]) != model.initial_state:
        return False
    if len(ce.transitions) != len(ce.states) - 1:
        return False
    for i, t in enumerate(ce.transitions):
        if fire_checked(model, ce.states[i], t) != tuple(ce.states[i + 1]):
            return False
    if ce.cycle_start is not None:
        if ce.closing_transition is None:
            return False
        back = fire_checked(model, ce.states[-1], ce.closing_transition)
        if back != tuple(ce.states[ce.cycle_start]):
            return False
    return True


@dataclass(frozen=True)
class AgEfVerdict:
    holds: bool
    witness: Optional[int] = None
    counterexample: Optional[Counterexample] = None


@dataclass(frozen=True)
class ProgressVerdict:
    holds: bool
    witness: Optional[Counterexample] = None


@dataclass(frozen=True)
class InfiniteOccurrenceQuery:
    t_omega: TransitionId
    t_star: FrozenSet[TransitionId] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "t_star", frozenset(self.t_star))


# -- helpers -----------------------------------------------------------------


def _require_complete(space: StateSpace) -> None:
    if not space.complete:
        raise UsageError("this analysis needs a completely explored state space")


def _path(space: StateSpace, target: int) -> Tuple[List[int], List[TransitionId]]:
    steps = trace_to(space, target)
    return [v for v, _ in steps], [t for _, t in steps[1:]]


def _walk(space: StateSpace, start: int) -> Tuple[List[int], List[TransitionId], Optional[int], Optional[TransitionId]]:
    """Follow the lowest-numbered outgoing edge until a repeat or a dead end."""
    seen: Dict[int, int] = {start: 0}
    nodes = [start]
    labels: List[TransitionId] = []
    v = start
    while True:
        out = space.out_edges(v)
        if not out:
            return nodes, labels, None, None
        t, w = min(out)
        if w in seen:
            return nodes, labels, seen[w], t
        seen[w] = len(nodes)
        nodes.append(w)
        labels.append(t)
        v = w


def _region_counterexample(space: StateSpace, witness: int, message: str) -> Counterexample:
    nodes, labels = _path(space, witness)
    tail, tail_labels, cycle_at, closing = _walk(space, witness)
    sep = len(nodes) - 1
    nodes = nodes[:-1] + tail
    labels = labels + tail_labels
    return Counterexample(
        states=tuple(space.state(v) for v in nodes),
        transitions=tuple(labels),
        message=message,
        separator=sep,
        cycle_start=None if cycle_at is None else sep + cycle_at,
        closing_transition=closing,
        depth=space.depth[witness],
    )


def _backward_unreached(space: StateSpace, sources: Iterable[int]) -> np.ndarray:
    offsets, targets = space.reverse_csr()
    reached = kernels.backward_reach(space.n_states, offsets, targets, list(sources))
    return np.flatnonzero(np.frombuffer(bytes(reached), dtype=np.uint8) == 0)


def _progress_states(space: StateSpace, model: Model) -> List[int]:
    if model.may_progress is None:
        raise UsageError(f"model {model.name!r} defines no progress predicate")
    pred = model.may_progress
    return [i for i, s in enumerate(space.states()) if pred(s)]


def _restricted_csr(space: StateSpace, keep: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """CSR of the space with only the edges where ``keep`` is true."""
    offsets, dst, _ = space.csr()
    src = np.repeat(np.arange(space.n_states), np.diff(offsets))
    src, dst = src[keep], dst[keep]
    new_offsets = np.zeros(space.n_states + 1, dtype=np.int_)
    np.cumsum(np.bincount(src, minlength=space.n_states), out=new_offsets[1:])
    return new_offsets, np.ascontiguousarray(dst, dtype=np.int_)


def _cycle_back(space: StateSpace, u: int, first: Tuple[TransitionId, int], allowed) -> Tuple[List[int], List[TransitionId]]:
    """Shortest path u -first-> v ~> u using only edges accepted by ``allowed``.

    Returns the cycle's states after ``u`` and its labels (closing label last).
    """
    t0, v = first
    if v == u:
        return [], [t0]
    prev: Dict[int, Tuple[int, TransitionId]] = {v: (u, t0)}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        for t, y in space.out_edges(x):
            if not allowed(x, t, y) or y in prev:
                continue
            prev[y] = (x, t)
            if y == u:
                queue.clear()
                break
            queue.append(y)
    if u not in prev:
        raise AssertionError("no path closes the cycle inside its component")
    nodes: List[int] = []
    labels: List[TransitionId] = []
    x = u
    while True:
        p, t = prev[x]
        labels.append(t)
        if p == u:
            break
        nodes.append(p)
        x = p
    nodes.reverse()
    labels.reverse()
    return nodes, labels


def _lasso(space: StateSpace, u: int, first, allowed, message: str) -> Counterexample:
    nodes, labels = _path(space, u)
    cyc_nodes, cyc_labels = _cycle_back(space, u, first, allowed)
    return Counterexample(
        states=tuple(space.state(v) for v in nodes + cyc_nodes),
        transitions=tuple(labels + cyc_labels[:-1]),
        message=message,
        cycle_start=len(nodes) - 1,
        closing_transition=cyc_labels[-1],
        depth=space.depth[u],
    )


# -- analyses ----------------------------------------------------------------


def check_agef(space: StateSpace) -> AgEfVerdict:
    """Is a terminal state reachable from every state of the space?"""
    _require_complete(space)
    unreached = _backward_unreached(space, sorted(terminal_states(space)))
    if not len(unreached):
        return AgEfVerdict(True)
    w = int(unreached[0])
    return AgEfVerdict(False, w, _region_counterexample(space, w, AGEF_MESSAGE))


def check_may_progress(space: StateSpace, model: Model) -> ProgressVerdict:
    _require_complete(space)
    unreached = _backward_unreached(space, _progress_states(space, model))
    if not len(unreached):
        return ProgressVerdict(True)
    w = int(unreached[0])
    return ProgressVerdict(False, _region_counterexample(space, w, MAY_MESSAGE))


def check_may_progress_via_terminals(space: StateSpace, model: Model) -> ProgressVerdict:
    """May-progress restricted to terminal states.

    Only meaningful for AG EF terminating models; callers confirm that with
    :func:`check_agef` afterwards.
    """
    _require_complete(space)
    if model.may_progress is None:
        raise UsageError(f"model {model.name!r} defines no progress predicate")
    for v in sorted(terminal_states(space)):
        if not model.may_progress(space.state(v)):
            nodes, labels = _path(space, v)
            return ProgressVerdict(
                False,
                Counterexample(
                    states=tuple(space.state(x) for x in nodes),
                    transitions=tuple(labels),
                    message=MAY_MESSAGE,
                    depth=space.depth[v],
                ),
            )
    return ProgressVerdict(True)


def check_must_progress(space: StateSpace, model: Model) -> ProgressVerdict:
    """Does every maximal path reach a progress state? Full spaces only."""
    if space.mode is not Mode.FULL:
        raise UsageError("must progress is not preserved by the reduction; use a full state space")
    _require_complete(space)
    progress = np.zeros(space.n_states, dtype=bool)
    progress[_progress_states(space, model)] = True
    offsets, dst, _ = space.csr()
    src = np.repeat(np.arange(space.n_states), np.diff(offsets))
    keep = ~progress[src] & ~progress[dst]
    r_off, r_dst = _restricted_csr(space, keep)
    comp = np.asarray(kernels.scc_ids(space.n_states, r_off, r_dst))
    sizes = np.bincount(comp)
    on_cycle = (sizes[comp] > 1) & ~progress
    loops = src[keep][src[keep] == dst[keep]]
    on_cycle[loops] = True
    deg = np.diff(offsets)
    stuck = (deg == 0) & ~progress
    candidates = np.flatnonzero(on_cycle | stuck)
    if not len(candidates):
        return ProgressVerdict(True)
    u = int(candidates[0])
    if stuck[u]:
        nodes, labels = _path(space, u)
        ce = Counterexample(
            states=tuple(space.state(v) for v in nodes),
            transitions=tuple(labels),
            message=MUST_MESSAGE,
            depth=space.depth[u],
        )
        return ProgressVerdict(False, ce)

    def allowed(x, t, y):
        return comp[x] == comp[y]

    first = min((t, y) for t, y in space.out_edges(u) if comp[y] == comp[u])
    return ProgressVerdict(False, _lasso(space, u, first, allowed, MUST_MESSAGE))


def check_infinite_occurrence(
    space: StateSpace, query: InfiniteOccurrenceQuery
) -> Tuple[bool, Optional[Counterexample]]:
    """Is there an infinite run firing ``t_omega`` forever but ``t_star`` only finitely often?

    Equivalently: an edge labelled ``t_omega`` inside a strong component of
    the space with every ``t_star`` edge removed.
    """
    _require_complete(space)
    if query.t_omega in query.t_star:
        return False, None
    offsets, dst, labels = space.csr()
    if not len(labels):
        return False, None
    banned = np.isin(labels, np.fromiter(query.t_star, dtype=np.int_, count=len(query.t_star)))
    keep = ~banned
    r_off, r_dst = _restricted_csr(space, keep)
    comp = np.asarray(kernels.scc_ids(space.n_states, r_off, r_dst))
    src = np.repeat(np.arange(space.n_states), np.diff(offsets))
    hits = np.flatnonzero((labels == query.t_omega) & (comp[src] == comp[dst]))
    if not len(hits):
        return False, None
    e = int(hits[0])  # edges are grouped by ascending source
    u, v = int(src[e]), int(dst[e])
    star = query.t_star

    def allowed(x, t, y):
        return t not in star and comp[x] == comp[y]

    return True, _lasso(space, u, (query.t_omega, v), allowed, INFINITE_MESSAGE)


# -- brute-force oracles -----------------------------------------------------


@dataclass(frozen=True)
class RuleViolation:
    condition: str  # "D1" or "D2"
    state: StateVector
    transition: TransitionId
    sequence: Tuple[TransitionId, ...]

    def __str__(self) -> str:
        seq = " ".join(map(str, self.sequence)) or "(empty)"
        return f"{self.condition} fails for transition {self.transition} after {seq} from {self.state}"


@dataclass
class RuleCheckReport:
    checked_states: int = 0
    violations: List[RuleViolation] = field(default_factory=list)
    refused: bool = False

    @property
    def ok(self) -> bool:
        return not self.refused and not self.violations


def _outside_closure(model: Model, state: StateVector, outside: Sequence[TransitionId]):
    """States reachable from ``state`` by outside transitions, with BFS parents."""
    parent: Dict[StateVector, Optional[Tuple[StateVector, TransitionId]]] = {state: None}
    queue = deque([state])
    while queue:
        x = queue.popleft()
        for u in outside:
            y = model.fire(x, u)
            if y is not None and y not in parent:
                parent[y] = (x, u)
                queue.append(y)
    return parent


def _sequence(parent, x) -> Tuple[TransitionId, ...]:
    seq = []
    while parent[x] is not None:
        x, u = parent[x]
        seq.append(u)
    return tuple(reversed(seq))


def _check_state_rules(model: Model, s: StateVector, max_violations: int) -> List[RuleViolation]:
    members = compute_stubborn(model, s).members
    outside = [u for u in model.transitions if u not in members]
    found: List[RuleViolation] = []
    closure = _outside_closure(model, s, outside)

    for t in sorted(members):
        if model.fire(s, t) is None:
            continue
        for x in closure:
            if model.fire(x, t) is None:
                found.append(RuleViolation("D2", s, t, _sequence(closure, x)))
                break

    # D1: every outside sequence followed by t must also run with t first and
    # end in the same state. Pair each outside-reached x with the state y
    # reached by t first and then the same sequence (None if that fails).
    for t in sorted(members):
        start = (s, model.fire(s, t))
        pairs: Dict[tuple, Optional[Tuple[tuple, TransitionId]]] = {start: None}
        queue = deque([start])
        while queue:
            pair = queue.popleft()
            x, y = pair
            z = model.fire(x, t)
            if z is not None and z != y:
                seq = []
                p = pair
                while pairs[p] is not None:
                    p, u = pairs[p]
                    seq.append(u)
                found.append(RuleViolation("D1", s, t, tuple(reversed(seq))))
                break
            for u in outside:
                x2 = model.fire(x, u)
                if x2 is None:
                    continue
                y2 = None if y is None else model.fire(y, u)
                nxt = (x2, y2)
                if nxt not in pairs:
                    pairs[nxt] = (pair, u)
                    queue.append(nxt)
        if len(found) >= max_violations:
            break
    return found


def verify_d1_d2(
    model: Model, space: StateSpace, max_states: int = 20_000, max_violations: int = 50
) -> RuleCheckReport:
    """Exhaustively test D1 and D2 of the stubborn set at every state of ``space``.

    For each state the sub-state-space reachable by transitions outside its
    stubborn set is enumerated in the full transition relation. Refuses
    (``refused=True``) when the space has more than ``max_states`` states.
    """
    report = RuleCheckReport()
    if model.stubborn_rule is None:
        raise UsageError(f"model {model.name!r} has no stubborn rules")
    if space.n_states > max_states:
        report.refused = True
        return report
    for s in space.states():
        report.checked_states += 1
        report.violations.extend(_check_state_rules(model, s, max_violations))
        if len(report.violations) >= max_violations:
            break
    return report


@dataclass
class ComparisonReport:
    full_states: int
    full_edges: int
    reduced_states: int
    reduced_edges: int
    verdicts: Dict[str, Tuple[object, object]] = field(default_factory=dict)
    discrepancies: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.discrepancies


def _safety_hit(space: StateSpace, model: Model) -> bool:
    if model.safety_check is None:
        return False
    return any(model.safety_check(s) for s in space.states())


def compare_full_reduced(model: Model, state_limit: Optional[int] = None) -> ComparisonReport:
    """Build both spaces completely and compare the verdicts the reduction must preserve."""
    full = explore(model, Mode.FULL, on_the_fly_safety=False, state_limit=state_limit).space
    red = explore(model, Mode.REDUCED, on_the_fly_safety=False, state_limit=state_limit).space
    rep = ComparisonReport(full.n_states, full.n_edges, red.n_states, red.n_edges)

    def record(name: str, a, b) -> None:
        rep.verdicts[name] = (a, b)
        if a != b:
            rep.discrepancies.append(f"{name}: full={a} reduced={b}")

    term_full = {full.state(v) for v in terminal_states(full)}
    term_red = {red.state(v) for v in terminal_states(red)}
    record("terminal-states", len(term_full), len(term_red))
    if term_full != term_red:
        rep.discrepancies.append("terminal-states: the sets differ")

    agef_full = check_agef(full).holds
    agef_red = check_agef(red).holds
    record("agef", agef_full, agef_red)
    record("safety", _safety_hit(full, model), _safety_hit(red, model))

    if model.may_progress is not None:
        may_full = check_may_progress(full, model).holds
        if agef_red:
            may_red = check_may_progress_via_terminals(red, model).holds
        else:
            # the terminal shortcut is only sound for AG EF terminating spaces; use the general search
            may_red = check_may_progress(red, model).holds
        record("may-progress", may_full, may_red)
    return rep
