"""Breadth-first construction of full and stubborn-set-reduced state spaces."""

from __future__ import annotations

import logging
from array import array
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Set, Tuple

import numpy as np

from .kernel import Model, ModelError, StateVector, TransitionId, UsageError, decode_state, encode_state
from .stubborn import stubborn_from_enabled

logger = logging.getLogger(__name__)


class Mode(str, Enum):
    FULL = "full"
    REDUCED = "reduced"

    @classmethod
    def parse(cls, value: "Mode | str") -> "Mode":
        if isinstance(value, Mode):
            return value
        if value == "stubborn":
            return cls.REDUCED
        try:
            return cls(value)
        except ValueError:
            raise UsageError(f"unknown mode {value!r}") from None


@dataclass(frozen=True)
class SafetyViolation:
    message: str
    state: int


class StateLimitExceeded(RuntimeError):
    def __init__(self, limit: int, space: "StateSpace"):
        super().__init__(f"state limit {limit} exceeded")
        self.limit = limit
        self.space = space


class StateSpace:
    """Interned states, labelled edges and the BFS tree of one exploration.

    Edges are stored grouped by source state in ascending source order, so
    the forward adjacency is a slice of the edge arrays.
    """

    def __init__(self, model: Model, mode: Mode):
        self.model = model
        self.mode = mode
        self.complete = False
        self._keys: List[bytes] = []
        self._index: Dict[bytes, int] = {}
        self.edge_src = array("l")
        self.edge_t = array("l")
        self.edge_dst = array("l")
        self.parent = array("l")
        self.parent_t = array("l")
        self.depth = array("l")
        # first edge of each expanded state; unexpanded states have none yet
        self._edge_start = array("l")
        self._csr = None
        self._rcsr = None

    # -- construction -----------------------------------------------------
    def _intern(self, key: bytes, parent: int, t: int) -> Tuple[int, bool]:
        idx = self._index.get(key)
        if idx is not None:
            return idx, False
        idx = len(self._keys)
        self._index[key] = idx
        self._keys.append(key)
        self.parent.append(parent)
        self.parent_t.append(t)
        self.depth.append(self.depth[parent] + 1 if parent >= 0 else 0)
        return idx, True

    # -- queries ----------------------------------------------------------
    @property
    def n_states(self) -> int:
        return len(self._keys)

    @property
    def n_edges(self) -> int:
        return len(self.edge_src)

    def __len__(self) -> int:
        return self.n_states

    def state(self, idx: int) -> StateVector:
        return decode_state(self._keys[idx], self.model.width)

    def states(self):
        for key in self._keys:
            yield decode_state(key, self.model.width)

    def index_of(self, state: StateVector) -> Optional[int]:
        return self._index.get(encode_state(state, self.model.width))

    def edges(self):
        return zip(self.edge_src, self.edge_t, self.edge_dst)

    def out_edges(self, idx: int) -> List[Tuple[TransitionId, int]]:
        """(transition, destination) pairs leaving ``idx``, in firing order."""
        if idx >= len(self._edge_start):
            return []
        lo = self._edge_start[idx]
        hi = self._edge_start[idx + 1] if idx + 1 < len(self._edge_start) else self.n_edges
        return list(zip(self.edge_t[lo:hi], self.edge_dst[lo:hi]))

    def out_degree(self) -> np.ndarray:
        return np.bincount(
            np.frombuffer(self.edge_src, dtype=np.int_), minlength=self.n_states
        ) if self.n_edges else np.zeros(self.n_states, dtype=np.int_)

    def is_terminal(self, idx: int) -> bool:
        return not self.out_edges(idx)

    def csr(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Forward adjacency as (offsets, destinations, labels)."""
        if self._csr is None:
            src = np.frombuffer(self.edge_src, dtype=np.int_)
            offsets = np.zeros(self.n_states + 1, dtype=np.int_)
            np.cumsum(np.bincount(src, minlength=self.n_states), out=offsets[1:])
            self._csr = (
                offsets,
                np.frombuffer(self.edge_dst, dtype=np.int_).copy(),
                np.frombuffer(self.edge_t, dtype=np.int_).copy(),
            )
        return self._csr

    def reverse_csr(self) -> Tuple[np.ndarray, np.ndarray]:
        """Reversed adjacency as (offsets, sources)."""
        if self._rcsr is None:
            dst = np.frombuffer(self.edge_dst, dtype=np.int_)
            src = np.frombuffer(self.edge_src, dtype=np.int_)
            order = np.argsort(dst, kind="stable")
            offsets = np.zeros(self.n_states + 1, dtype=np.int_)
            np.cumsum(np.bincount(dst, minlength=self.n_states), out=offsets[1:])
            self._rcsr = (offsets, np.ascontiguousarray(src[order]))
        return self._rcsr

    def __repr__(self) -> str:
        return (
            f"StateSpace({self.model.name!r}, {self.mode.value}, "
            f"{self.n_states} states, {self.n_edges} edges)"
        )


@dataclass
class Exploration:
    """Outcome of :func:`explore`: a completed space or one stopped at an error."""

    space: StateSpace
    violation: Optional[SafetyViolation] = None

    @property
    def completed(self) -> bool:
        return self.violation is None


def explore(
    model: Model,
    mode: "Mode | str" = Mode.FULL,
    on_the_fly_safety: bool = True,
    state_limit: Optional[int] = None,
) -> Exploration:
    """Breadth-first exploration from the initial state.

    Enabled transitions are fired in descending id order; in reduced mode
    only members of the state's stubborn set are fired. The safety check
    runs on each state as it is first generated and stops the search.
    """
    mode = Mode.parse(mode)
    if mode is Mode.REDUCED and model.stubborn_rule is None:
        raise UsageError(f"model {model.name!r} has no stubborn rules; reduced mode unavailable")

    width = model.width
    fire = model.fire
    check = model.safety_check if on_the_fly_safety else None
    n_vars = len(model.initial_state)
    order = range(model.transition_count - 1, -1, -1)
    reduced = mode is Mode.REDUCED

    space = StateSpace(model, mode)
    keys = space._keys
    index = space._index
    edge_src = space.edge_src
    edge_t = space.edge_t
    edge_dst = space.edge_dst
    edge_start = space._edge_start
    parent = space.parent
    parent_t = space.parent_t
    depth = space.depth

    root_key = encode_state(model.initial_state, width)
    space._intern(root_key, -1, -1)
    if check is not None:
        message = check(model.initial_state)
        if message:
            return Exploration(space, SafetyViolation(message, 0))

    def expand(state: StateVector, src: int) -> List[Tuple[int, bytes]]:
        """Encoded successors of ``state``, highest transition id first."""
        if batch is not None:
            try:
                pairs = batch(state)
            except OverflowError as exc:
                raise ModelError(f"value overflow at state {src}: {exc}") from None
        else:
            pairs = []
            for t in order:
                succ = fire(state, t)
                if succ is None:
                    continue
                if len(succ) != n_vars:
                    raise ModelError(f"transition {t} changed the state length at state {src}")
                pairs.append((t, encode_state(succ, width)))
        if reduced:
            enabled = [False] * model.transition_count
            for t, _ in pairs:
                enabled[t] = True
            members = stubborn_from_enabled(model, state, enabled).members
            pairs = [p for p in pairs if p[0] in members]
        return pairs

    batch = model.successors
    cur = 0
    while cur < len(keys):
        state = decode_state(keys[cur], width)
        edge_start.append(len(edge_src))
        for t, key in expand(state, cur):
            dst = index.get(key)
            edge_src.append(cur)
            edge_t.append(t)
            if dst is None:
                dst = len(keys)
                index[key] = dst
                keys.append(key)
                parent.append(cur)
                parent_t.append(t)
                depth.append(depth[cur] + 1)
                edge_dst.append(dst)
                if state_limit is not None and dst >= state_limit:
                    raise StateLimitExceeded(state_limit, space)
                if check is not None:
                    message = check(decode_state(key, width))
                    if message:
                        logger.info("safety violation at state %d: %s", dst, message)
                        return Exploration(space, SafetyViolation(message, dst))
            else:
                edge_dst.append(dst)
        cur += 1

    space.complete = True
    logger.debug("explored %r", space)
    return Exploration(space)


def trace_to(space: StateSpace, target: int) -> List[Tuple[int, Optional[TransitionId]]]:
    """BFS-tree path from the initial state to ``target``.

    Each element is (state index, transition that led into it); the first
    element carries None.
    """
    if not 0 <= target < space.n_states:
        raise UsageError(f"state {target} was not discovered")
    path = []
    v = target
    while v >= 0:
        t = space.parent_t[v]
        path.append((v, t if t >= 0 else None))
        v = space.parent[v]
    path.reverse()
    return path


def terminal_states(space: StateSpace) -> Set[int]:
    if not space.complete:
        raise UsageError("terminal states are only defined for a completed space")
    deg = space.out_degree()
    return set(np.flatnonzero(deg == 0).tolist())
