"""Stubborn sets via strong components of the transition dependency graph.

The dependency graph has an arc ``t -> u`` when the model's rule says that
``u`` must be in the stubborn set whenever ``t`` is. A depth-first Tarjan
search is rooted at the lowest-numbered enabled transition. The first strong
component to complete that holds an enabled transition is closed under the
rules once everything reachable from it is added, and that closure is the
stubborn set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .kernel import Model, StateVector, TransitionId, UsageError, rule_targets


@dataclass(frozen=True)
class StubbornSet:
    members: FrozenSet[TransitionId]
    seed: Optional[TransitionId]
    enabled: Tuple[TransitionId, ...]

    def __contains__(self, t: object) -> bool:
        return t in self.members

    def __len__(self) -> int:
        return len(self.members)


EMPTY = StubbornSet(frozenset(), None, ())


class DependencyGraph:
    """Rule arcs at one fixed state, materialized on first use."""

    def __init__(self, model: Model, state: StateVector):
        if model.stubborn_rule is None:
            raise UsageError(f"model {model.name!r} has no stubborn rules")
        self.model = model
        self.state = state
        self._cache: Dict[TransitionId, Tuple[TransitionId, ...]] = {}

    def successors(self, t: TransitionId) -> Tuple[TransitionId, ...]:
        deps = self._cache.get(t)
        if deps is None:
            deps = tuple(rule_targets(self.model, self.state, t))
            self._cache[t] = deps
        return deps


def _first_enabled_component(
    graph: DependencyGraph, seed: TransitionId, enabled: Sequence[bool]
) -> FrozenSet[TransitionId]:
    index: Dict[int, int] = {seed: 0}
    low: Dict[int, int] = {seed: 0}
    stack: List[int] = [seed]
    on_stack = {seed}
    counter = 1
    work = [(seed, graph.successors(seed), 0)]
    while work:
        v, succ, pos = work[-1]
        descended = False
        while pos < len(succ):
            w = succ[pos]
            pos += 1
            if w not in index:
                work[-1] = (v, succ, pos)
                index[w] = low[w] = counter
                counter += 1
                stack.append(w)
                on_stack.add(w)
                work.append((w, graph.successors(w), 0))
                descended = True
                break
            if w in on_stack and index[w] < low[v]:
                low[v] = index[w]
        if descended:
            continue
        work.pop()
        if low[v] == index[v]:
            component = []
            while True:
                w = stack.pop()
                on_stack.discard(w)
                component.append(w)
                if w == v:
                    break
            if any(enabled[c] for c in component):
                return _closure(graph, component)
        if work:
            u = work[-1][0]
            if low[v] < low[u]:
                low[u] = low[v]
    # the seed's own component holds an enabled transition, so this is unreachable
    raise AssertionError("strong component search ended without a result")


def _closure(graph: DependencyGraph, roots: Sequence[TransitionId]) -> FrozenSet[TransitionId]:
    seen = set(roots)
    frontier = list(roots)
    while frontier:
        t = frontier.pop()
        for u in graph.successors(t):
            if u not in seen:
                seen.add(u)
                frontier.append(u)
    return frozenset(seen)


def stubborn_from_enabled(
    model: Model, state: StateVector, enabled: Sequence[bool]
) -> StubbornSet:
    """Like :func:`compute_stubborn` but reuses a known enabledness vector."""
    seed = next((t for t, on in enumerate(enabled) if on), None)
    if seed is None:
        if model.stubborn_rule is None:
            raise UsageError(f"model {model.name!r} has no stubborn rules")
        return EMPTY
    graph = DependencyGraph(model, state)
    if not graph.successors(seed):
        # a dependency-free enabled seed is its own first completed component
        return StubbornSet(frozenset((seed,)), seed, (seed,))
    members = _first_enabled_component(graph, seed, enabled)
    return StubbornSet(
        members, seed, tuple(t for t in sorted(members) if enabled[t])
    )


def compute_stubborn(model: Model, state: StateVector) -> StubbornSet:
    """Stubborn set of ``state`` satisfying D0, D1 and D2 for valid rules.

    Terminal states get the empty set.
    """
    enabled = [model.fire(state, t) is not None for t in model.transitions]
    return stubborn_from_enabled(model, state, enabled)


def enabled_in(model: Model, state: StateVector, stubborn) -> List[TransitionId]:
    members = stubborn.members if isinstance(stubborn, StubbornSet) else stubborn
    return [t for t in sorted(members) if model.fire(state, t) is not None]
