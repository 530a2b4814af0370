import pytest

from stubbornmc.explorer import Mode, StateLimitExceeded, explore, terminal_states, trace_to
from stubbornmc.kernel import Model, ModelError, UsageError, fire_checked
from stubbornmc.models import build_fixture, build_peterson

from conftest import VARIANTS, complete_space, model
from oracles import bfs_distances, reachable_graph


@pytest.mark.parametrize(
    "variant,states,edges",
    [("plain", 133, 266), ("non-progress-revealing", 163, 326), ("correct", 574, 1148)],
)
def test_full_counts_n2(variant, states, edges):
    space = explore(model(variant, 2), "full").space
    assert (space.n_states, space.n_edges) == (states, edges)
    assert space.complete


@pytest.mark.parametrize("variant", VARIANTS)
def test_full_space_matches_brute_force(variant):
    states, edges = reachable_graph(model(variant, 2))
    space = complete_space(variant, 2)
    assert set(space.states()) == set(states)
    got = {(space.state(u), t, space.state(v)) for u, t, v in space.edges()}
    assert got == edges


def test_mutex_violation_found_on_the_fly():
    result = explore(model("mutex-violating", 2), "full")
    assert not result.completed
    assert result.violation.message == "Mutex violated"
    assert result.space.state(result.violation.state)[:2] == (7, 7)


def test_mutex_without_safety_runs_to_completion():
    space = explore(model("mutex-violating", 2), "full", on_the_fly_safety=False).space
    assert space.complete and space.n_states == 788


def test_safety_checked_on_initial_state():
    m = Model("bad-start", 1, (0,), fire=lambda s, t: (1,) if s[0] == 0 else None,
              safety_check=lambda s: "boom" if s[0] == 0 else None)
    result = explore(m)
    assert result.violation.state == 0 and result.space.n_states == 1


def test_empty_model():
    space = explore(build_fixture("empty")).space
    assert (space.n_states, space.n_edges) == (1, 0)
    assert terminal_states(space) == {0}


def test_diamond_full_and_reduced():
    m = build_fixture("diamond")
    full = explore(m, "full").space
    red = explore(m, "reduced").space
    assert (full.n_states, full.n_edges) == (4, 4)
    assert (red.n_states, red.n_edges) == (3, 2)


def test_reduced_needs_rules():
    m = Model("norules", 1, (0,), fire=lambda s, t: None)
    with pytest.raises(UsageError):
        explore(m, "reduced")


def test_unknown_mode():
    with pytest.raises(UsageError):
        explore(model("plain", 2), "sideways")


def test_state_limit():
    with pytest.raises(StateLimitExceeded) as info:
        explore(model("correct", 2), state_limit=50)
    assert info.value.space.n_states == 51


def test_overflow_propagates_as_model_error():
    m = Model("count", 1, (0,), fire=lambda s, t: (s[0] + 1,))
    with pytest.raises(ModelError, match="overflow"):
        explore(m)


def test_length_change_is_model_error():
    m = Model("grow", 1, (0,), fire=lambda s, t: (0, 0) if len(s) == 1 else None)
    with pytest.raises(ModelError):
        explore(m)


def test_trace_to_root():
    space = complete_space("correct", 2)
    assert trace_to(space, 0) == [(0, None)]


def test_trace_to_unknown_state():
    with pytest.raises(UsageError):
        trace_to(complete_space("correct", 2), 10**6)


def test_first_non_progress_state_trace():
    m = model("non-progress-revealing", 2)
    space = complete_space("non-progress-revealing", 2)
    target = space.index_of((1, 8, 0, 0, 0, 0, 0, 0, 0))
    path = trace_to(space, target)
    assert [t for _, t in path] == [None, 3, 0]  # customer 1 stops, then customer 0 starts


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("mode", ["full", "reduced"])
def test_trace_lengths_are_bfs_depths(variant, mode):
    space = complete_space(variant, 2, mode)
    edges = {(space.state(u), t, space.state(v)) for u, t, v in space.edges()}
    dist = bfs_distances(None, edges, space.state(0))
    m = model(variant, 2)
    for v in range(space.n_states):
        path = trace_to(space, v)
        assert len(path) - 1 == dist[space.state(v)] == space.depth[v]
        state = m.initial_state
        for idx, t in path[1:]:
            state = fire_checked(m, state, t)
            assert state == space.state(idx)


def test_plain_has_no_terminal_states():
    for n in (2, 3):
        assert terminal_states(complete_space("plain", n)) == set()


def test_plain_no_terminal_brute_force():
    m = model("plain", 2)
    states, _ = reachable_graph(m)
    assert all(any(m.fire(s, t) is not None for t in m.transitions) for s in states)


def test_npr_terminal_contains_all_stopped():
    space = complete_space("non-progress-revealing", 2)
    term = {space.state(v) for v in terminal_states(space)}
    assert (8, 8, 0, 0, 0, 0, 0, 0, 0) in term
    m = model("non-progress-revealing", 2)
    states, _ = reachable_graph(m)
    brute = {s for s in states if all(m.fire(s, t) is None for t in m.transitions)}
    assert term == brute


def test_terminal_states_requires_complete_space():
    partial = explore(model("mutex-violating", 2)).space
    with pytest.raises(UsageError):
        terminal_states(partial)


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("n", [2, 3])
def test_interning_and_edge_accounting(variant, n):
    space = complete_space(variant, n, "reduced")
    states = list(space.states())
    assert len(set(states)) == len(states)
    pairs = [(u, t) for u, t, _ in space.edges()]
    assert len(set(pairs)) == len(pairs) == space.n_edges


@pytest.mark.parametrize("variant", VARIANTS)
def test_reduced_subset_of_full(variant):
    full = complete_space(variant, 2)
    red = complete_space(variant, 2, "reduced")
    assert set(red.states()) <= set(full.states())
    full_edges = {(full.state(u), t, full.state(v)) for u, t, v in full.edges()}
    red_edges = {(red.state(u), t, red.state(v)) for u, t, v in red.edges()}
    assert red_edges <= full_edges


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("n", [2, 3])
def test_reduced_dead_ends_are_really_terminal(variant, n):
    m = model(variant, n)
    red = complete_space(variant, n, "reduced")
    for v in terminal_states(red):
        s = red.state(v)
        assert all(m.fire(s, t) is None for t in m.transitions)


def test_mode_parse_accepts_stubborn():
    assert Mode.parse("stubborn") is Mode.REDUCED
