"""Independent brute-force helpers. They use only ``model.fire``."""

from collections import deque


def reachable_graph(model, transitions=None):
    """Plain BFS over the model; returns (states list, edges set of (s, t, s'))."""
    ts = list(model.transitions if transitions is None else transitions)
    seen = {model.initial_state}
    order = [model.initial_state]
    edges = set()
    queue = deque(order)
    while queue:
        s = queue.popleft()
        for t in ts:
            x = model.fire(s, t)
            if x is None:
                continue
            edges.add((s, t, x))
            if x not in seen:
                seen.add(x)
                order.append(x)
                queue.append(x)
    return order, edges


def bfs_distances(states, edges, root):
    succ = {}
    for s, _, x in edges:
        succ.setdefault(s, []).append(x)
    dist = {root: 0}
    queue = deque([root])
    while queue:
        s = queue.popleft()
        for x in succ.get(s, ()):
            if x not in dist:
                dist[x] = dist[s] + 1
                queue.append(x)
    return dist


def can_reach(states, edges, targets):
    """States from which some target is reachable, by fixpoint iteration."""
    good = set(targets)
    changed = True
    while changed:
        changed = False
        for s, _, x in edges:
            if x in good and s not in good:
                good.add(s)
                changed = True
    return good
