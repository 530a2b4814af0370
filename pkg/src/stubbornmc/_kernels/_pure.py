"""Pure-Python kernels. Same signatures and results as ``_native``."""

from collections import deque

PLAIN = 0
NON_PROGRESS_REVEALING = 1
CORRECT = 2
MUTEX_VIOLATING = 3


def peterson_fire(state, t, n, variant):
    """Successor of ``state`` under transition ``t``, or None when disabled.

    Layout: S[n] j[n] k[n] Q[n] T[n-1]. Transitions ``n..2n-1`` (absent in
    the plain variant) move an idle customer to the terminated state 8.
    """
    if t >= n:
        i = t - n
        if variant == PLAIN or i >= n or state[i] != 0:
            return None
        s = list(state)
        s[i] = 8
        return tuple(s)

    i = t
    pc = state[i]
    if pc == 8:
        return None
    s = list(state)
    ji = n + i
    ki = 2 * n + i
    qi = 3 * n + i
    j = s[ji]
    fixed = variant >= CORRECT
    if 2 <= pc <= 4 and j >= n - 1:
        raise ValueError(f"gate index {j} out of range in local state {pc}")
    if pc == 0:
        s[ji] = 0
        s[i] = 1
    elif pc == 1:
        s[i] = 7 if j >= n - 1 else 2
    elif pc == 2:
        if variant == MUTEX_VIOLATING:
            s[4 * n + j] = i
        else:
            s[qi] = j + 1 if fixed else j
        s[i] = 3
    elif pc == 3:
        if variant == MUTEX_VIOLATING:
            s[qi] = j + 1
        else:
            s[4 * n + j] = i
        s[i] = 4
    elif pc == 4:
        if s[4 * n + j] != i:
            s[ji] = j + 1
            s[i] = 1
        else:
            s[ki] = 0
            s[i] = 5
    elif pc == 5:
        if s[ki] >= n:
            s[ji] = j + 1
            s[i] = 1
        else:
            s[i] = 6
    elif pc == 6:
        k = s[ki]
        if k >= n:
            raise ValueError(f"customer index {k} out of range in local state 6")
        q = s[3 * n + k]
        if k == i or (q <= j if fixed else q < j):
            s[ki] = k + 1
            s[i] = 5
        else:
            s[i] = 4
    elif pc == 7:
        s[qi] = 0
        s[i] = 0
    else:
        raise ValueError(f"illegal local state {pc}")
    return tuple(s)


def peterson_rule(state, t, n, variant):
    """Stubborn dependencies of ``t``; None stands for "all transitions"."""
    if t >= n:
        return (t - n,)
    pc = state[t]
    if pc == 0:
        return () if variant == PLAIN else (t + n,)
    if pc == 1 or pc == 5 or pc == 8:
        return ()
    if pc == 4:
        if state[n + t] >= n - 1:
            raise ValueError(f"gate index {state[n + t]} out of range in local state 4")
        if state[4 * n + state[n + t]] != t:
            return ()
    return None


def scc_ids(n_nodes, offsets, targets):
    """Iterative Tarjan over a CSR graph.

    Returns a list mapping each node to its component number. Components are
    numbered in completion order, which is reverse topological.
    """
    offsets = list(offsets)
    targets = list(targets)
    index = [-1] * n_nodes
    low = [0] * n_nodes
    comp = [-1] * n_nodes
    on_stack = [False] * n_nodes
    stack = []
    counter = 0
    n_comp = 0
    for root in range(n_nodes):
        if index[root] >= 0:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, offsets[root])]
        while work:
            v, pos = work[-1]
            end = offsets[v + 1]
            descended = False
            while pos < end:
                w = targets[pos]
                pos += 1
                if index[w] < 0:
                    work[-1] = (v, pos)
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, offsets[w]))
                    descended = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if descended:
                continue
            work.pop()
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
    return comp


def backward_reach(n_nodes, rev_offsets, rev_targets, sources):
    """Mark every node from which some source is reachable.

    ``rev_offsets``/``rev_targets`` hold the reversed graph in CSR form.
    Returns a bytearray with 1 for reached nodes.
    """
    rev_offsets = list(rev_offsets)
    rev_targets = list(rev_targets)
    reached = bytearray(n_nodes)
    queue = deque()
    for s in sources:
        if not reached[s]:
            reached[s] = 1
            queue.append(s)
    while queue:
        v = queue.popleft()
        for pos in range(rev_offsets[v], rev_offsets[v + 1]):
            w = rev_targets[pos]
            if not reached[w]:
                reached[w] = 1
                queue.append(w)
    return reached


def peterson_successors(state, n, variant):
    """All (t, encoded successor) pairs at ``state``, highest t first."""
    out = []
    count = n if variant == PLAIN else 2 * n
    for t in range(count - 1, -1, -1):
        succ = peterson_fire(state, t, n, variant)
        if succ is not None:
            try:
                out.append((t, bytes(succ)))
            except ValueError:
                raise OverflowError(f"transition {t} produced {succ!r}") from None
    return out
