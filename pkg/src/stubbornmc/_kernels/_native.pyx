# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Mirrors ``_pure`` function for function."""

from cpython.mem cimport PyMem_Malloc, PyMem_Free
from cpython.ref cimport Py_INCREF
from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM
from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.string cimport memcpy, memset

cdef enum:
    MAXVARS = 256
    PLAIN = 0
    NON_PROGRESS_REVEALING = 1
    CORRECT = 2
    MUTEX_VIOLATING = 3


cdef tuple _pack(long *s, Py_ssize_t size):
    cdef tuple out = PyTuple_New(size)
    cdef Py_ssize_t x
    cdef object v
    for x in range(size):
        v = s[x]
        Py_INCREF(v)
        PyTuple_SET_ITEM(out, x, v)
    return out


cdef int _step(long *s, int t, int n, int variant) except -2:
    """Apply transition t to s in place. Returns 0 if disabled, 1 if fired."""
    cdef int i, pc, j, k, q
    cdef bint fixed = variant >= CORRECT
    if t >= n:
        i = t - n
        if variant == PLAIN or i >= n or s[i] != 0:
            return 0
        s[i] = 8
        return 1
    i = t
    pc = s[i]
    if pc == 8:
        return 0
    j = s[n + i]
    if 2 <= pc <= 4 and (j >= n - 1 or j < 0):
        raise ValueError(f"gate index {j} out of range in local state {pc}")
    if pc == 0:
        s[n + i] = 0
        s[i] = 1
    elif pc == 1:
        s[i] = 7 if j >= n - 1 else 2
    elif pc == 2:
        if variant == MUTEX_VIOLATING:
            s[4 * n + j] = i
        else:
            s[3 * n + i] = j + 1 if fixed else j
        s[i] = 3
    elif pc == 3:
        if variant == MUTEX_VIOLATING:
            s[3 * n + i] = j + 1
        else:
            s[4 * n + j] = i
        s[i] = 4
    elif pc == 4:
        if s[4 * n + j] != i:
            s[n + i] = j + 1
            s[i] = 1
        else:
            s[2 * n + i] = 0
            s[i] = 5
    elif pc == 5:
        if s[2 * n + i] >= n:
            s[n + i] = j + 1
            s[i] = 1
        else:
            s[i] = 6
    elif pc == 6:
        k = s[2 * n + i]
        if k >= n or k < 0:
            raise ValueError(f"customer index {k} out of range in local state 6")
        q = s[3 * n + k]
        if k == i or ((q <= j) if fixed else (q < j)):
            s[2 * n + i] = k + 1
            s[i] = 5
        else:
            s[i] = 4
    elif pc == 7:
        s[3 * n + i] = 0
        s[i] = 0
    else:
        raise ValueError(f"illegal local state {pc}")
    return 1


cdef Py_ssize_t _load(tuple state, long *s) except -1:
    cdef Py_ssize_t size = len(state)
    cdef Py_ssize_t x
    if size > MAXVARS:
        raise ValueError("state vector too long for the compiled kernel")
    for x in range(size):
        s[x] = state[x]
    return size


def peterson_fire(tuple state, int t, int n, int variant):
    cdef long s[MAXVARS]
    cdef Py_ssize_t size = _load(state, s)
    if not _step(s, t, n, variant):
        return None
    return _pack(s, size)


def peterson_successors(tuple state, int n, int variant):
    cdef long base[MAXVARS]
    cdef long s[MAXVARS]
    cdef unsigned char buf[MAXVARS]
    cdef Py_ssize_t size = _load(state, base)
    cdef Py_ssize_t x
    cdef int t
    cdef int count = n if variant == PLAIN else 2 * n
    cdef list out = []
    for t in range(count - 1, -1, -1):
        memcpy(s, base, size * sizeof(long))
        if _step(s, t, n, variant):
            for x in range(size):
                if s[x] < 0 or s[x] > 255:
                    raise OverflowError(f"value {s[x]} does not fit in 8 bits")
                buf[x] = <unsigned char>s[x]
            out.append((t, PyBytes_FromStringAndSize(<char *>buf, size)))
    return out


def peterson_rule(tuple state, int t, int n, int variant):
    cdef int pc
    if t >= n:
        return (t - n,)
    pc = state[t]
    if pc == 0:
        return () if variant == PLAIN else (t + n,)
    if pc == 1 or pc == 5 or pc == 8:
        return ()
    if pc == 4:
        if <int>state[n + t] >= n - 1:
            raise ValueError(f"gate index {state[n + t]} out of range in local state 4")
        if <int>state[4 * n + <int>state[n + t]] != t:
            return ()
    return None


def scc_ids(Py_ssize_t n_nodes, const long[::1] offsets, const long[::1] targets):
    cdef long *index = <long *>PyMem_Malloc(n_nodes * sizeof(long) + 1)
    cdef long *low = <long *>PyMem_Malloc(n_nodes * sizeof(long) + 1)
    cdef long *stack = <long *>PyMem_Malloc(n_nodes * sizeof(long) + 1)
    cdef long *work_v = <long *>PyMem_Malloc(n_nodes * sizeof(long) + 1)
    cdef long *work_pos = <long *>PyMem_Malloc(n_nodes * sizeof(long) + 1)
    cdef char *on_stack = <char *>PyMem_Malloc(n_nodes + 1)
    cdef list comp = [-1] * n_nodes
    cdef long counter = 0, n_comp = 0, sp = 0, wp = 0
    cdef long root, v, w, u, pos, end
    cdef bint descended
    if not (index and low and stack and work_v and work_pos and on_stack):
        PyMem_Free(index); PyMem_Free(low); PyMem_Free(stack)
        PyMem_Free(work_v); PyMem_Free(work_pos); PyMem_Free(on_stack)
        raise MemoryError()
    try:
        for root in range(n_nodes):
            index[root] = -1
        memset(on_stack, 0, n_nodes)
        for root in range(n_nodes):
            if index[root] >= 0:
                continue
            index[root] = counter
            low[root] = counter
            counter += 1
            stack[sp] = root
            sp += 1
            on_stack[root] = 1
            work_v[0] = root
            work_pos[0] = offsets[root]
            wp = 1
            while wp > 0:
                v = work_v[wp - 1]
                pos = work_pos[wp - 1]
                end = offsets[v + 1]
                descended = False
                while pos < end:
                    w = targets[pos]
                    pos += 1
                    if index[w] < 0:
                        work_pos[wp - 1] = pos
                        index[w] = counter
                        low[w] = counter
                        counter += 1
                        stack[sp] = w
                        sp += 1
                        on_stack[w] = 1
                        work_v[wp] = w
                        work_pos[wp] = offsets[w]
                        wp += 1
                        descended = True
                        break
                    if on_stack[w] and index[w] < low[v]:
                        low[v] = index[w]
                if descended:
                    continue
                wp -= 1
                if low[v] == index[v]:
                    while True:
                        sp -= 1
                        w = stack[sp]
                        on_stack[w] = 0
                        comp[w] = n_comp
                        if w == v:
                            break
                    n_comp += 1
                if wp > 0:
                    u = work_v[wp - 1]
                    if low[v] < low[u]:
                        low[u] = low[v]
    finally:
        PyMem_Free(index); PyMem_Free(low); PyMem_Free(stack)
        PyMem_Free(work_v); PyMem_Free(work_pos); PyMem_Free(on_stack)
    return comp


def backward_reach(Py_ssize_t n_nodes, const long[::1] rev_offsets,
                   const long[::1] rev_targets, sources):
    cdef bytearray reached = bytearray(n_nodes)
    cdef unsigned char[::1] mark = reached
    cdef long *queue = <long *>PyMem_Malloc(n_nodes * sizeof(long) + 1)
    cdef long head = 0, tail = 0, v, w, pos
    if not queue:
        raise MemoryError()
    try:
        for v in sources:
            if not mark[v]:
                mark[v] = 1
                queue[tail] = v
                tail += 1
        while head < tail:
            v = queue[head]
            head += 1
            for pos in range(rev_offsets[v], rev_offsets[v + 1]):
                w = rev_targets[pos]
                if not mark[w]:
                    mark[w] = 1
                    queue[tail] = w
                    tail += 1
    finally:
        PyMem_Free(queue)
    return reached
