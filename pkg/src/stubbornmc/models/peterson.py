"""Peterson's n-customer mutual exclusion algorithm, four model variants.

State layout (one byte per variable)::

    S[0..n-1]  local state: 0 idle, 1..6 trying, 7 critical, 8 terminated
    j[0..n-1]  gate counter of each customer
    k[0..n-1]  inner-loop counter of each customer
    Q[0..n-1]  gate each customer is trying to pass
    T[0..n-2]  customer without priority at each gate

Transition ``i < n`` performs customer ``i``'s next atomic step. In every
variant except ``plain``, transition ``n + i`` lets an idle customer ``i``
stop for good.
"""

from __future__ import annotations

from enum import Enum

from .._kernels import _pure, get_backend
from ..kernel import ALL, Model, UsageError

LETTERS = "-jQTwkA* "


class Variant(str, Enum):
    PLAIN = "plain"
    NON_PROGRESS_REVEALING = "non-progress-revealing"
    CORRECT = "correct"
    MUTEX_VIOLATING = "mutex-violating"

    @property
    def code(self) -> int:
        return {
            Variant.PLAIN: _pure.PLAIN,
            Variant.NON_PROGRESS_REVEALING: _pure.NON_PROGRESS_REVEALING,
            Variant.CORRECT: _pure.CORRECT,
            Variant.MUTEX_VIOLATING: _pure.MUTEX_VIOLATING,
        }[self]

    @classmethod
    def parse(cls, value: "Variant | str") -> "Variant":
        if isinstance(value, Variant):
            return value
        aliases = {"npr": cls.NON_PROGRESS_REVEALING, "mutex": cls.MUTEX_VIOLATING}
        if value in aliases:
            return aliases[value]
        try:
            return cls(value)
        except ValueError:
            names = ", ".join(v.value for v in cls)
            raise UsageError(f"unknown Peterson variant {value!r} (choose from {names})") from None


def format_peterson(state, n: int) -> str:
    parts = []
    for i in range(n):
        parts.append(f"{state[n + i]}{LETTERS[state[i]]}{state[2 * n + i]}{state[3 * n + i]} ")
    parts.extend(str(v) for v in state[4 * n :])
    return "".join(parts)


def mutex_check(state, n: int):
    critical = 0
    for i in range(n):
        if state[i] == 7:
            critical += 1
    if critical >= 2:
        return "Mutex violated"
    return None


def build_peterson(variant: "Variant | str", n: int, backend: str | None = None) -> Model:
    """Peterson-n model of the given variant with its stubborn rules.

    ``backend`` picks the kernel implementation ("native" or "python");
    both produce identical state spaces.
    """
    variant = Variant.parse(variant)
    if n < 2:
        raise UsageError(f"Peterson models need n >= 2, got {n}")
    if 5 * n - 1 > 256:
        raise UsageError(f"n={n} is too large")
    k = get_backend(backend)
    code = variant.code
    kernel_fire = k.peterson_fire
    kernel_rule = k.peterson_rule
    kernel_successors = k.peterson_successors
    plain = variant is Variant.PLAIN
    count = n if plain else 2 * n

    def fire(state, t):
        return kernel_fire(state, t, n, code)

    def successors(state):
        return kernel_successors(state, n, code)

    def rule(state, t):
        deps = kernel_rule(state, t, n, code)
        return ALL if deps is None else deps

    if plain:
        def may_progress(state):
            return state[0] == 7
    else:
        def may_progress(state):
            return state[0] >= 7

    names = [f"c{i}" for i in range(n)]
    if not plain:
        names += [f"stop{i}" for i in range(n)]

    return Model(
        name=f"peterson-{variant.value}-{n}",
        transition_count=count,
        initial_state=(0,) * (5 * n - 1),
        fire=fire,
        safety_check=lambda s: mutex_check(s, n),
        may_progress=may_progress,
        stubborn_rule=rule,
        format_state=lambda s: format_peterson(s, n),
        successors=successors,
        transition_names=names,
    )
