"""Tiny models used by the oracle tests."""

from __future__ import annotations

from ..kernel import ALL, Model, UsageError
from .peterson import Variant, build_peterson


def _empty() -> Model:
    return Model(
        name="empty",
        transition_count=0,
        initial_state=(0,),
        fire=lambda s, t: None,
        stubborn_rule=lambda s, t: (),
    )


def _diamond() -> Model:
    # two flags, each raised once by its own transition; they fully commute
    def fire(s, t):
        if s[t] != 0:
            return None
        out = list(s)
        out[t] = 1
        return tuple(out)

    return Model(
        name="diamond",
        transition_count=2,
        initial_state=(0, 0),
        fire=fire,
        may_progress=lambda s: s == (1, 1),
        stubborn_rule=lambda s, t: (),
    )


def _lasso() -> Model:
    # pc: 0 -t0-> 1 -t1-> 0 forms the cycle; t2 escapes from 0 to the terminal 2
    moves = {(0, 0): 1, (1, 1): 0, (0, 2): 2}

    def fire(s, t):
        nxt = moves.get((s[0], t))
        return None if nxt is None else (nxt,)

    def rule(s, t):
        if t == 1:
            return ()
        return (2,) if t == 0 else (0,)

    return Model(
        name="lasso",
        transition_count=3,
        initial_state=(0,),
        fire=fire,
        may_progress=lambda s: s[0] == 2,
        stubborn_rule=rule,
        transition_names=["loop", "back", "escape"],
    )


def _broken_rules() -> Model:
    # correct Peterson-2, except that writing T[j[i]] (local state 3) claims no dependencies
    base = build_peterson(Variant.CORRECT, 2)
    n = 2

    def rule(s, t):
        if t < n and s[t] == 3:
            return ()
        return base.stubborn_rule(s, t)

    return Model(
        name="broken-rules",
        transition_count=base.transition_count,
        initial_state=base.initial_state,
        fire=base.fire,
        safety_check=base.safety_check,
        may_progress=base.may_progress,
        stubborn_rule=rule,
        format_state=base.format_state,
        transition_names=base.transition_names,
    )


def _all_rules_chain() -> Model:
    # a 3-step counter whose rule is always ALL; reduction must equal full
    def fire(s, t):
        if t == 0 and s[0] < 3:
            return (s[0] + 1, s[1])
        if t == 1 and s[1] < 1:
            return (s[0], 1)
        return None

    return Model(
        name="all-rules",
        transition_count=2,
        initial_state=(0, 0),
        fire=fire,
        stubborn_rule=lambda s, t: ALL,
    )


FIXTURES = {
    "empty": _empty,
    "diamond": _diamond,
    "lasso": _lasso,
    "broken-rules": _broken_rules,
    "all-rules": _all_rules_chain,
}


def build_fixture(name: str) -> Model:
    try:
        factory = FIXTURES[name]
    except KeyError:
        raise UsageError(
            f"unknown fixture {name!r} (choose from {', '.join(FIXTURES)})"
        ) from None
    return factory()
