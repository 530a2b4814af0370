"""Model abstraction: deterministic transitions over bounded-integer state vectors.

A state is an immutable tuple of unsigned integers, each below ``2**width``.
Models never mutate a state; ``fire`` hands back a fresh tuple or ``None``
when the transition is disabled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Tuple, Union

StateVector = Tuple[int, ...]
TransitionId = int


class UsageError(ValueError):
    """Bad arguments or an invalid combination of options."""


class ModelError(RuntimeError):
    """The model misbehaved (unrepresentable value, bad rule target, ...)."""


class _All:
    """Rule outcome meaning "every transition must join the stubborn set"."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ALL"

    def __reduce__(self):
        return (_All, ())


ALL = _All()

# A stubborn rule returns either a collection of dependencies or ALL.
RuleOutcome = Union[_All, frozenset, tuple, list, set]

FireFn = Callable[[StateVector, TransitionId], Optional[StateVector]]
SafetyFn = Callable[[StateVector], Optional[str]]
ProgressFn = Callable[[StateVector], bool]
RuleFn = Callable[[StateVector, TransitionId], RuleOutcome]
FormatFn = Callable[[StateVector], str]
BatchFn = Callable[[StateVector], Sequence[Tuple[TransitionId, bytes]]]


def _default_format(state: StateVector) -> str:
    return " ".join(str(v) for v in state)


@dataclass(frozen=True)
class Model:
    """A deterministic transition system over fixed-length state vectors.

    ``fire(state, t)`` returns the successor or ``None`` if ``t`` is disabled.
    ``safety_check`` returns an error message for a bad state, ``None``
    otherwise. ``stubborn_rule(state, t)`` lists the transitions that must
    accompany ``t`` in a stubborn set, or returns :data:`ALL`.

    ``successors`` is an optional fast path: all ``(t, encode_state(succ))``
    pairs for the enabled transitions, highest ``t`` first. It must agree
    with ``fire``; it may raise OverflowError for unrepresentable values.
    """

    name: str
    transition_count: int
    initial_state: StateVector
    fire: FireFn
    safety_check: Optional[SafetyFn] = None
    may_progress: Optional[ProgressFn] = None
    stubborn_rule: Optional[RuleFn] = None
    format_state: FormatFn = _default_format
    width: int = 8
    successors: Optional[BatchFn] = field(default=None, compare=False)
    transition_names: Optional[Sequence[str]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not 1 <= self.width <= 64:
            raise UsageError(f"width must be in 1..64, got {self.width}")
        if self.transition_count < 0:
            raise UsageError("transition_count must be non-negative")
        object.__setattr__(self, "initial_state", tuple(self.initial_state))
        check_bounds(self.initial_state, self.width)

    @property
    def transitions(self) -> range:
        return range(self.transition_count)

    def transition_label(self, t: TransitionId) -> str:
        if self.transition_names is not None:
            return self.transition_names[t]
        return str(t)


def check_bounds(state: Sequence[int], width: int) -> None:
    limit = 1 << width
    for v in state:
        if v < 0 or v >= limit:
            raise ModelError(f"value overflow: {v} does not fit in {width} bits")


def fire_checked(
    model: Model, state: StateVector, t: TransitionId
) -> Optional[StateVector]:
    """Fire ``t`` at ``state`` with range checks on both the id and the result."""
    if not 0 <= t < model.transition_count:
        raise UsageError(
            f"transition {t} out of range (model has {model.transition_count})"
        )
    result = model.fire(state, t)
    if result is None:
        return None
    result = tuple(result)
    if len(result) != len(state):
        raise ModelError(
            f"transition {t} changed the state length from {len(state)} to {len(result)}"
        )
    check_bounds(result, model.width)
    return result


def _bytes_per_value(width: int) -> int:
    return (width + 7) // 8


def encode_state(state: Sequence[int], width: int = 8) -> bytes:
    """Pack values little-endian, ``ceil(width / 8)`` bytes each, in order."""
    if width <= 8:
        try:
            encoded = bytes(state)
        except ValueError:
            raise ModelError(f"value overflow in {tuple(state)!r}") from None
        if width < 8 and encoded and max(encoded) >> width:
            raise ModelError(f"value overflow: {max(encoded)} needs more than {width} bits")
        return encoded
    size = _bytes_per_value(width)
    if width % 8 and any(v >> width for v in state):
        raise ModelError(f"value overflow: {tuple(state)!r} needs more than {width} bits")
    try:
        return b"".join(v.to_bytes(size, "little") for v in state)
    except OverflowError:
        raise ModelError(f"value overflow in {tuple(state)!r}") from None


def decode_state(data: bytes, width: int = 8) -> StateVector:
    if width <= 8:
        return tuple(data)
    size = _bytes_per_value(width)
    return tuple(
        int.from_bytes(data[i : i + size], "little") for i in range(0, len(data), size)
    )


def rule_targets(
    model: Model, state: StateVector, t: TransitionId
) -> Iterable[TransitionId]:
    """Dependencies of ``t`` at ``state`` with ALL expanded and ids validated."""
    outcome = model.stubborn_rule(state, t)
    if outcome is ALL:
        return model.transitions
    deps = tuple(outcome)
    for d in deps:
        if not 0 <= d < model.transition_count:
            raise ModelError(f"stubborn rule of transition {t} names unknown transition {d}")
    return deps
