"""Explicit-state model checking with stubborn-set reduction and AG EF termination checks."""

from .analyses import (
    AgEfVerdict,
    Counterexample,
    InfiniteOccurrenceQuery,
    ProgressVerdict,
    check_agef,
    check_infinite_occurrence,
    check_may_progress,
    check_may_progress_via_terminals,
    check_must_progress,
    compare_full_reduced,
    replay,
    verify_d1_d2,
)
from .explorer import Exploration, Mode, StateSpace, explore, terminal_states, trace_to
from .kernel import ALL, Model, ModelError, UsageError, decode_state, encode_state, fire_checked
from .models import Variant, build_fixture, build_peterson
from .stubborn import StubbornSet, compute_stubborn, enabled_in

__version__ = "0.1.0"
