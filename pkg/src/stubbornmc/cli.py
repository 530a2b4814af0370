"""Command-line front end.

Checks run in a fixed order (safety, may-progress, must-progress, AG EF) and
the run stops at the first failure. Exit status: 0 all checks passed,
1 property violated, 2 usage or model error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from . import analyses
from .analyses import Counterexample, InfiniteOccurrenceQuery, replay
from .explorer import Exploration, Mode, StateLimitExceeded, explore, trace_to
from .kernel import Model, ModelError, UsageError
from .models import FIXTURES, Variant, build_fixture, build_peterson

logger = logging.getLogger(__name__)

CHECKS = ("safety", "may-progress", "must-progress", "agef", "d1d2", "compare")
PROPERTY_ORDER = ("safety", "may-progress", "must-progress", "agef")
SEPARATOR = "=========="
CYCLE_MARK = "----------"

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2


@dataclass
class RunConfig:
    model: str = "peterson"
    variant: str = Variant.CORRECT.value
    n: int = 2
    mode: Mode = Mode.FULL
    checks: Tuple[str, ...] = ()
    t_omega: Optional[int] = None
    t_star: FrozenSet[int] = frozenset()
    output: str = "text"
    state_limit: Optional[int] = None
    quiet: bool = False
    backend: Optional[str] = None

    def effective_checks(self, model: Model) -> Tuple[str, ...]:
        checks = set(self.checks)
        if not checks:
            checks = {"safety", "agef"}
            if model.may_progress is not None:
                checks.add("may-progress")
        if self.mode is Mode.REDUCED and checks & {"safety", "may-progress"}:
            # verdicts from the reduced space are only trusted for AG EF terminating models
            checks.add("agef")
        return tuple(c for c in CHECKS if c in checks)

    def validate(self) -> None:
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise UsageError(f"unknown check(s): {', '.join(sorted(unknown))}")
        if "must-progress" in self.checks and self.mode is not Mode.FULL:
            raise UsageError("must-progress requires --mode full")
        if "d1d2" in self.checks and self.mode is not Mode.REDUCED:
            raise UsageError("d1d2 requires --mode stubborn")
        if self.t_star and self.t_omega is None:
            raise UsageError("--t-star needs --t-omega")
        if self.output not in ("text", "structured"):
            raise UsageError(f"unknown output format {self.output!r}")


@dataclass
class RunResult:
    status: int
    lines: List[str] = field(default_factory=list)
    summary: Dict[str, object] = field(default_factory=dict)

    @property
    def text(self) -> str:
        return "\n".join(self.lines) + ("\n" if self.lines else "")


def build_model(config: RunConfig) -> Model:
    if config.model == "peterson":
        return build_peterson(config.variant, config.n, backend=config.backend)
    if config.model in FIXTURES:
        return build_fixture(config.model)
    raise UsageError(
        f"unknown model {config.model!r} (choose from peterson, {', '.join(FIXTURES)})"
    )


def print_counterexample(ce: Counterexample, model: Model) -> str:
    """Render a counterexample as state lines with separator and cycle marks."""
    if not replay(model, ce):
        raise AssertionError("counterexample does not replay from the initial state")
    lines = []
    for i, state in enumerate(ce.states):
        if ce.separator == i:
            lines.append(SEPARATOR)
        if ce.cycle_start == i:
            lines.append(CYCLE_MARK)
        lines.append(model.format_state(state))
    if ce.separator is not None and ce.separator >= len(ce.states):
        lines.append(SEPARATOR)
    lines.append(f"!!! {ce.message}")
    return "\n".join(lines)


def _safety_counterexample(exploration: Exploration) -> Counterexample:
    space = exploration.space
    target = exploration.violation.state
    steps = trace_to(space, target)
    return Counterexample(
        states=tuple(space.state(v) for v, _ in steps),
        transitions=tuple(t for _, t in steps[1:]),
        message=exploration.violation.message,
        depth=space.depth[target],
    )


def run(config: RunConfig) -> RunResult:
    """Explore, apply the requested checks and collect the report."""
    result = RunResult(EXIT_OK)
    summary = result.summary
    try:
        config.validate()
        model = build_model(config)
        checks = config.effective_checks(model)
        summary["model"] = model.name
        summary["mode"] = "stubborn" if config.mode is Mode.REDUCED else "full"

        try:
            exploration = explore(
                model, config.mode, on_the_fly_safety="safety" in checks,
                state_limit=config.state_limit,
            )
        except StateLimitExceeded as exc:
            summary["states"] = exc.space.n_states
            summary["edges"] = exc.space.n_edges
            summary["error"] = str(exc)
            result.status = EXIT_ERROR
            result.lines.append(f"error: {exc}")
            result.lines.append(f"{exc.space.n_states} states, {exc.space.n_edges} arcs")
            return result
        space = exploration.space
        summary["states"] = space.n_states
        summary["edges"] = space.n_edges

        def fail(name: str, ce: Optional[Counterexample]) -> None:
            summary[f"check.{name}"] = "fail"
            result.status = EXIT_VIOLATION
            if ce is not None:
                summary[f"check.{name}.depth"] = ce.depth
                if not config.quiet:
                    result.lines.append(print_counterexample(ce, model))
                else:
                    result.lines.append(f"!!! {ce.message}")

        if exploration.violation is not None:
            fail("safety", _safety_counterexample(exploration))
        else:
            for name in checks:
                if result.status != EXIT_OK:
                    break
                if name == "safety":
                    summary["check.safety"] = "pass" if model.safety_check else "n/a"
                elif name == "may-progress":
                    if model.may_progress is None:
                        raise UsageError(f"model {model.name!r} defines no progress predicate")
                    if config.mode is Mode.REDUCED:
                        verdict = analyses.check_may_progress_via_terminals(space, model)
                    else:
                        verdict = analyses.check_may_progress(space, model)
                    if verdict.holds:
                        summary["check.may-progress"] = "pass"
                    else:
                        fail("may-progress", verdict.witness)
                elif name == "must-progress":
                    if model.may_progress is None:
                        raise UsageError(f"model {model.name!r} defines no progress predicate")
                    verdict = analyses.check_must_progress(space, model)
                    if verdict.holds:
                        summary["check.must-progress"] = "pass"
                    else:
                        fail("must-progress", verdict.witness)
                elif name == "agef":
                    ag = analyses.check_agef(space)
                    if ag.holds:
                        summary["check.agef"] = "pass"
                    else:
                        fail("agef", ag.counterexample)

            if result.status == EXIT_OK and config.t_omega is not None:
                query = InfiniteOccurrenceQuery(config.t_omega, config.t_star)
                if not 0 <= query.t_omega < model.transition_count:
                    raise UsageError(f"--t-omega {query.t_omega} is not a transition")
                found, ce = analyses.check_infinite_occurrence(space, query)
                if found:
                    fail("infinite-occurrence", ce)
                else:
                    summary["check.infinite-occurrence"] = "pass"

            if result.status == EXIT_OK and "d1d2" in checks:
                report = analyses.verify_d1_d2(model, space)
                if report.refused:
                    raise UsageError(
                        f"d1d2 refused: {space.n_states} states is above the brute-force bound"
                    )
                summary["check.d1d2.states"] = report.checked_states
                if report.ok:
                    summary["check.d1d2"] = "pass"
                else:
                    summary["check.d1d2"] = "fail"
                    summary["check.d1d2.violations"] = len(report.violations)
                    result.status = EXIT_VIOLATION
                    if not config.quiet:
                        result.lines.extend(f"!!! {v}" for v in report.violations)

            if result.status == EXIT_OK and "compare" in checks:
                cmp = analyses.compare_full_reduced(model, config.state_limit)
                summary["compare.full"] = f"{cmp.full_states}/{cmp.full_edges}"
                summary["compare.reduced"] = f"{cmp.reduced_states}/{cmp.reduced_edges}"
                for key, (a, b) in cmp.verdicts.items():
                    summary[f"compare.{key}"] = f"{a}/{b}"
                if cmp.ok:
                    summary["check.compare"] = "pass"
                else:
                    summary["check.compare"] = "fail"
                    result.status = EXIT_VIOLATION
                    result.lines.extend(f"!!! full/reduced mismatch: {d}" for d in cmp.discrepancies)

        result.lines.append(f"{space.n_states} states, {space.n_edges} arcs")
    except (UsageError, ModelError) as exc:
        result.status = EXIT_ERROR
        summary["error"] = str(exc)
        result.lines.append(f"error: {exc}")
    summary["status"] = result.status
    return result


def _parse_t_star(values: Sequence[str]) -> FrozenSet[int]:
    out = set()
    for chunk in values:
        for part in chunk.split(","):
            part = part.strip()
            if part:
                out.add(int(part))
    return frozenset(out)


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="stubbornmc",
        description="Explicit-state model checking with stubborn-set reduction.",
    )
    p.add_argument("--model", default="peterson",
                   help=f"peterson or a fixture ({', '.join(FIXTURES)})")
    p.add_argument("--variant", default=Variant.CORRECT.value,
                   choices=[v.value for v in Variant], help="Peterson variant")
    p.add_argument("--n", type=int, default=2, help="number of Peterson customers")
    p.add_argument("--mode", default="full", choices=["full", "stubborn"])
    p.add_argument("--check", action="append", default=[], choices=CHECKS,
                   help="check to run (repeatable); default: safety, may-progress, agef")
    p.add_argument("--t-omega", type=int, help="transition that must occur infinitely often")
    p.add_argument("--t-star", action="append", default=[],
                   help="transitions that may occur only finitely often (comma list, repeatable)")
    p.add_argument("--limit", type=int, help="abort after this many states")
    p.add_argument("--format", default="text", choices=["text", "structured"])
    p.add_argument("--quiet", action="store_true", help="omit counterexample listings")
    p.add_argument("--backend", choices=["native", "python"], help="kernel implementation")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        model=args.model,
        variant=args.variant,
        n=args.n,
        mode=Mode.parse(args.mode),
        checks=tuple(args.check),
        t_omega=args.t_omega,
        t_star=_parse_t_star(args.t_star),
        output=args.format,
        state_limit=args.limit,
        quiet=args.quiet,
        backend=args.backend,
    )


def format_structured(result: RunResult) -> str:
    return "".join(f"{k}={v}\n" for k, v in result.summary.items())


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    result = run(config)
    if config.output == "structured":
        sys.stdout.write(format_structured(result))
        if "error" in result.summary:
            print(f"error: {result.summary['error']}", file=sys.stderr)
    else:
        for line in result.lines:
            stream = sys.stderr if line.startswith("error:") else sys.stdout
            print(line, file=stream)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
