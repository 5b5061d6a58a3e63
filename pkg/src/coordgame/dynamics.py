"""Coalitional improvement paths with optional potential tracking.

A path repeatedly applies profitable deviations chosen by a scheduler until
no coalition within the size bound can improve, a step limit is hit, or a
profile repeats. Attaching a potential tracker turns a run into an empirical
finite-improvement check: any step that fails to strictly increase the
potential aborts the run with a violation record.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import total_ordering
from typing import Optional

from .deviations import (
    DEFAULT_BUDGET,
    DeviationReport,
    apply_report,
    iter_profitable_deviations,
)
from .game import (
    CoordinationGame,
    JointStrategy,
    payoffs,
    social_welfare,
    unicolored_cycle_count,
)

SCHEDULERS = ("first-found", "smallest-coalition", "max-dsw", "random")

TERMINATION_EQUILIBRIUM = "equilibrium"
TERMINATION_STEP_LIMIT = "step_limit"
TERMINATION_CYCLE = "cycle"
TERMINATION_POTENTIAL_VIOLATION = "potential_violation"


@total_ordering
@dataclass(frozen=True)
class PotentialValue:
    """A tagged potential payload; ordered lexicographically within one kind."""

    kind: str
    payload: tuple

    def __lt__(self, other: "PotentialValue") -> bool:
        if self.kind != other.kind:
            raise ValueError(f"cannot compare {self.kind} with {other.kind}")
        return self.payload < other.payload


class WelfarePotential:
    """Social welfare; valid for two-color games and color forests."""

    kind = "welfare"

    def value(self, game: CoordinationGame, s: JointStrategy) -> PotentialValue:
        return PotentialValue(self.kind, (social_welfare(game, s),))


class PseudoforestPotential:
    """(social welfare, unicolored cycle count), compared lexicographically;
    only defined on pseudoforests."""

    kind = "welfare-cycles"

    def value(self, game: CoordinationGame, s: JointStrategy) -> PotentialValue:
        return PotentialValue(
            self.kind, (social_welfare(game, s), unicolored_cycle_count(game, s))
        )


class SortedPayoffPotential:
    """Payoff vector sorted in descending order; valid for uniform games."""

    kind = "payoff-vector"

    def value(self, game: CoordinationGame, s: JointStrategy) -> PotentialValue:
        return PotentialValue(self.kind, tuple(sorted(payoffs(game, s), reverse=True)))


@dataclass(frozen=True)
class TraceStep:
    report: DeviationReport
    profile: JointStrategy  # profile reached by applying the report
    potential: Optional[PotentialValue]


@dataclass(frozen=True)
class PotentialViolation:
    step_index: int
    report: DeviationReport
    before: PotentialValue
    after: PotentialValue


@dataclass(frozen=True)
class ImprovementTrace:
    """A recorded improvement path; consecutive profiles differ exactly on the
    reported coalitions."""

    initial: JointStrategy
    steps: tuple[TraceStep, ...]
    reason: str
    seed: Optional[int]
    violation: Optional[PotentialViolation] = None

    @property
    def terminal(self) -> JointStrategy:
        return self.steps[-1].profile if self.steps else self.initial

    @property
    def step_count(self) -> int:
        return len(self.steps)


def _select(game, s, max_coalition, scheduler, rng, simple_only, budget):
    candidates = iter_profitable_deviations(
        game, s, max_coalition=max_coalition, simple_only=simple_only, budget=budget
    )
    if scheduler in ("first-found", "smallest-coalition"):
        # canonical enumeration is ordered by coalition size, so the first
        # candidate already has minimal size
        return next(candidates, None)
    if scheduler == "max-dsw":
        best = None
        for report in candidates:
            if best is None or report.delta_sw > best.delta_sw:
                best = report
        return best
    if scheduler == "random":
        pool = list(candidates)
        return rng.choice(pool) if pool else None
    raise ValueError(f"unknown scheduler {scheduler!r}; choose from {SCHEDULERS}")


def run_improvement_path(
    game: CoordinationGame,
    s0: JointStrategy,
    scheduler: str = "first-found",
    max_coalition: Optional[int] = None,
    step_limit: int = 1000,
    potential=None,
    seed: Optional[int] = None,
    simple_only: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> ImprovementTrace:
    """Iterate profitable deviations from s0 under the scheduler.

    Stops with reason "equilibrium" when no coalition of size <= max_coalition
    can profitably deviate (the terminal profile is then a
    max_coalition-equilibrium), "step_limit" after step_limit applied steps,
    "cycle" when a profile repeats, or "potential_violation" when an attached
    tracker fails to strictly increase.
    """
    if scheduler not in SCHEDULERS:
        raise ValueError(f"unknown scheduler {scheduler!r}; choose from {SCHEDULERS}")
    if scheduler == "random" and seed is None:
        raise ValueError("the random scheduler requires a seed for reproducibility")
    if step_limit < 0:
        raise ValueError("step_limit must be nonnegative")
    game.check_feasible(s0)
    rng = random.Random(seed) if seed is not None else None
    current = s0
    current_potential = potential.value(game, s0) if potential is not None else None
    visited = {s0.colors}
    steps: list[TraceStep] = []
    violation = None
    while True:
        choice = _select(game, current, max_coalition, scheduler, rng, simple_only, budget)
        if choice is None:
            reason = TERMINATION_EQUILIBRIUM
            break
        if len(steps) >= step_limit:
            reason = TERMINATION_STEP_LIMIT
            break
        nxt = apply_report(game, current, choice)
        if potential is not None:
            new_potential = potential.value(game, nxt)
            if not new_potential > current_potential:
                violation = PotentialViolation(
                    len(steps), choice, current_potential, new_potential
                )
                reason = TERMINATION_POTENTIAL_VIOLATION
                break
            current_potential = new_potential
        else:
            new_potential = None
        steps.append(TraceStep(choice, nxt, new_potential))
        current = nxt
        if nxt.colors in visited:
            reason = TERMINATION_CYCLE
            break
        visited.add(nxt.colors)
    return ImprovementTrace(
        initial=s0,
        steps=tuple(steps),
        reason=reason,
        seed=seed,
        violation=violation,
    )
