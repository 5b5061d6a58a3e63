"""Inefficiency measurement: social optima, k-price of anarchy/stability,
and transition values, all by exhaustive profile enumeration within a budget.

Every profile's resistance is summarized by mu(s), the size of its smallest
profitable deviation (infinite for strong equilibria); s is a k-equilibrium
exactly when mu(s) > k, so one scan answers every k at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .deviations import DEFAULT_BUDGET, min_deviation_size_raw
from .errors import BudgetExceededError
from .game import CoordinationGame, JointStrategy
from .graph import component_cycle_rank, connected_components


@dataclass(frozen=True)
class KEquilibriumStats:
    """Inefficiency numbers for one coalition bound k.

    Ratios follow the division-by-zero convention: any ratio with a zero
    denominator is reported as infinity. bound_violated evaluates the
    welfare bound multiplicatively (optimum*(k-1) <= 2*(n-1)*worst), so
    degenerate zero-welfare games cannot produce spurious violations.
    """

    k: int
    exists: bool
    min_sw: Optional[int]
    max_sw: Optional[int]
    poa: Optional[float]
    pos: Optional[float]
    upper_bound: Optional[float]
    bound_violated: bool


@dataclass(frozen=True)
class InefficiencyReport:
    optimum_sw: int
    optimum: JointStrategy
    per_k: tuple[KEquilibriumStats, ...]
    complete: bool
    profiles_checked: int


def _ratio(numerator: int, denominator: int) -> float:
    return math.inf if denominator == 0 else numerator / denominator


def _scan_profiles(game: CoordinationGame, budget: int, allow_partial: bool):
    """Yield (colors, sw, mu) per feasible profile; mu is None for strong
    equilibria. Raises BudgetExceededError unless allow_partial, in which
    case at most `budget` profiles are scanned."""
    size = game.strategy_space_size()
    if size > budget and not allow_partial:
        raise BudgetExceededError(
            "profile enumeration refused: strategy space exceeds budget",
            required=size,
            budget=budget,
        )
    edges = game.graph.sorted_edges()
    scanned = 0
    for colors in game.iter_profiles():
        if scanned >= budget:
            return
        scanned += 1
        sw = 2 * sum(1 for u, v in edges if colors[u] == colors[v])
        mu = min_deviation_size_raw(game, colors, budget)
        yield colors, sw, mu


def social_optimum(
    game: CoordinationGame, budget: int = DEFAULT_BUDGET
) -> tuple[JointStrategy, int]:
    """Exact maximum social welfare with a witnessing profile.

    Enumerates when the strategy space fits the budget; otherwise falls back
    to the forest/pseudoforest solvers, whose outputs are social optima."""
    size = game.strategy_space_size()
    if size <= budget:
        edges = game.graph.sorted_edges()
        best = None
        best_sw = -1
        for colors in game.iter_profiles():
            sw = 2 * sum(1 for u, v in edges if colors[u] == colors[v])
            if sw > best_sw:
                best_sw = sw
                best = colors
        return game.strategy(best), best_sw
    if all(component_cycle_rank(game.graph, c) <= 1 for c in connected_components(game.graph)):
        from .solvers import solve_pseudoforest_detailed

        strategy, solutions = solve_pseudoforest_detailed(game)
        return strategy, sum(sol.welfare for sol in solutions)
    raise BudgetExceededError(
        "social optimum out of reach: strategy space exceeds budget and the "
        "graph is not a pseudoforest",
        required=size,
        budget=budget,
    )


def inefficiency(
    game: CoordinationGame,
    ks: Optional[Iterable[int]] = None,
    budget: int = DEFAULT_BUDGET,
    allow_partial: bool = False,
) -> InefficiencyReport:
    """Full inefficiency report over the requested coalition bounds
    (default: every k from 1 to n)."""
    n = game.node_count
    ks = sorted(set(ks)) if ks is not None else list(range(1, n + 1))
    for k in ks:
        if not 1 <= k <= n:
            raise ValueError(f"k={k} outside 1..{n}")
    optimum = None
    optimum_sw = -1
    # min/max equilibrium welfare per k, via mu thresholds
    min_sw = {k: None for k in ks}
    max_sw = {k: None for k in ks}
    witness_min = {k: None for k in ks}
    checked = 0
    complete = game.strategy_space_size() <= budget
    for colors, sw, mu in _scan_profiles(game, budget, allow_partial):
        checked += 1
        if sw > optimum_sw:
            optimum_sw = sw
            optimum = colors
        resist = n if mu is None else mu - 1  # s is a k-equilibrium iff k <= resist
        for k in ks:
            if k <= resist:
                if min_sw[k] is None or sw < min_sw[k]:
                    min_sw[k] = sw
                    witness_min[k] = colors
                if max_sw[k] is None or sw > max_sw[k]:
                    max_sw[k] = sw
    stats = []
    for k in ks:
        exists = min_sw[k] is not None
        upper = 2 * (n - 1) / (k - 1) if k >= 2 else None
        violated = False
        if exists and k >= 2:
            violated = optimum_sw * (k - 1) > 2 * (n - 1) * min_sw[k]
        stats.append(
            KEquilibriumStats(
                k=k,
                exists=exists,
                min_sw=min_sw[k],
                max_sw=max_sw[k],
                poa=_ratio(optimum_sw, min_sw[k]) if exists else None,
                pos=_ratio(optimum_sw, max_sw[k]) if exists else None,
                upper_bound=upper,
                bound_violated=violated,
            )
        )
    return InefficiencyReport(
        optimum_sw=optimum_sw,
        optimum=game.strategy(optimum),
        per_k=tuple(stats),
        complete=complete,
        profiles_checked=checked,
    )


def transition_value(game: CoordinationGame, budget: int = DEFAULT_BUDGET) -> int:
    """Largest k for which a k-equilibrium exists; n means a strong
    equilibrium exists (no transition up to n)."""
    best = 0
    for colors, _sw, mu in _scan_profiles(game, budget, allow_partial=False):
        if mu is None:
            return game.node_count
        if mu - 1 > best:
            best = mu - 1
    return best
