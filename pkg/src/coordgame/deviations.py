"""Coalitional deviation search and certification.

The search is exhaustive within a configurable budget: k-equilibrium checking
is co-NP-complete in general, so instances whose candidate-move count exceeds
the budget are refused rather than silently truncated.

Simple deviations (connected coalition, one common target color) are complete
for existence checks, which keeps the default search space small.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator, Optional

from .errors import BudgetExceededError
from .game import (
    CoordinationGame,
    JointStrategy,
    deviate,
    payoff_vector,
    social_welfare,
    social_welfare_restricted,
)
from .graph import (
    Edge,
    connected_subsets,
    edges_within,
    induced_subgraph,
    is_color_complete,
    minimum_feedback_edge_set,
)

DEFAULT_BUDGET = 100_000_000


@dataclass(frozen=True)
class DeviationReport:
    """A witnessed profitable coalitional deviation.

    Every member strictly changes color and strictly improves; construct via
    build_report, which enforces both.
    """

    coalition: tuple[int, ...]  # sorted node ids
    new_colors: tuple[int, ...]  # aligned with coalition
    payoffs_before: tuple[int, ...]
    payoffs_after: tuple[int, ...]
    delta_sw: int
    simple: bool

    def moves(self) -> dict[int, int]:
        return dict(zip(self.coalition, self.new_colors))

    def target_color(self) -> Optional[int]:
        """The common target color, when there is one."""
        targets = set(self.new_colors)
        return next(iter(targets)) if len(targets) == 1 else None

    def describe(self, game: CoordinationGame) -> str:
        names = game.assignment.color_name
        target = self.target_color()
        members = ",".join(str(i) for i in self.coalition)
        if target is not None:
            return f"{{{members}}}->{names(target)}"
        moves = ",".join(f"{i}->{names(x)}" for i, x in zip(self.coalition, self.new_colors))
        return moves


def _is_connected(game: CoordinationGame, nodes: frozenset) -> bool:
    start = next(iter(nodes))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in game.graph.adjacency[u]:
            if v in nodes and v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(nodes)


def build_report(
    game: CoordinationGame, s: JointStrategy, moves: dict[int, int]
) -> DeviationReport:
    """Validate that `moves` is a profitable deviation from s and package it.

    Raises ValueError when a member keeps its color or fails to strictly
    improve, and FeasibilityError on colors outside a member's set.
    """
    if not moves:
        raise ValueError("a deviation needs a non-empty coalition")
    colors = game.check_feasible(s)
    coalition = tuple(sorted(moves))
    for i in coalition:
        if moves[i] == colors[i]:
            raise ValueError(f"node {i} does not change color")
    after = deviate(game, s, moves)
    pay_before = payoff_vector(game, colors)
    pay_after = payoff_vector(game, after.colors)
    for i in coalition:
        if pay_after[i] <= pay_before[i]:
            raise ValueError(f"node {i} does not strictly improve ({pay_before[i]} -> {pay_after[i]})")
    new_colors = tuple(moves[i] for i in coalition)
    simple = len(set(new_colors)) == 1 and _is_connected(game, frozenset(coalition))
    return DeviationReport(
        coalition=coalition,
        new_colors=new_colors,
        payoffs_before=tuple(pay_before[i] for i in coalition),
        payoffs_after=tuple(pay_after[i] for i in coalition),
        delta_sw=social_welfare(game, after) - social_welfare(game, s),
        simple=simple,
    )


def apply_report(game: CoordinationGame, s: JointStrategy, report: DeviationReport) -> JointStrategy:
    return deviate(game, s, report.moves())


@lru_cache(maxsize=64)
def _simple_plan(game: CoordinationGame, max_size: int):
    """Connected coalitions up to max_size with their common color ids,
    ordered by size then lexicographically; coalitions with no common color
    cannot host a simple deviation and are dropped."""
    plan = []
    for K in connected_subsets(game.graph, max_size):
        common = None
        for i in K:
            ids = game.assignment.color_sets[i]
            common = ids if common is None else common & ids
            if not common:
                break
        if common:
            plan.append((tuple(sorted(K)), K, tuple(sorted(common))))
    return tuple(plan)


def _iter_simple_moves_raw(
    game: CoordinationGame, colors: tuple[int, ...], pay, max_size: int, budget: int
) -> Iterator[tuple[tuple[int, ...], frozenset, int]]:
    """Profitable simple moves (coalition, coalition set, target color) in
    canonical order: coalition size, coalition members, color id."""
    adjacency = game.graph.adjacency
    candidates = 0
    for K, Kset, common in _simple_plan(game, max_size):
        for x in common:
            candidates += 1
            if candidates > budget:
                raise BudgetExceededError(
                    "simple deviation search exceeded the candidate budget",
                    required=candidates,
                    budget=budget,
                )
            ok = True
            for i in K:
                if colors[i] == x:
                    ok = False
                    break
            if not ok:
                continue
            for i in K:
                # after the move, a neighbor plays x iff it deviates too or already did
                cnt = 0
                for j in adjacency[i]:
                    if j in Kset or colors[j] == x:
                        cnt += 1
                if cnt <= pay[i]:
                    ok = False
                    break
            if ok:
                yield K, Kset, x


def _unrestricted_candidate_count(n: int, k: int, max_colors: int) -> int:
    return sum(comb(n, j) * max_colors**j for j in range(1, k + 1))


def _iter_unrestricted_moves_raw(
    game: CoordinationGame, colors: tuple[int, ...], pay, max_size: int, budget: int
) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    n = game.node_count
    max_colors = max(len(ids) for ids in game.assignment.color_sets)
    required = _unrestricted_candidate_count(n, max_size, max_colors)
    if required > budget:
        raise BudgetExceededError(
            "unrestricted deviation search refused: candidate count exceeds budget",
            required=required,
            budget=budget,
        )
    adjacency = game.graph.adjacency
    alternatives = [sorted(game.assignment.color_sets[i] - {colors[i]}) for i in range(n)]
    for size in range(1, max_size + 1):
        for K in itertools.combinations(range(n), size):
            pools = [alternatives[i] for i in K]
            if any(not p for p in pools):
                continue
            Kset = frozenset(K)
            for move in itertools.product(*pools):
                new = dict(zip(K, move))
                ok = True
                for i in K:
                    xi = new[i]
                    cnt = 0
                    for j in adjacency[i]:
                        cj = new[j] if j in Kset else colors[j]
                        if cj == xi:
                            cnt += 1
                    if cnt <= pay[i]:
                        ok = False
                        break
                if ok:
                    yield K, move


def iter_profitable_deviations(
    game: CoordinationGame,
    s: JointStrategy,
    max_coalition: Optional[int] = None,
    simple_only: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> Iterator[DeviationReport]:
    """All profitable deviations by coalitions of size <= max_coalition, in
    canonical enumeration order."""
    colors = game.check_feasible(s)
    n = game.node_count
    k = n if max_coalition is None else max_coalition
    if not 1 <= k <= n:
        raise ValueError(f"max coalition size {k} outside 1..{n}")
    pay = payoff_vector(game, colors)
    if simple_only:
        for K, Kset, x in _iter_simple_moves_raw(game, colors, pay, k, budget):
            yield build_report(game, s, {i: x for i in K})
    else:
        for K, move in _iter_unrestricted_moves_raw(game, colors, pay, k, budget):
            yield build_report(game, s, dict(zip(K, move)))


def find_profitable_deviation(
    game: CoordinationGame,
    s: JointStrategy,
    max_coalition: Optional[int] = None,
    simple_only: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> Optional[DeviationReport]:
    """First profitable deviation in canonical order, or None if s resists
    every coalition of size <= max_coalition (the search is exhaustive).

    With simple_only the search covers only connected single-color moves,
    which is complete for existence.
    """
    return next(
        iter_profitable_deviations(game, s, max_coalition, simple_only, budget), None
    )


def is_k_equilibrium(
    game: CoordinationGame,
    s: JointStrategy,
    k: int,
    budget: int = DEFAULT_BUDGET,
) -> tuple[bool, Optional[DeviationReport]]:
    """Whether no coalition of size <= k can profitably deviate; when false,
    also a witness deviation."""
    witness = find_profitable_deviation(game, s, max_coalition=k, budget=budget)
    return witness is None, witness


def min_deviation_size_raw(
    game: CoordinationGame, colors: tuple[int, ...], budget: int = DEFAULT_BUDGET
) -> Optional[int]:
    """Size of the smallest profitable deviation from a raw profile, None if
    the profile is a strong equilibrium. Simple search suffices: minimal
    coalition sizes agree with the unrestricted ones."""
    pay = payoff_vector(game, colors)
    hit = next(_iter_simple_moves_raw(game, colors, pay, game.node_count, budget), None)
    return None if hit is None else len(hit[0])


@dataclass(frozen=True)
class KeyLemmaAudit:
    """Numeric check of the deviation/welfare identities for one deviation.

    eq1: delta_sw == 2*(delta_sw_coalition - unicolored_within_after
                        + unicolored_within_before)
    eq2: delta_sw > 2*(|F cap E+_s| - |F cap E+_s'|) for a minimum feedback
         edge set F of the coalition subgraph
    corollary: delta_sw > -2*tau
    """

    delta_sw: int
    delta_sw_coalition: int
    unicolored_within_before: int
    unicolored_within_after: int
    feedback_edges: tuple[Edge, ...]
    tau: int
    eq1_rhs: int
    eq1_holds: bool
    eq2_rhs: int
    eq2_holds: bool
    corollary_bound: int
    corollary_holds: bool

    @property
    def all_hold(self) -> bool:
        return self.eq1_holds and self.eq2_holds and self.corollary_holds


def audit_key_lemma(
    game: CoordinationGame, s: JointStrategy, report: DeviationReport
) -> KeyLemmaAudit:
    """Re-derive the welfare identities for a profitable deviation.

    Raises ValueError if the report is not actually a profitable deviation
    from s.
    """
    report = build_report(game, s, report.moves())  # re-validate against s
    after = apply_report(game, s, report)
    K = report.coalition
    delta_sw = social_welfare(game, after) - social_welfare(game, s)
    delta_sw_k = social_welfare_restricted(game, after, K) - social_welfare_restricted(
        game, s, K
    )
    within = edges_within(game.graph, K)
    colors_before = s.colors
    colors_after = after.colors
    uni_before = sum(1 for u, v in within if colors_before[u] == colors_before[v])
    uni_after = sum(1 for u, v in within if colors_after[u] == colors_after[v])

    sub, original = induced_subgraph(game.graph, K)
    fes = sorted(
        (original[u], original[v]) for u, v in minimum_feedback_edge_set(sub)
    )
    tau = len(fes)
    f_before = sum(1 for u, v in fes if colors_before[u] == colors_before[v])
    f_after = sum(1 for u, v in fes if colors_after[u] == colors_after[v])

    eq1_rhs = 2 * (delta_sw_k - uni_after + uni_before)
    eq2_rhs = 2 * (f_before - f_after)
    return KeyLemmaAudit(
        delta_sw=delta_sw,
        delta_sw_coalition=delta_sw_k,
        unicolored_within_before=uni_before,
        unicolored_within_after=uni_after,
        feedback_edges=tuple(fes),
        tau=tau,
        eq1_rhs=eq1_rhs,
        eq1_holds=delta_sw == eq1_rhs,
        eq2_rhs=eq2_rhs,
        eq2_holds=delta_sw > eq2_rhs,
        corollary_bound=-2 * tau,
        corollary_holds=delta_sw > -2 * tau,
    )


@dataclass(frozen=True)
class UniformityReport:
    """Result of the exhaustive uniformity check.

    A game is uniform when, in every profile, the two endpoints of every
    unicolored edge earn the same payoff. Color-completeness is the
    structural condition that guarantees it.
    """

    uniform: bool
    color_complete: bool
    profiles_checked: int
    counterexample: Optional[tuple[tuple[int, ...], Edge]]


def is_uniform(game: CoordinationGame, budget: int = DEFAULT_BUDGET) -> UniformityReport:
    """Exhaustively check uniformity over the whole strategy space."""
    size = game.strategy_space_size()
    if size > budget:
        raise BudgetExceededError(
            "uniformity check refused: strategy space exceeds budget",
            required=size,
            budget=budget,
        )
    complete = is_color_complete(game.graph, game.assignment)
    edges = game.graph.sorted_edges()
    checked = 0
    for colors in game.iter_profiles():
        checked += 1
        pay = payoff_vector(game, colors)
        for u, v in edges:
            if colors[u] == colors[v] and pay[u] != pay[v]:
                return UniformityReport(False, complete, checked, (colors, (u, v)))
    return UniformityReport(True, complete, checked, None)
