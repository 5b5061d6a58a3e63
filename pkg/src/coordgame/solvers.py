"""Strong-equilibrium computation for the tractable graph classes, plus a
dispatcher that picks a method from the structural classification.

Trees and pseudotrees are solved by a rooted dynamic program over subtree
welfare; color-complete games reduce to singleton congestion games solved by
a largest-group-first greedy. Outputs of these solvers are exact strong
equilibria; the test suite additionally certifies them against brute force on
small instances.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .colorforest import default_start, solve_color_forest
from .deviations import DEFAULT_BUDGET, min_deviation_size_raw
from .dynamics import WelfarePotential, run_improvement_path
from .errors import BudgetExceededError, StructuralError
from .game import CoordinationGame, JointStrategy
from .graph import (
    Edge,
    classify,
    component_cycle_rank,
    connected_components,
    induced_subgraph,
    is_color_complete,
    normalize_edge,
    pseudoforest_cycles,
)


@dataclass
class TreeDpTable:
    """Per-node, per-color maximum subtree welfare with reconstruction data.

    welfare[v][c] is the best social welfare achievable inside v's subtree
    when v plays c, counting only tree edges; choice[v][c] records, per child,
    the lowest-color-id optimal pick.
    """

    root: int
    order: tuple[int, ...]  # BFS order, parents before children
    children: dict[int, tuple[int, ...]]
    welfare: dict[int, dict[int, int]]
    choice: dict[int, dict[int, tuple[tuple[int, int], ...]]]

    def best_root_color(self) -> tuple[int, int]:
        """(welfare, color), lowest color id among optima."""
        table = self.welfare[self.root]
        best_c = min(table, key=lambda c: (-table[c], c))
        return table[best_c], best_c

    def reconstruct(self, root_color: int) -> dict[int, int]:
        assignment = {self.root: root_color}
        stack = [(self.root, root_color)]
        while stack:
            v, c = stack.pop()
            for child, child_color in self.choice[v][c]:
                assignment[child] = child_color
                stack.append((child, child_color))
        return assignment


def _tree_dp(
    game: CoordinationGame, allowed: frozenset, root: int, excluded: frozenset
) -> TreeDpTable:
    """DP over the tree reachable from root inside `allowed`, ignoring the
    excluded edges. The reachable subgraph must be acyclic."""
    adjacency = game.graph.adjacency
    color_sets = game.assignment.color_sets
    parent: dict[int, Optional[int]] = {root: None}
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in adjacency[v]:
            if w not in allowed or normalize_edge(v, w) in excluded:
                continue
            if w not in parent:
                parent[w] = v
                order.append(w)
                queue.append(w)
            elif w != parent[v]:
                raise StructuralError("component has a cycle")
    children = {v: tuple(w for w in order if parent[w] == v) for v in order}
    welfare: dict[int, dict[int, int]] = {}
    choice: dict[int, dict[int, tuple[tuple[int, int], ...]]] = {}
    for v in reversed(order):
        welfare[v] = {}
        choice[v] = {}
        for c in sorted(color_sets[v]):
            total = 0
            picks = []
            for child in children[v]:
                best_val = None
                best_color = None
                for cc in sorted(color_sets[child]):
                    val = welfare[child][cc] + (2 if cc == c else 0)
                    if best_val is None or val > best_val:
                        best_val = val
                        best_color = cc
                total += best_val
                picks.append((child, best_color))
            welfare[v][c] = total
            choice[v][c] = tuple(picks)
    return TreeDpTable(
        root=root,
        order=tuple(order),
        children=children,
        welfare=welfare,
        choice=choice,
    )


def solve_tree(game: CoordinationGame) -> tuple[JointStrategy, int]:
    """Social optimum of a forest game via per-component tree DP; on a color
    forest every social optimum is a strong equilibrium, and forests always
    are color forests."""
    assignment: dict[int, int] = {}
    total = 0
    for comp in connected_components(game.graph):
        if component_cycle_rank(game.graph, comp) > 0:
            raise StructuralError("component has a cycle")
        table = _tree_dp(game, comp, min(comp), frozenset())
        sw, color = table.best_root_color()
        assignment.update(table.reconstruct(color))
        total += sw
    return game.strategy([assignment[i] for i in range(game.node_count)]), total


@dataclass(frozen=True)
class PseudotreeSolution:
    """Outcome of solving one pseudotree component.

    sw_tree_best is the best welfare over single cycle-edge deletions (None
    for acyclic components); sw_unicolored the best welfare with the cycle
    forced unicolored (None when the cycle nodes share no color). The chosen
    assignment realizes max of the two and unicolors the cycle whenever that
    is welfare-optimal.
    """

    component: tuple[int, ...]
    cycle: tuple[int, ...]
    sw_tree_best: Optional[int]
    sw_unicolored: Optional[int]
    common_cycle_colors: tuple[int, ...]
    cycle_unicolored: bool
    assignment: tuple[tuple[int, int], ...]
    welfare: int


def _cycle_edges(cycle: tuple[int, ...]) -> list[Edge]:
    return [
        normalize_edge(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))
    ]


def _solve_pseudotree(game: CoordinationGame, comp: frozenset) -> PseudotreeSolution:
    color_sets = game.assignment.color_sets
    rank = component_cycle_rank(game.graph, comp)
    if rank == 0:
        table = _tree_dp(game, comp, min(comp), frozenset())
        sw, color = table.best_root_color()
        assignment = table.reconstruct(color)
        return PseudotreeSolution(
            component=tuple(sorted(comp)),
            cycle=(),
            sw_tree_best=None,
            sw_unicolored=None,
            common_cycle_colors=(),
            cycle_unicolored=False,
            assignment=tuple(sorted(assignment.items())),
            welfare=sw,
        )
    if rank > 1:
        raise StructuralError("component has more than one cycle; not a pseudoforest")

    sub, original = induced_subgraph(game.graph, comp)
    (local_cycle,) = pseudoforest_cycles(sub)
    cycle = tuple(original[v] for v in local_cycle)
    cycle_edges = _cycle_edges(cycle)

    # best welfare over single cycle-edge deletions; the deleted edge's
    # contribution is simply ignored, never forced non-unicolored
    best_deletion = None  # (sw, j, root_color, table)
    for j, edge in enumerate(cycle_edges):
        table = _tree_dp(game, comp, min(comp), frozenset((edge,)))
        sw, color = table.best_root_color()
        if best_deletion is None or sw > best_deletion[0]:
            best_deletion = (sw, j, color, table)
    sw_tree_best = best_deletion[0]

    # best welfare with the cycle unicolored: drop all cycle edges, root each
    # remaining tree at its cycle node, and sweep the common colors
    all_cycle_edges = frozenset(cycle_edges)
    subtree_tables = {v: _tree_dp(game, comp, v, all_cycle_edges) for v in cycle}
    common = set(color_sets[cycle[0]])
    for v in cycle[1:]:
        common &= color_sets[v]
    sw_unicolored = None
    unicolored_color = None
    for c in sorted(common):
        sw = 2 * len(cycle) + sum(subtree_tables[v].welfare[v][c] for v in cycle)
        if sw_unicolored is None or sw > sw_unicolored:
            sw_unicolored = sw
            unicolored_color = c

    if sw_unicolored is not None and sw_unicolored >= sw_tree_best:
        assignment: dict[int, int] = {}
        for v in cycle:
            assignment.update(subtree_tables[v].reconstruct(unicolored_color))
        chosen_sw = sw_unicolored
        cycle_unicolored = True
    else:
        _, _, color, table = best_deletion
        assignment = table.reconstruct(color)
        chosen_sw = sw_tree_best
        cycle_unicolored = len({assignment[v] for v in cycle}) == 1
    return PseudotreeSolution(
        component=tuple(sorted(comp)),
        cycle=cycle,
        sw_tree_best=sw_tree_best,
        sw_unicolored=sw_unicolored,
        common_cycle_colors=tuple(sorted(common)),
        cycle_unicolored=cycle_unicolored,
        assignment=tuple(sorted(assignment.items())),
        welfare=chosen_sw,
    )


def solve_pseudoforest_detailed(
    game: CoordinationGame,
) -> tuple[JointStrategy, tuple[PseudotreeSolution, ...]]:
    solutions = [ _solve_pseudotree(game, comp) for comp in connected_components(game.graph) ]
    colors = [0] * game.node_count
    for sol in solutions:
        for node, c in sol.assignment:
            colors[node] = c
    return game.strategy(colors), tuple(solutions)


def solve_pseudoforest(game: CoordinationGame) -> JointStrategy:
    """Strong equilibrium of a pseudoforest game: per component, a social
    optimum that unicolors the cycle whenever some optimum does. Such a
    profile maximizes the (welfare, unicolored-cycles) potential, so no
    coalition of any size can profitably deviate."""
    return solve_pseudoforest_detailed(game)[0]


def solve_color_complete(game: CoordinationGame) -> JointStrategy:
    """Strong equilibrium of a color-complete game.

    Each component of each color's induced subgraph acts as one singleton
    congestion resource whose payoff grows with the group size; repeatedly
    committing the largest assignable group is then stable. Ties break by
    lowest resource id (color id, then member list).
    """
    if not is_color_complete(game.graph, game.assignment):
        raise StructuralError("not a color complete game")
    resources: list[tuple[int, frozenset]] = []
    for x in range(game.color_count):
        vx = game.assignment.nodes_with_color(x)
        if not vx:
            continue
        sub, original = induced_subgraph(game.graph, vx)
        for comp in sorted(connected_components(sub), key=min):
            resources.append((x, frozenset(original[v] for v in comp)))
    unassigned = set(range(game.node_count))
    result: dict[int, int] = {}
    while unassigned:
        best_idx = None
        best_count = 0
        for idx, (x, members) in enumerate(resources):
            count = len(members & unassigned)
            if count > best_count:
                best_count = count
                best_idx = idx
        x, members = resources[best_idx]
        for i in members & unassigned:
            result[i] = x
        unassigned -= members
    return game.strategy([result[i] for i in range(game.node_count)])


def brute_strong_equilibrium(
    game: CoordinationGame, budget: int = DEFAULT_BUDGET
) -> Optional[JointStrategy]:
    """Exhaustive strong-equilibrium search; None is a proof of nonexistence.

    Refused (BudgetExceededError) when the strategy space exceeds the budget.
    """
    size = game.strategy_space_size()
    if size > budget:
        raise BudgetExceededError(
            "brute-force search refused: strategy space exceeds budget",
            required=size,
            budget=budget,
        )
    for colors in game.iter_profiles():
        if min_deviation_size_raw(game, colors, budget) is None:
            return game.strategy(colors)
    return None


def solve_auto(
    game: CoordinationGame, budget: int = DEFAULT_BUDGET
) -> tuple[Optional[JointStrategy], str]:
    """Pick a solving method from the structural classification.

    Returns (strategy, method). A None strategy means exhaustive search
    proved that no strong equilibrium exists (only the brute-force fallback
    can conclude that).
    """
    cls = classify(game.graph, game.assignment)
    if cls.is_color_forest:
        return solve_color_forest(game), "colorforest"
    if cls.is_pseudoforest:
        return solve_pseudoforest(game), "pseudoforest"
    if cls.is_color_complete:
        return solve_color_complete(game), "colorcomplete"
    if game.color_count <= 2:
        # welfare strictly increases along every step, so 2|E| bounds the path
        trace = run_improvement_path(
            game,
            default_start(game),
            scheduler="first-found",
            step_limit=2 * game.graph.edge_count + 1,
            potential=WelfarePotential(),
            budget=budget,
        )
        if trace.reason != "equilibrium":
            raise AssertionError(f"two-color improvement path ended with {trace.reason}")
        return trace.terminal, "twocolor"
    return brute_strong_equilibrium(game, budget=budget), "brute"
