"""Polynomial-time k-equilibrium verification on color forests, and the
strong-equilibrium solver that iterates it.

For each color x the nodes eligible for x induce a forest, and a simple
deviation to x is a connected subtree of one of its components. A bottom-up
dynamic program computes, for every node v, the minimum size D(v) of a
profitable deviating coalition contained in v's subtree and rooted at v,
together with a parent-assisted variant D^p(v) used when v's parent also
switches to x. Nodes already playing x can never join such a coalition (a
deviation requires every member to change color), but they do raise the
post-deviation payoff of their neighbors; both effects are accounted for
below.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .deviations import DeviationReport, apply_report, build_report
from .errors import StructuralError
from .game import CoordinationGame, JointStrategy, payoff_vector, social_welfare
from .graph import is_color_forest


@dataclass
class ColorTreeDp:
    """DP tables of one rooted tree component of the color-x subgraph.

    d[v] is the minimum size of a valid deviating coalition within v's
    subtree that contains v, or the infinity sentinel; u[v] is a coalition
    realizing it. d_parent/u_parent are the parent-assisted variants, where
    v's parent is assumed to switch to x as well. The sentinel is strictly
    greater than the node count, so any finite value is a usable size.
    """

    color: int
    root: int
    infinity: int
    parent: dict[int, Optional[int]]
    children: dict[int, tuple[int, ...]]
    subtree: dict[int, frozenset]
    d: dict[int, int]
    u: dict[int, Optional[tuple[int, ...]]]
    d_parent: dict[int, int]
    u_parent: dict[int, Optional[tuple[int, ...]]]


def _color_tree_components(game: CoordinationGame, x: int) -> list[list[int]]:
    """Connected components of the subgraph induced by the color-x nodes,
    each verified to be a tree."""
    vx = game.assignment.nodes_with_color(x)
    adjacency = game.graph.adjacency
    seen = set()
    components = []
    for start in sorted(vx):
        if start in seen:
            continue
        comp = []
        queue = deque([start])
        seen.add(start)
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in adjacency[v]:
                if w in vx and w not in seen:
                    seen.add(w)
                    queue.append(w)
        edge_count = sum(1 for v in comp for w in adjacency[v] if w in vx) // 2
        if edge_count != len(comp) - 1:
            raise StructuralError(
                f"color {game.assignment.color_name(x)} induces a cycle; not a color forest"
            )
        components.append(comp)
    return components


def compute_color_dp(
    game: CoordinationGame, colors: tuple[int, ...], pay, x: int
) -> list[ColorTreeDp]:
    """Run the bottom-up DP for one target color over every tree component."""
    vx = game.assignment.nodes_with_color(x)
    adjacency = game.graph.adjacency
    infinity = game.node_count + 1
    tables = []
    for comp in _color_tree_components(game, x):
        root = min(comp)
        parent: dict[int, Optional[int]] = {root: None}
        order = [root]
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in adjacency[v]:
                if w in vx and w not in parent:
                    parent[w] = v
                    order.append(w)
                    queue.append(w)
        children = {v: tuple(sorted(w for w in comp if parent.get(w) == v)) for v in comp}
        subtree: dict[int, frozenset] = {}
        d: dict[int, int] = {}
        u: dict[int, Optional[tuple[int, ...]]] = {}
        d_parent: dict[int, int] = {}
        u_parent: dict[int, Optional[tuple[int, ...]]] = {}
        for v in reversed(order):  # children before parents
            subtree[v] = frozenset((v,)).union(*(subtree[w] for w in children[v])) \
                if children[v] else frozenset((v,))
            if colors[v] == x:
                # already plays x: cannot be a coalition member
                d[v] = d_parent[v] = infinity
                u[v] = u_parent[v] = None
                continue
            already = sum(1 for w in children[v] if colors[w] == x)
            # children sorted by increasing parent-assisted cost, ties by id
            costs = sorted(
                (d_parent[w], w)
                for w in children[v]
                if colors[w] != x and d_parent[w] < infinity
            )

            def assemble(extra: int):
                # v joins; it needs strictly more same-color neighbors than
                # its current payoff: `extra` counts x-colored neighbors that
                # are not chosen children (parent indicator plus `already`)
                need = pay[v] + 1 - extra - already
                take = max(0, need)
                if take > len(costs):
                    return infinity, None
                members = [v]
                total = 1
                for cost, w in costs[:take]:
                    members.extend(u_parent[w])
                    total += cost
                return total, tuple(sorted(members))

            d_parent[v], u_parent[v] = assemble(1)  # parent will play x
            parent_plays_x = parent[v] is not None and colors[parent[v]] == x
            d[v], u[v] = assemble(1 if parent_plays_x else 0)
        tables.append(
            ColorTreeDp(
                color=x,
                root=root,
                infinity=infinity,
                parent=parent,
                children=children,
                subtree=subtree,
                d=d,
                u=u,
                d_parent=d_parent,
                u_parent=u_parent,
            )
        )
    return tables


def min_simple_deviation_to(
    game: CoordinationGame, colors: tuple[int, ...], pay, x: int
) -> Optional[tuple[int, tuple[int, ...]]]:
    """Smallest simple profitable deviation to color x: (size, coalition)."""
    best = None
    for table in compute_color_dp(game, colors, pay, x):
        for v, size in table.d.items():
            if size >= table.infinity:
                continue
            if best is None or (size, table.u[v]) < best:
                best = (size, table.u[v])
    return best


def verify_color_forest(
    game: CoordinationGame, s: JointStrategy, k: int
) -> tuple[bool, Optional[DeviationReport]]:
    """Decide whether s is a k-equilibrium, with a minimal witness otherwise.

    Only valid on color forests (StructuralError otherwise). The witness is
    replayed through build_report before being returned, so a reported
    deviation is always genuinely profitable.
    """
    if not 1 <= k <= game.node_count:
        raise ValueError(f"k={k} outside 1..{game.node_count}")
    colors = game.check_feasible(s)
    pay = payoff_vector(game, colors)
    best = None  # (size, color, coalition)
    for x in range(game.color_count):
        hit = min_simple_deviation_to(game, colors, pay, x)
        if hit is not None:
            size, coalition = hit
            if best is None or (size, x, coalition) < best:
                best = (size, x, coalition)
    if best is None or best[0] > k:
        return True, None
    size, x, coalition = best
    report = build_report(game, s, {i: x for i in coalition})
    return False, report


def default_start(game: CoordinationGame) -> JointStrategy:
    """Each node's first color (lowest id)."""
    return game.strategy([min(ids) for ids in game.assignment.color_sets])


def solve_color_forest(
    game: CoordinationGame, s0: Optional[JointStrategy] = None
) -> JointStrategy:
    """Compute a strong equilibrium of a color-forest game by repeatedly
    applying verification witnesses.

    Every applied deviation strictly raises the social welfare on a color
    forest, so at most 2|E| improvement steps can occur; both facts are
    asserted on every run.
    """
    s = s0 if s0 is not None else default_start(game)
    if not is_color_forest(game.graph, game.assignment):
        raise StructuralError("not a color forest")
    bound = 2 * game.graph.edge_count
    steps = 0
    welfare = social_welfare(game, s)
    while True:
        ok, witness = verify_color_forest(game, s, game.node_count)
        if ok:
            return s
        s = apply_report(game, s, witness)
        new_welfare = social_welfare(game, s)
        if new_welfare <= welfare:
            raise AssertionError("welfare failed to increase on a color forest")
        welfare = new_welfare
        steps += 1
        if steps > bound:
            raise AssertionError(f"more than {bound} improvement steps on a color forest")
