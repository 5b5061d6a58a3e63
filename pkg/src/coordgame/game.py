"""Coordination games on graphs: color assignments, joint strategies,
payoffs, and social welfare.

Players are the graph's nodes; each picks one color from its personal set and
earns one point per neighbor choosing the same color.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .errors import FeasibilityError, StructuralError
from .graph import Graph, component_cycle_rank, connected_components, pseudoforest_cycles


class ColorAssignment:
    """Per-node nonempty color sets over a shared palette.

    Color names are interned: the palette is sorted and each name maps to a
    dense integer id; all engine code works with ids.
    """

    __slots__ = ("palette", "color_sets", "_name_to_id", "_slices", "_hash")

    def __init__(self, color_sets: Sequence[Iterable[str]], palette: Optional[Iterable[str]] = None):
        used = {name for s in color_sets for name in s}
        if palette is None:
            names = sorted(used)
        else:
            names = sorted(set(palette))
            missing = used - set(names)
            if missing:
                raise ValueError(f"colors {sorted(missing)} not in the declared palette")
        self.palette = tuple(names)
        self._name_to_id = {name: i for i, name in enumerate(names)}
        sets = []
        for node, s in enumerate(color_sets):
            ids = frozenset(self._name_to_id[name] for name in s)
            if not ids:
                raise ValueError(f"node {node} has an empty color set")
            sets.append(ids)
        self.color_sets = tuple(sets)
        slices = [set() for _ in names]
        for node, ids in enumerate(self.color_sets):
            for x in ids:
                slices[x].add(node)
        self._slices = tuple(frozenset(s) for s in slices)
        self._hash = hash((self.palette, self.color_sets))

    @property
    def node_count(self) -> int:
        return len(self.color_sets)

    @property
    def color_count(self) -> int:
        return len(self.palette)

    def colors_of(self, node: int) -> frozenset:
        return self.color_sets[node]

    def color_id(self, name: str) -> int:
        try:
            return self._name_to_id[name]
        except KeyError:
            raise KeyError(f"unknown color {name!r}") from None

    def color_name(self, color: int) -> str:
        return self.palette[color]

    def nodes_with_color(self, color: int) -> frozenset:
        """V_x: the nodes whose color set contains x."""
        return self._slices[color]

    def __eq__(self, other):
        if not isinstance(other, ColorAssignment):
            return NotImplemented
        return self.palette == other.palette and self.color_sets == other.color_sets

    def __hash__(self):
        return self._hash

    def __repr__(self):
        sets = [sorted(self.palette[x] for x in ids) for ids in self.color_sets]
        return f"ColorAssignment({sets})"


@dataclass(frozen=True)
class JointStrategy:
    """One color id per node. Construct through CoordinationGame.strategy so
    feasibility (s_i in A_i) is always enforced."""

    colors: tuple[int, ...]

    def color_of(self, node: int) -> int:
        return self.colors[node]

    def named(self, game: "CoordinationGame") -> tuple[str, ...]:
        return tuple(game.assignment.color_name(x) for x in self.colors)


@dataclass(frozen=True)
class CoordinationGame:
    """A graph together with a color assignment covering exactly its nodes."""

    graph: Graph
    assignment: ColorAssignment

    def __post_init__(self):
        if self.graph.node_count < 1:
            raise ValueError("a game needs at least one player")
        if self.assignment.node_count != self.graph.node_count:
            raise ValueError(
                f"assignment covers {self.assignment.node_count} nodes, "
                f"graph has {self.graph.node_count}"
            )

    @property
    def node_count(self) -> int:
        return self.graph.node_count

    @property
    def color_count(self) -> int:
        return self.assignment.color_count

    def strategy(self, colors: Sequence[int]) -> JointStrategy:
        """Validate and wrap a tuple of color ids."""
        colors = tuple(colors)
        if len(colors) != self.node_count:
            raise FeasibilityError(
                f"strategy has {len(colors)} entries, game has {self.node_count} players"
            )
        for i, x in enumerate(colors):
            if x not in self.assignment.color_sets[i]:
                raise FeasibilityError(
                    f"node {i} cannot choose color "
                    f"{self.assignment.palette[x] if 0 <= x < self.color_count else x}"
                )
        return JointStrategy(colors)

    def strategy_from_names(self, names: Sequence[str]) -> JointStrategy:
        return self.strategy([self.assignment.color_id(n) for n in names])

    def check_feasible(self, s: JointStrategy) -> tuple[int, ...]:
        self.strategy(s.colors)
        return s.colors

    def strategy_space_size(self) -> int:
        size = 1
        for ids in self.assignment.color_sets:
            size *= len(ids)
        return size

    def iter_profiles(self) -> Iterator[tuple[int, ...]]:
        """All feasible profiles as raw color-id tuples, lexicographic in
        sorted per-node color order."""
        choices = [sorted(ids) for ids in self.assignment.color_sets]
        return itertools.product(*choices)


def payoff_vector(game: CoordinationGame, colors: tuple[int, ...]) -> list[int]:
    """Per-node payoffs for a raw color tuple (no feasibility check)."""
    adjacency = game.graph.adjacency
    return [sum(1 for j in adjacency[i] if colors[j] == colors[i]) for i in range(len(colors))]


def payoff(game: CoordinationGame, s: JointStrategy, node: int) -> int:
    """Number of node's neighbors sharing its color."""
    colors = game.check_feasible(s)
    mine = colors[node]
    return sum(1 for j in game.graph.adjacency[node] if colors[j] == mine)


def payoffs(game: CoordinationGame, s: JointStrategy) -> tuple[int, ...]:
    return tuple(payoff_vector(game, game.check_feasible(s)))


def unicolored_edges(game: CoordinationGame, s: JointStrategy) -> frozenset:
    """E_s^+: the edges whose endpoints chose the same color."""
    colors = game.check_feasible(s)
    return frozenset(e for e in game.graph.edges if colors[e[0]] == colors[e[1]])


def social_welfare(game: CoordinationGame, s: JointStrategy) -> int:
    """Sum of all payoffs; equals twice the unicolored-edge count."""
    colors = game.check_feasible(s)
    return 2 * sum(1 for u, v in game.graph.edges if colors[u] == colors[v])


def social_welfare_restricted(game: CoordinationGame, s: JointStrategy, K: Iterable[int]) -> int:
    """SW_K: payoffs summed over K only."""
    colors = game.check_feasible(s)
    Kset = set(K)
    for i in Kset:
        if not (0 <= i < game.node_count):
            raise ValueError(f"unknown node id {i}")
    adjacency = game.graph.adjacency
    return sum(
        1 for i in Kset for j in adjacency[i] if colors[j] == colors[i]
    )


def unicolored_cycle_count(game: CoordinationGame, s: JointStrategy) -> int:
    """Number of components of a pseudoforest whose unique cycle is unicolored.

    Restricted to pseudoforests (StructuralError otherwise): this count is
    only needed by the pseudoforest potential, and general cycle counting is
    exponential.
    """
    colors = game.check_feasible(s)
    cycles = pseudoforest_cycles(game.graph)
    return sum(1 for cycle in cycles if len({colors[v] for v in cycle}) == 1)


def deviate(
    game: CoordinationGame, s: JointStrategy, moves: Mapping[int, int]
) -> JointStrategy:
    """New profile with the given nodes switched to new colors."""
    colors = list(s.colors)
    for node, x in moves.items():
        colors[node] = x
    return game.strategy(colors)


def is_pseudoforest(graph: Graph) -> bool:
    return all(component_cycle_rank(graph, c) <= 1 for c in connected_components(graph))


def require_pseudoforest(graph: Graph) -> None:
    if not is_pseudoforest(graph):
        raise StructuralError("graph is not a pseudoforest")
