"""Built-in instance generators: the worked examples, lower-bound families,
and the clique reduction, each reproduced exactly as published.

Node ids are 0-based here (figure labels in the literature are 1-based, so
figure node i becomes id i-1).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .deviations import DeviationReport, build_report
from .game import ColorAssignment, CoordinationGame, JointStrategy
from .graph import Graph


@dataclass(frozen=True)
class NamedInstance:
    """A generated game plus, when published, a reference profile and a
    canonical profitable deviation."""

    tag: str
    params: tuple[tuple[str, int], ...]
    game: CoordinationGame
    reference_profile: Optional[JointStrategy]
    canonical_deviation: Optional[DeviationReport]
    note: str = ""

    @property
    def name(self) -> str:
        if not self.params:
            return self.tag
        inner = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.tag}({inner})"


_FIG1_EDGES_1BASED = [
    (1, 2), (1, 3), (1, 4), (1, 5), (1, 8),
    (2, 4), (2, 5), (3, 4), (3, 5), (4, 5),
    (4, 6), (4, 7), (4, 8), (5, 6), (5, 7),
    (5, 8), (6, 8), (7, 8),
]

_FIG1_COLOR_SETS = [
    {"a", "c"}, {"a", "b"}, {"a", "b"}, {"b", "c"},
    {"b", "c"}, {"c", "a"}, {"c", "a"}, {"b", "a"},
]

_FIG1_REFERENCE = ["a", "b", "b", "b", "b", "a", "a", "a"]


def figure_one() -> NamedInstance:
    """The 8-player transition-value-4 instance; the reference profile is the
    underlined one (a Nash and 4-equilibrium, but not a 5-equilibrium)."""
    graph = Graph(8, [(u - 1, v - 1) for u, v in _FIG1_EDGES_1BASED])
    game = CoordinationGame(graph, ColorAssignment(_FIG1_COLOR_SETS))
    return NamedInstance(
        tag="fig1",
        params=(),
        game=game,
        reference_profile=game.strategy_from_names(_FIG1_REFERENCE),
        canonical_deviation=None,
        note="8 players, transition value 4",
    )


def weakly_acyclic_figure_one() -> NamedInstance:
    """figure_one with a common color d added to every set: no finite
    c-improvement property, yet all-d is a strong equilibrium reachable in a
    single joint deviation from anywhere."""
    graph = Graph(8, [(u - 1, v - 1) for u, v in _FIG1_EDGES_1BASED])
    sets = [s | {"d"} for s in _FIG1_COLOR_SETS]
    game = CoordinationGame(graph, ColorAssignment(sets))
    return NamedInstance(
        tag="weakly-acyclic-fig1",
        params=(),
        game=game,
        reference_profile=game.strategy_from_names(_FIG1_REFERENCE),
        canonical_deviation=None,
        note="c-weakly acyclic but without the c-FIP",
    )


def octahedron() -> NamedInstance:
    """10 players on the octahedron skeleton plus four dummies; 64 feasible
    profiles, each refutable by a coalition of at most 3 players."""
    edges_1based = (
        [(1, v) for v in (3, 4, 5, 6)]
        + [(2, v) for v in (3, 4, 5, 6)]
        + [(3, 4), (4, 5), (5, 6), (6, 3)]
        + [(7, 3), (8, 4), (9, 5), (10, 6)]
    )
    sets = [
        {"1", "3"}, {"2", "4"}, {"1", "4"}, {"1", "2"}, {"2", "3"},
        {"3", "4"}, {"1"}, {"2"}, {"3"}, {"4"},
    ]
    graph = Graph(10, [(u - 1, v - 1) for u, v in edges_1based])
    game = CoordinationGame(graph, ColorAssignment(sets))
    return NamedInstance(
        tag="octahedron",
        params=(),
        game=game,
        reference_profile=None,
        canonical_deviation=None,
        note="no 3-equilibrium; transition value 2",
    )


def figure_three(copies: int = 1) -> NamedInstance:
    """The 4-cycle whose strong price of anarchy is exactly 2; `copies`
    disjoint duplicates scale the construction to 4*copies players. The
    reference profile is the worst strong equilibrium (b,b,b,a per copy)."""
    if copies < 1:
        raise ValueError("copies must be at least 1")
    edges = []
    sets = []
    reference = []
    for c in range(copies):
        base = 4 * c
        edges += [(base, base + 1), (base + 1, base + 2), (base + 2, base + 3), (base, base + 3)]
        sets += [{"a", "b"}, {"a", "b"}, {"a", "b"}, {"a"}]
        reference += ["b", "b", "b", "a"]
    game = CoordinationGame(Graph(4 * copies, edges), ColorAssignment(sets))
    return NamedInstance(
        tag="fig3",
        params=(("copies", copies),) if copies != 1 else (),
        game=game,
        reference_profile=game.strategy_from_names(reference),
        canonical_deviation=None,
        note="strong price of anarchy 2",
    )


def keylemma_clique(l: int) -> NamedInstance:
    """Clique tightness family: an l-clique whose members each hold a private
    color and a shared color x, plus l-2 forced-color leaves per member.

    From the reference profile (everyone on the private colors) the whole
    clique switching to x is profitable and loses exactly 2*tau - 2 welfare,
    meeting the feedback-edge-set bound up to the parity gap of 2.
    """
    if l < 3:
        raise ValueError("the clique construction needs l >= 3")
    edges = [(i, j) for i in range(l) for j in range(i + 1, l)]
    sets: list[set] = [{f"c{i}", "x"} for i in range(l)]
    reference = [f"c{i}" for i in range(l)]
    next_id = l
    for i in range(l):
        for _ in range(l - 2):
            edges.append((i, next_id))
            sets.append({f"c{i}"})
            reference.append(f"c{i}")
            next_id += 1
    game = CoordinationGame(Graph(next_id, edges), ColorAssignment(sets))
    profile = game.strategy_from_names(reference)
    x = game.assignment.color_id("x")
    deviation = build_report(game, profile, {i: x for i in range(l)})
    return NamedInstance(
        tag="keylemma-clique",
        params=(("l", l),),
        game=game,
        reference_profile=profile,
        canonical_deviation=deviation,
        note="welfare drop meets the -2*tau bound up to parity",
    )


def kpoa_lower(n: int, k: int) -> NamedInstance:
    """Lower-bound family for the k-price of anarchy: a k-clique V1 joined
    completely to the n-k independent nodes V2; V1 picks from {a,c}, V2 from
    {b,c}. The reference profile (V1 on a, V2 on b) is a k-equilibrium with
    welfare k(k-1) against the all-c optimum k(n-1)+(n-k)k."""
    if not 2 <= k <= n:
        raise ValueError("need 2 <= k <= n")
    edges = [(u, v) for u in range(k) for v in range(u + 1, n)]
    sets = [{"a", "c"} if v < k else {"b", "c"} for v in range(n)]
    game = CoordinationGame(Graph(n, edges), ColorAssignment(sets))
    reference = game.strategy_from_names(["a" if v < k else "b" for v in range(n)])
    return NamedInstance(
        tag="kpoa-lower",
        params=(("n", n), ("k", k)),
        game=game,
        reference_profile=reference,
        canonical_deviation=None,
        note="k-price of anarchy at least 2(n-1)/(k-1) - 1",
    )


def poa_unbounded(graph: Graph) -> NamedInstance:
    """Private color x_i per node plus one shared color c on an arbitrary
    graph: all-private is a Nash equilibrium with welfare 0, all-c the
    optimum with welfare 2|E|."""
    if graph.node_count < 1:
        raise ValueError("graph needs at least one node")
    width = len(str(graph.node_count - 1))
    private = [f"x{str(i).zfill(width)}" for i in range(graph.node_count)]
    sets = [{private[i], "c"} for i in range(graph.node_count)]
    game = CoordinationGame(graph, ColorAssignment(sets))
    reference = game.strategy_from_names(private)
    return NamedInstance(
        tag="poa-unbounded",
        params=(("n", graph.node_count),),
        game=game,
        reference_profile=reference,
        canonical_deviation=None,
        note="price of anarchy is infinite whenever the graph has an edge",
    )


def clique_reduction(graph: Graph, k: int) -> NamedInstance:
    """Hardness reduction from k-clique detection: every original node gets a
    private color and the shared color y plus k-2 forced-color pendants. The
    all-private reference profile is a k-equilibrium iff the input graph has
    no k-clique."""
    if k < 2:
        raise ValueError("the reduction needs k >= 2")
    n = graph.node_count
    width = len(str(n - 1))
    private = [f"x{str(v).zfill(width)}" for v in range(n)]
    edges = list(graph.edges)
    sets: list[set] = [{private[v], "y"} for v in range(n)]
    reference = list(private)
    next_id = n
    for v in range(n):
        for _ in range(k - 2):
            edges.append((v, next_id))
            sets.append({private[v]})
            reference.append(private[v])
            next_id += 1
    game = CoordinationGame(Graph(next_id, edges), ColorAssignment(sets))
    return NamedInstance(
        tag="clique-reduction",
        params=(("n", n), ("k", k)),
        game=game,
        reference_profile=game.strategy_from_names(reference),
        canonical_deviation=None,
        note="reference profile is a k-equilibrium iff no k-clique exists",
    )


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p) with a mandatory seed."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p
    ]
    return Graph(n, edges)


def _graph_from_params(params: dict) -> Graph:
    n = int(params["n"])
    if "p" in params:
        if "seed" not in params:
            raise ValueError("a random base graph requires a seed")
        return random_graph(n, float(params["p"]), int(params["seed"]))
    return complete_graph(n)


def generate(tag: str, **params) -> NamedInstance:
    """Build a named instance from its tag and parameters.

    Tags: fig1, weakly-acyclic-fig1, octahedron, fig3[copies],
    keylemma-clique(l), kpoa-lower(n,k), poa-unbounded(n[,p,seed]),
    clique-reduction(n,k[,p,seed]).
    """
    if tag == "fig1":
        return figure_one()
    if tag == "weakly-acyclic-fig1":
        return weakly_acyclic_figure_one()
    if tag == "octahedron":
        return octahedron()
    if tag == "fig3":
        return figure_three(copies=int(params.get("copies", 1)))
    if tag == "keylemma-clique":
        return keylemma_clique(int(params["l"]))
    if tag == "kpoa-lower":
        return kpoa_lower(int(params["n"]), int(params["k"]))
    if tag == "poa-unbounded":
        return poa_unbounded(_graph_from_params(params))
    if tag == "clique-reduction":
        return clique_reduction(_graph_from_params(params), int(params["k"]))
    raise ValueError(f"unknown instance tag {tag!r}")


BUILTIN_TAGS = (
    "fig1",
    "weakly-acyclic-fig1",
    "octahedron",
    "fig3",
    "keylemma-clique",
    "kpoa-lower",
    "poa-unbounded",
    "clique-reduction",
)
