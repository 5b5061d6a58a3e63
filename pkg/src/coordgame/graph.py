"""Undirected-graph substrate: immutable simple graphs, induced subgraphs,
boundary edges, cycle structure, and the classification flags that drive
solver dispatch.

Nodes are dense integers 0..n-1; an edge is a normalized (min, max) pair.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable, NamedTuple, Optional

from .errors import StructuralError

if TYPE_CHECKING:
    from .game import ColorAssignment

Edge = tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable undirected simple graph on nodes 0..node_count-1.

    No self-loops, no duplicate edges. All derived structure (components,
    cycle rank, biconnected components) is computed on demand; instances are
    hashable so expensive enumerations can be cached per graph.
    """

    __slots__ = ("node_count", "edges", "adjacency", "_hash")

    def __init__(self, node_count: int, edges: Iterable[tuple[int, int]]):
        if node_count < 0:
            raise ValueError("node_count must be nonnegative")
        normalized = set()
        adjacency = [set() for _ in range(node_count)]
        for u, v in edges:
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError(f"edge ({u},{v}) has an endpoint outside 0..{node_count - 1}")
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            e = normalize_edge(u, v)
            if e in normalized:
                raise ValueError(f"duplicate edge {e}")
            normalized.add(e)
            adjacency[u].add(v)
            adjacency[v].add(u)
        self.node_count = node_count
        self.edges = frozenset(normalized)
        self.adjacency = tuple(tuple(sorted(ns)) for ns in adjacency)
        self._hash = hash((node_count, self.edges))

    @property
    def nodes(self) -> range:
        return range(self.node_count)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self.adjacency[i]

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def has_edge(self, u: int, v: int) -> bool:
        return normalize_edge(u, v) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.node_count == other.node_count and self.edges == other.edges

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Graph(node_count={self.node_count}, edges={self.sorted_edges()})"


class InducedSubgraph(NamedTuple):
    """Relabeled induced subgraph plus the mapping back to the parent ids."""

    graph: Graph
    original_ids: tuple[int, ...]  # new id -> old id


@dataclass(frozen=True)
class GraphClass:
    """Structural flags of a (graph, color assignment) pair."""

    is_forest: bool
    is_pseudoforest: bool
    cycles_pairwise_edge_disjoint: bool
    girth: float  # minimum cycle length, math.inf on forests
    is_color_forest: bool
    is_color_complete: bool


def _check_node_set(g: Graph, K: Iterable[int]) -> frozenset:
    Kset = frozenset(K)
    for i in Kset:
        if not (0 <= i < g.node_count):
            raise ValueError(f"unknown node id {i}")
    return Kset


def induced_subgraph(g: Graph, K: Iterable[int]) -> InducedSubgraph:
    """Subgraph induced by K, relabeled to 0..|K|-1 (ids in sorted order)."""
    Kset = _check_node_set(g, K)
    original = tuple(sorted(Kset))
    index = {old: new for new, old in enumerate(original)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in Kset and v in Kset]
    return InducedSubgraph(Graph(len(original), edges), original)


def edges_within(g: Graph, K: Iterable[int]) -> frozenset:
    """E[K]: edges with both endpoints in K (parent ids, not relabeled)."""
    Kset = _check_node_set(g, K)
    return frozenset(e for e in g.edges if e[0] in Kset and e[1] in Kset)


def boundary_edges(g: Graph, K: Iterable[int]) -> frozenset:
    """delta(K): edges with exactly one endpoint in K."""
    Kset = _check_node_set(g, K)
    return frozenset(e for e in g.edges if (e[0] in Kset) != (e[1] in Kset))


def connected_components(g: Graph) -> list[frozenset]:
    """Connected components, ordered by smallest member."""
    seen = [False] * g.node_count
    out = []
    for start in g.nodes:
        if seen[start]:
            continue
        comp = []
        queue = deque([start])
        seen[start] = True
        while queue:
            u = queue.popleft()
            comp.append(u)
            for v in g.adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
        out.append(frozenset(comp))
    return out


def component_cycle_rank(g: Graph, component: frozenset) -> int:
    edges_in = sum(1 for u, v in g.edges if u in component)  # u in comp => v in comp
    return edges_in - len(component) + 1


def feedback_edge_number(g: Graph, K: Optional[Iterable[int]] = None) -> int:
    """tau: size of a minimum feedback edge set, via the cycle-rank formula
    |E| - |V| + (#components). With K given, computed on G[K]."""
    if K is not None:
        g = induced_subgraph(g, K).graph
    return g.edge_count - g.node_count + len(connected_components(g))


def minimum_feedback_edge_set(g: Graph) -> frozenset:
    """One minimum feedback edge set: the non-tree edges of a BFS spanning forest."""
    tree = set()
    seen = [False] * g.node_count
    for start in g.nodes:
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in g.adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    tree.add(normalize_edge(u, v))
                    queue.append(v)
    return frozenset(g.edges - tree)


def biconnected_components(g: Graph) -> list[frozenset]:
    """Partition of the edge set into biconnected components (iterative
    Hopcroft-Tarjan; bridges come out as single-edge parts)."""
    n = g.node_count
    disc = [0] * n  # 0 = unvisited, else discovery time >= 1
    low = [0] * n
    timer = 1
    comps: list[frozenset] = []
    for root in g.nodes:
        if disc[root]:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(g.adjacency[root]))]
        edge_stack: list[Edge] = []
        while stack:
            u, parent, it = stack[-1]
            v = next(it, None)
            if v is None:
                stack.pop()
                if stack:
                    pu = stack[-1][0]
                    if low[u] < low[pu]:
                        low[pu] = low[u]
                    if low[u] >= disc[pu]:
                        # pu is an articulation point (or the root): pop one component
                        e = normalize_edge(pu, u)
                        comp = []
                        while True:
                            f = edge_stack.pop()
                            comp.append(f)
                            if f == e:
                                break
                        comps.append(frozenset(comp))
                continue
            if v == parent:
                continue
            if disc[v] == 0:
                edge_stack.append(normalize_edge(u, v))
                disc[v] = low[v] = timer
                timer += 1
                stack.append((v, u, iter(g.adjacency[v])))
            elif disc[v] < disc[u]:
                # back edge to an ancestor; seen once, from the descendant side
                edge_stack.append(normalize_edge(u, v))
                if disc[v] < low[u]:
                    low[u] = disc[v]
    return comps


def girth(g: Graph) -> float:
    """Length of a shortest cycle, math.inf if acyclic.

    For each edge (u,v): shortest u-v path avoiding that edge, plus one.
    Exact, and cheap at the instance sizes this package targets.
    """
    best = math.inf
    for u, v in g.edges:
        dist = {u: 0}
        queue = deque([u])
        while queue:
            a = queue.popleft()
            if a == v:
                break
            da = dist[a]
            if da + 1 >= best:
                continue
            for b in g.adjacency[a]:
                if (a, b) in ((u, v), (v, u)):
                    continue
                if b not in dist:
                    dist[b] = da + 1
                    queue.append(b)
        if v in dist:
            best = min(best, dist[v] + 1)
    return best


def is_color_forest(g: Graph, assignment: "ColorAssignment") -> bool:
    for x in range(assignment.color_count):
        vx = assignment.nodes_with_color(x)
        sub = induced_subgraph(g, vx).graph
        if feedback_edge_number(sub) > 0:
            return False
    return True


def is_color_complete(g: Graph, assignment: "ColorAssignment") -> bool:
    for x in range(assignment.color_count):
        vx = assignment.nodes_with_color(x)
        sub, _ = induced_subgraph(g, vx)
        for comp in connected_components(sub):
            c = len(comp)
            edges_in = sum(1 for a, b in sub.edges if a in comp)
            if edges_in != c * (c - 1) // 2:
                return False
    return True


def cycles_pairwise_edge_disjoint(g: Graph) -> bool:
    """True iff no edge lies on two distinct cycles: every biconnected
    component that contains a cycle must itself be a single simple cycle."""
    for comp in biconnected_components(g):
        if len(comp) <= 1:
            continue  # bridge
        nodes = {x for e in comp for x in e}
        if len(comp) != len(nodes):
            return False
    return True


def classify(g: Graph, assignment: "ColorAssignment") -> GraphClass:
    """Compute every structural flag exactly."""
    if assignment.node_count != g.node_count:
        raise ValueError(
            f"assignment covers {assignment.node_count} nodes, graph has {g.node_count}"
        )
    ranks = [component_cycle_rank(g, comp) for comp in connected_components(g)]
    forest = all(r == 0 for r in ranks)
    return GraphClass(
        is_forest=forest,
        is_pseudoforest=all(r <= 1 for r in ranks),
        cycles_pairwise_edge_disjoint=cycles_pairwise_edge_disjoint(g),
        girth=girth(g),
        is_color_forest=is_color_forest(g, assignment),
        is_color_complete=is_color_complete(g, assignment),
    )


def pseudoforest_cycles(g: Graph) -> list[tuple[int, ...]]:
    """The unique cycle of every cyclic component of a pseudoforest, each as a
    node tuple in cyclic order starting from its smallest node.

    Raises StructuralError if some component has more than one cycle.
    """
    cycles = []
    for comp in connected_components(g):
        rank = component_cycle_rank(g, comp)
        if rank == 0:
            continue
        if rank > 1:
            raise StructuralError("component has more than one cycle; not a pseudoforest")
        # peel degree-1 nodes; what remains is the cycle
        degree = {u: sum(1 for v in g.adjacency[u] if v in comp) for u in comp}
        queue = deque(u for u, d in degree.items() if d == 1)
        alive = set(comp)
        while queue:
            u = queue.popleft()
            alive.discard(u)
            for v in g.adjacency[u]:
                if v in alive:
                    degree[v] -= 1
                    if degree[v] == 1:
                        queue.append(v)
        start = min(alive)
        order = [start]
        prev = None
        cur = start
        while True:
            nxt = next(v for v in g.adjacency[cur] if v in alive and v != prev)
            if nxt == start:
                break
            order.append(nxt)
            prev, cur = cur, nxt
        cycles.append(tuple(order))
    return cycles


def private_edge(g: Graph) -> Optional[Edge]:
    """An edge on a cycle whose endpoints lie on no other cycle, or None on
    forests. Requires all cycles pairwise edge-disjoint (StructuralError
    otherwise); existence is then guaranteed."""
    cycle_comps = []
    for comp in biconnected_components(g):
        if len(comp) <= 1:
            continue
        nodes = frozenset(x for e in comp for x in e)
        if len(comp) != len(nodes):
            raise StructuralError("two cycles share an edge")
        cycle_comps.append((comp, nodes))
    if not cycle_comps:
        return None
    for comp, nodes in cycle_comps:
        others = set()
        for other, other_nodes in cycle_comps:
            if other is not comp:
                others |= other_nodes
        for e in sorted(comp):
            if e[0] not in others and e[1] not in others:
                return e
    raise AssertionError("edge-disjoint cycle structure must admit a private edge")


@lru_cache(maxsize=256)
def connected_subsets(g: Graph, max_size: int) -> tuple[frozenset, ...]:
    """All connected node subsets of size 1..max_size, ordered by size then by
    sorted member tuple. Grown by neighbor expansion, so disconnected sets are
    never generated."""
    seen: set[frozenset] = set()
    current = [frozenset((v,)) for v in g.nodes]
    seen.update(current)
    out = list(current)
    for _ in range(2, max_size + 1):
        grown = []
        for s in current:
            for u in s:
                for w in g.adjacency[u]:
                    if w not in s:
                        t = s | {w}
                        if t not in seen:
                            seen.add(t)
                            grown.append(t)
        current = grown
        out.extend(grown)
    out.sort(key=lambda s: (len(s), tuple(sorted(s))))
    return tuple(out)
