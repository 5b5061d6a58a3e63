"""Instance file format: a line-oriented, versioned text grammar.

    coordgame 1
    name fig3                  # optional metadata
    node 0 a b                 # node <id> <color> [<color> ...]
    node 1 a b
    edge 0 1                   # edge <id> <id>
    choice 0 b                 # optional embedded profile, one line per node

Comments start with '#': full-line or trailing. Node ids must be exactly
0..n-1; colors are arbitrary whitespace-free tokens. The canonical form
(sorted nodes, sorted colors, sorted edges, sorted choices) round-trips
through parse and serialize unchanged.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

from .errors import FeasibilityError, ParseError
from .game import ColorAssignment, CoordinationGame, JointStrategy
from .graph import Graph, normalize_edge

FORMAT_VERSION = 1


class ParsedInstance(NamedTuple):
    game: CoordinationGame
    profile: Optional[JointStrategy]
    name: Optional[str]


def _strip_comment(line: str) -> str:
    if "#" in line:
        line = line[: line.index("#")]
    return line.strip()


def parse_instance(text: str) -> ParsedInstance:
    """Parse instance text, validating structure and profile feasibility.

    Raises ParseError (with the line number) on malformed input and
    FeasibilityError when an embedded profile escapes a node's color set.
    """
    nodes: dict[int, list[str]] = {}
    edges: list[tuple[int, int]] = []
    edge_seen: set = set()
    choices: dict[int, str] = {}
    name: Optional[str] = None
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        parts = line.split()
        keyword = parts[0]
        if not header_seen:
            if keyword != "coordgame":
                raise ParseError("expected header 'coordgame <version>'", lineno)
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("malformed header; expected 'coordgame <version>'", lineno)
            if int(parts[1]) != FORMAT_VERSION:
                raise ParseError(f"unsupported format version {parts[1]}", lineno)
            header_seen = True
            continue
        if keyword == "name":
            if len(parts) != 2:
                raise ParseError("'name' takes exactly one token", lineno)
            name = parts[1]
        elif keyword == "node":
            if len(parts) < 3:
                raise ParseError("'node' needs an id and at least one color", lineno)
            try:
                node_id = int(parts[1])
            except ValueError:
                raise ParseError(f"invalid node id {parts[1]!r}", lineno) from None
            if node_id < 0:
                raise ParseError(f"negative node id {node_id}", lineno)
            if node_id in nodes:
                raise ParseError(f"node {node_id} defined twice", lineno)
            colors = parts[2:]
            if len(set(colors)) != len(colors):
                raise ParseError(f"node {node_id} lists a color twice", lineno)
            nodes[node_id] = colors
        elif keyword == "edge":
            if len(parts) != 3:
                raise ParseError("'edge' needs exactly two node ids", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("invalid edge endpoint", lineno) from None
            if u == v:
                raise ParseError(f"self-loop at node {u}", lineno)
            e = normalize_edge(u, v)
            if e in edge_seen:
                raise ParseError(f"duplicate edge {u} {v}", lineno)
            edge_seen.add(e)
            edges.append(e)
        elif keyword == "choice":
            if len(parts) != 3:
                raise ParseError("'choice' needs a node id and a color", lineno)
            try:
                node_id = int(parts[1])
            except ValueError:
                raise ParseError(f"invalid node id {parts[1]!r}", lineno) from None
            if node_id in choices:
                raise ParseError(f"choice for node {node_id} given twice", lineno)
            choices[node_id] = parts[2]
        else:
            raise ParseError(f"unknown directive {keyword!r}", lineno)
    if not header_seen:
        raise ParseError("empty instance: missing 'coordgame <version>' header", 1)
    if not nodes:
        raise ParseError("instance defines no nodes", 1)
    n = len(nodes)
    missing = [i for i in range(n) if i not in nodes]
    if missing:
        raise ParseError(f"node ids must be 0..{n - 1}; missing {missing[0]}", 1)
    for u, v in edges:
        if u < 0 or v >= n:
            bad = u if u < 0 else v
            raise ParseError(f"edge ({u},{v}) references unknown node {bad}", 1)
    graph = Graph(n, edges)
    assignment = ColorAssignment([nodes[i] for i in range(n)])
    game = CoordinationGame(graph, assignment)
    profile = None
    if choices:
        uncovered = [i for i in range(n) if i not in choices]
        if uncovered:
            raise ParseError(f"profile incomplete: no choice for node {uncovered[0]}", 1)
        unknown = [i for i in choices if not 0 <= i < n]
        if unknown:
            raise ParseError(f"choice references unknown node {unknown[0]}", 1)
        names = [choices[i] for i in range(n)]
        for i, color in enumerate(names):
            if color not in assignment.palette or assignment.color_id(color) not in assignment.colors_of(i):
                raise FeasibilityError(
                    f"profile infeasible: node {i} cannot choose color {color!r}"
                )
        profile = game.strategy_from_names(names)
    return ParsedInstance(game, profile, name)


def serialize_instance(
    game: CoordinationGame,
    profile: Optional[JointStrategy] = None,
    name: Optional[str] = None,
) -> str:
    """Canonical text form: sorted node ids, colors, edges, and choices."""
    lines = [f"coordgame {FORMAT_VERSION}"]
    if name:
        lines.append(f"name {name}")
    assignment = game.assignment
    for i in range(game.node_count):
        colors = " ".join(sorted(assignment.color_name(x) for x in assignment.colors_of(i)))
        lines.append(f"node {i} {colors}")
    for u, v in game.graph.sorted_edges():
        lines.append(f"edge {u} {v}")
    if profile is not None:
        game.check_feasible(profile)
        for i, x in enumerate(profile.colors):
            lines.append(f"choice {i} {assignment.color_name(x)}")
    return "\n".join(lines) + "\n"


def parse_profile(text: str, game: CoordinationGame) -> JointStrategy:
    """Parse a standalone profile file: 'choice <id> <color>' lines (bare
    '<id> <color>' is accepted too). Must cover every node."""
    choices: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        parts = line.split()
        if parts[0] == "choice":
            parts = parts[1:]
        elif parts[0] == "coordgame":
            raise ParseError(
                "this is an instance file; pass its embedded profile instead", lineno
            )
        if len(parts) != 2:
            raise ParseError("expected '<node id> <color>'", lineno)
        try:
            node_id = int(parts[0])
        except ValueError:
            raise ParseError(f"invalid node id {parts[0]!r}", lineno) from None
        if node_id in choices:
            raise ParseError(f"choice for node {node_id} given twice", lineno)
        choices[node_id] = parts[1]
    uncovered = [i for i in range(game.node_count) if i not in choices]
    if uncovered:
        raise ParseError(f"profile incomplete: no choice for node {uncovered[0]}", 1)
    for i in choices:
        if not 0 <= i < game.node_count:
            raise ParseError(f"choice references unknown node {i}", 1)
    return game.strategy_from_names([choices[i] for i in range(game.node_count)])
