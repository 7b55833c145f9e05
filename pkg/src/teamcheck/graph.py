"""Gaifman graphs, treewidth, and certifying tree decompositions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .model import Structure


class GraphError(ValueError):
    """Malformed graph, oversized exact-treewidth input, or bad decomposition text."""


@dataclass(frozen=True)
class Graph:
    """An undirected graph without self-loops.

    Vertices keep their construction order; edges are stored as pairs
    normalized by vertex position.
    """

    vertices: tuple
    edges: frozenset

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable) -> "Graph":
        vertices = tuple(vertices)
        position = {v: i for i, v in enumerate(vertices)}
        if len(position) != len(vertices):
            raise GraphError("duplicate vertices")
        normalized = set()
        for edge in edges:
            u, v = edge
            if u not in position or v not in position:
                raise GraphError(f"edge {edge!r} has an unknown endpoint")
            if u == v:
                raise GraphError(f"self-loop at {u!r}")
            if position[u] > position[v]:
                u, v = v, u
            normalized.add((u, v))
        return cls(vertices, frozenset(normalized))

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags of vertices joined by tree edges; width is max bag size minus one."""

    bags: tuple[frozenset, ...]
    tree_edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))
        object.__setattr__(
            self, "tree_edges", frozenset(tuple(sorted(e)) for e in self.tree_edges)
        )

    @property
    def width(self) -> int:
        if not self.bags:
            return -1
        return max(len(bag) for bag in self.bags) - 1


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def gaifman(structure: Structure, include_functions: bool = False) -> Graph:
    """The Gaifman graph: an edge joins distinct elements sharing a relation tuple.

    Function and constant symbols contribute nothing by default; with
    `include_functions` every function table row (arguments plus value) is
    treated like a relation tuple.
    """
    names = structure.universe
    tuples = [row for table in structure.relations.values() for row in table]
    if include_functions:
        for table in structure.functions.values():
            tuples.extend(args + (value,) for args, value in table.items())
    edges = set()
    for row in tuples:
        for i, u in enumerate(row):
            for v in row[i + 1:]:
                if u != v:
                    edges.add((names[min(u, v)], names[max(u, v)]))
    return Graph.from_edges(names, edges)


# --- treewidth ---------------------------------------------------------------

def _index_adjacency(graph: Graph) -> dict[int, set[int]]:
    position = {v: i for i, v in enumerate(graph.vertices)}
    adj: dict[int, set[int]] = {i: set() for i in range(len(graph.vertices))}
    for u, v in graph.edges:
        adj[position[u]].add(position[v])
        adj[position[v]].add(position[u])
    return adj


def _eliminate(adj: dict[int, set[int]], v: int) -> None:
    neighbors = adj.pop(v)
    for u in neighbors:
        adj[u].discard(v)
        adj[u].update(neighbors - {u})


def _copy_adj(adj: dict[int, set[int]]) -> dict[int, set[int]]:
    return {v: set(nb) for v, nb in adj.items()}


def _fill_count(adj: dict[int, set[int]], v: int) -> int:
    neighbors = sorted(adj[v])
    missing = 0
    for i, u in enumerate(neighbors):
        for w in neighbors[i + 1:]:
            if w not in adj[u]:
                missing += 1
    return missing


def _min_fill_order(adj: dict[int, set[int]]) -> tuple[int, list[int]]:
    """Greedy min-fill elimination: (width of the ordering, full ordering)."""
    adj = _copy_adj(adj)
    width = 0
    order: list[int] = []
    while adj:
        v = min(adj, key=lambda u: (_fill_count(adj, u), u))
        width = max(width, len(adj[v]))
        order.append(v)
        _eliminate(adj, v)
    return width, order


def _simplicial(adj: dict[int, set[int]], v: int) -> bool:
    neighbors = sorted(adj[v])
    return all(
        w in adj[u] for i, u in enumerate(neighbors) for w in neighbors[i + 1:]
    )


def treewidth_exact(graph: Graph, limit: int = 20) -> tuple[int, TreeDecomposition]:
    """Exact treewidth with a certifying decomposition.

    Branch and bound over elimination orderings, seeded with the greedy
    min-fill ordering: visited vertex subsets are memoized with the best
    prefix width that reached them, eliminating a simplicial vertex never
    branches, and prefixes that cannot strictly improve on the incumbent
    are cut.  Vertex counts above `limit` are refused.
    """
    n = len(graph.vertices)
    if n > limit:
        raise GraphError(f"graph has {n} vertices; exact treewidth is capped at {limit}")
    if n == 0:
        return -1, TreeDecomposition((frozenset(),), frozenset())

    full = _index_adjacency(graph)
    best_width, best_order = _min_fill_order(full)
    reached: dict[frozenset, int] = {}

    def search(adj: dict[int, set[int]], prefix_width: int, order: list[int]) -> None:
        nonlocal best_width, best_order
        if prefix_width >= best_width:
            return
        remaining = frozenset(adj)
        seen = reached.get(remaining)
        if seen is not None and seen <= prefix_width:
            return
        reached[remaining] = prefix_width
        if len(adj) <= 1:
            width = max(prefix_width, 0) if adj else prefix_width
            if width < best_width:
                best_width = width
                best_order = order + sorted(adj)
            return
        candidates = None
        for v in sorted(adj):
            if _simplicial(adj, v):
                candidates = [v]
                break
        if candidates is None:
            candidates = sorted(adj)
        for v in candidates:
            width = max(prefix_width, len(adj[v]))
            if width >= best_width:
                continue
            reduced = _copy_adj(adj)
            _eliminate(reduced, v)
            search(reduced, width, order + [v])

    search(full, -1, [])
    return best_width, _decomposition_from_order(graph, best_order)


def treewidth_greedy(graph: Graph) -> tuple[int, TreeDecomposition]:
    """Min-fill heuristic upper bound with its (always valid) decomposition."""
    if not graph.vertices:
        return -1, TreeDecomposition((frozenset(),), frozenset())
    width, order = _min_fill_order(_index_adjacency(graph))
    return width, _decomposition_from_order(graph, order)


def _decomposition_from_order(graph: Graph, order: list[int]) -> TreeDecomposition:
    """Build the tree decomposition induced by an elimination ordering.

    Each eliminated vertex contributes the bag {v} + its neighborhood at
    elimination time, attached to the most recently created bag containing
    that neighborhood; for edgeless graphs this chains singleton bags into
    a path.
    """
    labels = graph.vertices
    adj = _index_adjacency(graph)
    steps: list[tuple[int, frozenset[int]]] = []
    for v in order[:-1]:
        steps.append((v, frozenset(adj[v])))
        _eliminate(adj, v)
    bags: list[frozenset] = [frozenset({labels[order[-1]]})]
    edges: list[tuple[int, int]] = []
    for v, clique in reversed(steps):
        named_clique = frozenset(labels[u] for u in clique)
        target = None
        for i in range(len(bags) - 1, -1, -1):
            if named_clique <= bags[i]:
                target = i
                break
        if target is None:  # cannot happen for orders produced above
            raise GraphError("elimination order does not induce a decomposition")
        bags.append(named_clique | {labels[v]})
        edges.append((target, len(bags) - 1))
    return TreeDecomposition(tuple(bags), frozenset(edges))


# --- validation ----------------------------------------------------------------

def validate_decomposition(graph: Graph, decomposition: TreeDecomposition) -> ValidationResult:
    """Check the three decomposition conditions plus tree-ness.

    Reports the first violated condition together with a witness: a bad
    tree edge, an uncovered vertex or edge, or the bag sets over which a
    vertex's occurrence is disconnected.
    """
    bags = decomposition.bags
    if not bags:
        if graph.vertices:
            return ValidationResult(False, "decomposition has no bags")
        return ValidationResult(True)

    count = len(bags)
    for i, j in decomposition.tree_edges:
        if not (0 <= i < count and 0 <= j < count):
            return ValidationResult(False, f"tree edge ({i},{j}) references a missing bag")
        if i == j:
            return ValidationResult(False, f"tree edge ({i},{j}) is a self-loop")

    neighbors: dict[int, set[int]] = {i: set() for i in range(count)}
    for i, j in decomposition.tree_edges:
        neighbors[i].add(j)
        neighbors[j].add(i)
    seen = {0}
    stack = [0]
    while stack:
        for j in neighbors[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    if len(decomposition.tree_edges) != count - 1 or len(seen) != count:
        return ValidationResult(False, "bags and tree edges do not form a tree")

    vertex_set = set(graph.vertices)
    for i, bag in enumerate(bags):
        stray = bag - vertex_set
        if stray:
            return ValidationResult(
                False, f"bag {i} contains unknown vertex {sorted(stray, key=repr)[0]!r}"
            )

    for v in graph.vertices:
        if not any(v in bag for bag in bags):
            return ValidationResult(False, f"vertex {v!r} is not covered by any bag")

    for u, v in sorted(graph.edges, key=repr):
        if not any(u in bag and v in bag for bag in bags):
            return ValidationResult(False, f"edge ({u!r},{v!r}) is not inside any bag")

    for v in graph.vertices:
        holding = [i for i, bag in enumerate(bags) if v in bag]
        component = {holding[0]}
        stack = [holding[0]]
        holding_set = set(holding)
        while stack:
            for j in neighbors[stack.pop()]:
                if j in holding_set and j not in component:
                    component.add(j)
                    stack.append(j)
        if component != holding_set:
            rest = sorted(holding_set - component)
            return ValidationResult(
                False,
                f"bags containing {v!r} are disconnected: {sorted(component)} vs {rest}",
            )

    return ValidationResult(True)


# --- decomposition text format ---------------------------------------------------
#
#     bag 0: F7 F8 C1
#     bag 1: F7 C1 09
#     edge 0 1
#
# Vertex labels are read back as strings.

def decomposition_to_text(decomposition: TreeDecomposition) -> str:
    lines = []
    for i, bag in enumerate(decomposition.bags):
        members = " ".join(sorted(str(v) for v in bag))
        lines.append(f"bag {i}: {members}".rstrip())
    for i, j in sorted(decomposition.tree_edges):
        lines.append(f"edge {i} {j}")
    return "\n".join(lines) + "\n"


def decomposition_from_text(text: str) -> TreeDecomposition:
    bags: dict[int, frozenset[str]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "bag":
            if len(parts) < 2 or not parts[1].rstrip(":").isdigit():
                raise GraphError(f"line {lineno}: bad bag line")
            index = int(parts[1].rstrip(":"))
            if index in bags:
                raise GraphError(f"line {lineno}: duplicate bag {index}")
            bags[index] = frozenset(parts[2:])
        elif parts[0] == "edge":
            if len(parts) != 3 or not (parts[1].isdigit() and parts[2].isdigit()):
                raise GraphError(f"line {lineno}: bad edge line")
            edges.append((int(parts[1]), int(parts[2])))
        else:
            raise GraphError(f"line {lineno}: unrecognized directive {parts[0]!r}")
    if not bags:
        raise GraphError("decomposition text has no bags")
    order = sorted(bags)
    renumber = {old: new for new, old in enumerate(order)}
    try:
        edge_set = frozenset((renumber[i], renumber[j]) for i, j in edges)
    except KeyError as exc:
        raise GraphError(f"edge references missing bag {exc.args[0]}") from None
    return TreeDecomposition(tuple(bags[i] for i in order), edge_set)
