"""Finite directed multigraphs with named vertices and named parallel edges.

A graph is a pair of id sets: vertices, and edges given as
``(edge id, source vertex, range vertex)`` triples.  Everything is immutable
after construction and canonically ordered (lexicographically on ids), so
serialization, fingerprints, and all derived reports are deterministic.

The module also carries the vertex-set machinery used throughout: vertex
classification, hereditary and saturated sets and their joint closure,
vertex-simple cycles without exits, graph morphisms with the Cuntz-Krieger
condition, and a backtracking isomorphism tester for desk-scale graphs.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .errors import GraphFormatError, PreconditionError

_FORBIDDEN_ID_CHARS = set("#,=")


class Edge(NamedTuple):
    eid: str
    src: str
    dst: str


def _check_id(kind: str, name: str) -> None:
    if not isinstance(name, str) or not name:
        raise GraphFormatError(f"{kind} id must be a nonempty string, got {name!r}")
    if any(c.isspace() for c in name) or _FORBIDDEN_ID_CHARS & set(name):
        raise GraphFormatError(
            f"bad {kind} id {name!r}: ids contain no whitespace and none of '#', ',', '='"
        )


@dataclass(frozen=True)
class Graph:
    """Immutable finite directed multigraph.

    ``vertices`` and ``edges`` are stored sorted; use :meth:`build` rather
    than the raw constructor so ordering and the id invariants are enforced.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    @staticmethod
    def build(vertices: Iterable[str], edges: Iterable[Sequence[str]]) -> "Graph":
        vs = sorted(vertices)
        es = sorted(Edge(*e) for e in edges)
        seen_v: set[str] = set()
        for v in vs:
            _check_id("vertex", v)
            if v in seen_v:
                raise GraphFormatError(f"duplicate vertex id {v!r}")
            seen_v.add(v)
        seen_e: set[str] = set()
        for e in es:
            _check_id("edge", e.eid)
            if e.eid in seen_e:
                raise GraphFormatError(f"duplicate edge id {e.eid!r}")
            seen_e.add(e.eid)
            for endpoint in (e.src, e.dst):
                if endpoint not in seen_v:
                    raise GraphFormatError(
                        f"edge {e.eid!r} endpoint {endpoint!r} is not a vertex"
                    )
        return Graph(tuple(vs), tuple(es))

    # -- lookups ---------------------------------------------------------

    @cached_property
    def _vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    @cached_property
    def _edge_by_id(self) -> dict[str, Edge]:
        return {e.eid: e for e in self.edges}

    @cached_property
    def _out(self) -> dict[str, tuple[Edge, ...]]:
        table: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            table[e.src].append(e)
        return {v: tuple(es) for v, es in table.items()}

    @cached_property
    def _in(self) -> dict[str, tuple[Edge, ...]]:
        table: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            table[e.dst].append(e)
        return {v: tuple(es) for v, es in table.items()}

    @cached_property
    def _pair_counts(self) -> dict[tuple[str, str], int]:
        counts: dict[tuple[str, str], int] = {}
        for e in self.edges:
            counts[(e.src, e.dst)] = counts.get((e.src, e.dst), 0) + 1
        return counts

    def has_vertex(self, v: str) -> bool:
        return v in self._vertex_set

    def has_edge(self, eid: str) -> bool:
        return eid in self._edge_by_id

    def require_vertex(self, v: str) -> None:
        if v not in self._vertex_set:
            raise PreconditionError("unknown-vertex", f"no vertex {v!r} in graph")

    def edge(self, eid: str) -> Edge:
        try:
            return self._edge_by_id[eid]
        except KeyError:
            raise PreconditionError("unknown-edge", f"no edge {eid!r} in graph") from None

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        self.require_vertex(v)
        return self._out[v]

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        self.require_vertex(v)
        return self._in[v]

    def out_degree(self, v: str) -> int:
        return len(self.out_edges(v))

    def in_degree(self, v: str) -> int:
        return len(self.in_edges(v))

    def loops_at(self, v: str) -> tuple[Edge, ...]:
        return tuple(e for e in self.out_edges(v) if e.dst == v)

    def pair_count(self, src: str, dst: str) -> int:
        return self._pair_counts.get((src, dst), 0)

    @property
    def sinks(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self._out[v])

    @property
    def source_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self._in[v])

    def is_empty(self) -> bool:
        return not self.vertices


# -- text format -----------------------------------------------------------


def format_graph(g: Graph) -> str:
    """Serialize deterministically: sorted vertex lines, then sorted edge lines."""
    lines = [f"vertex {v}" for v in g.vertices]
    lines += [f"edge {e.eid} {e.src} {e.dst}" for e in g.edges]
    return "".join(line + "\n" for line in lines)


def parse_graph(text: str) -> Graph:
    """Parse the line format: ``vertex <id>`` / ``edge <id> <src> <dst>``.

    ``#`` starts a comment; blank lines are ignored.
    """
    vertices: list[str] = []
    edges: list[tuple[str, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "vertex" and len(parts) == 2:
            vertices.append(parts[1])
        elif parts[0] == "edge" and len(parts) == 4:
            edges.append((parts[1], parts[2], parts[3]))
        else:
            raise GraphFormatError(f"line {lineno}: cannot parse {raw!r}")
    return Graph.build(vertices, edges)


def graph_fingerprint(g: Graph) -> str:
    return hashlib.sha256(format_graph(g).encode("utf-8")).hexdigest()[:16]


# -- vertex classification ---------------------------------------------------


@dataclass(frozen=True)
class VertexClass:
    """Classification of a single vertex.

    ``kind`` is one of ``"regular"``, ``"sink"`` (emits nothing), ``"source"``
    (receives nothing but emits), or ``"isolated"`` (neither emits nor
    receives).  ``out_regular`` records whether the vertex emits at least one
    edge -- a source can still be out-regular.
    """

    kind: str
    out_regular: bool
    in_degree: int
    out_degree: int


def classify_vertex(g: Graph, v: str) -> VertexClass:
    indeg = g.in_degree(v)
    outdeg = g.out_degree(v)
    if outdeg == 0 and indeg == 0:
        kind = "isolated"
    elif outdeg == 0:
        kind = "sink"
    elif indeg == 0:
        kind = "source"
    else:
        kind = "regular"
    return VertexClass(kind=kind, out_regular=outdeg > 0, in_degree=indeg, out_degree=outdeg)


def is_regular(g: Graph, v: str) -> bool:
    """A vertex is regular when it emits at least one (and finitely many) edges."""
    return g.out_degree(v) > 0


# -- reachability, hereditary and saturated sets -----------------------------


def reachable_from(g: Graph, start: Iterable[str]) -> frozenset[str]:
    """Vertices reachable from ``start`` by a path, including ``start`` itself
    (paths of length zero count)."""
    todo = list(start)
    for v in todo:
        g.require_vertex(v)
    seen = set(todo)
    while todo:
        v = todo.pop()
        for e in g.out_edges(v):
            if e.dst not in seen:
                seen.add(e.dst)
                todo.append(e.dst)
    return frozenset(seen)


def is_hereditary(g: Graph, s: Iterable[str]) -> bool:
    sset = set(s)
    for v in sset:
        g.require_vertex(v)
    return all(e.dst in sset for v in sset for e in g.out_edges(v))


def is_saturated(g: Graph, s: Iterable[str]) -> bool:
    """No regular vertex outside ``s`` sends all of its edges into ``s``.

    Only regular vertices can force membership; sinks and isolated vertices
    never do.
    """
    sset = set(s)
    for v in sset:
        g.require_vertex(v)
    for v in g.vertices:
        if v in sset:
            continue
        out = g.out_edges(v)
        if out and all(e.dst in sset for e in out):
            return False
    return True


def hereditary_saturated_closure(g: Graph, s: Iterable[str]) -> frozenset[str]:
    """Smallest hereditary and saturated vertex set containing ``s``.

    Alternates the two closures to a joint fixed point; both are closure
    operators, so the interleaving order does not matter.
    """
    closed = set(reachable_from(g, s))
    while True:
        added = False
        for v in g.vertices:
            if v in closed:
                continue
            out = g.out_edges(v)
            if out and all(e.dst in closed for e in out):
                closed.add(v)
                added = True
        hereditary = reachable_from(g, closed) if closed else frozenset()
        if hereditary != closed:
            closed = set(hereditary)
            added = True
        if not added:
            return frozenset(closed)


def restrict_to_hereditary(g: Graph, h: Iterable[str]) -> Graph:
    """Subgraph on a hereditary set ``h`` with every edge emitted by ``h``.

    Heredity guarantees those edges also land in ``h``.
    """
    hset = set(h)
    for v in hset:
        g.require_vertex(v)
    for v in sorted(hset):
        for e in g.out_edges(v):
            if e.dst not in hset:
                raise PreconditionError(
                    "not-hereditary",
                    f"edge {e.eid!r} leaves the set: {e.src!r} -> {e.dst!r}",
                )
    edges = [e for v in hset for e in g.out_edges(v)]
    return Graph.build(sorted(hset), edges)


# -- paths and cycles --------------------------------------------------------


@dataclass(frozen=True)
class Path:
    """Nonempty composable edge sequence with its derived endpoints."""

    edges: tuple[str, ...]
    source: str
    target: str

    def is_cycle(self) -> bool:
        return self.source == self.target

    def __len__(self) -> int:
        return len(self.edges)


def make_path(g: Graph, edge_ids: Sequence[str]) -> Path:
    if not edge_ids:
        raise PreconditionError("empty-path", "a path consists of at least one edge")
    resolved = [g.edge(eid) for eid in edge_ids]
    for first, second in zip(resolved, resolved[1:]):
        if first.dst != second.src:
            raise PreconditionError(
                "broken-path",
                f"edges {first.eid!r} and {second.eid!r} do not compose "
                f"({first.dst!r} != {second.src!r})",
            )
    return Path(tuple(edge_ids), resolved[0].src, resolved[-1].dst)


def path_vertices(g: Graph, p: Path) -> tuple[str, ...]:
    """Vertices visited in order: each edge's source, then the final target."""
    return tuple(g.edge(eid).src for eid in p.edges) + (p.target,)


def is_vertex_simple_cycle(g: Graph, p: Path) -> bool:
    sources = [g.edge(eid).src for eid in p.edges]
    return p.is_cycle() and len(set(sources)) == len(sources)


def vertex_simple_cycles_without_exit(g: Graph) -> list[Path]:
    """All vertex-simple cycles no vertex of which emits an edge off the cycle.

    Such cycles live entirely on vertices of out-degree one (a second edge at
    any cycle vertex, even one parallel to the cycle edge, is an exit), so
    they are found by following unique out-edges.  Results are based at their
    lexicographically least vertex and sorted by base.
    """
    unique_out = {v: g.out_edges(v)[0] for v in g.vertices if g.out_degree(v) == 1}
    done: set[str] = set()
    cycles: list[Path] = []
    for start in sorted(unique_out):
        if start in done:
            continue
        trail: list[Edge] = []
        position: dict[str, int] = {}
        v = start
        while v in unique_out and v not in position and v not in done:
            position[v] = len(trail)
            trail.append(unique_out[v])
            v = unique_out[v].dst
        if v in position:
            cycle = trail[position[v]:]
            base = min(range(len(cycle)), key=lambda i: cycle[i].src)
            rotated = cycle[base:] + cycle[:base]
            cycles.append(make_path(g, [e.eid for e in rotated]))
        done.update(position)
    return sorted(cycles, key=lambda p: p.source)


def shortest_path(g: Graph, src: str, dst: str) -> Optional[Path]:
    """Shortest nonempty path from ``src`` to ``dst``; lexicographically least
    edge-id sequence among the shortest.  For ``src == dst`` this is the
    shortest cycle through the vertex.  ``None`` when no path exists.
    """
    g.require_vertex(src)
    g.require_vertex(dst)
    seen = {src}
    layer: dict[str, tuple[str, ...]] = {src: ()}
    while layer:
        arrivals: list[tuple[str, ...]] = []
        next_layer: dict[str, tuple[str, ...]] = {}
        for v in sorted(layer):
            prefix = layer[v]
            for e in g.out_edges(v):
                candidate = prefix + (e.eid,)
                if e.dst == dst:
                    arrivals.append(candidate)
                if e.dst in seen:
                    continue
                if e.dst not in next_layer or candidate < next_layer[e.dst]:
                    next_layer[e.dst] = candidate
        if arrivals:
            return make_path(g, min(arrivals))
        seen.update(next_layer)
        layer = next_layer
    return None


# -- morphisms ----------------------------------------------------------------


@dataclass(frozen=True)
class GraphMorphism:
    """A pair of maps (on vertices and on edges) between two graphs."""

    domain: Graph
    codomain: Graph
    vertex_map: tuple[tuple[str, str], ...]
    edge_map: tuple[tuple[str, str], ...]

    @staticmethod
    def build(
        domain: Graph,
        codomain: Graph,
        vertex_map: Mapping[str, str],
        edge_map: Mapping[str, str],
    ) -> "GraphMorphism":
        return GraphMorphism(
            domain,
            codomain,
            tuple(sorted(vertex_map.items())),
            tuple(sorted(edge_map.items())),
        )

    @cached_property
    def vmap(self) -> dict[str, str]:
        return dict(self.vertex_map)

    @cached_property
    def emap(self) -> dict[str, str]:
        return dict(self.edge_map)


def is_graph_homomorphism(f: GraphMorphism) -> bool:
    """Total maps whose edge assignment commutes with both endpoint maps."""
    vmap, emap = f.vmap, f.emap
    if set(vmap) != set(f.domain.vertices) or set(emap) != {e.eid for e in f.domain.edges}:
        return False
    if not all(f.codomain.has_vertex(w) for w in vmap.values()):
        return False
    if not all(f.codomain.has_edge(x) for x in emap.values()):
        return False
    for e in f.domain.edges:
        image = f.codomain.edge(emap[e.eid])
        if image.src != vmap[e.src] or image.dst != vmap[e.dst]:
            return False
    return True


def is_ck_morphism(f: GraphMorphism) -> bool:
    """Injective homomorphism restricting to a bijection on the out-edge set
    of every regular vertex."""
    if not is_graph_homomorphism(f):
        raise PreconditionError("not-homomorphism", "the maps do not form a graph homomorphism")
    vmap, emap = f.vmap, f.emap
    if len(set(vmap.values())) != len(vmap) or len(set(emap.values())) != len(emap):
        return False
    for v in f.domain.vertices:
        if not is_regular(f.domain, v):
            continue
        # the edge map already sends out-edges of v into out-edges of f(v);
        # with injectivity, bijectivity reduces to a degree count
        if f.domain.out_degree(v) != f.codomain.out_degree(vmap[v]):
            return False
    return True


def identity_morphism(g: Graph) -> GraphMorphism:
    return GraphMorphism.build(g, g, {v: v for v in g.vertices}, {e.eid: e.eid for e in g.edges})


def compose_morphisms(first: GraphMorphism, second: GraphMorphism) -> GraphMorphism:
    """Apply ``first`` then ``second``; requires matching middle graph."""
    if first.codomain != second.domain:
        raise PreconditionError(
            "not-composable", "codomain of the first map differs from domain of the second"
        )
    return GraphMorphism.build(
        first.domain,
        second.codomain,
        {v: second.vmap[w] for v, w in first.vmap.items()},
        {e: second.emap[x] for e, x in first.emap.items()},
    )


def invert_morphism(f: GraphMorphism) -> GraphMorphism:
    vmap, emap = f.vmap, f.emap
    if len(set(vmap.values())) != len(f.codomain.vertices) or len(set(emap.values())) != len(
        f.codomain.edges
    ):
        raise PreconditionError("not-bijective", "only bijective morphisms can be inverted")
    return GraphMorphism.build(
        f.codomain,
        f.domain,
        {w: v for v, w in vmap.items()},
        {x: e for e, x in emap.items()},
    )


# -- isomorphism --------------------------------------------------------------


def _vertex_signature(g: Graph, v: str) -> tuple[int, int, int]:
    return (g.out_degree(v), g.in_degree(v), len(g.loops_at(v)))


def graph_isomorphic(g1: Graph, g2: Graph) -> Optional[GraphMorphism]:
    """Find a bijective homomorphism pair, or ``None``.

    Backtracking over vertex assignments with degree-signature pruning and
    incremental parallel-edge-count consistency; intended for desk-scale
    graphs.  The witness is deterministic.
    """
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    sig1 = {v: _vertex_signature(g1, v) for v in g1.vertices}
    groups: dict[tuple[int, int, int], list[str]] = {}
    for w in g2.vertices:
        groups.setdefault(_vertex_signature(g2, w), []).append(w)
    tally: dict[tuple[int, int, int], int] = {}
    for s in sig1.values():
        tally[s] = tally.get(s, 0) + 1
    if {s: len(ws) for s, ws in groups.items()} != tally:
        return None

    order = sorted(g1.vertices, key=lambda v: (len(groups[sig1[v]]), sig1[v], v))
    assignment: dict[str, str] = {}
    used: set[str] = set()

    def backtrack(idx: int) -> bool:
        if idx == len(order):
            return True
        v = order[idx]
        for w in groups[sig1[v]]:
            if w in used:
                continue
            if all(
                g1.pair_count(v, u) == g2.pair_count(w, x)
                and g1.pair_count(u, v) == g2.pair_count(x, w)
                for u, x in assignment.items()
            ):
                assignment[v] = w
                used.add(w)
                if backtrack(idx + 1):
                    return True
                del assignment[v]
                used.discard(w)
        return False

    if not backtrack(0):
        return None

    edge_map: dict[str, str] = {}
    buckets: dict[tuple[str, str], list[str]] = {}
    for e in g2.edges:
        buckets.setdefault((e.src, e.dst), []).append(e.eid)
    for e in g1.edges:
        edge_map[e.eid] = buckets[(assignment[e.src], assignment[e.dst])].pop(0)
    return GraphMorphism.build(g1, g2, assignment, edge_map)
