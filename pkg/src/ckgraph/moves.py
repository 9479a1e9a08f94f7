"""Graph-to-graph transformations that preserve the algebra's invariants.

Each move is a pure function on graphs plus a small parameter record, so a
sequence of moves can be logged, serialized, and replayed against graph
fingerprints.  Fresh ids are generated deterministically from the move's
parameters and suffixed with ``_2``, ``_3``, ... on collision:

* head vertices ``<v>~h<k>`` with edges ``<v>~h<k>e``,
* subdivision vertices ``<e>~s<k>`` with edges ``<e>~s<k>e``,
* star sources ``<v>~t<k>`` with edges ``<v>~t<k>e``,
* collapse compositions ``<e>.<f>``,
* elision sources ``src:<path>`` (edge ids joined by ``.``) with edges
  ``src:<path>~e``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .errors import CertificateError, GraphFormatError, PreconditionError
from .graph import Edge, Graph, graph_fingerprint, is_hereditary


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    k = 2
    while name in taken:
        name = f"{base}_{k}"
        k += 1
    taken.add(name)
    return name


# -- the moves ----------------------------------------------------------------


def add_head(g: Graph, v0: str, n: int) -> Graph:
    """Attach a line of ``n`` fresh vertices feeding ``v0``."""
    g.require_vertex(v0)
    if n <= 0:
        raise PreconditionError("bad-parameter", f"head length must be positive, got {n}")
    vnames = set(g.vertices)
    enames = {e.eid for e in g.edges}
    vertices = list(g.vertices)
    edges = [tuple(e) for e in g.edges]
    previous = v0
    for k in range(1, n + 1):
        vk = _fresh(f"{v0}~h{k}", vnames)
        ek = _fresh(f"{v0}~h{k}e", enames)
        vertices.append(vk)
        edges.append((ek, vk, previous))
        previous = vk
    return Graph.build(vertices, edges)


def subdivide_edge(g: Graph, e0: str, n: int) -> Graph:
    """Replace an edge by a path through ``n`` fresh vertices."""
    target = g.edge(e0)
    if n <= 0:
        raise PreconditionError("bad-parameter", f"subdivision length must be positive, got {n}")
    vnames = set(g.vertices)
    enames = {e.eid for e in g.edges} - {e0}
    vertices = list(g.vertices)
    edges = [tuple(e) for e in g.edges if e.eid != e0]
    chain = [_fresh(f"{e0}~s{k}", vnames) for k in range(1, n + 1)]
    vertices.extend(chain)
    # chain[k-1] plays the k-th new vertex: edges run
    # source(e0) -> chain[n-1] -> ... -> chain[0] -> range(e0)
    edges.append((_fresh(f"{e0}~s1e", enames), chain[0], target.dst))
    for k in range(2, n + 1):
        edges.append((_fresh(f"{e0}~s{k}e", enames), chain[k - 1], chain[k - 2]))
    edges.append((_fresh(f"{e0}~s{n + 1}e", enames), target.src, chain[n - 1]))
    return Graph.build(vertices, edges)


def star_sources(g: Graph, v0: str, n: int) -> Graph:
    """Attach ``n`` fresh sources, each with a single edge into ``v0``."""
    g.require_vertex(v0)
    if n <= 0:
        raise PreconditionError("bad-parameter", f"source count must be positive, got {n}")
    vnames = set(g.vertices)
    enames = {e.eid for e in g.edges}
    vertices = list(g.vertices)
    edges = [tuple(e) for e in g.edges]
    for k in range(1, n + 1):
        vk = _fresh(f"{v0}~t{k}", vnames)
        ek = _fresh(f"{v0}~t{k}e", enames)
        vertices.append(vk)
        edges.append((ek, vk, v0))
    return Graph.build(vertices, edges)


def remove_source(g: Graph, v: str) -> Graph:
    """Delete a vertex that receives no edges, along with everything it emits."""
    g.require_vertex(v)
    if g.in_degree(v) != 0:
        raise PreconditionError("not-a-source", f"vertex {v!r} receives {g.in_degree(v)} edge(s)")
    return Graph.build(
        [w for w in g.vertices if w != v],
        [tuple(e) for e in g.edges if e.src != v],
    )


def collapse_vertex(g: Graph, v: str) -> Graph:
    """Remove a regular loop-free vertex, composing every in/out edge pair.

    Parallel compositions stay distinct edges.  Removing a source is a
    different move (:func:`remove_source`), so sources are rejected here.
    """
    g.require_vertex(v)
    if g.out_degree(v) == 0:
        raise PreconditionError("not-regular", f"vertex {v!r} is a sink")
    if g.in_degree(v) == 0:
        raise PreconditionError("is-a-source", f"vertex {v!r} is a source; use remove-source")
    if g.loops_at(v):
        raise PreconditionError(
            "self-loop", f"vertex {v!r} carries a cycle of length one and cannot be collapsed"
        )
    enames = {e.eid for e in g.edges if v not in (e.src, e.dst)}
    edges = [tuple(e) for e in g.edges if v not in (e.src, e.dst)]
    for incoming in g.in_edges(v):
        for outgoing in g.out_edges(v):
            eid = _fresh(f"{incoming.eid}.{outgoing.eid}", enames)
            edges.append((eid, incoming.src, outgoing.dst))
    return Graph.build([w for w in g.vertices if w != v], edges)


def _complement_paths_into(g: Graph, hset: frozenset[str], v: str,
                           memo: dict[str, list[tuple[str, ...]]]) -> list[tuple[str, ...]]:
    # all edge-id sequences forming paths inside the complement that end at v
    # (including the empty path); the complement is acyclic, so this is finite
    if v in memo:
        return memo[v]
    results: list[tuple[str, ...]] = [()]
    for e in g.in_edges(v):
        if e.src in hset:
            continue
        for prefix in _complement_paths_into(g, hset, e.src, memo):
            results.append(prefix + (e.eid,))
    memo[v] = results
    return results


def source_elision(g: Graph, h) -> Graph:
    """Collapse everything outside a hereditary set into fresh sources.

    The result keeps the restriction to ``h`` and adds, for every path whose
    last edge crosses into ``h`` from outside, one fresh source with a single
    edge to the path's range.  Requires the complement to be acyclic and every
    complement vertex to reach ``h``.
    """
    hset = frozenset(h)
    for v in hset:
        g.require_vertex(v)
    if not is_hereditary(g, hset):
        leak = next(
            e for v in sorted(hset) for e in g.out_edges(v) if e.dst not in hset
        )
        raise PreconditionError(
            "not-hereditary", f"edge {leak.eid!r} leaves the set: {leak.src!r} -> {leak.dst!r}"
        )
    complement = [v for v in g.vertices if v not in hset]

    # acyclicity of the complement subgraph, by repeated source removal
    indeg = {
        v: sum(1 for e in g.in_edges(v) if e.src not in hset) for v in complement
    }
    queue = [v for v in complement if indeg[v] == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for e in g.out_edges(v):
            if e.dst in hset:
                continue
            indeg[e.dst] -= 1
            if indeg[e.dst] == 0:
                queue.append(e.dst)
    if seen != len(complement):
        stuck = sorted(v for v in complement if indeg[v] > 0)
        raise PreconditionError(
            "complement-cyclic", f"cycle outside the set through: {', '.join(stuck)}"
        )

    can_reach = set(hset)
    changed = True
    while changed:
        changed = False
        for v in complement:
            if v not in can_reach and any(e.dst in can_reach for e in g.out_edges(v)):
                can_reach.add(v)
                changed = True
    lost = sorted(set(complement) - can_reach)
    if lost:
        raise PreconditionError(
            "unreachable-vertex", f"vertex {lost[0]!r} has no path into the set"
        )

    vertices = sorted(hset)
    edges = [tuple(e) for v in vertices for e in g.out_edges(v)]
    vnames = set(vertices)
    enames = {e[0] for e in edges}
    crossing = sorted(e for e in g.edges if e.src not in hset and e.dst in hset)
    memo: dict[str, list[tuple[str, ...]]] = {}
    new_sources: list[tuple[str, str]] = []  # (path spelling, range vertex)
    for e in crossing:
        for prefix in _complement_paths_into(g, hset, e.src, memo):
            spelling = ".".join(prefix + (e.eid,))
            new_sources.append((spelling, e.dst))
    for spelling, landing in sorted(new_sources):
        source_id = _fresh(f"src:{spelling}", vnames)
        vertices.append(source_id)
        edges.append((_fresh(f"src:{spelling}~e", enames), source_id, landing))
    return Graph.build(vertices, edges)


def attach_heads(g: Graph, lengths: Mapping[str, int]) -> Graph:
    """Attach a line head of the given length to each vertex (0 = nothing).

    This realizes the finite hereditary truncation of the stabilization that
    contains every original vertex.
    """
    out = g
    for v in sorted(lengths):
        g.require_vertex(v)
        n = lengths[v]
        if n < 0:
            raise PreconditionError("bad-parameter", f"negative head length {n} at {v!r}")
        if n > 0:
            out = add_head(out, v, n)
    return out


# -- move records ---------------------------------------------------------------


@dataclass(frozen=True)
class AddHead:
    vertex: str
    length: int


@dataclass(frozen=True)
class SubdivideEdge:
    edge: str
    length: int


@dataclass(frozen=True)
class StarSources:
    vertex: str
    count: int


@dataclass(frozen=True)
class SourceElision:
    kept: tuple[str, ...]


@dataclass(frozen=True)
class RemoveSource:
    vertex: str


@dataclass(frozen=True)
class CollapseVertex:
    vertex: str


@dataclass(frozen=True)
class AttachHeads:
    lengths: tuple[tuple[str, int], ...]


Move = Union[
    AddHead, SubdivideEdge, StarSources, SourceElision, RemoveSource, CollapseVertex, AttachHeads
]


def apply_move(g: Graph, move: Move) -> Graph:
    if isinstance(move, AddHead):
        return add_head(g, move.vertex, move.length)
    if isinstance(move, SubdivideEdge):
        return subdivide_edge(g, move.edge, move.length)
    if isinstance(move, StarSources):
        return star_sources(g, move.vertex, move.count)
    if isinstance(move, SourceElision):
        return source_elision(g, move.kept)
    if isinstance(move, RemoveSource):
        return remove_source(g, move.vertex)
    if isinstance(move, CollapseVertex):
        return collapse_vertex(g, move.vertex)
    if isinstance(move, AttachHeads):
        return attach_heads(g, dict(move.lengths))
    raise PreconditionError("bad-parameter", f"unknown move {move!r}")


def format_move(move: Move) -> str:
    if isinstance(move, AddHead):
        return f"add-head:{move.vertex}:{move.length}"
    if isinstance(move, SubdivideEdge):
        return f"subdivide-edge:{move.edge}:{move.length}"
    if isinstance(move, StarSources):
        return f"star-sources:{move.vertex}:{move.count}"
    if isinstance(move, SourceElision):
        return "source-elision:" + ",".join(move.kept)
    if isinstance(move, RemoveSource):
        return f"remove-source:{move.vertex}"
    if isinstance(move, CollapseVertex):
        return f"collapse:{move.vertex}"
    if isinstance(move, AttachHeads):
        return "attach-heads:" + ",".join(f"{v}={n}" for v, n in move.lengths)
    raise PreconditionError("bad-parameter", f"unknown move {move!r}")


def parse_move(text: str) -> Move:
    """Parse the spelling produced by :func:`format_move`.

    Trailing integer arguments are split from the right, so ids containing
    ``:`` (elision sources) survive.
    """
    name, _, rest = text.partition(":")
    try:
        if name == "add-head":
            vertex, _, raw = rest.rpartition(":")
            return AddHead(vertex, int(raw))
        if name == "subdivide-edge":
            edge, _, raw = rest.rpartition(":")
            return SubdivideEdge(edge, int(raw))
        if name == "star-sources":
            vertex, _, raw = rest.rpartition(":")
            return StarSources(vertex, int(raw))
        if name == "source-elision":
            kept = tuple(sorted(v for v in rest.split(",") if v))
            if not kept:
                raise GraphFormatError(f"empty vertex set in {text!r}")
            return SourceElision(kept)
        if name == "remove-source":
            return RemoveSource(rest)
        if name == "collapse":
            return CollapseVertex(rest)
        if name == "attach-heads":
            lengths = []
            for item in rest.split(","):
                v, _, raw = item.partition("=")
                lengths.append((v, int(raw)))
            return AttachHeads(tuple(sorted(lengths)))
    except ValueError as exc:
        raise GraphFormatError(f"bad move argument in {text!r}") from exc
    raise GraphFormatError(f"unknown move {text!r}")


# -- move logs --------------------------------------------------------------------


@dataclass(frozen=True)
class MoveLog:
    """Applied moves with the fingerprint of each intermediate graph."""

    start: str
    steps: tuple[tuple[Move, str], ...]


class MoveLogBuilder:
    """Mutable helper used while a pipeline runs; produces a frozen log."""

    def __init__(self, graph: Graph):
        self.graph = graph
        self._start = graph_fingerprint(graph)
        self._steps: list[tuple[Move, str]] = []

    def apply(self, move: Move) -> Graph:
        self.graph = apply_move(self.graph, move)
        self._steps.append((move, graph_fingerprint(self.graph)))
        return self.graph

    def log(self) -> MoveLog:
        return MoveLog(self._start, tuple(self._steps))


def replay_move_log(g: Graph, log: MoveLog) -> Graph:
    """Re-apply a log from its initial graph, verifying every fingerprint."""
    if graph_fingerprint(g) != log.start:
        raise CertificateError(
            f"replay starts from {graph_fingerprint(g)}, log expects {log.start}"
        )
    current = g
    for move, expected in log.steps:
        current = apply_move(current, move)
        actual = graph_fingerprint(current)
        if actual != expected:
            raise CertificateError(
                f"replay mismatch after {format_move(move)}: {actual} != {expected}"
            )
    return current


def format_move_log(log: MoveLog) -> str:
    lines = [f"start {log.start}"]
    lines += [f"{format_move(move)} {fp}" for move, fp in log.steps]
    return "".join(line + "\n" for line in lines)


def parse_move_log(text: str) -> MoveLog:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith("start "):
        raise GraphFormatError("move log must begin with a 'start <fingerprint>' line")
    start = lines[0].split()[1]
    steps = []
    for line in lines[1:]:
        spelling, _, fp = line.rpartition(" ")
        if not spelling or not fp:
            raise GraphFormatError(f"bad move log line {line!r}")
        steps.append((parse_move(spelling), fp))
    return MoveLog(start, tuple(steps))
