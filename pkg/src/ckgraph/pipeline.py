"""End-to-end procedures built from moves: normalization to a sink-free and
source-free graph, self-loop saturation by collapsing, full-corner and
general corner realization, and matrix amplification.

Every pipeline returns the output graph together with a replayable move log,
the K-invariants before and after, and certificate flags that are *verified
against the output*, never assumed.  A multiset of projection multiplicities
can ride along; it is transported through source removals and collapses by
expanding its mass first, which keeps its K0 class fixed at every step.
"""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass
from typing import Optional

from .errors import CertificateError, PreconditionError
from .graph import Graph, graph_fingerprint, hereditary_saturated_closure, restrict_to_hereditary
from .ktheory import KInvariants, k0_class_divisible, k0_class_of, k_invariants
from .monoid import VertexMultiset, expand_at, fullness_normalize, ones
from .moves import (
    AttachHeads,
    CollapseVertex,
    MoveLog,
    MoveLogBuilder,
    RemoveSource,
    SourceElision,
    SubdivideEdge,
)


@dataclass(frozen=True)
class PipelineResult:
    graph: Graph
    log: MoveLog
    before: KInvariants
    after: KInvariants
    certificates: tuple[tuple[str, bool], ...]
    multiset: Optional[VertexMultiset] = None
    restriction: Optional[Graph] = None

    def certificate(self, name: str) -> bool:
        return dict(self.certificates)[name]


def _require_certificates(certificates: tuple[tuple[str, bool], ...]) -> None:
    failed = [name for name, ok in certificates if not ok]
    if failed:
        raise CertificateError(f"pipeline certificates failed: {', '.join(failed)}")


def core_vertices(g: Graph) -> frozenset[str]:
    """The largest subgraph left after repeatedly deleting source vertices.

    For a finite sink-free graph this is the hereditary set of vertices lying
    on or downstream of a cycle; it is empty only for the empty graph.
    """
    removed: set[str] = set()
    while True:
        newly = [
            v
            for v in g.vertices
            if v not in removed and all(e.src in removed for e in g.in_edges(v))
        ]
        if not newly:
            return frozenset(g.vertices) - removed
        removed.update(newly)


def _push_mass(g: Graph, m: VertexMultiset, keep: frozenset[str]) -> VertexMultiset:
    # expand all mass off the complement of `keep`; the complement must be
    # acyclic (true for the complement of the core), so a topological sweep
    # never revisits a vertex
    outside = [v for v in g.vertices if v not in keep]
    outside_set = set(outside)
    indeg = {v: sum(1 for e in g.in_edges(v) if e.src in outside_set) for v in outside}
    ready = sorted(v for v in outside if indeg[v] == 0)
    order: list[str] = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for e in g.out_edges(v):
            if e.dst in outside_set:
                indeg[e.dst] -= 1
                if indeg[e.dst] == 0:
                    insort(ready, e.dst)
    if len(order) != len(outside):
        raise CertificateError("mass transport expected an acyclic complement")
    for v in order:
        while m.get(v) > 0:
            m = expand_at(g, m, v)
    return m


def normalize_to_ck(g: Graph, carry: Optional[VertexMultiset] = None) -> PipelineResult:
    """Turn a finite sink-free graph into one with no sinks and no sources.

    The sink-free and source-free core is found by iterated source removal;
    the graph is rebuilt as the core plus one fresh source per crossing path,
    and each group of k sources landing at a core vertex is absorbed as a
    k-fold subdivision of that vertex's least incoming core edge.  K-groups
    and the unit profile are preserved end to end and certified.
    """
    if g.sinks:
        raise PreconditionError("has-sink", f"sinks present: {', '.join(g.sinks)}")
    if g.is_empty():
        raise PreconditionError("empty-core", "the empty graph has no cycles to normalize onto")
    before = k_invariants(g)
    core = core_vertices(g)
    if not core:
        raise PreconditionError(
            "empty-core", "no cycles anywhere: no sink-free and source-free form exists"
        )
    m = carry
    if m is not None:
        for v in m.support:
            g.require_vertex(v)
        m = _push_mass(g, m, core)

    builder = MoveLogBuilder(g)
    if core != frozenset(g.vertices):
        builder.apply(SourceElision(tuple(sorted(core))))
        elided = builder.graph
        groups: dict[str, list[str]] = {}
        for s in elided.vertices:
            if s not in core and elided.in_degree(s) == 0:
                landing = elided.out_edges(s)[0].dst
                groups.setdefault(landing, []).append(s)
        for v in sorted(groups):
            for s in sorted(groups[v]):
                builder.apply(RemoveSource(s))
            incoming = builder.graph.in_edges(v)
            if not incoming:
                raise CertificateError(f"core vertex {v!r} lost its incoming edges")
            builder.apply(SubdivideEdge(min(e.eid for e in incoming), len(groups[v])))

    out = builder.graph
    after = k_invariants(out)
    certificates = (
        ("no-sinks", not out.sinks),
        ("no-sources", not out.source_vertices),
        ("k-invariants-preserved", before.groups_equal(after)),
        ("unit-profile-preserved", before.unit_profile == after.unit_profile),
    )
    _require_certificates(certificates)
    return PipelineResult(out, builder.log(), before, after, certificates, multiset=m)


def self_loop_saturate(g: Graph, carry: Optional[VertexMultiset] = None) -> PipelineResult:
    """Collapse vertices until every vertex carries a cycle of length one.

    Each round collapses the least vertex without a self-loop; the vertex
    count strictly drops, so this terminates, and a lone vertex in a
    sink-free graph necessarily carries a loop.  K-groups are preserved (the
    unit class is not, in general).
    """
    if g.sinks:
        raise PreconditionError("has-sink", f"sinks present: {', '.join(g.sinks)}")
    if g.source_vertices:
        raise PreconditionError("has-source", f"sources present: {', '.join(g.source_vertices)}")
    before = k_invariants(g)
    builder = MoveLogBuilder(g)
    m = carry
    while True:
        current = builder.graph
        lacking = [v for v in current.vertices if not current.loops_at(v)]
        if not lacking:
            break
        v = lacking[0]
        if m is not None:
            while m.get(v) > 0:
                m = expand_at(current, m, v)
        builder.apply(CollapseVertex(v))
    out = builder.graph
    after = k_invariants(out)
    certificates = (
        ("no-sinks", not out.sinks),
        ("no-sources", not out.source_vertices),
        ("all-self-loops", all(out.loops_at(v) for v in out.vertices)),
        ("k-invariants-preserved", before.groups_equal(after)),
    )
    _require_certificates(certificates)
    return PipelineResult(out, builder.log(), before, after, certificates, multiset=m)


def _head_projection(base: Graph, corner: Graph) -> dict[str, str]:
    # send every attached head vertex to the base vertex its chain feeds
    projection: dict[str, str] = {}
    for v in corner.vertices:
        w = v
        hops = 0
        while not base.has_vertex(w):
            w = corner.out_edges(w)[0].dst
            hops += 1
            if hops > len(corner.vertices):
                raise CertificateError(f"head chain from {v!r} never reaches the base graph")
        projection[v] = w
    return projection


def realize_full_corner(g: Graph, m: VertexMultiset) -> PipelineResult:
    """Realize the corner cut by an everywhere-positive multiset as a graph.

    The corner graph attaches a head of length ``m(u) - 1`` to each vertex
    ``u``; its vertex count equals the multiset's total mass, its K-groups
    match the base graph's, and the class of its unit maps onto the class of
    the multiset in the base K0 under the head-collapsing projection.  All of
    that is certified through the Smith transforms.
    """
    if g.sinks:
        raise PreconditionError("has-sink", f"sinks present: {', '.join(g.sinks)}")
    if g.source_vertices:
        raise PreconditionError("has-source", f"sources present: {', '.join(g.source_vertices)}")
    loopless = [v for v in g.vertices if not g.loops_at(v)]
    if loopless:
        raise PreconditionError(
            "missing-self-loop", f"vertices without a self-loop: {', '.join(loopless)}"
        )
    for v in m.support:
        g.require_vertex(v)
    zeros = [u for u in g.vertices if m.get(u) == 0]
    if zeros:
        raise PreconditionError(
            "zero-multiplicity",
            f"multiset must be positive everywhere; zero at {zeros[0]!r}",
        )
    before = k_invariants(g)
    builder = MoveLogBuilder(g)
    lengths = tuple(sorted((u, m.get(u) - 1) for u in g.vertices if m.get(u) > 1))
    if lengths:
        builder.apply(AttachHeads(lengths))
    out = builder.graph
    after = k_invariants(out)

    projection = _head_projection(g, out)
    relations_land_in_image = True
    for v in out.vertices:
        column: dict[str, int] = {}
        for e in out.out_edges(v):
            w = projection[e.dst]
            column[w] = column.get(w, 0) + 1
        column[projection[v]] = column.get(projection[v], 0) - 1
        if not k0_class_of(g, column).is_zero():
            relations_land_in_image = False
    unit_image: dict[str, int] = {}
    for v in out.vertices:
        unit_image[projection[v]] = unit_image.get(projection[v], 0) + 1

    certificates = (
        ("no-sinks", not out.sinks),
        ("corner-size-matches", len(out.vertices) == m.total()),
        ("k-invariants-preserved", before.groups_equal(after)),
        ("k0-projection-certified", relations_land_in_image),
        ("unit-class-matches", k0_class_of(g, unit_image) == k0_class_of(g, m.to_dict())),
    )
    _require_certificates(certificates)
    return PipelineResult(out, builder.log(), before, after, certificates, multiset=m)


def realize_corner(g: Graph, p: VertexMultiset) -> PipelineResult:
    """Realize the corner of a sink-free source-free graph cut by any nonzero
    multiset of vertex projections.

    Stages: restrict to the hereditary saturated closure of the support;
    normalize away sources while expanding the multiset off removed vertices;
    saturate self-loops while expanding through collapses; make the multiset
    positive everywhere; attach heads.  The output's K-groups equal those of
    the restriction.
    """
    if g.sinks:
        raise PreconditionError("has-sink", f"sinks present: {', '.join(g.sinks)}")
    if g.source_vertices:
        raise PreconditionError("has-source", f"sources present: {', '.join(g.source_vertices)}")
    if p.is_zero():
        raise PreconditionError("zero-multiset", "a corner needs a nonzero projection")
    for v in p.support:
        g.require_vertex(v)
    kept = hereditary_saturated_closure(g, p.support)
    restriction = restrict_to_hereditary(g, kept)
    before = k_invariants(restriction)
    normalized = normalize_to_ck(restriction, carry=p)
    saturated = self_loop_saturate(normalized.graph, carry=normalized.multiset)
    assert saturated.multiset is not None
    full = fullness_normalize(saturated.graph, saturated.multiset)
    corner = realize_full_corner(saturated.graph, full)
    after = corner.after
    certificates = (
        ("no-sinks", not corner.graph.sinks),
        ("k-invariants-preserved", before.groups_equal(after)),
        ("multiset-positive", all(full.get(u) >= 1 for u in saturated.graph.vertices)),
        ("unit-class-matches", corner.certificate("unit-class-matches")),
    )
    _require_certificates(certificates)
    return PipelineResult(
        corner.graph,
        MoveLog(
            normalized.log.start,
            normalized.log.steps + saturated.log.steps + corner.log.steps,
        ),
        before,
        after,
        certificates,
        multiset=full,
        restriction=restriction,
    )


def matrix_amplify(g: Graph, n: int) -> PipelineResult:
    """Realize the n-by-n matrix amplification as a graph.

    The unit of the amplification is n copies of the unit, so this is the
    full corner at the multiset with multiplicity n everywhere, taken after
    normalization and saturation; the output unit class is divisible by n.
    For n = 1 the graph is returned unchanged.
    """
    if n <= 0:
        raise PreconditionError("bad-parameter", f"amplification factor must be positive, got {n}")
    if g.sinks:
        raise PreconditionError("has-sink", f"sinks present: {', '.join(g.sinks)}")
    before = k_invariants(g)
    if n == 1:
        certificates = (
            ("no-sinks", not g.sinks),
            ("k-invariants-preserved", True),
            ("unit-divisible-by-factor", True),
        )
        return PipelineResult(
            g, MoveLog(graph_fingerprint(g), ()), before, before, certificates, multiset=ones(g)
        )
    normalized = normalize_to_ck(g, carry=ones(g).scaled(n))
    saturated = self_loop_saturate(normalized.graph, carry=normalized.multiset)
    assert saturated.multiset is not None
    full = fullness_normalize(saturated.graph, saturated.multiset)
    corner = realize_full_corner(saturated.graph, full)
    after = corner.after
    certificates = (
        ("no-sinks", not corner.graph.sinks),
        ("k-invariants-preserved", before.groups_equal(after)),
        ("unit-class-matches", corner.certificate("unit-class-matches")),
        (
            "unit-divisible-by-factor",
            k0_class_divisible(corner.graph, {v: 1 for v in corner.graph.vertices}, n),
        ),
    )
    _require_certificates(certificates)
    return PipelineResult(
        corner.graph,
        MoveLog(
            normalized.log.start,
            normalized.log.steps + saturated.log.steps + corner.log.steps,
        ),
        before,
        after,
        certificates,
        multiset=full,
    )
