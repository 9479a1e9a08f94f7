"""Projection calculus on vertex multisets.

A class of projections over a graph algebra is represented by a finitely
supported multiset of vertices.  The one rewrite rule -- a unit at a regular
vertex trades for one unit at the range of each edge it emits, and back --
generates Murray-von Neumann equivalence of these classes.  This module
implements the rewrite, its telescoping along a path, a bidirectional
breadth-first equivalence oracle with replayable traces, fullness, and the
normalization that makes a full multiset everywhere positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, NamedTuple, Optional

from .errors import CertificateError, GraphFormatError, PreconditionError
from .graph import (
    Graph,
    Path,
    hereditary_saturated_closure,
    is_regular,
    make_path,
    reachable_from,
    shortest_path,
)


@dataclass(frozen=True)
class VertexMultiset:
    """Finitely supported map from vertex ids to non-negative multiplicities.

    Zero entries are dropped, so equal multisets compare equal.
    """

    counts: tuple[tuple[str, int], ...]

    @staticmethod
    def from_dict(mapping: Mapping[str, int]) -> "VertexMultiset":
        for v, n in mapping.items():
            if not isinstance(n, int) or n < 0:
                raise GraphFormatError(f"multiplicity of {v!r} must be a non-negative int, got {n!r}")
        return VertexMultiset(tuple(sorted((v, n) for v, n in mapping.items() if n)))

    @cached_property
    def _map(self) -> dict[str, int]:
        return dict(self.counts)

    def get(self, v: str) -> int:
        return self._map.get(v, 0)

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.counts)

    def total(self) -> int:
        return sum(n for _, n in self.counts)

    def is_zero(self) -> bool:
        return not self.counts

    def to_dict(self) -> dict[str, int]:
        return dict(self.counts)

    def plus(self, other: Mapping[str, int]) -> "VertexMultiset":
        merged = self.to_dict()
        for v, n in other.items():
            merged[v] = merged.get(v, 0) + n
        return VertexMultiset.from_dict(merged)

    def minus(self, other: Mapping[str, int]) -> "VertexMultiset":
        merged = self.to_dict()
        for v, n in other.items():
            merged[v] = merged.get(v, 0) - n
            if merged[v] < 0:
                raise PreconditionError(
                    "insufficient-multiplicity",
                    f"cannot remove {n} unit(s) of {v!r} from multiplicity {self.get(v)}",
                )
        return VertexMultiset.from_dict(merged)

    def scaled(self, k: int) -> "VertexMultiset":
        if k < 0:
            raise PreconditionError("bad-parameter", "scale factor must be non-negative")
        return VertexMultiset.from_dict({v: k * n for v, n in self.counts})


def ones(g: Graph) -> VertexMultiset:
    return VertexMultiset.from_dict({v: 1 for v in g.vertices})


def parse_multiset(text: str) -> VertexMultiset:
    """Parse the literal form ``v0=2,v1=1``; the empty string is the zero multiset."""
    counts: dict[str, int] = {}
    if not text.strip():
        return VertexMultiset.from_dict({})
    for item in text.split(","):
        if "=" not in item:
            raise GraphFormatError(f"bad multiset item {item!r}, expected <vertex>=<count>")
        v, _, raw = item.partition("=")
        v = v.strip()
        try:
            n = int(raw)
        except ValueError as exc:
            raise GraphFormatError(f"bad multiplicity in {item!r}") from exc
        if not v or n < 0:
            raise GraphFormatError(f"bad multiset item {item!r}")
        counts[v] = counts.get(v, 0) + n
    return VertexMultiset.from_dict(counts)


def format_multiset(m: VertexMultiset) -> str:
    return ",".join(f"{v}={n}" for v, n in m.counts)


class RewriteStep(NamedTuple):
    op: str  # "expand" | "contract"
    vertex: str


@dataclass(frozen=True)
class RewriteTrace:
    """Replayable step sequence turning one multiset into another."""

    steps: tuple[RewriteStep, ...]

    def replay(self, g: Graph, start: VertexMultiset) -> VertexMultiset:
        current = start
        for step in self.steps:
            if step.op == "expand":
                current = expand_at(g, current, step.vertex)
            elif step.op == "contract":
                current = contract_at(g, current, step.vertex)
            else:
                raise CertificateError(f"unknown rewrite op {step.op!r}")
        return current

    def inverted(self) -> "RewriteTrace":
        flip = {"expand": "contract", "contract": "expand"}
        return RewriteTrace(tuple(RewriteStep(flip[s.op], s.vertex) for s in reversed(self.steps)))


def expansion_profile(g: Graph, v: str) -> dict[str, int]:
    """One unit at the range of each edge the vertex emits."""
    profile: dict[str, int] = {}
    for e in g.out_edges(v):
        profile[e.dst] = profile.get(e.dst, 0) + 1
    return profile


def expand_at(g: Graph, m: VertexMultiset, v: str) -> VertexMultiset:
    """Trade one unit at a regular vertex for its out-edge ranges."""
    g.require_vertex(v)
    if not is_regular(g, v):
        raise PreconditionError("not-regular", f"vertex {v!r} emits no edges")
    if m.get(v) < 1:
        raise PreconditionError("zero-multiplicity", f"no unit of {v!r} to expand")
    return m.minus({v: 1}).plus(expansion_profile(g, v))


def contract_at(g: Graph, m: VertexMultiset, v: str) -> VertexMultiset:
    """Reverse rewrite: absorb one full out-edge profile back into the vertex."""
    g.require_vertex(v)
    if not is_regular(g, v):
        raise PreconditionError("not-regular", f"vertex {v!r} emits no edges")
    return m.minus(expansion_profile(g, v)).plus({v: 1})


def path_expansion(g: Graph, path: Path) -> VertexMultiset:
    """Telescope one unit at the path's source all the way to its target.

    Expanding step by step along the path leaves one unit at the target plus
    one unit at the range of every side edge hanging off the traversed
    vertices.  When the first edge properly leaves the source, the result
    keeps at least one unit per self-loop at the source.
    """
    checked = make_path(g, path.edges)
    if checked.source == checked.target:
        raise PreconditionError(
            "not-a-proper-path", "path expansion needs distinct source and target"
        )
    counts: dict[str, int] = {checked.target: 1}
    for eid in checked.edges:
        taken = g.edge(eid)
        for side in g.out_edges(taken.src):
            if side.eid != eid:
                counts[side.dst] = counts.get(side.dst, 0) + 1
    return VertexMultiset.from_dict(counts)


def path_expansion_trace(g: Graph, path: Path) -> RewriteTrace:
    """The expand steps realizing :func:`path_expansion` from a single unit."""
    checked = make_path(g, path.edges)
    return RewriteTrace(tuple(RewriteStep("expand", g.edge(eid).src) for eid in checked.edges))


@dataclass(frozen=True)
class MvnResult:
    """``yes`` carries a replayable trace; ``no`` means the two closures under
    the mass cap are disjoint; ``unknown`` means the step budget ran out."""

    verdict: str  # "yes" | "no" | "unknown"
    trace: Optional[RewriteTrace] = None


def _neighbors(g: Graph, m: VertexMultiset) -> list[tuple[RewriteStep, VertexMultiset]]:
    out: list[tuple[RewriteStep, VertexMultiset]] = []
    for v in m.support:
        if is_regular(g, v):
            out.append((RewriteStep("expand", v), expand_at(g, m, v)))
    for v in g.vertices:
        if not is_regular(g, v):
            continue
        profile = expansion_profile(g, v)
        if all(m.get(w) >= n for w, n in profile.items()):
            out.append((RewriteStep("contract", v), contract_at(g, m, v)))
    return out


def _join_traces(
    forward: dict[VertexMultiset, tuple[VertexMultiset, RewriteStep] | None],
    backward: dict[VertexMultiset, tuple[VertexMultiset, RewriteStep] | None],
    meeting: VertexMultiset,
) -> RewriteTrace:
    ahead: list[RewriteStep] = []
    state = meeting
    while forward[state] is not None:
        parent, step = forward[state]  # type: ignore[misc]
        ahead.append(step)
        state = parent
    ahead.reverse()
    behind: list[RewriteStep] = []
    state = meeting
    while backward[state] is not None:
        parent, step = backward[state]  # type: ignore[misc]
        behind.append(step)
        state = parent
    return RewriteTrace(tuple(ahead) + RewriteTrace(tuple(behind)).inverted().steps)


def mvn_equivalent(g: Graph, a: VertexMultiset, b: VertexMultiset, budget: int) -> MvnResult:
    """Bidirectional breadth-first search over expand/contract rewrites.

    ``budget`` bounds the number of rewrite transitions explored.  Total mass
    is capped at ``max(mass(a), mass(b)) + budget``; a ``no`` verdict means
    the closures below that cap are disjoint (the general word problem has no
    termination guarantee, so no claim is made beyond the cap).
    """
    if budget < 0:
        raise PreconditionError("bad-parameter", "budget must be non-negative")
    for v in a.support + b.support:
        g.require_vertex(v)
    if a == b:
        return MvnResult("yes", RewriteTrace(()))
    cap = max(a.total(), b.total()) + budget

    parents_a: dict[VertexMultiset, tuple[VertexMultiset, RewriteStep] | None] = {a: None}
    parents_b: dict[VertexMultiset, tuple[VertexMultiset, RewriteStep] | None] = {b: None}
    frontier_a: list[VertexMultiset] = [a]
    frontier_b: list[VertexMultiset] = [b]
    spent = 0

    while frontier_a and frontier_b:
        if len(frontier_a) <= len(frontier_b):
            frontier, parents, other = frontier_a, parents_a, parents_b
        else:
            frontier, parents, other = frontier_b, parents_b, parents_a
        next_frontier: list[VertexMultiset] = []
        for state in frontier:
            for step, nxt in _neighbors(g, state):
                spent += 1
                if spent > budget:
                    return MvnResult("unknown")
                if nxt.total() > cap or nxt in parents:
                    continue
                parents[nxt] = (state, step)
                if nxt in other:
                    return MvnResult("yes", _join_traces(parents_a, parents_b, nxt))
                next_frontier.append(nxt)
        if parents is parents_a:
            frontier_a = next_frontier
        else:
            frontier_b = next_frontier
    return MvnResult("no")


def is_full(g: Graph, m: VertexMultiset) -> bool:
    """Whether the support generates everything: its hereditary saturated
    closure is the whole vertex set."""
    if m.is_zero():
        raise PreconditionError("zero-multiset", "fullness is about nonzero multisets")
    return hereditary_saturated_closure(g, m.support) == frozenset(g.vertices)


def _require_loops_everywhere(g: Graph) -> None:
    missing = [v for v in g.vertices if not g.loops_at(v)]
    if missing:
        raise PreconditionError(
            "missing-self-loop", f"vertices without a self-loop: {', '.join(missing)}"
        )


def fullness_normalize(g: Graph, n: VertexMultiset) -> VertexMultiset:
    """Rewrite a full multiset into an equivalent one positive everywhere.

    Needs a finite graph with no sinks, no sources, and a self-loop at every
    vertex.  While some vertex has multiplicity zero, one unit at the least
    supported vertex that reaches it is traded for its expansion along the
    shortest path (lexicographic tie-break); the self-loops keep the traded
    vertex in the support, so the support strictly grows until it is
    everything.
    """
    if g.sinks:
        raise PreconditionError("has-sink", f"sinks present: {', '.join(g.sinks)}")
    if g.source_vertices:
        raise PreconditionError("has-source", f"sources present: {', '.join(g.source_vertices)}")
    _require_loops_everywhere(g)
    if not is_full(g, n):
        raise PreconditionError("not-full", "the multiset does not generate the whole graph")
    m = n
    while True:
        missing = [w for w in g.vertices if m.get(w) == 0]
        if not missing:
            return m
        w = missing[0]
        candidates = [v for v in m.support if w in reachable_from(g, [v])]
        if not candidates:
            raise CertificateError(f"full multiset cannot reach {w!r}; fullness check lied")
        v = candidates[0]
        route = shortest_path(g, v, w)
        if route is None:
            raise CertificateError(f"no path {v!r} -> {w!r} despite reachability")
        m = m.minus({v: 1}).plus(path_expansion(g, route).to_dict())
