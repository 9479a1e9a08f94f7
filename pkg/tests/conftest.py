from __future__ import annotations

import pytest
from hypothesis import strategies as st

from ckgraph import Graph


def G(vertex_spec: str, edge_spec: str = "") -> Graph:
    """Compact builder: ``G("u v w", "a:u>v b:v>w c:w>w")``."""
    edges = []
    for item in edge_spec.split():
        eid, _, arrow = item.partition(":")
        src, _, dst = arrow.partition(">")
        edges.append((eid, src, dst))
    return Graph.build(vertex_spec.split(), edges)


def bouquet(n: int) -> Graph:
    """One vertex carrying n loops."""
    return Graph.build(["v0"], [(f"l{i}", "v0", "v0") for i in range(1, n + 1)])


@pytest.fixture
def two_loops() -> Graph:
    return G("v0", "e0:v0>v0 f:v0>v0")


@pytest.fixture
def line_into_loops() -> Graph:
    """A length-2 line feeding the two-loop vertex."""
    return G("v0 v1 v2", "e0:v0>v0 f:v0>v0 e1:v1>v0 e2:v2>v1")


@pytest.fixture
def star_into_loops() -> Graph:
    """Two one-shot sources feeding the two-loop vertex."""
    return G("v0 v1 v2", "e0:v0>v0 f:v0>v0 e1:v1>v0 e2:v2>v0")


@st.composite
def graphs(draw, max_vertices: int = 5, max_parallel: int = 2, min_vertices: int = 1) -> Graph:
    n = draw(st.integers(min_vertices, max_vertices))
    pairs = draw(
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
            max_size=3 * n,
        )
    )
    counts: dict[tuple[int, int], int] = {}
    edges = []
    for i, j in pairs:
        k = counts.get((i, j), 0)
        if k >= max_parallel:
            continue
        counts[(i, j)] = k + 1
        edges.append((f"e{i}x{j}n{k}", f"v{i}", f"v{j}"))
    return Graph.build([f"v{i}" for i in range(n)], edges)


@st.composite
def no_sink_graphs(draw, max_vertices: int = 5, max_parallel: int = 2) -> Graph:
    g = draw(graphs(max_vertices=max_vertices, max_parallel=max_parallel))
    extra = []
    for i, v in enumerate(g.sinks):
        target = draw(st.sampled_from(g.vertices))
        extra.append((f"fix{i}", v, target))
    if not extra:
        return g
    return Graph.build(g.vertices, [tuple(e) for e in g.edges] + extra)


@st.composite
def all_loop_graphs(draw, max_vertices: int = 4, max_parallel: int = 2) -> Graph:
    g = draw(graphs(max_vertices=max_vertices, max_parallel=max_parallel))
    extra = [
        (f"loop{i}", v, v) for i, v in enumerate(g.vertices) if not g.loops_at(v)
    ]
    if not extra:
        return g
    return Graph.build(g.vertices, [tuple(e) for e in g.edges] + extra)
