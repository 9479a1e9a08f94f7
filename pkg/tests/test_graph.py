from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ckgraph import (
    Graph,
    GraphFormatError,
    GraphMorphism,
    PreconditionError,
    classify_vertex,
    compose_morphisms,
    format_graph,
    graph_fingerprint,
    graph_isomorphic,
    hereditary_saturated_closure,
    identity_morphism,
    invert_morphism,
    is_ck_morphism,
    is_graph_homomorphism,
    is_hereditary,
    is_saturated,
    is_vertex_simple_cycle,
    make_path,
    parse_graph,
    path_vertices,
    reachable_from,
    restrict_to_hereditary,
    shortest_path,
    vertex_simple_cycles_without_exit,
)
from conftest import G, all_loop_graphs, graphs
from oracles import brute_force_isomorphic, exhaustive_closure


# -- construction and text format -------------------------------------------


def test_build_rejects_duplicates_and_dangling_edges():
    with pytest.raises(GraphFormatError):
        Graph.build(["v", "v"], [])
    with pytest.raises(GraphFormatError):
        Graph.build(["v"], [("e", "v", "v"), ("e", "v", "v")])
    with pytest.raises(GraphFormatError):
        Graph.build(["v"], [("e", "v", "w")])
    with pytest.raises(GraphFormatError):
        Graph.build(["has space"], [])
    with pytest.raises(GraphFormatError):
        Graph.build(["a,b"], [])


def test_text_format_round_trip(line_into_loops):
    text = format_graph(line_into_loops)
    assert parse_graph(text) == line_into_loops
    assert text == (
        "vertex v0\nvertex v1\nvertex v2\n"
        "edge e0 v0 v0\nedge e1 v1 v0\nedge e2 v2 v1\nedge f v0 v0\n"
    )


def test_parser_comments_and_errors():
    g = parse_graph("# heading\nvertex v0  # trailing\n\nedge e v0 v0\n")
    assert g == G("v0", "e:v0>v0")
    with pytest.raises(GraphFormatError):
        parse_graph("vertex\n")
    with pytest.raises(GraphFormatError):
        parse_graph("edge e v0\n")
    with pytest.raises(GraphFormatError):
        parse_graph("frob v0\n")


@given(graphs())
def test_serialization_is_stable(g):
    assert parse_graph(format_graph(g)) == g
    assert graph_fingerprint(g) == graph_fingerprint(parse_graph(format_graph(g)))


# -- classification -----------------------------------------------------------


def test_classify_two_loop_vertex(two_loops):
    assert classify_vertex(two_loops, "v0").kind == "regular"


def test_classify_sink_and_source():
    g = G("v w", "a:v>w")
    assert classify_vertex(g, "w").kind == "sink"
    source = classify_vertex(g, "v")
    assert source.kind == "source"
    assert source.out_regular
    assert (source.in_degree, source.out_degree) == (0, 1)


def test_classify_isolated_and_unknown():
    g = G("v")
    assert classify_vertex(g, "v").kind == "isolated"
    with pytest.raises(PreconditionError, match="unknown-vertex"):
        classify_vertex(g, "w")


# -- hereditary / saturated machinery ------------------------------------------


def test_closure_pulls_heads_in_by_saturation(line_into_loops):
    # the line vertices emit everything into the closure, so saturation
    # forces them in one by one
    assert hereditary_saturated_closure(line_into_loops, {"v0"}) == {"v0", "v1", "v2"}


def test_closure_follows_edges(line_into_loops):
    assert hereditary_saturated_closure(line_into_loops, {"v2"}) == {"v0", "v1", "v2"}


def test_closure_on_all_loop_graph_is_hereditary_closure():
    g = G("a b", "la:a>a lb:b>b x:a>b")
    assert hereditary_saturated_closure(g, {"b"}) == {"b"}
    assert hereditary_saturated_closure(g, {"a"}) == {"a", "b"}


def test_every_hereditary_set_is_saturated_on_all_loop_graphs_exhaustively():
    from itertools import combinations

    g = G("a b c", "la:a>a lb:b>b lc:c>c x:a>b y:b>c z:a>c")
    for r in range(4):
        for subset in combinations(g.vertices, r):
            if is_hereditary(g, subset):
                assert is_saturated(g, subset)


@settings(max_examples=40)
@given(all_loop_graphs(max_vertices=5))
def test_hereditary_implies_saturated_under_loops_everywhere(g):
    from itertools import combinations

    for r in range(len(g.vertices) + 1):
        for subset in combinations(g.vertices, r):
            if is_hereditary(g, subset):
                assert is_saturated(g, subset)


@given(graphs(max_vertices=4), st.data())
def test_closure_is_idempotent_and_monotone(g, data):
    small = set(data.draw(st.lists(st.sampled_from(g.vertices), max_size=2)))
    big = small | set(data.draw(st.lists(st.sampled_from(g.vertices), max_size=2)))
    closure_small = hereditary_saturated_closure(g, small)
    closure_big = hereditary_saturated_closure(g, big)
    assert hereditary_saturated_closure(g, closure_small) == closure_small
    assert closure_small <= closure_big
    assert is_hereditary(g, closure_small) and is_saturated(g, closure_small)


@given(graphs(max_vertices=4), st.data())
def test_closure_matches_exhaustive_search(g, data):
    start = set(data.draw(st.lists(st.sampled_from(g.vertices), max_size=3)))
    assert hereditary_saturated_closure(g, start) == exhaustive_closure(g, start)


@given(graphs(max_vertices=5), st.data())
def test_closure_interleaving_order_is_irrelevant(g, data):
    # saturate-first alternation must land on the same fixed point as the
    # hereditary-first one used by the implementation
    start = set(data.draw(st.lists(st.sampled_from(g.vertices), max_size=3)))
    closed = set(start)
    while True:
        changed = False
        for v in g.vertices:
            if v not in closed:
                out = g.out_edges(v)
                if out and all(e.dst in closed for e in out):
                    closed.add(v)
                    changed = True
        for v in list(closed):
            for e in g.out_edges(v):
                if e.dst not in closed:
                    closed.add(e.dst)
                    changed = True
        if not changed:
            break
    assert frozenset(closed) == hereditary_saturated_closure(g, start)


def test_restrict_to_hereditary(line_into_loops, two_loops):
    assert restrict_to_hereditary(line_into_loops, {"v0"}) == two_loops
    assert restrict_to_hereditary(line_into_loops, line_into_loops.vertices) == line_into_loops
    g = G("v w", "a:v>w lw:w>w")
    assert restrict_to_hereditary(g, {"w"}) == G("w", "lw:w>w")
    with pytest.raises(PreconditionError, match="not-hereditary"):
        restrict_to_hereditary(line_into_loops, {"v1"})


def test_reachability_includes_start(line_into_loops):
    assert reachable_from(line_into_loops, {"v0"}) == {"v0"}
    assert reachable_from(line_into_loops, {"v2"}) == {"v0", "v1", "v2"}


# -- paths and cycles -----------------------------------------------------------


def test_make_path_validates_composition(line_into_loops):
    p = make_path(line_into_loops, ["e2", "e1"])
    assert (p.source, p.target) == ("v2", "v0")
    assert path_vertices(line_into_loops, p) == ("v2", "v1", "v0")
    with pytest.raises(PreconditionError, match="broken-path"):
        make_path(line_into_loops, ["e1", "e2"])
    with pytest.raises(PreconditionError, match="empty-path"):
        make_path(line_into_loops, [])


def test_vertex_simple_cycle_predicate():
    g = G("u v", "a:u>v b:v>u lu:u>u")
    assert is_vertex_simple_cycle(g, make_path(g, ["a", "b"]))
    assert is_vertex_simple_cycle(g, make_path(g, ["lu"]))
    assert not is_vertex_simple_cycle(g, make_path(g, ["a", "b", "lu"]))
    assert not is_vertex_simple_cycle(g, make_path(g, ["a", "b", "a", "b"]))


def test_single_loop_is_the_only_exit_free_cycle():
    g = G("v", "l:v>v")
    assert [p.edges for p in vertex_simple_cycles_without_exit(g)] == [("l",)]


def test_double_loop_has_no_exit_free_cycle(two_loops):
    assert vertex_simple_cycles_without_exit(two_loops) == []


def test_cycle_with_extra_edge_has_an_exit():
    g = G("u v x", "a:u>v b:v>u c:v>x")
    assert vertex_simple_cycles_without_exit(g) == []
    withloop = G("u v x", "a:u>v b:v>u c:v>x lx:x>x")
    # the 2-cycle still has its exit at v; the loop at x has none
    assert [p.edges for p in vertex_simple_cycles_without_exit(withloop)] == [("lx",)]


def test_exit_free_cycles_are_sorted_and_rotated_to_least_base():
    g = G("a b c d", "p:b>c q:c>b r:d>a s:a>d")
    found = vertex_simple_cycles_without_exit(g)
    assert [p.source for p in found] == ["a", "b"]
    assert [p.edges for p in found] == [("s", "r"), ("p", "q")]


def test_shortest_path_prefers_lexicographic_ties():
    g = G("u v w", "b:u>v a:u>v c:v>w")
    p = shortest_path(g, "u", "w")
    assert p is not None and p.edges == ("a", "c")
    assert shortest_path(g, "w", "u") is None
    cyc = shortest_path(G("u", "l:u>u"), "u", "u")
    assert cyc is not None and cyc.edges == ("l",)


# -- morphisms -------------------------------------------------------------------


def test_identity_is_ck(two_loops):
    assert is_ck_morphism(identity_morphism(two_loops))


def test_partial_loop_inclusion_is_not_ck(two_loops):
    sub = G("v0", "e0:v0>v0")
    inclusion = GraphMorphism.build(sub, two_loops, {"v0": "v0"}, {"e0": "e0"})
    assert is_graph_homomorphism(inclusion)
    assert not is_ck_morphism(inclusion)


def test_truncated_head_inclusion_is_ck(two_loops):
    from ckgraph import add_head

    tower = add_head(two_loops, "v0", 2)
    # the emitted-edge subgraph on a truncation of the head
    kept = {"v0", "v0~h1"}
    sub = Graph.build(sorted(kept), [tuple(e) for v in sorted(kept) for e in tower.out_edges(v)])
    inclusion = GraphMorphism.build(
        sub, tower, {v: v for v in sub.vertices}, {e.eid: e.eid for e in sub.edges}
    )
    assert is_ck_morphism(inclusion)


def test_non_homomorphism_is_rejected(two_loops):
    g = G("u v", "a:u>v")
    bad = GraphMorphism.build(g, two_loops, {"u": "v0", "v": "v0"}, {"a": "missing"})
    with pytest.raises(PreconditionError, match="not-homomorphism"):
        is_ck_morphism(bad)


@given(all_loop_graphs(max_vertices=3))
def test_ck_morphisms_compose(g):
    from ckgraph import add_head

    bigger = add_head(g, g.vertices[0], 1)
    biggest = add_head(bigger, g.vertices[0], 1)
    inc1 = GraphMorphism.build(
        g, bigger, {v: v for v in g.vertices}, {e.eid: e.eid for e in g.edges}
    )
    inc2 = GraphMorphism.build(
        bigger, biggest, {v: v for v in bigger.vertices}, {e.eid: e.eid for e in bigger.edges}
    )
    assert is_ck_morphism(inc1) and is_ck_morphism(inc2)
    assert is_ck_morphism(compose_morphisms(inc1, inc2))


# -- isomorphism ------------------------------------------------------------------


def _renamed(g: Graph, prefix: str) -> Graph:
    return Graph.build(
        [f"{prefix}{v}" for v in g.vertices],
        [(f"{prefix}{e.eid}", f"{prefix}{e.src}", f"{prefix}{e.dst}") for e in g.edges],
    )


def test_isomorphic_to_renaming(line_into_loops):
    witness = graph_isomorphic(line_into_loops, _renamed(line_into_loops, "x"))
    assert witness is not None
    assert is_ck_morphism(witness)


def test_loop_count_distinguishes(two_loops):
    assert graph_isomorphic(two_loops, G("v0", "e0:v0>v0")) is None


def test_isomorphism_witness_is_a_bijective_homomorphism(line_into_loops, star_into_loops):
    witness = graph_isomorphic(star_into_loops, _renamed(star_into_loops, "y"))
    assert witness is not None
    assert is_graph_homomorphism(witness)
    back = invert_morphism(witness)
    assert is_graph_homomorphism(back)
    assert graph_isomorphic(line_into_loops, star_into_loops) is None


@settings(max_examples=60)
@given(graphs(max_vertices=4), graphs(max_vertices=4))
def test_isomorphism_agrees_with_brute_force(g1, g2):
    assert (graph_isomorphic(g1, g2) is not None) == brute_force_isomorphic(g1, g2)


def test_isomorphism_agrees_with_brute_force_at_six_vertices():
    g = G(
        "a b c d e f",
        "p:a>b q:b>c r:c>a s:d>e t:e>f u:f>d x:a>d y:a>d la:a>a",
    )
    shuffled = G(
        "n0 n1 n2 n3 n4 n5",
        "e0:n3>n4 e1:n4>n5 e2:n5>n3 e3:n0>n1 e4:n1>n2 e5:n2>n0 "
        "e6:n3>n0 e7:n3>n0 e8:n3>n3",
    )
    assert brute_force_isomorphic(g, shuffled)
    assert graph_isomorphic(g, shuffled) is not None
    # drop one parallel edge: the count matrices can no longer match
    broken = G(
        "n0 n1 n2 n3 n4 n5",
        "e0:n3>n4 e1:n4>n5 e2:n5>n3 e3:n0>n1 e4:n1>n2 e5:n2>n0 "
        "e6:n3>n0 e7:n3>n1 e8:n3>n3",
    )
    assert not brute_force_isomorphic(g, broken)
    assert graph_isomorphic(g, broken) is None


@given(graphs(max_vertices=5))
def test_isomorphism_is_reflexive_and_symmetric(g):
    assert graph_isomorphic(g, g) is not None
    other = _renamed(g, "w")
    forward = graph_isomorphic(g, other)
    assert forward is not None
    backward = graph_isomorphic(other, g)
    assert backward is not None
