"""
Projection classes as vertex multisets
======================================

A class of projections is a finitely supported multiset of vertices.  The
single rewrite rule trades one unit at a regular vertex for one unit at the
range of each edge it emits; the equivalence it generates is decided by a
budgeted bidirectional search that returns a replayable trace.
"""

from ckgraph import (
    Graph,
    expand_at,
    fullness_normalize,
    is_full,
    k0_class_of,
    make_path,
    mvn_equivalent,
    parse_multiset,
    path_expansion,
)

loops = Graph.build(["v0"], [("e0", "v0", "v0"), ("f", "v0", "v0")])

# Both loops return to v0, so expanding one unit there yields two.
print(expand_at(loops, parse_multiset("v0=1"), "v0"))

# The rewrite never moves the class in K0.
m = parse_multiset("v0=1")
assert k0_class_of(loops, m.to_dict()) == k0_class_of(
    loops, expand_at(loops, m, "v0").to_dict()
)

# Telescoping along a path: a unit at the source becomes a unit at the
# target plus one unit per side branch along the way.
branchy = Graph.build(
    ["v", "w"], [("l", "v", "v"), ("e", "v", "w"), ("lw", "w", "w")]
)
print(path_expansion(branchy, make_path(branchy, ["e"])))  # keeps the loop unit

# The oracle: one expand step identifies v0=1 with v0=2 over two loops.
result = mvn_equivalent(loops, parse_multiset("v0=1"), parse_multiset("v0=2"), 1000)
print(result.verdict, [tuple(s) for s in result.trace.steps])

# Disconnected supports can never meet.
island = Graph.build(["u", "v"], [("lu", "u", "u"), ("lv", "v", "v")])
print(mvn_equivalent(island, parse_multiset("u=1"), parse_multiset("v=1"), 1000).verdict)

# Fullness and normalization: on an all-self-loop graph a full multiset can
# be rewritten to one that is positive everywhere.
g = Graph.build(
    ["u", "v"],
    [("lu", "u", "u"), ("lv", "v", "v"), ("a", "u", "v")],
)
start = parse_multiset("u=1")
assert is_full(g, start)
normalized = fullness_normalize(g, start)
print("normalized:", normalized)
check = mvn_equivalent(g, start, normalized, 10_000)
print("certified by the oracle:", check.verdict)
