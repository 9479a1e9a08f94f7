"""
Normalization, corners, and matrix amplification
================================================

The pipelines chain moves into the constructive results: any sink-free
graph normalizes to one with no sinks and no sources, any corner of such a
graph is again realized by a graph, and so is any matrix amplification.
Every pipeline carries before/after invariants and verified certificates.
"""

from ckgraph import (
    Graph,
    format_graph,
    format_move,
    k_invariants,
    matrix_amplify,
    normalize_to_ck,
    parse_multiset,
    realize_corner,
    realize_full_corner,
    self_loop_saturate,
)

line = Graph.build(
    ["v0", "v1", "v2"],
    [("e0", "v0", "v0"), ("f", "v0", "v0"), ("e1", "v1", "v0"), ("e2", "v2", "v1")],
)

# Normalization: elide the head into sources, absorb them as a subdivision.
result = normalize_to_ck(line)
print("moves:", [format_move(m) for m, _ in result.log.steps])
print(format_graph(result.graph))
print("certificates:", dict(result.certificates))

# Saturation collapses away every vertex without a self-loop.
cycle = Graph.build(["a", "b", "c"], [("x", "a", "b"), ("y", "b", "c"), ("z", "c", "a")])
print("3-cycle saturates to:", format_graph(self_loop_saturate(cycle).graph), end="")

# A full corner: multiplicity m(u) means a head of length m(u) - 1 at u.
loops = Graph.build(["v0"], [("e0", "v0", "v0"), ("f", "v0", "v0")])
corner = realize_full_corner(loops, parse_multiset("v0=3"))
print("corner at v0=3 has vertices:", corner.graph.vertices)
print("unit class certificate:", corner.certificate("unit-class-matches"))

# The general corner pipeline: restrict, normalize, saturate, make the
# multiset positive, attach heads.  K-groups match the restriction.
g = Graph.build(
    ["u", "v"],
    [("lu", "u", "u"), ("a", "u", "v"), ("b", "v", "u")],
)
pipe = realize_corner(g, parse_multiset("v=1"))
print("corner of {v=1}:", format_graph(pipe.graph), end="")
print("multiset carried to:", pipe.multiset)

# Matrix amplification is the all-vertices corner with uniform multiplicity.
amp = matrix_amplify(loops, 2)
assert amp.after.groups_equal(k_invariants(loops))
print("2x2 amplification:", format_graph(amp.graph), end="")
print("unit divisible by 2:", amp.certificate("unit-divisible-by-factor"))
