"""Independent oracles used to cross-check the main implementations.

Nothing here imports the code paths under test: determinants are Laplace
expansions, elementary divisors come from gcds of minors, and isomorphism is
a plain permutation search.
"""

from __future__ import annotations

from itertools import combinations, permutations
from math import gcd

from ckgraph import Graph, IntMatrix


def laplace_determinant(rows: list[list[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j, head in enumerate(rows[0]):
        if head == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in rows[1:]]
        total += (-1) ** j * head * laplace_determinant(minor)
    return total


def minors_gcd(m: IntMatrix, k: int) -> int:
    """gcd of all k-by-k minors (0 when every minor vanishes)."""
    rows = m.to_rows()
    value = 0
    for row_pick in combinations(range(m.rows), k):
        for col_pick in combinations(range(m.cols), k):
            sub = [[rows[i][j] for j in col_pick] for i in row_pick]
            value = gcd(value, laplace_determinant(sub))
    return value


def minors_divisors(m: IntMatrix) -> tuple[int, ...]:
    """Elementary divisors from the gcd-of-minors recurrence:
    d_k = gcd(k-minors) / gcd((k-1)-minors), while the gcds stay nonzero."""
    divisors: list[int] = []
    previous = 1
    for k in range(1, min(m.rows, m.cols) + 1):
        current = minors_gcd(m, k)
        if current == 0:
            break
        divisors.append(current // previous)
        previous = current
    return tuple(divisors)


def brute_force_isomorphic(g1: Graph, g2: Graph) -> bool:
    """Try every vertex bijection and compare parallel-edge counts."""
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return False
    for image in permutations(g2.vertices):
        mapping = dict(zip(g1.vertices, image))
        if all(
            g1.pair_count(v, w) == g2.pair_count(mapping[v], mapping[w])
            for v in g1.vertices
            for w in g1.vertices
        ):
            return True
    return False


def exhaustive_closure(g: Graph, start: set[str]) -> frozenset[str]:
    """Smallest hereditary and saturated superset, by scanning all supersets.

    Exponential; only for graphs with a handful of vertices.
    """
    from itertools import chain

    best: frozenset[str] | None = None
    vertices = list(g.vertices)
    others = [v for v in vertices if v not in start]
    for r in range(len(others) + 1):
        for extra in combinations(others, r):
            candidate = frozenset(chain(start, extra))
            hereditary = all(
                e.dst in candidate for v in candidate for e in g.out_edges(v)
            )
            saturated = all(
                v in candidate
                for v in vertices
                if g.out_degree(v) > 0
                and all(e.dst in candidate for e in g.out_edges(v))
            )
            if hereditary and saturated and (best is None or len(candidate) < len(best)):
                best = candidate
    assert best is not None  # the full vertex set always qualifies
    return best
