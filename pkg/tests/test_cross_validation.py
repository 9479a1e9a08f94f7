"""Cross-validation against sympy's independent Smith normal form.

These run only when sympy happens to be installed; the suite's own oracles
(gcd-of-minors, brute-force search) do not depend on it.
"""

from __future__ import annotations

from math import lcm

import pytest

sympy = pytest.importorskip("sympy")

from sympy import Matrix, ZZ  # noqa: E402
from sympy.matrices.normalforms import smith_normal_form as sympy_snf  # noqa: E402

from ckgraph import k_invariants, k_presentation_matrix, smith_normal_form  # noqa: E402
from ckgraph.randgen import (  # noqa: E402
    SplitMix64,
    derive_seed,
    random_graph,
    random_int_matrix,
)


def _sympy_divisors(rows: list[list[int]]) -> tuple[int, ...]:
    if not rows or not rows[0]:
        return ()
    reduced = sympy_snf(Matrix(rows), domain=ZZ)
    return tuple(
        sorted(abs(int(reduced[i, i])) for i in range(min(reduced.shape)) if reduced[i, i])
    )


def _lattice_invariants(cols: list[list[int]], dim: int) -> tuple[int, tuple[int, ...]]:
    if not cols:
        return (0, ())
    rows = [[c[i] for c in cols] for i in range(dim)]
    divisors = _sympy_divisors(rows)
    return (len(divisors), divisors)


def _in_column_span(cols: list[list[int]], vec: list[int], dim: int) -> bool:
    # a sublattice equals its extension by `vec` exactly when the invariants agree
    return _lattice_invariants(cols, dim) == _lattice_invariants(cols + [vec], dim)


def test_divisors_agree_with_sympy_on_random_matrices():
    rng = SplitMix64(derive_seed(99, "sympy-matrices"))
    for _ in range(40):
        m = random_int_matrix(rng, max_dim=7, lo=-9, hi=9)
        assert tuple(sorted(smith_normal_form(m).divisors())) == _sympy_divisors(m.to_rows())


def test_k_invariants_and_unit_order_agree_with_sympy():
    rng = SplitMix64(derive_seed(99, "sympy-graphs"))
    for _ in range(15):
        g = random_graph(rng, max_vertices=5, max_parallel=2)
        inv = k_invariants(g)
        pres = k_presentation_matrix(g)
        dim = len(g.vertices)
        cols = [[pres.at(r, c) for r in range(pres.rows)] for c in range(pres.cols)]
        divisors = _lattice_invariants(cols, dim)[1]
        assert tuple(sorted(inv.k0_torsion)) == tuple(d for d in divisors if d > 1)
        assert inv.k0_rank == dim - len(divisors)
        assert inv.k1_rank == pres.cols - len(divisors)

        # a finite unit order divides the torsion exponent, so only those
        # candidates need a lattice-membership test
        exponent = lcm(1, *(d for d in divisors if d > 1)) if divisors else 1
        order = None
        for n in sorted(k for k in range(1, exponent + 1) if exponent % k == 0):
            if _in_column_span(cols, [n] * dim, dim):
                order = n
                break
        assert order == inv.unit_profile.order
