"""K-group invariants of a finite graph, computed by exact Smith reduction.

For a finite graph the K0 group is the cokernel and the K1 group the kernel
of the map given by the transposed vertex matrix minus the identity,
restricted to the columns of regular vertices, into the free abelian group on
all vertices.  Both are read off one Smith normal form.  The class of the
unit is the image of the all-ones vector; it is summarized by an
automorphism-invariant profile (its order plus divisibility flags), which is
what can be compared across different graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm
from typing import Mapping

from .errors import CertificateError, PreconditionError
from .graph import Graph, is_regular
from .intmatrix import IntMatrix, SnfResult, smith_normal_form

DIVISIBILITY_FLAGS = 12


@dataclass(frozen=True)
class UnitProfile:
    """Order of the unit class in K0 (``None`` for infinite) and, for each
    k = 1..12, whether the class is divisible by k."""

    order: int | None
    divisible_by: tuple[bool, ...]


@dataclass(frozen=True)
class KInvariants:
    k0_torsion: tuple[int, ...]
    k0_rank: int
    k1_rank: int
    unit_profile: UnitProfile

    def groups_equal(self, other: "KInvariants") -> bool:
        """Same K0 and K1 as abstract groups (unit class ignored)."""
        return (
            self.k0_torsion == other.k0_torsion
            and self.k0_rank == other.k0_rank
            and self.k1_rank == other.k1_rank
        )


@dataclass(frozen=True)
class K0Class:
    """Canonical coordinates of a K0 element: residues against the torsion
    divisors, then the free components."""

    torsion: tuple[int, ...]
    free: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.torsion) and not any(self.free)


def vertex_matrix(g: Graph) -> IntMatrix:
    """Entry (v, w) counts the edges from v to w, in canonical vertex order."""
    return IntMatrix.from_rows(
        [[g.pair_count(v, w) for w in g.vertices] for v in g.vertices]
    )


@dataclass(frozen=True)
class _K0Engine:
    vertices: tuple[str, ...]
    regulars: tuple[str, ...]
    presentation: IntMatrix
    snf: SnfResult

    def class_of(self, coefficients: Mapping[str, int]) -> K0Class:
        for v in coefficients:
            if v not in self.vertices:
                raise PreconditionError("unknown-vertex", f"no vertex {v!r} in graph")
        x = [coefficients.get(v, 0) for v in self.vertices]
        y = [
            sum(self.snf.u.at(i, j) * x[j] for j in range(len(x)))
            for i in range(len(x))
        ]
        diag = self.snf.d.diagonal()
        torsion: list[int] = []
        free: list[int] = []
        for i in range(len(self.vertices)):
            d = diag[i] if i < len(diag) else 0
            if d == 0:
                free.append(y[i])
            elif d > 1:
                torsion.append(y[i] % d)
        return K0Class(tuple(torsion), tuple(free))


@lru_cache(maxsize=512)
def _k0_engine(g: Graph) -> _K0Engine:
    regulars = tuple(v for v in g.vertices if is_regular(g, v))
    columns = {
        w: [g.pair_count(w, v) - (1 if v == w else 0) for v in g.vertices]
        for w in regulars
    }
    presentation = IntMatrix.from_rows(
        [[columns[w][i] for w in regulars] for i in range(len(g.vertices))]
    )
    return _K0Engine(g.vertices, regulars, presentation, smith_normal_form(presentation))


def k_presentation_matrix(g: Graph) -> IntMatrix:
    """The map whose cokernel is K0 and kernel is K1: one column per regular
    vertex, one row per vertex."""
    return _k0_engine(g).presentation


def k0_class_of(g: Graph, coefficients: Mapping[str, int]) -> K0Class:
    """Coordinates of the class of a vertex-coefficient vector in K0."""
    return _k0_engine(g).class_of(coefficients)


def k0_class_divisible(g: Graph, coefficients: Mapping[str, int], k: int) -> bool:
    """Whether the class lies in k * K0."""
    if k <= 0:
        raise PreconditionError("bad-parameter", f"divisor must be positive, got {k}")
    engine = _k0_engine(g)
    cls = engine.class_of(coefficients)
    divisors = [d for d in engine.snf.divisors() if d > 1]
    return all(r % gcd(k, d) == 0 for r, d in zip(cls.torsion, divisors)) and all(
        f % k == 0 for f in cls.free
    )


def _class_order(cls: K0Class, divisors: tuple[int, ...]) -> int | None:
    if any(cls.free):
        return None
    return lcm(1, *(d // gcd(d, r) for r, d in zip(cls.torsion, divisors)))


def k_invariants(g: Graph) -> KInvariants:
    engine = _k0_engine(g)
    nonzero = engine.snf.divisors()
    torsion = tuple(d for d in nonzero if d > 1)
    unit_class = engine.class_of({v: 1 for v in g.vertices})
    return KInvariants(
        k0_torsion=torsion,
        k0_rank=len(g.vertices) - len(nonzero),
        k1_rank=len(engine.regulars) - len(nonzero),
        unit_profile=UnitProfile(
            order=_class_order(unit_class, torsion),
            divisible_by=tuple(
                k0_class_divisible(g, {v: 1 for v in g.vertices}, k)
                for k in range(1, DIVISIBILITY_FLAGS + 1)
            ),
        ),
    )


@dataclass(frozen=True)
class CkWitness:
    """Both verdicts behind a Cuntz-Krieger decision: the combinatorial one
    (sink list) and the K-theoretic one (rank comparison)."""

    sinks: tuple[str, ...]
    k0_rank: int
    k1_rank: int


def is_cuntz_krieger(g: Graph) -> tuple[bool, CkWitness]:
    """Decide whether the graph algebra is a Cuntz-Krieger algebra.

    For a finite nonempty graph this holds exactly when there are no sinks;
    equivalently the K0 and K1 ranks agree.  Both tests run and must agree.
    Sources are fine: they are removable by normalization.
    """
    if g.is_empty():
        raise PreconditionError("empty-graph", "the empty graph has no unital graph algebra")
    inv = k_invariants(g)
    witness = CkWitness(sinks=g.sinks, k0_rank=inv.k0_rank, k1_rank=inv.k1_rank)
    combinatorial = not witness.sinks
    ranks_agree = inv.k0_rank == inv.k1_rank
    if combinatorial != ranks_agree:
        raise CertificateError(
            f"sink test ({combinatorial}) and rank test ({ranks_agree}) disagree: {witness}"
        )
    return combinatorial, witness


def format_k_invariants(inv: KInvariants) -> str:
    """Stable key-value record, one field per line."""
    torsion = ",".join(str(d) for d in inv.k0_torsion) or "-"
    order = "infinite" if inv.unit_profile.order is None else str(inv.unit_profile.order)
    divisible = ",".join(
        str(k) for k, flag in enumerate(inv.unit_profile.divisible_by, start=1) if flag
    )
    return (
        f"k0_torsion = {torsion}\n"
        f"k0_rank = {inv.k0_rank}\n"
        f"k1_rank = {inv.k1_rank}\n"
        f"unit_order = {order}\n"
        f"unit_divisible = {divisible}\n"
    )


def k_invariants_dict(inv: KInvariants) -> dict:
    """JSON-ready form of the record."""
    return {
        "k0_torsion": list(inv.k0_torsion),
        "k0_rank": inv.k0_rank,
        "k1_rank": inv.k1_rank,
        "unit_order": "infinite" if inv.unit_profile.order is None else inv.unit_profile.order,
        "unit_divisible_by": [
            k for k, flag in enumerate(inv.unit_profile.divisible_by, start=1) if flag
        ],
    }
