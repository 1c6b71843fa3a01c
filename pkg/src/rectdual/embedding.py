"""Projections of dual complexes back into the box partition.

A projection places one half-integral point in the interior of every box
(its vertex). It is an embedding when every top-dimensional simplex keeps
the orientation of its seed; degenerate simplices (orientation 0) never
count as preserved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .boxes import Partition
from .dual import DualComplex, _perm_parity, build_dual, orientation


class NotFaithful(ValueError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"vertex of box {vertex} is not strictly inside the box")


class NotHalfIntegral(ValueError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"vertex of box {vertex} is not half-integral")


@dataclass(frozen=True)
class Projection:
    """One point per box, stored in doubled coordinates."""

    points2: tuple  # tuple of d-tuples of ints, indexed by box id

    def __post_init__(self):
        object.__setattr__(self, "points2", tuple(tuple(p) for p in self.points2))

    @classmethod
    def from_rationals(cls, points):
        """Accept exact rational points; reject non-half-integral ones."""
        doubled = []
        for i, pt in enumerate(points):
            row = []
            for x in pt:
                v = Fraction(x) * 2
                if v.denominator != 1:
                    raise NotHalfIntegral(i)
                row.append(int(v))
            doubled.append(tuple(row))
        return cls(tuple(doubled))

    def point(self, i):
        return self.points2[i]


@dataclass(frozen=True)
class Violation:
    simplex: tuple
    expected: int
    actual: int


@dataclass(frozen=True)
class EmbeddingVerdict:
    kind: str  # "embedding" | "not_embedding" | "unsupported"
    violations: tuple = ()

    @property
    def is_embedding(self) -> bool:
        return self.kind == "embedding"

    def __bool__(self) -> bool:
        return self.is_embedding


def center_projection(p: Partition) -> Projection:
    # box centers are always half-integral and strictly interior
    return Projection(tuple(b.center2() for b in p.boxes))


def check_faithful(p: Partition, proj: Projection) -> None:
    if len(proj.points2) != len(p.boxes):
        raise ValueError("projection has wrong number of vertices")
    for i, box in enumerate(p.boxes):
        if not box.contains_point2(proj.points2[i], strict=True):
            raise NotFaithful(i)


def simplex_preserved(dc: DualComplex, simplex, proj: Projection) -> bool:
    anchor, perm, ordered = dc.seed_raw(simplex)
    want = _perm_parity(perm)
    pts = [proj.points2[i] for i in ordered]
    return orientation(pts) == want


def classify_projection(p: Partition, dc: DualComplex, proj: Projection) -> EmbeddingVerdict:
    """Check faithfulness, then the orientation of every top simplex."""
    check_faithful(p, proj)
    if not dc.has_top():
        return EmbeddingVerdict("unsupported")
    violations = []
    pts = proj.points2
    for key, ordered, want in dc.top_items():
        got = orientation([pts[i] for i in ordered])
        if got != want:
            violations.append(Violation(key, want, got))
    if violations:
        return EmbeddingVerdict("not_embedding", tuple(violations))
    return EmbeddingVerdict("embedding")


def center_embeddable(p: Partition, dc: DualComplex = None) -> EmbeddingVerdict:
    if dc is None:
        dc = build_dual(p)
    return classify_projection(p, dc, center_projection(p))
