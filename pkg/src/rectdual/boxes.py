"""Integral boxes, partitions of a cube, and balance measurements.

All geometry in this package is exact. Coordinates of box corners are
integers; half-integral data (pixel centers, projections) is stored as
doubled integers so that every predicate reduces to integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence


class ValidationError(Exception):
    """A collection of boxes is not a valid partition."""


class OutOfBounds(ValidationError):
    def __init__(self, box):
        self.box = box
        super().__init__(f"box {box} leaves the outer cube")


class Overlap(ValidationError):
    def __init__(self, box_a, box_b):
        self.box_a = box_a
        self.box_b = box_b
        super().__init__(f"boxes {box_a} and {box_b} have intersecting interiors")


class CoverageGap(ValidationError):
    def __init__(self, missing_volume):
        self.missing_volume = missing_volume
        super().__init__(f"boxes cover too little volume (missing {missing_volume})")


@dataclass(frozen=True)
class IntBox:
    """Axis-aligned box with integer corners and nonempty interior."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo, hi = tuple(self.lo), tuple(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if len(lo) != len(hi):
            raise ValueError("corner dimensions differ")
        for a, b in zip(lo, hi):
            if not isinstance(a, int) or not isinstance(b, int):
                raise ValueError("box corners must be integral")
            if a >= b:
                raise ValueError(f"empty interior: {lo} {hi}")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def sides(self) -> tuple:
        return tuple(b - a for a, b in zip(self.lo, self.hi))

    def volume(self) -> int:
        v = 1
        for s in self.sides():
            v *= s
        return v

    def center2(self) -> tuple:
        # doubled coordinates of the center; always integral
        return tuple(a + b for a, b in zip(self.lo, self.hi))

    def aspect_ratio(self) -> Fraction:
        s = self.sides()
        return Fraction(max(s), min(s))

    def is_pixel(self) -> bool:
        return all(b - a == 1 for a, b in zip(self.lo, self.hi))

    def cells(self) -> Iterator[tuple]:
        """All unit cells covered by the box, as lower-corner tuples."""
        def rec(i, prefix):
            if i == len(self.lo):
                yield tuple(prefix)
                return
            for x in range(self.lo[i], self.hi[i]):
                prefix.append(x)
                yield from rec(i + 1, prefix)
                prefix.pop()
        yield from rec(0, [])

    def contains_point2(self, p2: Sequence[int], strict=False) -> bool:
        """Membership of a doubled-coordinate point."""
        for a, b, x in zip(self.lo, self.hi, p2):
            if strict:
                if not (2 * a < x < 2 * b):
                    return False
            else:
                if not (2 * a <= x <= 2 * b):
                    return False
        return True

    def __str__(self):
        return "x".join(f"[{a},{b}]" for a, b in zip(self.lo, self.hi))


@dataclass(frozen=True)
class Pixel:
    """A unit box given by its lower corner; the center is kept doubled."""

    cell: tuple

    @property
    def center2(self) -> tuple:
        return tuple(2 * x + 1 for x in self.cell)

    def box(self) -> IntBox:
        return IntBox(self.cell, tuple(x + 1 for x in self.cell))


@dataclass(frozen=True)
class BalanceReport:
    value: Fraction
    witness: tuple  # boxes achieving (longest side, shortest side)

    def __post_init__(self):
        assert self.value >= 1


@dataclass
class Partition:
    """A validated collection of boxes tiling (or partially tiling) [0,n]^d.

    Construct through validate_partition; the constructor itself does not
    re-check the invariants. Treated as immutable after construction.
    """

    dim: int
    n: int
    boxes: tuple
    partial: bool = False
    _owner: Optional[list] = field(default=None, repr=False, compare=False)

    def cell_index(self, cell) -> int:
        idx = 0
        for c in cell:
            idx = idx * self.n + c
        return idx

    def owner_grid(self) -> list:
        """Flat cell -> box id map (-1 for uncovered cells); cached."""
        if self._owner is None:
            grid = [-1] * (self.n ** self.dim)
            for bid, box in enumerate(self.boxes):
                for cell in box.cells():
                    grid[self.cell_index(cell)] = bid
            self._owner = grid
        return self._owner

    def owner_of(self, cell) -> int:
        for c in cell:
            if c < 0 or c >= self.n:
                return -1
        return self.owner_grid()[self.cell_index(cell)]


def _interiors_overlap(a: IntBox, b: IntBox) -> bool:
    for al, ah, bl, bh in zip(a.lo, a.hi, b.lo, b.hi):
        if al >= bh or bl >= ah:
            return False
    return True


def check_disjoint_all_pairs(boxes) -> None:
    # quadratic fallback, kept as the oracle for the sweep
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            if _interiors_overlap(boxes[i], boxes[j]):
                raise Overlap(boxes[i], boxes[j])


def _check_disjoint_sweep(boxes) -> None:
    """Sweep over the first axis; compare only boxes whose first-axis
    intervals overlap. Near-linear on partitions whose boxes are mostly
    short in the sweep direction."""
    order = sorted(range(len(boxes)), key=lambda i: boxes[i].lo[0])
    active = []  # indices, pruned lazily
    for i in order:
        box = boxes[i]
        lo0 = box.lo[0]
        active = [j for j in active if boxes[j].hi[0] > lo0]
        for j in active:
            if _interiors_overlap(box, boxes[j]):
                raise Overlap(boxes[j], box)
        active.append(i)


def _check_disjoint_grid(boxes, d, n) -> None:
    # cell-claiming pass; linear in covered volume
    grid = {}
    for i, box in enumerate(boxes):
        for cell in box.cells():
            prev = grid.setdefault(cell, i)
            if prev != i:
                raise Overlap(boxes[prev], boxes[i])


# volume threshold above which validation avoids materializing the cell grid
_GRID_LIMIT = 4_000_000


def validate_partition(boxes, d: int, n: int, partial: bool = False) -> Partition:
    """Validate containment, interior disjointness and (unless partial)
    exact coverage of [0,n]^d. Raises OutOfBounds, Overlap or CoverageGap."""
    if d < 1 or n < 1:
        raise ValueError("need d >= 1 and n >= 1")
    boxes = tuple(b if isinstance(b, IntBox) else IntBox(*b) for b in boxes)
    total = 0
    for box in boxes:
        if box.dim != d:
            raise ValueError(f"box {box} has dimension {box.dim}, expected {d}")
        if any(a < 0 for a in box.lo) or any(b > n for b in box.hi):
            raise OutOfBounds(box)
        total += box.volume()
    if not partial and total > n ** d:
        # overfull implies an overlap somewhere; find a concrete pair
        check_disjoint_all_pairs(boxes)
    if total <= _GRID_LIMIT:
        _check_disjoint_grid(boxes, d, n)
    else:
        _check_disjoint_sweep(boxes)
    if not partial:
        if total != n ** d:
            raise CoverageGap(n ** d - total)
    return Partition(d, n, boxes, partial)


def is_generic(p: Partition):
    """True iff no point lies in more than d+1 closed boxes.

    Returns (flag, witness) where witness is a violating grid point or None.
    Only grid vertices can witness a violation since boxes have integral
    corners."""
    d, n = p.dim, p.n
    p.owner_grid()
    shifts = [tuple((s >> k) & 1 for k in range(d)) for s in range(1 << d)]
    for vert in _grid_vertices(d, n):
        owners = set()
        for sh in shifts:
            cell = tuple(v - 1 + s for v, s in zip(vert, sh))
            o = p.owner_of(cell)
            if o >= 0:
                owners.add(o)
        if len(owners) > d + 1:
            return False, vert
    return True, None


def _grid_vertices(d, n):
    def rec(i, prefix):
        if i == d:
            yield tuple(prefix)
            return
        for x in range(n + 1):
            prefix.append(x)
            yield from rec(i + 1, prefix)
            prefix.pop()
    yield from rec(0, [])


def balance_of_set(boxes) -> BalanceReport:
    """Longest side over shortest side across all boxes of the set."""
    boxes = list(boxes)
    assert boxes
    best_max = None
    best_min = None
    for box in boxes:
        s = box.sides()
        mx, mn = max(s), min(s)
        if best_max is None or mx > best_max[0]:
            best_max = (mx, box)
        if best_min is None or mn < best_min[0]:
            best_min = (mn, box)
    value = Fraction(best_max[0], best_min[0])
    return BalanceReport(value, (best_max[1], best_min[1]))


def partition_balance(p: Partition, dc) -> BalanceReport:
    """Maximum balance over all edges of the dual complex.

    The maximum over edges equals the maximum over arbitrary simplices,
    since every simplex's longest and shortest sides appear on one of its
    edges."""
    best = BalanceReport(Fraction(1), (p.boxes[0], p.boxes[0]))
    for i, j in dc.edges():
        rep = balance_of_set((p.boxes[i], p.boxes[j]))
        if rep.value > best.value:
            best = rep
    # single-box partitions still have aspect ratio to account for
    for box in p.boxes:
        rep = balance_of_set((box,))
        if rep.value > best.value:
            best = rep
    return best
