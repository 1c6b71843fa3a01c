"""Partition generators used across the test suite.

enumerate_rectangulations lists every way to tile an n x n (or n^d) grid
with boxes, by always covering the first uncovered cell with all boxes
having it as their lowest corner. random_partition produces seeded
guillotine-style partitions.
"""

import random

from rectdual.boxes import IntBox, validate_partition


def enumerate_rectangulations(d, n):
    """All partitions of [0,n]^d, as lists of IntBox. Desk scale only."""
    cells = n ** d

    def cell_coords(idx):
        out = []
        for _ in range(d):
            out.append(idx % n)
            idx //= n
        return tuple(reversed(out))

    def cell_index(c):
        idx = 0
        for x in c:
            idx = idx * n + x
        return idx

    results = []
    boxes = []
    covered = [False] * cells

    def candidates(lo):
        # all boxes with lowest corner lo whose cells are all free
        his = []

        def rec(k, hi):
            if k == d:
                his.append(tuple(hi))
                return
            for h in range(lo[k] + 1, n + 1):
                rec(k + 1, hi + [h])

        rec(0, [])
        for hi in his:
            box = IntBox(lo, hi)
            if all(not covered[cell_index(c)] for c in box.cells()):
                yield box

    def rec():
        idx = next((i for i in range(cells) if not covered[i]), None)
        if idx is None:
            results.append(list(boxes))
            return
        lo = cell_coords(idx)
        for box in candidates(lo):
            for c in box.cells():
                covered[cell_index(c)] = True
            boxes.append(box)
            rec()
            boxes.pop()
            for c in box.cells():
                covered[cell_index(c)] = False

    rec()
    return [validate_partition(bs, d, n) for bs in results]


def random_partition(d, n, rng: random.Random, stop=0.3):
    """Seeded random guillotine partition of [0,n]^d."""
    boxes = []

    def split(lo, hi):
        sides = [h - l for l, h in zip(lo, hi)]
        splittable = [k for k in range(d) if sides[k] >= 2]
        if not splittable or rng.random() < stop:
            boxes.append(IntBox(tuple(lo), tuple(hi)))
            return
        k = rng.choice(splittable)
        cut = rng.randrange(lo[k] + 1, hi[k])
        mid_lo = list(lo)
        mid_hi = list(hi)
        mid_hi[k] = cut
        split(mid_lo, mid_hi)
        mid_lo2 = list(lo)
        mid_lo2[k] = cut
        split(mid_lo2, list(hi))

    split([0] * d, [n] * d)
    return validate_partition(boxes, d, n)
