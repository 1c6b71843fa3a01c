"""Brute-force injectivity of a projected 2D dual complex.

A projection of the complex is injective exactly when every simplex maps
nondegenerately and the images of the relative interiors of all simplices
are pairwise disjoint. All predicates are exact over the integers
(doubled coordinates come in, only signs and interval endpoints matter).
"""

from fractions import Fraction


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def point_in_open_seg(p, a, b):
    # collinear points are totally ordered lexicographically along the line
    if a == b or _cross(a, b, p) != 0:
        return False
    lo, hi = sorted((a, b))
    return lo < p < hi


def point_in_open_tri(p, a, b, c):
    s = _cross(a, b, c)
    if s == 0:
        return False
    if s < 0:
        b, c = c, b
    return _cross(a, b, p) > 0 and _cross(b, c, p) > 0 and _cross(c, a, p) > 0


def open_segs_intersect(a, b, c, d):
    d1 = _cross(c, d, a)
    d2 = _cross(c, d, b)
    d3 = _cross(a, b, c)
    d4 = _cross(a, b, d)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and \
            ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    # collinear overlap: open intervals on the common line must overlap
    if d1 == 0 and d2 == 0 and d3 == 0 and d4 == 0:
        p1, p2 = sorted((a, b))
        q1, q2 = sorted((c, d))
        return max(p1, q1) < min(p2, q2)
    return False


def open_seg_meets_open_tri(a, b, t1, t2, t3):
    """Clip the open segment against the open triangle exactly."""
    s = _cross(t1, t2, t3)
    if s == 0:
        return False
    if s < 0:
        t2, t3 = t3, t2
    lo = Fraction(0)
    hi = Fraction(1)
    # p(t) = a + t (b - a); interior means all three cross products > 0
    for u, v in ((t1, t2), (t2, t3), (t3, t1)):
        f0 = _cross(u, v, a)
        f1 = _cross(u, v, b)
        alpha = f1 - f0  # value is f0 + alpha t, need > 0
        if alpha == 0:
            if f0 <= 0:
                return False
        elif alpha > 0:
            lo = max(lo, Fraction(-f0, alpha))
        else:
            hi = min(hi, Fraction(-f0, alpha))
    return lo < hi


def open_tris_intersect(A, B):
    if sorted(A) == sorted(B):
        return True
    for (p, q) in ((A[0], A[1]), (A[1], A[2]), (A[2], A[0])):
        if open_seg_meets_open_tri(p, q, *B):
            return True
    for (p, q) in ((B[0], B[1]), (B[1], B[2]), (B[2], B[0])):
        if open_seg_meets_open_tri(p, q, *A):
            return True
    return False


def projection_injective(dc, proj) -> bool:
    """Exact injectivity of the simplicial map into the plane."""
    pts = proj.points2
    verts = [pts[s[0]] for s in sorted(dc.simplices[0])]
    segs = [(pts[i], pts[j]) for i, j in sorted(dc.simplices.get(1, ()))]
    tris = [(pts[i], pts[j], pts[k])
            for i, j, k in sorted(dc.simplices.get(2, ()))]

    # nondegeneracy of each simplex
    for a, b in segs:
        if a == b:
            return False
    for a, b, c in tris:
        if _cross(a, b, c) == 0:
            return False

    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            if verts[i] == verts[j]:
                return False
    for v in verts:
        for a, b in segs:
            if point_in_open_seg(v, a, b):
                return False
        for t in tris:
            if point_in_open_tri(v, *t):
                return False
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            if open_segs_intersect(*segs[i], *segs[j]):
                return False
        for t in tris:
            if open_seg_meets_open_tri(*segs[i], *t):
                return False
    for i in range(len(tris)):
        for j in range(i + 1, len(tris)):
            if open_tris_intersect(tris[i], tris[j]):
                return False
    return True
