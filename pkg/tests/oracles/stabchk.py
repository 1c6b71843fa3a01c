"""Independent checks for hyperplane stabbing of flagged convex sets.

Decision logic here is deliberately separate from the package: meeting a
fixed hyperplane is decided by a feasibility LP over convex-combination
weights, and membership in the concrete set families is hand-coded from
their closed-form descriptions.
"""

from fractions import Fraction

from rectdual.ratlp import EQ, LE, OPTIMAL, feasible_point, strict_feasible


def _functional(vertices, face):
    """Supporting affine functional of an exposed face, solved directly."""
    d = len(vertices[0])
    cons = []
    on = set(face)
    for i, v in enumerate(vertices):
        row = list(v) + [-1]
        cons.append((row, EQ if i in on else LE, 0 if i in on else -1))
    res = feasible_point(cons, d + 1)
    assert res.status == OPTIMAL, f"not a face: {face}"
    return res.x[:d], res.x[d]


def set_functionals(fset):
    return [_functional(fset.vertices, f) for f in fset.excluded_faces]


def lp_meets(fset, coeffs, functionals=None):
    """Does the hyperplane meet the flagged set? One strict LP over the
    convex-combination weights."""
    if functionals is None:
        functionals = set_functionals(fset)
    verts = fset.vertices
    m = len(verts)
    vals = [sum(c * x for c, x in zip(coeffs, v)) + coeffs[-1] for v in verts]
    eq = [([1] * m, 1), (vals, 0)]
    weak = []
    for j in range(m):
        row = [0] * m
        row[j] = -1
        weak.append((row, 0))
    strict = []
    for a, c in functionals:
        strict.append(([sum(ai * vi for ai, vi in zip(a, v)) - c
                        for v in verts], 0))
    ok, _, _ = strict_feasible(m, eq, weak, strict)
    return ok


# closed-form membership for the built-in families (unit short side)

def in_regular(i, b, pt):
    b = Fraction(b)
    x, y, z = pt
    if i == 0:
        return x == y == z and -b <= x <= -1
    if i == 1:
        return y == z == -x and 1 <= x <= b
    if i == 2:
        return z == -y and 1 <= y <= b and abs(x) < y
    return 1 <= z <= b and abs(x) < z and abs(y) < z


def in_singular(i, b, pt):
    b = Fraction(b)
    x, y, z = pt
    if i == 0:
        return y == z and -b <= y <= -1 and abs(x) < -y
    if i == 1:
        return z == -y and 1 <= y <= b and abs(x) < y
    if i == 2:
        return x == -z and 1 <= z <= b and abs(y) < z
    return x == z and 1 <= z <= b and abs(y) < z


def in_planar(i, b, pt):
    h = Fraction(b) / 2
    q = Fraction(1, 2)
    x, y = pt
    if i == 0:
        return -h <= x <= -q and -h <= y <= -q
    if i == 1:
        return -h <= x <= -q and q <= y <= h
    return q <= x <= h and -h < y <= h
