"""Exact stabbing of convex sets with excluded facets by a hyperplane.

A FlaggedConvexSet is a convex hull minus a union of excluded closed
faces; equivalently an intersection of halfspaces some of which are
open. The feasibility question "is there a hyperplane meeting every set
of a family" is decided exactly over the rationals: the hyperplane
coefficients are normalized by case analysis on the leading coefficient,
the meeting condition for each set is expanded into a disjunction of
sign conditions on the values at its vertices, and every combined sign
case becomes a linear feasibility problem. Strict inequalities are
settled by margin maximization, so verdicts carry no epsilon.

Three set families are built in: the two three-dimensional
configurations (regular and singular) whose stabbing planes certify
flat tetrahedra in balanced partitions, and the planar triple whose
stabbing line certifies a flat triangle. All are parametrized by the
side-ratio bound b with unit short side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .ratlp import EQ, LE, OPTIMAL, feasible_point, strict_feasible

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"

# sign relations tying a vertex value E(p) to zero
_LE0, _LT0, _GE0, _GT0, _EQ0 = "<=0", "<0", ">=0", ">0", "==0"


class ArityMismatch(ValueError):
    """Problem shape does not fit the requested operation."""


class UnsupportedShape(ValueError):
    """A flagged set falls outside the shapes this checker handles."""


def _frac_point(pt):
    return tuple(Fraction(x) for x in pt)


def _eval(coeffs, pt):
    v = coeffs[-1]
    for c, x in zip(coeffs, pt):
        v += c * x
    return v


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull2d(points):
    """Extreme points in counterclockwise order (monotone chain).

    Collinear input collapses to its two endpoints; a single repeated
    point collapses to one.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:  # fully collinear
        return [pts[0], pts[-1]]
    return hull


@dataclass(frozen=True)
class FlaggedConvexSet:
    """Convex hull of vertices minus the listed closed faces.

    excluded_faces holds vertex index tuples; each must span a genuine
    face of the hull (checked when the supporting functional is built).
    """

    vertices: tuple
    excluded_faces: tuple = ()

    def __post_init__(self):
        verts = tuple(_frac_point(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        faces = tuple(tuple(sorted(f)) for f in self.excluded_faces)
        for f in faces:
            if not f or any(i < 0 or i >= len(verts) for i in f):
                raise ValueError(f"bad face index tuple {f}")
        object.__setattr__(self, "excluded_faces", faces)

    @property
    def dim(self) -> int:
        return len(self.vertices[0])


def face_functional(fset: FlaggedConvexSet, face) -> tuple:
    """Affine functional (a, c) with a.v = c on the face and a.v <= c - 1
    on all other vertices; exists iff the face is exposed."""
    d = fset.dim
    on = set(face)
    cons = []
    for i, v in enumerate(fset.vertices):
        row = list(v) + [-1]
        if i in on:
            cons.append((row, EQ, 0))
        else:
            cons.append((row, LE, -1))
    res = feasible_point(cons, d + 1)
    if res.status != OPTIMAL:
        raise ValueError(f"vertex set {tuple(face)} is not a face of the hull")
    return tuple(res.x[:d]), res.x[d]


def contains_point(fset: FlaggedConvexSet, pt) -> bool:
    """Exact membership: inside the hull and off every excluded face."""
    pt = _frac_point(pt)
    m = len(fset.vertices)
    cons = [([1] * m, EQ, 1)]
    for i in range(fset.dim):
        cons.append(([v[i] for v in fset.vertices], EQ, pt[i]))
    for j in range(m):
        row = [0] * m
        row[j] = -1
        cons.append((row, LE, 0))
    if feasible_point(cons, m).status != OPTIMAL:
        return False
    for face in fset.excluded_faces:
        a, c = face_functional(fset, face)
        if sum(ai * xi for ai, xi in zip(a, pt)) == c:
            return False
    return True


def meets_hyperplane(fset: FlaggedConvexSet, coeffs) -> bool:
    """Does the hyperplane coeffs[:-1].x + coeffs[-1] = 0 meet the set?

    Pure sign analysis: if the vertex values take both strict signs the
    plane crosses the relative interior; a one-sided touch meets the set
    unless the zero vertices all lie in a single excluded face.
    """
    vals = [_eval(coeffs, v) for v in fset.vertices]
    if min(vals) > 0 or max(vals) < 0:
        return False
    if min(vals) < 0 < max(vals):
        return True
    zero = {i for i, v in enumerate(vals) if v == 0}
    return not any(zero <= set(f) for f in fset.excluded_faces)


def stab_point(fset: FlaggedConvexSet, coeffs):
    """A rational point of the flagged set on the hyperplane, or None.

    Crossing case: move from the vertex centroid (relative interior)
    toward an opposite-signed vertex; the zero stays interior. Touching
    case: the zero vertices span the touching face; its centroid avoids
    every excluded face not containing the whole touch.
    """
    verts = fset.vertices
    vals = [_eval(coeffs, v) for v in verts]
    if min(vals) > 0 or max(vals) < 0:
        return None
    if min(vals) < 0 < max(vals):
        m = len(verts)
        cen = tuple(sum(v[i] for v in verts) / m for i in range(fset.dim))
        cv = _eval(coeffs, cen)
        if cv == 0:
            return cen
        far = min(range(m), key=lambda i: vals[i]) if cv > 0 else \
            max(range(m), key=lambda i: vals[i])
        fv = vals[far]
        t = cv / (cv - fv)  # in (0, 1); zero of the segment centroid->vertex
        return tuple(c + t * (verts[far][i] - c) for i, c in enumerate(cen))
    zero = [i for i, v in enumerate(vals) if v == 0]
    if any(set(zero) <= set(f) for f in fset.excluded_faces):
        return None
    k = len(zero)
    return tuple(sum(verts[i][j] for i in zero) / k for j in range(fset.dim))


@dataclass(frozen=True)
class StabbingProblem:
    dim: int
    sets: tuple
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(self.sets))
        object.__setattr__(self, "b", Fraction(self.b))
        for s in self.sets:
            if s.dim != self.dim:
                raise ValueError("set dimension differs from problem dimension")


@dataclass(frozen=True)
class StabVerdict:
    status: str
    witness: tuple = None        # hyperplane coefficients, constant last
    witness_points: tuple = ()   # one point per set when feasible
    certificate: tuple = ()      # per-case infeasibility reasons
    cases: int = 0

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE


def build_config_sets(kind: str, b) -> StabbingProblem:
    """The four point-class sets of the regular or singular meeting
    pattern around a vertex, at side ratio b (unit short side)."""
    b = Fraction(b)
    if b <= 1:
        raise ValueError("need b > 1")
    if kind == "regular":
        sets = (
            FlaggedConvexSet(((-1, -1, -1), (-b, -b, -b))),
            FlaggedConvexSet(((1, -1, -1), (b, -b, -b))),
            FlaggedConvexSet(
                ((-1, 1, -1), (-b, b, -b), (1, 1, -1), (b, b, -b)),
                ((0, 1), (2, 3))),
            FlaggedConvexSet(
                ((-1, -1, 1), (-b, -b, b), (-1, 1, 1), (-b, b, b),
                 (1, -1, 1), (b, -b, b), (1, 1, 1), (b, b, b)),
                ((0, 1, 2, 3), (0, 1, 4, 5), (2, 3, 6, 7), (4, 5, 6, 7))),
        )
    elif kind == "singular":
        sets = tuple(
            FlaggedConvexSet(verts, ((0, 1), (2, 3)))
            for verts in (
                ((-1, -1, -1), (-b, -b, -b), (1, -1, -1), (b, -b, -b)),
                ((-1, 1, -1), (-b, b, -b), (1, 1, -1), (b, b, -b)),
                ((-1, -1, 1), (-b, -b, b), (-1, 1, 1), (-b, b, b)),
                ((1, -1, 1), (b, -b, b), (1, 1, 1), (b, b, b)),
            ))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return StabbingProblem(3, sets, b)


def build_planar_sets(b) -> StabbingProblem:
    """Center regions of three rectangles meeting at a point in the
    plane: two closed boxes and one box whose lower side is excluded."""
    b = Fraction(b)
    if b <= 1:
        raise ValueError("need b > 1")
    h = b / 2
    q = Fraction(1, 2)
    sets = (
        FlaggedConvexSet(((-h, -h), (-q, -h), (-q, -q), (-h, -q))),
        FlaggedConvexSet(((-h, q), (-q, q), (-q, h), (-h, h))),
        FlaggedConvexSet(((q, -h), (h, -h), (h, h), (q, h)), ((0, 1),)),
    )
    return StabbingProblem(2, sets, b)


# --- sign-case systems -------------------------------------------------

def _rows_for_case(prefix, cond):
    """Translate (point, relation-to-zero) atoms into LP rows over the
    trailing coefficients (unknowns: coeffs after prefix, constant last)."""
    k = len(prefix)
    eq, weak, strict = [], [], []
    for pt, rel in cond:
        const = sum(c * x for c, x in zip(prefix, pt[:k]))
        row = [Fraction(x) for x in pt[k:]] + [Fraction(1)]
        if rel == _EQ0:
            eq.append((row, -const))
        elif rel == _LE0:
            weak.append((row, -const))
        elif rel == _LT0:
            strict.append((row, -const))
        elif rel == _GE0:
            weak.append(([-x for x in row], const))
        else:
            strict.append(([-x for x in row], const))
    return eq, weak, strict


def _solve_case(prefix, dim, cond):
    nvars = dim + 1 - len(prefix)
    eq, weak, strict = _rows_for_case(prefix, cond)
    ok, x, margin = strict_feasible(nvars, eq, weak, strict)
    if ok:
        return tuple(prefix) + tuple(x), None
    if margin is None:
        return None, "weak system infeasible"
    return None, f"max margin {margin} <= 0"


def _product_split(p, q, strict):
    """Sign cases of E(p).E(q) <= 0 (or < 0 when strict)."""
    if strict:
        return [((p, _GT0), (q, _LT0)), ((p, _LT0), (q, _GT0))]
    return [((p, _GE0), (q, _LE0)), ((p, _LE0), (q, _GE0))]


_REL_BOUNDS = {
    _GE0: (0, None, False, False),
    _GT0: (0, None, True, False),
    _LE0: (None, 0, False, False),
    _LT0: (None, 0, False, True),
    _EQ0: (0, 0, False, False),
}


def _atoms_conflict(prefix, cond):
    """Cheap soundness filter: two atoms whose points agree on every
    unknown coordinate differ by a known constant, so incompatible sign
    demands rule the case out without an LP."""
    k = len(prefix)
    n = len(cond)
    for i in range(n):
        p, rp = cond[i]
        lo_p, up_p, slo_p, sup_p = _REL_BOUNDS[rp]
        for j in range(i + 1, n):
            q, rq = cond[j]
            if tuple(p[k:]) != tuple(q[k:]):
                continue
            d = sum(c * (a - e) for c, a, e in zip(prefix, p[:k], q[:k]))
            lo_q, up_q, slo_q, sup_q = _REL_BOUNDS[rq]
            # E(p) = E(q) + d must fit both value intervals
            if lo_p is not None and up_q is not None:
                gap = lo_p - d
                if gap > up_q or (gap == up_q and (slo_p or sup_q)):
                    return True
            if lo_q is not None and up_p is not None:
                gap = up_p - d
                if lo_q > gap or (lo_q == gap and (slo_q or sup_p)):
                    return True
    return False


# --- 2d set conditions -------------------------------------------------

def _quad_frame(fset: FlaggedConvexSet):
    """Corners of a quad with two horizontal edges, plus exclusion flags."""
    hull = hull2d(fset.vertices)
    if len(hull) != 4:
        raise UnsupportedShape("expected four extreme points")
    ys = sorted({p[1] for p in hull})
    if len(ys) != 2:
        raise UnsupportedShape("quad needs exactly two horizontal edges")
    bot = sorted([p for p in hull if p[1] == ys[0]])
    top = sorted([p for p in hull if p[1] == ys[1]])
    if len(bot) != 2 or len(top) != 2:
        raise UnsupportedShape("quad needs exactly two horizontal edges")
    bl, br = bot
    tl, tr = top
    edges = {
        "bottom": {bl, br}, "top": {tl, tr},
        "left": {bl, tl}, "right": {br, tr},
    }
    excluded = set()
    for face in fset.excluded_faces:
        coords = {fset.vertices[i] for i in face}
        for name, edge in edges.items():
            if coords == edge:
                excluded.add(name)
                break
        else:
            raise UnsupportedShape(f"excluded face {face} is not an edge")
    return bl, br, tl, tr, excluded


def _set_conditions(fset: FlaggedConvexSet, steep: bool):
    """Disjunctive meeting conditions for one 2d set.

    steep=True is the branch with unit first coefficient (every
    non-horizontal line); steep=False the horizontal branch (0, 1, c).
    """
    hull = hull2d(fset.vertices)
    if len(hull) == 1:
        if fset.excluded_faces:
            raise UnsupportedShape("point set cannot exclude faces")
        return [((hull[0], _EQ0),)]
    if len(hull) == 2:
        if fset.excluded_faces:
            raise UnsupportedShape("segments here are always closed")
        return _product_split(hull[0], hull[1], False)
    bl, br, tl, tr, excluded = _quad_frame(fset)
    if not steep:
        relb = _LT0 if "bottom" in excluded else _LE0
        relt = _GT0 if "top" in excluded else _GE0
        return [((bl, relb), (tl, relt))]
    if not excluded:
        return _product_split(bl, tr, False) + _product_split(br, tl, False)
    conds = _product_split(bl, tr, True) + _product_split(br, tl, True)
    excl_coords = set()
    for face in fset.excluded_faces:
        excl_coords |= {fset.vertices[i] for i in face}
    corners = [c for c in (bl, br, tl, tr) if c not in excl_coords]
    for c in corners:
        conds.append(((c, _EQ0),))
    for e0, e1, name in ((bl, tl, "left"), (br, tr, "right")):
        if name not in excluded and e0 in excl_coords and e1 in excl_coords:
            conds.append(((e0, _EQ0), (e1, _EQ0)))
    return conds


def _first_feasible(prefix, dim, per_set_conditions, certificate, label):
    """Deterministic scan of the product of per-set sign cases."""
    count = 0
    found = None
    for combo in product(*per_set_conditions):
        count += 1
        if found is not None:
            continue
        cond = tuple(atom for c in combo for atom in c)
        if _atoms_conflict(prefix, cond):
            certificate.append((f"{label}#{count}", "sign atoms conflict"))
            continue
        witness, reason = _solve_case(prefix, dim, cond)
        if witness is not None:
            found = witness
        else:
            certificate.append((f"{label}#{count}", reason))
    return found, count


def _verify_witness(sets, coeffs):
    """Re-check a feasible verdict by direct evaluation on every set."""
    points = []
    for i, s in enumerate(sets):
        if not meets_hyperplane(s, coeffs):
            raise AssertionError(f"witness misses set {i}")
        pt = stab_point(s, coeffs)
        if pt is None or _eval(coeffs, pt) != 0 or not contains_point(s, pt):
            raise AssertionError(f"witness point check failed on set {i}")
        points.append(pt)
    return tuple(points)


def line_stab(problem: StabbingProblem) -> StabVerdict:
    """Is there a line meeting every flagged set of a planar family?

    Branches on the line normal: unit first coefficient covers every
    non-horizontal line, (0, 1, c) the horizontal ones. Within a branch
    each set contributes a disjunction of linear sign conditions; the
    first feasible combined case (fixed enumeration order) supplies the
    witness, which is re-verified geometrically.
    """
    if problem.dim != 2:
        raise ArityMismatch("line_stab needs a 2d problem")
    cert = []
    cases = 0
    for prefix, label in (((1,), "steep"), ((0, 1), "flat")):
        conds = [_set_conditions(s, prefix == (1,)) for s in problem.sets]
        witness, count = _first_feasible(prefix, 2, conds, cert, label)
        cases += count
        if witness is not None:
            points = _verify_witness(problem.sets, witness)
            return StabVerdict(FEASIBLE, witness=witness,
                               witness_points=points, cases=cases)
    return StabVerdict(INFEASIBLE, certificate=tuple(cert), cases=cases)


# --- 3d: the two meeting configurations --------------------------------

def _lemma_rows(kind: str, b: Fraction):
    """Per-set disjunctions of vertex-pair product conditions for the
    t0 = 1 normalization; (p, q, strict) encodes E(p).E(q) <= 0 / < 0."""
    if kind == "regular":
        return [
            [((-1, -1, -1), (-b, -b, -b), False)],
            [((1, -1, -1), (b, -b, -b), False)],
            [((-1, 1, -1), (b, b, -b), True),
             ((1, 1, -1), (-b, b, -b), True)],
            [((-1, -1, 1), (b, b, b), True),
             ((1, -1, 1), (-b, b, b), True),
             ((-1, 1, 1), (b, -b, b), True),
             ((1, 1, 1), (-b, -b, b), True)],
        ]
    return [
        [((-1, -1, -1), (b, -b, -b), True),
         ((1, -1, -1), (-b, -b, -b), True)],
        [((-1, 1, -1), (b, b, -b), True),
         ((1, 1, -1), (-b, b, -b), True)],
        [((-1, -1, 1), (-b, b, b), True),
         ((-1, 1, 1), (-b, -b, b), True)],
        [((1, -1, 1), (b, b, b), True),
         ((1, 1, 1), (b, -b, b), True)],
    ]


def lemma_formulas_hold(kind: str, b, coeffs) -> bool:
    """Evaluate the four per-set product formulas at a fixed plane with
    unit first coefficient."""
    b = Fraction(b)
    if coeffs[0] != 1:
        raise ValueError("formulas assume unit first coefficient")
    for row in _lemma_rows(kind, b):
        ok = False
        for p, q, strict in row:
            prod = _eval(coeffs, p) * _eval(coeffs, q)
            if prod < 0 or (not strict and prod == 0):
                ok = True
                break
        if not ok:
            return False
    return True


def _detect_kind(problem: StabbingProblem) -> str:
    sizes = sorted(len(s.vertices) for s in problem.sets)
    kind = "regular" if sizes == [2, 2, 4, 8] else "singular"
    want = build_config_sets(kind, problem.b)
    if tuple(problem.sets) != want.sets:
        raise ArityMismatch(
            "sets are not the regular or singular configuration at this scale")
    return kind


def _project_to_yz(problem: StabbingProblem):
    """Exact shadows of the four sets on the last two coordinates.

    The shadow hull is the hull of projected vertices; each face of the
    shadow is kept or excluded according to whether some preimage of a
    relative-interior sample avoids all excluded faces upstairs (a
    strict rational feasibility question over the fiber). Raises if the
    shadow is not itself hull-minus-faces.
    """
    shadows = []
    for fset in problem.sets:
        proj = [(v[1], v[2]) for v in fset.vertices]
        hull = hull2d(proj)
        functionals = [face_functional(fset, f) for f in fset.excluded_faces]

        def fiber_included(sample):
            m = len(fset.vertices)
            eq = [([1] * m, Fraction(1))]
            for axis in (1, 2):
                eq.append(([v[axis] for v in fset.vertices], sample[axis - 1]))
            weak = []
            for j in range(m):
                row = [0] * m
                row[j] = -1
                weak.append((row, 0))
            strict = []
            for a, c in functionals:
                strict.append((
                    [sum(ai * vi for ai, vi in zip(a, v)) - c
                     for v in fset.vertices], 0))
            ok, _, _ = strict_feasible(m, eq, weak, strict)
            return ok

        k = len(hull)
        edges = [(i, (i + 1) % k) for i in range(k)] if k > 2 else []
        excluded_edges = []
        for i, j in edges:
            mid = tuple((a + c) / 2 for a, c in zip(hull[i], hull[j]))
            if not fiber_included(mid):
                excluded_edges.append((i, j))
        for idx, v in enumerate(hull):
            on_excluded = any(idx in e for e in excluded_edges)
            if fiber_included(v) == on_excluded:
                raise UnsupportedShape(
                    "shadow is not a hull minus whole faces")
        if k > 2:
            cen = tuple(sum(v[i] for v in hull) / k for i in range(2))
            if not fiber_included(cen):
                raise UnsupportedShape("shadow interior is not included")
        shadows.append(FlaggedConvexSet(
            tuple(hull), tuple(tuple(sorted(e)) for e in excluded_edges)))
    unique = []
    for s in shadows:
        if s not in unique:
            unique.append(s)
    return tuple(unique)


def plane_stab(problem: StabbingProblem) -> StabVerdict:
    """Is there a plane meeting all four sets of a meeting configuration?

    Phase one settles planes with zero first coefficient by projecting
    the sets onto the last two coordinates and stabbing the shadows with
    a line. Phase two normalizes the first coefficient to one and scans
    the sign cases of the per-set product formulas.
    """
    if problem.dim != 3 or len(problem.sets) != 4:
        raise ArityMismatch("plane_stab needs exactly four 3d sets")
    kind = _detect_kind(problem)
    cert = []
    shadow_problem = StabbingProblem(2, _project_to_yz(problem), problem.b)
    flat = line_stab(shadow_problem)
    cases = flat.cases
    if flat.feasible:
        coeffs = (Fraction(0),) + tuple(flat.witness)
        points = _verify_witness(problem.sets, coeffs)
        return StabVerdict(FEASIBLE, witness=coeffs, witness_points=points,
                           cases=cases)
    cert.extend(("x-coefficient 0: " + lbl, why) for lbl, why in flat.certificate)

    rows = _lemma_rows(kind, problem.b)
    conds = [[atoms for p, q, strict in row
              for atoms in _product_split(p, q, strict)] for row in rows]
    witness, count = _first_feasible((1,), 3, conds, cert, "unit")
    cases += count
    if witness is not None:
        points = _verify_witness(problem.sets, witness)
        return StabVerdict(FEASIBLE, witness=witness, witness_points=points,
                           cases=cases)
    return StabVerdict(INFEASIBLE, certificate=tuple(cert), cases=cases)
