import random
from fractions import Fraction

import pytest

from rectdual.stabbing import (
    FEASIBLE,
    INFEASIBLE,
    ArityMismatch,
    FlaggedConvexSet,
    StabbingProblem,
    UnsupportedShape,
    build_config_sets,
    build_planar_sets,
    contains_point,
    face_functional,
    hull2d,
    lemma_formulas_hold,
    line_stab,
    meets_hyperplane,
    plane_stab,
    stab_point,
    _project_to_yz,
)

from oracles.stabchk import (
    in_planar,
    in_regular,
    in_singular,
    lp_meets,
    set_functionals,
)

F = Fraction

SUB3 = [F(3, 2), F(2), F(5, 2), F(29, 10)]


def rand_plane(rng, dim, t0=None):
    lead = rng.choice([-3, -2, -1, 1, 2, 3]) if t0 is None else t0
    tail = [F(rng.randint(-60, 60), rng.randint(1, 9)) for _ in range(dim)]
    return (F(lead), *tail)


# --- builders -----------------------------------------------------------

def test_build_config_sets_shapes():
    p = build_config_sets("regular", 3)
    assert p.dim == 3 and p.b == 3
    assert [len(s.vertices) for s in p.sets] == [2, 2, 4, 8]
    assert [len(s.excluded_faces) for s in p.sets] == [0, 0, 2, 4]
    q = build_config_sets("singular", F(5, 2))
    assert [len(s.vertices) for s in q.sets] == [4, 4, 4, 4]
    assert all(len(s.excluded_faces) == 2 for s in q.sets)


def test_build_planar_sets_exact():
    p = build_planar_sets(3)
    c0, c1, c2 = p.sets
    assert c0.vertices == ((F(-3, 2), F(-3, 2)), (F(-1, 2), F(-3, 2)),
                           (F(-1, 2), F(-1, 2)), (F(-3, 2), F(-1, 2)))
    assert c0.excluded_faces == () and c1.excluded_faces == ()
    # lower side of the third region is excluded
    assert c2.excluded_faces == ((0, 1),)
    assert c2.vertices[0] == (F(1, 2), F(-3, 2))


def test_builders_reject_small_b():
    for bad in (1, F(1, 2), 0):
        with pytest.raises(ValueError):
            build_config_sets("regular", bad)
        with pytest.raises(ValueError):
            build_planar_sets(bad)
    with pytest.raises(ValueError):
        build_config_sets("octagonal", 3)


def test_hull2d_small_cases():
    assert hull2d([(0, 0), (2, 2), (1, 1)]) == [(0, 0), (2, 2)]
    assert hull2d([(5, 5), (5, 5)]) == [(5, 5)]
    quad = hull2d([(0, 0), (1, 0), (1, 1), (0, 1), (F(1, 2), F(1, 2))])
    assert len(quad) == 4 and (F(1, 2), F(1, 2)) not in quad


# --- face machinery -----------------------------------------------------

def test_face_functional_validates_faces():
    p = build_config_sets("regular", 3)
    trap = p.sets[2]
    for face in trap.excluded_faces:
        a, c = face_functional(trap, face)
        vals = [sum(ai * vi for ai, vi in zip(a, v)) for v in trap.vertices]
        for i, v in enumerate(vals):
            assert (v == c) == (i in face)
    with pytest.raises(ValueError):
        face_functional(trap, (0, 3))  # diagonal pair is not a face


def test_contains_point_flagged_trapezoid():
    trap = build_config_sets("regular", 3).sets[2]
    assert contains_point(trap, (0, 2, -2))
    assert not contains_point(trap, (-2, 2, -2))   # on an excluded slant
    assert not contains_point(trap, (0, 2, -1))    # off the carrier plane
    assert contains_point(trap, (F(1, 2), 1, -1))  # open lower edge
    assert not contains_point(trap, (1, 1, -1))    # excluded corner


# --- fixed-plane evaluation vs LP oracle ---------------------------------

@pytest.mark.parametrize("kind", ["regular", "singular"])
def test_meets_hyperplane_agrees_with_lp(kind):
    rng = random.Random(hash(kind) & 0xFFFF)
    for b in (2, 3, 4):
        prob = build_config_sets(kind, b)
        funcs = [set_functionals(s) for s in prob.sets]
        for _ in range(25):
            coeffs = rand_plane(rng, 3)
            for s, fn in zip(prob.sets, funcs):
                assert meets_hyperplane(s, coeffs) == lp_meets(s, coeffs, fn)


@pytest.mark.parametrize("kind", ["regular", "singular"])
def test_stab_point_consistent(kind):
    rng = random.Random(1 + hash(kind) % 97)
    member = in_regular if kind == "regular" else in_singular
    hits = 0
    for b in (2, 3, 4):
        prob = build_config_sets(kind, b)
        for _ in range(60):
            coeffs = rand_plane(rng, 3)
            for i, s in enumerate(prob.sets):
                pt = stab_point(s, coeffs)
                if meets_hyperplane(s, coeffs):
                    hits += 1
                    val = sum(c * x for c, x in zip(coeffs, pt)) + coeffs[-1]
                    assert val == 0
                    assert contains_point(s, pt)
                    assert member(i, b, pt)
                else:
                    assert pt is None
    assert hits > 50


# --- product formulas ----------------------------------------------------

@pytest.mark.parametrize("kind", ["regular", "singular"])
def test_formulas_match_direct_stabbing(kind):
    rng = random.Random(7 if kind == "regular" else 11)
    for b in (F(5, 2), F(3), F(7, 2)):
        prob = build_config_sets(kind, b)
        for _ in range(80):
            coeffs = rand_plane(rng, 3, t0=1)
            direct = all(meets_hyperplane(s, coeffs) for s in prob.sets)
            assert lemma_formulas_hold(kind, b, coeffs) == direct


# --- shadows (zero leading coefficient phase) ----------------------------

@pytest.mark.parametrize("kind", ["regular", "singular"])
def test_yz_shadows(kind):
    b = F(3)
    shadows = _project_to_yz(build_config_sets(kind, b))
    seg_low = FlaggedConvexSet(((-b, -b), (-1, -1)))
    seg_high = FlaggedConvexSet(((1, -1), (b, -b)))
    trap = FlaggedConvexSet(((-b, b), (-1, 1), (1, 1), (b, b)),
                            ((0, 1), (2, 3)))
    assert shadows == (seg_low, seg_high, trap)


def test_shadow_problem_never_line_stabbed():
    for kind in ("regular", "singular"):
        for b in (F(2), F(3), F(9)):
            shadows = _project_to_yz(build_config_sets(kind, b))
            v = line_stab(StabbingProblem(2, shadows, b))
            assert v.status == INFEASIBLE


# --- plane_stab verdicts --------------------------------------------------

@pytest.mark.parametrize("kind", ["regular", "singular"])
def test_plane_stab_threshold_grid(kind):
    grid = SUB3 + [F(3), F(7, 2), F(4), F(5)]
    verdicts = {b: plane_stab(build_config_sets(kind, b)) for b in grid}
    if kind == "regular":
        want = [INFEASIBLE] * 5 + [FEASIBLE] * 3
        for b in (F(7, 2), F(4), F(5)):
            v = verdicts[b]
            assert v.witness[0] in (0, 1)
            for i, pt in enumerate(v.witness_points):
                assert in_regular(i, b, pt)
    else:
        # cone analysis of the per-set fibers shows no plane ever meets
        # all four sets of this family once the slants are excluded
        want = [INFEASIBLE] * 8
    assert [verdicts[b].status for b in grid] == want
    # once feasible, stays feasible
    seen = False
    for b in grid:
        assert not (seen and not verdicts[b].feasible), f"flip at b={b}"
        seen = seen or verdicts[b].feasible
    infeas = verdicts[F(2)]
    assert infeas.witness is None
    assert infeas.cases == 20 + (128 if kind == "regular" else 256)
    assert len(infeas.certificate) == infeas.cases
    assert all(why for _, why in infeas.certificate)


def test_plane_stab_rejects_foreign_input():
    prob = build_config_sets("regular", 3)
    with pytest.raises(ArityMismatch):
        plane_stab(StabbingProblem(3, prob.sets[:3], 3))
    with pytest.raises(ArityMismatch):
        plane_stab(build_planar_sets(3))
    tweaked = (FlaggedConvexSet(((0, 0, 0), (1, 1, 1))),) + prob.sets[1:]
    with pytest.raises(ArityMismatch):
        plane_stab(StabbingProblem(3, tweaked, 3))


def test_closed_reading_feasible_at_three():
    # with every facet kept, the plane through the four far corners of the
    # scaled pattern meets all four sets at b = 3; the excluded slants are
    # exactly what blocks it in the flagged reading
    b = F(3)
    flagged = build_config_sets("regular", b)
    closed = [FlaggedConvexSet(s.vertices) for s in flagged.sets]
    plane = (1, 1, 1, 3)
    assert all(meets_hyperplane(s, plane) for s in closed)
    met = [meets_hyperplane(s, plane) for s in flagged.sets]
    assert met == [True, True, False, False]
    # and no plane at all meets the flagged configuration (threshold case)
    assert plane_stab(flagged).status == INFEASIBLE


def test_regular_witness_survives_beyond_three():
    # the same corner plane is a valid witness once b exceeds 3
    for b in (F(31, 10), F(7, 2), F(13)):
        sets = build_config_sets("regular", b).sets
        assert all(meets_hyperplane(s, (1, 1, 1, 3)) for s in sets)


# --- line_stab on the planar family ---------------------------------------

def test_line_stab_planar_threshold():
    for b in SUB3:
        v = line_stab(build_planar_sets(b))
        assert v.status == INFEASIBLE, f"b={b}"
    for b in (F(3), F(7, 2), F(5)):
        v = line_stab(build_planar_sets(b))
        assert v.status == FEASIBLE, f"b={b}"
        for i, pt in enumerate(v.witness_points):
            assert in_planar(i, b, pt)


def test_line_stab_unique_witness_at_three():
    # at the threshold the stabbing line is forced: y = x + 1 touching the
    # two closed squares at corners and the third set on its kept top side
    v = line_stab(build_planar_sets(3))
    assert v.witness == (1, -1, 1)
    assert v.witness_points == (
        (F(-3, 2), F(-1, 2)), (F(-1, 2), F(1, 2)), (F(1, 2), F(3, 2)))


def test_line_stab_planar_case_count():
    v = line_stab(build_planar_sets(2))
    assert v.status == INFEASIBLE
    assert v.cases == 96 + 1


def test_line_stab_excluded_side_matters():
    # closing the lower side of the third region changes nothing at the
    # threshold (the witness uses its top side) but admits new lines above it
    b = F(3)
    flagged = build_planar_sets(b)
    closed = StabbingProblem(
        2, [FlaggedConvexSet(s.vertices) for s in flagged.sets], b)
    assert line_stab(closed).status == FEASIBLE
    # y = -x - 1 touches both squares and the reinstated lower-left corner
    down = (1, 1, 1)
    assert all(meets_hyperplane(s, down) for s in closed.sets)
    assert not meets_hyperplane(flagged.sets[2], down)


def test_line_stab_common_point_degenerate():
    segs = [
        FlaggedConvexSet(((-1, -1), (1, 1))),
        FlaggedConvexSet(((-1, 1), (1, -1))),
        FlaggedConvexSet(((-2, 0), (2, 0))),
    ]
    v = line_stab(StabbingProblem(2, segs, F(2)))
    assert v.status == FEASIBLE
    for pt in v.witness_points:
        val = sum(c * x for c, x in zip(v.witness, pt)) + v.witness[-1]
        assert val == 0
    point = FlaggedConvexSet(((3, 4),))
    v2 = line_stab(StabbingProblem(2, [point, segs[2]], F(2)))
    assert v2.status == FEASIBLE


def test_line_stab_rejects_wrong_dim():
    with pytest.raises(ArityMismatch):
        line_stab(build_config_sets("regular", 2))


def test_unsupported_shapes_raise():
    penta = FlaggedConvexSet(((0, 0), (4, 0), (5, 2), (2, 4), (-1, 2)))
    with pytest.raises(UnsupportedShape):
        line_stab(StabbingProblem(2, [penta], F(2)))
    diag = FlaggedConvexSet(((0, 0), (1, 0), (1, 1), (0, 1)), ((0, 2),))
    with pytest.raises(UnsupportedShape):
        line_stab(StabbingProblem(2, [diag], F(2)))


# --- falsification sampling ------------------------------------------------

def test_no_sampled_plane_beats_infeasible_verdicts():
    rng = random.Random(2024)
    reg = build_config_sets("regular", F(29, 10)).sets
    sing = build_config_sets("singular", F(4)).sets
    for _ in range(2000):
        coeffs = rand_plane(rng, 3)
        assert not all(meets_hyperplane(s, coeffs) for s in reg)
        assert not all(meets_hyperplane(s, coeffs) for s in sing)
    planar = build_planar_sets(F(29, 10)).sets
    for _ in range(2000):
        coeffs = rand_plane(rng, 2)
        assert not all(meets_hyperplane(s, coeffs) for s in planar)
