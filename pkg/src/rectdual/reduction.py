"""Hardness-gadget synthesis: grid3sat instances to rectangular partitions.

Each grid point becomes a square block of side 2^refinement_levels.  A
variable becomes a clockwise ring of four thin rectangles; the truth
value is which half of its rectangle each ring vertex occupies (head
cells = front = True).  A path becomes a chain of thin rectangles, every
consecutive pair meeting in an L-joint: a stub attached to the ring's
head corner (positive sign) or tail corner (negative sign), a short
zigzag out of the block, then one long rectangle per straight run of
the path, turning inside blocks.  The measured joint law drives the
whole reduction: an upstream vertex in its back window forces the
downstream vertex into its back window, while a front upstream leaves
the downstream free.  A clause becomes a 6x6 square with three thin
arms whose placement was found by exhaustive search: with all three arm
vertices pinned to their back windows the square's vertex cannot be
placed, with any arm on its head pixel it can.  All remaining cells are
unit pixels; a pixel's vertex is pinned at its center by the model
itself, which keeps every local law exact under composition.
"""

from dataclasses import dataclass
from itertools import permutations
import json

from .boxes import IntBox, validate_partition
from .embedding import Projection
from .grid3sat import Grid3SatInstance
from .solver import SAT, solve

__all__ = [
    "GadgetProfile",
    "HALF_INTEGRAL",
    "CONTINUOUS",
    "RoutingFailure",
    "InconsistentCycle",
    "UnsatisfiedClause",
    "CycleRect",
    "VariableGadget",
    "PathGadget",
    "ClauseGadget",
    "GadgetMap",
    "reduce",
    "assignment_from_projection",
    "projection_from_assignment",
    "check_gadget_map",
    "gadget_map_to_json",
    "gadget_map_from_json",
]


class RoutingFailure(RuntimeError):
    """Gadget placement failed; guards construction bugs."""


class InconsistentCycle(ValueError):
    """A variable ring mixes front and back halves; not an embedding."""


class UnsatisfiedClause(ValueError):
    def __init__(self, clause):
        super().__init__(f"assignment leaves clause {clause} unsatisfied")
        self.clause = clause


@dataclass(frozen=True)
class GadgetProfile:
    thin_min_length: int
    clause_arm_length: int
    refinement_levels: int


HALF_INTEGRAL = GadgetProfile(4, 4, 5)
CONTINUOUS = GadgetProfile(8, 14, 5)


# ---------------------------------------------------------------- geometry

_VEC = {"E": (1, 0), "N": (0, 1), "W": (-1, 0), "S": (0, -1)}
_OPP = {"E": "W", "W": "E", "N": "S", "S": "N"}
_PERP = {"E": ("N", "S"), "W": ("N", "S"), "N": ("E", "W"), "S": ("E", "W")}
_LETTER = {v: k for k, v in _VEC.items()}

# ring of four thin rectangles, block-local, clockwise:
# N heads E, E heads S, S heads W, W heads N
_RING = (
    (((12, 20), (20, 21)), "E"),
    (((20, 13), (21, 21)), "S"),
    (((13, 12), (21, 13)), "W"),
    (((12, 12), (13, 20)), "N"),
)
_RING_INDEX = {"N": 0, "E": 1, "S": 2, "W": 3}

# stub anchor (the fixed cross coordinate) per exit side and sign;
# + attaches at the ring rect's head corner, - at its tail corner
_STUB_SPOT = {
    ("N", 1): 19, ("N", -1): 12,
    ("E", 1): 13, ("E", -1): 20,
    ("S", 1): 13, ("S", -1): 20,
    ("W", 1): 19, ("W", -1): 12,
}
# first corridor turn direction per lane (picked for mutual clearance)
_CORR1_HEAD = {
    ("N", 1): "E", ("N", -1): "W",
    ("E", 1): "S", ("E", -1): "N",
    ("S", 1): "E", ("S", -1): "W",
    ("W", 1): "N", ("W", -1): "S",
}

# canonical cross offset after any transit turn; clear of every clause
# arm line and every exit channel by at least two cells
_TRANSIT_OFF = 25

# clause core, block-local: 6x6 square; arms keyed by (head cell
# touching the square, outward growth direction); one helper strip
_R0 = ((13, 13), (19, 19))
_ARM_SEEDS = (((19, 19), "N"), ((12, 12), "S"), ((19, 15), "E"))
_M_TAIL = (13, 12)  # helper grows east from here


def _step(cell, h, m=1):
    v = _VEC[h]
    return (cell[0] + v[0] * m, cell[1] + v[1] * m)


def _span(a, b):
    lo = (min(a[0], b[0]), min(a[1], b[1]))
    hi = (max(a[0], b[0]) + 1, max(a[1], b[1]) + 1)
    return (lo, hi)


def _cells(rect):
    (x0, y0), (x1, y1) = rect
    for x in range(x0, x1):
        for y in range(y0, y1):
            yield (x, y)


def _length(rect, h):
    (x0, y0), (x1, y1) = rect
    return x1 - x0 if h in ("E", "W") else y1 - y0


def _head_cell(rect, h):
    (x0, y0), (x1, y1) = rect
    return {"E": (x1 - 1, y0), "W": (x0, y0),
            "N": (x0, y1 - 1), "S": (x0, y0)}[h]


def _tail_cell(rect, h):
    return _head_cell(rect, _OPP[h])


def _off_point2(rect, h, k):
    # doubled point at head offset k; 1 = head cell center
    (x0, y0), (x1, y1) = rect
    if h == "E":
        return (2 * x1 - k, y0 + y1)
    if h == "W":
        return (2 * x0 + k, y0 + y1)
    if h == "N":
        return (x0 + x1, 2 * y1 - k)
    return (x0 + x1, 2 * y0 + k)


def _offset_of(rect, h, pt2):
    (x0, y0), (x1, y1) = rect
    if h == "E":
        return 2 * x1 - pt2[0]
    if h == "W":
        return pt2[0] - 2 * x0
    if h == "N":
        return 2 * y1 - pt2[1]
    return pt2[1] - 2 * y0


# ---------------------------------------------------------------- gadget map


@dataclass(frozen=True)
class CycleRect:
    box: int
    heading: str
    front2: tuple
    back2: tuple


@dataclass(frozen=True)
class VariableGadget:
    var: int
    point: tuple
    cycle: tuple  # four CycleRect in ring order N, E, S, W


@dataclass(frozen=True)
class PathGadget:
    path: int
    var: int
    clause: int
    sign: int
    boxes: tuple     # stub, corridor rectangles, final arm
    headings: tuple


@dataclass(frozen=True)
class ClauseGadget:
    clause: int
    point: tuple
    square: int
    arms: tuple          # three box ids, site order
    arm_headings: tuple  # heading of each arm (toward the square)
    arm_paths: tuple     # path id each arm receives
    helpers: tuple


@dataclass(frozen=True)
class GadgetMap:
    profile: GadgetProfile
    scale: int
    variables: tuple
    paths: tuple
    clauses: tuple


def gadget_map_to_json(gmap: GadgetMap) -> str:
    doc = {
        "profile": [gmap.profile.thin_min_length,
                    gmap.profile.clause_arm_length,
                    gmap.profile.refinement_levels],
        "scale": gmap.scale,
        "variables": [
            {"var": v.var, "point": list(v.point),
             "cycle": [{"box": c.box, "heading": c.heading,
                        "front2": list(c.front2), "back2": list(c.back2)}
                       for c in v.cycle]}
            for v in gmap.variables],
        "paths": [
            {"path": p.path, "var": p.var, "clause": p.clause,
             "sign": p.sign, "boxes": list(p.boxes),
             "headings": list(p.headings)}
            for p in gmap.paths],
        "clauses": [
            {"clause": c.clause, "point": list(c.point), "square": c.square,
             "arms": list(c.arms), "arm_headings": list(c.arm_headings),
             "arm_paths": list(c.arm_paths), "helpers": list(c.helpers)}
            for c in gmap.clauses],
    }
    return json.dumps(doc, indent=1, sort_keys=True)


def gadget_map_from_json(text: str) -> GadgetMap:
    doc = json.loads(text)
    return GadgetMap(
        profile=GadgetProfile(*doc["profile"]),
        scale=doc["scale"],
        variables=tuple(
            VariableGadget(v["var"], tuple(v["point"]), tuple(
                CycleRect(c["box"], c["heading"],
                          tuple(c["front2"]), tuple(c["back2"]))
                for c in v["cycle"]))
            for v in doc["variables"]),
        paths=tuple(
            PathGadget(p["path"], p["var"], p["clause"], p["sign"],
                       tuple(p["boxes"]), tuple(p["headings"]))
            for p in doc["paths"]),
        clauses=tuple(
            ClauseGadget(c["clause"], tuple(c["point"]), c["square"],
                         tuple(c["arms"]), tuple(c["arm_headings"]),
                         tuple(c["arm_paths"]), tuple(c["helpers"]))
            for c in doc["clauses"]),
    )


# ---------------------------------------------------------------- builder


class _Canvas:
    """Cell claims with tags, pairwise contact whitelist, rect registry."""

    def __init__(self, n):
        self.n = n
        self.occ = {}       # cell -> tag
        self.rects = {}     # tag -> (rect, heading or None)
        self.allowed = set()  # frozenset({tag_a, tag_b}) contacts

    def allow(self, a, b):
        self.allowed.add(frozenset((a, b)))

    def claim(self, rect, heading, tag, touch=()):
        """Claim the rect's cells; contact with tags outside `touch`
        (plus anything whitelisted later) raises."""
        (x0, y0), (x1, y1) = rect
        if x0 < 0 or y0 < 0 or x1 > self.n or y1 > self.n:
            raise RoutingFailure(f"{tag}: rect {rect} leaves the frame")
        cells = list(_cells(rect))
        for c in cells:
            prev = self.occ.get(c)
            if prev is not None and prev != tag:
                raise RoutingFailure(f"{tag} overlaps {prev} at {c}")
        for c in cells:
            self.occ[c] = tag
        if tag in self.rects:
            old, h = self.rects[tag]
            self.rects[tag] = (_span(
                (min(old[0][0], rect[0][0]), min(old[0][1], rect[0][1])),
                (max(old[1][0], rect[1][0]) - 1,
                 max(old[1][1], rect[1][1]) - 1)), heading or h)
        else:
            self.rects[tag] = (rect, heading)
        for t in touch:
            self.allow(tag, t)

    def release(self, cells):
        for c in cells:
            self.occ.pop(c, None)

    def check_contacts(self):
        """Every pair of touching claimed rectangles must be whitelisted."""
        for (x, y), tag in self.occ.items():
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    other = self.occ.get((x + dx, y + dy))
                    if other is not None and other != tag:
                        if frozenset((tag, other)) not in self.allowed:
                            raise RoutingFailure(
                                f"unplanned contact {tag} / {other}"
                                f" near {(x, y)}")


def _clause_core(base, rot, profile, s):
    """Clause square, arms and helper in global cells.  rot is 0 or 2
    (quarter turns break the gadget's law; the half turn was verified)."""
    t, arm_len = profile.thin_min_length, profile.clause_arm_length
    hi = s - 1

    def pmap(c):
        return c if rot == 0 else (2 * base[0] + hi - c[0],
                                   2 * base[1] + hi - c[1])

    def shift(c):
        return (base[0] + c[0], base[1] + c[1])

    sq = _span(pmap(shift(_R0[0])), pmap(shift((_R0[1][0] - 1, _R0[1][1] - 1))))
    arms = []
    for head, out in _ARM_SEEDS:
        d = out if rot == 0 else _OPP[out]
        h0 = pmap(shift(head))
        tail = _step(h0, d, arm_len - 1)
        arms.append((_span(h0, tail), d, _OPP[d], tail))
    m0 = shift(_M_TAIL)
    m1 = (m0[0] + t - 1, m0[1])
    helper = _span(pmap(m0), pmap(m1))
    return sq, arms, helper


def _route(canvas, region, h_in, face, target, min_len, own_tag, arm_tag):
    """Find reception legs from an entering corridor to a clause arm.

    target: (arm tail cell, allowed final headings).  Returns a list of
    (tail, head, heading) legs; the first starts at the block face and
    continues the open corridor rectangle."""
    T, finals = target
    budget = [8000]
    seen = set()

    def clear(cells, mine, leg_idx, near_arm_from=None):
        for k, c in enumerate(cells):
            if c in canvas.occ or c in mine:
                return False
            bx, by = c[0] // region.s, c[1] // region.s
            if (bx, by) not in region.blocks:
                return False
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    nb = (c[0] + dx, c[1] + dy)
                    t = canvas.occ.get(nb)
                    if t is not None:
                        if t == own_tag and leg_idx == 0:
                            continue
                        if t == arm_tag and near_arm_from is not None \
                                and k >= near_arm_from:
                            continue
                        return False
                    pm = mine.get(nb)
                    if pm is not None and pm < leg_idx - 1:
                        return False
        return True

    def dfs(tail, h, bends, leg_idx, mine, legs):
        if budget[0] <= 0:
            return None
        budget[0] -= 1
        for hf in finals:
            if hf != h:
                continue
            head = _step(T, hf, -1)
            v = _VEC[h]
            d = (head[0] - tail[0]) * v[0] + (head[1] - tail[1]) * v[1]
            if (head[0] - tail[0]) * v[1] != (head[1] - tail[1]) * v[0]:
                continue  # off this line
            if d < 0:
                continue
            m = d + 1
            if m < min_len and leg_idx > 0:
                continue
            cells = [_step(tail, h, i) for i in range(m)]
            if clear(cells, mine, leg_idx, near_arm_from=m - 2):
                return legs + [(tail, head, h)]
        if bends == 0:
            return None
        # greedy: turn toward the arm tail first
        perp = sorted(_PERP[h], key=lambda h2: (
            (T[0] - tail[0]) * _VEC[h2][0] + (T[1] - tail[1]) * _VEC[h2][1]
        ) <= 0)
        run = []
        m = 0
        while True:
            m += 1
            cell = _step(tail, h, m - 1)
            if not clear([cell], mine, leg_idx):
                break
            run.append(cell)
            if m > 3 * region.s:
                break
            if m < min_len and leg_idx > 0:
                continue
            bend = _step(tail, h, m)
            sub = dict(mine)
            for c in run:
                sub[c] = leg_idx
            for h2 in perp:
                if (bend, h2) in seen:
                    continue
                seen.add((bend, h2))
                got = dfs(bend, h2, bends - 1, leg_idx + 1, sub,
                          legs + [(tail, cell, h)])
                if got:
                    return got
        return None

    return dfs(face, h_in, 4, 0, {}, [])


class _Region:
    def __init__(self, s, blocks):
        self.s = s
        self.blocks = blocks


def _exit_zigzag(base, side, sign, t):
    """Stub and first turn of a lane.  Returns (stub rect, corr1 rect,
    corr1 heading, bend2 cell) in global cells."""
    spot = _STUB_SPOT[(side, sign)]
    if side == "N":
        stub = ((base[0] + spot, base[1] + 21),
                (base[0] + spot + 1, base[1] + 21 + t))
    elif side == "S":
        stub = ((base[0] + spot, base[1] + 12 - t),
                (base[0] + spot + 1, base[1] + 12))
    elif side == "E":
        stub = ((base[0] + 21, base[1] + spot),
                (base[0] + 21 + t, base[1] + spot + 1))
    else:
        stub = ((base[0] + 12 - t, base[1] + spot),
                (base[0] + 12, base[1] + spot + 1))
    bend1 = _step(_head_cell(stub, side), side)
    h1 = _CORR1_HEAD[(side, sign)]
    corr1 = _span(bend1, _step(bend1, h1, t - 1))
    bend2 = _step(bend1, h1, t)
    return stub, corr1, h1, bend2


def reduce(inst: Grid3SatInstance, profile: GadgetProfile = HALF_INTEGRAL):
    """Build the gadget partition for a grid3sat instance.

    Returns (partition, gadget map).  The half-integral profile's output
    is solver-faithful; the relaxed profile only guarantees a valid
    partition with its length constraints."""
    t = profile.thin_min_length
    arm_len = profile.clause_arm_length
    if profile.refinement_levels < 5:
        raise ValueError("need at least 5 refinement levels")
    if t < 4 or arm_len < t:
        raise ValueError("profile too thin for the joint law")
    s = 1 << profile.refinement_levels
    n = s * (inst.n + 1)
    canvas = _Canvas(n)

    def block(pt):
        return (pt[0] * s, pt[1] * s)

    # variable rings
    ring_tags = {}
    for v in sorted(inst.variables, key=lambda v: v.id):
        base = block(v.point)
        tags = []
        for i, (rect, h) in enumerate(_RING):
            g = ((base[0] + rect[0][0], base[1] + rect[0][1]),
                 (base[0] + rect[1][0], base[1] + rect[1][1]))
            tag = ("ring", v.id, i)
            canvas.claim(g, h, tag, touch=[("ring", v.id, (i - 1) % 4)])
            tags.append(tag)
        ring_tags[v.id] = tags

    # path chains: stub, first corridor turn, straight runs between turns
    chains = {}            # pid -> list of tags in flow order
    entries = {}           # cid -> list of (pid, face, heading)
    open_legs = {}         # pid -> (tag, tail, heading)
    vmap = {v.id: v for v in inst.variables}
    cmap = {c.id: c for c in inst.clauses}
    for p in sorted(inst.paths, key=lambda p: p.id):
        route = (vmap[p.var].point,) + p.points + (cmap[p.clause].point,)
        dirs = [_LETTER[(b[0] - a[0], b[1] - a[1])]
                for a, b in zip(route, route[1:])]
        side = dirs[0]
        base = block(vmap[p.var].point)
        stub, corr1, h1, bend2 = _exit_zigzag(base, side, p.sign, t)
        stag, c1tag = ("chain", p.id, 0), ("chain", p.id, 1)
        ring = ring_tags[p.var]
        touch = [ring[_RING_INDEX[side]]]
        if p.sign > 0:
            touch.append(ring[(_RING_INDEX[side] + 1) % 4])
        canvas.claim(stub, side, stag, touch=touch)
        canvas.claim(corr1, h1, c1tag, touch=[stag])
        chain = [stag, c1tag]
        tail, h = bend2, side
        for i in range(1, len(dirs)):
            if dirs[i] == dirs[i - 1]:
                continue
            b = block(route[i])
            axis = 0 if h in ("E", "W") else 1
            bend = [0, 0]
            bend[axis] = b[axis] + _TRANSIT_OFF
            bend[1 - axis] = tail[1 - axis]
            bend = tuple(bend)
            tag = ("chain", p.id, len(chain))
            leg = _span(tail, _step(bend, h, -1))
            if _length(leg, h) < t:
                raise RoutingFailure(f"path {p.id}: transit leg too short")
            canvas.claim(leg, h, tag, touch=[chain[-1]])
            chain.append(tag)
            tail, h = bend, dirs[i]
        # open leg up to the clause block's face
        cbase = block(cmap[p.clause].point)
        axis = 0 if h in ("E", "W") else 1
        face = [0, 0]
        face[1 - axis] = tail[1 - axis]
        face[axis] = cbase[axis] if _VEC[h][axis] > 0 else cbase[axis] + s - 1
        face = tuple(face)
        tag = ("chain", p.id, len(chain))
        outside = _span(tail, _step(face, h, -1))
        canvas.claim(outside, h, tag, touch=[chain[-1]])
        chain.append(tag)
        chains[p.id] = chain
        open_legs[p.id] = (tag, tail, h)
        entries.setdefault(p.clause, []).append((p.id, face, h))

    # interior grid points free of terminals and path vertices may host
    # reception detours
    used_pts = {v.point for v in inst.variables}
    used_pts |= {c.point for c in inst.clauses}
    for p in inst.paths:
        used_pts.update(p.points)

    clause_rec = {}
    for c in sorted(inst.clauses, key=lambda c: c.id):
        base = block(c.point)
        ent = sorted(entries[c.id], key=lambda e: c.paths.index(e[0]))
        sides = {}
        for pid, face, h in ent:
            sides[pid] = _OPP[h]
        blocks = {c.point}
        for d in _VEC.values():
            q = (c.point[0] + d[0], c.point[1] + d[1])
            if 0 <= q[0] <= inst.n and 0 <= q[1] <= inst.n \
                    and q not in used_pts:
                blocks.add(q)
        rotations = [0] if profile is HALF_INTEGRAL or \
            (profile.thin_min_length, profile.clause_arm_length) == (4, 4) \
            else [0, 2]
        if len(rotations) == 2:
            def match(rot):
                _, arms, _ = _clause_core(base, rot, profile, s)
                outs = {a[1] for a in arms}
                return -len(outs & set(sides.values()))
            rotations.sort(key=match)
        placed = None
        for rot in rotations:
            sq, arms, helper = _clause_core(base, rot, profile, s)
            sq_tag, m_tag = ("square", c.id), ("helper", c.id)
            arm_tags = [("arm", c.id, k) for k in range(3)]
            core = [(sq, None, sq_tag), (helper, "E", m_tag)] + \
                   [(arms[k][0], arms[k][2], arm_tags[k]) for k in range(3)]
            try:
                for rect, h, tag in core:
                    others = [tg for _, _, tg in core if tg != tag]
                    canvas.claim(rect, h, tag, touch=others)
            except RoutingFailure:
                for _, _, tag in core:
                    if tag in canvas.rects:
                        canvas.release(_cells(canvas.rects.pop(tag)[0]))
                continue
            perms = sorted(
                permutations(range(3)),
                key=lambda pm: (-sum(arms[pm[i]][1] == sides[ent[i][0]]
                                     for i in range(3)), pm))
            for pm in perms:
                claimed = []
                routed = {}
                ok = True
                for i, (pid, face, h_in) in enumerate(ent):
                    arm_rect, out, arm_h, arm_tail = arms[pm[i]]
                    d_in = _VEC[_OPP[h_in]]
                    own = (c.point[0] + d_in[0], c.point[1] + d_in[1])
                    region = _Region(s, blocks | {own})
                    finals = _PERP[out]
                    open_tag = open_legs[pid][0]
                    legs = _route(canvas, region, h_in, face,
                                  (arm_tail, finals), t,
                                  open_tag, arm_tags[pm[i]])
                    if not legs:
                        ok = False
                        break
                    new_tags = []
                    for j, (lt, lh, lhead) in enumerate(legs):
                        rect = _span(lt, lh)
                        if j == 0:
                            tag = open_tag
                        else:
                            tag = ("chain", pid, len(chains[pid]) + j - 1)
                        before = set(_cells(rect)) - set(canvas.occ)
                        old = canvas.rects.get(tag)
                        prev = new_tags[-1] if new_tags else None
                        touch = [prev] if prev else []
                        if j == len(legs) - 1:
                            touch.append(arm_tags[pm[i]])
                        canvas.claim(rect, lhead, tag, touch=touch)
                        claimed.append((tag, before, old))
                        new_tags.append(tag)
                    routed[pid] = (new_tags[1:], arm_tags[pm[i]], pm[i])
                if ok:
                    placed = (pm, routed, arm_tags, sq_tag, m_tag, arms)
                    break
                for tag, cells, old in reversed(claimed):
                    canvas.release(cells)
                    if old is None:
                        canvas.rects.pop(tag, None)
                    else:
                        canvas.rects[tag] = old
            if placed:
                break
            for _, _, tag in core:
                canvas.release(_cells(canvas.rects.pop(tag)[0]))
        if not placed:
            raise RoutingFailure(f"clause {c.id}: no reception layout found")
        pm, routed, arm_tags, sq_tag, m_tag, arms = placed
        for pid, (extra, arm_tag, k) in routed.items():
            chains[pid].extend(extra)
            chains[pid].append(arm_tag)
        order = {pid: routed[pid][2] for pid in routed}
        clause_rec[c.id] = (sq_tag, arm_tags, m_tag, order,
                            [a[2] for a in arms])

    # freeze box ids: rings, clause cores, then chains; pixels last
    tag_order = []
    for v in sorted(inst.variables, key=lambda v: v.id):
        tag_order.extend(ring_tags[v.id])
    for c in sorted(inst.clauses, key=lambda c: c.id):
        sq_tag, arm_tags, m_tag, _, _ = clause_rec[c.id]
        tag_order.append(sq_tag)
        tag_order.extend(arm_tags)
        tag_order.append(m_tag)
    for p in sorted(inst.paths, key=lambda p: p.id):
        for tag in chains[p.id]:
            if tag[0] == "chain":
                tag_order.append(tag)
    ids = {tag: i for i, tag in enumerate(tag_order)}

    boxes = []
    for tag in tag_order:
        rect, h = canvas.rects[tag]
        boxes.append(IntBox(*rect))
        L = _length(rect, h) if h else None
        if h and min(boxes[-1].sides()) == 1 and L < t:
            raise RoutingFailure(f"{tag}: thin length {L} < {t}")
        if tag[0] == "arm" and L != arm_len:
            raise RoutingFailure(f"{tag}: arm length {L} != {arm_len}")
    covered = set(canvas.occ)
    for x in range(n):
        for y in range(n):
            if (x, y) not in covered:
                boxes.append(IntBox((x, y), (x + 1, y + 1)))
    p_out = validate_partition(tuple(boxes), 2, n)
    canvas.check_contacts()

    variables = []
    for v in sorted(inst.variables, key=lambda v: v.id):
        cyc = []
        for tag in ring_tags[v.id]:
            rect, h = canvas.rects[tag]
            L = _length(rect, h)
            cyc.append(CycleRect(ids[tag], h, _off_point2(rect, h, 1),
                                 _off_point2(rect, h, 2 * L - 1)))
        variables.append(VariableGadget(v.id, v.point, tuple(cyc)))
    paths = []
    for p in sorted(inst.paths, key=lambda p: p.id):
        bids, heads = [], []
        for tag in chains[p.id]:
            bids.append(ids[tag])
            heads.append(canvas.rects[tag][1])
        paths.append(PathGadget(p.id, p.var, p.clause, p.sign,
                                tuple(bids), tuple(heads)))
    clauses = []
    for c in sorted(inst.clauses, key=lambda c: c.id):
        sq_tag, arm_tags, m_tag, order, arm_heads = clause_rec[c.id]
        arm_paths = [None, None, None]
        for pid, k in order.items():
            arm_paths[k] = pid
        clauses.append(ClauseGadget(
            c.id, c.point, ids[sq_tag],
            tuple(ids[tg] for tg in arm_tags), tuple(arm_heads),
            tuple(arm_paths), (ids[m_tag],)))
    gmap = GadgetMap(profile, s, tuple(variables), tuple(paths),
                     tuple(clauses))
    check_gadget_map(p_out, gmap)
    return p_out, gmap


# ----------------------------------------------------- map sanity checking


def _as_rect(box):
    return (tuple(box.lo), tuple(box.hi))


def check_gadget_map(p, gmap: GadgetMap):
    """Geometric invariants: mapped ids exist, chains are L-joint chains
    of thin rectangles with the bulge pixel present, arms have the exact
    profile length."""
    t = gmap.profile.thin_min_length
    nboxes = len(p.boxes)

    def rect_of(i):
        if not 0 <= i < nboxes:
            raise ValueError(f"box id {i} out of range")
        return _as_rect(p.boxes[i])

    for v in gmap.variables:
        if len(v.cycle) != 4:
            raise ValueError(f"variable {v.var}: ring is not four rects")
        for c in v.cycle:
            rect = rect_of(c.box)
            L = _length(rect, c.heading)
            if min(p.boxes[c.box].sides()) != 1 or L < t:
                raise ValueError(f"variable {v.var}: ring rect not thin")
            if c.front2 != _off_point2(rect, c.heading, 1):
                raise ValueError(f"variable {v.var}: bad front marker")
            if c.back2 != _off_point2(rect, c.heading, 2 * L - 1):
                raise ValueError(f"variable {v.var}: bad back marker")
    for pg in gmap.paths:
        rects = [rect_of(b) for b in pg.boxes]
        for rect, h in zip(rects, pg.headings):
            box = IntBox(*rect)
            if min(box.sides()) != 1 or _length(rect, h) < t:
                raise ValueError(f"path {pg.path}: rect not thin enough")
        for (ra, ha), (rb, hb) in zip(zip(rects, pg.headings),
                                      zip(rects[1:], pg.headings[1:])):
            if hb in (ha, _OPP[ha]):
                raise ValueError(f"path {pg.path}: consecutive rects "
                                 "do not turn")
            if _tail_cell(rb, hb) != _step(_head_cell(ra, ha), ha):
                raise ValueError(f"path {pg.path}: rects not L-joined")
            bulge = _step(_head_cell(ra, ha), hb)
            owner = p.owner_of(bulge)
            if owner < 0 or p.boxes[owner].volume() != 1:
                raise ValueError(f"path {pg.path}: missing bulge pixel "
                                 f"at {bulge}")
    for cg in gmap.clauses:
        sq = p.boxes[cg.square]
        if sq.sides() != (6, 6):
            raise ValueError(f"clause {cg.clause}: square is {sq.sides()}")
        for b, h in zip(cg.arms, cg.arm_headings):
            rect = rect_of(b)
            if _length(rect, h) != gmap.profile.clause_arm_length:
                raise ValueError(f"clause {cg.clause}: arm length off")
            hx, hy = _head_cell(rect, h)
            if not any(p.owner_of((hx + dx, hy + dy)) == cg.square
                       for dx in (-1, 0, 1) for dy in (-1, 0, 1)):
                raise ValueError(f"clause {cg.clause}: arm does not end "
                                 "at the square")
    return True


# ------------------------------------------------- assignment <-> projection


def _points_of(proj):
    return proj.points2 if hasattr(proj, "points2") else tuple(proj)


def assignment_from_projection(proj, gmap: GadgetMap) -> dict:
    """Read each ring's half; front = True.  Raises InconsistentCycle on
    a ring that mixes halves or sits dead center."""
    pts = _points_of(proj)
    out = {}
    for v in gmap.variables:
        halves = set()
        for c in v.cycle:
            axis = 0 if c.front2[0] != c.back2[0] else 1
            pt = pts[c.box]
            off = 1 + abs(pt[axis] - c.front2[axis])
            L = (abs(c.front2[axis] - c.back2[axis]) + 2) // 2
            if off == L:
                raise InconsistentCycle(f"variable {v.var}: ring vertex "
                                        "at dead center")
            halves.add(off < L)
        if len(halves) != 1:
            raise InconsistentCycle(f"variable {v.var}: ring mixes halves")
        out[v.var] = halves.pop()
    return out


def projection_from_assignment(assignment, p, gmap: GadgetMap) -> Projection:
    """Pin gadget boxes to the windows the assignment dictates and let
    constraint search settle the clause squares; the result is verified."""
    lit = {}
    for pg in gmap.paths:
        val = bool(assignment[pg.var])
        lit[pg.path] = val if pg.sign > 0 else not val
    for cg in gmap.clauses:
        if not any(lit[pid] for pid in cg.arm_paths):
            raise UnsatisfiedClause(cg.clause)

    pins = {}

    def window(box, h, back):
        rect = _as_rect(box)
        L = _length(rect, h)
        offs = range(2 * L - 3, 2 * L) if back else (1,)
        return [_off_point2(rect, h, k) for k in offs]

    for v in gmap.variables:
        front = bool(assignment[v.var])
        for c in v.cycle:
            pins[c.box] = window(p.boxes[c.box], c.heading, not front)
    for pg in gmap.paths:
        true_lane = lit[pg.path]
        for j, (b, h) in enumerate(zip(pg.boxes, pg.headings)):
            if true_lane:
                pins[b] = window(p.boxes[b], h, False)
            elif j == 0:
                rect = _as_rect(p.boxes[b])
                L = _length(rect, h)
                pins[b] = [_off_point2(rect, h, 2 * L - 1)]
            else:
                pins[b] = window(p.boxes[b], h, True)
    res = solve(p, pins=pins)
    if res.status != SAT:
        raise RoutingFailure("pinned completion failed; gadget bug")
    return res.projection
