"""Knife-only cake constructions, each logging into a :class:`Trace`.

* odd closed chain of kissing cakes -> a diameter (bisecting cut)
* two diameters -> the center
* marked center -> 4, 3 or 6 equal pieces via Steiner's parallel/midpoint tricks
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import (
    ADegenerate,
    BadMidpoint,
    CapabilityMissing,
    DegenerateStart,
    DegenerateTrapezoid,
    EvenChain,
    NotAKissingPoint,
    NotParallel,
    PointNotOnCircle,
    RCollinear,
    SceneError,
)
from .geometry import Circle, Line, Point, orientation
from .scene import Scene, rational_unit
from .trace import Trace

MAX_RETRIES = 16


@dataclass(frozen=True, eq=False)
class Cut:
    """A full-depth cut: the segment ``p``-``q`` through cake ``cake``."""

    p: Point
    q: Point
    cake: int


@dataclass(eq=False)
class Construction:
    scene: Scene
    trace: Trace
    cuts: tuple[Cut, ...] = ()
    points: dict[str, Point] = field(default_factory=dict)


# -- chain traversal -----------------------------------------------------------


def _chain_order(scene: Scene, target: int) -> list[int]:
    if scene.topology != "closed_chain":
        raise SceneError("construction needs a closed chain of kissing cakes")
    ids = [c.id for c in scene.cakes]
    if target not in ids:
        raise SceneError(f"no cake {target} in the chain")
    k = ids.index(target)
    return ids[k:] + ids[:k]


def pass_kissing(trace: Trace, p: Point, s: Point, c2: Circle) -> Point:
    """Pass ``p`` through the kissing point ``s`` onto cake ``c2``."""
    scene = trace.scene
    other = None
    for i, j, kp in scene.kissing_points:
        if c2.id in (i, j) and kp == s:
            other = j if i == c2.id else i
            s = trace.kiss(i)
            break
    if other is None:
        raise NotAKissingPoint(f"point is not a recorded kissing point of cake {c2.id}")
    if not scene.cake(other).on_rim(p):
        raise PointNotOnCircle(f"point is not on the rim of cake {other}")
    if p == s:
        return s
    line = trace.join(p, s)
    return trace.intersect(line, c2.id, exclude=s)[0]


def chain_walk(trace: Trace, scene: Scene, p1: Point, target: int = 1) -> list[Point]:
    """``[P1, P2, ..., Pn, Q]`` for the closed chain starting at cake ``target``."""
    order = _chain_order(scene, target)
    pts = [p1]
    p = p1
    for m, cid in enumerate(order):
        nxt = order[(m + 1) % len(order)]
        s = scene.kissing_point(cid, nxt)
        p = pass_kissing(trace, p, s, scene.cake(nxt))
        pts.append(p)
    return pts


def chain_traverse(trace: Trace, scene: Scene, p1: Point, target: int = 1) -> Point:
    """Walk ``p1`` once around the chain; returns the point ``Q`` on the start cake."""
    return chain_walk(trace, scene, p1, target)[-1]


def _first_kiss(scene: Scene, order: list[int]) -> Point:
    return scene.kissing_point(order[0], order[1])


def bisect_cake(scene: Scene, target: int = 1, trace: Optional[Trace] = None,
                p1: Optional[Point] = None) -> Construction:
    """Bisect cake ``target`` of an odd chain; starts at its kissing point by default."""
    order = _chain_order(scene, target)
    if len(order) % 2 == 0:
        raise EvenChain(f"bisection needs an odd number of cakes, chain has {len(order)}")
    trace = trace if trace is not None else Trace(scene)
    if p1 is None:
        p1 = _first_kiss(scene, order)
        trace.ref(p1)
    walk = chain_walk(trace, scene, p1, target)
    q = walk[-1]
    trace.cut(p1, q, target, label="bisect")
    trace.emit_scratches()
    points = {f"P{i + 1}": p for i, p in enumerate(walk[:-1])}
    points["Q"] = q
    return Construction(scene, trace, (Cut(p1, q, target),), points)


def find_center(scene: Scene, target: int = 1, seed: int = 0,
                trace: Optional[Trace] = None) -> Construction:
    """Meet two chain diameters of cake ``target``; marks its center."""
    order = _chain_order(scene, target)
    if len(order) % 2 == 0:
        raise EvenChain(f"center recovery needs an odd chain, got {len(order)} cakes")
    trace = trace if trace is not None else Trace(scene)
    cake = scene.cake(target)
    rng = random.Random(seed)
    p1 = _first_kiss(scene, order)
    trace.ref(p1)
    q1 = chain_traverse(trace, scene, p1, target)
    d1 = trace.join(p1, q1)
    for attempt in range(MAX_RETRIES):
        p2 = _rim_point(cake, rng.uniform(0, 2 * math.pi))
        if p2 == p1 or p2 == q1:
            continue
        trace.choose(target, p2, label="P1'", note=f"attempt {attempt}")
        q2 = chain_traverse(trace, scene, p2, target)
        d2 = trace.join(p2, q2)
        if d2 == d1:
            continue
        center = trace.meet(d1, d2, label=f"Z{target}")
        trace.set_center(target, center)
        trace.emit_scratches()
        return Construction(scene.with_marked(target), trace, (),
                            {"P1": p1, "Q1": q1, "P2": p2, "Q2": q2, "center": center})
    raise DegenerateStart("could not find a second, distinct diameter")


# -- Steiner's tricks ------------------------------------------------------------


def steiner_parallel(trace: Trace, p: Point, q: Point, z: Point, r: Point, a: Point) -> Line:
    """Line through ``a`` parallel to ``pq``, given the midpoint ``z`` of ``pq``."""
    if (p + q) != z.scale(2):
        raise BadMidpoint("Z is not the midpoint of PQ")
    if orientation(p, q, r) == 0:
        raise RCollinear("R lies on the line PQ")
    if a == p or a == r or orientation(p, r, a) != 0 or (a - p).dot(r - a).sign() <= 0:
        raise ADegenerate("A must lie strictly inside the segment PR")
    b = trace.meet(trace.join(q, a), trace.join(z, r), label="B")
    c = trace.meet(trace.join(p, b), trace.join(q, r), label="C")
    return trace.join(a, c)


def steiner_midpoint(trace: Trace, p: Point, q: Point, a: Point, c: Point) -> Point:
    """Midpoint of ``pq`` from a parallel segment ``ac``."""
    if a == c:
        raise DegenerateTrapezoid("A and C coincide")
    if orientation(p, q, a) == 0 or orientation(p, q, c) == 0:
        raise DegenerateTrapezoid("A or C lies on the line PQ")
    if (c - a).cross(q - p).sign() != 0:
        raise NotParallel("AC is not parallel to PQ")
    if (a - p).cross(c - q).sign() == 0 or (c - p).cross(a - q).sign() == 0:
        raise DegenerateTrapezoid("PA/QC or PC/QA are parallel")
    r = trace.meet(trace.join(p, a), trace.join(q, c), label="R")
    b = trace.meet(trace.join(p, c), trace.join(q, a), label="B")
    return trace.meet(trace.join(r, b), trace.join(p, q), label="Z")


# -- marked-center divisions -------------------------------------------------------


def _rim_point(cake: Circle, theta: float, max_den: int = 4096) -> Point:
    c, s = rational_unit(theta, max_den)
    return cake.center + Point(c, s).scale(cake.radius)


def _angle(cake: Circle, p: Point) -> float:
    x, y = (p - cake.center).approx()
    return math.atan2(y, x)


class _Chooser:
    """Seeded rim-point choices with retry on exact degeneracy."""

    def __init__(self, trace: Trace, k: int, seed: int, fixed: Optional[Mapping[str, Point]]) -> None:
        self.trace = trace
        self.k = k
        self.cake = trace.scene.cake(k)
        self.rng = random.Random(seed)
        self.fixed = dict(fixed or {})

    def pick(self, label: str, lo: float, hi: float, ok=lambda p: True) -> Point:
        if label in self.fixed:
            p = self.fixed[label]
            if not ok(p):
                raise ADegenerate(f"fixed point {label} is degenerate for this construction")
            return self.trace.choose(self.k, p, label=label, note="fixed")
        span = hi - lo
        for attempt in range(MAX_RETRIES):
            p = _rim_point(self.cake, lo + span * self.rng.uniform(0.1, 0.9))
            if ok(p):
                return self.trace.choose(self.k, p, label=label, note=f"attempt {attempt}")
        raise DegenerateStart(f"no admissible rim point for {label} after {MAX_RETRIES} tries")


def _require_center(trace: Trace, k: int) -> Point:
    try:
        return trace.center(k)
    except CapabilityMissing:
        raise CapabilityMissing(f"cake {k} needs a marked center for this construction") from None


def _quarter_points(trace: Trace, k: int, seed: int, fixed) -> dict[str, Point]:
    o = _require_center(trace, k)
    ch = _Chooser(trace, k, seed, fixed)
    phi = ch.rng.uniform(-math.pi, math.pi)
    p = ch.pick("P", phi - 0.01, phi + 0.01)
    phi = _angle(ch.cake, p)
    diam = trace.join(p, o)
    q = trace.intersect(diam, k, exclude=p, label="Q")[0]
    r = ch.pick("R", phi + 0.2 * math.pi, phi + 0.8 * math.pi,
                ok=lambda x: orientation(p, q, x) != 0)
    chord = trace.join(p, r)
    phr = _angle(ch.cake, r)
    if phr < phi:
        phr += 2 * math.pi
    s = ch.pick("S", phi, phr, ok=lambda x: orientation(p, r, x) != 0)
    side = orientation(p, r, s)
    t = ch.pick("T", phr, phi + 2 * math.pi, ok=lambda x: orientation(p, r, x) == -side)
    a = trace.meet(chord, trace.join(s, t), label="A")
    ac = steiner_parallel(trace, p, q, o, r, a)
    c = trace.labeled("C")
    b = trace.labeled("B")
    x1, x2 = trace.intersect(ac, k)
    # A' is the rim point on A's side of C
    a_, c_ = (x1, x2) if (x1 - c).dot(a - c).sign() > 0 else (x2, x1)
    b_ = trace.meet(trace.join(p, c_), trace.join(q, a_), label="B'")
    perp = trace.join(o, b_)
    u, v = trace.intersect(perp, k, label="U")
    return {"O": o, "P": p, "Q": q, "R": r, "S": s, "T": t, "A": a, "B": b, "C": c,
            "A'": a_, "C'": c_, "B'": b_, "U": u, "V": v, "_diam": diam, "_perp": perp}


def quarter_cuts(scene: Scene, seed: int = 0, target: int = 1, trace: Optional[Trace] = None,
                 points: Optional[Mapping[str, Point]] = None) -> Construction:
    """Two perpendicular diameters of a cake with marked center."""
    trace = trace if trace is not None else Trace(scene)
    pts = _quarter_points(trace, target, seed, points)
    trace.cut(pts["P"], pts["Q"], target, line=pts.pop("_diam"), label="cut")
    trace.cut(pts["U"], pts["V"], target, line=pts.pop("_perp"), label="cut")
    trace.emit_scratches()
    cuts = (Cut(pts["P"], pts["Q"], target), Cut(pts["U"], pts["V"], target))
    return Construction(scene, trace, cuts, pts)


def _bisect_side(trace: Trace, ch: _Chooser, label: str, p: Point, q: Point,
                 a_end: Point, c_end: Point, lo: float, hi: float) -> Point:
    """Midpoint of ``pq`` using the parallel chord ``a_end c_end`` and a rim point
    on the far arc."""
    par = trace.join(a_end, c_end)
    m = ch.pick(label, lo, hi, ok=lambda x: orientation(a_end, c_end, x) != orientation(a_end, c_end, p))
    a = trace.meet(trace.join(p, m), par)
    c = trace.meet(trace.join(q, m), par)
    return steiner_midpoint(trace, p, q, a, c)


def _third_points(trace: Trace, k: int, seed: int, fixed) -> dict[str, Point]:
    pts = _quarter_points(trace, k, seed, fixed)
    pts.pop("_diam")
    pts.pop("_perp")
    o, p, q = pts["O"], pts["P"], pts["Q"]
    u, v = pts["U"], pts["V"]
    p2, q2 = (u, v) if (q - o).cross(u - o).sign() > 0 else (v, u)
    ch = _Chooser(trace, k, seed + 7_777, fixed)
    cake = ch.cake
    aq = _angle(cake, q)
    x1 = _bisect_side(trace, ch, "R2", p, q2, p2, q, aq, aq + math.pi / 2)
    x2 = _bisect_side(trace, ch, "M", q, q2, p, p2, aq + math.pi / 2, aq + math.pi)
    w1, w2 = trace.intersect(trace.join(x1, x2), k, label="W")
    pts.update({"P'": p2, "Q'": q2, "X1": x1, "X2": x2, "W1": w1, "W2": w2})
    return pts


def third_cuts(scene: Scene, seed: int = 0, target: int = 1, trace: Optional[Trace] = None,
               points: Optional[Mapping[str, Point]] = None) -> Construction:
    """Three radial cuts at 120 degrees."""
    trace = trace if trace is not None else Trace(scene)
    pts = _third_points(trace, target, seed, points)
    o = pts["O"]
    cuts = []
    for name in ("P'", "W1", "W2"):
        trace.cut(o, pts[name], target, label="cut")
        cuts.append(Cut(o, pts[name], target))
    trace.emit_scratches()
    return Construction(scene, trace, tuple(cuts), pts)


def sixth_cuts(scene: Scene, seed: int = 0, target: int = 1, trace: Optional[Trace] = None,
               points: Optional[Mapping[str, Point]] = None) -> Construction:
    """Three diameters at 60 degrees: the third cuts extended through the center."""
    trace = trace if trace is not None else Trace(scene)
    pts = _third_points(trace, target, seed, points)
    o = pts["O"]
    cuts = []
    for name in ("P'", "W1", "W2"):
        x = pts[name]
        line = trace.join(x, o)
        y = trace.intersect(line, target, exclude=x, label=f"{name}*")[0]
        pts[f"{name}*"] = y
        trace.cut(x, y, target, line=line, label="cut")
        cuts.append(Cut(x, y, target))
    trace.emit_scratches()
    return Construction(scene, trace, tuple(cuts), pts)


def diameter_cut(scene: Scene, seed: int = 0, target: int = 1,
                 trace: Optional[Trace] = None) -> Construction:
    """Halve a cake with marked center: any rim point joined through the center."""
    trace = trace if trace is not None else Trace(scene)
    o = _require_center(trace, target)
    ch = _Chooser(trace, target, seed, None)
    phi = ch.rng.uniform(-math.pi, math.pi)
    p = ch.pick("P", phi - 0.01, phi + 0.01)
    line = trace.join(p, o)
    q = trace.intersect(line, target, exclude=p, label="Q")[0]
    trace.cut(p, q, target, line=line, label="cut")
    trace.emit_scratches()
    return Construction(scene, trace, (Cut(p, q, target),), {"O": o, "P": p, "Q": q})


def divide(scene: Scene, pieces: int, seed: int = 0, target: int = 1,
           trace: Optional[Trace] = None) -> Construction:
    funcs = {2: diameter_cut, 3: third_cuts, 4: quarter_cuts, 6: sixth_cuts}
    if pieces not in funcs:
        raise ValueError(f"unsupported piece count {pieces}; supported: 2, 3, 4, 6")
    return funcs[pieces](scene, seed=seed, target=target, trace=trace)


__all__ = [
    "Cut",
    "Construction",
    "pass_kissing",
    "chain_walk",
    "chain_traverse",
    "bisect_cake",
    "find_center",
    "steiner_parallel",
    "steiner_midpoint",
    "quarter_cuts",
    "third_cuts",
    "sixth_cuts",
    "diameter_cut",
    "divide",
]
