"""Physical cake scenes: closed chains of kissing cakes and single cakes.

Chain placement keeps every tangency exact.  Centers ``Z1 .. Z(n-1)`` are laid
out along edges with *rational* unit directions (points on the unit circle from
the rational parametrization), so they stay rational whenever the radii are.
The last center is the exact intersection of two distance circles, which costs
a single square root.  Float heuristics only pick the directions.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq, minimize

from .errors import ChainInfeasible, SceneError, TooFewCircles
from .exactnum import CR, ConstructibleReal, sqrt
from .geometry import Circle, Point, are_kissing

SCHEMA = "cakecut.scene/1"

# denominators tried, in order, when rationalizing float edge directions
_DIRECTION_DENOMINATORS = (16, 256, 4096, 65536)


@dataclass(frozen=True, eq=False)
class Scene:
    cakes: tuple[Circle, ...]
    kissing_points: tuple[tuple[int, int, Point], ...]
    topology: str

    @property
    def n(self) -> int:
        return len(self.cakes)

    def cake(self, k: int) -> Circle:
        if not 1 <= k <= len(self.cakes):
            raise SceneError(f"no cake {k} (scene has {len(self.cakes)})")
        return self.cakes[k - 1]

    def kissing_point(self, i: int, j: int) -> Optional[Point]:
        for a, b, s in self.kissing_points:
            if (a, b) == (i, j) or (a, b) == (j, i):
                return s
        return None

    def with_marked(self, k: int, marked: bool = True) -> Scene:
        cakes = tuple(c.with_marked(marked) if c.id == k else c for c in self.cakes)
        return Scene(cakes, self.kissing_points, self.topology)

    @classmethod
    def chain_from_centers(cls, centers: Sequence[Point], radii: Sequence) -> Scene:
        """Hand-built chain; kissing points come from the tangency formula
        without checking that the cakes actually touch."""
        cakes = tuple(Circle(z, _as_cr(r), False, i + 1) for i, (z, r) in enumerate(zip(centers, radii)))
        return cls(cakes, _tangency_points(cakes), "closed_chain")

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "topology": self.topology,
            "cakes": [
                {
                    "id": c.id,
                    "cx": repr(c.center.x.to_float()),
                    "cy": repr(c.center.y.to_float()),
                    "r": repr(c.radius.to_float()),
                    "center_marked": c.center_marked,
                    "exact": {"cx": c.center.x.dump(), "cy": c.center.y.dump(), "r": c.radius.dump()},
                }
                for c in self.cakes
            ],
            "kissing_points": [
                {
                    "i": i,
                    "j": j,
                    "x": repr(s.x.to_float()),
                    "y": repr(s.y.to_float()),
                    "exact": {"x": s.x.dump(), "y": s.y.dump()},
                }
                for i, j, s in self.kissing_points
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, doc: dict) -> Scene:
        if doc.get("schema") != SCHEMA:
            raise SceneError(f"unsupported scene schema {doc.get('schema')!r}")
        try:
            cakes = tuple(
                Circle(
                    Point(CR.load(c["exact"]["cx"]), CR.load(c["exact"]["cy"])),
                    CR.load(c["exact"]["r"]),
                    bool(c["center_marked"]),
                    int(c["id"]),
                )
                for c in doc["cakes"]
            )
            kisses = tuple(
                (int(k["i"]), int(k["j"]), Point(CR.load(k["exact"]["x"]), CR.load(k["exact"]["y"])))
                for k in doc["kissing_points"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SceneError(f"malformed scene document: {exc}") from exc
        return cls(cakes, kisses, doc["topology"])


def _as_cr(r) -> ConstructibleReal:
    if isinstance(r, ConstructibleReal):
        return r
    if isinstance(r, str):
        return CR(r)
    return CR(Fraction(r))


def _tangency_points(cakes: Sequence[Circle]) -> tuple[tuple[int, int, Point], ...]:
    out = []
    n = len(cakes)
    for i in range(n):
        ci, cj = cakes[i], cakes[(i + 1) % n]
        s = ci.center + (cj.center - ci.center).scale(ci.radius / (ci.radius + cj.radius))
        out.append((ci.id, cj.id, s))
    return tuple(out)


def build_single_cake(radius, center_marked: bool = True) -> Scene:
    r = _as_cr(radius)
    if r.sign() <= 0:
        raise SceneError("cake radius must be positive")
    return Scene((Circle(Point(0, 0), r, center_marked, 1),), (), "single")


def validate_scene(scene: Scene) -> list[str]:
    """Every violated scene invariant, as human-readable messages."""
    problems: list[str] = []
    cakes = scene.cakes
    n = len(cakes)
    if scene.topology == "single":
        if n != 1:
            problems.append(f"single-cake scene holds {n} cakes")
        return problems
    if scene.topology != "closed_chain":
        return [f"unknown topology {scene.topology!r}"]
    if n < 3:
        problems.append(f"closed chain needs at least 3 cakes, got {n}")
    for idx in range(n):
        ci, cj = cakes[idx], cakes[(idx + 1) % n]
        recorded = scene.kissing_point(ci.id, cj.id)
        actual = are_kissing(ci, cj)
        if actual is None:
            problems.append(f"pair ({ci.id},{cj.id}) not kissing")
        elif recorded is None:
            problems.append(f"pair ({ci.id},{cj.id}) has no recorded kissing point")
        elif recorded != actual:
            problems.append(f"pair ({ci.id},{cj.id}) recorded kissing point is wrong")
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            ci, cj = cakes[i], cakes[j]
            rsum = ci.radius + cj.radius
            if ((cj.center - ci.center).norm2() - rsum * rsum).sign() <= 0:
                problems.append(f"non-consecutive pair ({ci.id},{cj.id}) overlaps")
    return problems


# -- chain placement ---------------------------------------------------------


def _cyclic_directions(lengths: Sequence[float]) -> list[float]:
    """Edge directions of the convex cyclic polygon with the given sides."""
    n = len(lengths)
    big = max(range(n), key=lambda i: lengths[i])
    L = lengths[big]
    lo = L / 2
    hi = 10 * sum(lengths)

    def central(l: float, R: float) -> float:
        return 2 * math.asin(min(1.0, l / (2 * R)))

    def inside(R: float) -> float:
        return sum(central(l, R) for l in lengths) - 2 * math.pi

    if inside(lo) >= 0:
        R = brentq(inside, lo, hi) if inside(lo) > 0 else lo
        angles = [central(l, R) for l in lengths]
    else:
        def outside(R: float) -> float:
            return sum(central(l, R) for i, l in enumerate(lengths) if i != big) - central(L, R)

        R = brentq(outside, lo * (1 + 1e-12), hi)
        angles = [central(l, R) for l in lengths]
        angles[big] = -angles[big]
    theta = 0.0
    verts = []
    for a in angles:
        verts.append((R * math.cos(theta), R * math.sin(theta)))
        theta += a
    dirs = []
    for i in range(n):
        (x0, y0), (x1, y1) = verts[i], verts[(i + 1) % n]
        dirs.append(math.atan2(y1 - y0, x1 - x0))
    return [_wrap(d - dirs[0]) for d in dirs]


def _wrap(a: float) -> float:
    return (a + math.pi) % (2 * math.pi) - math.pi


def rational_unit(theta: float, max_den: int) -> tuple[Fraction, Fraction]:
    """A rational point on the unit circle near angle ``theta``."""
    theta = _wrap(theta)
    flip = abs(theta) > math.pi / 2
    if flip:
        theta = _wrap(theta - math.pi)
    t = Fraction(math.tan(theta / 2)).limit_denominator(max_den)
    c = (1 - t * t) / (1 + t * t)
    s = 2 * t / (1 + t * t)
    return (-c, -s) if flip else (c, s)


def _relaxed_directions(lengths: Sequence[float], radii: Sequence[float], margin: float,
                        rng: random.Random) -> list[float]:
    """Edge directions from an SLSQP solve over raw center coordinates.

    Tangencies are equality constraints and non-neighbour disjointness is an
    inequality, which copes with nearly rigid chains (big cakes separated by
    tiny ones) where searching over edge directions stalls.
    """
    n = len(lengths)
    total = sum(lengths)
    ring = total / (2 * math.pi)
    at = np.concatenate([[0.0], np.cumsum(lengths)[:-1]]) / total * 2 * math.pi
    jitter = 0.05 * min(lengths)
    z0 = np.stack([ring * np.cos(at), ring * np.sin(at)], axis=1)
    z0 += np.array([[rng.gauss(0.0, jitter), rng.gauss(0.0, jitter)] for _ in range(n)])
    pairs = [(i, j) for i in range(n) for j in range(i + 2, n) if not (i == 0 and j == n - 1)]
    scale = max(lengths)

    def tangent(x: np.ndarray) -> np.ndarray:
        z = x.reshape(n, 2)
        return np.array([np.sum((z[i] - z[(i + 1) % n]) ** 2) - lengths[i] ** 2 for i in range(n)]) / scale

    def apart(x: np.ndarray) -> np.ndarray:
        z = x.reshape(n, 2)
        return np.array([np.sum((z[i] - z[j]) ** 2) - (radii[i] + radii[j] + 2 * margin) ** 2
                         for i, j in pairs]) / scale

    res = minimize(lambda x: 0.0, z0.ravel(), method="SLSQP",
                   constraints=[{"type": "eq", "fun": tangent}, {"type": "ineq", "fun": apart}],
                   options={"maxiter": 500, "ftol": 1e-12})
    z = res.x.reshape(n, 2)
    d = [math.atan2(*(z[(i + 1) % n] - z[i])[::-1]) for i in range(n)]
    return [_wrap(a - d[0]) for a in d]


def _exact_chain(radii: Sequence[ConstructibleReal], dirs: Sequence[float], max_den: int) -> Optional[Scene]:
    n = len(radii)
    lengths = [radii[i] + radii[(i + 1) % n] for i in range(n)]
    centers = [Point(0, 0)]
    for i in range(n - 2):
        if i == 0:
            c, s = Fraction(1), Fraction(0)
        else:
            c, s = rational_unit(dirs[i], max_den)
        centers.append(centers[-1] + Point(c, s).scale(lengths[i]))
    last = centers[-1]
    v = centers[0] - last
    d2 = v.norm2()
    if d2.sign() == 0:
        return None
    la, lb = lengths[n - 2], lengths[n - 1]
    a = (la * la - lb * lb + d2) / (2 * d2)
    h2 = la * la / d2 - a * a
    if h2.sign() < 0:
        return None
    centers.append(last + v.scale(a) + Point(v.y, -v.x).scale(sqrt(h2)))
    scene = Scene.chain_from_centers(centers, radii)
    if validate_scene(scene):
        return None
    return scene


def build_kissing_chain(radii: Iterable, seed: int = 0, max_attempts: int = 12) -> Scene:
    """Place a closed chain of kissing cakes with the given radii.

    Cake 1 sits at the origin and cake 2 on the positive x-axis; the chain runs
    counterclockwise.  The result is deterministic for fixed ``(radii, seed)``.
    """
    radii = [_as_cr(r) for r in radii]
    n = len(radii)
    if n < 3:
        raise TooFewCircles("chain needs at least 3 cakes")
    if any(r.sign() <= 0 for r in radii):
        raise SceneError("cake radii must be positive")
    lengths = [radii[i] + radii[(i + 1) % n] for i in range(n)]
    total = sum(lengths, CR(0))
    for l in lengths:
        if (2 * l - total).sign() >= 0:
            raise ChainInfeasible("center polygon violates the polygon inequality")
    lf = [l.to_float() for l in lengths]
    rf = [r.to_float() for r in radii]
    margin = 0.02 * min(rf)
    base = _cyclic_directions(lf)
    rng = random.Random(seed)
    for attempt in range(max_attempts):
        dirs = base if attempt == 0 else _relaxed_directions(lf, rf, margin, rng)
        for den in _DIRECTION_DENOMINATORS:
            scene = _exact_chain(radii, dirs, den)
            if scene is not None:
                return scene
        if n == 3:
            break
    raise ChainInfeasible(f"no disjoint closed chain found for radii {[str(r) for r in radii]}")
