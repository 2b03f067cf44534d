"""Exact predicates, numeric oracles and the trace audit."""

from __future__ import annotations

import functools
import json
import re
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from . import kernels
from .constructions import Cut
from .errors import CutMissesCenter, PointNotOnCircle
from .exactnum import CR, ConstructibleReal, sqrt
from .geometry import Circle, Line, Point, join, line_circle_intersect, meet, second_intersection
from .scene import Scene
from .trace import Trace

SCHEMA = "cakecut.report/1"


@dataclass
class Check:
    name: str
    kind: str  # "exact" | "numeric"
    passed: bool
    witness: Any = None
    tolerance: Optional[float] = None

    def to_json(self) -> dict:
        doc = {"name": self.name, "kind": self.kind, "passed": self.passed, "witness": self.witness}
        if self.kind == "numeric":
            doc["tolerance"] = self.tolerance
        return doc


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, witness: Any = None, *, kind: str = "exact",
            tolerance: Optional[float] = None) -> Check:
        if kind == "numeric" and tolerance is None:
            raise ValueError("numeric checks need an explicit tolerance")
        if kind == "exact" and tolerance is not None:
            raise ValueError("exact checks carry no tolerance")
        check = Check(name, kind, bool(passed), witness, tolerance)
        self.checks.append(check)
        return check

    def extend(self, other: VerificationReport) -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "passed": self.passed, "checks": [c.to_json() for c in self.checks]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


# -- exact predicates -----------------------------------------------------------


def is_diameter(c: Circle, p: Point, q: Point, require_on_rim: bool = True) -> bool:
    """Exact test that ``pq`` is a diameter: ``p + q == 2 * center``."""
    if require_on_rim and not (c.on_rim(p) and c.on_rim(q)):
        raise PointNotOnCircle(f"chord endpoints must lie on the rim of cake {c.id}")
    return (p + q) == c.center.scale(2)


def _half(v: Point) -> int:
    s = v.y.sign()
    return 0 if s > 0 or (s == 0 and v.x.sign() > 0) else 1


def _angle_cmp(u: Point, v: Point) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    return -u.cross(v).sign()


def cut_rays(c: Circle, cuts: Sequence[Cut]) -> list[Point]:
    """Distinct ray directions from the center, sorted counterclockwise from +x."""
    rays: list[Point] = []
    for cut in cuts:
        if (cut.q - cut.p).cross(c.center - cut.p).sign() != 0:
            raise CutMissesCenter(f"cut does not pass through the center of cake {c.id}")
        for end in (cut.p, cut.q):
            v = end - c.center
            if v.x.sign() == 0 and v.y.sign() == 0:
                continue
            if any(v.cross(w).sign() == 0 and v.dot(w).sign() > 0 for w in rays):
                continue
            rays.append(v)
    return sorted(rays, key=functools.cmp_to_key(_angle_cmp))


def _sector_angle(u: Point, v: Point) -> tuple[ConstructibleReal, int]:
    """(cosine, sign of sine) of the counterclockwise angle from ``u`` to ``v``."""
    cos = u.dot(v) / sqrt(u.norm2() * v.norm2())
    return cos, u.cross(v).sign()


def sector_cosines(c: Circle, cuts: Sequence[Cut]) -> list[ConstructibleReal]:
    rays = cut_rays(c, cuts)
    m = len(rays)
    return [_sector_angle(rays[i], rays[(i + 1) % m])[0] for i in range(m)] if m > 1 else []


def equal_sectors(c: Circle, cuts: Sequence[Cut], pieces: Optional[int] = None) -> bool:
    """Exact test that the radial cuts split the cake into equal sectors."""
    rays = cut_rays(c, cuts)
    m = len(rays)
    if pieces is not None and m != pieces:
        return False
    if m <= 1:
        return True
    angles = [_sector_angle(rays[i], rays[(i + 1) % m]) for i in range(m)]
    cos0, sin0 = angles[0]
    return all(s == sin0 and (cos - cos0).sign() == 0 for cos, s in angles[1:])


# -- numeric oracles ----------------------------------------------------------------


def _ray_angles(c: Circle, cuts: Sequence[Cut]) -> np.ndarray:
    angles = []
    for v in cut_rays(c, cuts):
        x, y = v.approx()
        angles.append(np.mod(np.arctan2(y, x), 2 * np.pi))
    return np.sort(np.array(angles, dtype=np.float64))


def piece_area_oracle(c: Circle, cuts: Sequence[Cut], samples: int, rng_seed: int,
                      method: str = "stratified") -> list[float]:
    """Monte-Carlo area of each sector, counterclockwise from the first ray after +x."""
    r = c.radius.to_float()
    rays = _ray_angles(c, cuts)
    xs, ys = kernels.disk_samples(r, samples, rng_seed, method)
    counts = kernels.sector_counts(xs, ys, r, rays)
    box = 4.0 * r * r
    return [float(n) / len(xs) * box for n in counts]


def segment_in_cakes_grid(scene: Scene, p: Point, q: Point, samples: int = 10_000,
                          tol: float = 1e-9) -> bool:
    """Float oracle for :func:`segment_in_cakes`."""
    centers = np.array([c.center.approx() for c in scene.cakes], dtype=np.float64)
    radii = np.array([c.radius.to_float() for c in scene.cakes], dtype=np.float64)
    return bool(kernels.segment_covered(np.array(p.approx()), np.array(q.approx()),
                                        centers, radii, samples, tol))


# -- etiquette -------------------------------------------------------------------


def _cmp(a: ConstructibleReal, b: ConstructibleReal) -> int:
    return (a - b).sign()


def segment_in_cakes(scene: Scene, p: Point, q: Point) -> bool:
    """Exact test that segment ``pq`` is covered by the union of closed cake disks."""
    if p == q:
        return any(c.contains(p) for c in scene.cakes)
    for c in scene.cakes:
        if c.contains(p) and c.contains(q):
            return True
    d = q - p
    a = d.norm2()
    spans: list[tuple[ConstructibleReal, ConstructibleReal]] = []
    zero, one = CR(0), CR(1)
    for c in scene.cakes:
        w = p - c.center
        b = 2 * w.dot(d)
        cc = w.norm2() - c.radius * c.radius
        disc = b * b - 4 * a * cc
        if disc.sign() < 0:
            continue
        root = sqrt(disc)
        lo = (-b - root) / (2 * a)
        hi = (-b + root) / (2 * a)
        if _cmp(hi, zero) < 0 or _cmp(lo, one) > 0:
            continue
        spans.append((lo if _cmp(lo, zero) > 0 else zero, hi if _cmp(hi, one) < 0 else one))
    spans.sort(key=functools.cmp_to_key(lambda s, t: _cmp(s[0], t[0])))
    reach = zero
    for lo, hi in spans:
        if _cmp(lo, reach) > 0:
            return False
        if _cmp(hi, reach) > 0:
            reach = hi
        if _cmp(reach, one) >= 0:
            return True
    return _cmp(reach, one) >= 0


# -- trace audit -------------------------------------------------------------------

_REF = re.compile(r"^(?:#(\d+)(?:\.(\d+))?|S(\d+)|O(\d+)|c(\d+))$")


def _resolve(ref: str, step_index: int, trace: Trace, scene: Scene) -> tuple[Optional[Any], Optional[str]]:
    """The value behind ``ref`` and a discipline violation message, if any."""
    m = _REF.match(ref)
    if m is None:
        return None, f"malformed reference {ref!r}"
    if m.group(1) is not None:
        i = int(m.group(1))
        if i >= step_index:
            return None, f"{ref} is not produced by an earlier step"
        src = trace.steps[i]
        j = int(m.group(2)) if m.group(2) is not None else 0
        if m.group(2) is None and len(src.output) != 1 or j >= len(src.output):
            return None, f"{ref} does not name a single output of step #{i}"
        if src.kind in ("cut", "scratch"):
            return None, f"{ref} refers to a carving, not a point or line"
        return src.output[j], None
    if m.group(3) is not None:
        k = int(m.group(3))
        for a, _b, s in scene.kissing_points:
            if a == k:
                return s, None
        return None, f"{ref} is not a kissing point of the scene"
    if m.group(4) is not None:
        k = int(m.group(4))
        cake = next((c for c in scene.cakes if c.id == k), None)
        if cake is None:
            return None, f"{ref}: no cake {k}"
        if not cake.center_marked:
            return cake.center, f"{ref} reads the unmarked center of cake {k}"
        return cake.center, None
    k = int(m.group(5))
    cake = next((c for c in scene.cakes if c.id == k), None)
    if cake is None:
        return None, f"{ref}: no cake {k}"
    return cake, None


def _replay(step, args) -> Optional[str]:
    """Recompute a primitive step from its inputs; a message on mismatch."""
    try:
        if step.kind == "join":
            ok = join(args[0], args[1]) == step.output[0]
        elif step.kind == "meet":
            ok = meet(args[0], args[1]) == step.output[0]
        elif step.kind == "intersect":
            line, cake = args[0], args[1]
            if len(args) > 2:
                ok = second_intersection(line, cake, args[2]) == step.output[0]
            else:
                pts = line_circle_intersect(line, cake)
                ok = len(pts) == len(step.output) and all(a == b for a, b in zip(pts, step.output))
        elif step.kind == "choose":
            ok = args[0].on_rim(step.output[0])
        elif step.kind in ("cut", "scratch"):
            ok = all(a == b for a, b in zip(args, step.output)) and len(args) == len(step.output)
        else:
            return None
    except Exception as exc:  # replay of a forged step may fail in any primitive
        return f"step #{step.index} ({step.kind}) cannot be replayed: {exc}"
    return None if ok else f"step #{step.index} ({step.kind}) output does not match its inputs"


_ARITY = {"join": (Point, Point), "meet": (Line, Line), "choose": (Circle,)}


def audit_trace(scene: Scene, trace: Trace, replay: bool = True) -> VerificationReport:
    """Ruler discipline (provenance, no unmarked-center reads) and cake etiquette."""
    report = VerificationReport()
    problems: list[str] = []
    for step in trace.steps:
        if step.kind == "assume":
            problems.append(f"step #{step.index} uses an externally supplied value")
            continue
        args = []
        for ref in step.inputs:
            value, err = _resolve(ref, step.index, trace, scene)
            if err:
                problems.append(f"step #{step.index} ({step.kind}): {err}")
            args.append(value)
        kinds = _ARITY.get(step.kind)
        if kinds and not all(isinstance(a, t) for a, t in zip(args, kinds)):
            problems.append(f"step #{step.index} ({step.kind}): inputs have the wrong kind")
            continue
        if replay and None not in args:
            msg = _replay(step, args)
            if msg:
                problems.append(msg)
    report.add("ruler discipline", not problems, problems)
    for step in trace.steps:
        if step.kind not in ("cut", "scratch"):
            continue
        pts = step.output
        ok = all(segment_in_cakes(scene, a, b) for a, b in zip(pts, pts[1:]))
        what = "cut" if step.kind == "cut" else "scratch"
        report.add(f"etiquette: {what} #{step.index} stays on cake surfaces", ok,
                   [list(p.approx()) for p in pts])
    return report
