"""Construction traces: an ordered log of knife-only steps.

Every value a construction touches has a *ref*:

* ``#i`` / ``#i.j`` -- output (or j-th output) of step ``i``
* ``S<k>``          -- recorded kissing point whose first cake is ``k``
* ``O<k>``          -- marked center of cake ``k`` (only legal when marked)
* ``c<k>``          -- the rim of cake ``k``

Constructions call the recorder methods (:meth:`Trace.join`, :meth:`Trace.meet`
...) with plain :class:`Point`/:class:`Line` objects; the recorder maps them
back to refs so the log can be audited afterwards.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from typing import Optional, Union

from .errors import CapabilityMissing, PointNotOnCircle
from .exactnum import CR
from .geometry import Line, Point, join, line_circle_intersect, meet, second_intersection
from .scene import Scene

SCHEMA = "cakecut.trace/1"

STEP_KINDS = ("choose", "join", "meet", "intersect", "cut", "scratch", "assume")

Value = Union[Point, Line]


@dataclass(frozen=True, eq=False)
class Step:
    index: int
    kind: str
    inputs: tuple[str, ...]
    output: tuple[Value, ...]
    cakes: tuple[int, ...] = ()
    label: str = ""
    note: str = ""

    def to_json(self) -> dict:
        out = []
        for v in self.output:
            if isinstance(v, Line):
                out.append({"line": {"a": v.a.dump(), "b": v.b.dump(), "c": v.c.dump()},
                            "approx": [repr(f) for f in v.approx()]})
            else:
                out.append({"x": repr(v.x.to_float()), "y": repr(v.y.to_float()),
                            "exact": {"x": v.x.dump(), "y": v.y.dump()}})
        return {
            "index": self.index,
            "kind": self.kind,
            "inputs": list(self.inputs),
            "cakes": list(self.cakes),
            "label": self.label,
            "note": self.note,
            "output": out,
        }

    @classmethod
    def from_json(cls, doc: dict) -> Step:
        out: list[Value] = []
        for v in doc["output"]:
            if "line" in v:
                ln = v["line"]
                out.append(Line(CR.load(ln["a"]), CR.load(ln["b"]), CR.load(ln["c"])))
            else:
                out.append(Point(CR.load(v["exact"]["x"]), CR.load(v["exact"]["y"])))
        return cls(int(doc["index"]), doc["kind"], tuple(doc["inputs"]), tuple(out),
                   tuple(doc.get("cakes", ())), doc.get("label", ""), doc.get("note", ""))


class Trace:
    """Mutable recorder while a construction runs; :meth:`seal` freezes it."""

    def __init__(self, scene: Scene) -> None:
        self.scene = scene
        self.steps: list[Step] = []
        self.sealed = False
        self._refs: dict[int, str] = {}
        self._known: list[tuple[str, Value]] = []
        self._centers: dict[int, Point] = {}
        self._line_points: dict[int, list[Point]] = {}
        self._done_lines: set[int] = set()

    # -- bookkeeping -------------------------------------------------------

    def _append(self, kind: str, inputs, output, cakes=(), label="", note="") -> Step:
        if self.sealed:
            raise RuntimeError("trace is sealed")
        step = Step(len(self.steps), kind, tuple(inputs), tuple(output), tuple(cakes), label, note)
        self.steps.append(step)
        if len(output) == 1:
            self._register(output[0], f"#{step.index}")
        else:
            for j, v in enumerate(output):
                self._register(v, f"#{step.index}.{j}")
        return step

    def _register(self, obj: Value, ref: str) -> None:
        if id(obj) not in self._refs:
            self._refs[id(obj)] = ref
            self._known.append((ref, obj))

    def ref(self, obj: Value) -> str:
        r = self._refs.get(id(obj))
        if r is not None:
            return r
        for ref, known in self._known:
            if type(known) is type(obj) and known == obj:
                self._refs[id(obj)] = ref
                return ref
        if isinstance(obj, Point):
            for i, j, s in self.scene.kissing_points:
                if s == obj:
                    self._register(obj, f"S{i}")
                    return f"S{i}"
            for c in self.scene.cakes:
                if c.center_marked and c.center == obj:
                    self._register(obj, f"O{c.id}")
                    return f"O{c.id}"
        # not derivable from anything the trace knows: logged as an assumption
        step = self._append("assume", (), (obj,), note="externally supplied value")
        return f"#{step.index}"

    def seal(self) -> Trace:
        self.sealed = True
        return self

    def snapshot(self) -> Trace:
        """A sealed copy with pending scratches emitted; ``self`` is left open."""
        t = Trace(self.scene)
        t.steps = list(self.steps)
        t._refs = dict(self._refs)
        t._known = list(self._known)
        t._centers = dict(self._centers)
        t._line_points = {k: list(v) for k, v in self._line_points.items()}
        t._done_lines = set(self._done_lines)
        if not self.sealed:
            t.emit_scratches()
        return t.seal()

    def labeled(self, label: str) -> Optional[Value]:
        for step in reversed(self.steps):
            if step.label == label:
                return step.output[0]
        return None

    # -- scene-given values ------------------------------------------------

    def kiss(self, i: int) -> Point:
        for a, _b, s in self.scene.kissing_points:
            if a == i:
                self._register(s, f"S{i}")
                return s
        raise KeyError(f"no kissing point S{i}")

    def center(self, k: int) -> Point:
        """The center of cake ``k``: constructed earlier, or given if marked."""
        if k in self._centers:
            return self._centers[k]
        cake = self.scene.cake(k)
        if not cake.center_marked:
            raise CapabilityMissing(f"cake {k} has no marked center")
        self._register(cake.center, f"O{k}")
        return cake.center

    def set_center(self, k: int, p: Point) -> None:
        self._centers[k] = p

    # -- knife primitives ----------------------------------------------------

    def choose(self, k: int, p: Point, label: str = "", note: str = "") -> Point:
        cake = self.scene.cake(k)
        if not cake.on_rim(p):
            raise PointNotOnCircle(f"chosen point is not on the rim of cake {k}")
        self._append("choose", (f"c{k}",), (p,), (k,), label, note)
        return p

    def join(self, p: Point, q: Point, label: str = "") -> Line:
        line = join(p, q)
        for step in self.steps:
            if step.kind == "join" and step.output[0] == line:
                self._add_on_line(step.index, p, q)
                return step.output[0]
        step = self._append("join", (self.ref(p), self.ref(q)), (line,), label=label)
        self._line_points[step.index] = []
        self._add_on_line(step.index, p, q)
        return line

    def meet(self, l1: Line, l2: Line, label: str = "") -> Point:
        p = meet(l1, l2)
        self._append("meet", (self.ref(l1), self.ref(l2)), (p,), label=label)
        self._mark_on(l1, p)
        self._mark_on(l2, p)
        return p

    def intersect(self, line: Line, k: int, exclude: Optional[Point] = None,
                  label: str = "") -> tuple[Point, ...]:
        cake = self.scene.cake(k)
        inputs = [self.ref(line), f"c{k}"]
        if exclude is not None:
            pts: tuple[Point, ...] = (second_intersection(line, cake, exclude),)
            inputs.append(self.ref(exclude))
            note = "second intersection"
        else:
            pts = line_circle_intersect(line, cake)
            note = ""
        if pts:
            self._append("intersect", inputs, pts, (k,), label, note)
        for p in pts:
            self._mark_on(line, p)
        return pts

    def cut(self, p: Point, q: Point, k: int, line: Optional[Line] = None, label: str = "") -> Step:
        if line is not None:
            idx = self._line_index(line)
            if idx is not None:
                self._done_lines.add(idx)
        return self._append("cut", (self.ref(p), self.ref(q)), (p, q), (k,), label)

    # -- scratches -----------------------------------------------------------

    def _line_index(self, line: Line) -> Optional[int]:
        r = self._refs.get(id(line))
        if r is not None and r.startswith("#") and "." not in r:
            return int(r[1:])
        return None

    def _add_on_line(self, idx: int, *pts: Point) -> None:
        bucket = self._line_points[idx]
        for p in pts:
            if not any(p is q or p == q for q in bucket):
                bucket.append(p)

    def _mark_on(self, line: Line, p: Point) -> None:
        idx = self._line_index(line)
        if idx is not None and idx in self._line_points:
            self._add_on_line(idx, p)

    def emit_scratches(self) -> list[Step]:
        """Log one surface scratch per auxiliary line, spanning the points used on it."""
        emitted = []
        for idx in sorted(self._line_points):
            if idx in self._done_lines:
                continue
            self._done_lines.add(idx)
            pts = self._line_points[idx]
            if len(pts) < 2:
                continue
            d = self.steps[idx].output[0].direction

            def along(p: Point, q: Point, d=d) -> int:
                return (p - q).dot(d).sign()

            ordered = sorted(pts, key=functools.cmp_to_key(along))
            cakes = tuple(c.id for c in self.scene.cakes if any(c.contains(p) for p in ordered))
            emitted.append(self._append("scratch", [self.ref(p) for p in ordered], ordered, cakes,
                                        note=f"along #{idx}"))
        return emitted

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "steps": [s.to_json() for s in self.steps]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, doc: dict, scene: Scene) -> Trace:
        if doc.get("schema") != SCHEMA:
            raise ValueError(f"unsupported trace schema {doc.get('schema')!r}")
        t = cls(scene)
        t.steps = [Step.from_json(s) for s in doc["steps"]]
        return t.seal()

    def cuts(self) -> list[Step]:
        return [s for s in self.steps if s.kind == "cut"]

    def scratches(self) -> list[Step]:
        return [s for s in self.steps if s.kind == "scratch"]
