"""Exact points, lines, circles and dilations, plus the knife primitives.

Lines are kept as homogeneous coefficients ``a*x + b*y + c = 0``; they are
never normalized, so no radicals are introduced by storing them.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import CoincidentPoints, NotKissing, ParallelLines
from .exactnum import CR, ConstructibleReal, sqrt

Scalar = Union[ConstructibleReal, int, Fraction]


def _cr(v: Scalar) -> ConstructibleReal:
    if isinstance(v, ConstructibleReal):
        return v
    if isinstance(v, str):
        return CR(v)
    return CR(Fraction(v))


class Point:
    """A point (or free vector) with exact coordinates."""

    __slots__ = ("x", "y")

    def __init__(self, x: Scalar, y: Scalar) -> None:
        object.__setattr__(self, "x", _cr(x))
        object.__setattr__(self, "y", _cr(y))

    def __setattr__(self, name, value):
        raise AttributeError("Point is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Point):
            return NotImplemented
        return (self.x - other.x).sign() == 0 and (self.y - other.y).sign() == 0

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: Point) -> Point:
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point) -> Point:
        return Point(self.x - other.x, self.y - other.y)

    def __neg__(self) -> Point:
        return Point(-self.x, -self.y)

    def scale(self, k: Scalar) -> Point:
        k = _cr(k)
        return Point(self.x * k, self.y * k)

    def dot(self, other: Point) -> ConstructibleReal:
        return self.x * other.x + self.y * other.y

    def cross(self, other: Point) -> ConstructibleReal:
        return self.x * other.y - self.y * other.x

    def norm2(self) -> ConstructibleReal:
        return self.x * self.x + self.y * self.y

    def approx(self) -> tuple[float, float]:
        return (self.x.to_float(), self.y.to_float())

    def __repr__(self) -> str:
        return f"Point({self.x}, {self.y})"


ORIGIN = Point(0, 0)


def midpoint(p: Point, q: Point) -> Point:
    return (p + q).scale(Fraction(1, 2))


def orientation(p: Point, q: Point, r: Point) -> int:
    """+1 if p, q, r turn counterclockwise, -1 clockwise, 0 collinear."""
    return (q - p).cross(r - p).sign()


@dataclass(frozen=True, eq=False)
class Line:
    a: ConstructibleReal
    b: ConstructibleReal
    c: ConstructibleReal

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, _cr(getattr(self, name)))
        if self.a.sign() == 0 and self.b.sign() == 0:
            raise ValueError("degenerate line coefficients")

    @property
    def direction(self) -> Point:
        return Point(-self.b, self.a)

    @property
    def normal(self) -> Point:
        return Point(self.a, self.b)

    def value_at(self, p: Point) -> ConstructibleReal:
        return self.a * p.x + self.b * p.y + self.c

    def contains(self, p: Point) -> bool:
        return self.value_at(p).sign() == 0

    def is_parallel(self, other: Line) -> bool:
        return (self.a * other.b - self.b * other.a).sign() == 0

    def __eq__(self, other: object) -> bool:
        # projective equality: proportional coefficient vectors
        if not isinstance(other, Line):
            return NotImplemented
        return (
            (self.a * other.b - self.b * other.a).sign() == 0
            and (self.a * other.c - self.c * other.a).sign() == 0
            and (self.b * other.c - self.c * other.b).sign() == 0
        )

    __hash__ = None  # type: ignore[assignment]

    def approx(self) -> tuple[float, float, float]:
        return (self.a.to_float(), self.b.to_float(), self.c.to_float())


@dataclass(frozen=True, eq=False)
class Circle:
    center: Point
    radius: ConstructibleReal
    center_marked: bool = False
    id: int = 1

    def __post_init__(self) -> None:
        if not isinstance(self.radius, ConstructibleReal):
            object.__setattr__(self, "radius", _cr(self.radius))
        if self.radius.sign() <= 0:
            raise ValueError("circle radius must be positive")

    def power(self, p: Point) -> ConstructibleReal:
        """Signed power of ``p``: negative inside, zero on the rim."""
        return (p - self.center).norm2() - self.radius * self.radius

    def on_rim(self, p: Point) -> bool:
        return self.power(p).sign() == 0

    def contains(self, p: Point) -> bool:
        """Closed-disk membership."""
        return self.power(p).sign() <= 0

    def with_marked(self, marked: bool = True) -> Circle:
        return Circle(self.center, self.radius, marked, self.id)

    def __repr__(self) -> str:
        flag = ", marked" if self.center_marked else ""
        return f"Circle(id={self.id}, center={self.center!r}, r={self.radius}{flag})"


def join(p: Point, q: Point) -> Line:
    """The line through two distinct points."""
    if p == q:
        raise CoincidentPoints("cannot join a point with itself")
    return Line(p.y - q.y, q.x - p.x, p.x * q.y - q.x * p.y)


def meet(l1: Line, l2: Line) -> Point:
    """The intersection point of two non-parallel lines."""
    det = l1.a * l2.b - l2.a * l1.b
    if det.sign() == 0:
        raise ParallelLines("lines are parallel or identical")
    return Point((l1.b * l2.c - l2.b * l1.c) / det, (l1.c * l2.a - l2.c * l1.a) / det)


def lex_compare(p: Point, q: Point) -> int:
    s = (p.x - q.x).sign()
    return s if s else (p.y - q.y).sign()


def lex_key_sorted(points: list[Point]) -> list[Point]:
    """Sort points lexicographically by exact (x, y) comparison."""
    return sorted(points, key=functools.cmp_to_key(lex_compare))


def line_circle_intersect(line: Line, circle: Circle) -> tuple[Point, ...]:
    """Zero, one (tangency) or two exact intersection points, lex-ordered."""
    n2 = line.a * line.a + line.b * line.b
    s = line.value_at(circle.center)
    disc = circle.radius * circle.radius * n2 - s * s
    sd = disc.sign()
    if sd < 0:
        return ()
    foot = circle.center - line.normal.scale(s / n2)
    if sd == 0:
        return (foot,)
    t = sqrt(disc) / n2
    d = line.direction
    return tuple(lex_key_sorted([foot + d.scale(t), foot - d.scale(t)]))


def second_intersection(line: Line, circle: Circle, known: Point) -> Point:
    """The other intersection of ``line`` with ``circle`` given one of them.

    Equivalent to :func:`line_circle_intersect` minus ``known`` but needs no
    square root (the product of the roots is known).  Returns ``known`` itself
    when the line is tangent there.
    """
    d = line.direction
    t = -2 * (known - circle.center).dot(d) / d.norm2()
    return known + d.scale(t)


def are_kissing(c1: Circle, c2: Circle) -> Optional[Point]:
    """The kissing point of two externally tangent circles, else ``None``."""
    rsum = c1.radius + c2.radius
    delta = c2.center - c1.center
    if (delta.norm2() - rsum * rsum).sign() != 0:
        return None
    return c1.center + delta.scale(c1.radius / rsum)


@dataclass(frozen=True, eq=False)
class Dilation:
    """A central dilation ``P -> S + k*(P - S)`` or a translation ``P -> P + v``."""

    kind: str
    center: Optional[Point] = None
    factor: ConstructibleReal = field(default_factory=lambda: CR(1))
    displacement: Optional[Point] = None

    @classmethod
    def central(cls, center: Point, factor: Scalar) -> Dilation:
        factor = _cr(factor)
        if factor.sign() == 0:
            raise ValueError("central dilation factor must be nonzero")
        return cls("central", center=center, factor=factor)

    @classmethod
    def translation(cls, v: Point) -> Dilation:
        return cls("translation", displacement=v)

    @classmethod
    def identity(cls) -> Dilation:
        return cls.translation(ORIGIN)

    def linear_form(self) -> tuple[ConstructibleReal, Point]:
        """``(k, t)`` with the map written as ``P -> k*P + t``."""
        if self.kind == "translation":
            return CR(1), self.displacement
        return self.factor, self.center.scale(1 - self.factor)

    @property
    def is_identity(self) -> bool:
        return self.kind == "translation" and self.displacement == ORIGIN

    def __call__(self, p: Point) -> Point:
        return apply_dilation(self, p)

    def __repr__(self) -> str:
        if self.kind == "translation":
            return f"Dilation.translation({self.displacement!r})"
        return f"Dilation.central({self.center!r}, {self.factor})"


def apply_dilation(d: Dilation, p: Point) -> Point:
    if d.kind == "translation":
        return p + d.displacement
    return d.center + (p - d.center).scale(d.factor)


def compose_dilations(d2: Dilation, d1: Dilation) -> Dilation:
    """``d2 o d1``, classified as a translation (factor 1) or central dilation."""
    k1, t1 = d1.linear_form()
    k2, t2 = d2.linear_form()
    k = k1 * k2
    t = t1.scale(k2) + t2
    if (k - 1).sign() == 0:
        return Dilation.translation(t)
    return Dilation.central(t.scale(1 / (1 - k)), k)


def dilation_of_kissing_pass(c1: Circle, c2: Circle, s: Point) -> Dilation:
    """Passing points of ``c1`` through the kissing point ``s`` onto ``c2``."""
    kiss = are_kissing(c1, c2)
    if kiss is None or kiss != s:
        raise NotKissing(f"circles {c1.id} and {c2.id} do not kiss at the given point")
    return Dilation.central(s, -(c2.radius / c1.radius))
