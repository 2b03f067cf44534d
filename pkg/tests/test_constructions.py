import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cakecut.constructions import (
    bisect_cake,
    chain_traverse,
    chain_walk,
    divide,
    find_center,
    pass_kissing,
    quarter_cuts,
    sixth_cuts,
    steiner_midpoint,
    steiner_parallel,
    third_cuts,
)
from cakecut.errors import (
    ADegenerate,
    BadMidpoint,
    CapabilityMissing,
    DegenerateTrapezoid,
    EvenChain,
    NotAKissingPoint,
    NotParallel,
    PointNotOnCircle,
    RCollinear,
)
from cakecut.exactnum import CR, sqrt
from cakecut.geometry import Circle, Line, Point, are_kissing, midpoint
from cakecut.scene import Scene, build_kissing_chain, build_single_cake
from cakecut.trace import Trace

from conftest import random_radii, random_t, rational_rim_point

HALF = Fraction(1, 2)
QUARTER_POINTS = {
    "P": Point(-1, 0),
    "R": Point(0, 1),
    # the chord S-T crosses PR at (-1/2, 1/2)
    "S": Point(Fraction(-3, 5), Fraction(4, 5)),
    "T": Point(0, -1),
}


def two_cake_scene(c1, c2):
    s = are_kissing(c1, c2)
    return Scene((c1, c2), ((1, 2, s),), "closed_chain")


# -- passing through kissing points ---------------------------------------------


def test_pass_kissing_examples():
    c1 = Circle(Point(-1, 0), CR(1), id=1)
    c2 = Circle(Point(1, 0), CR(1), id=2)
    sc = two_cake_scene(c1, c2)
    t = Trace(sc)
    assert pass_kissing(t, Point(-2, 0), Point(0, 0), c2) == Point(2, 0)
    assert pass_kissing(t, Point(0, 0), Point(0, 0), c2) == Point(0, 0)

    c3 = Circle(Point(2, 0), CR(2), id=2)
    sc = two_cake_scene(c1, c3)
    assert pass_kissing(Trace(sc), Point(-1, 1), Point(0, 0), c3) == Point(2, -2)


def test_pass_kissing_errors():
    c1 = Circle(Point(-1, 0), CR(1), id=1)
    c2 = Circle(Point(1, 0), CR(1), id=2)
    t = Trace(two_cake_scene(c1, c2))
    with pytest.raises(PointNotOnCircle):
        pass_kissing(t, Point(5, 5), Point(0, 0), c2)
    with pytest.raises(NotAKissingPoint):
        pass_kissing(t, Point(-2, 0), Point(0, 1), c2)


# -- chain traversal ------------------------------------------------------------


def test_three_unit_trace(three_unit):
    walk = chain_walk(Trace(three_unit), three_unit, Point(1, 0))
    assert walk[2] == Point(2, sqrt(3))  # P3
    assert walk[-1] == Point(-1, 0)  # Q


def test_four_cakes_return_to_start():
    s = build_kissing_chain([1, 1, 1, 1])
    for t in (Fraction(1, 3), Fraction(-7, 2), 0):
        p = rational_rim_point(s.cake(1), t)
        assert chain_traverse(Trace(s), s, p) == p


def test_five_cakes_diameter():
    s = build_kissing_chain([1] * 5)
    p = rational_rim_point(s.cake(1), Fraction(2, 7))
    q = chain_traverse(Trace(s), s, p)
    assert midpoint(p, q) == s.cake(1).center


@settings(max_examples=25)
@given(st.sampled_from([3, 5, 7, 9, 4, 6, 8]), st.integers(0, 10_000))
def test_chain_theorem(n, seed):
    rng = random.Random(seed)
    s = build_kissing_chain(random_radii(rng, n), seed=seed)
    p = rational_rim_point(s.cake(1), random_t(rng))
    q = chain_traverse(Trace(s), s, p)
    if n % 2:
        assert midpoint(p, q) == s.cake(1).center
    else:
        assert q == p


def test_bisect_three_unit(three_unit):
    b = bisect_cake(three_unit)
    (cut,) = b.cuts
    assert (cut.p, cut.q, cut.cake) == (Point(1, 0), Point(-1, 0), 1)
    # the same line extended bisects c2 as well
    assert Line(0, 1, 0).contains(three_unit.cake(2).center)
    assert b.points["P3"] == Point(2, sqrt(3))


def test_bisect_other_target():
    s = build_kissing_chain([1, 2, 3])
    b = bisect_cake(s, target=2)
    cut = b.cuts[0]
    assert midpoint(cut.p, cut.q) == s.cake(2).center
    assert s.cake(2).on_rim(cut.p) and s.cake(2).on_rim(cut.q)


def test_bisect_even_chain():
    with pytest.raises(EvenChain):
        bisect_cake(build_kissing_chain([1, 1, 1, 1]))


def test_find_center_examples(three_unit):
    c = find_center(three_unit)
    assert c.points["center"] == Point(0, 0)
    assert c.scene.cake(1).center_marked
    s = build_kissing_chain([1, 2, 3])
    assert find_center(s, target=2).points["center"] == Point(3, 0)
    s5 = build_kissing_chain([1] * 5)
    assert find_center(s5, seed=4).points["center"] == s5.cake(1).center


def test_find_center_needs_odd_chain():
    with pytest.raises(EvenChain):
        find_center(build_kissing_chain([1, 1, 1, 1]))


# -- Steiner's tricks -----------------------------------------------------------


def test_steiner_parallel_example(unit_marked):
    t = Trace(unit_marked)
    ln = steiner_parallel(t, Point(-1, 0), Point(1, 0), Point(0, 0), Point(0, 1), Point(-HALF, HALF))
    assert t.labeled("B") == Point(0, Fraction(1, 3))
    assert t.labeled("C") == Point(HALF, HALF)
    assert ln == Line(0, 1, -HALF)


def test_steiner_parallel_mirror(unit_marked):
    t = Trace(unit_marked)
    a = Point(-Fraction(1, 4), Fraction(3, 4))
    steiner_parallel(t, Point(-1, 0), Point(1, 0), Point(0, 0), Point(0, 1), a)
    assert t.labeled("C") == Point(-a.x, a.y)


def test_steiner_parallel_errors(unit_marked):
    t = Trace(unit_marked)
    p, q = Point(-1, 1), Point(1, 1)
    with pytest.raises(BadMidpoint):
        steiner_parallel(t, p, q, Point(Fraction(1, 4), 0), Point(0, 3), Point(0, 2))
    with pytest.raises(RCollinear):
        steiner_parallel(t, p, q, Point(0, 1), Point(3, 1), Point(0, 2))
    for a in (p, Point(0, 3), Point(-2, 5)):
        with pytest.raises(ADegenerate):
            steiner_parallel(t, p, q, Point(0, 1), Point(0, 3), a)


def test_steiner_midpoint_example(unit_marked):
    t = Trace(unit_marked)
    z = steiner_midpoint(t, Point(-1, 0), Point(1, 0), Point(-HALF, HALF), Point(HALF, HALF))
    assert t.labeled("R") == Point(0, 1)
    assert t.labeled("B") == Point(0, Fraction(1, 3))
    assert z == Point(0, 0)


def test_steiner_midpoint_errors(unit_marked):
    t = Trace(unit_marked)
    p, q = Point(-1, 0), Point(1, 0)
    with pytest.raises(DegenerateTrapezoid):
        steiner_midpoint(t, p, q, Point(0, 1), Point(0, 1))
    with pytest.raises(NotParallel):
        steiner_midpoint(t, p, q, Point(0, 1), Point(1, 2))
    with pytest.raises(DegenerateTrapezoid):
        steiner_midpoint(t, p, q, Point(-2, 1), Point(0, 1))  # PA parallel to QC


Q = st.fractions(min_value=-5, max_value=5, max_denominator=12)
T = st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20), max_denominator=20)


@given(Q, Q, Q, Q, Q, Q, T)
def test_steiner_parallel_property(px, py, qx, qy, rx, ry, t):
    p, q, r = Point(px, py), Point(qx, qy), Point(rx, ry)
    if p == q or (q - p).cross(r - p).sign() == 0:
        return
    a = p + (r - p).scale(t)
    tr = Trace(build_single_cake(1))
    ln = steiner_parallel(tr, p, q, midpoint(p, q), r, a)
    assert ln.is_parallel(Line(q.y - p.y, p.x - q.x, 0))
    assert ln.contains(a)


@given(Q, Q, Q, Q, Q, Q, T)
def test_steiner_midpoint_property(px, py, qx, qy, ax, ay, k):
    p, q, a = Point(px, py), Point(qx, qy), Point(ax, ay)
    c = a + (q - p).scale(k)
    try:
        z = steiner_midpoint(Trace(build_single_cake(1)), p, q, a, c)
    except DegenerateTrapezoid:
        return
    assert (p + q) == z.scale(2)


# -- equal division -----------------------------------------------------------------


def test_quarter_worked_example(unit_marked):
    c = quarter_cuts(unit_marked, points=QUARTER_POINTS)
    pts = c.points
    assert pts["A"] == Point(-HALF, HALF)
    assert pts["B"] == Point(0, Fraction(1, 3))
    assert pts["C"] == Point(HALF, HALF)
    assert pts["A'"] == Point(-sqrt(3) / 2, HALF)
    assert pts["C'"] == Point(sqrt(3) / 2, HALF)
    assert pts["B'"] == Point(0, 2 - sqrt(3))
    (c1, c2) = c.cuts
    assert c1.p.y == 0 and c1.q.y == 0
    assert c2.p.x == 0 and c2.q.x == 0


def test_third_worked_example(unit_marked):
    c = third_cuts(unit_marked, points=QUARTER_POINTS)
    pts = c.points
    assert (pts["Q"], pts["P'"], pts["P"], pts["Q'"]) == (Point(1, 0), Point(0, 1), Point(-1, 0), Point(0, -1))
    assert pts["X1"] == Point(-HALF, -HALF)
    assert pts["X2"] == Point(HALF, -HALF)
    assert pts["W1"] == Point(-sqrt(3) / 2, -HALF) and pts["W2"] == Point(sqrt(3) / 2, -HALF)
    ends = [cut.q for cut in c.cuts]
    assert ends == [Point(0, 1), Point(-sqrt(3) / 2, -HALF), Point(sqrt(3) / 2, -HALF)]


def test_sixth_worked_example(unit_marked):
    c = sixth_cuts(unit_marked, points=QUARTER_POINTS)
    diam = [(cut.p, cut.q) for cut in c.cuts]
    assert diam[0] == (Point(0, 1), Point(0, -1))
    assert diam[1] == (Point(-sqrt(3) / 2, -HALF), Point(sqrt(3) / 2, HALF))
    assert diam[2] == (Point(sqrt(3) / 2, -HALF), Point(-sqrt(3) / 2, HALF))


@pytest.mark.parametrize("func", [quarter_cuts, third_cuts, sixth_cuts])
def test_unmarked_cake_lacks_capability(func):
    with pytest.raises(CapabilityMissing):
        func(build_single_cake(1, center_marked=False))


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("pieces", [2, 3, 4, 6])
def test_divisions_are_exact(pieces, seed):
    r = Fraction(seed + 2, 3)
    s = build_single_cake(r)
    c = divide(s, pieces, seed=seed)
    cake = s.cake(1)
    o = cake.center
    rays = []
    for cut in c.cuts:
        for end in (cut.p, cut.q):
            if end != o:
                assert cake.on_rim(end)
                rays.append(end - o)
    cos = {Fraction(0): 4, Fraction(-1, 2): 3, Fraction(1, 2): 6, Fraction(-1): 2}
    want = [k for k, v in cos.items() if v == pieces][0]
    # each ray has exactly two neighbours at the sector angle
    for u in rays:
        hits = [v for v in rays if v is not u and (u.dot(v) - cake.radius ** 2 * want).sign() == 0]
        assert len(hits) == (1 if pieces == 2 else 2)


def test_divide_rejects_other_counts(unit_marked):
    with pytest.raises(ValueError, match="unsupported piece count"):
        divide(unit_marked, 5)


def test_divisions_on_a_chain_after_center_recovery():
    s = build_kissing_chain([1, 2, 3])
    base = find_center(s, target=3, seed=1)
    c = third_cuts(s, seed=2, target=3, trace=base.trace)
    assert all(cut.p == s.cake(3).center for cut in c.cuts)
