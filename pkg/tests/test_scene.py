import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cakecut.errors import ChainInfeasible, SceneError, TooFewCircles
from cakecut.exactnum import CR, sqrt
from cakecut.geometry import Point, are_kissing
from cakecut.scene import Scene, build_kissing_chain, build_single_cake, rational_unit, validate_scene

RADII = st.lists(st.fractions(min_value=Fraction(1, 2), max_value=4, max_denominator=8), min_size=3, max_size=9)


def test_three_unit_cakes(three_unit):
    s = three_unit
    assert [c.center for c in s.cakes] == [Point(0, 0), Point(2, 0), Point(1, sqrt(3))]
    half = Fraction(1, 2)
    assert [k for _, _, k in s.kissing_points] == [
        Point(1, 0), Point(Fraction(3, 2), sqrt(3) * half), Point(half, sqrt(3) * half)]
    assert validate_scene(s) == []


def test_radii_123():
    s = build_kissing_chain([1, 2, 3])
    assert [c.center for c in s.cakes] == [Point(0, 0), Point(3, 0), Point(0, 4)]
    assert [k for _, _, k in s.kissing_points] == [
        Point(1, 0), Point(Fraction(9, 5), Fraction(8, 5)), Point(0, 1)]


def test_four_unit_cakes():
    s = build_kissing_chain([1, 1, 1, 1])
    assert validate_scene(s) == []
    c = [x.center for x in s.cakes]
    assert c[0] == Point(0, 0) and c[1].y == 0 and c[1].x > 0
    for i, j in ((0, 2), (1, 3)):
        assert (c[i] - c[j]).norm2() > 4


def test_build_errors():
    with pytest.raises(TooFewCircles, match="chain needs at least 3 cakes"):
        build_kissing_chain([1, 1])
    with pytest.raises(SceneError):
        build_kissing_chain([1, -1, 1])


def test_infeasible_when_search_budget_exhausted():
    # side lengths r_i + r_(i+1) always satisfy the polygon inequality for positive
    # radii, so infeasibility can only come from the placement search giving up
    with pytest.raises(ChainInfeasible):
        build_kissing_chain([1, 1, 1, 1], max_attempts=0)


def test_extreme_radii_still_place():
    for radii in ([Fraction(1, 1000), 1, Fraction(1, 1000), 1], [1, 1, 1, 50]):
        assert validate_scene(build_kissing_chain(radii)) == []


@pytest.mark.parametrize("radii", [
    [1, 1000, 1, 1000, 1],
    [1, 1000, 1, 1000, 1, 1000, 1],
    [1, 100, 1, 100, 1, 100, 1, 100, 1],
    [1, 1000, 1, 1000, 1, 1000, 1, 1000, 1],
])
def test_nearly_rigid_chains_place(radii):
    # big cakes separated by tiny ones leave only a sliver of valid shapes
    s = build_kissing_chain(radii)
    assert validate_scene(s) == []
    assert len(s.kissing_points) == len(radii)


def test_single_cake():
    s = build_single_cake(1)
    assert s.topology == "single" and s.cake(1).center_marked
    assert validate_scene(s) == []
    assert not build_single_cake(1, center_marked=False).cake(1).center_marked
    with pytest.raises(SceneError):
        build_single_cake(0)


def test_validate_reports_missing_kiss():
    s = Scene.chain_from_centers([Point(0, 0), Point(2, 0), Point(4, 0)], [1, 1, 1])
    assert "pair (3,1) not kissing" in validate_scene(s)


def test_validate_reports_overlap():
    # rhombus of side 2 with a short diagonal: c1 and c3 overlap
    a = Fraction(3, 5), Fraction(4, 5)  # unit direction at ~53 degrees
    z2 = Point(2, 0)
    z4 = Point(2 * a[0], 2 * a[1])
    z3 = z2 + z4
    s = Scene.chain_from_centers([Point(0, 0), z2, z3, z4], [1, 1, 1, 1])
    problems = validate_scene(s)
    assert any("non-consecutive pair (2,4) overlaps" in p for p in problems), problems
    assert not any("not kissing" in p for p in problems)


def test_json_roundtrip(three_unit):
    doc = json.loads(three_unit.dumps())
    assert doc["schema"] == "cakecut.scene/1"
    back = Scene.from_json(doc)
    assert [c.center for c in back.cakes] == [c.center for c in three_unit.cakes]
    assert back.dumps() == three_unit.dumps()


def test_rational_unit_is_exact():
    for theta in (0.1, 1.0, 2.5, -3.0):
        c, s = rational_unit(theta, 4096)
        assert c * c + s * s == 1


@settings(max_examples=40)
@given(RADII, st.integers(0, 5))
def test_chains_are_valid_and_deterministic(radii, seed):
    try:
        s = build_kissing_chain(radii, seed=seed)
    except ChainInfeasible:
        return
    assert validate_scene(s) == []
    n = s.n
    for i in range(n):
        ci, cj = s.cakes[i], s.cakes[(i + 1) % n]
        rsum = ci.radius + cj.radius
        assert ((cj.center - ci.center).norm2() - rsum * rsum).sign() == 0
        assert are_kissing(ci, cj) == s.kissing_point(ci.id, cj.id)
    assert s.cakes[0].center == Point(0, 0) and s.cakes[1].center.y == 0
    assert build_kissing_chain(radii, seed=seed).dumps() == s.dumps()


def test_random_chains_rarely_infeasible():
    rng = random.Random(5)
    failures = 0
    for _ in range(60):
        n = rng.randint(3, 9)
        radii = [Fraction(rng.randint(2, 16), 4) for _ in range(n)]
        try:
            build_kissing_chain(radii, seed=rng.randint(0, 99))
        except ChainInfeasible:
            failures += 1
    assert failures == 0
