"""End-to-end acceptance criteria; each test prints one PASS/FAIL line."""

import math
import os
import random
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from cakecut.constructions import (
    bisect_cake,
    chain_traverse,
    quarter_cuts,
    sixth_cuts,
    steiner_midpoint,
    steiner_parallel,
    third_cuts,
)
from cakecut.errors import DegenerateTrapezoid
from cakecut.exactnum import sqrt
from cakecut.geometry import Point, compose_dilations, dilation_of_kissing_pass, midpoint, Dilation
from cakecut.scene import build_kissing_chain, build_single_cake
from cakecut.script import format_program, parse
from cakecut.trace import Step, Trace
from cakecut.verify import audit_trace, equal_sectors, piece_area_oracle, sector_cosines

from conftest import random_radii, random_t, rational_rim_point
from test_constructions import QUARTER_POINTS

CORPUS = sorted((Path(__file__).parent / "corpus").glob("*.cake"))
HALF = Fraction(1, 2)


@pytest.fixture
def verdict(capsys):
    def emit(label, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label} {detail}".rstrip())
        assert ok, f"{label} {detail}"

    return emit


def random_chain(rng, sizes):
    n = rng.choice(sizes)
    return build_kissing_chain(random_radii(rng, n), seed=rng.randint(0, 999))


def test_1_chain_theorem_odd(verdict):
    rng = random.Random(101)
    ok = 0
    for _ in range(200):
        scene = random_chain(rng, [3, 5, 7, 9])
        c1 = scene.cake(1)
        p1 = rational_rim_point(c1, random_t(rng))
        trace = Trace(scene)
        trace.choose(1, p1)
        q = bisect_cake(scene, trace=trace, p1=p1).points["Q"]
        ok += ((midpoint(p1, q) - c1.center).x.sign(), (midpoint(p1, q) - c1.center).y.sign()) == (0, 0)
    verdict("criterion 1: odd chains give diameters", ok == 200, f"{ok}/200")


def test_2_chain_theorem_even(verdict):
    rng = random.Random(202)
    ok = 0
    for _ in range(100):
        scene = random_chain(rng, [4, 6, 8])
        p1 = rational_rim_point(scene.cake(1), random_t(rng))
        ok += chain_traverse(Trace(scene), scene, p1) == p1
    verdict("criterion 2: even chains return to the start", ok == 100, f"{ok}/100")


def test_3_dilation_equivalence(verdict):
    rng = random.Random(303)
    ok = 0
    for _ in range(100):
        scene = random_chain(rng, [3, 4, 5, 6, 7, 8, 9])
        n = scene.n
        g = Dilation.identity()
        for i in range(n):
            ci, cj = scene.cakes[i], scene.cakes[(i + 1) % n]
            g = compose_dilations(dilation_of_kissing_pass(ci, cj, scene.kissing_point(ci.id, cj.id)), g)
        c1 = scene.cake(1)
        if n % 2:
            kind_ok = g.kind == "central" and g.factor == -1 and g.center == c1.center
        else:
            kind_ok = g.is_identity
        pts = [rational_rim_point(c1, random_t(rng)) for _ in range(3)]
        ok += kind_ok and all(g(p) == chain_traverse(Trace(scene), scene, p) for p in pts)
    verdict("criterion 3: composed dilation matches traversal", ok == 100, f"{ok}/100")


def test_4_steiner_tricks(verdict):
    rng = random.Random(404)

    def rpt():
        return Point(Fraction(rng.randint(-60, 60), rng.randint(1, 12)), Fraction(rng.randint(-60, 60), rng.randint(1, 12)))

    scene = build_single_cake(1)
    par = 0
    while par < 200:
        p, q, r = rpt(), rpt(), rpt()
        if p == q or (q - p).cross(r - p).sign() == 0:
            continue
        a = p + (r - p).scale(Fraction(rng.randint(1, 99), 100))
        ln = steiner_parallel(Trace(scene), p, q, midpoint(p, q), r, a)
        if (ln.direction.cross(q - p)).sign() != 0:
            break
        par += 1
    mid = 0
    tries = 0
    while mid < 200 and tries < 1000:
        tries += 1
        p, q, a = rpt(), rpt(), rpt()
        c = a + (q - p).scale(Fraction(rng.randint(-30, 30), 10))
        try:
            z = steiner_midpoint(Trace(scene), p, q, a, c)
        except DegenerateTrapezoid:
            continue
        if (p + q) != z.scale(2):
            break
        mid += 1
    verdict("criterion 4: Steiner parallel and midpoint", par == 200 and mid == 200,
            f"parallel {par}/200, midpoint {mid}/200")


@pytest.mark.parametrize("pieces,func,cosine", [(4, quarter_cuts, 0), (3, third_cuts, -HALF),
                                                (6, sixth_cuts, HALF)])
def test_5_equal_division(verdict, pieces, func, cosine):
    rng = random.Random(500 + pieces)
    exact_ok = 0
    worst = 0.0
    for i in range(50):
        r = Fraction(rng.randint(2, 16), 4)
        scene = build_single_cake(r)
        cake = scene.cake(1)
        cuts = func(scene, seed=rng.randint(0, 10 ** 6)).cuts
        cos = sector_cosines(cake, cuts)
        exact_ok += len(cos) == pieces and all(c == cosine for c in cos) and equal_sectors(cake, cuts, pieces)
        expected = math.pi * float(r) ** 2 / pieces
        areas = piece_area_oracle(cake, cuts, 10 ** 6, rng_seed=i)
        worst = max(worst, max(abs(a - expected) / expected for a in areas))
    verdict(f"criterion 5: {pieces} equal pieces", exact_ok == 50 and worst < 0.005,
            f"exact {exact_ok}/50, worst Monte-Carlo deviation {worst:.5f}")


def test_6_worked_figures(verdict):
    three = build_kissing_chain([1, 1, 1])
    b = bisect_cake(three)
    unit = build_single_cake(1)
    quarter = quarter_cuts(unit, points=QUARTER_POINTS).points
    third = third_cuts(unit, points=QUARTER_POINTS).points
    r3 = sqrt(3)
    checks = {
        "P3": b.points["P3"] == Point(2, r3),
        "Q": b.points["Q"] == Point(-1, 0),
        "B'": quarter["B'"] == Point(0, 2 - r3),
        "chord": third["X1"].y == -HALF and third["X2"].y == -HALF,
        "W": third["W1"] == Point(-r3 / 2, -HALF) and third["W2"] == Point(r3 / 2, -HALF),
    }
    bad = [k for k, v in checks.items() if not v]
    verdict("criterion 6: worked figures reproduce exactly", not bad, f"mismatches: {bad}" if bad else "")


def test_7_etiquette_audit(verdict):
    three = build_kissing_chain([1, 1, 1])
    b = bisect_cake(three, p1=three.kissing_point(1, 2))
    clean = audit_trace(three, b.trace)
    forged = Trace(three)
    forged.steps = list(b.trace.steps)
    # a cut carved straight across the table between two far-apart kissing points
    forged.steps.append(Step(len(forged.steps), "scratch", ("S1", "S2"), (Point(-5, 0), Point(10, 0))))
    flagged = audit_trace(three, forged)
    verdict("criterion 7: etiquette audit", clean.passed and not flagged.passed,
            f"clean violations {len(clean.failures())}, forged flagged {len(flagged.failures())}")


def _mutate(rng, data: bytes) -> bytes:
    b = bytearray(data)
    for _ in range(rng.randint(1, 8)):
        op = rng.randrange(3)
        pos = rng.randrange(len(b) + 1)
        if op == 0 and b:
            b[min(pos, len(b) - 1)] = rng.randrange(256)
        elif op == 1:
            b[pos:pos] = bytes([rng.choice(b" =,#\"/.\n0123456789abkz" + bytes([rng.randrange(256)]))])
        elif b:
            del b[pos:pos + rng.randint(1, 5)]
    return bytes(b)


def test_8_parser_robustness(verdict):
    round_trip = 0
    for path in CORPUS:
        res = parse(path.read_bytes())
        again = parse(format_program(res.program)) if res.ok else None
        round_trip += bool(again and again.ok and again.program == res.program)
    rng = random.Random(808)
    seeds = [p.read_bytes() for p in CORPUS]
    crashes = 0
    for i in range(100_000):
        if i % 2:
            data = rng.randbytes(rng.randrange(0, 200))
        else:
            data = _mutate(rng, rng.choice(seeds))
        try:
            res = parse(data)
            assert res.ok or res.diagnostics
        except Exception:
            crashes += 1
    verdict("criterion 8: parser round-trip and fuzz", round_trip == 20 and crashes == 0,
            f"round-trip {round_trip}/20, crashes {crashes}/100000")


def test_9_determinism(verdict, tmp_path):
    outs = []
    for run, hashseed in enumerate(("0", "12345")):
        out = tmp_path / f"run{run}"
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        for path in CORPUS:
            proc = subprocess.run([sys.executable, "-m", "cakecut", "run", str(path), "--seed", "0", "--out", str(out)],
                                  env=env, capture_output=True, text=True)
            assert proc.returncode == 0, (path.name, proc.stderr)
        outs.append(out)
    files = sorted(p.name for p in outs[0].iterdir())
    same = sorted(p.name for p in outs[1].iterdir()) == files and all(
        (outs[0] / f).read_bytes() == (outs[1] / f).read_bytes() for f in files)
    svgs = sum(f.endswith(".svg") for f in files)
    verdict("criterion 9: byte-identical artifacts across runs", same,
            f"{len(files)} files ({svgs} SVG) compared")
