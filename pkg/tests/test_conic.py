import math
import random

import pytest

from quadbox.conic import (LatticePoint, arc_length, branch_id, chord,
                           class_representatives, enumerate_in_box_orbit,
                           enumerate_in_box_scan, fundamental_solution,
                           is_square, primitive_reduce, solve_xy_in_box,
                           verify_small_arc_lemma)
from quadbox.errors import (DifferentBranch, DTooSmall, GuardExceeded,
                            NotApplicable, NotSquareFree)
from quadbox.quadform import squarefree_extract

SQUAREFREE = [D for D in range(2, 51) if squarefree_extract(D)[1] == 1]


def _pell_brute(D, vmax=10 ** 6):
    for v in range(1, vmax):
        t = 1 + D * v * v
        if is_square(t):
            return (math.isqrt(t), v)
    raise AssertionError


def test_fundamental_examples():
    assert (fundamental_solution(2).u0, fundamental_solution(2).v0) == (3, 2)
    assert (fundamental_solution(3).u0, fundamental_solution(3).v0) == (2, 1)
    u = fundamental_solution(61)
    assert (u.u0, u.v0) == (1766319049, 226153980)
    assert u.u0 ** 2 - 61 * u.v0 ** 2 == 1


def test_fundamental_matches_brute_force():
    for D in SQUAREFREE:
        unit = fundamental_solution(D)
        assert unit.u0 ** 2 - D * unit.v0 ** 2 == 1
        assert (unit.u0, unit.v0) == _pell_brute(D)


def test_fundamental_rejects():
    with pytest.raises(NotSquareFree):
        fundamental_solution(12)
    with pytest.raises(DTooSmall):
        fundamental_solution(1)


def test_scan_examples():
    assert enumerate_in_box_scan(2, 7, (1, 10), (1, 10)) == [
        LatticePoint(3, 1), LatticePoint(5, 3)]
    pts = enumerate_in_box_scan(-1, 25, (-5, 5), (-5, 5))
    assert len(pts) == 12
    assert enumerate_in_box_scan(2, 1, (1, 1), (0, 0)) == [LatticePoint(1, 0)]


def test_scan_guard():
    with pytest.raises(GuardExceeded):
        enumerate_in_box_scan(2, 7, (0, 2 * 10 ** 7), (0, 2 * 10 ** 7))


def test_orbit_examples():
    assert enumerate_in_box_orbit(2, 7, (1, 100), (1, 100)) == [
        LatticePoint(3, 1), LatticePoint(5, 3), LatticePoint(13, 9),
        LatticePoint(27, 19), LatticePoint(75, 53)]
    pts = enumerate_in_box_orbit(2, 1, (0, 20), (0, 20))
    assert pts == [LatticePoint(1, 0), LatticePoint(3, 2), LatticePoint(17, 12)]
    pts = enumerate_in_box_orbit(3, -2, (0, 50), (0, 50))
    assert pts[:3] == [LatticePoint(1, 1), LatticePoint(5, 3),
                       LatticePoint(19, 11)]
    assert pts == enumerate_in_box_scan(3, -2, (0, 50), (0, 50))


def test_orbit_not_applicable():
    with pytest.raises(NotApplicable):
        enumerate_in_box_orbit(-1, 25, (0, 5), (0, 5))
    with pytest.raises(NotApplicable):
        enumerate_in_box_orbit(2, 0, (0, 5), (0, 5))


def test_strategy_agreement():
    rng = random.Random(14)
    for D in (2, 3, 5, 6, 7, 10):
        for _ in range(120):
            n = rng.randrange(-500, 501)
            if n == 0:
                continue
            xlo = rng.randrange(-1000, 900)
            ylo = rng.randrange(-1000, 900)
            xI = (xlo, xlo + rng.randrange(1, 1000))
            yI = (ylo, ylo + rng.randrange(1, 1000))
            assert (enumerate_in_box_orbit(D, n, xI, yI)
                    == enumerate_in_box_scan(D, n, xI, yI)), (D, n, xI, yI)


def test_primitive_reduce_examples():
    assert primitive_reduce(2, LatticePoint(5, 3)) == LatticePoint(3, -1)
    assert primitive_reduce(2, LatticePoint(3, 1)) == LatticePoint(3, 1)


def test_primitive_reduce_properties():
    rng = random.Random(15)
    for D in (2, 3, 5, 6, 7, 10, 13):
        unit = fundamental_solution(D)
        u0, v0 = unit.u0, unit.v0
        for _ in range(60):
            n = rng.randrange(-300, 301)
            if n == 0:
                continue
            for pt in class_representatives(D, n, unit):
                if pt.x == 0 and pt.y == 0:
                    continue
                red = primitive_reduce(D, pt)
                # norm preserved
                assert red.x ** 2 - D * red.y ** 2 == n
                # idempotent
                assert primitive_reduce(D, red) == red
                # orbit propagation regenerates the original (up to sign)
                x, y = red.x, red.y
                seen = {(x, y), (-x, -y)}
                for _ in range(80):
                    x, y = x * u0 + y * v0 * D, y * u0 + x * v0
                    seen.add((x, y))
                    seen.add((-x, -y))
                    if abs(x) > abs(pt.x) + abs(pt.y) * D:
                        break
                x, y = red.x, red.y
                for _ in range(80):
                    x, y = x * u0 - y * v0 * D, y * u0 - x * v0
                    seen.add((x, y))
                    seen.add((-x, -y))
                    if abs(x) > abs(pt.x) + abs(pt.y) * D:
                        break
                assert (pt.x, pt.y) in seen


def test_solve_xy_examples():
    assert len(solve_xy_in_box(12, (1, 12), (1, 12))) == 6
    assert solve_xy_in_box(-1, (-1, 1), (-1, 1)) == [
        LatticePoint(-1, 1), LatticePoint(1, -1)]
    # semiprime: 4 positive-quadrant divisor pairs
    assert len(solve_xy_in_box(101 * 103, (1, 101 * 103), (1, 101 * 103))) == 4


def test_solve_xy_against_scan():
    rng = random.Random(16)
    for _ in range(200):
        n = rng.randrange(-10 ** 5, 10 ** 5)
        if n == 0:
            continue
        xI = (rng.randrange(-300, 0), rng.randrange(1, 300))
        yI = (rng.randrange(-300, 0), rng.randrange(1, 300))
        direct = sorted(LatticePoint(x, n // x)
                        for x in range(xI[0], xI[1] + 1)
                        if x != 0 and n % x == 0
                        and yI[0] <= n // x <= yI[1])
        assert solve_xy_in_box(n, xI, yI) == direct


def test_arc_length_examples():
    p34, p43, p50 = LatticePoint(3, 4), LatticePoint(4, 3), LatticePoint(5, 0)
    assert arc_length(-1, 25, p34, p34) == 0.0
    assert arc_length(-1, 25, p34, p43) == pytest.approx(
        5 * math.acos(24 / 25), rel=1e-9)
    assert arc_length(-1, 25, p34, p50) == pytest.approx(
        5 * math.acos(15 / 25), rel=1e-9)


def test_arc_length_properties():
    # arc >= chord; additivity along ordered triples
    pts = [LatticePoint(5, 0), LatticePoint(4, 3), LatticePoint(3, 4),
           LatticePoint(0, 5)]
    for i in range(len(pts) - 1):
        a = arc_length(-1, 25, pts[i], pts[i + 1])
        assert a >= chord(pts[i], pts[i + 1]) - 1e-12
    whole = arc_length(-1, 25, pts[0], pts[3])
    parts = sum(arc_length(-1, 25, pts[i], pts[i + 1]) for i in range(3))
    assert whole == pytest.approx(parts, rel=1e-6)
    # hyperbola branch
    h1, h2, h3 = (LatticePoint(3, 1), LatticePoint(5, 3), LatticePoint(13, 9))
    w = arc_length(2, 7, h1, h3)
    assert w == pytest.approx(arc_length(2, 7, h1, h2)
                              + arc_length(2, 7, h2, h3), rel=1e-6)
    assert w >= chord(h1, h3) - 1e-12


def test_arc_length_branch_mismatch():
    with pytest.raises(DifferentBranch):
        arc_length(2, 7, LatticePoint(3, 1), LatticePoint(-3, 1))
    assert branch_id(2, 7, LatticePoint(-3, 1)) == -1
    assert branch_id(2, -2, LatticePoint(1, -1)) == -1


def test_verify_lemma_circle():
    rep = verify_small_arc_lemma(-1, 25)
    assert rep.violations == []
    assert rep.triples_checked > 0


def test_verify_lemma_d2():
    rep = verify_small_arc_lemma(2, 2000)
    assert rep.violations == []
    assert rep.curves_checked > 100
