"""Exact solution counting for Q(x,y) = lambda (mod p) over a box.

count_exact walks the x-range once and solves a quadratic (or linear) in y
per column; count_naive is the independent O(M^2) oracle it is tested
against.
"""

from dataclasses import dataclass, field

from .errors import GuardExceeded
from .modmath import count_class_in_interval, mod_inverse, sqrt_mod

NAIVE_GUARD = 10 ** 4


@dataclass
class CountResult:
    count: int
    solutions: list = None
    degenerate_rows: bool = False


def count_exact(Q, lam, p, box, collect=False):
    """Count box solutions of Q = lam (mod p) in O(M * polylog p).

    Per x-column the congruence is c*y^2 + (bx+e)*y + (ax^2+dx+f-lam) = 0:
    quadratic when p does not divide c, linear when it does, and a full row
    when every coefficient vanishes (flagged as degenerate).
    """
    pm = p if isinstance(p, int) else p.p
    a, b, c, d, e, f = Q.a, Q.b, Q.c, Q.d, Q.e, Q.f
    lo, hi = box.L + 1, box.L + box.M
    total = 0
    sols = [] if collect else None
    degenerate = False

    c_mod = c % pm
    if c_mod != 0:
        inv2c = mod_inverse(2 * c_mod, pm)
        for x in box.x_range:
            bb = (b * x + e) % pm
            cc = (a * x * x + d * x + f - lam) % pm
            disc = (bb * bb - 4 * c_mod * cc) % pm
            for r in sqrt_mod(disc, pm):
                y0 = (r - bb) * inv2c % pm
                n = count_class_in_interval(y0, pm, lo, hi)
                total += n
                if collect and n:
                    first = lo + (y0 - lo) % pm
                    sols.extend((x, y) for y in range(first, hi + 1, pm))
    else:
        for x in box.x_range:
            bb = (b * x + e) % pm
            cc = (a * x * x + d * x + f - lam) % pm
            if bb != 0:
                y0 = (-cc) * mod_inverse(bb, pm) % pm
                n = count_class_in_interval(y0, pm, lo, hi)
                total += n
                if collect and n:
                    first = lo + (y0 - lo) % pm
                    sols.extend((x, y) for y in range(first, hi + 1, pm))
            elif cc == 0:
                degenerate = True
                total += box.M
                if collect:
                    sols.extend((x, y) for y in box.y_range)

    return CountResult(count=total, solutions=sols, degenerate_rows=degenerate)


def count_naive(Q, lam, p, box, collect=False):
    """Double loop over the whole box; oracle only, guarded to M <= 10^4."""
    pm = p if isinstance(p, int) else p.p
    if box.M > NAIVE_GUARD:
        raise GuardExceeded(f"M={box.M} exceeds the naive guard {NAIVE_GUARD}")
    total = 0
    sols = [] if collect else None
    degenerate = False
    c_is_zero = Q.c % pm == 0
    for x in box.x_range:
        row = 0
        for y in box.y_range:
            if (Q(x, y) - lam) % pm == 0:
                total += 1
                row += 1
                if collect:
                    sols.append((x, y))
        if c_is_zero and row == box.M and box.M > 2:
            if (Q.b * x + Q.e) % pm == 0:
                degenerate = True
    return CountResult(count=total, solutions=sols, degenerate_rows=degenerate)
