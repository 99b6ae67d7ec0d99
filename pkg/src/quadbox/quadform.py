"""Quadratic-form algebra and reduction to a standard congruence shape.

A form ax^2 + bxy + cy^2 + dx + ey + f with discriminant D = b^2 - 4ac != 0
is reduced, modulo an odd prime p, to one of three standard congruences:

  norm:        X^2 - D1*Y^2 = mu (mod p)   with D1 square-free, not 0 or 1
  hyperbolic:  X*Y          = mu (mod p)
  difference:  X^2 - Y^2    = mu (mod p)

together with an integer affine map (x, y) -> (X, Y) and a scale s such that
the standard polynomial equals s*(Q(x,y) - lambda) mod p identically.  The
map constants are derived symbolically here and pinned by that identity, not
taken on faith from any printed formula.
"""

from dataclasses import dataclass, field
from math import isqrt

from .errors import DegenerateForm, ReducibleModP, SmallPrime
from .modmath import PrimeModulus


@dataclass(frozen=True)
class QuadraticForm:
    a: int
    b: int
    c: int
    d: int = 0
    e: int = 0
    f: int = 0
    allow_degenerate: bool = False

    def __post_init__(self):
        if self.discriminant() == 0 and not self.allow_degenerate:
            raise DegenerateForm(
                "discriminant b^2 - 4ac is 0 (pass allow_degenerate for the "
                "parabola experiment)"
            )

    def discriminant(self):
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x, y):
        return (self.a * x * x + self.b * x * y + self.c * y * y
                + self.d * x + self.e * y + self.f)

    def __str__(self):
        return (f"{self.a}x^2 + {self.b}xy + {self.c}y^2 + "
                f"{self.d}x + {self.e}y + {self.f}")


@dataclass(frozen=True)
class Box:
    """x in [K+1, K+M], y in [L+1, L+M]."""

    K: int
    L: int
    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("M must be >= 1")

    @property
    def x_range(self):
        return range(self.K + 1, self.K + self.M + 1)

    @property
    def y_range(self):
        return range(self.L + 1, self.L + self.M + 1)

    def contains(self, x, y):
        return (self.K + 1 <= x <= self.K + self.M
                and self.L + 1 <= y <= self.L + self.M)


@dataclass(frozen=True)
class AffineMap:
    """(X, Y) = (a1*x + b1*y + g1, a2*x + b2*y + g2)."""

    a1: int
    b1: int
    g1: int
    a2: int
    b2: int
    g2: int

    def __call__(self, x, y):
        return (self.a1 * x + self.b1 * y + self.g1,
                self.a2 * x + self.b2 * y + self.g2)

    def det(self):
        return self.a1 * self.b2 - self.a2 * self.b1

    def invert(self, X, Y):
        """Rational inverse; returns (x, y) or None if not integral."""
        det = self.det()
        nx = self.b2 * (X - self.g1) - self.b1 * (Y - self.g2)
        ny = -self.a2 * (X - self.g1) + self.a1 * (Y - self.g2)
        if nx % det or ny % det:
            return None
        return nx // det, ny // det


def _linear_image(alpha, beta, gamma, box):
    """Exact [min, max] of alpha*x + beta*y + gamma over the box."""
    xs = (box.K + 1, box.K + box.M)
    ys = (box.L + 1, box.L + box.M)
    lo = alpha * (xs[0] if alpha >= 0 else xs[1]) + beta * (ys[0] if beta >= 0 else ys[1]) + gamma
    hi = alpha * (xs[1] if alpha >= 0 else xs[0]) + beta * (ys[1] if beta >= 0 else ys[0]) + gamma
    return (lo, hi)


@dataclass(frozen=True)
class StandardInstance:
    kind: str                   # "norm" | "hyperbolic" | "difference"
    D: int                      # square-free, not 0/1, for norm; 1 for difference; 0 for hyperbolic
    mu: int
    map: AffineMap
    scale: int
    y_stretch: int
    x_interval: tuple
    y_interval: tuple

    def standard_value(self, X, Y):
        if self.kind == "hyperbolic":
            return X * Y
        if self.kind == "difference":
            return X * X - Y * Y
        return X * X - self.D * Y * Y

    def identity_holds(self, Q, lam, p, x, y):
        """The defining scaling identity at one point (x, y)."""
        X, Y = self.map(x, y)
        lhs = self.standard_value(X, Y) - self.mu
        rhs = self.scale * (Q(x, y) - lam)
        return (lhs - rhs) % p == 0


def discriminant(Q):
    return Q.discriminant()


def is_absolutely_irreducible(Q, lam, p):
    """Non-degeneracy of the conic Q - lambda over the closure of F_p.

    Tested as rank 3 of the associated symmetric 3x3 integer matrix, i.e.
    its determinant is nonzero mod p.
    """
    a, b, c, d, e, f = Q.a, Q.b, Q.c, Q.d, Q.e, Q.f
    g = f - lam
    det = (2 * a * (2 * c * 2 * g - e * e)
           - b * (b * 2 * g - e * d)
           + d * (b * e - 2 * c * d))
    return det % p != 0


def squarefree_extract(D):
    """D = D1 * k^2 with D1 square-free, k >= 1, by trial division."""
    if D == 0:
        raise ValueError("D must be nonzero")
    sign = -1 if D < 0 else 1
    n = abs(D)
    D1 = 1
    k = 1
    q = 2
    while q * q <= n:
        if n % q == 0:
            exp = 0
            while n % q == 0:
                n //= q
                exp += 1
            k *= q ** (exp // 2)
            if exp % 2:
                D1 *= q
        q += 1 if q == 2 else 2
    D1 *= n
    return sign * D1, k


def standardize(Q, lam, p, box):
    """Reduce Q(x,y) = lam (mod p) on a box to a StandardInstance.

    Follows the three-way branch on the quadratic part: a = c = 0 gives the
    hyperbolic product form; otherwise completion of the square gives the
    norm form, with square-free extraction of the discriminant and the
    difference kind when the square-free part is 1.
    """
    pm = p if isinstance(p, int) else p.p
    a, b, c, d, e, f = Q.a, Q.b, Q.c, Q.d, Q.e, Q.f
    D = Q.discriminant()
    if D == 0:
        raise DegenerateForm("discriminant is 0")
    if not is_absolutely_irreducible(Q, lam, pm):
        raise ReducibleModP(f"{Q} - {lam} is reducible over the closure of F_{pm}")
    if pm <= D:
        raise SmallPrime(f"p={pm} <= D={D}, outside the reduction's regime")
    if D % pm == 0:
        raise SmallPrime(f"p={pm} divides D={D}")

    if a == 0 and c == 0:
        # b*x*y + d*x + e*y + f = lam;  (bx+e)(by+d) = b*(Q-lam) + mu
        if b % pm == 0:
            raise SmallPrime(f"p={pm} divides b")
        mu = (b * lam - b * f + e * d) % pm
        if mu == 0:
            raise ReducibleModP("mu = 0 mod p: product form splits into lines")
        amap = AffineMap(b, 0, e, 0, b, d)
        return StandardInstance(
            kind="hyperbolic", D=0, mu=mu, map=amap, scale=b, y_stretch=1,
            x_interval=_linear_image(b, 0, e, box),
            y_interval=_linear_image(0, b, d, box),
        )

    # Orient so the x^2 coefficient is nonzero; a = 0, c != 0 swaps roles.
    swap = a == 0
    if swap:
        a, c = c, a
        d, e = e, d
    if (2 * a * D) % pm == 0:
        raise SmallPrime(f"p={pm} divides 2aD")

    # 4aD*(Q - lam) = (D*y - (2ae-bd))^2 - D*(2ax+by+d)^2 + 4aD*lam
    #                 - (2ae-bd)^2 - D*(4af-d^2),  so with
    # X = D*y - (2ae-bd), Yu = 2ax+by+d, s = -4aD:
    #   X^2 - D*Yu^2 - mu = s*(Q - lam),  mu = (2ae-bd)^2 + D*(4af-d^2) - 4aD*lam
    w = 2 * a * e - b * d
    s = -4 * a * D
    mu = (w * w + D * (4 * a * f - d * d) - 4 * a * D * lam) % pm

    D1, k = squarefree_extract(D)
    # X^2 - D*Yu^2 = X^2 - D1*(k*Yu)^2: stretch the Y row by k.
    if swap:
        x_row = (D, 0, -w)          # X depends on the original x (swapped y')
        y_row = (k * b, k * 2 * a, k * d)
    else:
        x_row = (0, D, -w)
        y_row = (k * 2 * a, k * b, k * d)
    amap = AffineMap(*x_row, *y_row)
    assert amap.det() % pm != 0

    kind = "difference" if D1 == 1 else "norm"
    if kind == "difference" and mu == 0:
        raise ReducibleModP("mu = 0 mod p: difference of squares splits")
    inst = StandardInstance(
        kind=kind, D=D1, mu=mu, map=amap, scale=s, y_stretch=k,
        x_interval=_linear_image(*x_row, box),
        y_interval=_linear_image(*y_row, box),
    )
    # Spot-check the derived constants before handing the instance out.
    for x, y in ((0, 0), (1, 0), (0, 1), (2, 3)):
        assert inst.identity_holds(Q, lam, pm, x, y)
    return inst
