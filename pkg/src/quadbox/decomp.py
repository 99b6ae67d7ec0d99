"""Decomposition of x^2 - D*y^2 = lam (mod p) over a box into Diophantine
norm equations.

The chain: recenter the box to 1 <= x, y <= M, approximate (K, L) by a
pigeonhole triple (t, k0, l0), lift the congruence to the integers, and for
each z in an exactly-computed range obtain

    (t*x + k0)^2 - D*(t*y + l0)^2 = n_z,   n_z = t*(mu0 + p*z) + k0^2 - D*l0^2.

Every step is an equivalence, so the union of the per-z solution sets maps
bijectively back onto the congruence's solutions.  z endpoints use exact
rational arithmetic; an off-by-one there silently loses solutions.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .conic import LatticePoint, is_square
from .errors import InversionMismatch, NotFound, RegimeOverflow
from .modmath import signed_rep
from .quadform import Box

SMALL_M = "SmallM"
LARGE_M = "LargeM"


@dataclass(frozen=True)
class PigeonholeData:
    T: int
    t: int
    k0: int
    l0: int
    p: int


@dataclass(frozen=True)
class NormEquationInstance:
    D: int
    z: int
    n: int
    t: int
    k0: int
    l0: int
    mu0: int
    box: Box


def choose_T(M, p, D):
    """Pick the lift parameter T and its regime.

    Small-M regime (integer-exact test 256*M^4*(1+|D|)^3 < p) takes
    T = 8*(1+|D|)*M, which forces |z| < 1; otherwise T = ceil((p/M)^(1/3)).
    """
    pm = p if isinstance(p, int) else p.p
    w = 1 + abs(D)
    if 256 * M ** 4 * w ** 3 < pm:
        T = 8 * w * M
        regime = SMALL_M
    else:
        T = max(1, round((pm / M) ** (1 / 3)))
        while T ** 3 * M < pm:
            T += 1
        while T > 1 and (T - 1) ** 3 * M >= pm:
            T -= 1
        regime = LARGE_M
    if T >= pm:
        raise RegimeOverflow(f"T={T} >= p={pm}")
    return T, regime


def find_pigeonhole(K, L, p, T):
    """Smallest t in [1, T^2 - 1] with t*K and t*L congruent to signed
    residues of absolute value < p/T."""
    pm = p if isinstance(p, int) else p.p
    if not 1 <= T < pm:
        raise NotFound(f"need 1 <= T < p, got T={T}, p={pm}")
    for t in range(1, T * T):
        k0 = signed_rep(t * K, pm)
        l0 = signed_rep(t * L, pm)
        if abs(k0) * T < pm and abs(l0) * T < pm:
            return PigeonholeData(T=T, t=t, k0=k0, l0=l0, p=pm)
    raise NotFound("pigeonhole scan failed; this contradicts t < T^2 existence")


def z_bound(D, T, M, p):
    """Exact rational bound B with |z| < B."""
    w = 1 + abs(D)
    return (Fraction(w * T * T * M * M, p)
            + Fraction(2 * w * M, T)
            + Fraction(1, 2))


def decompose(D, lam, p, box, T=None):
    """All NormEquationInstances for x^2 - D*y^2 = lam (mod p) on the box.

    Returns (pigeonhole, instances).  When T is None it comes from choose_T.
    """
    pm = p if isinstance(p, int) else p.p
    K, L, M = box.K, box.L, box.M
    if T is None:
        T, _ = choose_T(M, pm, D)
    mu = (lam - (K * K - D * L * L)) % pm
    ph = find_pigeonhole(K, L, pm, T)
    t, k0, l0 = ph.t, ph.k0, ph.l0
    mu0 = signed_rep(t * mu, pm)
    zmax = math.ceil(z_bound(D, T, M, pm)) - 1
    base = k0 * k0 - D * l0 * l0
    instances = [
        NormEquationInstance(D=D, z=z, n=t * (mu0 + pm * z) + base,
                             t=t, k0=k0, l0=l0, mu0=mu0, box=box)
        for z in range(-zmax, zmax + 1)
    ]
    return ph, instances


def solve_instance(inst):
    """Lattice points (X, Y) = (t*x + k0, t*y + l0), 1 <= x, y <= M, on
    X^2 - D*Y^2 = n, by scanning the x progression."""
    D, n, t, k0, l0, M = inst.D, inst.n, inst.t, inst.k0, inst.l0, inst.box.M
    if n == 0:
        # D non-square forces X = Y = 0: at most the single rational point
        if k0 % t == 0 and l0 % t == 0:
            x, y = -(k0 // t), -(l0 // t)
            if 1 <= x <= M and 1 <= y <= M:
                return [LatticePoint(0, 0)]
        return []
    found = []
    for x in range(1, M + 1):
        X = t * x + k0
        rhs = X * X - n
        if rhs % D:
            continue
        s = rhs // D
        if s < 0 or not is_square(s):
            continue
        r = isqrt(s)
        for Y in {r, -r}:
            if (Y - l0) % t == 0 and 1 <= (Y - l0) // t <= M:
                found.append(LatticePoint(X, Y))
    return sorted(found)


def recompose(solved):
    """Invert the progression substitution: {(inst, points)} -> set of (x, y).

    Raises InversionMismatch if a claimed point is off the progression
    lattice, which would indicate an upstream bug.
    """
    out = set()
    for inst, points in solved:
        t, k0, l0 = inst.t, inst.k0, inst.l0
        for pt in points:
            if (pt.x - k0) % t or (pt.y - l0) % t:
                raise InversionMismatch(f"{pt} is not on the t={t} lattice")
            out.add(((pt.x - k0) // t, (pt.y - l0) // t))
    return out
