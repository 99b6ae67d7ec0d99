"""Modular arithmetic over an odd prime.

Residues are plain ints normalized to [0, p-1]; signed representatives in
(-p/2, p/2] come only from signed_rep().  Everything here is a pure function.
"""

import random

from .errors import EmptyInterval, NotPrime, ZeroInverse

# Witnesses proving primality for every n < 3.3 * 10^24 (covers 64-bit).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_PROBABLE_ROUNDS = 40


def is_prime(n):
    """Miller-Rabin: deterministic below 2^64, 40 random rounds above.

    For n >= 2^64 the answer is probabilistic with error < 4^-40.
    """
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < 1 << 64:
        witnesses = _MR_WITNESSES
    else:
        rng = random.Random(n)
        witnesses = [rng.randrange(2, n - 1) for _ in range(_PROBABLE_ROUNDS)]
    for a in witnesses:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeModulus:
    """An odd prime modulus, verified at construction."""

    __slots__ = ("p",)

    def __init__(self, p):
        if p == 2 or not is_prime(p):
            raise NotPrime(f"{p} is not an odd prime")
        self.p = p

    def __repr__(self):
        return f"PrimeModulus({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeModulus) and self.p == other.p

    def __hash__(self):
        return hash(self.p)


def signed_rep(a, p):
    """Representative of a mod p in (-p/2, p/2)."""
    a %= p
    return a - p if a > p // 2 else a


def mod_inverse(a, p):
    """Inverse of a mod p; raises ZeroInverse when p | a."""
    a %= p
    if a == 0:
        raise ZeroInverse(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


def legendre(a, p):
    """Legendre symbol (a/p) via Euler's criterion: 0, 1, or -1."""
    a %= p
    if a == 0:
        return 0
    ls = pow(a, (p - 1) // 2, p)
    return -1 if ls == p - 1 else ls


def _nonresidue(p):
    # Deterministic scan keeps sqrt_mod reproducible.
    n = 2
    while legendre(n, p) != -1:
        n += 1
    return n


def sqrt_mod(a, p):
    """All square roots of a mod p, as a set of size 0, 1, or 2.

    Tonelli-Shanks with a p % 4 == 3 shortcut; the quadratic non-residue
    needed by Tonelli-Shanks is found by scanning 2, 3, 4, ...
    """
    a %= p
    if a == 0:
        return {0}
    if legendre(a, p) == -1:
        return set()
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return {r, p - r}

    s = p - 1
    e = 0
    while s % 2 == 0:
        s //= 2
        e += 1
    g = pow(_nonresidue(p), s, p)
    x = pow(a, (s + 1) // 2, p)
    b = pow(a, s, p)
    r = e
    while b != 1:
        m = 0
        t = b
        while t != 1:
            t = t * t % p
            m += 1
        gs = pow(g, 1 << (r - m - 1), p)
        g = gs * gs % p
        x = x * gs % p
        b = b * g % p
        r = m
    return {x, p - x}


def count_class_in_interval(r, p, lo, hi):
    """|{n in [lo, hi] : n = r mod p}| by the floor formula."""
    if lo > hi:
        raise EmptyInterval(f"[{lo}, {hi}] is empty")
    r %= p
    return (hi - r) // p - (lo - 1 - r) // p
