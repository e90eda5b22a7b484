"""Small integer helpers used across the package."""

from math import isqrt


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def valuation(n: int, p: int) -> int:
    """Exponent of the prime p in the nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_sqrt(d: int, p: int, prec: int) -> int:
    """Return s with s*s == d modulo p**prec, lifted from a root modulo p (or 8).

    d must be a nonzero square residue coprime to p; for p == 2 this means
    d % 8 == 1.  The result is congruent to a genuine p-adic square root of d
    modulo p**prec (modulo 2**prec for p == 2).
    """
    if p == 2:
        if d % 8 != 1:
            raise ValueError(f"{d} is not a 2-adic square")
        # roots mod 2^t (t >= 3) are correct mod 2^(t-1); lift with one spare bit
        s, t = 1, 3
        while t < prec + 1:
            if (s * s - d) % (1 << (t + 1)):
                s += 1 << (t - 1)
            t += 1
        return s % (1 << prec)
    roots = [r for r in range(1, p) if (r * r - d) % p == 0]
    if not roots:
        raise ValueError(f"{d} is not a square modulo {p}")
    s, mod = roots[0], p
    inv2s = pow(2 * s, -1, p)
    for _ in range(1, prec):
        mod *= p
        # Newton step: s <- s - (s^2 - d)/(2s), inverse of 2s taken mod p
        s = (s - (s * s - d) * inv2s) % mod
        inv2s = pow(2 * s, -1, mod)
    return s % p**prec
