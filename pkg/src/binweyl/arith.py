"""Integer arithmetic primitives: factorization, primality, modular square roots.

Everything here is exact integer arithmetic.  Moduli in scope stay below
10**12, so trial division up to 10**6 followed by a deterministic
Miller-Rabin check of the cofactor is always sufficient.
"""

from __future__ import annotations

import math
from functools import lru_cache

# Deterministic Miller-Rabin witnesses, valid for all n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_LIMIT = 10**6


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (valid well beyond 10**12)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
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


@lru_cache(maxsize=100_000)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization ((p, exponent), ...) with p increasing.

    Trial division up to 10**6; the remaining cofactor of any n < 10**12
    is prime or 1.  Larger inputs are rejected if the cofactor fails a
    Miller-Rabin check (a composite cofactor would need factors > 10**6).
    """
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    p = 5
    # 6k +- 1 wheel
    while p <= _TRIAL_LIMIT and p * p <= n:
        for q in (p, p + 2):
            if n % q == 0:
                e = 0
                while n % q == 0:
                    n //= q
                    e += 1
                out.append((q, e))
        p += 6
    if n > 1:
        if not is_prime(n):
            raise ValueError(f"cofactor {n} is composite with factors > 10**6")
        out.append((n, 1))
    out.sort()
    return tuple(out)


def divisors(n: int) -> list[int]:
    """All positive divisors of n, sorted."""
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b)."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    return old_r, old_x, old_y


def inv_mod(a: int, m: int) -> int:
    """Inverse of a modulo m; raises if gcd(a, m) != 1."""
    g, x, _ = ext_gcd(a % m, m)
    if g != 1:
        raise ValueError(f"{a} is not invertible mod {m}")
    return x % m


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for odd prime p, in {-1, 0, 1}."""
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def sqrt_mod(a: int, p: int) -> list[int]:
    """Square roots of a modulo an odd prime p, smaller root first.

    Returns [] when a is a non-residue, [0] when p | a, and the two
    roots [r, p - r] otherwise (Tonelli-Shanks for p = 1 mod 4).
    """
    a %= p
    if a == 0:
        return [0]
    if legendre(a, p) != 1:
        return []
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        # Tonelli-Shanks
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while legendre(z, p) != -1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    r %= p
    return sorted({r, p - r})


def smallest_prime_factors(limit: int):
    """Sieve of smallest prime factors for 0..limit (numpy int64 array)."""
    import numpy as np

    spf = np.zeros(limit + 1, dtype=np.int64)
    spf[1] = 1
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i : limit + 1 : i][spf[i : limit + 1 : i] == 0] = i
    return spf


def primes_up_to(limit: int) -> list[int]:
    """Primes <= limit by sieve."""
    import numpy as np

    if limit < 2:
        return []
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if mask[i]:
            mask[i * i :: i] = False
    return [int(p) for p in np.nonzero(mask)[0]]
