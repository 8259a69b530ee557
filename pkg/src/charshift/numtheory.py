"""Integer and modular arithmetic primitives.

Everything here is a pure function of its arguments. Factorizations are
tuples of ``(prime, exponent)`` pairs sorted by prime, and rational results
are :class:`fractions.Fraction` values, which are always kept in lowest terms.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence, TypeVar

import numpy as np

from .errors import CapacityError, DomainError

T = TypeVar("T")

Factorization = tuple  # tuple[tuple[int, int], ...]

FACTOR_BOUND = 2**40

# deterministic Miller-Rabin witness set, valid for n < 3.3e24
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_WHEEL_GAPS = (4, 2, 4, 2, 4, 6, 2, 6)  # 2*3*5 wheel, starting at 7


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, u, v)`` with ``u*a + v*b == g == gcd(a, b) >= 0``."""
    if a == 0 and b == 0:
        raise DomainError("extended_gcd(0, 0) is undefined")
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_u, u = u, old_u - quot * u
        old_v, v = v, old_v - quot * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    return old_r, old_u, old_v


def mod_inverse(a: int, m: int) -> int:
    g, u, _ = extended_gcd(a % m, m)
    if g != 1:
        raise DomainError(f"{a} is not invertible modulo {m}")
    return u % m


def square_and_multiply(base: T, exp: int, mul: Callable[[T, T], T], one: T) -> T:
    """Left-to-right binary exponentiation over an arbitrary monoid.

    Uses ``bit_length(exp) - 1`` squarings and ``popcount(exp) - 1``
    multiplications, so at most ``2*ceil(log2(exp + 1))`` calls to ``mul``.
    """
    if exp < 0:
        raise DomainError("negative exponent")
    if exp == 0:
        return one
    acc = base
    for bit in bin(exp)[3:]:
        acc = mul(acc, acc)
        if bit == "1":
            acc = mul(acc, base)
    return acc


def mod_pow(base: int, exp: int, m: int) -> int:
    if m < 2:
        raise DomainError("modulus must be at least 2")
    return square_and_multiply(base % m, exp, lambda x, y: x * y % m, 1) % m


def is_prime(n: int) -> bool:
    """Miller-Rabin with a fixed witness set (deterministic below 3.3e24)."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> Factorization:
    """Trial division with a 2-3-5 wheel; ``n`` must be in ``[2, 2**40]``."""
    if n < 2:
        raise DomainError(f"cannot factor {n}")
    if n > FACTOR_BOUND:
        raise CapacityError(f"{n} exceeds the factoring bound 2**40")
    out = []

    def strip(p):
        nonlocal n
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))

    for p in (2, 3, 5):
        strip(p)
    p, i = 7, 0
    while p * p <= n:
        strip(p)
        p += _WHEEL_GAPS[i]
        i = (i + 1) % 8
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def factor_product(f: Factorization) -> int:
    return math.prod(p**e for p, e in f)


def divisors(n: int) -> list[int]:
    """All positive divisors of ``n`` in ascending order."""
    if n == 1:
        return [1]
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    if n < 1:
        raise DomainError("euler_phi needs n >= 1")
    if n == 1:
        return 1
    phi = n
    for p, _ in factorize(n):
        phi = phi // p * (p - 1)
    return phi


def legendre_symbol(x: int, p: int) -> int:
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")
    r = pow(x % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def jacobi_symbol(x: int, n: int) -> int:
    """Jacobi symbol by quadratic reciprocity; never factors ``n``."""
    if n < 3 or n % 2 == 0:
        raise DomainError(f"Jacobi symbol needs an odd modulus >= 3, got {n}")
    x %= n
    sign = 1
    while x:
        while x % 2 == 0:
            x //= 2
            if n % 8 in (3, 5):
                sign = -sign
        x, n = n, x
        if x % 4 == 3 and n % 4 == 3:
            sign = -sign
        x %= n
    return sign if n == 1 else 0


def crt_split(x: int, f: Factorization) -> list[int]:
    return [x % p**e for p, e in f]


def crt_join(residues: Sequence[int], f: Factorization) -> int:
    n = factor_product(f)
    x = 0
    for r, (p, e) in zip(residues, f):
        m = p**e
        rest = n // m
        x += r * rest * mod_inverse(rest, m)
    return x % n


def primitive_root(m: int) -> int:
    """Smallest generator of the cyclic group (Z/mZ)* for ``m = p**k``, p odd."""
    f = factorize(m)
    if len(f) != 1 or f[0][0] == 2:
        raise DomainError(f"{m} is not a power of an odd prime")
    phi = euler_phi(m)
    qs = [q for q, _ in factorize(phi)] if phi > 1 else []
    for g in range(2, m):
        if math.gcd(g, m) == 1 and all(pow(g, phi // q, m) != 1 for q in qs):
            return g
    raise AssertionError(f"no primitive root found modulo {m}")


def continued_fraction(x: int, q: int) -> list[int]:
    """Partial quotients of ``x/q``."""
    terms = []
    while q:
        a, r = divmod(x, q)
        terms.append(a)
        x, q = q, r
    return terms


def cf_best_approx(x: int, q: int, max_den: int) -> Fraction:
    """Closest fraction to ``x/q`` with denominator at most ``max_den``.

    Walks the convergents and, where the next convergent would overshoot the
    bound, also considers the largest admissible semiconvergent. Ties go to
    the smaller denominator.
    """
    if q < 1 or max_den < 1:
        raise DomainError("q and max_den must be positive")
    target = Fraction(x, q)
    if target.denominator <= max_den:
        return target
    p0, q0, p1, q1 = 0, 1, 1, 0
    for a in continued_fraction(x, q):
        q2 = q0 + a * q1
        if q2 > max_den:
            k = (max_den - q0) // q1
            semi = Fraction(p0 + k * p1, q0 + k * q1)
            conv = Fraction(p1, q1)
            d_semi, d_conv = abs(semi - target), abs(conv - target)
            if d_semi < d_conv or (d_semi == d_conv and semi.denominator < conv.denominator):
                return semi
            return conv
        p0, q0, p1, q1 = p1, q1, p0 + a * p1, q2
    return Fraction(p1, q1)


def farey_sequence(max_den: int) -> list[Fraction]:
    """Fractions in ``[0, 1]`` with denominator at most ``max_den``, ascending."""
    a, b, c, d = 0, 1, 1, max_den
    out = [Fraction(0, 1)]
    while c <= max_den:
        k = (max_den + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        out.append(Fraction(a, b))
    return out


def nearest_fraction_table(q: int, max_den: int) -> tuple[np.ndarray, list[Fraction]]:
    """Vectorized ``cf_best_approx(x, q, max_den)`` for every ``x`` in ``[0, q)``.

    Returns ``(labels, fractions)`` where ``fractions[labels[x]]`` is the answer
    for ``x``. Built from the Farey sequence and exact midpoint comparisons, so
    it is an independent route to the same result.
    """
    farey = farey_sequence(max_den)
    nums = np.array([f.numerator for f in farey], dtype=np.int64)
    dens = np.array([f.denominator for f in farey], dtype=np.int64)
    xs = np.arange(q, dtype=np.int64)
    # lo = index of the largest Farey fraction <= x/q; float guess, then exact fix-up
    lo = np.searchsorted(nums / dens, xs / q, side="right") - 1
    lo = np.clip(lo, 0, len(farey) - 1)
    for _ in range(2):
        too_high = nums[lo] * q > xs * dens[lo]
        lo[too_high] -= 1
        nxt = np.minimum(lo + 1, len(farey) - 1)
        too_low = (nxt != lo) & (nums[nxt] * q <= xs * dens[nxt])
        lo[too_low] += 1
    hi = np.minimum(lo + 1, len(farey) - 1)
    a, b, c, d = nums[lo], dens[lo], nums[hi], dens[hi]
    # compare distances exactly: x/q - a/b vs c/d - x/q, scaled by q*b*d
    left = (xs * b - a * q) * d
    right = (c * q - xs * d) * b
    pick_hi = (right < left) | ((right == left) & (d < b))
    labels = np.where(pick_hi, hi, lo)
    return labels, farey
