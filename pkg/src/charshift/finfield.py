"""Arithmetic, trace and characters of F_{p^r} in a polynomial basis.

Field elements are plain integers in ``[0, q)``: the element
``c_0 + c_1 X + ... + c_{r-1} X^{r-1}`` has index ``sum(c_j * p**j)``. This is
the same integer that addresses a quantum amplitude over the field.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError
from .numtheory import factorize, is_prime, square_and_multiply

FIELD_BOUND = 2**16


def root_of_unity(e, n):
    """``exp(2*pi*i*e/n)``; works elementwise on integer arrays."""
    return np.exp(2j * np.pi * (np.mod(e, n) / n))


# --- polynomials over F_p, coefficient lists low degree first -------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _poly_mod(a, m, p):
    a = list(a)
    inv_lead = pow(m[-1], -1, p)
    dm = len(m) - 1
    while len(_trim(a)) - 1 >= dm:
        shift = len(a) - 1 - dm
        c = a[-1] * inv_lead % p
        for j, mj in enumerate(m):
            a[shift + j] = (a[shift + j] - c * mj) % p
    return a


def _poly_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_powmod(a, e, m, p):
    return square_and_multiply(a, e, lambda x, y: _poly_mod(_poly_mul(x, y, p), m, p), [1])


def is_irreducible(f, p) -> bool:
    """Ben-Or test: gcd(f, X^{p^k} - X mod f) == 1 for k = 1..deg(f)//2."""
    r = len(f) - 1
    if r < 1:
        return False
    if r == 1:
        return True
    xpk = [0, 1]
    for _ in range(r // 2):
        xpk = _poly_powmod(xpk, p, f, p)
        if len(_poly_gcd(f, _poly_sub(xpk, [0, 1], p), p)) > 1:
            return False
    return True


def smallest_irreducible(p: int, r: int) -> list[int]:
    """Lexicographically smallest monic irreducible of degree ``r`` (low degree compared first)."""
    # itertools.product varies the last slot fastest; reverse so c_0 is most significant
    for tail in itertools.product(range(p), repeat=r):
        f = list(reversed(tail)) + [1]
        if is_irreducible(f, p):
            return f
    raise AssertionError(f"no irreducible polynomial of degree {r} over F_{p}")


class FieldCtx:
    """A concrete finite field F_q, q = p**r, with generator and log tables.

    All tables, including the baby-step table used by :meth:`discrete_log`,
    are built at construction; the object is never mutated afterwards.
    """

    def __init__(self, p: int, r: int, modulus=None):
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        if r < 1:
            raise DomainError("extension degree must be >= 1")
        if p**r > FIELD_BOUND:
            raise CapacityError(f"q = {p}**{r} exceeds the field bound {FIELD_BOUND}")
        self.p, self.r, self.q = p, r, p**r
        self.modulus = tuple(modulus) if modulus is not None else tuple(smallest_irreducible(p, r))
        if len(self.modulus) != r + 1 or self.modulus[-1] != 1 or not is_irreducible(list(self.modulus), p):
            raise DomainError(f"{self.modulus} is not a monic irreducible of degree {r}")
        self._pows = np.array([p**j for j in range(r)], dtype=np.int64)
        self.generator = self._find_generator()

        exp = np.empty(self.q - 1, dtype=np.int64)
        x = 1
        for i in range(self.q - 1):
            exp[i] = x
            x = self.mul(x, self.generator)
        log = np.full(self.q, -1, dtype=np.int64)
        log[exp] = np.arange(self.q - 1)
        exp.setflags(write=False)
        log.setflags(write=False)
        self.exp_table, self.log_table = exp, log

        self._bsgs_m = math.isqrt(self.q - 2) + 1 if self.q > 2 else 1
        self._baby = {}
        x = 1
        for j in range(self._bsgs_m):
            self._baby.setdefault(x, j)
            x = self.mul(x, self.generator)
        self._giant = self.inv(self.pow(self.generator, self._bsgs_m))

        basis_traces = [self.trace(self.from_coeffs([0] * j + [1])) for j in range(r)]
        self._basis_traces = np.array(basis_traces, dtype=np.int64)
        form = np.empty((r, r), dtype=np.int64)
        for i in range(r):
            for j in range(r):
                form[i, j] = self.trace(self.mul(self.from_coeffs([0] * i + [1]), self.from_coeffs([0] * j + [1])))
        form.setflags(write=False)
        self.trace_form = form

    def __repr__(self):
        return f"FieldCtx(p={self.p}, r={self.r}, modulus={list(self.modulus)}, generator={self.generator})"

    # --- representation ---------------------------------------------------

    def coeffs(self, a: int) -> list[int]:
        self._check(a)
        out = []
        for _ in range(self.r):
            a, c = divmod(a, self.p)
            out.append(c)
        return out

    def from_coeffs(self, c) -> int:
        c = [x % self.p for x in c]
        if len(c) > self.r:
            c = _poly_mod(c, list(self.modulus), self.p)
        return sum(x * self.p**j for j, x in enumerate(c))

    def digits(self, arr) -> np.ndarray:
        """Coefficient digits of an index array, shape ``(..., r)``."""
        arr = np.asarray(arr, dtype=np.int64)
        return (arr[..., None] // self._pows) % self.p

    def from_digits(self, digits) -> np.ndarray:
        return np.asarray(digits, dtype=np.int64) @ self._pows

    def _check(self, a):
        if not 0 <= a < self.q:
            raise DomainError(f"{a} is not an element index of F_{self.q}")

    # --- arithmetic -------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self.from_coeffs([x + y for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def neg(self, a: int) -> int:
        return self.from_coeffs([-x for x in self.coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        prod = _poly_mul(self.coeffs(a), self.coeffs(b), self.p)
        return self.from_coeffs(_poly_mod(prod, list(self.modulus), self.p))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        return square_and_multiply(a, e, self.mul, 1)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("zero has no inverse")
        return self.pow(a, self.q - 2)

    def add_vec(self, a, b) -> np.ndarray:
        return self.from_digits((self.digits(a) + self.digits(b)) % self.p)

    def neg_vec(self, a) -> np.ndarray:
        return self.from_digits((-self.digits(a)) % self.p)

    # --- trace and logs ---------------------------------------------------

    def trace(self, a: int) -> int:
        total, x = 0, a
        for _ in range(self.r):
            total = self.add(total, x)
            x = self.pow(x, self.p)
        if total >= self.p:
            raise AssertionError(f"trace of {a} left the prime subfield")
        return total

    def trace_vec(self, a) -> np.ndarray:
        """Trace of every element of an index array, using F_p-linearity."""
        return (self.digits(a) @ self._basis_traces) % self.p

    def discrete_log(self, a: int) -> int:
        """Baby-step giant-step logarithm to the base :attr:`generator`."""
        self._check(a)
        if a == 0:
            raise DomainError("zero has no discrete logarithm")
        y = a
        for i in range(self._bsgs_m + 1):
            j = self._baby.get(y)
            if j is not None:
                return (i * self._bsgs_m + j) % (self.q - 1)
            y = self.mul(y, self._giant)
        raise AssertionError(f"BSGS failed for {a}")

    def _find_generator(self) -> int:
        if self.q == 2:
            return 1
        qs = [f for f, _ in factorize(self.q - 1)]
        for g in range(1, self.q):
            if all(self.pow(g, (self.q - 1) // f) != 1 for f in qs):
                return g
        raise AssertionError("multiplicative group has no generator")


def field_make(p: int, r: int) -> FieldCtx:
    return FieldCtx(p, r)


def field_arith(ctx: FieldCtx, op: str, a: int, b: int) -> int:
    if op == "inv":
        return ctx.inv(a)
    ops = {"add": ctx.add, "sub": ctx.sub, "mul": ctx.mul, "pow": ctx.pow}
    try:
        return ops[op](a, b)
    except KeyError:
        raise DomainError(f"unknown field operation {op!r}") from None


def trace(ctx: FieldCtx, a: int) -> int:
    return ctx.trace(a)


def discrete_log(ctx: FieldCtx, a: int) -> int:
    return ctx.discrete_log(a)


@dataclass(frozen=True)
class MultCharFF:
    """The multiplicative character ``chi(g**l) = w_{q-1}**(k*l)``, ``chi(0) = 0``."""

    ctx: FieldCtx
    k: int

    def __post_init__(self):
        if not 0 <= self.k < self.ctx.q - 1:
            raise DomainError(f"character index {self.k} outside [0, {self.ctx.q - 1})")

    @property
    def order(self) -> int:
        """Denominator of the exact phases, ``q - 1``."""
        return self.ctx.q - 1

    @property
    def is_trivial(self) -> bool:
        return self.k == 0

    def exponent(self, a: int):
        """Exact phase numerator: ``chi(a) = w_{q-1}**exponent``; ``None`` at zero."""
        if a == 0:
            return None
        return self.k * self.ctx.discrete_log(a) % self.order

    def __call__(self, a: int) -> complex:
        e = self.exponent(a)
        return 0j if e is None else complex(root_of_unity(e, self.order))

    def exponents(self) -> np.ndarray:
        """Exponents for every element index; -1 marks zero."""
        log = self.ctx.log_table
        return np.where(log < 0, -1, (self.k * log) % self.order)

    def values(self) -> np.ndarray:
        e = self.exponents()
        return np.where(e < 0, 0, root_of_unity(e, self.order))


def mult_char_value(chi: MultCharFF, a: int) -> complex:
    return chi(a)


def additive_char_value(ctx: FieldCtx, y: int, x: int) -> complex:
    """``psi_y(x) = w_p**Tr(x*y)``."""
    return complex(root_of_unity(ctx.trace(ctx.mul(x, y)), ctx.p))
