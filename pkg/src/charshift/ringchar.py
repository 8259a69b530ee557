"""Multiplicative characters of Z/nZ (odd n) built from CRT components.

A character is stored exactly: every unit ``x`` carries an integer exponent
``e(x)`` with ``chi(x) = w_L**e(x)``, where ``L`` is the lcm of the component
group orders. Non-units carry ``-1`` and evaluate to 0.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import CapacityError, DomainError
from .finfield import root_of_unity
from .numtheory import crt_join, divisors, euler_phi, factorize, primitive_root

RING_BOUND = 10**6


def _component_logs(m: int, g: int) -> np.ndarray:
    """Discrete-log table of ``(Z/mZ)*`` to base ``g``; -1 on non-units."""
    log = np.full(m, -1, dtype=np.int64)
    x = 1
    for j in range(euler_phi(m)):
        log[x] = j
        x = x * g % m
    return log


class RingChar:
    """chi(x) = prod_i chi_i(x mod p_i**m_i), chi_i(g_i**j) = w_{phi_i}**(k_i*j)."""

    def __init__(self, n: int, indices: Sequence[int]):
        if n < 3:
            raise DomainError("modulus must be >= 3")
        if n % 2 == 0:
            raise DomainError("even moduli are not supported")
        if n > RING_BOUND:
            raise CapacityError(f"modulus {n} exceeds {RING_BOUND}")
        self.n = n
        self.factorization = factorize(n)
        self.moduli = tuple(p**e for p, e in self.factorization)
        self.orders = tuple(euler_phi(m) for m in self.moduli)
        indices = tuple(int(k) for k in indices)
        if len(indices) != len(self.moduli):
            raise DomainError(f"need {len(self.moduli)} component indices for n={n}, got {len(indices)}")
        for k, order in zip(indices, self.orders):
            if not 0 <= k < order:
                raise DomainError(f"component index {k} outside [0, {order})")
        self.indices = indices
        self.generators = tuple(primitive_root(m) for m in self.moduli)
        self.order = math.lcm(*self.orders)

        xs = np.arange(n)
        exps = np.zeros(n, dtype=np.int64)
        unit = np.ones(n, dtype=bool)
        for m, g, k, order in zip(self.moduli, self.generators, indices, self.orders):
            log = _component_logs(m, g)[xs % m]
            unit &= log >= 0
            exps += k * log * (self.order // order)
        exps = np.where(unit, exps % self.order, -1)
        exps.setflags(write=False)
        self._exps = exps
        self.period = self._find_period()

    @classmethod
    def quadratic(cls, n: int) -> "RingChar":
        """Product of the order-2 characters of every component (Jacobi symbol for squarefree n)."""
        return cls(n, [order // 2 for order in (euler_phi(p**e) for p, e in factorize(n))])

    def __repr__(self):
        return f"RingChar(n={self.n}, indices={list(self.indices)})"

    def __eq__(self, other):
        return isinstance(other, RingChar) and self.n == other.n and self.indices == other.indices

    def __hash__(self):
        return hash((self.n, self.indices))

    def exponents(self) -> np.ndarray:
        return self._exps

    def exponent(self, x: int):
        e = int(self._exps[x % self.n])
        return None if e < 0 else e

    def __call__(self, x: int) -> complex:
        e = self.exponent(x)
        return 0j if e is None else complex(root_of_unity(e, self.order))

    def values(self) -> np.ndarray:
        e = self._exps
        return np.where(e < 0, 0, root_of_unity(e, self.order))

    def _find_period(self) -> int:
        for d in divisors(self.n):
            if np.array_equal(np.roll(self._exps, -d), self._exps):
                return d
        raise AssertionError("n itself is always a period")

    @cached_property
    def component_trivial(self) -> tuple[bool, ...]:
        return tuple(k == 0 for k in self.indices)

    def is_completely_nontrivial(self) -> bool:
        return not any(self.component_trivial)

    def is_primitive(self) -> bool:
        return self.is_completely_nontrivial() and self.period == self.n


def same_phases(e1, order1, e2, order2) -> bool:
    """Exact equality of ``w_{order1}**e1`` and ``w_{order2}**e2`` (with -1 meaning zero)."""
    e1, e2 = np.asarray(e1), np.asarray(e2)
    zero1, zero2 = e1 < 0, e2 < 0
    if not np.array_equal(zero1, zero2):
        return False
    diff = (e1 * order2 - e2 * order1) % (order1 * order2)
    return bool(np.all(diff[~zero1] == 0))


def ringchar_make(n: int, component_indices: Sequence[int]) -> RingChar:
    return RingChar(n, component_indices)


def ringchar_value(chi: RingChar, x: int) -> complex:
    return chi(x)


def is_completely_nontrivial(chi: RingChar) -> bool:
    return chi.is_completely_nontrivial()


def is_primitive(chi: RingChar) -> bool:
    return chi.is_primitive()


def restrict_to_period(chi: RingChar) -> RingChar:
    """The primitive character modulo ``chi.period`` that agrees with ``chi`` on ``[0, period)``."""
    if not chi.is_completely_nontrivial():
        raise DomainError("only completely nontrivial characters restrict to primitive ones")
    ell = chi.period
    if ell == chi.n:
        return chi
    f = factorize(ell)
    moduli = [p**e for p, e in f]
    indices = []
    for i, (m, order) in enumerate(zip(moduli, (euler_phi(m) for m in moduli))):
        g = primitive_root(m)
        lift = crt_join([g if j == i else 1 for j in range(len(moduli))], f)
        e = chi.exponent(lift)
        k = Fraction(e * order, chi.order)
        if k.denominator != 1:
            raise AssertionError("restricted component is not a character of the period modulus")
        indices.append(int(k) % order)
    restricted = RingChar(ell, indices)
    if not same_phases(restricted.exponents(), restricted.order, chi.exponents()[:ell], chi.order):
        raise AssertionError("restriction disagrees with the original character")
    return restricted
