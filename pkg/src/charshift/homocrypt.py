"""A toy algebraically homomorphic cryptosystem and the Legendre-symbol attack.

The cryptosystem is an opaque handle table: ciphertexts are random tokens
that only the issuing :class:`HomoOracle` can interpret. The attacker sees
``A`` (add), ``M`` (multiply) and ``Z`` (zero test) and nothing else.

The attack turns ``E(s)`` into an oracle for ``x -> legendre(x + s, p)`` built
purely from those three operations, then recovers ``s`` with the
finite-field hidden shift algorithm.
"""
from __future__ import annotations

import random
import threading
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ShiftMiss, UnresolvedError
from .finfield import MultCharFF, field_make
from .numtheory import is_prime, square_and_multiply
from .shiftalgos import ShiftInstanceFF, solve_shift_ff

HOMO_PRIME_BOUND = 2**13
MAX_RETRIES = 25


@dataclass(frozen=True)
class Handle:
    oracle_id: int
    token: int = field(repr=False)


class HomoOracle:
    """Holds the secret plaintext table; exposes only ``A``, ``M`` and ``Z``."""

    def __init__(self, p: int, seed=None):
        if p < 3 or p > HOMO_PRIME_BOUND or not is_prime(p):
            raise DomainError(f"p must be an odd prime <= {HOMO_PRIME_BOUND}, got {p}")
        self.p = p
        self._rng = random.Random(seed)
        self._id = self._rng.getrandbits(64)
        self._table: dict[int, int] = {}
        self._lock = threading.Lock()
        self.calls = Counter(A=0, M=0, Z=0)

    def _issue(self, plaintext: int) -> Handle:
        with self._lock:
            token = self._rng.getrandbits(96)
            while token in self._table:
                token = self._rng.getrandbits(96)
            self._table[token] = plaintext % self.p
            return Handle(self._id, token)

    def _plain(self, h: Handle) -> int:
        if not isinstance(h, Handle) or h.oracle_id != self._id or h.token not in self._table:
            raise DomainError("handle was not issued by this oracle")
        return self._table[h.token]

    def A(self, h1: Handle, h2: Handle) -> Handle:
        self.calls["A"] += 1
        return self._issue(self._plain(h1) + self._plain(h2))

    def M(self, h1: Handle, h2: Handle) -> Handle:
        self.calls["M"] += 1
        return self._issue(self._plain(h1) * self._plain(h2))

    def Z(self, h: Handle) -> int:
        """0 if ``h`` encrypts zero, else 1."""
        self.calls["Z"] += 1
        return 0 if self._plain(h) == 0 else 1

    @property
    def total_calls(self) -> int:
        return sum(self.calls.values())

    def _encrypt(self, x: int) -> Handle:
        return self._issue(x)


def homo_new(p: int, secret: int, seed=None) -> tuple[HomoOracle, Handle]:
    """Fresh oracle plus the single ciphertext ``E(secret)`` it leaks."""
    oracle = HomoOracle(p, seed)
    return oracle, oracle._encrypt(secret)


class LegendreQuery:
    """``x -> legendre(x + s, p)`` evaluated through ``A``, ``M`` and ``Z`` only.

    Setup derives ``E(1) = E(s)**(p-1)`` by square-and-multiply, then
    ``E(-1)`` and ``E(0)`` by double-and-add. Each query builds ``E(x)``,
    adds ``E(s)``, raises to ``(p-1)/2`` and zero-tests the result and the
    result plus ``E(-1)``. Requires ``s != 0``.
    """

    def __init__(self, oracle: HomoOracle, es: Handle):
        self.oracle, self.es, self.p = oracle, es, oracle.p
        before = oracle.total_calls
        self.e_one = square_and_multiply(es, self.p - 1, oracle.M, None)
        self.e_minus_one = self.scalar(self.p - 1)
        self.e_zero = oracle.A(self.e_minus_one, self.e_one)
        self.setup_calls = oracle.total_calls - before
        self.evaluations = 0
        self.max_call_cost = 0

    def scalar(self, x: int) -> Handle:
        """``E(x)`` for ``1 <= x < p`` by double-and-add from ``E(1)``."""
        return square_and_multiply(self.e_one, x, self.oracle.A, None)

    def __call__(self, x: int) -> int:
        before = self.oracle.total_calls
        x %= self.p
        ex = self.e_zero if x == 0 else self.scalar(x)
        shifted = self.oracle.A(self.es, ex)
        leg = square_and_multiply(shifted, (self.p - 1) // 2, self.oracle.M, None)
        if self.oracle.Z(leg) == 0:
            out = 0
        elif self.oracle.Z(self.oracle.A(leg, self.e_minus_one)) == 0:
            out = 1
        else:
            out = -1
        self.evaluations += 1
        self.max_call_cost = max(self.max_call_cost, self.oracle.total_calls - before)
        return out

    def encrypts(self, es: Handle, t: int) -> bool:
        """Check ``D(es) == t`` via ``Z(A(es, E(-t)))``."""
        neg = (-t) % self.p
        e_neg = self.e_zero if neg == 0 else self.scalar(neg)
        return self.oracle.Z(self.oracle.A(es, e_neg)) == 0


def build_legendre_query(oracle: HomoOracle, es: Handle) -> LegendreQuery:
    return LegendreQuery(oracle, es)


@dataclass
class BreakReport:
    secret: int
    attempts: int
    preparations: int
    oracle_calls: dict
    max_call_cost: int
    query_evaluations: int

    @property
    def logical_queries(self) -> int:
        """Quantum queries to f: two per superposition preparation."""
        return 2 * self.preparations

    @property
    def simulated_calls(self) -> int:
        return sum(self.oracle_calls.values())


def break_cryptosystem(oracle: HomoOracle, es: Handle, mode: str = "sampled", seed=None,
                       max_retries: int = MAX_RETRIES) -> BreakReport:
    """Recover the plaintext of ``es`` using only the public operations."""
    if oracle.Z(es) == 0:
        return BreakReport(0, 0, 0, dict(oracle.calls), 0, 0)
    query = LegendreQuery(oracle, es)
    ctx = field_make(oracle.p, 1)
    instance = ShiftInstanceFF(MultCharFF(ctx, (oracle.p - 1) // 2), query)
    seeds = np.random.SeedSequence(seed).spawn(max_retries)
    for attempt, ss in enumerate(seeds, start=1):
        try:
            solution, _ = solve_shift_ff(instance, mode, np.random.default_rng(ss),
                                         verify=lambda t: query.encrypts(es, t))
        except ShiftMiss:
            continue
        t = solution.representative
        if mode == "exact" and not query.encrypts(es, t):
            continue
        return BreakReport(t, attempt, attempt, dict(oracle.calls), query.max_call_cost, query.evaluations)
    raise UnresolvedError(f"secret not recovered in {max_retries} attempts")
