"""Deliberately naive classical reference implementations.

These are the ground truth the quantum simulations are checked against:
exhaustive shift search, exhaustive period search and the textbook O(n^2)
Fourier sum. None of them share code paths with :mod:`charshift.qsim`'s
fast transforms or :mod:`charshift.shiftalgos`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError
from .qsim import GroupSpec

VALUE_TOL = 1e-9
REFERENCE_DFT_BOUND = 4096


@dataclass(frozen=True)
class OracleReport:
    quantity: str
    brute_force: object
    algorithm: object
    difference: float
    tolerance: float = 1e-9

    @property
    def passed(self) -> bool:
        return self.difference <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.quantity}: brute={self.brute_force} algo={self.algorithm} diff={self.difference:.3g}"


def compare(quantity: str, brute, algo, tolerance: float = 1e-9) -> OracleReport:
    if isinstance(brute, (set, frozenset, list, tuple)) or isinstance(algo, (set, frozenset, list, tuple)):
        diff = 0.0 if set(brute) == set(algo) else math.inf
        brute, algo = sorted(brute), sorted(algo)
    else:
        diff = abs(complex(brute) - complex(algo))
    return OracleReport(quantity, brute, algo, diff, tolerance)


def _table(f, group: GroupSpec) -> list[complex]:
    if callable(f):
        return [complex(f(x)) for x in range(group.dim)]
    return [complex(v) for v in f]


def brute_force_shift(f, g, group: GroupSpec) -> frozenset:
    """Every ``t`` with ``f(x) == g(x + t)`` for all ``x``, by exhaustive scan."""
    if group.dim > 2**16:
        raise CapacityError("domain too large for exhaustive search")
    fv, gv = _table(f, group), _table(g, group)
    xs = group.elements()
    out = set()
    for t in range(group.dim):
        moved = group.add(xs, t)
        if all(abs(fv[x] - gv[int(moved[x])]) <= VALUE_TOL for x in range(group.dim)):
            out.add(t)
    return frozenset(out)


def brute_force_period(f, bound: int) -> int:
    """Smallest ``l <= bound`` with ``f(x + l) == f(x)`` for every scanned ``x``.

    ``f`` is a callable on the integers or a list read cyclically. Scanning
    ``x < bound`` is enough once the true period is at most ``bound``.
    """
    if not callable(f):
        arr = list(f)
        f = lambda x: arr[x % len(arr)]
    values = [complex(f(x)) for x in range(2 * bound)]
    for ell in range(1, bound + 1):
        if all(abs(values[x + ell] - values[x]) <= VALUE_TOL for x in range(bound)):
            return ell
    raise CapacityError(f"no period found up to {bound}")


def dft_reference(vector, group: GroupSpec | None = None) -> np.ndarray:
    """Textbook unitary transform ``y -> sum_x v[x] psi_y(x) / sqrt(n)``.

    With no ``group`` the vector lives on Z_n. Field characters multiply
    through the log/exp tables and take the Frobenius trace, never the
    trace-form shortcut the fast path uses.
    """
    n = len(vector)
    if n > REFERENCE_DFT_BOUND:
        raise CapacityError(f"reference transform limited to length {REFERENCE_DFT_BOUND}")
    if group is not None and group.dim != n:
        raise DomainError("vector length does not match the group")
    table = _phase_table(n, group)
    out = [sum(complex(vector[x]) * table[y][x] for x in range(n)) for y in range(n)]
    return np.array(out) / math.sqrt(n)


def _phase_table(n: int, group: GroupSpec | None) -> list[list[complex]]:
    if group is None:
        return [[cmath.exp(2j * cmath.pi * (x * y % n) / n) for x in range(n)] for y in range(n)]
    if group.kind == "field":
        ctx = group.field
        tr = [ctx.trace(z) for z in range(n)]
        log, exp = ctx.log_table, ctx.exp_table
        w = [cmath.exp(2j * cmath.pi * k / ctx.p) for k in range(ctx.p)]

        def prod(x, y):
            return 0 if x == 0 or y == 0 else int(exp[(log[x] + log[y]) % (n - 1)])

        return [[w[tr[prod(x, y)]] for x in range(n)] for y in range(n)]
    M = group.exponent_modulus
    return [[cmath.exp(2j * cmath.pi * int(e) / M) for e in group.pairing_exponents(y)] for y in range(n)]


def is_coset(solutions, subgroup, group: GroupSpec) -> bool:
    """True when ``solutions == r + subgroup`` for some (any) ``r`` in ``solutions``."""
    solutions, subgroup = set(solutions), set(subgroup)
    if not solutions or 0 not in subgroup:
        return False
    r = next(iter(solutions))
    return {group.add(r, h) for h in subgroup} == solutions


def run_suite(seed: int = 0) -> list[OracleReport]:
    """Cross-check every solver against these references on small instances."""
    from .finfield import MultCharFF, field_make
    from .ringchar import RingChar
    from .shiftalgos import (
        ShiftInstanceFF,
        cyclic_group,
        field_group,
        ring_shift_values,
        solve_shift_ff,
        solve_shift_ring,
    )

    rng = np.random.default_rng(seed)
    reports = []
    for p, r, k in [(7, 1, 3), (3, 2, 1), (5, 2, 4)]:
        ctx = field_make(p, r)
        s = int(rng.integers(ctx.q))
        inst = ShiftInstanceFF.make(ctx, k, s)
        sol, prob = solve_shift_ff(inst)
        group = field_group(ctx)
        brute = brute_force_shift(inst.f, MultCharFF(ctx, k).values(), group)
        reports.append(compare(f"F_{ctx.q} k={k} shift set", brute, sol.solution_set))
        reports.append(compare(f"F_{ctx.q} success probability", (1 - 1 / ctx.q) ** 2, prob))
    for n, indices in [(9, [3]), (15, [1, 2]), (45, [3, 1])]:
        chi = RingChar(n, indices)
        s = int(rng.integers(n))
        f = ring_shift_values(chi, s)
        sol, prob = solve_shift_ring(chi, f)
        group = cyclic_group(n)
        reports.append(compare(f"Z_{n} shift set", brute_force_shift(f, chi.values(), group), sol.solution_set))
        reports.append(compare(f"Z_{n} period", brute_force_period(chi.values(), n), sol.period, 0))
    for group in [GroupSpec.cyclic(12), GroupSpec.product([2, 3, 4]), field_group(field_make(3, 2))]:
        v = rng.normal(size=group.dim) + 1j * rng.normal(size=group.dim)
        v /= np.linalg.norm(v)
        diff = float(np.max(np.abs(dft_reference(v, group) - group.transform(v))))
        reports.append(OracleReport(f"dft on {group!r}", "reference", "fast", diff, 1e-10))
    return reports
