"""Shared instance builders for the test suite."""
import math

import numpy as np

from charshift.finfield import field_make
from charshift.oracles import brute_force_shift
from charshift.qsim import GroupSpec
from charshift.ringchar import RingChar
from charshift.shiftalgos import (
    HcpInstance,
    ShiftInstanceFF,
    cyclic_group,
    field_group,
    identify_subgroup_amplitude,
    ring_shift_values,
    solve_hidden_coset,
    solve_shift_ff,
    solve_shift_ring,
    solve_shift_unknown_n,
)

FIELDS_UP_TO_64 = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4),
                   (17, 1), (19, 1), (23, 1), (5, 2), (3, 3), (29, 1), (31, 1), (2, 5), (37, 1),
                   (41, 1), (43, 1), (47, 1), (7, 2), (53, 1), (59, 1), (61, 1), (2, 6)]


def chi4(x):
    # nontrivial character mod 4
    return (0, 1, 0, -1)[x % 4]


def char_values(n: int) -> np.ndarray:
    """A multiplicative character of Z_n with period n (for n not 2 mod 4).

    ringchar covers odd n; for 4 | n the 2-part uses the character mod 4.
    For n = 2 mod 4 the 2-part can only be the principal character, which
    leaves the period at n/2.
    """
    if n % 2:
        return RingChar.quadratic(n).values()
    two, odd = n & -n, n // (n & -n)
    odd_vals = RingChar.quadratic(odd).values() if odd > 1 else np.ones(1)
    if two == 2:
        two_vals = lambda x: x % 2
    elif two == 4:
        two_vals = chi4
    else:
        raise ValueError("8 | n not needed by the tests")
    return np.array([two_vals(x) * odd_vals[x % odd] for x in range(n)], dtype=complex)


def z8_coset_instance() -> np.ndarray:
    """g on Z_8 with |g| nonzero on 6 points and g_hat supported on the odd frequencies."""
    h = np.array([0, 1j, np.exp(-1j * np.pi / 4), 1])
    x = np.arange(8)
    return np.exp(2j * np.pi * x / 8) * h[x % 4]


def chirp_4x4():
    group = GroupSpec.product([4, 4])
    c = group.coords(group.elements())
    return group, np.exp(2j * np.pi * (c[:, 0] * c[:, 1] % 4) / 4)


def alpha_beta(group, g):
    a = np.mean(np.abs(g) > 1e-9)
    b = np.mean(np.abs(group.transform(g)) > 1e-9)
    return a, b


def phi_over(n):
    return sum(1 for x in range(n) if math.gcd(x, n) == 1) / n


def random_instances(rng, per_family: int, families=("ff", "ring", "hcp", "unknown-n")):
    """Random solved instances, ``per_family`` of each kind: yields (kind, solution, brute-force set, group)."""
    for _ in range(per_family if "ff" in families else 0):
        p, r = FIELDS_UP_TO_64[int(rng.integers(1, 14))]
        ctx = field_make(p, r)
        k, s = int(rng.integers(1, ctx.q - 1)), int(rng.integers(ctx.q))
        inst = ShiftInstanceFF.make(ctx, k, s)
        sol, _ = solve_shift_ff(inst)
        yield "ff", sol, brute_force_shift(inst.f, inst.chi.values(), field_group(ctx)), field_group(ctx)
    for _ in range(per_family if "ring" in families else 0):
        n = int(rng.choice([9, 15, 21, 25, 27, 33, 45, 63, 75, 99, 105]))
        chi = RingChar(n, [int(rng.integers(1, o)) for o in RingChar.quadratic(n).orders])
        f = ring_shift_values(chi, int(rng.integers(n)))
        sol, _ = solve_shift_ring(chi, f)
        yield "ring", sol, brute_force_shift(f, chi.values(), cyclic_group(n)), cyclic_group(n)
    for _ in range(per_family if "hcp" in families else 0):
        kind = int(rng.integers(3))
        if kind == 0:
            group, g = GroupSpec.cyclic(8), z8_coset_instance()
        elif kind == 1:
            group, g = chirp_4x4()
        else:
            n = int(rng.choice([9, 15, 25, 45]))
            chi = RingChar(n, [int(rng.integers(1, o)) for o in RingChar.quadratic(n).orders])
            group, g = cyclic_group(n), chi.values()
        # twist by a random additive character and a global phase; this can enlarge H
        a = int(rng.integers(group.dim))
        g = g * np.exp(2j * np.pi * group.pairing_exponents(a) / group.exponent_modulus) * np.exp(2j * rng.random())
        inst = HcpInstance.make(group, g, int(rng.integers(group.dim)))
        h = identify_subgroup_amplitude(group, g, 16, rng)
        sol, _ = solve_hidden_coset(inst, subgroup=h)
        yield "hcp", sol, brute_force_shift(inst.f, g, group), group
    for _ in range(per_family if "unknown-n" in families else 0):
        n = int(rng.choice([3, 5, 7, 9, 11, 13, 15]))
        chi = RingChar(n, [int(rng.integers(1, o)) for o in RingChar.quadratic(n).orders])
        s = int(rng.integers(n))
        sol = solve_shift_unknown_n(lambda x: chi((x + s) % n), lambda x: chi(x % n), 16, 0.1, rng)
        ell = sol.period
        truth = brute_force_shift(ring_shift_values(chi, s)[:ell], chi.values()[:ell], cyclic_group(ell))
        yield "unknown-n", sol, truth, cyclic_group(ell)
