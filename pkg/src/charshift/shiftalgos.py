"""Quantum hidden-shift and hidden-coset algorithms on the dense simulator.

Every solver runs the same circuit shape: prepare ``sum_x f(x)|x>``, Fourier
transform, put a correcting phase on each frequency, transform back and
measure ``-s``. They differ only in the group and in where the phase comes
from: ``chi(y)`` for a multiplicative character, ``conj(g_hat)/|g_hat|`` for a
general hidden coset instance.

Two modes are supported. ``"exact"`` reads the answer off the exact output
distribution (argmax, smallest index on ties; the hidden coset solver instead
takes the most likely outcome that passes a full check) and reports the exact
success probability. ``"sampled"`` flips the post-selection coin, draws a measurement
from ``rng`` and spot-checks the candidate, raising :class:`ShiftMiss` on any
failure so the caller can retry.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import CapacityError, DomainError, PromiseViolation, PromiseWarning, ShiftMiss, UnresolvedError
from .finfield import FieldCtx, MultCharFF
from .numtheory import cf_best_approx, divisors, nearest_fraction_table
from .qsim import (
    GroupSpec,
    QState,
    amplitude_encode,
    dft,
    dft_inverse,
    exact_distribution,
    phase_multiply,
    sample_index,
)
from .ringchar import RingChar

SPOT_CHECKS = 40
VALUE_TOL = 1e-9
SAMPLING_BOUND = 2**20


def as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


@lru_cache(maxsize=128)
def field_group(ctx: FieldCtx) -> GroupSpec:
    return GroupSpec.field_additive(ctx)


@lru_cache(maxsize=512)
def cyclic_group(n: int, bound: int = SAMPLING_BOUND) -> GroupSpec:
    return GroupSpec.cyclic(n, bound=bound)


def _values(group: GroupSpec, f) -> np.ndarray:
    if callable(f):
        return np.array([f(int(x)) for x in range(group.dim)], dtype=complex)
    return np.asarray(f, dtype=complex)


def _oracle(f) -> Callable[[int], complex]:
    if callable(f):
        return f
    arr = np.asarray(f)
    return lambda x: complex(arr[x])


def spot_check(f, g, t, group: GroupSpec, rng, checks: int = SPOT_CHECKS) -> bool:
    """Test ``f(x) == g(x + t)`` at ``checks`` random points of ``group``."""
    f, g = _oracle(f), _oracle(g)
    for x in rng.integers(0, group.dim, size=checks):
        if abs(f(int(x)) - g(group.add(int(x), t))) > VALUE_TOL:
            return False
    return True


@dataclass(frozen=True, eq=False)
class ShiftSolution:
    """The coset ``representative + subgroup`` of all valid shifts."""

    group: GroupSpec
    representative: int
    subgroup: frozenset
    period: int | None = None

    @property
    def solution_set(self) -> frozenset:
        return frozenset(self.group.add(self.representative, h) for h in self.subgroup)


@dataclass(frozen=True)
class PipelineRun:
    prep_probability: Fraction
    final: QState

    @property
    def distribution(self) -> np.ndarray:
        return exact_distribution(self.final)


def shift_pipeline(group: GroupSpec, f_values, phase) -> PipelineRun:
    """encode f -> dft -> multiply by ``phase`` -> inverse dft."""
    prep = amplitude_encode(group, f_values)
    state = phase_multiply(dft(prep.state), phase)
    return PipelineRun(prep.success_probability, dft_inverse(state))


def _read_out(run: PipelineRun, group: GroupSpec, mode: str, rng):
    """Measured index and its probability, or ShiftMiss in sampled mode."""
    dist = run.distribution
    if mode == "exact":
        idx = int(np.argmax(dist))
        return idx, float(dist[idx])
    if mode != "sampled":
        raise DomainError(f"unknown mode {mode!r}")
    if rng.random() >= run.prep_probability:
        raise ShiftMiss("superposition preparation was not post-selected")
    idx = sample_index(dist, rng)
    return idx, float(dist[idx])


# --- finite fields ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ShiftInstanceFF:
    """``f(x) = chi(x + shift)`` over F_q; ``shift`` is kept for verification only."""

    chi: MultCharFF
    f: object
    shift: int | None = None

    @classmethod
    def make(cls, ctx: FieldCtx, k: int, shift: int) -> "ShiftInstanceFF":
        chi = MultCharFF(ctx, k)
        xs = np.arange(ctx.q)
        return cls(chi, chi.values()[ctx.add_vec(xs, shift)], shift)


def solve_shift_ff(instance: ShiftInstanceFF, mode: str = "exact", rng=None, verify=None):
    """Hidden shift of a multiplicative character of F_q.

    Returns ``(solution, success_probability)``; the probability is the exact
    chance that this run yields the shift, i.e. ``(1 - 1/q)**2``.
    ``verify(t) -> bool`` replaces the default spot check in sampled mode.
    """
    chi = instance.chi
    if chi.is_trivial:
        raise DomainError("the trivial character hides no shift")
    group = field_group(chi.ctx)
    phase = chi.values()
    phase[0] = 1
    run = shift_pipeline(group, _values(group, instance.f), phase)
    rng = as_rng(rng)
    idx, p_measure = _read_out(run, group, mode, rng)
    t = group.neg(idx)
    if mode == "sampled":
        ok = verify(t) if verify else spot_check(instance.f, chi.values(), t, group, rng)
        if not ok:
            raise ShiftMiss(f"candidate shift {t} failed verification")
    solution = ShiftSolution(group, t, frozenset({0}))
    return solution, float(run.prep_probability) * p_measure


# --- Z/nZ -----------------------------------------------------------------------

def ring_shift_values(chi: RingChar, shift: int) -> np.ndarray:
    """Truth table of ``x -> chi(x + shift)`` on Z_n."""
    return chi.values()[(np.arange(chi.n) + shift) % chi.n]


def _ring_stage_two(f_vals: np.ndarray, g_vals: np.ndarray, ell: int, mode: str, rng):
    """Shift modulo ``ell`` from truth tables restricted to ``[0, ell)``."""
    group = cyclic_group(ell)
    g_short = g_vals[:ell]
    phase = np.where(np.abs(g_short) > VALUE_TOL, g_short, 1)
    try:
        run = shift_pipeline(group, f_vals[:ell], phase)
    except DomainError as exc:
        raise ShiftMiss(f"stage two could not prepare a state modulo {ell}") from exc
    idx, p = _read_out(run, group, mode, rng)
    return (-idx) % ell, float(run.prep_probability) * p


def solve_shift_ring(chi: RingChar, f, mode: str = "exact", rng=None):
    """All shifts of a completely nontrivial character of Z_n.

    Stage one Fourier samples the shifted character over Z_n to learn the
    period ``l`` from ``gcd(n, y)``; stage two repeats the field algorithm over
    Z_l. Returns ``(solution, success_probability)`` where the probability is
    ``(phi(n)/n) * (phi(l)/l)**2`` in exact mode.
    """
    if not chi.is_completely_nontrivial():
        raise DomainError("the character must be completely nontrivial")
    n = chi.n
    rng = as_rng(rng)
    group = cyclic_group(n)
    f_vals = _values(group, f)

    prep = amplitude_encode(group, f_vals)
    dist1 = exact_distribution(dft(prep.state))
    if mode == "exact":
        y = int(np.argmax(dist1))
    else:
        if rng.random() >= prep.success_probability:
            raise ShiftMiss("stage-one preparation was not post-selected")
        y = sample_index(dist1, rng)
    ell = n // math.gcd(n, y)
    # mass of all outcomes that lead to the same period
    ys = np.arange(n)
    p_period = float(dist1[n // np.gcd(n, ys) == ell].sum())

    shift, p2 = _ring_stage_two(f_vals, chi.values(), ell, mode, rng)
    solution = ShiftSolution(group, shift, frozenset(range(0, n, ell)), period=ell)
    if mode == "sampled" and not spot_check(f_vals, chi.values(), shift, group, rng):
        raise ShiftMiss(f"candidate shift {shift} (period {ell}) failed verification")
    return solution, float(prep.success_probability) * p_period * p2


# --- approximate Fourier sampling over an unknown period ---------------------

def next_simulable_size(n: int) -> int:
    size = 1 << max(0, (n - 1).bit_length())
    if size > SAMPLING_BOUND:
        raise CapacityError(f"transform length {size} exceeds {SAMPLING_BOUND}")
    return size


def _periodic_values(f, count: int) -> np.ndarray:
    if callable(f):
        return np.array([f(x) for x in range(count)], dtype=complex)
    arr = np.asarray(f, dtype=complex)
    return arr[np.arange(count) % len(arr)]


def repeated_state_distribution(f, m: int, q_len: int) -> tuple[np.ndarray, Fraction]:
    """Fourier distribution over Z_{q_len} of f repeated on ``[0, m)`` and zero-padded.

    ``f`` is a callable on the integers or one period given as an array.
    Also returns the post-selection probability of preparing the state.
    """
    if m > q_len:
        raise DomainError("m must not exceed q_len")
    group = cyclic_group(q_len) if q_len <= SAMPLING_BOUND else None
    if group is None:
        raise CapacityError(f"transform length {q_len} exceeds {SAMPLING_BOUND}")
    vals = np.zeros(q_len, dtype=complex)
    vals[:m] = _periodic_values(f, m)
    support = int((np.abs(vals) > VALUE_TOL).sum())
    if support == 0:
        raise DomainError("function vanishes on [0, m)")
    state = QState.from_vector(group, np.where(np.abs(vals) > VALUE_TOL, vals / np.maximum(np.abs(vals), VALUE_TOL), 0))
    return exact_distribution(dft(state)), Fraction(support, m)


def cf_distribution(f, m: int, q_len: int, denom_bound: int) -> dict[Fraction, float]:
    """Exact distribution of fractions returned by :func:`approx_fourier_sample`."""
    dist, _ = repeated_state_distribution(f, m, q_len)
    labels, fractions = nearest_fraction_table(q_len, denom_bound)
    mass = np.bincount(labels, weights=dist, minlength=len(fractions))
    out: dict[Fraction, float] = {}
    for frac, w in zip(fractions, mass):
        if w > 0:
            key = Fraction(0) if frac == 1 else frac  # x/q_len never reaches 1; 1/1 wraps to 0
            out[key] = out.get(key, 0.0) + float(w)
    return out


def rf_distribution(f, n: int) -> dict[Fraction, float]:
    """Exact distribution of ``y/n`` in lowest terms under Fourier sampling over Z_n."""
    group = cyclic_group(n)
    vals = _periodic_values(f, n)
    dist = exact_distribution(dft(amplitude_encode(group, vals).state))
    out: dict[Fraction, float] = {}
    for y, w in enumerate(dist):
        key = Fraction(y, n)
        out[key] = out.get(key, 0.0) + float(w)
    return out


def l1_distance(d1: dict, d2: dict) -> float:
    return sum(abs(d1.get(k, 0.0) - d2.get(k, 0.0)) for k in set(d1) | set(d2))


def approx_fourier_sample(f, m: int, q_len: int, denom_bound: int, rng=None, _cache=None) -> Fraction:
    """One draw from the continued-fraction post-processed repeated-state distribution."""
    rng = as_rng(rng)
    dist, prep = _cache if _cache is not None else repeated_state_distribution(f, m, q_len)
    while rng.random() >= prep:
        pass  # repeat the preparation until post-selection succeeds
    x = sample_index(dist, rng)
    frac = cf_best_approx(x, q_len, denom_bound)
    return Fraction(0) if frac == 1 else frac


def _is_period(f, d: int, rng, checks: int = SPOT_CHECKS, span: int = 10**6) -> bool:
    for x in rng.integers(0, span, size=checks):
        if abs(f(int(x)) - f(int(x) + d)) > VALUE_TOL:
            return False
    return True


def solve_shift_unknown_n(f, g, period_bound: int, eps: float = 0.1, rng=None,
                          batch: int = 10, max_rounds: int = 20) -> ShiftSolution:
    """Shift of ``f(x) = g(x + s)`` where ``g`` has an unknown period at most ``period_bound``.

    ``f`` and ``g`` are callables on the integers. The period is the smallest
    spot-checked divisor of the lcm of a batch of continued-fraction
    denominators; the shift is then found modulo that period.
    """
    rng = as_rng(rng)
    m = math.ceil(period_bound**2 / eps**2)
    q_len = next_simulable_size(math.ceil(m / eps))
    cache = repeated_state_distribution(f, m, q_len)
    seen: list[int] = []
    ell = None
    for _ in range(max_rounds):
        dens = [approx_fourier_sample(f, m, q_len, period_bound, rng, _cache=cache).denominator
                for _ in range(batch)]
        seen.extend(dens)
        lcm = math.lcm(*dens)
        if lcm == 1:
            raise DomainError("f looks constant; a period-1 function hides no shift")
        if not _is_period(f, lcm, rng):
            continue
        ell = next(d for d in divisors(lcm) if _is_period(f, d, rng))
        if ell == 1:
            raise DomainError("f looks constant; a period-1 function hides no shift")
        if ell <= period_bound:
            break
        ell = None
    if ell is None:
        raise UnresolvedError("no period verified within the round budget", sorted(set(seen)))

    group = cyclic_group(ell)
    f_vals = _periodic_values(f, ell)
    g_vals = _periodic_values(g, ell)
    for _ in range(max_rounds):
        try:
            shift, _ = _ring_stage_two(f_vals, g_vals, ell, "sampled", rng)
        except ShiftMiss:
            continue
        if spot_check(lambda x: f(x), lambda x: g(x), shift, group, rng):
            return ShiftSolution(group, shift, frozenset({0}), period=ell)
    raise UnresolvedError(f"no verified shift modulo {ell} within the round budget", [ell])


# --- hidden coset problem ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HcpInstance:
    """``f(x) = g(x + shift)`` on ``group``; ``g`` known as a value table."""

    group: GroupSpec
    g: np.ndarray
    f: object
    shift: int | None = None

    @classmethod
    def make(cls, group: GroupSpec, g, shift: int) -> "HcpInstance":
        g = np.asarray(g, dtype=complex)
        return cls(group, g, g[group.add(group.elements(), shift)], shift)


def _constant_magnitude_support(values: np.ndarray, what: str) -> np.ndarray:
    mags = np.abs(values)
    support = mags > VALUE_TOL * max(1.0, mags.max())
    if not support.any():
        raise DomainError(f"{what} vanishes everywhere")
    if np.ptp(mags[support]) > VALUE_TOL * mags[support].max() * 10:
        raise PromiseViolation(f"{what} does not have constant magnitude on its support")
    return support


def solve_hidden_coset(instance: HcpInstance, mode: str = "exact", rng=None, subgroup=None):
    """Deconvolution algorithm for ``f = g shifted by s``.

    Divides the spectrum of f by that of g wherever ``g_hat`` is nonzero (as a
    pure phase, by the constant-magnitude promise) and leaves the other
    frequencies untouched. Returns ``(solution, success_probability)`` with
    probability ``alpha * beta`` in exact mode. ``subgroup`` is the stabilizer
    H of g if the caller already knows it; by default H is trivial.
    """
    group = instance.group
    rng = as_rng(rng)
    g_vals = np.asarray(instance.g, dtype=complex)
    g_hat = group.transform(g_vals)
    spec_support = _constant_magnitude_support(g_hat, "g_hat")
    phase = np.ones(group.dim, dtype=complex)
    phase[spec_support] = np.conj(g_hat[spec_support]) / np.abs(g_hat[spec_support])

    f_vals = _values(group, instance.f)
    f_support = _constant_magnitude_support(f_vals, "f")
    scale = np.abs(f_vals[f_support]).mean()
    run = shift_pipeline(group, f_vals / scale, phase)
    if mode == "exact":
        # when beta < 1 several outcomes can tie with -s; take the most likely one that checks out
        dist = run.distribution
        for idx in np.argsort(-dist, kind="stable"):
            t = group.neg(int(idx))
            if np.allclose(f_vals, g_vals[group.add(group.elements(), t)], atol=VALUE_TOL):
                p = float(dist[idx])
                break
        else:
            raise UnresolvedError("no outcome of the deconvolution matches f")
    else:
        idx, p = _read_out(run, group, mode, rng)
        t = group.neg(idx)
        if not spot_check(instance.f, g_vals, t, group, rng):
            raise ShiftMiss(f"candidate shift {t} failed verification")
    h = frozenset({0}) if subgroup is None else frozenset(subgroup)
    return ShiftSolution(group, t, h), float(run.prep_probability) * p


# --- identifying the hidden subgroup --------------------------------------------

def joint_kernel(group: GroupSpec, ys: Sequence[int]) -> frozenset:
    """``{x : psi_y(x) = 1 for every sampled y}`` by exhaustive scan."""
    mask = np.ones(group.dim, dtype=bool)
    for y in set(int(y) for y in ys):
        mask &= group.pairing_exponents(y) == 0
    return frozenset(int(x) for x in np.nonzero(mask)[0])


def identify_subgroup_standard(group: GroupSpec, g, num_samples: int, rng=None) -> frozenset:
    """Standard coset-sampling: compute g into a register, measure it, Fourier sample."""
    rng = as_rng(rng)
    vals = _values(group, g)
    keys = np.round(vals.real, 9) + 1j * np.round(vals.imag, 9)
    levels, inverse, counts = np.unique(keys, return_inverse=True, return_counts=True)
    ys = []
    for _ in range(num_samples):
        level = sample_index(counts / group.dim, rng)
        coset = QState.from_vector(group, (inverse == level).astype(complex))
        ys.append(sample_index(exact_distribution(dft(coset)), rng))
    return joint_kernel(group, ys)


def identify_subgroup_amplitude(group: GroupSpec, g, num_samples: int, rng=None) -> frozenset:
    """Compute g into the amplitude, Fourier sample, and intersect the character kernels."""
    rng = as_rng(rng)
    vals = _values(group, g)
    try:
        _constant_magnitude_support(vals, "g")
        _constant_magnitude_support(group.transform(vals), "g_hat")
    except PromiseViolation as exc:
        warnings.warn(f"{exc}; the returned subgroup is advisory", PromiseWarning, stacklevel=2)
    mags = np.abs(vals)
    unit = np.where(mags > VALUE_TOL, vals / np.maximum(mags, VALUE_TOL), 0)
    prep = amplitude_encode(group, unit)
    dist = exact_distribution(dft(prep.state))
    ys = []
    while len(ys) < num_samples:
        if rng.random() < prep.success_probability:
            ys.append(sample_index(dist, rng))
    return joint_kernel(group, ys)
