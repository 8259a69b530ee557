import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from charshift.errors import CapacityError, DomainError
from charshift.finfield import MultCharFF, field_make
from charshift.oracles import dft_reference
from charshift.qsim import (
    GroupSpec,
    QState,
    amplitude_encode,
    dft,
    dft_inverse,
    exact_distribution,
    measure_sample,
    phase_multiply,
    sample_index,
)

SMALL_GROUPS = [
    GroupSpec.cyclic(1), GroupSpec.cyclic(7), GroupSpec.cyclic(16), GroupSpec.cyclic(45),
    GroupSpec.product([2, 3, 4]), GroupSpec.product([4, 4]), GroupSpec.product([3, 3, 3]),
    GroupSpec.field_additive(field_make(3, 2)), GroupSpec.field_additive(field_make(2, 4)),
    GroupSpec.field_additive(field_make(5, 2)), GroupSpec.field_additive(field_make(3, 5)),
    GroupSpec.cyclic(256), GroupSpec.product([16, 16]), GroupSpec.field_additive(field_make(2, 8)),
]


def rand_vec(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


@pytest.mark.parametrize("group", SMALL_GROUPS, ids=repr)
def test_unitarity(group):
    F = np.stack([group.transform(np.eye(group.dim)[x]) for x in range(group.dim)], axis=1)
    assert np.max(np.abs(F.conj().T @ F - np.eye(group.dim))) < 1e-10


@pytest.mark.parametrize("group", SMALL_GROUPS, ids=repr)
def test_fast_matches_character_matrix(group):
    v = rand_vec(np.random.default_rng(group.dim), group.dim)
    assert np.max(np.abs(group.character_matrix() @ v - group.transform(v))) < 1e-10


@pytest.mark.parametrize("group", SMALL_GROUPS, ids=repr)
def test_inverse(group):
    v = rand_vec(np.random.default_rng(1), group.dim)
    assert np.allclose(group.transform(group.transform(v), inverse=True), v, atol=1e-12)


def test_fast_cyclic_matches_naive_all_n():
    rng = np.random.default_rng(7)
    for n in range(1, 257):
        v = rand_vec(rng, n)
        assert np.max(np.abs(dft_reference(v) - GroupSpec.cyclic(n).transform(v))) < 1e-10, n


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 200), st.integers(0, 10**6), st.integers(0, 2**32 - 1))
def test_shift_to_phase(n, s, seed):
    s %= n
    group = GroupSpec.cyclic(n)
    state = QState(group, rand_vec(np.random.default_rng(seed), n))
    lhs = dft(state.translate(s)).amplitudes
    y = np.arange(n)
    rhs = np.exp(-2j * np.pi * (s * y % n) / n) * dft(state).amplitudes
    assert np.max(np.abs(lhs - rhs)) < 1e-10


@pytest.mark.parametrize("p,r", [(3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3), (11, 1), (13, 1), (2, 4),
                                 (17, 1), (5, 2), (3, 3), (29, 1), (2, 5), (7, 2), (61, 1), (2, 6)])
def test_gauss_identity_fields(p, r):
    ctx = field_make(p, r)
    group = GroupSpec.field_additive(ctx)
    for k in range(1, ctx.q - 1):
        v = MultCharFF(ctx, k).values()
        hat = group.transform(v)
        assert np.max(np.abs(hat - np.conj(v) * hat[1])) < 1e-9
        assert abs(abs(hat[1]) - 1) < 1e-9


def test_group_arithmetic():
    g = GroupSpec.product([2, 3, 4])
    assert g.dim == 24 and g.exponent_modulus == 12
    for a in range(24):
        assert g.add(a, g.neg(a)) == 0
    f = GroupSpec.field_additive(field_make(3, 2))
    ctx = f.field
    assert all(f.add(a, b) == ctx.add(a, b) for a in range(9) for b in range(9))


def test_capacity():
    with pytest.raises(CapacityError):
        GroupSpec.cyclic(2**16 + 1)
    with pytest.raises(CapacityError):
        GroupSpec.product([300, 300])
    with pytest.raises(DomainError):
        GroupSpec.cyclic(0)


def test_state_invariants():
    g = GroupSpec.cyclic(4)
    with pytest.raises(DomainError):
        QState(g, np.ones(4))
    with pytest.raises(DomainError):
        QState(g, np.ones(3) / math.sqrt(3))
    with pytest.raises(DomainError):
        QState.from_vector(g, np.zeros(4))
    s = QState.basis(g, 2)
    with pytest.raises(ValueError):
        s.amplitudes[0] = 1
    assert exact_distribution(dft(s)).tolist() == pytest.approx([0.25] * 4)


def test_amplitude_encode():
    g = GroupSpec.cyclic(7)
    out = amplitude_encode(g, MultCharFF(field_make(7, 1), 3))
    assert out.success_probability == Fraction(6, 7)
    assert np.isclose(np.linalg.norm(out.state.amplitudes), 1, atol=1e-12)
    with pytest.raises(DomainError):
        amplitude_encode(g, np.zeros(7))
    with pytest.raises(DomainError):
        amplitude_encode(g, np.full(7, 0.5))


def test_roundtrip_and_phase():
    g = GroupSpec.product([3, 5])
    s = QState(g, rand_vec(np.random.default_rng(3), 15))
    assert np.allclose(dft_inverse(dft(s)).amplitudes, s.amplitudes)
    u = np.exp(1j * np.arange(15))
    assert np.allclose(phase_multiply(s, u).amplitudes, s.amplitudes * u)
    sparse = QState.basis(g, 0)
    # only the support has to be unimodular
    assert np.allclose(phase_multiply(sparse, np.r_[1j, np.zeros(14)]).amplitudes[0], 1j)
    with pytest.raises(DomainError):
        phase_multiply(s, np.full(15, 2.0))


def test_sample_point_mass():
    s = QState.basis(GroupSpec.cyclic(8), 5)
    for seed in range(20):
        assert measure_sample(s, np.random.default_rng(seed)) == 5


def test_sample_uniform_pinned():
    # frozen with numpy's PCG64; first variates 0.637, 0.512, 0.262, 0.086, 0.943, 0.805
    probs = np.array([0.5, 0.5])
    assert [sample_index(probs, np.random.default_rng(s)) for s in range(6)] == [1, 1, 0, 0, 1, 1]


def test_sample_frequency():
    rng = np.random.default_rng(11)
    hits = sum(sample_index(np.array([0.75, 0.25]), rng) == 0 for _ in range(10_000))
    sigma = math.sqrt(10_000 * 0.75 * 0.25)
    assert abs(hits - 7500) < 3 * sigma
