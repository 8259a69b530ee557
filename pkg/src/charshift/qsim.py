"""Dense state-vector engine over finite abelian groups.

States live on one of three index sets: the cyclic group Z_n, the additive
group of a finite field F_q, or a product Z_{n_1} x ... x Z_{n_k} (mixed radix,
last factor fastest). The Fourier transform on each group is the exact unitary
map

    |x>  ->  dim**-1/2 * sum_y  psi_y(x) |y>

with ``psi_y(x) = w_n**(x*y)`` on Z_n, ``w_p**Tr(x*y)`` on F_q and the
product of cyclic pairings on a product group.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from .errors import CapacityError, DomainError
from .finfield import FieldCtx

DIM_BOUND = 2**16
NORM_TOL = 1e-12
UNIT_TOL = 1e-9

Values = Union[Callable[[int], complex], Sequence[complex], np.ndarray]


class GroupSpec:
    """Index set and character pairing of a finite abelian group."""

    def __init__(self, kind: str, orders: tuple[int, ...], field_ctx: FieldCtx | None = None):
        self.kind = kind
        self.orders = orders
        self.field = field_ctx
        self.dim = math.prod(orders)
        # pairing exponents are integers modulo this common denominator
        self.exponent_modulus = field_ctx.p if field_ctx else math.lcm(*orders)

    @classmethod
    def cyclic(cls, n: int, bound: int = DIM_BOUND) -> "GroupSpec":
        if n < 1:
            raise DomainError("cyclic group order must be positive")
        if n > bound:
            raise CapacityError(f"dimension {n} exceeds {bound}")
        return cls("cyclic", (n,))

    @classmethod
    def field_additive(cls, ctx: FieldCtx) -> "GroupSpec":
        if ctx.q > DIM_BOUND:
            raise CapacityError(f"dimension {ctx.q} exceeds {DIM_BOUND}")
        return cls("field", (ctx.p,) * ctx.r, ctx)

    @classmethod
    def product(cls, orders: Sequence[int]) -> "GroupSpec":
        orders = tuple(int(n) for n in orders)
        if not orders or min(orders) < 1:
            raise DomainError("product group needs positive factor orders")
        if math.prod(orders) > DIM_BOUND:
            raise CapacityError(f"dimension {math.prod(orders)} exceeds {DIM_BOUND}")
        return cls("product", orders)

    def __repr__(self):
        if self.kind == "cyclic":
            return f"Z_{self.dim}"
        if self.kind == "field":
            return f"F_{self.dim}"
        return " x ".join(f"Z_{n}" for n in self.orders)

    def __eq__(self, other):
        return isinstance(other, GroupSpec) and (self.kind, self.orders, self.field) == (other.kind, other.orders, other.field)

    def __hash__(self):
        return hash((self.kind, self.orders))

    # --- element arithmetic on index arrays -------------------------------

    def coords(self, idx) -> np.ndarray:
        """Per-factor coordinates, shape ``(..., k)``."""
        if self.kind == "field":
            return self.field.digits(idx)[..., ::-1]
        return np.stack(np.unravel_index(np.asarray(idx, dtype=np.int64), self.orders), axis=-1)

    def from_coords(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64) % np.array(self.orders)
        if self.kind == "field":
            return self.field.from_digits(coords[..., ::-1])
        return np.ravel_multi_index(tuple(np.moveaxis(coords, -1, 0)), self.orders)

    def add(self, a, b):
        out = self.from_coords(self.coords(a) + self.coords(b))
        return int(out) if np.ndim(out) == 0 else out

    def neg(self, a):
        out = self.from_coords(-self.coords(a))
        return int(out) if np.ndim(out) == 0 else out

    def elements(self) -> np.ndarray:
        return np.arange(self.dim)

    def pairing_exponents(self, y) -> np.ndarray:
        """``e[x]`` with ``psi_y(x) = w_M**e[x]`` for every x, M = :attr:`exponent_modulus`."""
        xs = self.coords(self.elements())
        yc = self.coords(y)
        M = self.exponent_modulus
        if self.kind == "field":
            # Tr(x*y) = sum_ij x_i y_j Tr(X^(i+j)); coords are reversed digits
            form = self.field.trace_form
            return (xs[:, ::-1] @ (form @ yc[::-1])) % M
        weights = np.array([M // n for n in self.orders], dtype=np.int64)
        return ((xs * yc) @ weights) % M

    def character_matrix(self) -> np.ndarray:
        """Unitary Fourier matrix ``F[y, x] = psi_y(x)/sqrt(dim)`` (naive, for checks)."""
        M = self.exponent_modulus
        rows = np.stack([self.pairing_exponents(y) for y in range(self.dim)])
        return np.exp(2j * np.pi * rows / M) / math.sqrt(self.dim)

    # --- transforms ---------------------------------------------------------

    @cached_property
    def _field_perm(self) -> np.ndarray:
        # output y of the field transform sits at z = T*y of the (Z_p)^r transform
        ctx = self.field
        digits = ctx.digits(self.elements())
        z = (digits @ ctx.trace_form.T) % ctx.p
        return ctx.from_digits(z)

    def transform(self, vec, inverse: bool = False) -> np.ndarray:
        """Apply the unitary Fourier transform (or its inverse) to a raw vector."""
        vec = np.asarray(vec, dtype=complex)
        if vec.shape != (self.dim,):
            raise DomainError(f"vector of length {vec.shape} does not match dimension {self.dim}")
        # numpy's ifft carries the +2*pi*i sign used by psi_y
        fft = np.fft.fftn if inverse else np.fft.ifftn
        if self.kind == "cyclic":
            return fft(vec, norm="ortho")
        if self.kind == "product":
            return fft(vec.reshape(self.orders), norm="ortho").reshape(-1)
        perm = self._field_perm
        shape = (self.field.p,) * self.field.r
        if inverse:
            staged = np.empty_like(vec)
            staged[perm] = vec
            return fft(staged.reshape(shape), norm="ortho").reshape(-1)
        out = fft(vec.reshape(shape), norm="ortho").reshape(-1)
        return out[perm]


def _evaluate(group: GroupSpec, f: Values) -> np.ndarray:
    if callable(f):
        return np.array([f(int(x)) for x in range(group.dim)], dtype=complex)
    arr = np.asarray(f, dtype=complex)
    if arr.shape != (group.dim,):
        raise DomainError(f"expected {group.dim} values, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class QState:
    """Unit-norm amplitude vector over a :class:`GroupSpec`; immutable."""

    group: GroupSpec
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.group.dim,):
            raise DomainError("amplitude vector does not match the group dimension")
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > NORM_TOL:
            raise DomainError(f"state norm {norm!r} is not 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, group: GroupSpec, x: int) -> "QState":
        amps = np.zeros(group.dim, dtype=complex)
        amps[x] = 1
        return cls(group, amps)

    @classmethod
    def from_vector(cls, group: GroupSpec, vec) -> "QState":
        vec = np.asarray(vec, dtype=complex)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise DomainError("cannot normalize the zero vector")
        return cls(group, vec / norm)

    def translate(self, s: int) -> "QState":
        """The state with amplitude ``a[x + s]`` at ``x``."""
        src = self.group.add(self.group.elements(), s)
        return QState(self.group, self.amplitudes[src])


@dataclass(frozen=True)
class PrepOutcome:
    state: QState
    success_probability: Fraction


def amplitude_encode(group: GroupSpec, f: Values) -> PrepOutcome:
    """Post-selected branch of ``sum_x f(x)|x>`` and its success probability.

    ``f`` is a callable on element indices or a value array; every value must
    be zero or of unit magnitude.
    """
    values = _evaluate(group, f)
    mags = np.abs(values)
    support = mags > UNIT_TOL
    if not support.any():
        raise DomainError("function vanishes everywhere; nothing to prepare")
    if np.any(np.abs(mags[support] - 1) > UNIT_TOL):
        raise DomainError("function values must be 0 or of unit magnitude")
    amps = np.where(support, values / np.where(support, mags, 1), 0)
    count = int(support.sum())
    return PrepOutcome(QState(group, amps / math.sqrt(count)), Fraction(count, group.dim))


def dft(state: QState) -> QState:
    return QState.from_vector(state.group, state.group.transform(state.amplitudes))


def dft_inverse(state: QState) -> QState:
    return QState.from_vector(state.group, state.group.transform(state.amplitudes, inverse=True))


def phase_multiply(state: QState, u: Values) -> QState:
    """Multiply amplitude ``x`` by ``u(x)``; ``u`` must be unimodular wherever the state is nonzero."""
    phases = _evaluate(state.group, u)
    on_support = np.abs(state.amplitudes) > 0
    if np.any(np.abs(np.abs(phases[on_support]) - 1) > UNIT_TOL):
        raise DomainError("phase function is not unimodular on the state's support")
    return QState.from_vector(state.group, np.where(on_support, state.amplitudes * phases, 0))


def exact_distribution(state: QState) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


def sample_index(probs: np.ndarray, rng: np.random.Generator) -> int:
    """Inverse-CDF draw of one index using a single ``rng.random()`` variate."""
    cdf = np.cumsum(probs)
    u = rng.random() * cdf[-1]
    return int(min(np.searchsorted(cdf, u, side="right"), len(cdf) - 1))


def measure_sample(state: QState, rng: np.random.Generator) -> int:
    return sample_index(exact_distribution(state), rng)
