"""Exact sparse and grid-based dense fields on the torus (R/2piZ)^n, n in {1, 2}.

A sparse field stores the finite Fourier series

    u(x) = sum_xi  c(xi) * exp(i <x, xi>),        xi in Z^n,

with the series convention  c(xi) = (2pi)^{-n} integral u(x) exp(-i<x,xi>) dx.
All coefficient reductions iterate in the lexicographic frequency order so
that results are bitwise reproducible.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch, FrequencyOutOfRange

Frequency = tuple[int, ...]

# Components must leave headroom for dyadic shifts in 64-bit arithmetic.
FREQ_CAP = 1 << 62

DEFAULT_MUL_BUDGET = 10_000_000


def check_frequency(xi: Frequency, n: int) -> Frequency:
    """Validate one lattice frequency: an n-tuple of ints below the 2^62 cap."""
    if len(xi) != n:
        raise DimensionMismatch(f"frequency {xi} is not {n}-dimensional")
    for c in xi:
        if not isinstance(c, (int, np.integer)):
            raise FrequencyOutOfRange(f"non-integer frequency component {c!r}")
        if abs(int(c)) >= FREQ_CAP:
            raise FrequencyOutOfRange(f"|{c}| >= 2^62")
    return tuple(int(c) for c in xi)


def freq_add(a: Frequency, b: Frequency) -> Frequency:
    return tuple(x + y for x, y in zip(a, b))


def freq_neg(a: Frequency) -> Frequency:
    return tuple(-x for x in a)


def freq_scale(k: int, a: Frequency) -> Frequency:
    return tuple(k * x for x in a)


def freq_abs(a: Frequency) -> float:
    """Euclidean length, computed in floats (components may exceed 2^31)."""
    return math.sqrt(math.fsum(float(c) * float(c) for c in a))


def angled(a: Frequency) -> float:
    """The weight (1 + |xi|^2)^(1/2)."""
    return math.sqrt(1.0 + math.fsum(float(c) * float(c) for c in a))


@dataclass(frozen=True)
class SparseField:
    """Finite frequency -> coefficient mapping; an exact trigonometric polynomial.

    Coefficients of magnitude <= tau are dropped at construction; tau = 0 keeps
    everything but exact zeros.  Instances are treated as immutable: operations
    return new fields.
    """

    n: int
    coeffs: dict[Frequency, complex]
    tau: float = 0.0

    def __post_init__(self):
        if self.n not in (1, 2):
            raise DimensionMismatch(f"dimension {self.n} not in {{1, 2}}")
        if self.tau < 0:
            raise ValueError("prune threshold must be >= 0")
        clean: dict[Frequency, complex] = {}
        for xi in sorted(self.coeffs):
            c = complex(self.coeffs[xi])
            if abs(c) > self.tau:
                clean[check_frequency(xi, self.n)] = c
        object.__setattr__(self, "coeffs", clean)

    # -- basic queries ------------------------------------------------------

    def items(self):
        """Coefficients in lexicographic frequency order."""
        return [(xi, self.coeffs[xi]) for xi in sorted(self.coeffs)]

    def spectrum(self) -> set[Frequency]:
        """Frequencies with coefficient magnitude above the prune threshold."""
        return set(self.coeffs)

    def coeff(self, xi: Frequency) -> complex:
        return self.coeffs.get(tuple(xi), 0.0 + 0.0j)

    def max_abs_freq(self) -> int:
        """Largest component magnitude over the spectrum (0 for the empty field)."""
        if not self.coeffs:
            return 0
        return max(abs(c) for xi in self.coeffs for c in xi)

    def __len__(self) -> int:
        return len(self.coeffs)

    # -- exact coefficient algebra -------------------------------------------

    def add(self, other: "SparseField") -> "SparseField":
        if self.n != other.n:
            raise DimensionMismatch("cannot add fields of different dimension")
        out = dict(self.coeffs)
        for xi in sorted(other.coeffs):
            out[xi] = out.get(xi, 0.0) + other.coeffs[xi]
        return SparseField(self.n, out, self.tau)

    def sub(self, other: "SparseField") -> "SparseField":
        return self.add(other.scale(-1.0))

    def scale(self, a: complex) -> "SparseField":
        return SparseField(self.n, {xi: a * c for xi, c in self.coeffs.items()}, self.tau)

    def conjugate(self) -> "SparseField":
        """The field conj(u); coefficient at xi becomes conj(c(-xi))."""
        return SparseField(
            self.n,
            {freq_neg(xi): c.conjugate() for xi, c in self.coeffs.items()},
            self.tau,
        )

    def multiplier(self, m) -> "SparseField":
        """Scale each coefficient by m(xi); m maps a frequency to a scalar."""
        return SparseField(
            self.n, {xi: m(xi) * c for xi, c in self.coeffs.items()}, self.tau
        )

    def evaluate(self, x) -> complex:
        """Direct series evaluation at a point x (tuple of floats)."""
        acc_re, acc_im = [], []
        for xi, c in self.items():
            z = c * cmath.exp(1j * math.fsum(p * float(q) for p, q in zip(x, xi)))
            acc_re.append(z.real)
            acc_im.append(z.imag)
        return complex(math.fsum(acc_re), math.fsum(acc_im))


def zero_field(n: int, tau: float = 0.0) -> SparseField:
    return SparseField(n, {}, tau)


def delta_field(xi: Frequency, c: complex = 1.0, tau: float = 0.0) -> SparseField:
    """Single-mode field c * exp(i<x, xi>)."""
    return SparseField(len(xi), {tuple(xi): c}, tau)


def pointwise_mul(
    u: SparseField, v: SparseField, budget: int = DEFAULT_MUL_BUDGET
) -> SparseField:
    """Exact product of trigonometric polynomials by coefficient convolution.

    (uv)^(zeta) = sum_{xi + eta = zeta} u^(xi) v^(eta).  Raises BudgetExceeded
    when |u| * |v| passes the pair budget; callers should switch to a grid.
    """
    if u.n != v.n:
        raise DimensionMismatch("cannot multiply fields of different dimension")
    if len(u) * len(v) > budget:
        raise BudgetExceeded(f"{len(u)} * {len(v)} coefficient pairs exceed {budget}")
    out: dict[Frequency, complex] = {}
    for xi, cu in u.items():
        for eta, cv in v.items():
            zeta = freq_add(xi, eta)
            out[zeta] = out.get(zeta, 0.0) + cu * cv
    return SparseField(u.n, out, max(u.tau, v.tau))


def inner_product(u: SparseField, v: SparseField) -> complex:
    """<u, v> = sum_xi u^(xi) conj(v^(xi)), i.e. (2pi)^{-n} integral of u vbar."""
    if u.n != v.n:
        raise DimensionMismatch("inner product needs matching dimension")
    re, im = [], []
    for xi in sorted(u.spectrum() & v.spectrum()):
        z = u.coeffs[xi] * v.coeffs[xi].conjugate()
        re.append(z.real)
        im.append(z.imag)
    return complex(math.fsum(re), math.fsum(im))


# -- dense grid realization ---------------------------------------------------


@dataclass(frozen=True)
class DenseField:
    """Complex samples on the uniform grid x_k = 2 pi k / M, k in {0..M-1}^n."""

    n: int
    M: int
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n not in (1, 2):
            raise DimensionMismatch(f"dimension {self.n} not in {{1, 2}}")
        if self.M < 2 or (self.M & (self.M - 1)) != 0:
            raise ValueError(f"grid size {self.M} is not a power of two")
        arr = np.ascontiguousarray(self.samples, dtype=np.complex128)
        if arr.shape != (self.M,) * self.n:
            raise ValueError(f"sample shape {arr.shape} != {(self.M,) * self.n}")
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)


def grid_points(M: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(M) / M


def grid_frequencies(M: int, n: int) -> np.ndarray:
    """|xi| on the FFT index grid, shape (M,)*n."""
    k = np.fft.fftfreq(M) * M
    if n == 1:
        return np.abs(k)
    kx, ky = np.meshgrid(k, k, indexing="ij")
    return np.sqrt(kx * kx + ky * ky)


def _grid_index(xi: Frequency, M: int) -> tuple[int, ...]:
    half = M // 2
    for c in xi:
        if not (-half <= c < half):
            raise FrequencyOutOfRange(f"frequency {xi} outside [-{half}, {half})")
    return tuple(c % M for c in xi)


def sparse_to_dense(u: SparseField, M: int) -> DenseField:
    """Evaluate the trigonometric polynomial on the grid via an inverse FFT.

    Every frequency component must lie in [-M/2, M/2); otherwise the embedding
    would alias and FrequencyOutOfRange is raised.
    """
    shape = (M,) * u.n
    spec = np.zeros(shape, dtype=np.complex128)
    scale = float(M) ** u.n
    for xi, c in u.items():
        spec[_grid_index(xi, M)] += scale * c
    return DenseField(u.n, M, np.fft.ifftn(spec))


def dense_to_sparse(g: DenseField, tau: float = 0.0) -> SparseField:
    """Forward FFT to series coefficients, pruned at tau."""
    spec = np.fft.fftn(g.samples) / float(g.M) ** g.n
    half = g.M // 2
    keep = np.argwhere(np.abs(spec) > tau)
    coeffs: dict[Frequency, complex] = {}
    for idx in keep:
        xi = tuple(int(i) if i < half else int(i) - g.M for i in idx)
        coeffs[xi] = complex(spec[tuple(idx)])
    return SparseField(g.n, coeffs, tau)
