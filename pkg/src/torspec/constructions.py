"""Named lacunary constructions shared by the experiments and tests."""

from __future__ import annotations

import math

import numpy as np

from .errors import BandwidthViolation, RangeTooLarge
from .fields import Frequency, SparseField, freq_abs, freq_add, freq_scale
from .symbols import pow2

MAX_DYADIC = 60


def bandwidth(u: SparseField) -> float:
    """Largest Euclidean frequency radius in the spectrum (0 if empty)."""
    return max((freq_abs(xi) for xi in u.spectrum()), default=0.0)


def ball_carrier(n: int, B: int, norm: str = "h0") -> SparseField:
    """Constant-coefficient carrier with spectrum {|xi| <= B}, unit H^0 norm."""
    pts: list[Frequency] = []
    rng = range(-B, B + 1)
    if n == 1:
        pts = [(k,) for k in rng if k * k <= B * B]
    else:
        pts = [(k, l) for k in rng for l in rng if k * k + l * l <= B * B]
    c = 1.0 / math.sqrt(len(pts))
    return SparseField(n, {xi: c for xi in pts})


def lacunary_field(
    theta: Frequency, d: float, j_lo: int, j_hi: int, v: SparseField
) -> SparseField:
    """w(theta, d): sum_j 2^(-jd) v shifted to the dyadic ray 2^j theta.

    Coefficients: w^(eta) = sum_j 2^(-jd) v^(eta - 2^j theta).  The carrier
    bandwidth must stay below 2^{j_lo}/20 so the chunks are separated with
    the same margin at every scale.
    """
    if j_hi > MAX_DYADIC:
        raise RangeTooLarge(f"top dyadic index {j_hi} > {MAX_DYADIC}")
    B = bandwidth(v)
    if B > 2.0**j_lo / 20.0:
        raise BandwidthViolation(
            f"carrier bandwidth {B} exceeds 2^{j_lo}/20 = {2.0 ** j_lo / 20.0}"
        )
    out: dict[Frequency, complex] = {}
    for j in range(j_lo, j_hi + 1):
        shift = freq_scale(2**j, theta)
        w = pow2(-j * d)
        for eta, c in v.items():
            out[freq_add(eta, shift)] = w * c
    return SparseField(v.n, out, v.tau)


def weierstrass_field(d: float, J: int) -> SparseField:
    """Truncated lacunary exponential sum f_J(t) = sum_{j=1..J} 2^(-jd) e^{i 2^j t}."""
    if J > MAX_DYADIC:
        raise RangeTooLarge(f"top dyadic index {J} > {MAX_DYADIC}")
    return SparseField(1, {(2**j,): pow2(-j * d) for j in range(1, J + 1)})


def harmonic_ratio(N: int) -> float:
    """r_N = (1/N + 1/(N+1) + ... + 1/N^2) / log N."""
    return math.fsum(1.0 / j for j in range(N, N * N + 1)) / math.log(N)


def harmonic_ratio_bracket(N: int) -> tuple[float, float]:
    """The two-sided bracket [1, log(N^2/(N-1)) / log N] containing r_N."""
    return 1.0, math.log(N * N / (N - 1.0)) / math.log(N)


def vanishing_family(
    N: int,
    d: float,
    theta: Frequency,
    v: SparseField | None = None,
    allow_truncation: bool = False,
) -> tuple[SparseField, SparseField, int]:
    """Member N of the vanishing family, with its carrier and top index.

    Coefficients: out^(xi) = (1/log N) sum_{j=N..N^2} (2^(-jd)/j) v^(xi - 2^j theta), with
    carrier bandwidth B = max(1, floor(2^N / 20)).  Needs N >= 5 so the
    scaled bandwidth admits at least the frequencies {-1, 0, 1}.  When N^2
    exceeds the dyadic cap the construction raises RangeTooLarge, unless
    allow_truncation is set, in which case the sum stops at the cap (used
    only for norm-ratio probes, where the exact limit identity is not
    asserted).
    """
    if N < 5:
        raise RangeTooLarge("need N >= 5 for a usable scaled bandwidth")
    j_hi = N * N
    if j_hi > MAX_DYADIC:
        if not allow_truncation:
            raise RangeTooLarge(f"N^2 = {N * N} > {MAX_DYADIC}")
        j_hi = MAX_DYADIC
    n = len(theta)
    if v is None:
        v = ball_carrier(n, max(1, (2**N) // 20))
    out: dict[Frequency, complex] = {}
    logN = math.log(N)
    for j in range(N, j_hi + 1):
        shift = freq_scale(2**j, theta)
        w = pow2(-j * d) / (j * logN)
        for eta, c in v.items():
            out[freq_add(eta, shift)] = w * c
    return SparseField(n, out, v.tau), v, j_hi


def random_band_limited(
    n: int,
    n_modes: int,
    window: int,
    rng: np.random.Generator,
    hermitian: bool = False,
) -> SparseField:
    """Seeded random trigonometric polynomial with i.i.d. Gaussian coefficients.

    Frequencies are drawn uniformly from the cube [-window, window]^n; with
    hermitian=True the spectrum is symmetrised so the field is real-valued.
    """
    coeffs: dict[Frequency, complex] = {}
    for _ in range(n_modes):
        xi = tuple(int(c) for c in rng.integers(-window, window + 1, size=n))
        coeffs[xi] = complex(rng.normal(), rng.normal())
    if hermitian:
        sym: dict[Frequency, complex] = {}
        for xi in sorted(coeffs):
            neg = tuple(-c for c in xi)
            if neg in sym or xi in sym:
                continue
            if xi == neg:
                sym[xi] = complex(coeffs[xi].real, 0.0)
            else:
                sym[xi] = coeffs[xi]
                sym[neg] = coeffs[xi].conjugate()
        coeffs = sym
    return SparseField(n, coeffs)
