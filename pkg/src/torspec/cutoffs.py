"""Radial plateau cutoffs, dyadic annulus bumps, and frequency projections.

The basic object is a smooth radial profile psi with

    psi(xi) = 1 for |xi| <= r,   psi(xi) = 0 for |xi| >= R,   0 <= psi <= 1,

from which the annulus bump phi = psi - psi(2 .) and the dyadic family
Phi_0 = psi, Phi_j = phi(2^{-j} .) are derived.  The plateau and support
branches return exact 0.0 / 1.0 so dyadic stabilisation is detectable as
bitwise equality downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadRadii
from .fields import Frequency, SparseField, freq_abs

DEFAULT_R = 1.1
DEFAULT_BIG_R = 2.0


def _blend_exp(t: float) -> float:
    # C-infinity falling blend on [0, 1]: 1 at t=0, 0 at t=1.
    def h(s: float) -> float:
        return math.exp(-1.0 / s) if s > 0.0 else 0.0

    return h(1.0 - t) / (h(t) + h(1.0 - t))


def _blend_poly7(t: float) -> float:
    # Degree-7 smoothstep (C^3), falling orientation.
    s = 1.0 - t
    return s * s * s * s * (35.0 - 84.0 * s + 70.0 * s * s - 20.0 * s * s * s)


_BLENDS = {"exp": _blend_exp, "poly7": _blend_poly7}


def falling_blend(kind: str, t: float) -> float:
    """Smooth transition from 1 (t <= 0) down to 0 (t >= 1)."""
    if t <= 0.0:
        return 1.0
    if t >= 1.0:
        return 0.0
    return _BLENDS[kind](t)


@dataclass(frozen=True)
class CutoffProfile:
    """Radial plateau function: 1 inside radius r, 0 outside radius R."""

    r: float
    R: float
    kind: str = "exp"

    def __post_init__(self):
        if not (0.0 < self.r < self.R):
            raise BadRadii(f"need 0 < r < R, got r={self.r}, R={self.R}")
        if self.kind not in _BLENDS:
            raise BadRadii(f"unknown smoothstep kind {self.kind!r}")

    @property
    def id(self) -> str:
        return f"{self.kind}(r={self.r},R={self.R})"

    def radial(self, rho: float) -> float:
        """Evaluate at radius rho >= 0; exactly 1 on the plateau, 0 outside."""
        if rho <= self.r:
            return 1.0
        if rho >= self.R:
            return 0.0
        return _BLENDS[self.kind]((rho - self.r) / (self.R - self.r))

    def __call__(self, xi: Frequency) -> float:
        return self.radial(freq_abs(xi))

    def dilated(self, m: int, xi: Frequency) -> float:
        """psi(2^{-m} xi)."""
        return self.radial(freq_abs(xi) / float(2**m))


def make_cutoff(r: float = DEFAULT_R, R: float = DEFAULT_BIG_R, kind: str = "exp") -> CutoffProfile:
    """Build a profile; the defaults put each dyadic 2^j alone in block j."""
    return CutoffProfile(r, R, kind)


@dataclass(frozen=True)
class LPFamily:
    """Dyadic Littlewood-Paley family derived from one cutoff profile.

    phi = psi - psi(2 .), Phi_0 = psi and Phi_j = phi(2^{-j} .) for j >= 1,
    so supp phi(2^{-k} .) lies in the annulus r 2^{k-1} <= |xi| <= R 2^k.
    The gap integer h satisfies R <= r 2^{h-2}.
    """

    profile: CutoffProfile
    h: int = 3

    def __post_init__(self):
        if self.profile.R > self.profile.r * 2 ** (self.h - 2):
            raise BadRadii(
                f"gap h={self.h} too small: R={self.profile.R} > "
                f"r*2^(h-2)={self.profile.r * 2 ** (self.h - 2)}"
            )

    def phi(self, xi: Frequency) -> float:
        rho = freq_abs(xi)
        return self.profile.radial(rho) - self.profile.radial(2.0 * rho)

    def block_multiplier(self, j: int, xi: Frequency) -> float:
        """Phi_j(xi)."""
        rho = freq_abs(xi)
        if j == 0:
            return self.profile.radial(rho)
        return self.profile.radial(rho / 2**j) - self.profile.radial(rho / 2 ** (j - 1))

    def block_bounds(self, j: int) -> tuple[float, float]:
        """Support annulus radii of Phi_j (a ball for j = 0)."""
        if j == 0:
            return (0.0, self.profile.R)
        return (self.profile.r * 2 ** (j - 1), self.profile.R * 2**j)

    def top_block(self, u: SparseField) -> int:
        """Smallest j0 with Phi_j vanishing on spectrum(u) for all j > j0."""
        top = 0
        for xi in u.spectrum():
            rho = freq_abs(xi)
            j = 0
            while self.profile.r * 2 ** (j - 1) <= rho and j < 70:
                j += 1
            top = max(top, j - 1)
        return top


def default_families() -> tuple[LPFamily, LPFamily]:
    """Two distinct profiles used for every psi-independence diagnostic."""
    return (
        LPFamily(make_cutoff(1.1, 2.0, "exp")),
        LPFamily(make_cutoff(1.05, 1.9, "poly7")),
    )


def telescope_check(profile: CutoffProfile, m: int, samples) -> float:
    """Max deviation of the dyadic telescoping identity over sample frequencies.

    Checks | psi(2^{-m} xi) - psi(xi) - sum_{k=1}^{m} phi(2^{-k} xi) |, which
    is algebraically zero; the return value measures floating cancellation.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    worst = 0.0
    for xi in samples:
        rho = freq_abs(xi)
        total = profile.radial(rho)
        for k in range(1, m + 1):
            total += profile.radial(rho / 2**k) - profile.radial(rho / 2 ** (k - 1))
        worst = max(worst, abs(profile.radial(rho / 2**m) - total))
    return worst


def modulate(u: SparseField, m: int, profile: CutoffProfile) -> SparseField:
    """Frequency modulation u^m: scale coefficient at xi by psi(2^{-m} xi).

    Idempotent once the plateau covers the spectrum: the output is then
    bitwise equal to u.
    """
    if m < 0:
        raise ValueError("modulation index must be >= 0")
    return u.multiplier(lambda xi: profile.dilated(m, xi))


def lp_project(u: SparseField, j: int, fam: LPFamily, mode: str = "block") -> SparseField:
    """Dyadic localisation u_j (mode="block") or u^j (mode="ball").

    Block coefficients are formed as psi(2^{-j} xi) c - psi(2^{-j+1} xi) c,
    products first, so that sum_{j=0}^{m} u_j telescopes bitwise to u^m and
    u^j - u^{j-1} = u_j holds exactly.  Negative j gives the empty field.
    """
    if j < 0:
        return SparseField(u.n, {}, u.tau)
    if mode == "ball":
        return modulate(u, j, fam.profile)
    if mode != "block":
        raise ValueError(f"unknown mode {mode!r}")
    if j == 0:
        return modulate(u, 0, fam.profile)
    prof = fam.profile
    out = {}
    for xi, c in u.items():
        rho = freq_abs(xi)
        val = prof.radial(rho / 2**j) * c - prof.radial(rho / 2 ** (j - 1)) * c
        out[xi] = val
    return SparseField(u.n, out, u.tau)
