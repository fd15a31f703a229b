"""Separable symbols a(x, eta) and the constructors used by the experiments.

A symbol is carried as a finite sum of terms, each the product of a sparse
x-part and an eta-multiplier with a declared support region:

    a(x, eta) = sum_t  ( sum_xi  c_t(xi) exp(i<x, xi>) ) * m_t(eta),

so the partial transform is a^(xi, eta) = sum_t c_t(xi) m_t(eta).  Multiplier
evaluation outside the declared support returns exactly zero, which makes
support reasoning (twisted-diagonal and corona checks) decidable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .cutoffs import CutoffProfile, LPFamily, falling_blend
from .errors import (
    BadRange,
    DimensionMismatch,
    FNotVanishingAtZero,
    NonRealInput,
    ZeroDirection,
)
from .fields import (
    DenseField,
    Frequency,
    SparseField,
    dense_to_sparse,
    freq_abs,
    freq_scale,
    grid_frequencies,
)

# 2^(j*d) stays a normal double for |j*d| up to ~1020; keep a wide margin.
DYADIC_EXP_CAP = 900.0


def pow2(e: float) -> float:
    if abs(e) > DYADIC_EXP_CAP:
        raise BadRange(f"dyadic exponent {e} beyond +/-{DYADIC_EXP_CAP}")
    return 2.0**e


@dataclass(frozen=True)
class EtaSupport:
    """Radial support descriptor: 'all', 'ball' (|eta| <= hi) or 'annulus'."""

    kind: str
    lo: float = 0.0
    hi: float = math.inf

    def __post_init__(self):
        if self.kind not in ("all", "ball", "annulus"):
            raise ValueError(f"unknown support kind {self.kind!r}")
        if self.kind == "all":
            object.__setattr__(self, "lo", 0.0)
            object.__setattr__(self, "hi", math.inf)
        if self.kind == "ball":
            object.__setattr__(self, "lo", 0.0)

    def contains_radius(self, rho: float) -> bool:
        return self.lo <= rho <= self.hi

    def contains(self, eta) -> bool:
        return self.contains_radius(math.sqrt(math.fsum(float(c) ** 2 for c in eta)))


ALL_ETA = EtaSupport("all")


@dataclass(frozen=True)
class RadialBump:
    """Radial bump: 0 outside [lo, hi], exactly 1 on the plateau [plo, phi].

    zero_order > 0 multiplies by (|eta| - 1)^zero_order, planting a radial
    zero of that order on the unit sphere (used to probe continuity
    thresholds); the plateau value is then no longer 1.
    """

    lo: float = 0.75
    hi: float = 1.25
    plo: float = 0.9
    phi: float = 1.1
    kind: str = "exp"
    zero_order: int = 0

    def __post_init__(self):
        if not (0.0 < self.lo < self.plo < self.phi < self.hi):
            raise ValueError("need 0 < lo < plo < phi < hi")

    def radial(self, rho: float) -> float:
        if rho <= self.lo or rho >= self.hi:
            return 0.0
        if rho < self.plo:
            base = falling_blend(self.kind, (self.plo - rho) / (self.plo - self.lo))
        elif rho <= self.phi:
            base = 1.0
        else:
            base = falling_blend(self.kind, (rho - self.phi) / (self.hi - self.phi))
        if self.zero_order:
            base *= (rho - 1.0) ** self.zero_order
        return base

    def __call__(self, eta) -> float:
        return self.radial(math.sqrt(math.fsum(float(c) ** 2 for c in eta)))


@dataclass(frozen=True)
class Term:
    """One separable term: sparse x-part times an eta-multiplier."""

    xpart: SparseField
    mult: Callable[[Sequence[float]], complex]
    support: EtaSupport
    meta: dict | None = None

    def mult_at(self, eta) -> complex:
        """Multiplier value, exactly zero outside the declared support."""
        if not self.support.contains(eta):
            return 0.0
        return complex(self.mult(eta))

    def sort_key(self):
        return (self.support.lo, tuple(sorted(self.xpart.coeffs)))


@dataclass(frozen=True)
class SeparableSymbol:
    """Finite-term symbol of declared order d on the n-torus."""

    d: float
    n: int
    terms: tuple[Term, ...]

    def __post_init__(self):
        for t in self.terms:
            if t.xpart.n != self.n:
                raise DimensionMismatch("term x-part dimension mismatch")
        object.__setattr__(
            self, "terms", tuple(sorted(self.terms, key=Term.sort_key))
        )

    def partial_hat(self, xi: Frequency, eta) -> complex:
        """a^(xi, eta) = sum_t c_t(xi) m_t(eta)."""
        total = 0.0 + 0.0j
        for t in self.terms:
            c = t.xpart.coeff(xi)
            if c != 0.0:
                total += c * t.mult_at(eta)
        return total

    def evaluate(self, x, eta) -> complex:
        return complex(
            sum(t.xpart.evaluate(x) * t.mult_at(eta) for t in self.terms)
        )

    def x_frequencies(self) -> set[Frequency]:
        out: set[Frequency] = set()
        for t in self.terms:
            out |= t.xpart.spectrum()
        return out

    def term_count(self) -> int:
        return sum(len(t.xpart) for t in self.terms)


def identity_symbol(n: int) -> SeparableSymbol:
    """The symbol a == 1, whose operator is the identity."""
    one = SparseField(n, {(0,) * n: 1.0 + 0.0j})
    return SeparableSymbol(0.0, n, (Term(one, lambda eta: 1.0, ALL_ETA, {"kind": "one"}),))


def multiplication_symbol(f: SparseField) -> SeparableSymbol:
    """The eta-independent symbol a(x) = f(x); its operator is u -> f u."""
    return SeparableSymbol(0.0, f.n, (Term(f, lambda eta: 1.0, ALL_ETA, {"kind": "one"}),))


# -- lacunary counterexample family -------------------------------------------


@dataclass(frozen=True)
class ChingData:
    """Constructor data for the lacunary symbol sum_j 2^(jd) e^{-i 2^j x.theta} chi(2^-j eta)."""

    d: float
    theta: Frequency
    j_lo: int
    j_hi: int
    chi: RadialBump

    def chi_at_theta(self) -> float:
        return self.chi.radial(freq_abs(self.theta))


def ching_symbol(
    d: float,
    theta: Frequency,
    j_lo: int,
    j_hi: int,
    chi: RadialBump | None = None,
) -> tuple[ChingData, SeparableSymbol]:
    """Build the lacunary counterexample symbol for direction theta.

    Term j has x-part {-2^j theta -> 2^(jd)} and multiplier chi(2^-j eta);
    distinct terms have disjoint eta-supports (dyadic coronas).
    """
    theta = tuple(int(c) for c in theta)
    if all(c == 0 for c in theta):
        raise ZeroDirection("theta must be a nonzero lattice vector")
    if not (1 <= j_lo <= j_hi <= 60):
        raise BadRange(f"need 1 <= j_lo <= j_hi <= 60, got [{j_lo}, {j_hi}]")
    if chi is None:
        chi = RadialBump()
    pow2(abs(d) * j_hi)  # fail early on coefficient under/overflow
    n = len(theta)
    terms = []
    for j in range(j_lo, j_hi + 1):
        coeff = pow2(j * d)
        xpart = SparseField(n, {freq_scale(-(2**j), theta): coeff})
        scale = float(2**j)
        mult = _corona_mult(chi, scale)
        support = EtaSupport("annulus", chi.lo * scale, chi.hi * scale)
        terms.append(Term(xpart, mult, support, {"kind": "corona", "j": j, "chi": chi}))
    data = ChingData(d, theta, j_lo, j_hi, chi)
    return data, SeparableSymbol(d, n, tuple(terms))


def _corona_mult(chi: RadialBump, scale: float):
    def mult(eta):
        return chi.radial(math.sqrt(math.fsum(float(c) ** 2 for c in eta)) / scale)

    return mult


# -- modulation and verification ----------------------------------------------


def symbol_modulate(a: SeparableSymbol, m: int, profile: CutoffProfile) -> SeparableSymbol:
    """Frequency modulation in x: scale each x-coefficient by psi(2^-m xi).

    Terms whose x-part is wiped out entirely are dropped; eta-multipliers are
    untouched.  Once the plateau covers every x-frequency the symbol is
    returned unchanged term by term.
    """
    new_terms = []
    for t in a.terms:
        xp = t.xpart.multiplier(lambda xi: profile.dilated(m, xi))
        if len(xp):
            new_terms.append(replace(t, xpart=xp))
    return SeparableSymbol(a.d, a.n, tuple(new_terms))


def symbol_full_modulate(a: SeparableSymbol, m: int, profile: CutoffProfile) -> SeparableSymbol:
    """Full modulation a^m (1 x psi_m): modulate x-parts and eta-multipliers."""
    base = symbol_modulate(a, m, profile)
    new_terms = []
    for t in base.terms:
        new_terms.append(
            replace(
                t,
                mult=_modulated_mult(t.mult, m, profile),
                support=_clip_support(t.support, profile.R * 2**m),
            )
        )
    return SeparableSymbol(a.d, a.n, tuple(new_terms))


def _modulated_mult(mult, m: int, profile: CutoffProfile):
    def wrapped(eta):
        rho = math.sqrt(math.fsum(float(c) ** 2 for c in eta))
        return mult(eta) * profile.radial(rho / 2**m)

    return wrapped


def _clip_support(sup: EtaSupport, radius: float) -> EtaSupport:
    if sup.hi <= radius:
        return sup
    if sup.kind == "annulus":
        return EtaSupport("annulus", sup.lo, radius)
    return EtaSupport("ball", 0.0, radius)


def symbol_block(a: SeparableSymbol, j: int, fam: LPFamily) -> SeparableSymbol:
    """Dyadic x-localisation a_j; coefficients formed products-first."""
    if j < 0:
        return SeparableSymbol(a.d, a.n, ())
    if j == 0:
        return symbol_modulate(a, 0, fam.profile)
    prof = fam.profile
    new_terms = []
    for t in a.terms:
        out = {}
        for xi, c in t.xpart.items():
            rho = freq_abs(xi)
            out[xi] = prof.radial(rho / 2**j) * c - prof.radial(rho / 2 ** (j - 1)) * c
        xp = SparseField(a.n, out, t.xpart.tau)
        if len(xp):
            new_terms.append(replace(t, xpart=xp))
    return SeparableSymbol(a.d, a.n, tuple(new_terms))


def symbol_ball(a: SeparableSymbol, j: int, fam: LPFamily) -> SeparableSymbol:
    """Ball x-localisation a^j (empty symbol for j < 0)."""
    if j < 0:
        return SeparableSymbol(a.d, a.n, ())
    return symbol_modulate(a, j, fam.profile)


def symbol_ball_diff(a: SeparableSymbol, j: int, k: int, fam: LPFamily) -> SeparableSymbol:
    """The difference a^j - a^k (j >= k), coefficients formed products-first."""
    if j < 0:
        return SeparableSymbol(a.d, a.n, ())
    if k < 0:
        return symbol_ball(a, j, fam)
    prof = fam.profile
    new_terms = []
    for t in a.terms:
        out = {}
        for xi, c in t.xpart.items():
            rho = freq_abs(xi)
            out[xi] = prof.radial(rho / 2**j) * c - prof.radial(rho / 2**k) * c
        xp = SparseField(a.n, out, t.xpart.tau)
        if len(xp):
            new_terms.append(replace(t, xpart=xp))
    return SeparableSymbol(a.d, a.n, tuple(new_terms))


def twisted_diagonal_check(
    a: SeparableSymbol, C: float = 2.0, budget: int = 2000, rng: np.random.Generator | None = None
) -> tuple[bool, tuple[Frequency, Frequency] | None]:
    """Decide whether the symbol support avoids a conical neighbourhood of
    the twisted diagonal xi + eta = 0 at aperture C.

    True means no support pair (xi, eta) satisfies C(|xi+eta| + 1) < |eta|.
    Radial support descriptors allow an analytic certificate; otherwise
    lattice candidates near the worst radius are enumerated (plus budgeted
    random samples), and the first violating pair is returned as a witness.
    """
    if C < 1.0:
        raise ValueError("aperture constant C must be >= 1")
    rng = rng or np.random.default_rng(0)
    for t in a.terms:
        lo, hi = t.support.lo, t.support.hi
        for xi in sorted(t.xpart.spectrum()):
            axi = freq_abs(xi)
            worst = min(max(axi, lo), hi) if math.isfinite(hi) else max(axi, lo)
            # Along any radius rho, |xi+eta| >= |rho - |xi||, so this is an
            # upper bound for rho - C(|xi+eta|+1) over the whole support.
            if worst - C * (abs(axi - worst) + 1.0) <= 0.0:
                continue
            witness = _find_lattice_witness(t, xi, C, budget, rng)
            if witness is not None:
                return False, (xi, witness)
    return True, None


def _find_lattice_witness(t: Term, xi: Frequency, C: float, budget: int, rng):
    n = len(xi)
    axi = freq_abs(xi)
    lo, hi = t.support.lo, t.support.hi
    hi_eff = hi if math.isfinite(hi) else max(axi * 2.0, lo + 1.0)
    candidates: list[Frequency] = []
    neg = tuple(-c for c in xi)
    candidates.append(neg)
    if axi > 0:
        unit = tuple(-float(c) / axi for c in xi)
        for rho in (lo, (lo + hi_eff) / 2.0, hi_eff, min(max(axi, lo), hi_eff)):
            base = tuple(int(round(rho * u)) for u in unit)
            for delta in _neighbourhood(n):
                candidates.append(tuple(b + d for b, d in zip(base, delta)))
    for _ in range(budget):
        rho = rng.uniform(lo, hi_eff)
        vec = rng.normal(size=n)
        nrm = float(np.linalg.norm(vec)) or 1.0
        candidates.append(tuple(int(round(rho * v / nrm)) for v in vec))
    seen = set()
    for eta in candidates:
        if eta in seen:
            continue
        seen.add(eta)
        aeta = freq_abs(eta)
        if aeta == 0.0 or t.mult_at(eta) == 0.0:
            continue
        if C * (freq_abs(tuple(x + e for x, e in zip(xi, eta))) + 1.0) < aeta:
            return eta
    return None


def _neighbourhood(n: int):
    if n == 1:
        return [(0,), (1,), (-1,)]
    out = []
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            out.append((dx, dy))
    return out


# -- symbol class verification -------------------------------------------------


@dataclass(frozen=True)
class SeminormReport:
    """Estimated class seminorms sup |D_eta^alpha D_x^beta a| <eta>^{-(d-|a|+|b|)}."""

    order: float
    entries: dict[tuple[tuple[int, ...], tuple[int, ...]], float]
    violations: list[tuple[tuple[int, ...], tuple[int, ...], float]]
    cap: float


def _multi_indices(n: int, total: int):
    if n == 1:
        return [(k,) for k in range(total + 1)]
    out = []
    for k in range(total + 1):
        for i in range(k + 1):
            out.append((i, k - i))
    return out


def _dx_factor(xi: Frequency, beta: tuple[int, ...]) -> complex:
    fac = 1.0 + 0.0j
    for c, b in zip(xi, beta):
        fac *= (1j * float(c)) ** b
    return fac


def _eta_derivative(t: Term, eta: tuple[float, ...], alpha: tuple[int, ...]) -> complex:
    if all(k == 0 for k in alpha):
        return t.mult_at(eta)
    axis = next(i for i, k in enumerate(alpha) if k > 0)
    lower = tuple(k - (1 if i == axis else 0) for i, k in enumerate(alpha))
    h = 1e-3 * max(1.0, math.sqrt(math.fsum(c * c for c in eta)))
    up = tuple(c + (h if i == axis else 0.0) for i, c in enumerate(eta))
    dn = tuple(c - (h if i == axis else 0.0) for i, c in enumerate(eta))
    return (_eta_derivative(t, up, lower) - _eta_derivative(t, dn, lower)) / (2.0 * h)


def class_verify(
    a: SeparableSymbol,
    alpha_max: int = 2,
    beta_max: int = 2,
    budget: int = 4000,
    cap: float = 1e6,
) -> SeminormReport:
    """Numerically estimate the symbol-class seminorms C_{alpha,beta}.

    x-derivatives are exact ((i xi)^beta factors on term coefficients);
    eta-derivatives use iterated central differences with step
    1e-3 * max(1, |eta|).  Report-only: entries beyond `cap` are flagged,
    never raised.
    """
    n = a.n
    xs = [tuple(2.0 * math.pi * k / 8.0 for _ in range(n)) for k in range(8)]
    etas: list[tuple[float, ...]] = []
    for t in a.terms:
        lo, hi = t.support.lo, t.support.hi
        hi_eff = hi if math.isfinite(hi) else max(4.0 * max(lo, 1.0), 64.0)
        lo_eff = max(lo, 0.5)
        for frac in (0.05, 0.25, 0.5, 0.75, 0.95):
            rho = lo_eff + frac * (hi_eff - lo_eff)
            etas.append((rho,) + (0.0,) * (n - 1))
            if n == 2:
                etas.append((rho / math.sqrt(2.0),) * 2)
    if not etas:
        etas = [(1.0,) + (0.0,) * (n - 1)]
    # trim to budget
    max_eta = max(1, budget // max(1, len(xs)))
    etas = etas[:max_eta]

    entries: dict[tuple[tuple[int, ...], tuple[int, ...]], float] = {}
    violations = []
    for alpha in _multi_indices(n, alpha_max):
        for beta in _multi_indices(n, beta_max):
            worst = 0.0
            for eta in etas:
                ang = math.sqrt(1.0 + math.fsum(c * c for c in eta))
                weight = ang ** -(a.d - sum(alpha) + sum(beta))
                deta = {id(t): _eta_derivative(t, eta, alpha) for t in a.terms}
                for x in xs:
                    val = 0.0 + 0.0j
                    for t in a.terms:
                        dm = deta[id(t)]
                        if dm == 0.0:
                            continue
                        xval = sum(
                            c * _dx_factor(xi, beta) * _cis(x, xi)
                            for xi, c in t.xpart.items()
                        )
                        val += xval * dm
                    worst = max(worst, abs(val) * weight)
            entries[(alpha, beta)] = worst
            if worst > cap:
                violations.append((alpha, beta, worst))
    return SeminormReport(a.d, entries, violations, cap)


def _cis(x, xi: Frequency) -> complex:
    phase = math.fsum(p * float(q) for p, q in zip(x, xi))
    return complex(math.cos(phase), math.sin(phase))


# -- composite-function (paraproduct) symbols ----------------------------------


def meyer_symbol(
    u: DenseField,
    Fprime: Callable[[np.ndarray], np.ndarray],
    fam: LPFamily,
    K: int,
    Q: int = 32,
) -> list[tuple[DenseField, int]]:
    """Multiplier coefficients m_k of the composite-function symbol.

    m_k(x) = integral_0^1 F'(u^{k-1}(x) + t u_k(x)) dt, evaluated per grid
    point with Q-node Gauss-Legendre quadrature; u_k and u^{k-1} are the
    dyadic block and ball pieces of u.  The symbol they carry is
    sum_{k=0..K} m_k(x) Phi_k(eta).
    """
    real = _require_real(u)
    if Q < 2:
        raise ValueError("need at least two quadrature nodes")
    nodes, weights = np.polynomial.legendre.leggauss(Q)
    tnodes = 0.5 * (nodes + 1.0)
    tweights = 0.5 * weights
    out = []
    ball = np.zeros_like(real)
    for k in range(K + 1):
        uk = np.real(lp_project_dense(u, k, fam, "block").samples)
        mk = np.zeros_like(real)
        for t, w in zip(tnodes, tweights):
            mk = mk + w * np.asarray(Fprime(ball + t * uk), dtype=float)
        out.append((DenseField(u.n, u.M, mk.astype(np.complex128)), k))
        ball = ball + uk
    return out


def meyer_apply(
    mks: list[tuple[DenseField, int]], fam: LPFamily, u: DenseField
) -> DenseField:
    """Apply the dense multiplier-sum symbol: sum_k m_k(x) (Phi_k(D)u)(x)."""
    acc = np.zeros((u.M,) * u.n, dtype=np.complex128)
    for mk, k in mks:
        uk = lp_project_dense(u, k, fam, "block").samples
        acc = acc + mk.samples * uk
    return DenseField(u.n, u.M, acc)


def meyer_to_terms(
    mks: list[tuple[DenseField, int]], fam: LPFamily, tau: float = 1e-12
) -> SeparableSymbol:
    """Convert dense multiplier coefficients to an exact term-form symbol."""
    if not mks:
        raise ValueError("empty multiplier list")
    n = mks[0][0].n
    terms = []
    for mk, k in mks:
        xp = dense_to_sparse(mk, tau)
        if not len(xp):
            continue
        lo, hi = fam.block_bounds(k)
        support = EtaSupport("ball", 0.0, hi) if k == 0 else EtaSupport("annulus", lo, hi)
        mult = _block_mult(fam, k)
        terms.append(
            Term(xp, mult, support, {"kind": "block", "j": k, "profile": fam.profile})
        )
    return SeparableSymbol(0.0, n, tuple(terms))


def _block_mult(fam: LPFamily, k: int):
    def mult(eta):
        rho = math.sqrt(math.fsum(float(c) ** 2 for c in eta))
        if k == 0:
            return fam.profile.radial(rho)
        return fam.profile.radial(rho / 2**k) - fam.profile.radial(rho / 2 ** (k - 1))

    return mult


def _require_real(u: DenseField) -> np.ndarray:
    tol = 1e-12 * max(1.0, float(np.max(np.abs(u.samples))))
    if float(np.max(np.abs(u.samples.imag))) > tol:
        raise NonRealInput("field has a non-negligible imaginary part")
    return np.real(u.samples).copy()


def check_vanishes_at_zero(F: Callable[[float], float]) -> None:
    if abs(float(F(0.0))) > 1e-15:
        raise FNotVanishingAtZero("need F(0) = 0")


# -- grid-side dyadic projections (used by the composite machinery) -------------


def _radial_on_grid(fn, M: int, n: int) -> np.ndarray:
    rho = grid_frequencies(M, n)
    flat = rho.ravel()
    uniq, inverse = np.unique(flat, return_inverse=True)
    vals = np.array([fn(float(r)) for r in uniq])
    return vals[inverse].reshape(rho.shape)


def lp_project_dense(g: DenseField, j: int, fam: LPFamily, mode: str = "block") -> DenseField:
    """Grid counterpart of lp_project (block Phi_j or ball psi(2^-j .))."""
    if j < 0:
        return DenseField(g.n, g.M, np.zeros((g.M,) * g.n, dtype=np.complex128))
    prof = fam.profile
    spec = np.fft.fftn(g.samples)
    if mode == "ball":
        w = _radial_on_grid(lambda r: prof.radial(r / 2**j), g.M, g.n)
        return DenseField(g.n, g.M, np.fft.ifftn(w * spec))
    if mode != "block":
        raise ValueError(f"unknown mode {mode!r}")
    if j == 0:
        w = _radial_on_grid(prof.radial, g.M, g.n)
        return DenseField(g.n, g.M, np.fft.ifftn(w * spec))
    w = _radial_on_grid(
        lambda r: prof.radial(r / 2**j) - prof.radial(r / 2 ** (j - 1)), g.M, g.n
    )
    return DenseField(g.n, g.M, np.fft.ifftn(w * spec))
