"""Symbol carriers: the lacunary family, paraproduct symbols, verification."""

import math

import numpy as np
import pytest

from torspec.errors import (
    BadRange,
    FNotVanishingAtZero,
    NonRealInput,
    ZeroDirection,
)
from torspec.fields import (
    DenseField,
    SparseField,
    delta_field,
    freq_abs,
    sparse_to_dense,
)
from torspec.norms import lp_norm
from torspec.constructions import random_band_limited
from torspec.symbols import (
    RadialBump,
    check_vanishes_at_zero,
    ching_symbol,
    class_verify,
    identity_symbol,
    lp_project_dense,
    meyer_apply,
    meyer_symbol,
    meyer_to_terms,
    multiplication_symbol,
    symbol_modulate,
    twisted_diagonal_check,
)


# -- the corona bump -------------------------------------------------------------


def test_bump_plateau_and_support():
    chi = RadialBump()
    assert chi.radial(1.0) == 1.0
    assert chi.radial(0.9) == 1.0
    assert chi.radial(1.1) == 1.0
    assert chi.radial(0.75) == 0.0
    assert chi.radial(1.25) == 0.0
    assert 0.0 < chi.radial(0.8) < 1.0


def test_bump_zero_order_plants_zero_at_unit_sphere():
    chi = RadialBump(zero_order=1)
    assert chi.radial(1.0) == 0.0
    assert chi.radial(1.05) > 0.0
    assert chi.radial(0.95) < 0.0  # odd-order zero changes sign


# -- the lacunary symbol ----------------------------------------------------------


def test_ching_partial_transform_matches_formula():
    d, j_lo, j_hi = 0.0, 5, 9
    data, a = ching_symbol(d, (1,), j_lo, j_hi)
    for j in range(j_lo, j_hi + 1):
        for eta_val in (0.8 * 2**j, 2**j, 1.2 * 2**j):
            got = a.partial_hat((-(2**j),), (eta_val,))
            assert got == data.chi.radial(eta_val / 2**j)
    # off the lattice of x-frequencies the transform vanishes
    assert a.partial_hat((-100,), (2**6,)) == 0.0


def test_ching_outside_corona_is_exact_zero():
    _, a = ching_symbol(0.0, (1,), 5, 9)
    assert a.partial_hat((-(2**7),), (2**7 * 1.3,)) == 0.0
    assert a.partial_hat((-(2**7),), (2**7 * 0.7,)) == 0.0


def test_ching_terms_have_disjoint_eta_supports():
    _, a = ching_symbol(0.5, (1,), 3, 12)
    bounds = sorted((t.support.lo, t.support.hi) for t in a.terms)
    for (lo1, hi1), (lo2, hi2) in zip(bounds, bounds[1:]):
        assert hi1 <= lo2


def test_ching_coefficients():
    d = 0.5
    _, a = ching_symbol(d, (1,), 4, 8)
    for t in a.terms:
        ((xi, c),) = t.xpart.items()
        j = int(math.log2(-xi[0]))
        assert c == 2.0 ** (j * d)


def test_ching_validation():
    with pytest.raises(ZeroDirection):
        ching_symbol(0.0, (0,), 1, 5)
    with pytest.raises(BadRange):
        ching_symbol(0.0, (1,), 0, 5)
    with pytest.raises(BadRange):
        ching_symbol(0.0, (1,), 5, 61)
    with pytest.raises(BadRange):
        ching_symbol(40.0, (1,), 1, 60)  # dyadic coefficient overflow guard


def test_double_direction_lies_in_outgoing_cone():
    # Every support pair of the doubled-direction symbol has |eta| <= 2|xi+eta|;
    # checked over the term x-frequencies and corona extremes.
    _, a = ching_symbol(0.0, (2,), 1, 20)
    for t in a.terms:
        ((xi, _),) = t.xpart.items()
        for rho in (t.support.lo, t.support.hi):
            for sign in (1.0, -1.0):
                eta = sign * rho
                dist = abs(xi[0] + eta)
                assert rho <= 2.0 * dist or t.mult_at((eta,)) == 0.0


# -- modulation of symbols ---------------------------------------------------------


def test_symbol_modulate_fixed_once_plateau_covers(fam):
    _, a = ching_symbol(0.0, (1,), 2, 5)
    am = symbol_modulate(a, 7, fam.profile)
    assert len(am.terms) == len(a.terms)
    for t, tm in zip(a.terms, am.terms):
        assert t.xpart.coeffs == tm.xpart.coeffs


def test_symbol_modulate_deletes_far_terms(fam):
    _, a = ching_symbol(0.0, (1,), 2, 10)
    am = symbol_modulate(a, 3, fam.profile)
    # terms with 2^j >= R 2^m = 16 disappear
    assert len(am.terms) == sum(
        1 for j in range(2, 11) if 2**j < fam.profile.R * 2**3
    )


def test_symbol_modulate_intermediate_scaling(fam):
    # Dyadic x-frequencies always sit on the plateau or outside the support
    # (2^(j-m) is never strictly between r and R), so probe the transition
    # zone with a non-dyadic frequency: 12 / 2^3 = 1.5.
    a = multiplication_symbol(SparseField(1, {(12,): 2.0}))
    m = 3
    factor = fam.profile.radial(12.0 / 2**m)
    assert 0.0 < factor < 1.0
    (term,) = symbol_modulate(a, m, fam.profile).terms
    assert term.xpart.coeff((12,)) == factor * 2.0


def test_symbol_modulate_stabilises_termwise(fam):
    _, a = ching_symbol(0.25, (1,), 1, 8)
    m_star = math.ceil(math.log2(2**8 / fam.profile.r)) + 1
    ref = symbol_modulate(a, m_star, fam.profile)
    for m in range(m_star, m_star + 4):
        am = symbol_modulate(a, m, fam.profile)
        assert [t.xpart.coeffs for t in am.terms] == [
            t.xpart.coeffs for t in ref.terms
        ]


# -- class verification -------------------------------------------------------------


def test_class_verify_unit_top_seminorm():
    _, a = ching_symbol(0.0, (1,), 3, 8)
    report = class_verify(a, alpha_max=0, beta_max=0)
    c00 = report.entries[((0,), (0,))]
    assert abs(c00 - 1.0) <= 1e-9


def test_class_verify_x_derivatives_stay_bounded_in_j():
    _, a = ching_symbol(0.0, (1,), 3, 10)
    report = class_verify(a, alpha_max=0, beta_max=2)
    # |D_x a| ~ 2^j on the corona |eta| ~ 2^j, weighted by <eta>^-1: O(1).
    assert report.entries[((0,), (1,))] <= 2.0
    assert report.entries[((0,), (2,))] <= 4.0


def test_class_verify_zero_symbol():
    a = multiplication_symbol(SparseField(1, {}))
    report = class_verify(a, alpha_max=1, beta_max=1)
    assert all(v == 0.0 for v in report.entries.values())


def test_order_slope_detects_rescaling():
    # The per-corona peak of |a| grows like 2^(jd); a log-log fit across the
    # dyadic terms recovers the declared order within 0.1.
    def fitted_order(symbol):
        js, peaks = [], []
        for t in symbol.terms:
            ((xi, c),) = t.xpart.items()
            j = round(math.log2(-xi[0]))
            peak = abs(c) * 1.0  # multiplier plateau value
            js.append(j)
            peaks.append(math.log2(peak))
        return np.polyfit(js, peaks, 1)[0]

    for d in (0.0, 0.5):
        for dprime in (0.0, 0.5, 1.0):
            _, a = ching_symbol(d + dprime, (1,), 3, 12)
            assert abs(fitted_order(a) - (d + dprime)) <= 0.1


# -- twisted diagonal ------------------------------------------------------------------


def test_twisted_diagonal_doubled_direction_passes():
    _, a2 = ching_symbol(0.0, (2,), 1, 20)
    ok, witness = twisted_diagonal_check(a2, 2.0)
    assert ok and witness is None


def test_twisted_diagonal_unit_direction_fails_with_witness():
    _, a1 = ching_symbol(0.0, (1,), 5, 12)
    ok, witness = twisted_diagonal_check(a1, 2.0)
    assert not ok
    xi, eta = witness
    # witness violates the implication: C(|xi+eta|+1) < |eta|
    assert 2.0 * (freq_abs(tuple(x + e for x, e in zip(xi, eta))) + 1.0) < freq_abs(eta)


def test_twisted_diagonal_vacuous_for_zero_symbol():
    a = multiplication_symbol(SparseField(1, {}))
    ok, witness = twisted_diagonal_check(a, 1.0)
    assert ok and witness is None


def test_twisted_diagonal_2d():
    _, a2 = ching_symbol(0.0, (0, 2), 1, 15)
    ok, _ = twisted_diagonal_check(a2, 2.0)
    assert ok
    _, a1 = ching_symbol(0.0, (0, 1), 5, 10)
    ok, witness = twisted_diagonal_check(a1, 2.0)
    assert not ok and witness is not None


# -- paraproduct (composite) symbols ---------------------------------------------------


def _real_dense(rng, M=512, window=16, sup=1.5):
    u = random_band_limited(1, 12, window, rng, hermitian=True)
    g = sparse_to_dense(u, M)
    scale = sup / float(np.max(np.abs(g.samples.real)))
    return DenseField(1, M, (scale * g.samples.real).astype(np.complex128))


def test_meyer_identity_function_reproduces_field(fam, rng):
    u = _real_dense(rng)
    mks = meyer_symbol(u, lambda t: np.ones_like(t), fam, K=6, Q=8)
    for mk, _ in mks:
        assert float(np.max(np.abs(mk.samples - 1.0))) <= 1e-12
    out = meyer_apply(mks, fam, u)
    assert float(np.max(np.abs(out.samples - u.samples))) <= 1e-10


def test_meyer_zero_function_gives_zero(fam, rng):
    u = _real_dense(rng)
    mks = meyer_symbol(u, lambda t: np.zeros_like(t), fam, K=6, Q=4)
    for mk, _ in mks:
        assert float(np.max(np.abs(mk.samples))) == 0.0


def test_meyer_square_matches_pointwise_square(fam, rng):
    u = _real_dense(rng)
    mks = meyer_symbol(u, lambda t: 2.0 * t, fam, K=6, Q=4)
    out = meyer_apply(mks, fam, u)
    assert float(np.max(np.abs(out.samples - u.samples.real**2))) <= 1e-10


def test_meyer_multiplier_sup_bound(fam, rng):
    # sup |m_k| <= sup_{|t| <= ||u||_inf (1 + c_psi)} |F'(t)| with the
    # synthesis constant c_psi estimated from the grid kernel.
    u = _real_dense(rng)
    M = u.M
    m_big = 5
    kernel = np.zeros(M, dtype=complex)
    for xi in range(-M // 2, M // 2):
        w = fam.profile.radial(abs(xi) / 2**m_big)
        if w:
            kernel[xi % M] = M * w
    c_psi = lp_norm(DenseField(1, M, np.fft.ifft(kernel)), 1.0)
    sup_u = float(np.max(np.abs(u.samples.real)))
    fprime = lambda t: t  # F = t^2/2, unbounded slope
    mks = meyer_symbol(u, fprime, fam, K=6, Q=8)
    bound = sup_u * (1.0 + c_psi)
    for mk, _ in mks:
        assert float(np.max(np.abs(mk.samples))) <= bound + 1e-12


def test_meyer_rejects_complex_input(fam):
    g = DenseField(1, 64, 1j * np.ones(64, dtype=complex))
    with pytest.raises(NonRealInput):
        meyer_symbol(g, np.cos, fam, K=3)


def test_vanishing_at_zero_guard():
    check_vanishes_at_zero(np.sin)
    with pytest.raises(FNotVanishingAtZero):
        check_vanishes_at_zero(np.cos)


def test_meyer_term_conversion_applies_like_dense(fam, rng):
    from torspec.operator import apply
    from torspec.fields import dense_to_sparse

    # Small carrier and a pruned conversion keep the exact sparse product
    # inside the grid band; the two routes then agree to pruning accuracy.
    u = _real_dense(rng, M=256, window=8, sup=1.0)
    mks = meyer_symbol(u, np.cos, fam, K=5, Q=16)
    dense_out = meyer_apply(mks, fam, u)
    terms = meyer_to_terms(mks, fam, tau=1e-10)
    u_sparse = dense_to_sparse(u, tau=1e-13)
    sparse_out = apply(terms, u_sparse, budget=20_000_000)
    grid_out = sparse_to_dense(sparse_out, 256)
    assert float(np.max(np.abs(grid_out.samples - dense_out.samples))) <= 1e-6


def test_dense_block_prunes_match_sparse(fam, rng):
    u = random_band_limited(1, 10, 30, rng)
    g = sparse_to_dense(u, 256)
    from torspec.cutoffs import lp_project
    from torspec.fields import dense_to_sparse

    for j in (0, 2, 5):
        dense_block = dense_to_sparse(lp_project_dense(g, j, fam, "block"), 1e-12)
        sparse_block = lp_project(u, j, fam, "block")
        for xi in dense_block.spectrum() | sparse_block.spectrum():
            assert abs(dense_block.coeff(xi) - sparse_block.coeff(xi)) <= 1e-10


def test_identity_symbol_structure():
    a = identity_symbol(1)
    assert a.partial_hat((0,), (17.0,)) == 1.0
    assert a.partial_hat((1,), (17.0,)) == 0.0


def test_class_verify_2d_symbol():
    _, a = ching_symbol(0.0, (0, 1), 3, 6)
    report = class_verify(a, alpha_max=1, beta_max=1, budget=800)
    assert abs(report.entries[((0, 0), (0, 0))] - 1.0) <= 1e-9
    assert report.entries[((0, 0), (0, 1))] <= 2.0
    assert not report.violations
