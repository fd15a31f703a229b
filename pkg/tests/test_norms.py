"""Sobolev, L_p, block norms and the directional decay report."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torspec.constructions import lacunary_field, vanishing_family, weierstrass_field
from torspec.errors import EmptySpectrum
from torspec.fields import DenseField, SparseField, delta_field, sparse_to_dense
from torspec.norms import (
    besov_norm,
    cone_report,
    hsp_norm,
    hsp_norm_dense,
    lp_norm,
    sobolev_norm,
)


# -- Sobolev ---------------------------------------------------------------------


def test_constant_has_unit_norm_for_every_s():
    one = delta_field((0,))
    for s in (-3.0, 0.0, 0.5, 4.0):
        assert sobolev_norm(one, s) == 1.0


@pytest.mark.parametrize("j", [0, 3, 7, 15])
@pytest.mark.parametrize("s", [-1.0, 0.5, 2.0])
def test_single_dyadic_mode_closed_form(j, s):
    u = delta_field((2**j,))
    expected = (1.0 + 4.0**j) ** (s / 2.0)
    assert abs(sobolev_norm(u, s) - expected) <= 1e-14 * expected


def test_per_mode_weight_is_exact():
    c = 3.0 - 4.0j
    u = delta_field((7,), c)
    assert sobolev_norm(u, 1.0) == abs(c) * math.sqrt(1.0 + 49.0)


def test_squares_add_across_disjoint_spectra():
    u = SparseField(1, {(1,): 2.0})
    v = SparseField(1, {(5,): 1.0j})
    s = 0.75
    total = sobolev_norm(u.add(v), s) ** 2
    assert abs(total - sobolev_norm(u, s) ** 2 - sobolev_norm(v, s) ** 2) <= 1e-15 * total


@settings(max_examples=60, deadline=None)
@given(
    st.dictionaries(
        st.integers(-50, 50).filter(lambda k: k != 0).map(lambda k: (k,)),
        st.complex_numbers(
            min_magnitude=1e-3, max_magnitude=10, allow_nan=False, allow_infinity=False
        ),
        min_size=1,
        max_size=6,
    ),
    st.floats(-2, 2),
    st.floats(0, 1.5),
)
def test_monotone_in_s_off_the_origin(coeffs, s, ds):
    u = SparseField(1, coeffs)
    assert sobolev_norm(u, s + ds) >= sobolev_norm(u, s) * (1 - 1e-12)


def test_vanishing_family_norm_closed_form():
    # Oracle: with the one-mode carrier, ||v_N||_{H^0} = (sum j^-2)^(1/2)/log N.
    for N in (5, 6, 7):
        vN, _, _ = vanishing_family(N, 0.0, (1,), v=delta_field((0,)))
        oracle = (
            math.sqrt(math.fsum(1.0 / (j * j) for j in range(N, N * N + 1)))
            / math.log(N)
        )
        assert abs(sobolev_norm(vN, 0.0) - oracle) <= 1e-14 * oracle


def test_vanishing_family_norm_bound_with_fitted_constant():
    # Fit the constant once at N = 5, then the bound holds along the family.
    def tail(N):
        return math.sqrt(math.fsum(1.0 / (j * j) for j in range(N, N * N + 1)))

    norms = {}
    for N in (5, 6, 7):
        vN, _, _ = vanishing_family(N, 0.0, (1,))
        norms[N] = sobolev_norm(vN, 0.0)
    c = norms[5] / tail(5)
    for N in (6, 7):
        assert norms[N] <= c * tail(N) * (1 + 1e-12)


# -- L_p on the grid ----------------------------------------------------------------


def test_constant_has_unit_lp_norm():
    g = DenseField(1, 16, np.ones(16, dtype=complex))
    for p in (1.0, 2.0, 4.0, math.inf):
        assert abs(lp_norm(g, p) - 1.0) <= 1e-15


def test_cosine_l2_closed_form():
    # Oracle: (2pi)^-1 integral cos^2 = 1/2, so the L_2 norm is 2^(-1/2).
    g = sparse_to_dense(SparseField(1, {(1,): 0.5, (-1,): 0.5}), 4096)
    assert abs(lp_norm(g, 2.0) - 2.0**-0.5) <= 1e-12


def test_cosine_sup_norm_hits_grid_point():
    g = sparse_to_dense(SparseField(1, {(1,): 0.5, (-1,): 0.5}), 64)
    assert abs(lp_norm(g, math.inf) - 1.0) <= 1e-14


def test_lp_rejects_p_below_one():
    g = DenseField(1, 8, np.ones(8, dtype=complex))
    with pytest.raises(ValueError):
        lp_norm(g, 0.5)


def test_hsp_agrees_with_sobolev_at_p_two():
    u = SparseField(1, {(0,): 1.0, (3,): -2j, (-5,): 0.5})
    for s in (-1.0, 0.0, 1.5):
        assert abs(hsp_norm(u, s, 2.0, 64) - sobolev_norm(u, s)) <= 1e-10


def test_hsp_dense_matches_sparse_route():
    u = SparseField(1, {(1,): 1.0, (-1,): 1.0, (4,): 0.25j})
    g = sparse_to_dense(u, 128)
    for s, p in ((0.5, 2.0), (1.0, 4.0)):
        assert abs(hsp_norm_dense(g, s, p) - hsp_norm(u, s, p, 128)) <= 1e-12


# -- block norms -------------------------------------------------------------------------


def test_single_mode_besov_norm(fam):
    j, d = 6, 0.75
    u = delta_field((2**j,))
    out = besov_norm(u, d, math.inf, math.inf, fam, 1024)
    assert abs(out - 2.0 ** (j * d)) <= 1e-12 * 2.0 ** (j * d)


def test_empty_field_norm_is_zero(fam):
    assert besov_norm(SparseField(1, {}), 0.5, 2.0, 2.0, fam, 64) == 0.0


def test_weierstrass_unit_norms_small_grid(fam):
    f = weierstrass_field(0.5, 6)
    assert abs(besov_norm(f, 0.5, math.inf, math.inf, fam, 1024) - 1.0) <= 1e-10
    for p in (1.0, 2.0, 4.0):
        fn = besov_norm(f, 0.5, p, math.inf, fam, 1024, aggregation="triebel")
        assert abs(fn - 1.0) <= 1e-10


def test_finite_q_aggregation(fam):
    u = SparseField(1, {(2,): 1.0, (16,): 1.0})
    # Two isolated blocks of unit sup norm: B^0_{inf,q} = 2^(1/q).
    out = besov_norm(u, 0.0, math.inf, 2.0, fam, 256)
    assert abs(out - math.sqrt(2.0)) <= 1e-10


def test_triebel_needs_q_infinity(fam):
    with pytest.raises(ValueError):
        besov_norm(delta_field((2,)), 0.0, 2.0, 2.0, fam, 64, aggregation="triebel")


# -- directional decay ----------------------------------------------------------------------


def test_cone_report_slope_matches_order():
    w = lacunary_field((1,), 0.5, 5, 20, delta_field((0,)))
    report = cone_report(w)
    assert len(report) == 1
    direction, slope = report[0]
    assert direction == (1.0,)
    assert abs(slope + 0.5) <= 0.05


def test_cone_report_flat_after_flip():
    w = lacunary_field((-1,), 0.0, 5, 20, delta_field((0,)))
    ((direction, slope),) = cone_report(w)
    assert direction == (-1.0,)
    assert abs(slope) <= 0.05


def test_cone_report_two_directions():
    w = lacunary_field((1, 0), 1.0, 5, 14, delta_field((0, 0))).add(
        lacunary_field((0, 1), 0.25, 5, 14, delta_field((0, 0)))
    )
    report = dict(cone_report(w))
    assert abs(report[(0.0, 1.0)] + 0.25) <= 0.05
    assert abs(report[(1.0, 0.0)] + 1.0) <= 0.05


def test_cone_report_rejects_origin_only():
    with pytest.raises(EmptySpectrum):
        cone_report(delta_field((0,)))


def test_cone_report_groups_nearby_directions():
    v = SparseField(1, {(0,): 1.0, (1,): 0.5, (-1,): 0.5})
    w = lacunary_field((1,), 0.5, 6, 16, v)
    report = cone_report(w)
    assert len(report) == 1
    assert abs(report[0][1] + 0.5) <= 0.05


def test_vanishing_family_norm_bound_at_half_order():
    # Same fitted-constant bound at a nonzero order index.
    def tail(N):
        return math.sqrt(math.fsum(1.0 / (j * j) for j in range(N, N * N + 1)))

    d = 0.5
    norms = {}
    for N in (5, 6, 7):
        vN, _, _ = vn_fam(N, d)
        norms[N] = sobolev_norm(vN, d)
    c = norms[5] / tail(5)
    for N in (6, 7):
        assert norms[N] <= c * tail(N) * (1 + 1e-9)


def vn_fam(N, d):
    from torspec.constructions import vanishing_family

    return vanishing_family(N, d, (1,))


def test_sobolev_norm_2d_single_mode():
    from torspec.fields import delta_field as df

    u = df((3, 4), 2.0)
    assert abs(sobolev_norm(u, 1.0) - 2.0 * math.sqrt(26.0)) <= 1e-14 * 2.0 * math.sqrt(26.0)
