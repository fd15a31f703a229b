"""Norms used throughout: weighted-l2 Sobolev, grid L_p, dyadic block norms.

Sobolev norms are exact weighted sums over the sparse spectrum with the
weight <xi> = (1 + |xi|^2)^(1/2).  L_p norms are Riemann sums over the grid
with weight M^{-n}, so the constant-1 field has norm one for every p.
Block norms aggregate dyadic pieces either as

    besov:    ( sum_j (2^{js} ||Phi_j(D)u||_p)^q )^{1/q}        (sup for q=inf)
    triebel:  || sup_j 2^{js} |Phi_j(D)u| ||_p                  (q = inf form)
"""

from __future__ import annotations

import math

import numpy as np

from .cutoffs import LPFamily, lp_project
from .errors import EmptySpectrum
from .fields import (
    DenseField,
    SparseField,
    angled,
    freq_abs,
    grid_frequencies,
    sparse_to_dense,
)


def sobolev_norm(u: SparseField, s: float) -> float:
    """Discrete H^s norm ( sum <xi>^{2s} |u^(xi)|^2 )^{1/2}."""
    return math.sqrt(
        math.fsum(angled(xi) ** (2.0 * s) * abs(c) ** 2 for xi, c in u.items())
    )


def lp_norm(g: DenseField, p: float) -> float:
    """Grid quadrature of the L_p norm; p = inf gives the max modulus."""
    mods = np.abs(g.samples)
    if math.isinf(p):
        return float(mods.max(initial=0.0))
    if p < 1:
        raise ValueError("p must be >= 1")
    weight = 1.0 / float(g.M) ** g.n
    return float((weight * np.sum(mods**p)) ** (1.0 / p))


def hsp_norm(u: SparseField, s: float, p: float, M: int) -> float:
    """Bessel-potential norm || <D>^s u ||_p evaluated on an M grid.

    For p = 2 this agrees with sobolev_norm up to grid rounding.
    """
    weighted = u.multiplier(lambda xi: angled(xi) ** s)
    return lp_norm(sparse_to_dense(weighted, M), p)


def hsp_norm_dense(g: DenseField, s: float, p: float) -> float:
    """Bessel-potential norm of a grid field (spectrally truncated at M/2)."""
    rho = grid_frequencies(g.M, g.n)
    weight = (1.0 + rho * rho) ** (0.5 * s)
    spec = np.fft.fftn(g.samples) * weight
    return lp_norm(DenseField(g.n, g.M, np.fft.ifftn(spec)), p)


def _blocks(u: SparseField, fam: LPFamily):
    top = fam.top_block(u)
    return [(j, lp_project(u, j, fam, "block")) for j in range(top + 1)]


def besov_norm(
    u: SparseField,
    s: float,
    p: float,
    q: float,
    fam: LPFamily,
    M: int,
    aggregation: str = "besov",
) -> float:
    """Dyadic block norm of a sparse field.

    aggregation="besov" computes the B^s_{p,q} norm from per-block L_p norms;
    aggregation="triebel" computes the F^s_{p,inf} seminorm (q must be inf):
    the pointwise sup over blocks is taken before the L_p quadrature.
    """
    blocks = _blocks(u, fam)
    if aggregation == "triebel":
        if not math.isinf(q):
            raise ValueError("triebel aggregation is provided for q = inf only")
        env = np.zeros((M,) * u.n)
        for j, uj in blocks:
            if len(uj) == 0:
                continue
            env = np.maximum(env, 2.0 ** (j * s) * np.abs(sparse_to_dense(uj, M).samples))
        return lp_norm(DenseField(u.n, M, env.astype(np.complex128)), p)
    if aggregation != "besov":
        raise ValueError(f"unknown aggregation {aggregation!r}")
    per_block = []
    for j, uj in blocks:
        if len(uj) == 0:
            continue
        per_block.append(2.0 ** (j * s) * lp_norm(sparse_to_dense(uj, M), p))
    if not per_block:
        return 0.0
    if math.isinf(q):
        return max(per_block)
    return float(math.fsum(v**q for v in per_block) ** (1.0 / q))


def cone_report(u: SparseField, direction_tol: float = 0.05) -> list[tuple[tuple[float, ...], float]]:
    """Group the spectrum by direction and fit a decay exponent per group.

    Modes are clustered greedily by unit direction (largest radius first,
    merge within direction_tol); each group gets the least-squares slope of
    log|u^| against log|xi|.  Returns (direction, slope) pairs sorted by
    direction.  The origin mode is ignored; a spectrum without nonzero
    frequencies raises EmptySpectrum.
    """
    modes = []
    for xi, c in u.items():
        rho = freq_abs(xi)
        if rho > 0.0:
            modes.append((rho, tuple(float(x) / rho for x in xi), abs(c)))
    if not modes:
        raise EmptySpectrum("cone report needs spectrum away from the origin")
    modes.sort(key=lambda t: (-t[0], t[1]))

    groups: list[tuple[tuple[float, ...], list[tuple[float, float]]]] = []
    for rho, direction, mag in modes:
        for rep, members in groups:
            if math.dist(rep, direction) <= direction_tol:
                members.append((rho, mag))
                break
        else:
            groups.append((direction, [(rho, mag)]))

    report = []
    for rep, members in groups:
        xs = np.log([rho for rho, _ in members])
        ys = np.log([max(mag, 1e-300) for _, mag in members])
        if len(members) == 1 or float(np.ptp(xs)) == 0.0:
            slope = 0.0
        else:
            slope = float(np.polyfit(xs, ys, 1)[0])
        report.append((rep, slope))
    report.sort(key=lambda t: t[0])
    return report
