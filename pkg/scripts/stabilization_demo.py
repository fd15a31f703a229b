#!/usr/bin/env python3
"""Print a stabilisation table: modulated outputs across m for two profiles.

Shows the raw mechanism behind every limit diagnostic: successive
differences drop to exactly zero once both modulation plateaus cover the
occupied frequencies, and the two profiles land on bitwise-identical
fields.
"""

from torspec.constructions import lacunary_field
from torspec.cutoffs import default_families
from torspec.fields import delta_field
from torspec.operator import vanishing_limit
from torspec.symbols import ching_symbol

if __name__ == "__main__":
    _, a = ching_symbol(0.5, (2,), 4, 9)
    w = lacunary_field((1,), 0.5, 4, 9, delta_field((0,)))
    fams = default_families()
    diag = vanishing_limit(a, w, [f.profile for f in fams], (0, 12))
    print(f"profiles: {diag.profile_ids}")
    print(f"m range:  [{diag.m_lo}, {diag.m_hi}]")
    for i, delta in enumerate(diag.delta):
        print(f"  m={diag.m_lo + i:2d} -> {diag.m_lo + i + 1:2d}   delta = {delta:.6e}")
    print(f"stabilisation index m* = {diag.m_star}")
    print(f"cross-profile max discrepancy = {diag.cross_profile_max:.3e}")
    print(f"verdict: {'PASS' if diag.passed else 'FAIL'}")
