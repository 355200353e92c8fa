"""Raina's function and its classical special cases.

With sigma = 1 the series is the two-parameter Mittag-Leffler function, so
familiar closed forms fall out for small rho and lambda.
"""

from __future__ import annotations

import math

from raina_hh import CoefficientSequence, RainaKernel, eval_raina

cases = [
    ("E_{1,1}(1) = e", RainaKernel(1, 1, 1), 1.0, math.e),
    ("E_{2,1}(-1) = cos 1", RainaKernel(2, 1, 1), -1.0, math.cos(1.0)),
    ("E_{2,2}(1) = sinh 1", RainaKernel(2, 2, 1), 1.0, math.sinh(1.0)),
]
for label, kernel, x, ref in cases:
    val, rep = eval_raina(kernel, x)
    print(f"{label:22s} {val:.16f}  err={abs(val - ref):.1e}  terms={rep.terms_used}")

# Any bounded positive sequence works; the truncation adapts to |x|.
harm = RainaKernel(0.7, 1.3, 1.0, CoefficientSequence.harmonic())
for x in (0.5, 5.0, 25.0):
    val, rep = eval_raina(harm, x)
    print(f"harmonic sigma, x={x:5.1f}: F={val:.10g} with {rep.terms_used} terms (tail <= {rep.tail_bound:.1e})")
