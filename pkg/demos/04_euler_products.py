"""
Euler products: the Tamagawa constant and the residue identity
==============================================================

Truncated products over closed points of P^1, carried exactly while the
rationals stay small and in high precision afterwards, each with a bound
on the neglected tail.
"""

import mpmath

from dp4lab import zeta as zt

for q in (2, 3, 4, 5):
    v = zt.tamagawa(q, 20)
    print(f"q={q}  tau ~ {mpmath.nstr(v.decimal, 12)}  tail bound {v.tail_bound:.1e}")

###############################################################################
# the residue computed in closed form and through the normalized product agree factor by factor

for q in (2, 3):
    r = zt.residue_compare(q, 8)
    print(f"q={q}  residue {mpmath.nstr(r.closed_form.decimal, 12)}  difference {r.difference}")

###############################################################################
# poset-side sums against coefficients of the truncated virtual zeta function

for k in ((0, 0, 0, 0), (1, 0, 0, 0), (1, 1, 0, 0), (2, 1, 1, 0)):
    c = zt.mobius_coefficient_compare(3, k, 2)
    print(k, c.poset_sum, c.difference)

###############################################################################
# the predicted count for large degree

p = zt.manin_predictor(3, 0, 5)
print("predicted #M at q=3, degree 5:", mpmath.nstr(p.predicted, 10))
