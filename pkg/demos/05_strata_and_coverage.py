"""
Strata of the section spaces
============================

For a fixed incidence divisor w the admissible section pairs form a linear
space E_w. Deeper incidence cuts out linear strata whose dimension is
compared with the expected one.
"""

from dp4lab import picard as pc
from dp4lab import posetq as P
from dp4lab import strata as st
from dp4lab.ffpoly import rational_point

alpha = pc.MINUS_K + pc.F_CLASS + pc.FPRIME
for E in (0, 2):
    r = st.verify_unobstructedness(3, alpha, E)
    print(f"E <= {E}: {r.unobstructed}/{r.checked} strata have the expected dimension")

# three conditions on a line in bidegree (1, 1) overshoot and the stratum is obstructed
x = P.SaturatedElement.from_dict({rational_point(3, 0): P.atom_chain(3, 0)})
print(st.stratum_dim(1, 1, x, 3))

###############################################################################
# coverage: incidence divisors reachable by an irreducible section

for a, k in ((2, (1, 1, 0, 0)), (1, (1, 1, 1, 0))):
    r = st.coverage_report(3, a, k)
    print(f"a={a}, k={k}: {r.covered}/{r.total} covered")
