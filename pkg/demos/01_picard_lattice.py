"""
The Picard lattice and its nef cone
===================================

Lines on the surface, the disjoint triples that drive the chamber
decomposition, and the volume constant of the nef cone.
"""

from collections import Counter

from dp4lab import picard as pc

# the sixteen (-1)-curves, each written in the basis (F, F', E1..E4)
lines = pc.minus_one_classes()
for c in lines:
    print(c.coords)

# how the lines meet: every line meets five others once and misses ten
meets = Counter(sum(pc.pairing(c, d) == 1 for d in lines) for c in lines)
print("lines met by each line:", dict(meets))
print("ordered disjoint triples:", len(pc.disjoint_triples()))

###############################################################################
# A nef class splits over one chamber into six non-negative coefficients

alpha = pc.MINUS_K + pc.F_CLASS + pc.FPRIME
inv = pc.class_invariants(alpha)
print("invariants a, a', k, h:", inv.a, inv.aprime, inv.k, inv.h)
ch = pc.chamber_decompose(alpha)
print("chamber coefficients:", ch.coefficients)
assert ch.recompose() == alpha

###############################################################################
# The nef cone has 26 rays; its sliced volume gives the constant 1/180

cone = pc.nef_cone()
print("rays:", len(cone.rays))
print("alpha, exact:", pc.alpha_constant().value)
for m in (10, 20, 30):
    r = pc.alpha_constant(mode="lattice", dilation=m)
    print(f"alpha, lattice count at dilation {m}: {float(r.value):.6f}")
