"""
Chains in the subspace poset and their Moebius function
=======================================================

A chain records, at one closed point, how deeply a pair of sections meets
each subspace of the rank-4 bundle. Summing the Moebius function over the
chains above a base gives the local Euler factor.
"""

from dp4lab import posetq as P

print("elements of the poset:", len(P.NAMES))
print(P.NAMES)

# a chain is written as multiplicity[element] terms; its height gamma counts conditions
f = P.Chain.parse("1[0]")
print(f, "gamma =", f.gamma)
print("mu(trivial, [0]) =", P.mobius_local(P.TRIVIAL, f))

###############################################################################
# covers of a chain generate the essential chains, the only ones with mu != 0

ce = P.covers_and_essentials(P.TRIVIAL)
print("covers of the trivial chain:", [str(c) for c in ce.covers])
print("essential chains:", len(ce.essentials))

###############################################################################
# local Euler polynomials: coefficients of z^gamma

print("trivial base:", P.local_euler_polynomial(P.TRIVIAL, 20))
for d in (1, 2, 3):
    print(f"atom base, d={d}:", P.local_euler_polynomial(P.atom_chain(d, 2), 2 * d + 12))
