import itertools
from fractions import Fraction

import numpy as np
import pytest

from dp4lab import posetq as P
from dp4lab.ffpoly import PreconditionError, closed_points, rational_point

ELS = [x for x in range(P.N_ELEMENTS) if x != P.TOP]
L1, L2 = P.L(0), P.L(1)


def chains_up_to(maxlen):
    out = [P.TRIVIAL]

    def rec(seq):
        if len(seq) == maxlen:
            return
        for y in ELS:
            if not seq or P.LE[seq[-1]][y]:
                out.append(P.Chain(tuple(seq + [y])))
                rec(seq + [y])

    rec([])
    return out


def monotone_functions(m):
    """Every order-preserving map from Q minus its top to {0..m}."""
    order = sorted(ELS, key=lambda x: P.RANK[x])

    def rec(i, vals):
        if i == len(order):
            yield dict(vals)
            return
        x = order[i]
        hi = min([vals[y] for y in vals if P.LE[x][y]], default=m)
        for v in range(hi + 1):
            vals[x] = v
            yield from rec(i + 1, vals)
            del vals[x]

    yield from rec(0, {})


# -- the poset Q ------------------------------------------------------------------

def test_poset_shape():
    assert P.N_ELEMENTS == 16
    assert P.GAMMA[P.BOTTOM] == 4 and P.GAMMA[P.TOP] == 0
    assert P.GAMMA[L1] == 2 and P.GAMMA[P.V1] == 2 and P.GAMMA[P.line(0, 1)] == 3
    assert [P.RANK[x] for x in (P.BOTTOM, P.line(0, 1), P.V1, L1, P.TOP)] == [3, 2, 1, 1, 0]


def test_meet_examples():
    assert P.meet(L1, L2) == P.BOTTOM
    assert P.meet(L1, P.V1) == P.line(0, 1)
    for x in range(P.N_ELEMENTS):
        assert P.meet(x, P.TOP) == x


def test_meet_is_greatest_lower_bound_exhaustive():
    n = P.N_ELEMENTS
    for x, y, z in itertools.product(range(n), repeat=3):
        assert (P.le(z, x) and P.le(z, y)) == P.le(z, P.meet(x, y))


def test_meet_of_every_subset_lies_in_q():
    # closure under intersection, including the empty meet V
    n = P.N_ELEMENTS
    for mask in range(1 << n):
        m = P.TOP
        for x in range(n):
            if mask >> x & 1:
                m = P.meet(m, x)
        assert 0 <= m < n


# -- saturation ---------------------------------------------------------------------

def test_saturate_examples():
    assert str(P.saturate({P.V1: 1, P.V2: 1})) == "1[0]"
    assert P.saturate({L1: 2}) == P.atom_chain(2, 0)
    f = P.Chain.parse("1[l1,1]+2[l1,1+l1,2]")
    assert P.saturate(P.multiplicity_function(f)) == f
    with pytest.raises(PreconditionError):
        P.saturate({P.BOTTOM: 1})


def test_saturate_idempotent_monotone_small():
    # exhaustive for entries <= 2, including monotonicity along every covering increment
    funcs = list(monotone_functions(2))
    assert len(funcs) == 78986
    sat = {tuple(sorted(g.items())): P.saturate(g) for g in funcs}
    for g in funcs:
        f = sat[tuple(sorted(g.items()))]
        mf = P.multiplicity_function(f)
        assert all(mf[x] >= g[x] for x in ELS)
        assert P.saturate(mf) == f
        for x in ELS:
            g2 = dict(g)
            g2[x] += 1
            key = tuple(sorted(g2.items()))
            if key in sat:
                assert P.chain_le(f, sat[key])


@pytest.mark.slow
def test_saturate_idempotent_exhaustive_entries_up_to_3():
    n = 0
    for g in monotone_functions(3):
        f = P.saturate(g)
        mf = P.multiplicity_function(f)
        assert all(mf[x] >= g[x] for x in ELS)
        assert P.saturate(mf) == f
        n += 1
    assert n == 2577204


def test_saturate_is_least_among_chains():
    chains = chains_up_to(3)
    for g in itertools.islice(monotone_functions(3), 0, None, 997):
        f = P.saturate(g)
        for c in chains:
            mc = P.multiplicity_function(c)
            if all(mc[x] >= g[x] for x in ELS):
                assert P.chain_le(f, c)


# -- chains ---------------------------------------------------------------------------

def test_chain_text_roundtrip():
    for c in chains_up_to(3):
        assert P.Chain.parse(str(c)) == c
    assert P.Chain.parse("V") == P.TRIVIAL
    with pytest.raises(PreconditionError):
        P.Chain.parse("1[nope]")


def test_join_examples():
    f = P.Chain.parse("2[l1,1+l1,2]")
    assert P.chain_join(f, P.TRIVIAL) == f
    assert str(P.chain_join(P.Chain.parse("[V1]"), P.Chain.parse("[V2]"))) == "1[0]"
    assert str(P.chain_join(P.Chain.parse("[l1,1+l1,2]"), P.Chain.parse("[V1]"))) == "1[l1,1]"


def test_join_is_least_upper_bound_exhaustive():
    chains = chains_up_to(3)
    idx = {c: i for i, c in enumerate(chains)}
    le = np.array([[P.chain_le(a, b) for b in chains] for a in chains])
    for i, a in enumerate(chains):
        for j, b in enumerate(chains):
            jn = idx[P.chain_join(a, b)]
            assert le[i, jn] and le[j, jn]
            assert np.array_equal(le[i] & le[j], le[jn])


def test_covers_match_brute_force_minimality():
    small = chains_up_to(4)
    big = chains_up_to(5)
    le = {(a, b): P.chain_le(a, b) for a in small for b in big}
    for f in small:
        above = [g for g in big if g != f and le[(f, g)]]
        minimal = {g for g in above if not any(h != g and P.chain_le(h, g) for h in above)}
        assert set(P.chain_covers(f)) == minimal


def test_covers_and_essentials_examples():
    for d in (1, 2, 3):
        f0 = P.atom_chain(d, 0)
        ce = P.covers_and_essentials(f0)
        L = "l1,1+l1,2"
        rest = f"+{d - 1}[{L}]" if d > 1 else ""
        expect = {f"{d + 1}[{L}]", f"1[l1,1]{rest}", f"1[l1,2]{rest}"}
        assert {str(c) for c in ce.covers} == expect
        ess = {str(c) for c in ce.essentials}
        assert {f"1[l1,1]+{d}[{L}]", f"1[l1,2]+{d}[{L}]", f"1[0]+{d}[{L}]", f"1[0]{rest}"} <= ess
        assert str(f0) in ess
    ce = P.covers_and_essentials(P.TRIVIAL)
    names = {str(c) for c in ce.essentials}
    expect = {"V", "1[V1]", "1[V2]", "1[0]"}
    expect |= {f"1[l{i},1+l{i},2]" for i in range(1, 5)}
    expect |= {f"1[l{i},{j}]" for i in range(1, 5) for j in (1, 2)}
    assert names == expect


# -- Moebius --------------------------------------------------------------------------

def test_mobius_examples():
    assert P.mobius_local(P.TRIVIAL, P.TRIVIAL) == 1
    assert P.mobius_local(P.TRIVIAL, P.Chain.parse("[V1]")) == -1
    assert P.mobius_local(P.TRIVIAL, P.Chain.parse("[0]")) == -3
    assert len(P.interval(P.TRIVIAL, P.Chain.parse("[0]"))) == 16
    with pytest.raises(PreconditionError):
        P.mobius_local(P.Chain.parse("[V1]"), P.Chain.parse("[V2]"))


def _mobius_by_matrix_inverse(f0, f):
    """Independent oracle: invert the zeta matrix of the interval."""
    iv = P.interval(f0, f)
    Z = np.array([[int(P.chain_le(a, b)) for b in iv] for a in iv], dtype=np.int64)
    M = np.rint(np.linalg.inv(Z)).astype(np.int64)
    return int(M[iv.index(f0), iv.index(f)])


@pytest.mark.parametrize("f0", [P.TRIVIAL, P.atom_chain(1, 0), P.Chain.parse("[V1]")])
def test_mobius_defining_identities(f0):
    # both one-sided sums over every interval of gamma-height <= 6 above f0
    for f in P.chains_above(f0, f0.gamma + 6):
        iv = P.interval(f0, f)
        assert sum(P.mobius_local(f0, g) for g in iv) == int(f == f0)
        assert sum(P.mobius_local(g, f) for g in iv) == int(f == f0)
        if f.gamma - f0.gamma <= 4:
            assert P.mobius_local(f0, f) == _mobius_by_matrix_inverse(f0, f)


@pytest.mark.parametrize("f0", [P.TRIVIAL, P.atom_chain(1, 0), P.atom_chain(2, 3)])
def test_non_essential_pairs_have_zero_mobius(f0):
    ess = set(P.covers_and_essentials(f0).essentials)
    for f in P.chains_above(f0, f0.gamma + 8):
        if f not in ess:
            assert P.mobius_local(f0, f) == 0


def test_local_euler_trivial_base():
    assert P.local_euler_polynomial(P.TRIVIAL, 20) == {0: 1, 2: -6, 3: 8, 4: -3}


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_local_euler_atom_base(d):
    poly = P.local_euler_polynomial(P.atom_chain(d, 2), 2 * d + 12)
    assert poly == {2 * d: 1, 2 * d + 1: -2, 2 * d + 3: 2, 2 * d + 4: -1}


# -- combinatorial functions ------------------------------------------------------------

def _at(pt, chain):
    return P.SaturatedElement.from_dict({pt: chain})


def test_comb_function_examples():
    p1 = rational_point(3, 0)
    c = P.comb_functions(_at(p1, P.Chain.parse("[0]")))
    assert (c.gamma, c.rank, c.supp, c.kappa) == (4, 3, 1, 3)
    c = P.comb_functions(_at(p1, P.atom_chain(1, 0)))
    assert (c.gamma, c.rank, c.supp, c.kappa) == (2, 1, 1, 1)
    p2 = closed_points(3, 2)[0]
    c = P.comb_functions(_at(p2, P.atom_chain(1, 0)))
    assert (c.gamma, c.supp) == (4, 2)


def test_kappa_increases_along_covers():
    p = rational_point(3, 1)
    for f in chains_up_to(4):
        k0 = P.comb_functions(_at(p, f)).kappa
        for g in P.chain_covers(f):
            assert P.comb_functions(_at(p, g)).kappa >= k0 + 1


def test_E_bounded_by_twice_kappa():
    q = 2
    pts = closed_points(q, 1)
    bases = [P.SaturatedElement.from_dict({}), _at(pts[0], P.atom_chain(1, 0)),
             P.SaturatedElement.from_dict({pts[0]: P.atom_chain(2, 1), pts[1]: P.atom_chain(1, 3)})]
    n = 0
    for w in bases:
        for x in P.enumerate_saturated_above(w, w.gamma + 6, 1, q):
            c = P.comb_functions(x, w)
            assert c.E <= 2 * c.kappa
            n += 1
    assert n > 1000


def test_enumerate_saturated_counts():
    empty = P.SaturatedElement.from_dict({})
    assert [sum(1 for _ in P.enumerate_saturated_above(empty, g, 1, 2)) for g in (1, 2, 3)] == [1, 19, 43]
    for x in P.enumerate_saturated_above(empty, 5, 2, 2):
        assert x.gamma <= 5 and all(p.degree <= 2 for p in x.support)


def test_mobius_global_examples():
    c1, c2 = rational_point(3, 0), rational_point(3, 1)
    w = P.SaturatedElement.from_dict({c1: P.atom_chain(1, 0), c2: P.atom_chain(1, 1)})
    assert P.mobius_global(P.PairWX(w, w)) == 1
    x = P.SaturatedElement.from_dict({c1: P.Chain.parse("[l1,1]"), c2: P.atom_chain(1, 1)})
    assert P.mobius_global(P.PairWX(w, x)) == -1
    x = P.SaturatedElement.from_dict({c1: P.Chain.parse("2[0]"), c2: P.atom_chain(1, 1)})
    assert P.mobius_global(P.PairWX(w, x)) == 0
    assert P.PairWX(w, w).k == (1, 1, 0, 0)


def test_mobius_global_is_multiplicative():
    q = 2
    pts = closed_points(q, 1)
    w = P.SaturatedElement.from_dict({pts[0]: P.atom_chain(1, 0)})
    for x in P.enumerate_saturated_above(w, 8, 1, q):
        expect = 1
        for p in pts:
            expect *= P.mobius_local(w.chain_at(p), x.chain_at(p))
        assert P.mobius_global(P.PairWX(w, x)) == expect


def test_pair_rejects_bad_input():
    p = rational_point(3, 0)
    with pytest.raises(PreconditionError):
        P.PairWX(_at(p, P.Chain.parse("[V1]")), _at(p, P.Chain.parse("[0]")))
    with pytest.raises(PreconditionError):
        P.PairWX(_at(p, P.atom_chain(2, 0)), _at(p, P.atom_chain(1, 0)))


def test_euler_factor_matches_enumeration():
    # truncated sum over saturated x of mu(empty, x) Z^gamma at one rational point equals 1 - 6Z^2 + 8Z^3 - 3Z^4
    q = 3
    p = rational_point(q, 0)
    poly = {}
    for f in P.chains_above(P.TRIVIAL, 10):
        m = P.mobius_local(P.TRIVIAL, f)
        if m:
            poly[f.gamma] = poly.get(f.gamma, 0) + m
    assert {g: c for g, c in poly.items() if c} == {0: 1, 2: -6, 3: 8, 4: -3}
    z = Fraction(1, q)
    assert sum(c * z**g for g, c in poly.items()) == 1 - 6 * z**2 + 8 * z**3 - 3 * z**4
    assert _at(p, P.TRIVIAL).support == ()
