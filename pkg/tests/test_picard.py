import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from dp4lab import picard as pc
from dp4lab.picard import E1, E2, E3, E4, F_CLASS as F, FPRIME as Fp, MINUS_K as K


def test_pairing_examples():
    assert pc.pairing(F, Fp) == 1
    assert pc.pairing(E1, E2) == 0
    assert pc.pairing(K, K) == 4


def _brute_lines():
    """Exhaustive solve of C^2 = -1, -K.C = 1 in a box that contains every solution."""
    out = set()
    for v in itertools.product(range(-2, 3), repeat=6):
        c = pc.PicClass(v)
        if pc.pairing(c, c) == -1 and pc.pairing(K, c) == 1:
            out.add(c)
    return out


def test_minus_one_classes_match_exhaustive_search():
    lines = pc.minus_one_classes()
    assert len(lines) == 16
    assert set(lines) == _brute_lines()
    assert E1 in lines and F - E1 in lines and F + Fp - E1 - E2 - E3 in lines


def test_intersection_graph_is_five_regular():
    # each line meets 5 others and is disjoint from the remaining 10
    lines = pc.minus_one_classes()
    for c in lines:
        assert sum(pc.pairing(c, d) == 1 for d in lines) == 5
        assert sum(pc.pairing(c, d) == 0 for d in lines if d != c) == 10


def test_disjoint_triples():
    lines = pc.minus_one_classes()
    triples = pc.disjoint_triples()
    assert len(triples) == 960
    for t in triples:
        for i, j in itertools.combinations(t, 2):
            assert pc.pairing(lines[i], lines[j]) == 0


def test_is_nef_examples():
    assert pc.is_nef(K)
    assert not pc.is_nef(E1)
    assert not pc.is_nef(F + Fp - E1 - E2 - E3 - E4)


def test_conics_and_presentations():
    conics = pc.conic_classes()
    brute = {pc.PicClass(v) for v in itertools.product(range(-2, 3), repeat=6)
             if pc.pairing(pc.PicClass(v), pc.PicClass(v)) == 0 and pc.pairing(K, pc.PicClass(v)) == 2
             and pc.is_nef(pc.PicClass(v))}
    assert set(conics) == brute and len(conics) == 10
    for c in (F, Fp, F + Fp - E1 - E2, 2 * F + Fp - E1 - E2 - E3 - E4):
        assert c in conics
    pres = pc.presentations()
    assert len(pres) == 80
    assert any(p.C == F and p.Cprime == Fp and set(p.exceptional) == {E1, E2, E3, E4} for p in pres)
    pairs = {(p.C, p.Cprime) for p in pres}
    assert all((b, a) in pairs for a, b in pairs)
    for p in pres:
        assert len(p.exceptional) == 4
        for x, y in itertools.combinations(p.exceptional, 2):
            assert pc.pairing(x, y) == 0


def test_class_invariants_examples():
    assert pc.class_invariants(K) == pc.ClassInvariants(4, 2, 2, (1, 1, 1, 1))
    assert pc.class_invariants(F) == pc.ClassInvariants(2, 0, 1, (0, 0, 0, 0))
    with pytest.raises(pc.InvalidClassError):
        pc.class_invariants(E1)


def _random_nef(rng, n):
    out = []
    lines = pc.minus_one_classes()
    while len(out) < n:
        v = pc.PicClass(tuple(rng.randint(-6, 12) for _ in range(6)))
        if all(pc.pairing(v, c) >= 0 for c in lines):
            out.append(v)
    return out


def test_height_identity_on_random_nef_classes():
    rng = random.Random(1)
    pres = pc.presentations()
    for alpha in _random_nef(rng, 1000):
        rho = rng.choice(pres)
        inv = pc.class_invariants(alpha, rho)
        assert inv.h == 2 * inv.a + 2 * inv.aprime - sum(inv.k)


def test_nef_cross_check_against_presentations():
    # nef iff every presentation has k_i >= 0 and a - k_i - k_j-type positivity: a - k_i >= 0, a' - k_i >= 0,
    # and a + a' - k_i - k_j - k_l >= 0
    rng = random.Random(2)
    pres = pc.presentations()
    for _ in range(1000):
        alpha = pc.PicClass(tuple(rng.randint(-3, 6) for _ in range(6)))
        ok = True
        for rho in pres:
            a, ap, k = rho.invariants(alpha)
            ok &= min(k) >= 0 and a - max(k) >= 0 and ap - max(k) >= 0
            ok &= all(a + ap - sum(t) >= 0 for t in itertools.combinations(k, 3))
        assert ok == pc.is_nef(alpha)


def test_parse_accepts_six_or_seven_integers():
    assert pc.PicClass.parse("2,2,1,1,1,1") == K
    assert pc.PicClass.parse("(4,2,2,1,1,1,1)") == K
    assert K.text() == "2,2,1,1,1,1"
    for bad in ("5,2,2,1,1,1,1", "1,2,3", "a,b,c,d,e,f"):
        with pytest.raises(pc.InvalidClassError):
            pc.PicClass.parse(bad)


def test_chamber_examples():
    assert pc.chamber_decompose(K).coefficients == (1, 0, 0, 0, 0, 0)
    d = pc.chamber_decompose(F)
    assert sorted(d.coefficients) == [0, 0, 0, 0, 0, 1] and d.y1 + d.y2 == 1
    d = pc.chamber_decompose(K + F + Fp)
    assert d.coefficients == (1, 0, 0, 0, 1, 1)
    assert 4 * d.b + 2 * d.y1 + 2 * d.y2 == 8 == (K + F + Fp).h


def test_chamber_recomposes_exhaustively_up_to_height_12():
    n = 0
    for chunk in pc.nef_invariant_points(12):
        for a, ap, *k in chunk.tolist():
            alpha = pc.PicClass.from_invariants(a, ap, k)
            d = pc.chamber_decompose(alpha)
            assert d.recompose() == alpha
            assert min(d.coefficients) >= 0
            assert alpha.h == 4 * d.b + 5 * d.b3 + 6 * d.b2 + 3 * d.x + 2 * d.y1 + 2 * d.y2
            n += 1
    assert n == pc.ehrhart_count(None, 12)


def test_ell_examples():
    assert pc.ell(K) == 0
    r = pc.ell_and_cone(2 * K + F + Fp, Fraction(1, 200))
    assert r.ell >= Fraction(1, 16) and r.member_of_shrunk_cone
    rng = random.Random(3)
    for alpha in _random_nef(rng, 50):
        assert pc.ell(2 * alpha) == 2 * pc.ell(alpha)
    assert not pc.ell_and_cone(K, Fraction(1, 100)).member_of_shrunk_cone


def test_ell_array_matches_scalar():
    rng = random.Random(4)
    alphas = _random_nef(rng, 40)
    arr = pc.ell_array(np.array([a.coords for a in alphas]))
    assert [Fraction(int(x), 32) for x in arr] == [pc.ell(a) for a in alphas]


def test_nef_cone_rays():
    cone = pc.nef_cone()
    assert len(cone.rays) == 26
    for r in cone.rays:
        assert pc.is_nef(pc.PicClass(r))


def test_alpha_exact_full_cone():
    assert pc.alpha_constant(mode="exact").value == Fraction(1, 180)


def test_alpha_degenerate_cone_is_zero():
    ray = pc.Cone.from_rays([K.coords])
    assert pc.alpha_constant(ray, mode="exact").value == 0
    assert pc.ehrhart_count(ray, 8) == 3  # 0, -K, -2K


def test_alpha_invariant_under_lattice_automorphisms():
    cone = pc.nef_cone()
    base = pc.alpha_constant(cone).value
    for M in (pc.swap_matrix(), pc.permutation_matrix((1, 0, 2, 3)), pc.permutation_matrix((3, 1, 2, 0))):
        assert pc.alpha_constant(cone.transform(M)).value == base


def test_ehrhart_examples():
    counts = [pc.ehrhart_count(None, m) for m in range(0, 9)]
    assert counts[0] == 1
    assert counts == sorted(counts)
    # the closed-form k4 sum agrees with the full enumeration and the inequality form
    cone = pc.nef_cone()
    for m in (3, 6):
        brute = sum(len(c) for c in pc.nef_invariant_points(m))
        assert pc.ehrhart_count(None, m) == brute
        explicit = pc.Cone(cone.rays, list(cone.inequalities)[::-1])
        assert pc.ehrhart_count(explicit, m) == brute


@pytest.mark.parametrize("m", [10, 20, 30])
def test_ehrhart_ratio_tracks_volume(m):
    # count(m) / m^6 approaches the volume (1/180)/6 from above; the excess decreases with m
    ratio = Fraction(pc.ehrhart_count(None, m), m**6)
    vol = Fraction(1, 180) / 6
    assert ratio > vol


def test_ehrhart_ratio_is_decreasing_towards_volume():
    vol = Fraction(1, 1080)
    ratios = [Fraction(pc.ehrhart_count(None, m), m**6) for m in (10, 20, 30, 60)]
    assert all(r > vol for r in ratios)
    assert ratios == sorted(ratios, reverse=True)


def test_lattice_alpha_at_30_is_far_from_exact():
    # the leading Ehrhart term dominates only for much larger dilations
    lat = pc.alpha_constant(mode="lattice", dilation=30)
    assert lat.mode == "lattice"
    assert 1.5 < float(lat.value) * 180 < 1.7


def test_shrunk_cone_falls_back_to_lattice_with_warning():
    with pytest.warns(UserWarning):
        res = pc.alpha_constant(pc.ShrunkCone(Fraction(1, 100)), mode="exact", dilation=6)
    assert res.mode == "lattice" and res.warning
    full = pc.alpha_constant(mode="lattice", dilation=6).value
    assert 0 < res.value < full
