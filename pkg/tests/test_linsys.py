from fractions import Fraction
from itertools import product
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from fanocheck import eulerchar
from fanocheck.chow import CenterType, DivisorClass, FanoBase, build_lattice
from fanocheck.linsys import (
    STATED_BOUNDS,
    DpPair,
    LinsysError,
    component_multiplier,
    dim_bound,
    dim_pluri,
    dp_pair_numerology,
    fixed_component_class,
    genus_degree,
    h0_exceptional,
    kills_anticanonical_square,
)

GENERA = (7, 9, 10, 12)
CENTERS = {"line": CenterType.curve(1), "conic": CenterType.curve(2), "cubic": CenterType.curve(3), "point": CenterType.point()}


@pytest.mark.parametrize("g", range(6, 13))
@pytest.mark.parametrize("a", (1, 2, 3))
def test_dim_pluri_against_riemann_roch(g, a):
    X = eulerchar.Threefold.from_base(FanoBase.prime(g))
    assert dim_pluri(g, a) == eulerchar.threefold_chi(eulerchar.line_bundle(X, a)) - 1


def test_dim_pluri_range():
    with pytest.raises(LinsysError):
        dim_pluri(9, 4)
    with pytest.raises(LinsysError):
        dim_pluri(5, 1)


@pytest.mark.parametrize("b", range(8))
def test_point_exceptional_sections_count_monomials(b):
    monomials = sum(1 for e in product(range(b + 1), repeat=3) if sum(e) == b)
    assert h0_exceptional(CenterType.point(), 3, b) == monomials


@pytest.mark.parametrize("d", (1, 2, 3))
@pytest.mark.parametrize("a", (1, 2, 3))
def test_curve_exceptional_sections_by_splitting(d, a):
    # E = P(N^*) over P^1 with N = O(n1) + O(n2), n1 + n2 = d - 2;
    # O_E(aH - bE) pushes forward to Sym^b(N^*)(ad)
    n1, n2 = (d - 2) // 2, (d - 2) - (d - 2) // 2
    for b in range(a + 1):
        expected = sum(max(0, a * d - i * n1 - (b - i) * n2 + 1) for i in range(b + 1))
        assert h0_exceptional(CenterType.curve(d), a, b) == expected


def test_curve_vanishing_range_enforced():
    with pytest.raises(LinsysError):
        h0_exceptional(CenterType.curve(2), 1, 2)
    with pytest.raises(LinsysError):
        dim_bound(9, CenterType.curve(2), 1, 3)


@pytest.mark.parametrize("center", ["conic", "cubic"])
@pytest.mark.parametrize("g", GENERA)
def test_curve_closed_forms(center, g):
    for a, b, kg, k0, exact in STATED_BOUNDS[center]:
        r = dim_bound(g, CENTERS[center], a, b)
        assert r.raw == kg * g + k0
        assert r.exact == exact


@pytest.mark.parametrize("g", GENERA)
def test_point_bounds_by_monomial_conditions(g):
    # vanishing to order b at a point imposes C(b+2, 3) conditions
    for a, b, *_ in STATED_BOUNDS["point"]:
        assert dim_bound(g, CenterType.point(), a, b).raw == dim_pluri(g, a) - comb(b + 2, 3)


def test_point_2h_5e_differs_from_stated_form():
    assert [dim_bound(g, CenterType.point(), 2, 5).raw for g in GENERA] == [5 * g - 36 for g in GENERA]


def test_clamping_keeps_raw():
    r = dim_bound(7, CenterType.point(), 2, 5)
    assert (r.raw, r.value) == (-1, -1)
    r = dim_bound(7, CenterType.point(), 1, 3)
    assert r.raw == -2 and r.value == -1


@settings(max_examples=400, deadline=None)
@given(g=st.integers(6, 30), a=st.integers(1, 3), b=st.integers(0, 8), center=st.sampled_from(sorted(CENTERS)))
def test_dim_bound_monotone_in_b(g, a, b, center):
    c = CENTERS[center]
    if c.kind == "curve" and b >= a + 1:
        return
    assert dim_bound(g, c, a, b + 1).raw <= dim_bound(g, c, a, b).raw


@pytest.mark.parametrize("g,center,x", [(9, "point", 4), (10, "conic", 4), (7, "conic", Fraction(5, 2)), (9, "conic", Fraction(7, 2)), (7, "cubic", Fraction(9, 5))])
def test_fixed_component(g, center, x):
    # (-K)^2.H / (-K)^2.E is (2g - 2 - d)/(d + 2) for curves and (g - 1)/2 for points
    D = fixed_component_class(g, CENTERS[center])
    assert D.coeff("E") == -x
    lat = build_lattice(FanoBase.prime(g), CENTERS[center])
    assert kills_anticanonical_square(lat, D)
    assert component_multiplier(D) == Fraction(x).denominator


def test_fixed_component_examples():
    assert str(fixed_component_class(9, CENTERS["point"])) == "H - 4E"
    assert str(fixed_component_class(10, CENTERS["conic"])) == "H - 4E"
    assert str(fixed_component_class(7, CENTERS["conic"])) == "H - (5/2)E"
    assert component_multiplier(DivisorClass(H=1, E=Fraction(-5, 2))) == 2


def test_genus_degree_conversions():
    assert genus_degree(genus=12).degree == 22
    assert genus_degree(antik_cube=16).genus == 9
    assert genus_degree(antik_cube=40, index=2).degree == 5
    assert genus_degree(antik_cube=40, index=2).h0_H == 7
    with pytest.raises(LinsysError):
        genus_degree(genus=9, antik_cube=18)
    with pytest.raises(LinsysError):
        genus_degree(antik_cube=36, index=2)
    with pytest.raises(LinsysError):
        genus_degree(antik_cube=54, index=3)


@settings(max_examples=200, deadline=None)
@given(a=st.integers(1, 10), d=st.integers(1, 9))
def test_dp_pair_relations(a, d):
    n = dp_pair_numerology(DpPair(a, d))
    assert n.Mcube == a**3 * n.Scube
    assert n.SM2 == a * n.S2M
    assert n.feasible == (n.dimM >= 3)


def test_dp_pair_validation():
    with pytest.raises(LinsysError):
        DpPair(0, 3)
