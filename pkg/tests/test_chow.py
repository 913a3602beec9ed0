from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fanocheck.chow import (
    CenterType,
    ChowError,
    DivisorClass,
    FanoBase,
    FlopPairing,
    FlopUndefinedError,
    build_lattice,
    double_projection_numbers,
    flop_constants,
    triple,
)

GENERA = (7, 9, 10, 12)
CENTERS = [CenterType.curve(1), CenterType.curve(2), CenterType.curve(3)] + [CenterType.point(k) for k in range(4)]


def test_fano_base_validation():
    assert FanoBase.prime(9).hcube == 16
    assert FanoBase(21, 2, 40).h_cube == 5
    with pytest.raises(ChowError):
        FanoBase(9, 1, 18)
    with pytest.raises(ChowError):
        FanoBase(9, 5, 16)
    with pytest.raises(ChowError):
        FanoBase(9, 2, 0)


def test_center_validation():
    assert CenterType.curve(2).name == "conic"
    assert CenterType.point(2).name == "point+2lines"
    with pytest.raises(ChowError):
        CenterType.curve(4)
    with pytest.raises(ChowError):
        CenterType("curve", 1, 1)
    with pytest.raises(ChowError):
        CenterType.point(4)


def test_divisor_class_arithmetic():
    D = DivisorClass(H=2, E=-1)
    assert (D + DivisorClass(E=1)).terms == (("H", Fraction(2)),)
    assert (3 * D).coeff("H") == 6
    assert (D - D).terms == ()
    assert str(DivisorClass(E=Fraction(-5, 2), H=1)) == "H - (5/2)E"


def test_conic_blowup_table():
    lat = build_lattice(FanoBase.prime(9), CenterType.curve(2))
    assert lat.value("E", "E", "E") == 0
    assert lat.value("H", "E", "E") == -2
    assert flop_constants(lat) == (10, 4, -2)


def test_point_blowup_table():
    lat = build_lattice(FanoBase.prime(10), CenterType.point())
    assert lat.value("E", "E", "E") == 1
    assert lat.value("H", "H", "E") == 0


@pytest.mark.parametrize("g", GENERA)
@pytest.mark.parametrize("d", (1, 2, 3))
def test_curve_blowup_degree_oracle(g, d):
    # blowing up a smooth rational curve C: (-K)^3 drops by 2(-K.C) + 2 - 2p_a
    lat = build_lattice(FanoBase.prime(g), CenterType.curve(d))
    K = lat.antiK
    assert triple(lat, K, K, K) == (2 * g - 2) - 2 * d - 2
    assert flop_constants(lat) == (2 * g - 4 - 2 * d, d + 2, -2)


@pytest.mark.parametrize("g", GENERA)
def test_point_blowup_degree_oracle(g):
    # a point blowup removes 8 = 2^3 from the anticanonical degree
    lat = build_lattice(FanoBase.prime(g), CenterType.point())
    K = lat.antiK
    assert triple(lat, K, K, K) == 2 * g - 2 - 8


def test_unknown_generator_rejected():
    lat = build_lattice(FanoBase.prime(7), CenterType.point())
    with pytest.raises(ChowError):
        triple(lat, DivisorClass(F1=1), lat.antiK, lat.antiK)


def test_index_two_lattice_refused():
    with pytest.raises(ChowError):
        build_lattice(FanoBase(21, 2, 40), CenterType.point())


def test_flop_refuses_e_cubed():
    p = FlopPairing(Fraction(10), Fraction(4), Fraction(-2))
    with pytest.raises(FlopUndefinedError):
        p.triple((0, 1), (0, 1), (0, 1))
    assert p.triple((1, 0), (0, 1), (0, 1)) == -2


@settings(max_examples=1000, deadline=None)
@given(
    center=st.sampled_from(CENTERS),
    g=st.sampled_from(GENERA),
    coeffs=st.lists(st.integers(-30, 30), min_size=15, max_size=15),
    perm=st.permutations([0, 1, 2]),
)
def test_trilinear_form_symmetric(center, g, coeffs, perm):
    lat = build_lattice(FanoBase.prime(g), center)
    n = len(lat.basis)
    classes = [DivisorClass(dict(zip(lat.basis, coeffs[5 * i : 5 * i + n]))) for i in range(3)]
    shuffled = [classes[i] for i in perm]
    assert triple(lat, *classes) == triple(lat, *shuffled)


@settings(max_examples=300, deadline=None)
@given(
    center=st.sampled_from(CENTERS[:3]),
    g=st.sampled_from(GENERA),
    c=st.lists(st.integers(-10, 10), min_size=6, max_size=6),
)
def test_flop_pairing_matches_lattice_when_k_is_present(center, g, c):
    lat = build_lattice(FanoBase.prime(g), center)
    p = FlopPairing.from_lattice(lat)
    E = DivisorClass(E=1)
    x, y = (c[0], c[1]), (c[2], c[3])
    cls = lambda pq: pq[0] * lat.antiK + pq[1] * E
    assert p.triple((1, 0), x, y) == triple(lat, lat.antiK, cls(x), cls(y))


@settings(max_examples=300, deadline=None)
@given(g=st.sampled_from(GENERA), d=st.integers(1, 3), u=st.integers(-40, 40), v=st.integers(-40, 40))
def test_quadratic_and_linear_forms(g, d, u, v):
    lat = build_lattice(FanoBase.prime(g), CenterType.curve(d))
    p = FlopPairing.from_lattice(lat)
    D = u * lat.antiK - v * DivisorClass(E=1)
    assert p.quadratic(u, v) == triple(lat, D, D, lat.antiK)
    assert p.linear(u, v) == triple(lat, D, lat.antiK, lat.antiK)


def test_double_projection_flags():
    assert double_projection_numbers(7, 0).codimension == 1
    assert "hypersurface" in double_projection_numbers(7, 2).flags[0]
    d = double_projection_numbers(9, 3)
    assert (d.antiKcube, d.antiK2_Ehat, d.codimension) == (8, 1, 3)
    assert double_projection_numbers(12, 1).flags == ()
    with pytest.raises(ChowError):
        double_projection_numbers(6, 0)


def test_point_and_lines_lattice():
    lat = build_lattice(FanoBase.prime(9), CenterType.point(3))
    K = lat.antiK
    assert flop_constants(lat) == (8, 1, -2)
    for f in ("F1", "F2", "F3"):
        assert triple(lat, K, K, DivisorClass({f: 1})) == 1
