from fractions import Fraction
from itertools import combinations, product
from math import comb, prod

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from fanocheck import eulerchar as ec
from fanocheck.chow import FanoBase
from fanocheck.registry import default_registry

P3 = ec.Threefold.from_base(FanoBase(33, 4, 64), "P3")
Q3 = ec.Threefold.from_base(FanoBase(28, 3, 54), "Q3")
V5 = ec.Threefold.from_base(FanoBase(21, 2, 40), "V5")
PRIME = {g: ec.Threefold.from_base(FanoBase.prime(g)) for g in range(2, 13)}
ALL = [P3, Q3, V5, *PRIME.values()]


def _int_binom(n, k):
    # polynomial binomial, valid for negative n
    return Fraction(prod(n - j for j in range(k)), prod(range(1, k + 1)))


@pytest.mark.parametrize("n", range(-8, 9))
def test_projective_space(n):
    assert ec.threefold_chi(ec.line_bundle(P3, n)) == _int_binom(n + 3, 3)


@pytest.mark.parametrize("n", range(-8, 9))
def test_quadric(n):
    # O_Q(n) from 0 -> O_P4(n-2) -> O_P4(n) -> O_Q(n) -> 0
    assert ec.threefold_chi(ec.line_bundle(Q3, n)) == _int_binom(n + 4, 4) - _int_binom(n + 2, 4)


@pytest.mark.parametrize("g", range(2, 13))
@pytest.mark.parametrize("n", range(-4, 5))
def test_prime_fano_plurigenera(g, n):
    expected = Fraction((g - 1) * n * (n + 1) * (2 * n + 1), 6) + 2 * n + 1
    assert ec.threefold_chi(ec.line_bundle(PRIME[g], n)) == expected


def test_hyperplane_sections():
    assert ec.hyperplane_chi(FanoBase(21, 2, 40)) == 7
    assert ec.hyperplane_chi(FanoBase(33, 4, 64)) == 4
    assert ec.hyperplane_chi(FanoBase(28, 3, 54)) == 5
    assert ec.hyperplane_chi(FanoBase.prime(12)) == 14


_q = st.fractions(min_value=-50, max_value=50, max_denominator=12)


@st.composite
def characters(draw):
    X = draw(st.sampled_from(ALL))
    return ec.Character(X, *(sympy.Rational(str(draw(_q))) for _ in range(4)))


@settings(max_examples=300, deadline=None)
@given(F=characters())
def test_serre_duality(F):
    omega = ec.line_bundle(F.X, -F.X.index)
    assert ec.threefold_chi(F) == -ec.threefold_chi(F.dual().tensor(omega))


@settings(max_examples=200, deadline=None)
@given(F=characters(), n=st.integers(-5, 5), m=st.integers(-5, 5))
def test_twists_compose(F, n, m):
    assert ec.threefold_chi(F.twist(n).twist(m)) == ec.threefold_chi(F.twist(n + m))


@settings(max_examples=200, deadline=None)
@given(F=characters(), data=st.data())
def test_chern_data_round_trip(F, data):
    d = ec.ChernData.from_character(ec.Character(F.X, sympy.Integer(data.draw(st.integers(0, 6))), F.a, F.x, F.y))
    assert ec.ChernData.from_character(d.character()) == d


def test_chern_data_requires_ambient():
    with pytest.raises(ec.EulerCharError):
        ec.ChernData(2, Fraction(-16), Fraction(6), Fraction(0))


@pytest.mark.parametrize("X", [V5, PRIME[9], PRIME[10]])
@pytest.mark.parametrize("deg,genus", [(1, 0), (2, 0), (3, 0), (4, 1), (6, 2)])
def test_curve_sheaf_riemann_roch(X, deg, genus):
    C = ec.curve_sheaf(X, deg, genus)
    for n in range(-3, 4):
        assert ec.threefold_chi(C.twist(n)) == n * deg + 1 - genus


@settings(max_examples=300)
@given(r=st.integers(1, 8), k=st.integers(0, 8), d=st.integers(1, 12), c=st.integers(-3, 3))
def test_splitting_matches_curve_riemann_roch(r, k, d, c):
    k = min(k, r)
    assert ec.chi_via_splitting(r, k, ec.HilbertPolynomial.linear(d, c)) == ec.curve_euler(r, -k * d, 1 - c)


def test_splitting_range():
    with pytest.raises(ec.EulerCharError):
        ec.chi_via_splitting(2, 3, ec.HilbertPolynomial.linear(3))


def test_hilbert_polynomial_parsing():
    h = ec.HilbertPolynomial.parse("(t+1)*(t+2)/2")
    assert [h(n) for n in range(4)] == [1, 3, 6, 10]
    assert h == ec.HilbertPolynomial.binomial(2, 0)
    with pytest.raises(ec.EulerCharError):
        ec.HilbertPolynomial.parse("__import__('os')")
    assert str(ec.HilbertPolynomial.linear(3)) == "3*t + 1"


def _weyl_dim(weight):
    n = len(weight)
    num = prod(weight[i] - weight[j] + j - i for i, j in combinations(range(n), 2))
    den = prod(j - i for i, j in combinations(range(n), 2))
    return Fraction(num, den)


def _monomials(nvars, degree):
    return sum(1 for e in product(range(degree + 1), repeat=nvars) if sum(e) == degree)


ORACLES = {
    "Gr(2,5)": lambda s: _weyl_dim((s, s, 0, 0, 0)),
    "P1xP3": lambda s: _monomials(2, s) * _monomials(4, s),
    "v2(P2)": lambda s: _monomials(3, 2 * s),
    "v3(P1)": lambda s: _monomials(2, 3 * s),
    "P2xP3": lambda s: _monomials(3, s) * _monomials(4, s),
}


@pytest.mark.parametrize("name", sorted(ORACLES))
def test_registered_hilbert_polynomials_match_oracles(name):
    m = default_registry().models[name]
    for s in range(7):
        assert m.hilbert(s) == ORACLES[name](s)


@pytest.mark.parametrize("name", sorted(ORACLES))
def test_registered_hilbert_polynomials_integer_valued(name):
    assert default_registry().models[name].hilbert.is_integer_valued(range(-40, 41))


def test_resolutions_of_models():
    for m in default_registry().models.values():
        assert ec.n2_shape_check(m.betti)
        if m.betti.complete:
            assert ec.resolution_euler_check(m.betti, m.hilbert)
            assert ec.low_degree_euler_check(m.betti, m.hilbert, up_to=8)
        else:
            assert ec.low_degree_euler_check(m.betti, m.hilbert)
            with pytest.raises(ec.EulerCharError):
                ec.resolution_euler_check(m.betti, m.hilbert)


def test_truncated_table_detects_wrong_quadric_count():
    h = default_registry().models["P2xP3"].hilbert
    assert not ec.low_degree_euler_check(ec.BettiTable(11, ((0, 0, 1), (1, 2, 12), (2, 3, 52)), False), h)


def test_wrong_betti_number_fails():
    bad = ec.BettiTable(3, ((0, 0, 1), (1, 2, 3), (2, 3, 3)))
    assert not ec.resolution_euler_check(bad, ec.HilbertPolynomial.linear(3))
    assert not ec.n2_shape_check(ec.BettiTable(3, ((0, 0, 1), (1, 3, 2))))


def test_betti_validation():
    with pytest.raises(ec.EulerCharError):
        ec.BettiTable(3, ((1, 2, 3),))
    with pytest.raises(ec.EulerCharError):
        ec.BettiTable(3, ((0, 0, 1), (1, 2, 0)))


def test_two_conics():
    h = ec.resolution_polynomial(ec.CI_TWO_CONICS)
    assert h == ec.HilbertPolynomial.constant(4)


@pytest.mark.parametrize("g", (7, 8, 9, 10, 12))
def test_lines_through_point(g):
    b = ec.f1_length_bound(g)
    assert b.value == 3
    assert all(len(step) == 2 for step in b.trace)


def test_genus9_solver():
    p = ec.genus9_problem()
    U, E = p.sheaves["U"], p.sheaves["E"]
    assert (U.rank, U.c1H2, U.c2H, U.c3) == (3, -16, 8, -2)
    assert (E.rank, E.c1H2, E.c2H, E.c3) == (2, -16, 6, 0)
    assert all(c == e for _, c, e in p.checks)
    assert all(ec.sequence_is_additive(s) for s in p.sequences)


def test_genus10_solver():
    p = ec.genus10_problem()
    U, E = p.sheaves["U"], p.sheaves["E"]
    assert (U.rank, U.c1H2, U.c2H, U.c3) == (2, -18, 6, 0)
    assert (E.rank, E.c1H2, E.c2H, E.c3) == (3, -18, 9, -2)
    assert all(c == e for _, c, e in p.checks)
    assert all(ec.sequence_is_additive(s) for s in p.sequences)


def test_v4_solver_and_literal_sequence():
    p = ec.v4_problem()
    E = p.sheaves["E"]
    assert (E.rank, E.c1H2, E.c2H, E.c3) == (2, -4, 2, 0)
    assert all(c == e for _, c, e in p.checks)
    with pytest.raises(ec.InconsistentSystemError):
        ec.v4_problem(end_twist=1)


def test_solver_underdetermined():
    X = PRIME[9]
    U = ec.Unknown("U", 3, -1)
    with pytest.raises(ec.UnderdeterminedError):
        ec.chern_from_resolution(None, [ec.ChiConstraint.chi(U.character(X), 0)], [U], X)


def test_solver_rejects_nonlinear():
    X = PRIME[9]
    U = ec.Unknown("U", 3, -1)
    x, y = U.symbols()
    with pytest.raises(ec.EulerCharError):
        ec.chern_from_resolution(None, [ec.ChiConstraint(x * y, Fraction(1)), ec.ChiConstraint(x, Fraction(0))], [U], X)


def test_solver_recovers_line_bundle():
    # two twists pin down ch2 and ch3 of a line bundle
    X = PRIME[10]
    L = ec.Unknown("L", 1, -1)
    Lc = L.character(X)
    s = ec.chern_from_resolution(
        None,
        [ec.ChiConstraint.chi(Lc, -1), ec.ChiConstraint.chi(Lc.twist(-1), ec.threefold_chi(ec.line_bundle(X, -2)))],
        [L],
        X,
    )
    assert s["L"] == ec.ChernData.from_character(ec.line_bundle(X, -1))
