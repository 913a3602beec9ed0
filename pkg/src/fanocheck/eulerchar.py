"""Hilbert polynomials, Betti tables and Euler characteristics.

Threefold computations assume Picard rank one with ample generator ``H``,
Fano index ``i`` (so ``c1(X) = iH``) and ``chi(O_X) = 1``, hence
``c1(X).c2(X) = 24`` and ``c2(X).H = 24/i``.  A sheaf is recorded by its
numerical Chern character ``(r, a, ch2.H, ch3)`` with ``c1 = aH``, and

    chi(F) = ch3 + i/2 ch2.H + a (i^2 H^3 + c2(X).H)/12 + r.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from .chow import FanoBase

t = sympy.Symbol("t")


class EulerCharError(ValueError):
    pass


class UnderdeterminedError(EulerCharError):
    pass


class InconsistentSystemError(EulerCharError):
    pass


def _frac(x) -> Fraction:
    x = sympy.nsimplify(x) if not isinstance(x, (int, Fraction, sympy.Rational)) else x
    if isinstance(x, sympy.Rational):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    raise EulerCharError(f"not an exact rational: {x}")


def _rat(x) -> sympy.Rational:
    x = Fraction(x)
    return sympy.Rational(x.numerator, x.denominator)


# ---------------------------------------------------------------- polynomials

_POLY_TEXT = re.compile(r"^[0-9t+\-*/() ]+$")


@dataclass(frozen=True)
class HilbertPolynomial:
    """Univariate polynomial in the twist ``t``; coefficients low to high."""

    coeffs: tuple

    def __post_init__(self):
        cs = [Fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_expr(cls, expr) -> "HilbertPolynomial":
        poly = sympy.Poly(sympy.expand(expr), t)
        return cls(tuple(_frac(c) for c in reversed(poly.all_coeffs())))

    @classmethod
    def parse(cls, text: str) -> "HilbertPolynomial":
        if not _POLY_TEXT.match(text):
            raise EulerCharError(f"polynomial text may only use t, digits and + - * / ( ): {text!r}")
        return cls.from_expr(sympy.parse_expr(text, local_dict={"t": t}))

    @classmethod
    def constant(cls, c) -> "HilbertPolynomial":
        return cls((Fraction(c),))

    @classmethod
    def linear(cls, d, c=1) -> "HilbertPolynomial":
        return cls((Fraction(c), Fraction(d)))

    @classmethod
    def binomial(cls, n: int, twist: int) -> "HilbertPolynomial":
        """``binom(n + t - twist, n)``, the Hilbert polynomial of ``O_P^n(-twist)``."""
        expr = sympy.Integer(1)
        for j in range(1, n + 1):
            expr *= (t - twist + j) / sympy.Integer(j)
        return cls.from_expr(expr)

    @property
    def expr(self):
        return sum((_rat(c) * t**k for k, c in enumerate(self.coeffs)), sympy.Integer(0))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, value) -> Fraction:
        total, power = Fraction(0), Fraction(1)
        for c in self.coeffs:
            total += c * power
            power *= value
        return total

    def __add__(self, other: "HilbertPolynomial") -> "HilbertPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return HilbertPolynomial(tuple(x + y for x, y in zip(a, b)))

    def scale(self, k) -> "HilbertPolynomial":
        return HilbertPolynomial(tuple(Fraction(k) * c for c in self.coeffs))

    def is_integer_valued(self, window: Iterable[int] = range(-10, 11)) -> bool:
        return all(self(x).denominator == 1 for x in window)

    def __str__(self) -> str:
        return str(sympy.factor(self.expr)) if self.coeffs else "0"


# ---------------------------------------------------------------- Betti tables


@dataclass(frozen=True)
class BettiTable:
    """Graded free resolution ``... -> sum O(-d)^m -> ... -> O`` in ``P^n``.

    ``entries`` are ``(position, twist, multiplicity)``; ``complete`` is
    false when only the first few positions are known.
    """

    ambient_dim: int
    entries: tuple
    complete: bool = True

    def __post_init__(self):
        entries = tuple(sorted(tuple(int(x) for x in e) for e in self.entries))
        object.__setattr__(self, "entries", entries)
        zeros = [e for e in entries if e[0] == 0]
        if zeros != [(0, 0, 1)]:
            raise EulerCharError(f"position 0 must be exactly (0, 0, 1), got {zeros}")
        for i, d, m in entries:
            if i < 0 or m < 1:
                raise EulerCharError(f"bad entry {(i, d, m)}")

    def twists(self, position: int) -> list[int]:
        return [d for i, d, _ in self.entries if i == position]


def resolution_polynomial(B: BettiTable) -> HilbertPolynomial:
    total = HilbertPolynomial(())
    for i, d, m in B.entries:
        total = total + HilbertPolynomial.binomial(B.ambient_dim, d).scale((-1) ** i * m)
    return total


def resolution_euler_check(B: BettiTable, target: HilbertPolynomial) -> bool:
    """Alternating sum of the twisted Hilbert polynomials equals ``target``."""
    if not B.complete:
        raise EulerCharError("table is truncated; use n2_shape_check or low_degree_euler_check")
    return resolution_polynomial(B) == target


def low_degree_euler_check(B: BettiTable, target: HilbertPolynomial, up_to: int | None = None) -> bool:
    """Hilbert function check in degrees ``0..up_to`` for a truncated table.

    In a minimal resolution an unlisted position ``j`` only has twists
    ``>= j + 1``, so degrees up to one past the last listed position see
    every summand.  Listed positions are assumed complete.
    """
    last = max(i for i, _, _ in B.entries)
    if up_to is None:
        up_to = last + 1
    n = B.ambient_dim
    for deg in range(up_to + 1):
        value = sum(
            (-1) ** i * m * sympy.binomial(n + deg - d, n) for i, d, m in B.entries if d <= deg
        )
        if Fraction(int(value)) != target(deg):
            return False
    return True


def n2_shape_check(B: BettiTable) -> bool:
    """Quadric generators with linear first syzygies."""
    return all(d == 2 for d in B.twists(1)) and all(d == 3 for d in B.twists(2))


# ---------------------------------------------------------------- curves


def curve_euler(r: int, e: int, p_a: int) -> int:
    """Riemann-Roch on a curve: ``chi = deg + rank (1 - p_a)``."""
    return e + r * (1 - p_a)


def chi_via_splitting(r: int, k: int, h: HilbertPolynomial) -> int:
    """``chi`` of a rank-``r`` bundle numerically ``O^(r-k) + O(-1)^k`` on a curve with Hilbert polynomial ``h``."""
    if not 0 <= k <= r:
        raise EulerCharError("need 0 <= k <= r")
    value = (r - k) * h(0) + k * h(-1)
    if value.denominator != 1:
        raise EulerCharError(f"non-integral value {value}")
    return int(value)


# ---------------------------------------------------------------- threefolds


@dataclass(frozen=True)
class Threefold:
    """Constants of a Picard-rank-one Fano threefold with ``chi(O) = 1``."""

    index: int
    h3: Fraction
    name: str = ""

    @classmethod
    def from_base(cls, base: FanoBase, name: str = "") -> "Threefold":
        return cls(base.index, base.h_cube, name)

    @property
    def c2H(self) -> Fraction:
        return Fraction(24, self.index)


@dataclass(frozen=True)
class Character:
    """Numerical Chern character; entries may be symbolic while solving."""

    X: Threefold
    r: object
    a: object
    x: object  # ch2 . H
    y: object  # ch3

    def _new(self, r, a, x, y) -> "Character":
        return Character(self.X, *(sympy.expand(v) for v in (r, a, x, y)))

    def __add__(self, other: "Character") -> "Character":
        return self._new(self.r + other.r, self.a + other.a, self.x + other.x, self.y + other.y)

    def __neg__(self) -> "Character":
        return self._new(-self.r, -self.a, -self.x, -self.y)

    def __sub__(self, other: "Character") -> "Character":
        return self + (-other)

    def __rmul__(self, k: int) -> "Character":
        return self._new(k * self.r, k * self.a, k * self.x, k * self.y)

    def dual(self) -> "Character":
        return self._new(self.r, -self.a, self.x, -self.y)

    def tensor(self, other: "Character") -> "Character":
        h3 = _rat(self.X.h3)
        r = self.r * other.r
        a = self.r * other.a + other.r * self.a
        x = self.r * other.x + self.a * other.a * h3 + other.r * self.x
        y = self.r * other.y + self.a * other.x + self.x * other.a + other.r * self.y
        return self._new(r, a, x, y)

    __mul__ = tensor

    def twist(self, n: int) -> "Character":
        return self.tensor(line_bundle(self.X, n))

    def values(self) -> tuple:
        return (self.r, self.a, self.x, self.y)


def line_bundle(X: Threefold, n: int) -> Character:
    h3 = _rat(X.h3)
    return Character(X, sympy.Integer(1), sympy.Integer(n), n * n * h3 / 2, n**3 * h3 / 6)


def structure_sheaf(X: Threefold) -> Character:
    return line_bundle(X, 0)


def curve_sheaf(X: Threefold, degree: int, genus: int) -> Character:
    """``O_C`` for a curve of given degree and arithmetic genus."""
    y = 1 - genus - sympy.Rational(X.index * degree, 2)
    return Character(X, sympy.Integer(0), sympy.Integer(0), sympy.Integer(degree), y)


def chi_expr(F: Character):
    X = F.X
    i = X.index
    td2 = (i * i * _rat(X.h3) + _rat(X.c2H)) / 12
    return sympy.expand(F.y + sympy.Rational(i, 2) * F.x + F.a * td2 + F.r)


def pair_chi_expr(F: Character, G: Character):
    return chi_expr(F.dual().tensor(G))


@dataclass(frozen=True)
class ChernData:
    """Chern numbers ``(r, c1.H^2, c2.H, c3)`` on a polarised threefold."""

    rank: int
    c1H2: Fraction
    c2H: Fraction
    c3: Fraction
    ambient: Threefold = field(compare=False, default=None)

    def __post_init__(self):
        if self.ambient is None:
            raise EulerCharError("missing ambient constants (H^3, c2(X).H)")

    @classmethod
    def from_character(cls, F: Character) -> "ChernData":
        X = F.X
        r, a, x, y = (_frac(v) for v in F.values())
        if r.denominator != 1:
            raise EulerCharError("rank must be an integer")
        c2H = (a * a * X.h3 - 2 * x) / 2
        c3 = (6 * y - a**3 * X.h3 + 3 * a * c2H) / 3
        return cls(int(r), a * X.h3, c2H, c3, X)

    def character(self) -> Character:
        X = self.ambient
        a = self.c1H2 / X.h3
        x = (a * a * X.h3 - 2 * self.c2H) / 2
        y = (a**3 * X.h3 - 3 * a * self.c2H + 3 * self.c3) / 6
        return Character(X, sympy.Integer(self.rank), _rat(a), _rat(x), _rat(y))


def threefold_chi(F) -> Fraction:
    """Hirzebruch-Riemann-Roch for ``ChernData`` or a numeric ``Character``."""
    ch = F.character() if isinstance(F, ChernData) else F
    return _frac(chi_expr(ch))


def pair_chi(F, G) -> Fraction:
    """``chi(F, G) = chi(F^dual (x) G)``; the dual flips the signs of ``c1`` and ``ch3``."""
    f = F.character() if isinstance(F, ChernData) else F
    g = G.character() if isinstance(G, ChernData) else G
    return _frac(pair_chi_expr(f, g))


# ---------------------------------------------------------------- solving for Chern numbers


@dataclass(frozen=True)
class Unknown:
    """A sheaf of known rank and ``c1 = aH`` whose ``ch2.H`` and ``ch3`` are sought."""

    name: str
    rank: int
    a: int

    def character(self, X: Threefold) -> Character:
        x, y = sympy.symbols(f"x_{self.name} y_{self.name}")
        return Character(X, sympy.Integer(self.rank), sympy.Integer(self.a), x, y)

    def symbols(self):
        return sympy.symbols(f"x_{self.name} y_{self.name}")


@dataclass(frozen=True)
class ResolutionSpec:
    """Exact sequence ``0 -> T0 -> T1 -> ... -> Tn -> 0`` of characters."""

    terms: tuple
    label: str = ""

    def alternating_sum(self) -> Character:
        total = None
        for i, term in enumerate(self.terms):
            signed = term if i % 2 == 0 else -term
            total = signed if total is None else total + signed
        return total


@dataclass(frozen=True)
class ChiConstraint:
    expr: object
    target: Fraction
    label: str = ""

    @classmethod
    def chi(cls, F: Character, target, label: str = "") -> "ChiConstraint":
        return cls(chi_expr(F), Fraction(target), label)

    @classmethod
    def pair(cls, F: Character, G: Character, target, label: str = "") -> "ChiConstraint":
        return cls(pair_chi_expr(F, G), Fraction(target), label)


@dataclass(frozen=True)
class Solution:
    values: dict
    equations: tuple
    rank: int
    n_unknowns: int

    def __getitem__(self, name: str) -> ChernData:
        return self.values[name]


def chern_from_resolution(
    seq: ResolutionSpec | None,
    orthogonality: Sequence[ChiConstraint],
    unknowns: Sequence[Unknown],
    X: Threefold,
) -> Solution:
    """Solve for the unknown ``ch2.H, ch3`` from a resolution and chi constraints.

    The resolution contributes one equation per component of the
    alternating sum; each constraint contributes ``chi = target``.  The
    system must be linear in the unknowns (solve products of two unknown
    sheaves in an earlier stage), of full column rank and consistent.
    """
    syms = [s for u in unknowns for s in u.symbols()]
    eqs, labels = [], []
    if seq is not None:
        total = seq.alternating_sum()
        for comp, val in zip(("rank", "c1", "ch2.H", "ch3"), total.values()):
            eqs.append(sympy.expand(val))
            labels.append(f"{seq.label or 'resolution'}: alternating {comp} = 0")
    for c in orthogonality:
        eqs.append(sympy.expand(c.expr - _rat(c.target)))
        labels.append(f"{c.label or 'chi'} = {c.target}")
    for e in eqs:
        if syms and sympy.Poly(e, *syms).total_degree() > 1:
            raise EulerCharError(f"equation {e} = 0 is not linear; solve an earlier stage first")
    M, b = sympy.linear_eq_to_matrix(eqs, syms) if syms else (sympy.zeros(len(eqs), 0), sympy.Matrix([-e for e in eqs]))
    rank = M.rank()
    aug = M.row_join(b).rank()
    shown = tuple(f"{lab}: {sympy.sstr(e)} = 0" for lab, e in zip(labels, eqs))
    if aug > rank:
        raise InconsistentSystemError("inconsistent system:\n  " + "\n  ".join(shown))
    if rank < len(syms):
        raise UnderdeterminedError(
            f"rank {rank} < {len(syms)} unknowns:\n  " + "\n  ".join(shown)
        )
    sol = sympy.solve(eqs, syms, dict=True) if syms else [{}]
    if len(sol) != 1:
        raise InconsistentSystemError("no unique solution")
    values = {}
    for u in unknowns:
        ch = u.character(X)
        ch = Character(X, ch.r, ch.a, ch.x.subs(sol[0]), ch.y.subs(sol[0]))
        values[u.name] = ChernData.from_character(ch)
    return Solution(values, shown, rank, len(syms))


# ---------------------------------------------------------------- resolution problems


@dataclass(frozen=True)
class RRProblem:
    """Staged Chern-number problem for one family, plus derived chi checks."""

    family: str
    X: Threefold
    sheaves: dict
    solutions: tuple
    checks: tuple  # (label, computed, expected)
    sequences: tuple = ()  # numeric exact sequences, after solving


def _numeric(data: ChernData) -> Character:
    return data.character()


def genus9_problem() -> RRProblem:
    """Prime Fano threefold of genus 9 with its rank-3 and rank-2 bundles."""
    X = Threefold.from_base(FanoBase.prime(9), "X16")
    O = structure_sheaf(X)
    U = Unknown("U", 3, -1)
    Uc = U.character(X)
    s1 = chern_from_resolution(
        None,
        [ChiConstraint.chi(Uc.dual(), 6, "chi(U^dual) = dim V6"), ChiConstraint.chi(Uc, 0, "chi(U)")],
        [U],
        X,
    )
    Un = _numeric(s1["U"])
    E = Unknown("E", 2, -1)
    Ec = E.character(X)
    seq = ResolutionSpec((Ec, 6 * O, 2 * Un.dual(), Ec.dual()), "0 -> E -> O^6 -> (U^dual)^2 -> E^dual -> 0")
    s2 = chern_from_resolution(
        seq,
        [ChiConstraint.chi(Ec, 0, "chi(O, E)"), ChiConstraint.pair(Un.dual(), Ec, 0, "chi(U^dual, E)")],
        [E],
        X,
    )
    En = _numeric(s2["E"])
    solved = ResolutionSpec((En, 6 * O, 2 * Un.dual(), En.dual()), seq.label)
    checks = (("chi(E^dual)", threefold_chi(En.dual()), Fraction(6)),)
    return RRProblem("X16", X, {"U": s1["U"], "E": s2["E"]}, (s1, s2), checks, (solved,))


def genus10_problem() -> RRProblem:
    """Prime Fano threefold of genus 10 with its rank-2 and rank-3 bundles."""
    X = Threefold.from_base(FanoBase.prime(10), "X18")
    O = structure_sheaf(X)
    U = Unknown("U", 2, -1)
    Uc = U.character(X)
    s1 = chern_from_resolution(
        None,
        [ChiConstraint.chi(Uc.dual(), 7, "chi(U^dual) = dim V7"), ChiConstraint.chi(Uc, 0, "chi(U)")],
        [U],
        X,
    )
    Un = _numeric(s1["U"])
    E = Unknown("E", 3, -1)
    Ec = E.character(X)
    seq = ResolutionSpec(
        (Ec, 6 * O, 3 * Un.dual(), Ec.twist(1)), "0 -> E -> O^6 -> (U^dual)^3 -> E(1) -> 0"
    )
    s2 = chern_from_resolution(
        seq,
        [ChiConstraint.chi(Ec, 0, "chi(O, E)"), ChiConstraint.pair(Un.dual(), Ec, 0, "chi(U^dual, E)")],
        [E],
        X,
    )
    En = _numeric(s2["E"])
    solved = ResolutionSpec((En, 6 * O, 3 * Un.dual(), En.twist(1)), seq.label)
    FC = Un + O - curve_sheaf(X, 3, 0)
    omega = line_bundle(X, -X.index)
    twisted = Un.tensor(En.dual()).tensor(omega)
    second = ResolutionSpec(
        (twisted, 3 * Un.tensor(Un), 6 * Un, Un.tensor(En.dual())),
        "0 -> U (x) E^dual(-1) -> (U (x) U)^3 -> U^6 -> U (x) E^dual -> 0",
    )
    checks = (
        ("chi(E, F_C)", pair_chi(En, FC), Fraction(0)),
        ("chi(U (x) E^dual (x) omega)", threefold_chi(twisted), Fraction(-3)),
    )
    return RRProblem("X18", X, {"U": s1["U"], "E": s2["E"]}, (s1, s2), checks, (solved, second))


def v4_resolution(X: Threefold, E: Character, end_twist: int) -> ResolutionSpec:
    O = structure_sheaf(X)
    return ResolutionSpec(
        (E, 4 * O, 4 * line_bundle(X, 1), E.twist(end_twist)),
        f"0 -> E -> O^4 -> O(1)^4 -> E({end_twist}) -> 0",
    )


def v4_problem(end_twist: int = 2) -> RRProblem:
    """Intersection of two quadrics with its rank-2 bundle.

    The sequence has to end in ``E (x) omega^(-1) = E(2)``: with ``E(1)``
    the first Chern classes do not cancel and the solver rejects it.
    """
    X = Threefold.from_base(FanoBase(genus=17, index=2, hcube=32), "V4")
    E = Unknown("E", 2, -1)
    Ec = E.character(X)
    seq = v4_resolution(X, Ec, end_twist)
    s = chern_from_resolution(
        seq,
        [ChiConstraint.chi(Ec, 0, "chi(O, E)"), ChiConstraint.chi(Ec.twist(-1), 0, "chi(O(1), E)")],
        [E],
        X,
    )
    En = _numeric(s["E"])
    omega = line_bundle(X, -X.index)
    target = line_bundle(X, -1).tensor(En.dual()).tensor(omega)
    checks = (("chi(O(-1) (x) E^dual (x) omega)", threefold_chi(target), Fraction(-4)),)
    return RRProblem("V4", X, {"E": s["E"]}, (s,), checks, (v4_resolution(X, En, end_twist),))


def hyperplane_chi(base: FanoBase, name: str = "") -> Fraction:
    X = Threefold.from_base(base, name)
    return threefold_chi(line_bundle(X, 1))


def sequence_is_additive(seq: ResolutionSpec) -> bool:
    """Alternating chi-sum of a numeric exact sequence vanishes."""
    return sum(((-1) ** i) * threefold_chi(T) for i, T in enumerate(seq.terms)) == 0


# ---------------------------------------------------------------- lines through a point

CI_TWO_CONICS = BettiTable(2, ((0, 0, 1), (1, 2, 2), (2, 4, 1)))


@dataclass(frozen=True)
class F1Bound:
    genus: int
    value: int
    trace: tuple


def f1_length_bound(g: int, model=None) -> F1Bound:
    """Upper bound for the length of the scheme of lines through a general point.

    The lines through ``x`` are cut out in a plane section of the F1
    model by two conics, so Bezout caps the length at 4.  A model with
    quadric generators and linear syzygies has no finite plane section of
    length 4, and positive-dimensional intersections would give surfaces
    of too small degree on ``X``.
    """
    if g < 7:
        raise EulerCharError(f"the F1 models are listed for g >= 7, got {g}")
    if model is None:
        from .registry import f1_model_for_genus

        model = f1_model_for_genus(g)
    trace = []
    cap = CI_TWO_CONICS
    ci_len = resolution_polynomial(cap)
    if ci_len.degree > 0:
        raise EulerCharError("two conics in the plane should meet in a finite scheme")
    bound = int(ci_len(0))
    trace.append(
        (f"two conics in a plane meet in length {bound} (Hilbert polynomial {ci_len})",
         "Bezout bound via the Koszul resolution 0 -> O(-4) -> O(-2)^2 -> O")
    )
    if n2_shape_check(model.betti):
        bound -= 1
        trace.append(
            (f"{model.name} in {model.homogeneous} satisfies N2, so no plane section of length 4",
             "tetragonal exclusion for varieties with property N2")
        )
    trace.append(
        ("no line or conic components: X has no surfaces of degree below 2g-2",
         "absence of low-degree surfaces on prime Fano threefolds")
    )
    return F1Bound(g, bound, tuple(trace))
