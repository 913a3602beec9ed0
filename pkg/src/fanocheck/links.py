"""Numerical classification of the extremal contraction after a flop.

Blow up ``X`` along a center, flop, and contract the other extremal ray
of the flopped blowup.  The contracted (or pulled back) divisor is
``D = u(-K) - vE`` and every intersection number of ``D`` with ``-K`` is
a polynomial in ``u, v`` through the flop constants ``(A, B, C)``:

    Q(u, v) = D^2.(-K)  = A u^2 - 2B uv + C v^2
    L(u, v) = D.(-K)^2  = A u - B v

Each contraction type imposes Diophantine conditions on ``(u, v)``:

    fibration       Q = 0,  gcd(u, v) = 1, fiber degree L in 1..9
    conic bundle    Q = 2,  gcd(u, v) = 1, discriminant degree 12 - L >= 0
    to a point      Q = -2, L = 2a with discrepancy a in {1/2, 1, 2}
    to a curve      (-K + D)^3 = Q(u+1, v) is a Fano degree allowed for index v

The search region is finite and derived per family (``derive_bounds``).
Whether a numerically admissible case actually occurs is geometry; it
is recorded as data in ``OUTCOMES``, never computed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Union

from .chow import CenterType, DivisorClass, FanoBase, FlopPairing, build_lattice

FAMILIES = ("fibration", "conic_bundle", "to_point", "to_curve")

# Anticanonical degrees of smooth Fano threefolds of Picard rank one, by index.
INDEX_DEGREES = {
    1: frozenset({2, 4, 6, 8, 10, 12, 14, 16, 18, 22}),
    2: frozenset({8, 16, 24, 32, 40}),
    3: frozenset({54}),
    4: frozenset({64}),
}
GORENSTEIN_DEGREES = (2, 4, 6, 8, 10, 12, 14, 16, 18, 22, 24, 32, 40, 54, 64)
DISCREPANCIES = (Fraction(1, 2), Fraction(1), Fraction(2))

CENTERS = {
    "line": CenterType.curve(1),
    "conic": CenterType.curve(2),
    "cubic": CenterType.curve(3),
    "point": CenterType.point(),
}
GENERA = (7, 9, 10, 12)


class LinksError(ValueError):
    pass


class UnboundedSearchError(LinksError):
    pass


@dataclass(frozen=True)
class DelPezzoFibration:
    u: int
    v: int
    fiber_degree: int


@dataclass(frozen=True)
class ConicBundle:
    u: int
    v: int
    disc_degree: int


@dataclass(frozen=True)
class DivisorialToPoint:
    u: int
    v: int
    discrepancy: Fraction

    def __post_init__(self):
        if self.discrepancy not in DISCREPANCIES:
            raise LinksError(f"discrepancy {self.discrepancy} not in {{1/2, 1, 2}}")


@dataclass(frozen=True)
class DivisorialToCurve:
    u: int
    v: int
    target_index: int
    target_antiKcube: int
    curve_degree: int
    curve_genus: int

    def __post_init__(self):
        if self.curve_genus < 0 or self.curve_degree <= 0:
            raise LinksError("curve must have genus >= 0 and positive degree")
        if self.target_antiKcube not in INDEX_DEGREES.get(self.target_index, ()):
            raise LinksError(
                f"(-K)^3 = {self.target_antiKcube} is not a degree of index {self.target_index}"
            )

    @property
    def target(self) -> str:
        return target_name(self.target_index, self.target_antiKcube)


Kind = Union[DelPezzoFibration, ConicBundle, DivisorialToPoint, DivisorialToCurve]

KIND_NAMES = {
    DelPezzoFibration: "fibration",
    ConicBundle: "conic_bundle",
    DivisorialToPoint: "to_point",
    DivisorialToCurve: "to_curve",
}


def target_name(index: int, cube: int) -> str:
    if index == 4:
        return "P^3"
    if index == 3:
        return "quadric threefold"
    if index == 2:
        return f"del Pezzo threefold V{cube // 8}"
    return f"prime Fano threefold of genus {cube // 2 + 1}"


@dataclass(frozen=True)
class Status:
    label: str  # "realized", "excluded" or "unclassified"
    reason: str = ""

    @property
    def excluded(self) -> bool:
        return self.label == "excluded"


REALIZED = "realized"
EXCLUDED = "excluded"
UNCLASSIFIED = Status("unclassified", "no outcome on record for this case")


@dataclass(frozen=True)
class ContractionCase:
    kind: Kind
    status: Status = UNCLASSIFIED

    @property
    def family(self) -> str:
        return KIND_NAMES[type(self.kind)]

    @property
    def signature(self) -> tuple:
        return (self.family, self.kind.u, self.kind.v)

    def describe(self) -> str:
        k = self.kind
        if isinstance(k, DelPezzoFibration):
            body = f"del Pezzo fibration of degree {k.fiber_degree}"
        elif isinstance(k, ConicBundle):
            body = f"conic bundle with discriminant of degree {k.disc_degree}"
        elif isinstance(k, DivisorialToPoint):
            body = f"contraction to a point, discrepancy {k.discrepancy}"
        else:
            body = (
                f"blowup of a curve of degree {k.curve_degree} and genus {k.curve_genus} "
                f"on a {k.target} ((-K)^3 = {k.target_antiKcube})"
            )
        return f"(u, v) = ({k.u}, {k.v}): {body}"


@dataclass(frozen=True)
class SearchBounds:
    u_max: int
    v_max: int
    justification: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.u_max < 1 or self.v_max < 1:
            raise LinksError("search bounds must be positive")


def pairing_for(g: int, center: CenterType) -> FlopPairing:
    return FlopPairing.from_lattice(build_lattice(FanoBase.prime(g), center))


def _ints(p: FlopPairing) -> tuple[int, int, int]:
    vals = (p.A, p.B, p.C)
    if any(Fraction(x).denominator != 1 for x in vals):
        raise UnboundedSearchError(f"non-integral flop constants {vals}")
    A, B, C = (int(x) for x in vals)
    if C != -2 or A <= 0 or B <= 0:
        raise UnboundedSearchError(f"bounds are derived for A > 0, B > 0, C = -2; got {(A, B, C)}")
    return A, B, C


def _max_root(alpha: int, beta: int, gamma: int) -> int | None:
    """Largest integer x with alpha x^2 - beta x - gamma <= 0, alpha > 0."""
    disc = beta * beta + 4 * alpha * gamma
    if disc < 0:
        return None
    x = (beta + isqrt(disc)) // (2 * alpha) + 2
    while alpha * x * x - beta * x - gamma > 0:
        x -= 1
    return x


def derive_bounds(g: int, center: CenterType, family: str) -> SearchBounds:
    """Finite search box containing every solution of a constraint family.

    With ``Delta = B^2 + 2A`` and ``w = 2v + Bu`` one has
    ``w^2 = Delta u^2 - 2Q`` and ``L (Delta u + B w) = A Delta u^2 + B^2 Q``.
    An upper bound on ``L`` therefore bounds ``u``, and ``w`` bounds ``v``.
    """
    if family not in FAMILIES:
        raise LinksError(f"unknown constraint family {family!r}")
    A, B, _ = _ints(pairing_for(g, center))
    delta = B * B + 2 * A
    notes = [f"(A, B, C) = ({A}, {B}, -2), Delta = B^2 + 2A = {delta}"]

    if family == "fibration":
        s = isqrt(delta)
        if s * s != delta:
            notes.append("Q = 0 forces w^2 = Delta u^2; Delta is not a square, so no solutions")
            return SearchBounds(1, 1, tuple(notes))
        ratio = Fraction(s - B, 2)
        if ratio <= 0:
            notes.append(f"Q = 0 forces v/u = {ratio} <= 0, so no positive solutions")
            return SearchBounds(1, 1, tuple(notes))
        notes.append(
            f"Q = 0 forces v/u = (sqrt(Delta) - B)/2 = {ratio}; gcd(u, v) = 1 leaves only "
            f"(u, v) = ({ratio.denominator}, {ratio.numerator})"
        )
        return SearchBounds(ratio.denominator, ratio.numerator, tuple(notes))

    if family == "to_curve":
        # A x^2 = T + 2Bxv + 2v^2 with x = u + 1, v <= 4 and T <= 64
        x = _max_root(A, 8 * B, 96)
        notes.append(f"x = u+1 satisfies {A}x^2 - {8 * B}x - 96 <= 0 (v <= 4, T <= 64), so x <= {x}")
        return SearchBounds(max(1, (x or 1) - 1), 4, tuple(notes))

    q, l_max = (2, 12) if family == "conic_bundle" else (-2, 4)
    notes.append(f"Q = {q} and L <= {l_max}")
    # w <= Delta u + |Q| gives A Delta u^2 + B^2 Q <= l_max ((1+B) Delta u + B |Q|)
    alpha = A * delta
    beta = l_max * (1 + B) * delta
    gamma = l_max * B * abs(q) - B * B * q
    u = _max_root(alpha, beta, gamma)
    if u is None or u < 1:
        notes.append("the u-inequality has no positive solution")
        return SearchBounds(1, 1, tuple(notes))
    notes.append(f"{alpha}u^2 - {beta}u - {gamma} <= 0 gives u <= {u}")
    w = isqrt(delta * u * u + 2 * abs(q))
    v = max(1, (w - B) // 2)
    notes.append(f"w^2 <= Delta u^2 + {2 * abs(q)} gives w <= {w}, hence v <= {v}")
    return SearchBounds(u, v, tuple(notes))


def _solve_at(A: int, B: int, C: int, family: str, u: int, v: int) -> Kind | None:
    Q = A * u * u - 2 * B * u * v + C * v * v
    L = A * u - B * v
    if family == "fibration":
        if Q == 0 and 1 <= L <= 9 and gcd(u, v) == 1:
            return DelPezzoFibration(u, v, L)
    elif family == "conic_bundle":
        if Q == 2 and L <= 12 and gcd(u, v) == 1:
            return ConicBundle(u, v, 12 - L)
    elif family == "to_point":
        if Q == -2 and L in (1, 2, 4):
            return DivisorialToPoint(u, v, Fraction(L, 2))
    elif family == "to_curve":
        if v > 4 or Q + L <= 0 or Q < -2 or Q % 2 or (Q + L) % v:
            return None
        x = u + 1
        cube = A * x * x - 2 * B * x * v + C * v * v
        if cube not in INDEX_DEGREES[v]:
            return None
        return DivisorialToCurve(u, v, v, cube, (Q + L) // v, (Q + 2) // 2)
    return None


def search(g: int, center: CenterType, family: str, u_max: int, v_max: int) -> list[Kind]:
    """All solutions of one family with ``1 <= u <= u_max``, ``1 <= v <= v_max``."""
    p = pairing_for(g, center)
    A, B, C = (int(x) for x in (p.A, p.B, p.C))
    out = []
    for u in range(1, u_max + 1):
        for v in range(1, v_max + 1):
            kind = _solve_at(A, B, C, family, u, v)
            if kind is not None:
                out.append(kind)
    return out


def _realized(note: str) -> Status:
    return Status(REALIZED, note)


def _excluded(note: str) -> Status:
    return Status(EXCLUDED, note)


# (center, genus) -> {(family, u, v): status}
OUTCOMES: dict[tuple[str, int], dict[tuple, Status]] = {
    ("line", 7): {
        ("fibration", 1, 1): _realized("line link g=7: quintic del Pezzo fibration"),
        ("to_curve", 1, 1): _excluded(
            "line link g=7: the geometric outcome is the del Pezzo fibration; "
            "the genus-10 target does not occur"
        ),
    },
    ("line", 9): {("to_curve", 3, 4): _realized("line link g=9: P^3, curve of degree 7 and genus 3")},
    ("line", 10): {("to_curve", 2, 3): _realized("line link g=10: quadric, curve of degree 7 and genus 2")},
    ("line", 12): {("to_curve", 1, 2): _realized("line link g=12: V5, rational curve of degree 5")},
    ("conic", 7): {
        ("to_curve", 5, 3): _realized("conic link g=7: quadric, curve of degree 10 and genus 7"),
        ("to_curve", 3, 2): _excluded(
            "conic link g=7: a cubic threefold target would make X geometrically rational"
        ),
    },
    ("conic", 9): {
        ("fibration", 1, 1): _realized("conic link g=9: sextic del Pezzo fibration"),
        ("to_curve", 1, 1): _excluded("conic link g=9: the divisorial case is impossible"),
    },
    ("conic", 10): {("conic_bundle", 1, 1): _realized("conic link g=10: conic bundle, discriminant of degree 4")},
    ("conic", 12): {("to_curve", 2, 3): _realized("conic link g=12: quadric, rational curve of degree 6")},
    ("cubic", 9): {("to_curve", 3, 2): _realized("twisted cubic link g=9: V5, curve of degree 9 and genus 3")},
    ("point", 7): {
        ("to_curve", 5, 2): _realized("point link g=7: V5, curve of degree 12 and genus 7"),
        ("to_point", 2, 1): _excluded("point link g=7: contraction to a point with discrepancy 2 is ruled out"),
        ("to_curve", 2, 1): _excluded("point link g=7: blowdown to a genus-6 Fano along a conic is ruled out"),
    },
    ("point", 9): {
        ("to_point", 1, 1): _realized("point link g=9: contraction to a point, target of the same type"),
        ("to_curve", 1, 1): _excluded("point link g=9: divisorial contraction onto a curve does not occur"),
        ("to_curve", 5, 4): _excluded("point link g=9: divisorial contraction onto a curve does not occur"),
    },
    ("point", 10): {
        ("fibration", 1, 1): _realized("point link g=10: sextic del Pezzo fibration"),
        ("to_curve", 1, 1): _excluded("point link g=10: divisorial contraction onto a curve does not occur"),
    },
    ("point", 12): {("to_curve", 3, 4): _realized("point link g=12: P^3, rational curve of degree 6")},
}


def enumerate_contractions(g: int, center: CenterType) -> list[ContractionCase]:
    """Every numerically admissible contraction type, with its recorded status."""
    if g not in GENERA:
        raise LinksError(f"genus must be one of {GENERA}, got {g}")
    if center.kind == "point" and center.lines:
        raise LinksError("links are classified for plain point centers")
    record = OUTCOMES.get((center.name, g), {})
    cases = []
    for family in FAMILIES:
        b = derive_bounds(g, center, family)
        for kind in search(g, center, family, b.u_max, b.v_max):
            status = record.get((family, kind.u, kind.v), UNCLASSIFIED)
            cases.append(ContractionCase(kind, status))
    return cases


def pushed_canonical(u: int, v: int) -> DivisorClass:
    """``(1 + u)K + vE+``, the pullback of the canonical class of the target.

    Generators are ``K`` and ``E+``; the ``E+``-coefficient is the index.
    """
    return DivisorClass({"K": 1 + u, "E+": v})


def pushed_anticanonical_cube(pairing: FlopPairing, u: int, v: int) -> Fraction:
    """``(-K_target)^3`` as ``(-K + D)^2.(-K)``.

    The pullback class ``P = -K + D`` satisfies ``P^2.D = 0`` because the
    contracted divisor maps onto a curve, so ``P^3 = P^2.(-K)`` and no
    ``E^3`` term is needed.
    """
    cls = pushed_canonical(u, v)
    P = (cls.coeff("K"), -cls.coeff("E+"))  # -cls in (-K, E) coordinates
    return pairing.triple(P, P, (1, 0))
