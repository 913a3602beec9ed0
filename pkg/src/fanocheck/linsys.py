"""Riemann-Roch dimension counts for linear systems on blowups.

``|aH - bE|`` is bounded below by peeling off one order of vanishing
along ``E`` at a time: passing from ``b`` to ``b + 1`` costs at most
``h0(E, O_E(aH - bE))`` conditions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .chow import BlowupLattice, CenterType, DivisorClass, FanoBase, build_lattice, triple


class LinsysError(ValueError):
    pass


def dim_pluri(g: int, a: int) -> int:
    """``dim |aH|`` on a prime Fano threefold of genus ``g``."""
    if a not in (1, 2, 3):
        raise LinsysError(f"only a in 1..3 is supported, got {a}")
    if g < 6:
        raise LinsysError(f"genus must be at least 6, got {g}")
    return {1: g + 1, 2: 5 * g - 1, 3: 14 * g - 8}[a]


def h0_exceptional(center: CenterType, a: int, b: int) -> int:
    """Sections of ``O_E(aH - bE)`` on the exceptional divisor.

    For a curve of degree ``d`` the divisor is the projectivised normal
    bundle, for a point it is a plane.  The curve formula relies on a
    vanishing that is only available for ``b <= a``.
    """
    if a < 0 or b < 0:
        raise LinsysError("a and b must be nonnegative")
    if center.kind == "point":
        return (b + 1) * (b + 2) // 2
    if b > a:
        raise LinsysError(f"vanishing not guaranteed for b = {b} > a = {a}")
    value = (b + 1) * ((a - Fraction(b, 2)) * center.degree + b + 1)
    if value.denominator != 1:
        raise LinsysError(f"non-integral h0 {value}")
    return int(value)


@dataclass(frozen=True)
class DimBound:
    a: int
    b: int
    value: int
    exact: bool
    raw: int = 0
    trace: tuple = field(default=(), compare=False)


def _is_stated_equality(center: CenterType, a: int, b: int) -> bool:
    if b == 0:
        return True
    if center.kind == "curve":
        return (a, b) == (1, 1)
    return (a, b) == (1, 2)


def dim_bound(g: int, center: CenterType, a: int, b: int) -> DimBound:
    """Lower bound for ``dim |aH - bE|`` by unit steps from ``|aH|``.

    ``raw`` is the unclamped count; ``value`` never drops below -1.
    """
    if b < 0:
        raise LinsysError("b must be nonnegative")
    if center.kind == "curve" and b > a + 1:
        raise LinsysError(f"(a, b) = ({a}, {b}) is unreachable: needs steps with b > a")
    value = dim_pluri(g, a)
    trace = [f"dim |{a}H| = {value}"]
    for step in range(b):
        cost = h0_exceptional(center, a, step)
        value -= cost
        trace.append(f"|{a}H - {step + 1}E|: subtract h0(O_E({a}H - {step}E)) = {cost} -> {value}")
    raw = value
    if value < -1:
        trace.append(f"raw bound {value} is vacuous, clamped to -1")
        value = -1
    return DimBound(a, b, value, _is_stated_equality(center, a, b), raw, tuple(trace))


# (a, b, coefficient of g, constant, stated as equality)
STATED_BOUNDS = {
    "conic": ((1, 1, 1, -2, True), (1, 2, 1, -8, False), (2, 3, 5, -31, False)),
    "cubic": ((1, 1, 1, -3, True), (2, 3, 5, -39, False)),
    "point": ((1, 2, 1, -3, True), (1, 3, 1, -9, False), (2, 5, 5, -35, False), (3, 7, 14, -92, False)),
}


def fixed_component_class(g: int, center: CenterType) -> DivisorClass:
    """The ray ``H - xE`` with ``(-K)^2 . D = 0``, normalised to ``H``-coefficient 1."""
    lat = build_lattice(FanoBase.prime(g), center)
    k = lat.antiK
    kkh = triple(lat, k, k, DivisorClass(H=1))
    kke = triple(lat, k, k, DivisorClass(E=1))
    if kke == 0:
        raise LinsysError("degenerate form: (-K)^2.E = 0")
    return DivisorClass(H=1, E=-kkh / kke)


def component_multiplier(cls: DivisorClass) -> int:
    """Smallest positive integer ``t`` making ``t * cls`` integral."""
    return lcm(*(c.denominator for _, c in cls.terms)) if cls.terms else 1


def kills_anticanonical_square(lat: BlowupLattice, cls: DivisorClass) -> bool:
    return triple(lat, lat.antiK, lat.antiK, cls) == 0


@dataclass(frozen=True)
class GenusDegree:
    index: int
    genus: int
    kcube: int
    degree: int
    h0_H: int


def genus_degree(*, genus: int | None = None, antik_cube: int | None = None, index: int = 1) -> GenusDegree:
    """Convert between genus, ``K^3`` and the degree of the ample generator.

    The genus is ``1 - K^3/2`` for every index; for index 2 the degree is
    ``(-K)^3/8`` and ``h0(O(H)) = degree + 2``.
    """
    if index == 1:
        if genus is None and antik_cube is None:
            raise LinsysError("need genus or (-K)^3")
        if genus is None:
            if antik_cube % 2:
                raise LinsysError(f"(-K)^3 = {antik_cube} gives a non-integral genus")
            genus = antik_cube // 2 + 1
        if antik_cube is not None and antik_cube != 2 * genus - 2:
            raise LinsysError("inconsistent genus and (-K)^3")
        return GenusDegree(1, genus, 2 - 2 * genus, 2 * genus - 2, genus + 2)
    if index == 2:
        if antik_cube is None:
            if genus is None:
                raise LinsysError("need (-K)^3 for index 2")
            antik_cube = 2 * genus - 2
        if antik_cube % 8:
            raise LinsysError(f"(-K)^3 = {antik_cube} is not divisible by 8")
        d = antik_cube // 8
        return GenusDegree(2, antik_cube // 2 + 1, -antik_cube, d, d + 2)
    raise LinsysError(f"index {index} is not supported")


@dataclass(frozen=True)
class DpPair:
    a: int
    d: int

    def __post_init__(self):
        if self.a < 1 or self.d < 1:
            raise LinsysError("a and d must be positive")


@dataclass(frozen=True)
class DpNumerology:
    Scube: Fraction
    S2M: int
    SM2: int
    Mcube: int
    dimM: int
    feasible: bool


def dp_pair_numerology(p: DpPair) -> DpNumerology:
    """Intersection numbers of ``S`` and ``M = aS`` when ``M`` has del Pezzo degree ``d``."""
    a, d = p.a, p.d
    return DpNumerology(
        Scube=Fraction(d, a),
        S2M=d,
        SM2=d * a,
        Mcube=d * a * a,
        dimM=1 + d * a * (a + 1) // 2,
        feasible=d * a * (a + 1) >= 4,
    )

