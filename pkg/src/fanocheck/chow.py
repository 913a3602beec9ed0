"""Trilinear intersection forms on blowups of Fano threefolds.

A blowup ``X~ -> X`` of a Fano threefold with Picard group generated by
``H`` is blown up along a point or a smooth curve of degree ``d <= 3``;
for point centers the strict transforms of ``k`` lines through the point
may be blown up as well.  The Picard lattice is spanned by ``H``, ``E``
and ``F1..Fk``.  Everything is exact (``fractions.Fraction``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction]


class ChowError(ValueError):
    """Invalid input to an intersection-theoretic operation."""


class FlopUndefinedError(ChowError):
    """Raised when a pairing is not determined on the flopped side."""


@dataclass(frozen=True)
class FanoBase:
    """A Fano threefold through its numerical invariants.

    ``hcube`` is the anticanonical degree ``(-K)^3``; ``index`` is the
    Fano index, so the ample generator ``H`` satisfies ``-K = index*H``.
    """

    genus: int
    index: int = 1
    hcube: int = 0

    def __post_init__(self):
        if self.genus < 1:
            raise ChowError(f"genus must be positive, got {self.genus}")
        if self.index not in (1, 2, 3, 4):
            raise ChowError(f"index must lie in 1..4, got {self.index}")
        if self.hcube <= 0:
            raise ChowError(f"(-K)^3 must be positive, got {self.hcube}")
        if self.index == 1 and self.hcube != 2 * self.genus - 2:
            raise ChowError(
                f"index 1 requires (-K)^3 = 2g-2 = {2 * self.genus - 2}, got {self.hcube}"
            )

    @classmethod
    def prime(cls, genus: int) -> "FanoBase":
        return cls(genus=genus, index=1, hcube=2 * genus - 2)

    @property
    def h_cube(self) -> Fraction:
        """``H^3`` for the ample generator."""
        return Fraction(self.hcube, self.index**3)


@dataclass(frozen=True)
class CenterType:
    """Blowup center: a point (plus ``lines`` line blowups) or a curve of given degree."""

    kind: str
    degree: int = 0
    lines: int = 0

    def __post_init__(self):
        if self.kind not in ("point", "curve"):
            raise ChowError(f"unknown center kind {self.kind!r}")
        if self.kind == "curve":
            if self.degree not in (1, 2, 3):
                raise ChowError(f"curve centers have degree 1, 2 or 3, got {self.degree}")
            if self.lines:
                raise ChowError("line blowups are only defined for point centers")
        else:
            if self.degree:
                raise ChowError("point centers carry no degree")
            if self.lines not in (0, 1, 2, 3):
                raise ChowError(f"number of lines must be in 0..3, got {self.lines}")

    @classmethod
    def point(cls, lines: int = 0) -> "CenterType":
        return cls("point", 0, lines)

    @classmethod
    def curve(cls, degree: int) -> "CenterType":
        return cls("curve", degree)

    @property
    def name(self) -> str:
        if self.kind == "point":
            return "point" if not self.lines else f"point+{self.lines}lines"
        return {1: "line", 2: "conic", 3: "cubic"}[self.degree]


@dataclass(frozen=True)
class DivisorClass:
    """Integer or rational combination of named generators."""

    terms: tuple = ()

    def __init__(self, coeffs: Mapping[str, Number] | Iterable = (), **kw: Number):
        merged: dict[str, Fraction] = {}
        items = list(coeffs.items()) if isinstance(coeffs, Mapping) else list(coeffs)
        for name, c in items + list(kw.items()):
            merged[name] = merged.get(name, Fraction(0)) + Fraction(c)
        object.__setattr__(
            self, "terms", tuple(sorted((n, c) for n, c in merged.items() if c != 0))
        )

    @property
    def coeffs(self) -> dict[str, Fraction]:
        return dict(self.terms)

    def coeff(self, name: str) -> Fraction:
        return self.coeffs.get(name, Fraction(0))

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(list(self.terms) + list(other.terms))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass([(n, -c) for n, c in self.terms])

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + (-other)

    def __rmul__(self, scalar: Number) -> "DivisorClass":
        return DivisorClass([(n, Fraction(scalar) * c) for n, c in self.terms])

    __mul__ = __rmul__

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        order = {"H": 0, "E": 1}
        for n, c in sorted(self.terms, key=lambda t: (order.get(t[0], 2), t[0])):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = n if mag == 1 else f"{mag}{n}" if mag.denominator == 1 else f"({mag}){n}"
            out += f" {sign} {body}" if out else (f"-{body}" if c < 0 else body)
        return out


@dataclass(frozen=True)
class BlowupLattice:
    base: FanoBase
    center: CenterType
    basis: tuple
    form: Mapping = field(repr=False)
    antiK: DivisorClass = DivisorClass()

    def value(self, a: str, b: str, c: str) -> Fraction:
        key = tuple(sorted((a, b, c)))
        try:
            return self.form[key]
        except KeyError:
            raise ChowError(f"unknown generator in {key}") from None


def build_lattice(base: FanoBase, center: CenterType) -> BlowupLattice:
    """Populate the full symmetric trilinear form of the blowup.

    For the point-plus-lines lattice the products involving ``Fi`` follow
    from three facts: pullbacks of two classes meet ``Fi`` trivially; a
    pullback ``D`` meets ``Fi^2`` in ``-D.li`` where ``li`` is the strict
    transform of the line (``H.li = E.li = 1``); and ``Fi^3 = 3``.
    """
    if base.index != 1:
        raise ChowError("blowup lattices are built over prime Fano threefolds (index 1)")
    h3 = Fraction(2 * base.genus - 2)
    lines = [f"F{i}" for i in range(1, center.lines + 1)]
    basis = ("H", "E", *lines)
    if center.kind == "curve":
        d = center.degree
        table = {("H", "H", "H"): h3, ("E", "H", "H"): 0, ("E", "E", "H"): -d, ("E", "E", "E"): 2 - d}
        antiK = DivisorClass(H=1, E=-1)
    else:
        table = {("H", "H", "H"): h3, ("E", "H", "H"): 0, ("E", "E", "H"): 0, ("E", "E", "E"): 1}
        antiK = DivisorClass({"H": 1, "E": -2, **{f: -1 for f in lines}})
    form: dict[tuple, Fraction] = {}
    for key in combinations_with_replacement(sorted(basis), 3):
        fs = [x for x in key if x.startswith("F")]
        if not fs:
            form[key] = Fraction(table[key])
        elif len(set(fs)) > 1:
            form[key] = Fraction(0)
        elif len(fs) == 1:
            form[key] = Fraction(0)
        elif len(fs) == 2:
            form[key] = Fraction(-1)
        else:
            form[key] = Fraction(3)
    return BlowupLattice(base, center, basis, form, antiK)


def triple(lat: BlowupLattice, a: DivisorClass, b: DivisorClass, c: DivisorClass) -> Fraction:
    """Multilinear extension of the intersection form."""
    for cls in (a, b, c):
        for name, _ in cls.terms:
            if name not in lat.basis:
                raise ChowError(f"unknown generator {name!r}; basis is {lat.basis}")
    total = Fraction(0)
    for (x, cx), (y, cy), (z, cz) in product(a.terms, b.terms, c.terms):
        total += cx * cy * cz * lat.value(x, y, z)
    return total


def flop_constants(lat: BlowupLattice) -> tuple[Fraction, Fraction, Fraction]:
    """``(A, B, C) = ((-K)^3, (-K)^2.E, (-K).E^2)``.

    These survive the flop, so they are the pairings available on the
    flopped side.
    """
    k, e = lat.antiK, DivisorClass(E=1)
    return triple(lat, k, k, k), triple(lat, k, k, e), triple(lat, k, e, e)


@dataclass(frozen=True)
class FlopPairing:
    """Intersection numbers on the flopped blowup.

    Classes are pairs ``(p, q)`` meaning ``p(-K) + qE``.  Every monomial
    containing ``-K`` transfers across the flop; ``E^3`` does not and is
    refused.
    """

    A: Fraction
    B: Fraction
    C: Fraction

    @classmethod
    def from_lattice(cls, lat: BlowupLattice) -> "FlopPairing":
        return cls(*flop_constants(lat))

    def triple(self, x: tuple, y: tuple, z: tuple) -> Fraction:
        values = {0: self.A, 1: self.B, 2: self.C}
        total = Fraction(0)
        for pick in product((0, 1), repeat=3):
            coeff = Fraction(1)
            for cls, slot in zip((x, y, z), pick):
                coeff *= Fraction(cls[slot])
            if coeff == 0:
                continue
            n_e = sum(pick)
            if n_e == 3:
                raise FlopUndefinedError("E^3 on the flopped side is not determined by the flop")
            total += coeff * values[n_e]
        return total

    def quadratic(self, u: Number, v: Number) -> Fraction:
        """``D^2.(-K)`` for ``D = u(-K) - vE``."""
        return self.A * u * u - 2 * self.B * u * v + self.C * v * v

    def linear(self, u: Number, v: Number) -> Fraction:
        """``D.(-K)^2`` for ``D = u(-K) - vE``."""
        return self.A * u - self.B * v


@dataclass(frozen=True)
class DoubleProjection:
    genus: int
    lines: int
    antiKcube: Fraction
    antiK2_F: Fraction
    antiK2_Ehat: Fraction
    degree_constraint: int
    codimension: int
    factorizations: tuple
    flags: tuple = ()


def double_projection_numbers(g: int, k: int) -> DoubleProjection:
    """Degrees on the blowup of a point and ``k`` lines through it."""
    if g < 7:
        raise ChowError(f"double projection numerics need g >= 7, got {g}")
    lat = build_lattice(FanoBase.prime(g), CenterType.point(k))
    K = lat.antiK
    cube = triple(lat, K, K, K)
    f_values = {triple(lat, K, K, DivisorClass({f: 1})) for f in lat.basis[2:]}
    if len(f_values) > 1:
        raise ChowError("line classes disagree")
    antiK2_F = f_values.pop() if f_values else Fraction(1)
    ehat = triple(lat, K, K, DivisorClass(E=1))
    dc = 2 * g - 10
    facts = ((1, dc), (2, dc // 2)) if dc % 2 == 0 else ((1, dc),)
    # lines through x lie in every member of |H - 2E|, so the image spans P^(g-3)
    codim = g - 6
    flags = []
    if codim == 1:
        flags.append(f"degree {dc}, codimension 1 => hypersurface of degree {dc} in P^{g - 3}")
    elif cube == 2**codim:
        flags.append(
            f"degree {dc}, codimension {codim} => complete intersection of {codim} quadrics"
        )
    return DoubleProjection(g, k, cube, antiK2_F, ehat, dc, codim, facts, tuple(flags))
