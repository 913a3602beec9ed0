"""Torsor-class arithmetic in a cyclic group.

The classes involved are all multiples of one generator ``[Pic^1]`` of a
curve of genus ``g(G)``, so the group is modelled as ``Z`` modulo the
relations that the generator is known to satisfy.  ``N = 2g(G) - 2`` is
always one of them (the canonical class has degree ``N``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Mapping, Sequence


class TorsorError(ValueError):
    pass


@dataclass(frozen=True)
class TorsorSetup:
    d_c: int
    d_tor: int
    N: int

    def __post_init__(self):
        if self.d_c < 1 or self.d_tor < 1:
            raise TorsorError("d_c and d_tor must be positive")
        if self.N < 2 or self.N % 2:
            raise TorsorError(f"N = 2g - 2 must be even and at least 2, got {self.N}")


@dataclass(frozen=True)
class TorsorClass:
    """``coeff`` times the generator, in ``Z / (relations)``."""

    coeff: int
    relations: frozenset = frozenset()
    trace: tuple = field(default=(), compare=False)

    @property
    def modulus(self) -> int:
        return gcd(*self.relations) if self.relations else 0

    def is_trivial(self) -> bool:
        m = self.modulus
        return self.coeff == 0 if m == 0 else self.coeff % m == 0


def coprime_part(n: int, d: int) -> int:
    """Largest divisor of ``n`` coprime to ``d``."""
    n = abs(n)
    g = gcd(n, d)
    while g > 1:
        n //= g
        g = gcd(n, d)
    return n


def condition_N(s: TorsorSetup) -> bool:
    """The part of ``N`` coprime to ``d_c`` divides ``d_tor``."""
    return s.d_tor % coprime_part(s.N, s.d_c) == 0


def _residue_ok(s: TorsorSetup, m: int) -> bool:
    return (m * s.d_tor) % gcd(m * s.d_c - 1, s.N) == 0


def condition_N_universal(s: TorsorSetup) -> bool:
    """``gcd(m d_c - 1, N)`` divides ``m d_tor`` for every residue ``m`` mod ``N``.

    Replacing ``m`` by ``m + N`` changes neither ``gcd(m d_c - 1, N)`` nor
    ``m d_tor`` modulo that gcd (which divides ``N``), so residues suffice.
    """
    return all(_residue_ok(s, m) for m in range(s.N))


@dataclass(frozen=True)
class Verdict:
    status: str  # "Trivial" or "Inconclusive"
    setup: TorsorSetup
    failing: tuple = ()
    trace: tuple = field(default=(), compare=False)

    @property
    def trivial(self) -> bool:
        return self.status == "Trivial"


def obstruction_pipeline(s: TorsorSetup) -> Verdict:
    """Check that ``m d_tor [Pic^1]`` dies for every admissible ``m``.

    Given ``(m d_c - 1)[Pic^1] = 0`` and ``N [Pic^1] = 0``, the class
    ``[Jac_dtor] = m d_tor [Pic^1]`` is trivial iff ``m d_tor`` lies in the
    ideal ``(m d_c - 1, N)``.
    """
    trace, failing = [], []
    for m in range(s.N):
        cls = TorsorClass(m * s.d_tor, frozenset({m * s.d_c - 1, s.N}))
        ok = cls.is_trivial()
        trace.append(f"m = {m}: ideal ({m * s.d_c - 1}, {s.N}) = ({cls.modulus}), {m * s.d_tor} {'in' if ok else 'not in'} it")
        if not ok:
            failing.append(m)
    status = "Trivial" if not failing else "Inconclusive"
    return Verdict(status, s, tuple(failing), tuple(trace))


def jac_multiplicativity(d: int, certificates: Mapping[int, Sequence[tuple[int, int]]]) -> TorsorClass:
    """Reduce ``[Jac_d]`` to a multiple of ``[Jac_1]`` along degenerations.

    ``certificates[e]`` is a list of pairs ``(m_i, e_i)`` with
    ``sum m_i e_i = e`` and every ``e_i < e``; it records that a degree-``e``
    rational curve degenerates to ``m_i`` copies of degree-``e_i`` curves.
    """
    if d < 1:
        raise TorsorError("degree must be positive")
    coeff = {1: 1}
    trace = ["[Jac_1] = 1 * [Jac_1]"]

    def reduce(e: int) -> int:
        if e in coeff:
            return coeff[e]
        if e not in certificates:
            raise TorsorError(f"missing degeneration certificate for degree {e}")
        parts = list(certificates[e])
        if not parts or sum(m * ei for m, ei in parts) != e:
            raise TorsorError(f"certificate for degree {e} does not sum to {e}: {parts}")
        if any(ei >= e or ei < 1 or m < 1 for m, ei in parts):
            raise TorsorError(f"certificate for degree {e} must use positive lower degrees: {parts}")
        total = sum(m * reduce(ei) for m, ei in parts)
        coeff[e] = total
        trace.append(f"[Jac_{e}] = " + " + ".join(f"{m}[Jac_{ei}]" for m, ei in parts) + f" = {total}[Jac_1]")
        return total

    return TorsorClass(reduce(d), frozenset(), tuple(trace))


def descent_gcd(multipliers: Iterable[int]) -> int:
    vals = list(multipliers)
    if not vals:
        raise TorsorError("need at least one multiplier")
    return gcd(*vals)


def parse_certificates(text: str) -> dict[int, list[tuple[int, int]]]:
    """Parse ``"2=1+1; 3=2+1"`` (terms may be ``m*e``)."""
    out: dict[int, list[tuple[int, int]]] = {}
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        lhs, _, rhs = chunk.partition("=")
        if not rhs:
            raise TorsorError(f"malformed certificate {chunk!r}")
        parts = []
        for term in rhs.split("+"):
            m, _, e = term.strip().rpartition("*")
            parts.append((int(m) if m else 1, int(e)))
        out[int(lhs)] = parts
    return out


def format_certificates(certs: Mapping[int, Sequence[tuple[int, int]]]) -> str:
    return "; ".join(
        f"{e}=" + "+".join(f"{m}*{ei}" if m != 1 else str(ei) for m, ei in parts)
        for e, parts in sorted(certs.items())
    )
