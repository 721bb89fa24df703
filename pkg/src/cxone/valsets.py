"""Nash, essential, terminal and minimal valuations, and the canonical class."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

from .hyperorder import (
    UNKNOWN,
    IltenManonCone,
    ilten_manon_cone,
    leq_pointwise_P1,
    leq_pointwise_sound,
    min_singular_set,
)
from .lattice import IntVec, RatVec, multiplicity
from .pdivisor import GENERIC, SPINE, DivisorError, DivisorialFan, HypPoint, PolyDivisor
from .polyhedra import Cone, NewtonHull

KINDS = ("Nash", "Essential", "Terminal", "MinimalConfirmed", "MinimalCandidates")


def canonical_order(points: Sequence[HypPoint]) -> tuple[HypPoint, ...]:
    """Spine points first, then pages by label, height and coordinates."""
    return tuple(sorted(set(points), key=lambda p: (p.page != SPINE, p.page, p.b, p.a)))


@dataclass(frozen=True)
class ValuationSet:
    kind: str
    elements: tuple[HypPoint, ...]
    complete: bool
    note: str = ""

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown valuation set kind {self.kind!r}")
        object.__setattr__(self, "elements", canonical_order(self.elements))

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, nu: object) -> bool:
        return nu in self.elements


def _require_nash_setting(d: PolyDivisor) -> None:
    if d.locus == "complete" and d.curve.genus == 0:
        raise DivisorError(
            "open problem: over the projective line the Nash order is not the "
            "hypercombinatorial one; use minimal_valuations for the pointwise order"
        )


def nash_set(d: PolyDivisor, level_bound: int | None = None) -> ValuationSet:
    _require_nash_setting(d)
    res = min_singular_set(d, level_bound)
    return ValuationSet("Nash", res.elements, res.complete)


def essential_set(d: PolyDivisor, level_bound: int | None = None) -> ValuationSet:
    nash = nash_set(d, level_bound)
    return ValuationSet("Essential", nash.elements, nash.complete, "equal to the Nash set")


# --- terminal valuations --------------------------------------------------


def terminal_toric(tau: Cone) -> list[IntVec]:
    """Compact Newton boundary points whose carrying face is not smooth."""
    if not tau.is_pointed:
        raise DivisorError("cone must be strictly convex")
    if not tau.rays or tau.is_smooth:
        return []
    hull = NewtonHull(tau)
    return sorted(p for p in hull.boundary_points if not tau.face_containing(p).is_smooth)


def terminal_set(d: PolyDivisor) -> ValuationSet:
    """Singular hypercone lattice points on the compact Newton boundary of some page."""
    if d.locus == "complete" and d.curve.genus == 0:
        raise DivisorError("terminal valuations are computed for positive genus or affine loci")
    found: list[HypPoint] = []
    for page in d.pages():
        c = d.cayley_cone(page)
        for p in NewtonHull(c).boundary_points:
            nu = HypPoint(page if p[-1] else SPINE, p[:-1], p[-1])
            if d.singular_center(nu):
                found.append(nu)
    return ValuationSet("Terminal", found, True)


# --- minimal valuations under the pointwise order --------------------------


def minimal_valuations(
    d: PolyDivisor, level_bound: int | None = None
) -> tuple[ValuationSet, ValuationSet]:
    """Split the minimal singular valuations into confirmed ones and candidates.

    Pointwise-minimal singular valuations are among the hypercombinatorially
    minimal ones, so only those are compared.  Over the projective line the
    comparison is exact; otherwise three-valued verdicts may leave candidates.
    """
    res = min_singular_set(d, level_bound)
    elems = list(res.elements)
    im: IltenManonCone | None = None
    exact = d.locus == "complete" and d.curve.genus == 0
    if exact:
        im = ilten_manon_cone(d)
    confirmed, candidates = [], []
    for nu in elems:
        verdicts = []
        for mu in elems:
            if mu == nu:
                continue
            v = leq_pointwise_P1(mu, nu, d, im) if exact else leq_pointwise_sound(mu, nu, d)
            verdicts.append(v.relation)
        if any(v is True for v in verdicts):
            continue
        if all(v is False for v in verdicts):
            confirmed.append(nu)
        else:
            assert any(v == UNKNOWN for v in verdicts)
            candidates.append(nu)
    return (
        ValuationSet("MinimalConfirmed", confirmed, res.complete),
        ValuationSet("MinimalCandidates", candidates, res.complete),
    )


# --- canonical divisor ----------------------------------------------------


@dataclass(frozen=True)
class TDivisor:
    """Integral combination of invariant prime divisors.

    Ids are ``("ray", rho)`` for horizontal and ``("ver", y, v)`` for vertical
    divisors.
    """

    summands: tuple[tuple[tuple, Fraction], ...]

    def coefficient(self, key: tuple) -> Fraction:
        return dict(self.summands).get(key, Fraction(0))

    def as_dict(self) -> dict[tuple, Fraction]:
        return dict(self.summands)


def _as_fan(e: PolyDivisor | DivisorialFan) -> DivisorialFan:
    return e if isinstance(e, DivisorialFan) else DivisorialFan([e], validate=False)


def ray_ver(e: PolyDivisor | DivisorialFan) -> tuple[list[IntVec], list[tuple[str, RatVec]]]:
    """Horizontal ids (tail rays missing the degree) and vertical ids (point, vertex)."""
    fan = _as_fan(e)
    rays: dict[IntVec, None] = {}
    for tail in fan.tail_fan_cones():
        for r in tail.rays:
            rays.setdefault(tuple(r), None)
    horizontal = sorted(
        r for r in rays if not fan.degree_meets(Cone([r], fan.rank))
    )
    vertical: dict[tuple[str, RatVec], None] = {}
    for y in fan.curve.points:
        for member in fan.divisors:
            p = member.coefficient(y)
            for v in p.vertices:
                vertical.setdefault((y, tuple(Fraction(x) for x in v)), None)
    return horizontal, list(vertical)


def default_canonical_curve(genus: int, points: Sequence[str]) -> dict[str, int]:
    if not points:
        if genus == 1:
            return {}
        raise DivisorError("a canonical divisor needs a listed point")
    return {points[0]: 2 * genus - 2} if genus != 1 else {}


def canonical_divisor(
    e: PolyDivisor | DivisorialFan, k_y: Mapping[str, int] | None = None
) -> TDivisor:
    """Canonical class from a canonical divisor ``k_y`` of the curve."""
    fan = _as_fan(e)
    g = fan.curve.genus
    if k_y is None:
        k_y = default_canonical_curve(g, fan.curve.points)
    for y in k_y:
        if y not in fan.curve.points:
            raise DivisorError(f"canonical divisor uses unknown point {y!r}")
    if sum(k_y.values()) != 2 * g - 2:
        raise DivisorError(f"canonical divisor of the curve must have degree {2 * g - 2}")
    horizontal, vertical = ray_ver(fan)
    out: dict[tuple, Fraction] = {}
    for y, v in vertical:
        mu, _ = multiplicity(v)
        c = Fraction(mu * k_y.get(y, 0) + mu - 1)
        if c:
            out[("ver", y, v)] = c
    for r in horizontal:
        out[("ray", r)] = Fraction(-1)
    return TDivisor(tuple(sorted(out.items(), key=lambda kv: repr(kv[0]))))


# --- trinomial hypersurfaces ----------------------------------------------


@dataclass(frozen=True)
class TrinomialData:
    blocks: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

    def __post_init__(self) -> None:
        if len(self.blocks) != 3:
            raise ValueError("a trinomial has exactly three monomials")
        for b in self.blocks:
            if not b or any(int(n) != n or n < 1 for n in b):
                raise ValueError("exponent blocks must be nonempty positive integers")


@dataclass(frozen=True)
class TrinomialVerdict:
    holds: bool
    u: int
    d: int
    d1: int
    d2: int
    d3: int

    @property
    def value(self) -> int:
        return self.u - self.d1 - self.d2 - self.d3


def trinomial_nash_criterion(t: TrinomialData) -> TrinomialVerdict:
    u1, u2, u3 = (gcd(*b) for b in t.blocks)
    d = gcd(u1, u2, u3)
    d1 = gcd(u2 // d, u3 // d)
    d2 = gcd(u1 // d, u3 // d)
    d3 = gcd(u1 // d, u2 // d)
    u = d * d1 * d2 * d3
    return TrinomialVerdict(u - d1 - d2 - d3 >= 0, u, d, d1, d2, d3)


__all__ = [
    "GENERIC",
    "TDivisor",
    "TrinomialData",
    "TrinomialVerdict",
    "ValuationSet",
    "canonical_divisor",
    "essential_set",
    "minimal_valuations",
    "nash_set",
    "ray_ver",
    "terminal_set",
    "terminal_toric",
    "trinomial_nash_criterion",
]
