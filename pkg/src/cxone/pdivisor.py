"""Polyhedral divisors over an abstract curve and their hypercones.

A curve is reduced to its genus and a finite list of labelled points; every
formula used downstream depends on nothing else.  Points that are not listed
carry the tail cone as coefficient.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .lattice import IntVec, as_int, dot, multiplicity
from .polyhedra import Cone, Polyhedron, PolyhedralError

SPINE = "•"
GENERIC = "<generic>"  # stands for any point outside the listed labels


class DivisorError(ValueError):
    pass


@dataclass(frozen=True)
class Curve:
    genus: int
    points: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.genus < 0:
            raise DivisorError("genus must be nonnegative")
        if len(set(self.points)) != len(self.points):
            raise DivisorError("curve point labels must be distinct")
        for p in self.points:
            if not isinstance(p, str) or not p:
                raise DivisorError(f"bad point label {p!r}")
            if p in (SPINE, GENERIC):
                raise DivisorError(f"label {p!r} is reserved")


@dataclass(frozen=True, order=True)
class HypPoint:
    """``[page, a, b]``; points with ``b = 0`` live on the spine."""

    page: str
    a: IntVec
    b: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", as_int(self.a))
        if self.b < 0:
            raise DivisorError("height must be nonnegative")
        if self.b == 0 and self.page != SPINE:
            object.__setattr__(self, "page", SPINE)
        if self.b > 0 and self.page == SPINE:
            raise DivisorError("a point of positive height needs a page")

    @classmethod
    def spine(cls, a: Sequence[int]) -> HypPoint:
        return cls(SPINE, tuple(a), 0)

    @property
    def on_spine(self) -> bool:
        return self.b == 0

    @property
    def vector(self) -> IntVec:
        return self.a + (self.b,)

    def __str__(self) -> str:
        a = ",".join(str(x) for x in self.a)
        return f"[{self.page},({a}),{self.b}]"


@dataclass(frozen=True)
class SemiInvariantMonomial:
    m: IntVec
    orders: Mapping[str, int] = field(default_factory=dict)


def val_apply(nu: HypPoint, g: SemiInvariantMonomial) -> Fraction:
    """Value ``<m, a> + b * ord_page(f_m)`` of the valuation on ``f_m chi^m``."""
    base = Fraction(dot(g.m, nu.a))
    if nu.on_spine:
        return base
    return base + nu.b * g.orders.get(nu.page, 0)


@dataclass(frozen=True)
class Properness:
    kind: str  # "Proper", "ProperModuloPrincipal" or "NotProper"
    rays: tuple[IntVec, ...] = ()
    reason: str = ""


class PolyDivisor:
    """``sum D_y [y]`` with tail ``sigma`` over a curve."""

    def __init__(
        self,
        tail: Cone,
        curve: Curve,
        coefficients: Mapping[str, Polyhedron],
        locus: str = "complete",
    ):
        if locus not in ("affine", "complete"):
            raise DivisorError(f"unknown locus kind {locus!r}")
        if not tail.is_pointed:
            raise DivisorError("tail must be strictly convex")
        self.tail = tail
        self.rank = tail.ambient
        self.curve = curve
        self.locus = locus
        coeffs: dict[str, Polyhedron] = {}
        for y, p in coefficients.items():
            if y not in curve.points:
                raise DivisorError(f"point {y!r} is not on the curve")
            if p.ambient != self.rank:
                raise DivisorError(f"coefficient at {y!r} has the wrong rank")
            if p.empty:
                if locus == "complete":
                    raise DivisorError("a complete locus has no empty coefficients")
            elif p.tail != tail:
                raise DivisorError(f"coefficient at {y!r} does not have the tail as recession cone")
            coeffs[y] = p
        self.coefficients = coeffs
        self._cayley: dict[str, Cone] = {}

    def __repr__(self) -> str:
        parts = ", ".join(f"{y}: {p!r}" for y, p in self.coefficients.items())
        return f"PolyDivisor(tail={self.tail!r}, {{{parts}}}, {self.locus})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyDivisor):
            return NotImplemented
        return (
            self.tail == other.tail
            and self.curve == other.curve
            and self.locus == other.locus
            and all(self.coefficient(y) == other.coefficient(y) for y in self.curve.points)
        )

    def __hash__(self) -> int:
        return hash((self.tail, self.locus, tuple(sorted(self.coefficients))))

    # -- coefficients ------------------------------------------------------

    def coefficient(self, y: str) -> Polyhedron:
        p = self.coefficients.get(y)
        if p is None:
            return Polyhedron([(0,) * self.rank], self.tail, self.rank)
        return p

    def in_locus(self, y: str) -> bool:
        return not self.coefficient(y).empty

    @property
    def support(self) -> list[str]:
        """Listed points whose coefficient differs from the tail (empty ones included)."""
        trivial = Polyhedron([(0,) * self.rank], self.tail, self.rank)
        return [y for y in self.curve.points if y in self.coefficients and self.coefficients[y] != trivial]

    def pages(self) -> list[str]:
        """Support points in the locus followed by the generic page."""
        return [y for y in self.support if self.in_locus(y)] + [GENERIC]

    # -- invariants --------------------------------------------------------

    def evaluation(self, m: Sequence[int]) -> dict[str, Fraction]:
        if not self.tail.dual().contains(m):
            raise DivisorError("evaluation undefined outside the tail dual")
        out = {}
        for y, p in self.coefficients.items():
            if p.empty:
                continue
            v = p.support(m)
            if v != 0:
                out[y] = v
        return out

    def degree(self) -> Polyhedron:
        """Minkowski sum of coefficients; the empty polyhedron for an affine locus."""
        if self.locus == "affine":
            return Polyhedron.empty_set(self.rank, self.tail)
        total = Polyhedron([(0,) * self.rank], self.tail, self.rank)
        for p in self.coefficients.values():
            total = total + p
        return total

    def is_proper(self) -> Properness:
        if self.locus == "affine":
            return Properness("Proper")
        deg = self.degree()
        full = Polyhedron([(0,) * self.rank], self.tail, self.rank)
        if not all(self.tail.contains(v) for v in deg.vertices):
            return Properness("NotProper", reason="degree is not contained in the tail")
        if deg == full:
            return Properness("NotProper", reason="degree equals the tail")
        zero_rays = tuple(m for m in self.tail.dual().rays if deg.support(m) == 0)
        if not zero_rays or self.curve.genus == 0:
            return Properness("Proper")
        return Properness(
            "ProperModuloPrincipal",
            zero_rays,
            "degree-zero evaluations need a principal multiple on the curve",
        )

    def cayley_cone(self, y: str) -> Cone:
        """Cone over ``(tail x 0) ∪ (D_y x 1)`` in rank ``d + 1``."""
        if y == SPINE:
            raise DivisorError("the spine is not a page")
        cached = self._cayley.get(y)
        if cached is not None:
            return cached
        p = self.coefficient(y)
        if p.empty:
            raise DivisorError(f"point {y!r} is outside the locus")
        gens = [tuple(r) + (0,) for r in self.tail.rays]
        for v in p.vertices:
            mu, w = multiplicity(v)
            gens.append(w + (mu,))
        cone = Cone(gens, self.rank + 1)
        self._cayley[y] = cone
        return cone

    def spine_cone(self) -> Cone:
        return Cone([tuple(r) + (0,) for r in self.tail.rays], self.rank + 1)

    def page_of(self, nu: HypPoint) -> str:
        """A page carrying ``nu``; spine points use the generic page."""
        return GENERIC if nu.on_spine else nu.page

    def hyp_contains(self, nu: HypPoint) -> bool:
        if len(nu.a) != self.rank:
            raise DivisorError("point has the wrong rank")
        if nu.on_spine:
            return self.tail.contains(nu.a)
        if nu.page not in self.curve.points and nu.page != GENERIC:
            return False
        if not self.in_locus(nu.page):
            return False
        return self.cayley_cone(nu.page).contains(nu.vector)

    def face_of_point(self, nu: HypPoint) -> Cone:
        """Face of the Cayley cone whose relative interior contains ``nu``."""
        if not self.hyp_contains(nu):
            raise DivisorError(f"{nu} is not in the hypercone")
        return self.cayley_cone(self.page_of(nu)).face_containing(nu.vector)

    def meets_degree(self, spine_part: Cone) -> bool:
        """Whether a cone of ``N_Q`` (or its lift at height 0) meets the degree."""
        if self.locus == "affine":
            return False
        tau = spine_part
        if tau.ambient == self.rank + 1:
            tau = Cone([r[:-1] for r in tau.rays], self.rank)
        return self.degree().meets_cone(tau)

    def singular_center(self, nu: HypPoint) -> bool:
        """Whether the center of ``nu`` lies in the singular locus."""
        theta = self.face_of_point(nu)
        if self.locus == "complete":
            tau = Cone([r[:-1] for r in (theta & self.spine_cone()).rays], self.rank)
            if self.degree().meets_cone(tau):
                return self.curve.genus > 0 or self.orbit_singular(tau)
        return not theta.is_smooth

    def orbit_singular(self, tau: Cone) -> bool:
        """Singularity along the orbit attached to a face ``tau`` meeting the degree.

        Over a positive-genus curve these orbits are always singular.  Over the
        projective line the face divisor is smooth exactly when at most two of
        its coefficients are not lattice translates of ``tau`` and the toric
        cone obtained by moving the integral shifts onto one of them is smooth.
        """
        if self.locus != "complete" or not self.degree().meets_cone(tau):
            raise DivisorError("the face does not meet the degree")
        if self.curve.genus > 0:
            return True
        face = self.face_with_tail(tau)
        special: list[Polyhedron] = []
        shift = [Fraction(0)] * self.rank
        for p in face.coefficients.values():
            if len(p.vertices) == 1 and all(Fraction(x).denominator == 1 for x in p.vertices[0]):
                shift = [s + x for s, x in zip(shift, p.vertices[0])]
            else:
                special.append(p)
        if len(special) > 2:
            return True
        origin = Polyhedron([(0,) * self.rank], tau, self.rank)
        special += [origin] * (2 - len(special))
        top = special[0].translate(shift)
        gens = [tuple(r) + (0,) for r in tau.rays]
        for v in top.vertices:
            gens.append(tuple(v) + (1,))
        for v in special[1].vertices:
            gens.append(tuple(v) + (-1,))
        return not Cone(gens, self.rank + 1).is_smooth

    def restrict(self, keep: Iterable[str]) -> PolyDivisor:
        """Remove every listed point outside ``keep`` from the locus."""
        keep = set(keep)
        for y in keep:
            if y not in self.curve.points or not self.in_locus(y):
                raise DivisorError(f"{y!r} is not in the locus")
        coeffs = {}
        for y in self.curve.points:
            if y in keep:
                if y in self.coefficients:
                    coeffs[y] = self.coefficients[y]
            else:
                coeffs[y] = Polyhedron.empty_set(self.rank, self.tail)
        return PolyDivisor(self.tail, self.curve, coeffs, "affine")

    def intersection(self, other: PolyDivisor) -> PolyDivisor:
        if self.curve != other.curve or self.rank != other.rank:
            raise DivisorError("divisors live over different data")
        tail = self.tail & other.tail
        coeffs = {}
        complete = self.locus == "complete" and other.locus == "complete"
        for y in set(self.coefficients) | set(other.coefficients):
            p = self.coefficient(y) & other.coefficient(y)
            if p.empty:
                complete = False
                p = Polyhedron.empty_set(self.rank, tail)
            coeffs[y] = p
        return PolyDivisor(tail, self.curve, coeffs, "complete" if complete else "affine")

    def is_face_of(self, other: PolyDivisor) -> bool:
        if not other.tail.is_face(self.tail):
            return False
        for y in set(self.coefficients) | set(other.coefficients):
            if not self.coefficient(y).is_face_of(other.coefficient(y)):
                return False
        mine = self.degree()
        theirs = other.degree() & Polyhedron([(0,) * self.rank], self.tail, self.rank)
        if mine.empty or theirs.empty:
            return mine.empty and theirs.empty
        return mine == theirs

    # -- faces of the divisor ---------------------------------------------

    def face_with_tail(self, tau: Cone) -> PolyDivisor:
        """The face with tail ``tau`` cut out by a functional exposing ``tau``."""
        if not self.tail.is_face(tau):
            raise DivisorError("not a face of the tail")
        dual = self.tail.dual()
        u = tuple(
            sum(c) for c in zip(*(m for m in dual.rays if all(dot(m, r) == 0 for r in tau.rays)))
        ) or (0,) * self.rank
        coeffs = {}
        for y, p in self.coefficients.items():
            if p.empty:
                coeffs[y] = Polyhedron.empty_set(self.rank, tau)
                continue
            low = p.support(u)
            verts = [v for v in p.vertices if dot(u, v) == low]
            coeffs[y] = Polyhedron(verts, tau, self.rank)
        return PolyDivisor(tau, self.curve, coeffs, self.locus)


def evaluation(d: PolyDivisor, m: Sequence[int]) -> dict[str, Fraction]:
    return d.evaluation(m)


def degree(d: PolyDivisor) -> Polyhedron:
    return d.degree()


def is_proper(d: PolyDivisor) -> Properness:
    return d.is_proper()


def cayley_cone(d: PolyDivisor, y: str) -> Cone:
    return d.cayley_cone(y)


def hyp_contains(d: PolyDivisor, nu: HypPoint) -> bool:
    return d.hyp_contains(nu)


def restrict(d: PolyDivisor, keep: Iterable[str]) -> PolyDivisor:
    return d.restrict(keep)


def singular_center(d: PolyDivisor, nu: HypPoint) -> bool:
    return d.singular_center(nu)


@dataclass(frozen=True)
class Hyperface:
    kind: str  # "i" for face-subdivisors meeting the degree, "ii" for Cayley faces
    page: str | None  # None for spine faces and type (i)
    cone: Cone  # Cayley face (rank d+1) or tail (rank d) for type (i)
    dim: int
    orbit_type: bool
    singular: bool


def hyperfaces(d: PolyDivisor | DivisorialFan) -> list[Hyperface]:
    if isinstance(d, DivisorialFan):
        seen: dict[tuple, Hyperface] = {}
        for member in d.divisors:
            for h in hyperfaces(member):
                seen.setdefault((h.kind, h.page, h.cone), h)
        return list(seen.values())
    out: list[Hyperface] = []
    spine = d.spine_cone()
    spine_seen: set[Cone] = set()
    for y in d.pages():
        for theta in d.cayley_cone(y).faces():
            spine_part = theta & spine
            if d.meets_degree(spine_part):
                continue
            in_spine = spine.contains_cone(theta)
            if in_spine:
                if theta in spine_seen:
                    continue
                spine_seen.add(theta)
            out.append(Hyperface("ii", None if in_spine else y, theta, theta.dim, not in_spine, not theta.is_smooth))
    if d.locus == "complete":
        deg = d.degree()
        for tau in d.tail.faces():
            if deg.meets_cone(tau):
                out.append(Hyperface("i", None, tau, tau.dim + 1, True, d.orbit_singular(tau)))
    return out


class DivisorialFan:
    """Finite set of p-divisors closed under intersection, meeting along faces."""

    def __init__(
        self,
        divisors: Sequence[PolyDivisor],
        *,
        validate: bool = True,
        _pairs: dict[tuple[int, int], PolyDivisor] | None = None,
    ):
        if not divisors:
            raise DivisorError("a divisorial fan needs at least one divisor")
        curve, rank = divisors[0].curve, divisors[0].rank
        for d in divisors:
            if d.curve != curve or d.rank != rank:
                raise DivisorError("divisors must share curve and rank")
        self.divisors = list(divisors)
        self.curve = curve
        self.rank = rank
        if validate:
            self.validate(_pairs)

    @classmethod
    def generated_by(cls, divisors: Sequence[PolyDivisor], *, validate: bool = True) -> DivisorialFan:
        """Close under pairwise intersection, meeting each pair once."""
        found = list(dict.fromkeys(divisors))
        index = {d: i for i, d in enumerate(found)}
        pairs: dict[tuple[int, int], PolyDivisor] = {}
        k = 0
        while k < len(found):
            for j in range(k):
                c = found[k].intersection(found[j])
                pairs[(j, k)] = c
                if c not in index:
                    index[c] = len(found)
                    found.append(c)
            k += 1
        return cls(found, validate=validate, _pairs=pairs)

    def validate(self, pairs: dict[tuple[int, int], PolyDivisor] | None = None) -> None:
        pairs = pairs or {}
        for (i, a), (j, b) in combinations(enumerate(self.divisors), 2):
            c = pairs.get((i, j))
            if c is None:
                c = a.intersection(b)
            if not ((c == a or c.is_face_of(a)) and (c == b or c.is_face_of(b))):
                raise DivisorError("intersection is not a common face")

    def tail_fan_cones(self) -> list[Cone]:
        return list(dict.fromkeys(d.tail for d in self.divisors))

    def degree_meets(self, tau: Cone) -> bool:
        return any(d.locus == "complete" and d.degree().meets_cone(tau) for d in self.divisors)

    def containing(self, nu: HypPoint) -> list[PolyDivisor]:
        return [d for d in self.divisors if d.hyp_contains(nu)]


__all__ = [
    "Curve",
    "DivisorError",
    "DivisorialFan",
    "GENERIC",
    "HypPoint",
    "Hyperface",
    "PolyDivisor",
    "PolyhedralError",
    "Properness",
    "SPINE",
    "SemiInvariantMonomial",
    "cayley_cone",
    "degree",
    "evaluation",
    "hyp_contains",
    "hyperfaces",
    "is_proper",
    "restrict",
    "singular_center",
    "val_apply",
]
