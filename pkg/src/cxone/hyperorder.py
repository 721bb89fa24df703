"""Orders on invariant valuations and enumeration of minimal singular ones.

Three orders appear here.  The combinatorial order on a cone compares
differences against the cone.  The hypercombinatorial order compares two
hypercone points through the Cayley cone of a shared page.  The pointwise
order compares values on all regular semi-invariant functions; it is decided
exactly over the projective line through an embedding into one cone, and
certified soundly over higher genus.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

from .lattice import IntVec, dot, sub
from .pdivisor import GENERIC, SPINE, DivisorError, DivisorialFan, HypPoint, PolyDivisor
from .polyhedra import Cone, Polyhedron

Relation = Literal[True, False, "Unknown"]
UNKNOWN: Relation = "Unknown"


@dataclass(frozen=True)
class OrderVerdict:
    relation: Relation
    certificate: object = None

    def __bool__(self) -> bool:
        return self.relation is True


@dataclass(frozen=True)
class MinSetResult:
    elements: tuple[HypPoint, ...]
    complete: bool
    level_bound: int
    page_bounds: dict[str, int] = field(default_factory=dict)


def leq_sigma(nu: Sequence[int], nu2: Sequence[int], sigma: Cone) -> OrderVerdict:
    """``nu <= nu2`` iff ``nu2 - nu`` lies in ``sigma``; the difference is the certificate."""
    if not (sigma.contains(nu) and sigma.contains(nu2)):
        raise DivisorError("both points must lie in the cone")
    diff = sub(nu2, nu)
    return OrderVerdict(sigma.contains(diff), diff)


def _shared_page(nu1: HypPoint, nu2: HypPoint) -> str | None:
    if nu1.on_spine and nu2.on_spine:
        return GENERIC
    if nu1.on_spine:
        return nu2.page
    if nu2.on_spine or nu1.page == nu2.page:
        return nu1.page
    return None


def leq_hyper(nu1: HypPoint, nu2: HypPoint, d: PolyDivisor | DivisorialFan) -> OrderVerdict:
    """Hypercombinatorial order; for a fan, some member must certify it."""
    if isinstance(d, DivisorialFan):
        members = [m for m in d.divisors if m.hyp_contains(nu1) and m.hyp_contains(nu2)]
        for m in members:
            v = leq_hyper(nu1, nu2, m)
            if v.relation is True:
                return v
        return OrderVerdict(False, "no member divisor certifies the relation")
    for nu in (nu1, nu2):
        if not d.hyp_contains(nu):
            raise DivisorError(f"{nu} is not in the hypercone")
    page = _shared_page(nu1, nu2)
    if page is None:
        return OrderVerdict(False, "no common page")
    diff = sub(nu2.vector, nu1.vector)
    return OrderVerdict(d.cayley_cone(page).contains(diff), (page, diff))


# --- singular lattice points page by page ---------------------------------


class _PageScan:
    """Face-level singularity flags of one Cayley cone, keyed by tight facets."""

    def __init__(self, d: PolyDivisor, page: str):
        self.d = d
        self.page = page
        self.cone = d.cayley_cone(page)
        self._flags: dict[frozenset[int], bool] = {}

    def tight(self, x: Sequence[int]) -> frozenset[int]:
        return frozenset(i for i, f in enumerate(self.cone.facets) if dot(f, x) == 0)

    def singular(self, x: Sequence[int]) -> bool:
        key = self.tight(x)
        flag = self._flags.get(key)
        if flag is None:
            x = tuple(x)
            nu = HypPoint(self.page if x[-1] else SPINE, x[:-1], x[-1])
            flag = self.d.singular_center(nu)
            self._flags[key] = flag
        return flag

    def certified_bound(self) -> int:
        """Level bound past which no minimal singular point can occur.

        A lattice point in the relative interior of a face can be reduced by
        integral multiples of rays of a simplex containing it without leaving
        that relative interior, so a minimal one has level at most the sum of
        the ray levels.
        """
        return int(sum(self.cone.level(r) for r in self.cone.rays))

    def minimal(self, bound: int) -> list[IntVec]:
        pts = [p for p in self.cone.lattice_points(bound) if any(p) and self.singular(p)]
        pts.sort(key=lambda p: (self.cone.level(p), p))
        mins: list[IntVec] = []
        for p in pts:
            if not any(self.cone.contains(sub(p, m)) for m in mins):
                mins.append(p)
        return mins


def _as_point(page: str, x: Sequence[int]) -> HypPoint:
    x = tuple(x)
    return HypPoint(page if x[-1] else SPINE, x[:-1], x[-1])


def is_minimal_singular(d: PolyDivisor, nu: HypPoint) -> bool:
    """Exact minimality via the bounded box ``C ∩ (nu - C)`` of nu's page."""
    if not d.singular_center(nu):
        raise DivisorError(f"{nu} does not have a singular center")
    scan = _PageScan(d, d.page_of(nu))
    c = scan.cone
    x = nu.vector
    for p in c.lattice_points(int(c.level(x))):
        if p == x or not any(p):
            continue
        if c.contains(sub(x, p)) and scan.singular(p):
            return False
    return True


def min_singular_set(d: PolyDivisor, level_bound: int | None = None) -> MinSetResult:
    """Minimal singular valuations under the hypercombinatorial order.

    Each page is scanned up to its certified level bound unless a smaller
    ``level_bound`` is given; ``complete`` reports whether every page was
    scanned far enough for the result to be exhaustive.
    """
    found: dict[HypPoint, None] = {}
    bounds: dict[str, int] = {}
    complete = True
    for page in d.pages():
        scan = _PageScan(d, page)
        need = scan.certified_bound()
        used = need if level_bound is None else min(level_bound, need)
        complete &= used >= need
        bounds[page] = used
        for m in scan.minimal(used):
            found.setdefault(_as_point(page, m), None)
    elements = tuple(sorted(found, key=lambda p: (p.page != SPINE, p.page, p.b, p.a)))
    return MinSetResult(elements, complete, max(bounds.values()), bounds)


# --- pointwise order over the projective line -----------------------------


@dataclass(frozen=True)
class IltenManonCone:
    """Embedding of every page into one cone for a genus-zero divisor.

    A point ``[y_i, a, l]`` goes to ``(l e_i, a)`` for ``i >= 1`` and
    ``[y_0, a, l]`` to ``(-l, ..., -l, a)``; spine points go to ``(0, a)``.
    """

    base: str
    points: tuple[str, ...]
    rank: int
    cone: Cone

    @property
    def s(self) -> int:
        return len(self.points)

    def embed(self, nu: HypPoint) -> IntVec:
        head = [0] * self.s
        if not nu.on_spine:
            if nu.page == self.base:
                head = [-nu.b] * self.s
            elif nu.page in self.points:
                head[self.points.index(nu.page)] = nu.b
            else:
                raise DivisorError("extend the support list to cover this page")
        return tuple(head) + tuple(nu.a)


def ilten_manon_cone(d: PolyDivisor, order: Sequence[str] | None = None) -> IltenManonCone:
    if d.curve.genus != 0 or d.locus != "complete":
        raise DivisorError("the pointwise cone needs a complete genus-zero divisor")
    labels = list(order) if order is not None else list(d.support)
    if set(labels) != set(d.support) or len(labels) != len(set(labels)):
        raise DivisorError("the ordering must list the support exactly once")
    if not labels:
        labels = [d.curve.points[0]] if d.curve.points else []
    if not labels:
        raise DivisorError("the curve needs at least one listed point")
    base, rest = labels[0], tuple(labels[1:])
    s, n = len(rest), d.rank
    gens = []
    for r in d.tail.rays:
        gens.append((0,) * s + tuple(r))
    for i, y in enumerate([base, *rest]):
        for g in d.cayley_cone(y).rays:
            a, ell = g[:-1], g[-1]
            head = [-ell] * s if i == 0 else [ell * (j == i - 1) for j in range(s)]
            gens.append(tuple(head) + tuple(a))
    cone = Cone(gens, s + n)
    if not cone.is_pointed:
        raise DivisorError("the pointwise cone is not strictly convex")
    im = IltenManonCone(base, rest, n, cone)
    _check_dual(d, im)
    return im


def _check_dual(d: PolyDivisor, im: IltenManonCone) -> None:
    """Every dual ray ``(v, m)`` satisfies ``v_i + D_i(m) >= 0`` and ``sum v <= D_0(m)``."""
    s = im.s
    tail_dual = d.tail.dual()
    for w in im.cone.dual().rays:
        v, m = w[:s], w[s:]
        ok = tail_dual.contains(m)
        ok = ok and all(v[i] + d.coefficient(y).support(m) >= 0 for i, y in enumerate(im.points))
        ok = ok and sum(v) <= d.coefficient(im.base).support(m)
        if not ok:
            raise DivisorError(f"dual ray {w} violates the section inequalities")


def leq_pointwise_P1(
    nu: HypPoint, nu2: HypPoint, d: PolyDivisor, cone: IltenManonCone | None = None
) -> OrderVerdict:
    """Exact pointwise order over the projective line."""
    im = cone or ilten_manon_cone(d)
    diff = sub(im.embed(nu2), im.embed(nu))
    return OrderVerdict(im.cone.contains(diff), diff)


def _scaled_sum(d: PolyDivisor, weights: dict[str, int]) -> Polyhedron:
    total = Polyhedron([(0,) * d.rank], d.tail, d.rank)
    for y, c in weights.items():
        if c:
            total = total + d.coefficient(y).scaled(c)
    return total


def leq_pointwise_sound(nu: HypPoint, nu2: HypPoint, d: PolyDivisor) -> OrderVerdict:
    """Three-valued pointwise order for positive genus.

    ``True`` comes either from the hypercombinatorial order or from a linear
    certificate ``a2 - a ∈ sum c_z D_z`` covering every order profile of a
    section.  ``False`` needs the hypercombinatorial order to fail while the
    restriction to the curve holds, which forces the pointwise order to fail.
    """
    if d.locus == "complete" and d.curve.genus == 0:
        raise DivisorError("use the exact genus-zero test")
    hyper = leq_hyper(nu, nu2, d)
    if hyper.relation is True:
        return OrderVerdict(True, ("hypercombinatorial", hyper.certificate))
    others = [z for z in d.support if d.in_locus(z)]
    weights: dict[str, int] | None = {}
    same = not nu.on_spine and not nu2.on_spine and nu.page == nu2.page
    if same:
        k = nu2.b - nu.b
        if k >= 0:
            weights = {nu.page: k}
        elif d.locus == "complete":
            weights = {z: -k for z in others if z != nu.page}
        else:
            weights = None
    else:
        if not nu2.on_spine:
            weights[nu2.page] = nu2.b
        if not nu.on_spine:
            if d.locus != "complete":
                weights = None
            else:
                for z in others:
                    if z != nu.page:
                        weights[z] = weights.get(z, 0) + nu.b
    diff = sub(nu2.a, nu.a)
    if weights is not None and _scaled_sum(d, weights).contains(diff):
        return OrderVerdict(True, ("section-profile", weights, diff))
    restriction = nu.on_spine or (same and nu.b <= nu2.b)
    if restriction:
        return OrderVerdict(False, ("curve order holds, hypercombinatorial fails", hyper.certificate))
    return OrderVerdict(UNKNOWN, None)


__all__ = [
    "IltenManonCone",
    "MinSetResult",
    "OrderVerdict",
    "UNKNOWN",
    "ilten_manon_cone",
    "is_minimal_singular",
    "leq_hyper",
    "leq_pointwise_P1",
    "leq_pointwise_sound",
    "leq_sigma",
    "min_singular_set",
]
