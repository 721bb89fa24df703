"""Star refinements of Cayley cones and resolutions avoiding a valuation.

A refinement is recorded as the ordered list of star centers applied to the
face fan of a cone, so every result can be replayed and audited.  The
polyhedron ``P`` is always a subset of a face of the cone (the tail at height
zero); ``None`` stands for the empty polyhedron.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .lattice import IntVec, content, primitive, sub
from .pdivisor import (
    GENERIC,
    SPINE,
    Curve,
    DivisorError,
    DivisorialFan,
    HypPoint,
    PolyDivisor,
)
from .polyhedra import Cone, Fan, Polyhedron


class ResolutionError(ValueError):
    pass


@dataclass
class RefinementTrace:
    start: Fan
    centers: list[IntVec]
    result: Fan
    branch: str = ""

    def replay(self) -> Fan:
        fan = self.start
        for c in self.centers:
            fan = fan.star(c)
        return fan


class _Refiner:
    """Mutable helper carrying the fan, the cone it refines and the trace."""

    def __init__(self, cone: Cone, fan: Fan | None = None, poly: Polyhedron | None = None):
        self.cone = cone
        self.start = fan if fan is not None else Fan.from_cone(cone)
        self.fan = self.start
        self.poly = poly
        self.centers: list[IntVec] = []
        self.cone_rays = set(cone.rays)
        self.cone_faces = {frozenset(f.rays) for f in cone.faces()}
        self._meets: dict[frozenset, bool] = {}

    def star(self, v: Sequence[int]) -> None:
        v = primitive(v)
        self.fan = self.fan.star(v)
        self.centers.append(v)

    def trace(self, branch: str = "") -> RefinementTrace:
        return RefinementTrace(self.start, list(self.centers), self.fan, branch)

    # -- predicates relative to the refined cone ---------------------------

    def is_face(self, s: frozenset) -> bool:
        return s in self.cone_faces

    def meets(self, s: frozenset) -> bool:
        if self.poly is None or self.poly.empty:
            return False
        hit = self._meets.get(s)
        if hit is None:
            hit = self.poly.meets_cone(self.fan.cone(s))
            self._meets[s] = hit
        return hit

    def old_rays_only(self, s: frozenset) -> bool:
        return all(r in self.cone_rays for r in s)

    def violates_big(self, s: frozenset) -> bool:
        """Cones breaking the big property relative to ``P``."""
        if not s or not self.old_rays_only(s):
            return False
        if self.meets(s):
            return not any(self.meets(frozenset([r])) for r in s)
        return not self.is_face(s)

    # -- procedures --------------------------------------------------------

    def smooth_economical(self, avoid: Iterable[Sequence[int]] = ()) -> None:
        """Star at lattice points of minimal non-smooth cones until smooth."""
        avoid = {tuple(a) for a in avoid}
        while True:
            bad = [s for s in self.fan.cones if not self.fan.cone(s).is_smooth]
            if not bad:
                return
            low = min(self.fan.cone(s).dim for s in bad)
            pool = sorted((s for s in bad if self.fan.cone(s).dim == low), key=sorted)
            center = None
            for s in pool:
                c = self.fan.cone(s)
                if not c.is_simplicial:
                    center = sorted(s)[0]
                    break
                pts = [p for p in c.hilbert_basis() if p not in s and p not in avoid]
                if pts:
                    center = min(pts, key=lambda p: (c.level(p), p))
                    break
            if center is None:
                raise ResolutionError("every available smoothing center is the avoided point")
            self.star(center)

    def big_upgrade(self, avoid: Iterable[Sequence[int]] = ()) -> None:
        """Star at ray sums of cones violating the big property."""
        avoid = {tuple(a) for a in avoid}
        guard = 0
        while True:
            bad = [s for s in self.fan.cones if self.violates_big(s)]
            if not bad:
                return
            minimal = [s for s in bad if not any(t < s for t in bad)]
            choices = sorted(minimal, key=lambda s: (len(s), sorted(s)))
            n = None
            for s in choices:
                cand = primitive(self.fan.cone(s).ray_sum())
                if cand not in avoid:
                    n = cand
                    break
            if n is None:
                raise ResolutionError("every available upgrade center is the avoided point")
            self.star(n)
            guard += 1
            if guard > 10_000:  # pragma: no cover - the count of violators strictly drops
                raise ResolutionError("upgrade did not terminate")

    # -- checks ------------------------------------------------------------

    def check_refinement(self) -> None:
        fan = self.fan
        if not fan.is_smooth():
            raise ResolutionError("refinement is not smooth")
        for f in self.cone.faces():
            key = frozenset(f.rays)
            if f.is_smooth and not self.meets_cone(f) and key not in fan.cones:
                raise ResolutionError(f"smooth face {f} was subdivided")
        for s in fan.cones:
            if self.violates_big(s):
                raise ResolutionError(f"cone {sorted(s)} breaks the big property")

    def meets_cone(self, c: Cone) -> bool:
        return self.poly is not None and not self.poly.empty and self.poly.meets_cone(c)


def _as_fan(x: Cone | Fan) -> tuple[Cone, Fan]:
    if isinstance(x, Fan):
        maxi = x.maximal_cones()
        gens = [r for c in maxi for r in c.rays]
        return Cone(gens, x.ambient), x
    return x, Fan.from_cone(x)


def smooth_economical_refinement(x: Cone | Fan) -> RefinementTrace:
    """Smooth star refinement keeping every smooth cone of the input."""
    cone, fan = _as_fan(x)
    r = _Refiner(cone, fan)
    r.smooth_economical()
    return r.trace("smooth")


def big_upgrade(fan: Fan, cone: Cone, poly: Polyhedron | None = None) -> RefinementTrace:
    """Make a smooth refinement of ``cone`` big (relative to ``poly`` when given)."""
    if not fan.is_smooth():
        raise ResolutionError("big_upgrade needs a smooth fan")
    r = _Refiner(cone, fan, poly)
    r.big_upgrade()
    return r.trace("big")


def p_refinement(cone: Cone, poly: Polyhedron | None) -> RefinementTrace:
    """Smooth refinement that is economical and big relative to ``poly``."""
    r = _Refiner(cone, None, poly)
    r.smooth_economical()
    r.big_upgrade()
    r.check_refinement()
    return r.trace("P")


# --- the valuation-avoiding refinement -----------------------------------


def _cone_star_set(cone: Cone, poly: Polyhedron | None):
    def singular(x: Sequence[int]) -> bool:
        return not cone.face_containing(x).is_smooth

    def starred(x: Sequence[int]) -> bool:
        f = cone.face_containing(x)
        return not f.is_smooth or (poly is not None and not poly.empty and poly.meets_cone(f))

    return singular, starred


def _below(cone: Cone, nu: Sequence[int], pred) -> list[IntVec]:
    """Nonzero lattice points ``p != nu`` with ``p <= nu`` satisfying ``pred``, by level."""
    nu = tuple(nu)
    pts = [
        p
        for p in cone.lattice_points(int(cone.level(nu)))
        if any(p) and p != nu and cone.contains(sub(nu, p)) and pred(p)
    ]
    return sorted(pts, key=lambda p: (cone.level(p), p))


def _minimal(cone: Cone, pts: list[IntVec]) -> list[IntVec]:
    out: list[IntVec] = []
    for p in pts:
        if not any(cone.contains(sub(p, m)) for m in out):
            out.append(p)
    return out


def avoid_valuation_refinement(cone: Cone, poly: Polyhedron | None, nu: Sequence[int]) -> RefinementTrace:
    """Smooth refinement, economical and big relative to ``poly``, where ``nu``
    lies in the relative interior of a cone of dimension at least two that
    meets ``poly`` or is not a face of ``cone``."""
    nu = tuple(nu)
    if not cone.contains(nu) or not any(nu):
        raise ResolutionError("the point must be a nonzero lattice point of the cone")
    if content(nu) != 1:
        raise ResolutionError("the point must be primitive")
    singular, starred = _cone_star_set(cone, poly)
    if not starred(nu):
        raise ResolutionError("the point is neither singular nor over the polyhedron")
    lower_star = _below(cone, nu, starred)
    if not lower_star:
        raise ResolutionError("no avoiding resolution exists (valuation is an essential candidate)")
    if singular(nu):
        lower_sing = [p for p in lower_star if singular(p)]
        if lower_sing:
            trace = _branch_singular(cone, poly, nu, lower_sing)
        else:
            trace = _branch_minimal_singular(cone, poly, nu, lower_star)
    else:
        trace = _branch_regular(cone, poly, nu)
    _check_avoidance(cone, poly, nu, trace)
    return trace


def _check_avoidance(cone: Cone, poly: Polyhedron | None, nu: IntVec, trace: RefinementTrace) -> None:
    r = _Refiner(cone, trace.result, poly)
    r.check_refinement()
    if trace.replay() != trace.result:
        raise ResolutionError("trace does not replay")
    carrier = trace.result.cone_containing(nu)
    if carrier is None or carrier.dim < 2:
        raise ResolutionError("the avoided point spans a ray of the refinement")
    key = frozenset(carrier.rays)
    if not (r.meets_cone(carrier) or not r.is_face(key)):
        raise ResolutionError("the carrier of the avoided point is a face missing the polyhedron")


def _branch_singular(cone, poly, nu, lower_sing) -> RefinementTrace:
    # star at a smaller singular point first, so the carrier of nu keeps a new
    # ray through every later star; the smoothing must never star at nu itself
    errors = []
    for start in _minimal(cone, lower_sing) + [p for p in lower_sing if p not in _minimal(cone, lower_sing)]:
        r = _Refiner(cone, None, poly)
        try:
            r.star(start)
            r.smooth_economical(avoid=[nu])
            r.big_upgrade(avoid=[nu])
        except ResolutionError as exc:
            errors.append(exc)
            continue
        return r.trace("singular")
    raise ResolutionError(f"no smoothing avoids {nu}: {errors[-1] if errors else ''}")


def _branch_regular(cone, poly, nu) -> RefinementTrace:
    tau = cone.face_containing(nu)
    assert tau.is_smooth and tau.dim >= 2
    meeting = [f for f in tau.faces() if f.rays and poly.meets_cone(f)]
    low = min(f.dim for f in meeting)
    tau1 = min((f for f in meeting if f.dim == low), key=lambda f: f.rays)
    n = tau1.ray_sum()
    assert tuple(n) != nu
    r = _Refiner(cone, None, poly)
    r.star(n)
    carrier = r.fan.cone_containing(nu)
    assert carrier is not None and carrier.is_smooth and tuple(primitive(n)) in carrier.rays
    r.smooth_economical(avoid=[nu])
    r.big_upgrade(avoid=[nu])
    return r.trace("regular")


def _branch_minimal_singular(cone, poly, nu, lower_star) -> RefinementTrace:
    nu0 = _minimal(cone, lower_star)[0]
    tau0 = cone.face_containing(nu0)
    assert tau0.is_smooth and poly.meets_cone(tau0), "nu0 lies over the polyhedron"
    assert tuple(nu0) == tuple(tau0.ray_sum()), "nu0 is the ray sum of its face"
    plane = Cone([nu0, nu, tuple(-a for a in nu0), tuple(-a for a in nu)], cone.ambient)
    gamma = cone & plane
    assert gamma.dim == 2 and tuple(nu0) in gamma.rays
    nu1 = next(g for g in gamma.rays if g != tuple(nu0))
    assert gamma.is_smooth, "the plane section is smooth"
    assert tuple(a + b for a, b in zip(nu0, nu1)) == nu, "nu splits as nu0 + nu1"
    tau1 = cone.face_containing(nu1)
    assert tau1.is_smooth
    tau = Cone(list(tau1.rays) + [nu0], cone.ambient)
    assert tau.is_smooth and tau.relint_contains(nu), "the join of tau1 and nu0 is smooth"
    r = _Refiner(cone, None, poly)
    r.star(nu0)
    assert frozenset(tau.rays) in r.fan.cones
    r.smooth_economical(avoid=[nu])
    assert frozenset(tau.rays) in r.fan.cones
    r.big_upgrade(avoid=[nu])
    return r.trace("minimal-singular")


# --- pages, assembly and classification ----------------------------------


def _lift(d: PolyDivisor) -> Polyhedron | None:
    """The degree placed at height zero of a page, or None for an affine locus."""
    if d.locus != "complete":
        return None
    deg = d.degree()
    tail = d.spine_cone()
    return Polyhedron([tuple(v) + (0,) for v in deg.vertices], tail, d.rank + 1)


def _spine_sets(fan: Fan) -> frozenset:
    return frozenset(s for s in fan.cones if all(r[-1] == 0 for r in s))


def extend_to_all_pages(
    trace: RefinementTrace,
    d: PolyDivisor,
    pages: Sequence[str],
    source: str,
    poly: Polyhedron | None = None,
) -> dict[str, Fan]:
    """Replay spine centers on the other pages and finish each page smoothly."""
    spine = _spine_sets(trace.result)
    out = {source: trace.result}
    for y in pages:
        if y == source:
            continue
        cone = d.cayley_cone(y)
        r = _Refiner(cone, None, poly)
        for c in trace.centers:
            if c[-1] == 0:
                r.star(c)
        r.smooth_economical()
        r.big_upgrade()
        r.check_refinement()
        if _spine_sets(r.fan) != spine:
            raise ResolutionError(f"page {y!r} induces a different tail fan")
        out[y] = r.fan
    return out


@dataclass
class ResolutionWitness:
    divisor: PolyDivisor
    pages: tuple[str, ...]
    fans: dict[str, Fan]
    fan: DivisorialFan
    traces: dict[str, RefinementTrace] = field(default_factory=dict)
    extra_point: str | None = None

    @property
    def tail_fan(self) -> list[Cone]:
        first = self.fans[self.pages[0]]
        return [first.cone(s) for s in sorted(_spine_sets(first), key=lambda s: (len(s), sorted(s)))]


def _fresh_label(curve: Curve) -> str:
    i = 0
    while f"z{i}" in curve.points:
        i += 1
    return f"z{i}"


def _with_fresh_point(d: PolyDivisor) -> tuple[PolyDivisor, str]:
    label = _fresh_label(d.curve)
    curve = Curve(d.curve.genus, d.curve.points + (label,))
    return PolyDivisor(d.tail, curve, d.coefficients, d.locus), label


def witness_pages(d: PolyDivisor, page: str | None) -> tuple[PolyDivisor, list[str], str | None]:
    """Pages used for a resolution, adding a fresh curve point when a complete
    locus would otherwise be covered by a single chart."""
    pages = [y for y in d.support if d.in_locus(y)]
    if page is not None and page not in (SPINE, GENERIC) and page not in pages:
        pages.append(page)
    extra = None
    need = 2 if d.locus == "complete" else 1
    while len(pages) < need:
        d, extra = _with_fresh_point(d)
        pages.append(extra)
    return d, pages, extra


def assemble_divisorial_fan(d: PolyDivisor, fans: dict[str, Fan], *, validate: bool = True) -> DivisorialFan:
    """Toroidal divisorial fan with the given refinement on each page."""
    pages = list(fans)
    spines = {_spine_sets(f) for f in fans.values()}
    if len(spines) != 1:
        raise ResolutionError("page fans induce different tail fans")
    gens = []
    for y in pages:
        for gamma in fans[y].maximal_cones():
            if all(r[-1] == 0 for r in gamma.rays):
                continue
            tail = Cone([r[:-1] for r in gamma.rays if r[-1] == 0], d.rank)
            coeffs = {y: Polyhedron.from_homogeneous(gamma)}
            for z in pages:
                if z != y:
                    coeffs[z] = Polyhedron.empty_set(d.rank, tail)
            for z in d.curve.points:
                if z not in coeffs and not d.in_locus(z):
                    coeffs[z] = Polyhedron.empty_set(d.rank, tail)
            gens.append(PolyDivisor(tail, d.curve, coeffs, "affine"))
    return DivisorialFan.generated_by(gens, validate=validate)


@dataclass(frozen=True)
class Classification:
    exc_over_toroidification: bool
    exc_over_x: bool
    theta: Cone

    @property
    def label(self) -> str:
        if self.exc_over_toroidification and self.exc_over_x:
            return "both"
        if self.exc_over_toroidification:
            return "ExcOverToroidification"
        if self.exc_over_x:
            return "ExcOverX"
        return "NotExceptional"


def exceptional_classification(nu: HypPoint, w: ResolutionWitness, d: PolyDivisor | None = None) -> Classification:
    """Whether ``nu`` is exceptional over the toroidification and over ``X``.

    ``nu`` is exceptional exactly when the cone carrying it is minimal among
    exceptional cones, i.e. its center is a component of the exceptional locus.
    """
    d = w.divisor if d is None else d
    if nu.page == GENERIC and w.extra_point is not None:
        nu = HypPoint(w.extra_point, nu.a, nu.b)
    page = w.pages[0] if nu.on_spine else nu.page
    if page not in w.fans:
        raise ResolutionError(f"page {page!r} is not covered by the witness")
    fan = w.fans[page]
    base = w.divisor.cayley_cone(page)
    base_faces = {frozenset(f.rays) for f in base.faces()}
    deg = d.degree() if d.locus == "complete" else None
    theta = fan.cone_containing(nu.vector)
    if theta is None:
        raise ResolutionError(f"{nu} is outside the witness")

    def exc_tilde(s: frozenset) -> bool:
        return s not in base_faces

    def exc_x(s: frozenset) -> bool:
        if exc_tilde(s):
            return True
        if deg is None or not s or any(r[-1] != 0 for r in s):
            return False
        return deg.meets_cone(Cone([r[:-1] for r in s], d.rank))

    key = frozenset(theta.rays)
    faces = [frozenset(f.rays) for f in theta.faces() if len(f.rays) < len(theta.rays)]

    def minimal_in(pred) -> bool:
        return pred(key) and not any(pred(f) for f in faces)

    return Classification(minimal_in(exc_tilde), minimal_in(exc_x), theta)


def certify_non_essential(nu: HypPoint, d: PolyDivisor) -> ResolutionWitness:
    """Resolution of ``X`` on which the non-minimal singular ``nu`` is not exceptional."""
    from .hyperorder import is_minimal_singular

    if not d.singular_center(nu):
        raise ResolutionError(f"{nu} does not have a singular center")
    if content(nu.vector) != 1:
        raise ResolutionError(f"{nu} is not primitive")
    if is_minimal_singular(d, nu):
        raise ResolutionError(f"{nu} is minimal; no avoiding resolution is claimed")
    generic = None
    if nu.page == GENERIC:
        # an unlisted point with trivial coefficient stands for the generic page
        d, generic = _with_fresh_point(d)
        nu = HypPoint(generic, nu.a, nu.b)
    d2, pages, extra = witness_pages(d, None if nu.on_spine else nu.page)
    extra = generic or extra
    source = pages[0] if nu.on_spine else nu.page
    poly = _lift(d2)
    trace = avoid_valuation_refinement(d2.cayley_cone(source), poly, nu.vector)
    fans = extend_to_all_pages(trace, d2, pages, source, poly)
    efan = assemble_divisorial_fan(d2, fans)
    w = ResolutionWitness(d2, tuple(pages), fans, efan, {source: trace}, extra)
    cls = exceptional_classification(nu, w, d2)
    if cls.exc_over_x:
        raise ResolutionError(f"witness leaves {nu} exceptional")  # pragma: no cover
    return w


__all__ = [
    "Classification",
    "RefinementTrace",
    "ResolutionError",
    "ResolutionWitness",
    "assemble_divisorial_fan",
    "avoid_valuation_refinement",
    "big_upgrade",
    "certify_non_essential",
    "exceptional_classification",
    "extend_to_all_pages",
    "p_refinement",
    "smooth_economical_refinement",
    "witness_pages",
]
