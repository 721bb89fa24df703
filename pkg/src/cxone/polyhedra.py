"""Exact rational cones, polyhedra and fans.

Cones are kept in both representations at once.  The inequality description
is found by brute force over subsets of generators: every facet of a
``k``-dimensional cone is spanned by ``k - 1`` of its generators, so for the
small ranks used here this is both exact and fast enough.  Intersections are
obtained through duality, which keeps a single conversion routine.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from functools import lru_cache
from math import ceil, floor
from typing import Iterable, Sequence

import numpy as np

from .lattice import (
    IntVec,
    LatticeError,
    RatVec,
    dot,
    is_basis_extendable,
    is_zero,
    lattice_index,
    nullspace,
    parallelepiped_points,
    primitive,
    rank,
    sub,
)


class PolyhedralError(ValueError):
    pass


def _unique(vectors: Iterable[IntVec]) -> list[IntVec]:
    seen: dict[IntVec, None] = {}
    for v in vectors:
        seen.setdefault(v, None)
    return list(seen)


@lru_cache(maxsize=65536)
def _describe(gens: tuple[IntVec, ...], ambient: int):
    """Equations, facets, lineality basis and rays of ``cone(gens)``."""
    eqs = nullspace(gens, ambient)
    k = ambient - len(eqs)
    facets: dict[IntVec, None] = {}
    for combo in combinations(gens, k - 1):
        if k > 1 and rank(combo) != k - 1:
            continue
        ns = nullspace(list(combo) + eqs, ambient)
        if len(ns) != 1:
            continue
        u = ns[0]
        vals = [dot(u, g) for g in gens]
        if all(x >= 0 for x in vals):
            facets.setdefault(u, None)
        elif all(x <= 0 for x in vals):
            facets.setdefault(tuple(-a for a in u), None)
    facet_list = tuple(sorted(facets))
    lin = nullspace(list(facet_list) + eqs, ambient)
    # an extreme ray (modulo the lineality space) is cut out by its tight
    # facets up to one dimension
    target = ambient - 1 - len(lin)
    chosen: dict[frozenset, IntVec] = {}
    for g in gens:
        tight = [f for f in facet_list if dot(f, g) == 0]
        if lin and len(tight) == len(facet_list):
            continue
        if rank(tight + eqs) == target:
            chosen.setdefault(frozenset(tight), g)
    extreme = sorted(chosen.values())
    if lin:
        rays = tuple(list(lin) + [tuple(-a for a in v) for v in lin] + extreme)
    else:
        rays = tuple(extreme)
    return tuple(eqs), facet_list, tuple(lin), rays


class Cone:
    """Rational polyhedral cone ``cone(generators)`` in ``Q^ambient``.

    ``rays`` holds primitive integer generators: the extreme rays when the
    cone is pointed, otherwise a basis of the lineality space (both signs)
    followed by one representative per extreme ray of the pointed quotient.
    ``equations`` spans the orthogonal complement of the linear span and
    ``facets`` are primitive inward normals chosen inside that span.
    """

    __slots__ = ("ambient", "rays", "equations", "facets", "lineality", "_faces", "_hb")

    def __init__(self, generators: Iterable[Sequence], ambient: int | None = None):
        gens = _unique(primitive(g) for g in generators if not is_zero(g))
        if ambient is None:
            if not gens:
                raise PolyhedralError("ambient dimension needed for the zero cone")
            ambient = len(gens[0])
        if any(len(g) != ambient for g in gens):
            raise PolyhedralError("generators of mixed dimension")
        self.ambient = ambient
        self._faces: list[Cone] | None = None
        self._hb: list[IntVec] | None = None
        if not gens:
            self.equations = tuple(tuple(int(i == j) for j in range(ambient)) for i in range(ambient))
            self.facets: tuple[IntVec, ...] = ()
            self.lineality: tuple[IntVec, ...] = ()
            self.rays: tuple[IntVec, ...] = ()
            return
        self.equations, self.facets, self.lineality, self.rays = _describe(tuple(sorted(gens)), ambient)

    # -- basic predicates --------------------------------------------------

    @classmethod
    def zero(cls, ambient: int) -> Cone:
        return cls([], ambient)

    @classmethod
    def from_inequalities(
        cls, facets: Iterable[Sequence], equations: Iterable[Sequence] = (), ambient: int | None = None
    ) -> Cone:
        """Cone ``{x : f.x >= 0, e.x = 0}``."""
        facets = list(facets)
        equations = list(equations)
        gens = facets + equations + [tuple(-a for a in e) for e in equations]
        if ambient is None:
            if not gens:
                raise PolyhedralError("ambient dimension needed")
            ambient = len(gens[0])
        return cls(gens, ambient).dual()

    @property
    def dim(self) -> int:
        return self.ambient - len(self.equations)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    def contains(self, x: Sequence) -> bool:
        return all(dot(e, x) == 0 for e in self.equations) and all(dot(f, x) >= 0 for f in self.facets)

    def relint_contains(self, x: Sequence) -> bool:
        return all(dot(e, x) == 0 for e in self.equations) and all(dot(f, x) > 0 for f in self.facets)

    def contains_cone(self, other: Cone) -> bool:
        return all(self.contains(r) for r in other.rays)

    def __contains__(self, x: Sequence) -> bool:
        return self.contains(x)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cone):
            return NotImplemented
        if self.ambient != other.ambient or self.dim != other.dim:
            return False
        if self.is_pointed and other.is_pointed:
            return set(self.rays) == set(other.rays)
        return self.contains_cone(other) and other.contains_cone(self)

    def __hash__(self) -> int:
        if self.is_pointed:
            return hash((self.ambient, frozenset(self.rays)))
        return hash((self.ambient, self.dim, len(self.lineality)))

    def __repr__(self) -> str:
        return f"Cone({[list(r) for r in self.rays]})" if self.rays else f"Cone.zero({self.ambient})"

    @property
    def is_simplicial(self) -> bool:
        return self.is_pointed and len(self.rays) == self.dim

    @property
    def is_smooth(self) -> bool:
        return self.is_simplicial and is_basis_extendable(self.rays)

    @property
    def multiplicity(self) -> int:
        """Lattice index of a simplicial cone (1 exactly when smooth)."""
        if not self.is_simplicial:
            raise PolyhedralError("multiplicity is defined for simplicial cones")
        return lattice_index(self.rays)

    def ray_sum(self) -> IntVec:
        """Sum of the primitive ray generators, a point of the relative interior."""
        return tuple(sum(c) for c in zip(*self.rays)) if self.rays else (0,) * self.ambient

    # -- duality and intersections -----------------------------------------

    def dual(self) -> Cone:
        gens = list(self.facets) + list(self.equations) + [tuple(-a for a in e) for e in self.equations]
        return Cone(gens, self.ambient)

    def intersection(self, other: Cone) -> Cone:
        if self.ambient != other.ambient:
            raise PolyhedralError("ambient mismatch")
        return Cone(list(self.dual().rays) + list(other.dual().rays), self.ambient).dual()

    def __and__(self, other: Cone) -> Cone:
        return self.intersection(other)

    # -- faces -------------------------------------------------------------

    def _require_pointed(self) -> None:
        if not self.is_pointed:
            raise PolyhedralError("operation needs a strictly convex cone")

    def faces(self) -> list[Cone]:
        """All faces, including the cone itself and the zero face."""
        self._require_pointed()
        if self._faces is None:
            idx = range(len(self.rays))
            tight = [frozenset(i for i in idx if dot(f, self.rays[i]) == 0) for f in self.facets]
            found = {frozenset(idx)}
            frontier = [frozenset(idx)]
            while frontier:
                nxt = []
                for s in frontier:
                    for t in tight:
                        u = s & t
                        if u not in found:
                            found.add(u)
                            nxt.append(u)
                frontier = nxt
            found.add(frozenset())
            faces = [Cone([self.rays[i] for i in s], self.ambient) for s in found]
            faces.sort(key=lambda c: (c.dim, c.rays))
            self._faces = faces
        return list(self._faces)

    def face_containing(self, x: Sequence) -> Cone:
        """Smallest face containing ``x`` (``x`` lies in its relative interior)."""
        self._require_pointed()
        if not self.contains(x):
            raise PolyhedralError(f"{tuple(x)} is not in the cone")
        tight = [f for f in self.facets if dot(f, x) == 0]
        return Cone([r for r in self.rays if all(dot(f, r) == 0 for f in tight)], self.ambient)

    def is_face(self, other: Cone) -> bool:
        """True iff ``other`` is a face of this cone."""
        if other.ambient != self.ambient or not self.contains_cone(other):
            return False
        return self.face_containing(other.ray_sum()) == other

    def facet_cones(self) -> list[Cone]:
        return [Cone([r for r in self.rays if dot(f, r) == 0], self.ambient) for f in self.facets]

    # -- lattice points ----------------------------------------------------

    @property
    def level_form(self) -> IntVec:
        """Sum of the facet normals; positive on the cone minus the origin."""
        self._require_pointed()
        if not self.facets:
            # a single ray in its span, or the zero cone
            return tuple(sum(c) for c in zip(*self.rays)) if self.rays else (0,) * self.ambient
        return tuple(sum(c) for c in zip(*self.facets))

    def level(self, x: Sequence) -> Fraction | int:
        return dot(self.level_form, x)

    def lattice_points(self, max_level: int) -> list[IntVec]:
        """Lattice points of the cone with level at most ``max_level``."""
        self._require_pointed()
        if not self.rays:
            return [(0,) * self.ambient]
        lf = self.level_form
        corners = [tuple(Fraction(a * max_level, dot(lf, r)) for a in r) for r in self.rays]
        corners.append((0,) * self.ambient)
        lo = [floor(min(c[i] for c in corners)) for i in range(self.ambient)]
        hi = [ceil(max(c[i] for c in corners)) for i in range(self.ambient)]
        ineq = list(self.facets) + [tuple(-a for a in lf)]
        rhs = [0] * len(self.facets) + [-max_level]
        return box_points(lo, hi, ineq, rhs, self.equations)

    def triangulate(self) -> list[tuple[IntVec, ...]]:
        """Pulling triangulation into simplicial cones using only existing rays."""
        self._require_pointed()
        if self.is_simplicial:
            return [self.rays]
        r0 = self.rays[0]
        out = []
        for facet in self.facet_cones():
            if r0 in facet.rays:
                continue
            for simplex in facet.triangulate():
                out.append(simplex + (r0,))
        return out

    def hilbert_basis(self) -> list[IntVec]:
        """Minimal generators of the semigroup of lattice points."""
        self._require_pointed()
        if self._hb is None:
            cands = set(self.rays)
            for simplex in self.triangulate():
                cands.update(p for p in parallelepiped_points(simplex) if not is_zero(p))
            ordered = sorted(cands, key=lambda p: (self.level(p), p))
            kept: list[IntVec] = []
            for p in ordered:
                if not any(self.contains(sub(p, q)) for q in kept):
                    kept.append(p)
            self._hb = sorted(kept)
        return list(self._hb)


def box_points(
    lo: Sequence[int],
    hi: Sequence[int],
    ineqs: Sequence[Sequence],
    rhs: Sequence,
    equations: Sequence[Sequence] = (),
) -> list[IntVec]:
    """Integer points of the box ``[lo, hi]`` with ``A x >= b`` and ``E x = 0``.

    Rational coefficients are cleared row by row so the scan runs in int64.
    """
    n = len(lo)
    if n == 0:
        return [()]

    def integral_row(row: Sequence, b=0):
        vals = [Fraction(a) for a in row] + [Fraction(b)]
        den = 1
        for v in vals:
            den = den * v.denominator // np.gcd(den, v.denominator)
        ints = [int(v * den) for v in vals]
        return ints[:-1], ints[-1]

    a_rows, b_vals = [], []
    for row, b in zip(ineqs, rhs):
        r, bb = integral_row(row, b)
        a_rows.append(r)
        b_vals.append(bb)
    e_rows = [integral_row(e)[0] for e in equations]
    A = np.array(a_rows, dtype=np.int64).reshape(len(a_rows), n)
    B = np.array(b_vals, dtype=np.int64)
    E = np.array(e_rows, dtype=np.int64).reshape(len(e_rows), n)
    axes = [np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo, hi)]
    if any(len(ax) == 0 for ax in axes):
        return []
    out: list[IntVec] = []
    rest = axes[1:]
    if rest:
        grid = np.array(np.meshgrid(*rest, indexing="ij")).reshape(n - 1, -1).T
    else:
        grid = np.zeros((1, 0), dtype=np.int64)
    for x0 in axes[0]:
        pts = np.hstack([np.full((grid.shape[0], 1), x0, dtype=np.int64), grid])
        mask = np.ones(pts.shape[0], dtype=bool)
        if len(A):
            mask &= np.all(pts @ A.T >= B, axis=1)
        if len(E):
            mask &= np.all(pts @ E.T == 0, axis=1)
        out.extend(tuple(int(v) for v in p) for p in pts[mask])
    return out


class Polyhedron:
    """``conv(vertices) + tail`` with a strictly convex tail, or the empty set.

    The empty polyhedron is absorbing for Minkowski sums.
    """

    __slots__ = ("ambient", "vertices", "tail", "empty", "_hom")

    def __init__(
        self,
        points: Iterable[Sequence] = (),
        tail: Cone | Iterable[Sequence] | None = None,
        ambient: int | None = None,
    ):
        pts = [tuple(Fraction(a) for a in p) for p in points]
        if ambient is None:
            if pts:
                ambient = len(pts[0])
            elif isinstance(tail, Cone):
                ambient = tail.ambient
            else:
                raise PolyhedralError("ambient dimension needed")
        self.ambient = ambient
        if tail is None:
            tail = Cone.zero(ambient)
        elif not isinstance(tail, Cone):
            tail = Cone(list(tail), ambient)
        if tail.ambient != ambient:
            raise PolyhedralError("tail has the wrong dimension")
        if not tail.is_pointed:
            raise PolyhedralError("tail cone must be strictly convex")
        self.tail = tail
        self.empty = not pts
        self._hom: Cone | None = None
        if self.empty:
            self.vertices: tuple[RatVec, ...] = ()
            return
        hom = Cone([_homogenize(p) for p in pts] + [tuple(r) + (0,) for r in tail.rays], ambient + 1)
        self._hom = hom
        self.vertices = tuple(sorted(_dehomogenize(r) for r in hom.rays if r[-1] > 0))

    @classmethod
    def empty_set(cls, ambient: int, tail: Cone | None = None) -> Polyhedron:
        return cls([], tail if tail is not None else Cone.zero(ambient), ambient)

    @classmethod
    def from_homogeneous(cls, cone: Cone) -> Polyhedron:
        """Slice of a cone at last coordinate one."""
        n = cone.ambient - 1
        verts = [_dehomogenize(r) for r in cone.rays if r[-1] > 0]
        tail = Cone([r[:-1] for r in cone.rays if r[-1] == 0], n)
        if any(r[-1] < 0 for r in cone.rays):
            raise PolyhedralError("cone is not contained in the upper half space")
        return cls(verts, tail, n)

    @property
    def homogenization(self) -> Cone:
        if self.empty:
            raise PolyhedralError("empty polyhedron has no homogenization")
        assert self._hom is not None
        return self._hom

    @property
    def is_bounded(self) -> bool:
        return not self.tail.rays

    @property
    def dim(self) -> int:
        return -1 if self.empty else self.homogenization.dim - 1

    def contains(self, x: Sequence) -> bool:
        if self.empty:
            return False
        return self.homogenization.contains(tuple(x) + (1,))

    def __contains__(self, x: Sequence) -> bool:
        return self.contains(x)

    def inequalities(self) -> list[tuple[IntVec, int]]:
        """Pairs ``(u, c)`` meaning ``u.x + c >= 0``; the trivial ``1 >= 0`` is dropped."""
        return [(f[:-1], f[-1]) for f in self.homogenization.facets if not is_zero(f[:-1])]

    def equations(self) -> list[tuple[IntVec, int]]:
        return [(e[:-1], e[-1]) for e in self.homogenization.equations]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polyhedron):
            return NotImplemented
        if self.ambient != other.ambient or self.empty != other.empty:
            return False
        return self.empty or (self.vertices == other.vertices and self.tail == other.tail)

    def __hash__(self) -> int:
        return hash((self.ambient, self.vertices, self.tail))

    def __repr__(self) -> str:
        if self.empty:
            return "Polyhedron(empty)"
        vs = [tuple(str(a) for a in v) for v in self.vertices]
        return f"Polyhedron({vs} + {self.tail!r})"

    def __add__(self, other: Polyhedron) -> Polyhedron:
        return minkowski_sum(self, other)

    def scaled(self, c: int | Fraction) -> Polyhedron:
        """``c * P`` for ``c > 0``; ``0 * P`` is the tail cone."""
        if self.empty:
            return self
        if c == 0:
            return Polyhedron([(0,) * self.ambient], self.tail, self.ambient)
        return Polyhedron([tuple(c * a for a in v) for v in self.vertices], self.tail, self.ambient)

    def translate(self, t: Sequence) -> Polyhedron:
        if self.empty:
            return self
        return Polyhedron([tuple(a + b for a, b in zip(v, t)) for v in self.vertices], self.tail, self.ambient)

    def intersection(self, other: Polyhedron) -> Polyhedron:
        if self.empty or other.empty:
            return Polyhedron.empty_set(self.ambient, self.tail & other.tail)
        cone = self.homogenization & other.homogenization
        if not any(r[-1] > 0 for r in cone.rays):
            return Polyhedron.empty_set(self.ambient, self.tail & other.tail)
        return Polyhedron.from_homogeneous(cone)

    def __and__(self, other: Polyhedron) -> Polyhedron:
        return self.intersection(other)

    def meets_cone(self, tau: Cone) -> bool:
        """Exact feasibility of ``P ∩ tau``."""
        if self.empty:
            return False
        return not (self & Polyhedron([(0,) * self.ambient], tau, self.ambient)).empty

    def is_face_of(self, other: Polyhedron) -> bool:
        if self.empty:
            return True
        if other.empty:
            return False
        return other.homogenization.is_face(self.homogenization)

    def faces(self) -> list[Polyhedron]:
        """Nonempty faces."""
        if self.empty:
            return []
        out = []
        for f in self.homogenization.faces():
            if any(r[-1] > 0 for r in f.rays):
                out.append(Polyhedron.from_homogeneous(f))
        return out

    def bounded_faces(self) -> list[Polyhedron]:
        return [f for f in self.faces() if f.is_bounded]

    def support(self, m: Sequence) -> Fraction:
        """``min <m, P>``; ``m`` must lie in the dual of the tail."""
        if self.empty:
            raise PolyhedralError("support function of the empty set")
        if not self.tail.dual().contains(m):
            raise PolyhedralError(f"{tuple(m)} is unbounded below on the polyhedron")
        return min(Fraction(dot(m, v)) for v in self.vertices)

    def lattice_points(self) -> list[IntVec]:
        if self.empty:
            return []
        if not self.is_bounded:
            raise PolyhedralError("lattice points of an unbounded polyhedron")
        lo = [floor(min(v[i] for v in self.vertices)) for i in range(self.ambient)]
        hi = [ceil(max(v[i] for v in self.vertices)) for i in range(self.ambient)]
        ineqs = self.inequalities()
        eqs = self.equations()
        # equations u.x + c = 0 become two inequalities
        rows = [u for u, _ in ineqs] + [u for u, _ in eqs] + [tuple(-a for a in u) for u, _ in eqs]
        rhs = [-c for _, c in ineqs] + [-c for _, c in eqs] + [c for _, c in eqs]
        return box_points(lo, hi, rows, rhs)


def _homogenize(p: Sequence) -> IntVec:
    return primitive(tuple(Fraction(a) for a in p) + (Fraction(1),))


def _dehomogenize(r: Sequence) -> RatVec:
    return tuple(Fraction(a, r[-1]) for a in r[:-1])


def minkowski_sum(p: Polyhedron, q: Polyhedron) -> Polyhedron:
    if p.ambient != q.ambient:
        raise PolyhedralError("ambient mismatch")
    if p.empty or q.empty:
        return Polyhedron.empty_set(p.ambient, Cone(list(p.tail.rays) + list(q.tail.rays), p.ambient))
    pts = [tuple(a + b for a, b in zip(u, v)) for u in p.vertices for v in q.vertices]
    return Polyhedron(pts, Cone(list(p.tail.rays) + list(q.tail.rays), p.ambient), p.ambient)


def polyhedron_meets_cone(p: Polyhedron, tau: Cone) -> bool:
    return p.meets_cone(tau)


def dual_cone(c: Cone) -> Cone:
    return c.dual()


def face_of(x: Sequence, c: Cone) -> Cone:
    return c.face_containing(x)


def relint_contains(c: Cone, x: Sequence) -> bool:
    return c.relint_contains(x)


def is_smooth(c: Cone) -> bool:
    return c.is_smooth


def hilbert_basis(c: Cone) -> list[IntVec]:
    return c.hilbert_basis()


def lattice_points(p: Polyhedron) -> list[IntVec]:
    return p.lattice_points()


class NewtonHull:
    """Convex hull of the nonzero lattice points of a strictly convex cone."""

    def __init__(self, cone: Cone):
        if not cone.is_pointed or not cone.rays:
            raise PolyhedralError("Newton hull needs a nonzero strictly convex cone")
        self.cone = cone
        self.hilbert_basis = cone.hilbert_basis()
        self.polyhedron = Polyhedron(self.hilbert_basis, cone)
        faces = self.polyhedron.bounded_faces()
        self.bounded_faces = sorted(faces, key=lambda f: (-f.dim, f.vertices))
        maximal = [f for f in faces if not any(f is not g and set(f.vertices) < set(g.vertices) for g in faces)]
        pts: set[IntVec] = set()
        for f in maximal:
            pts.update(f.lattice_points())
        self.boundary_points = sorted(pts)

    def on_compact_boundary(self, x: Sequence) -> bool:
        return tuple(x) in set(self.boundary_points)

    def max_boundary_level(self) -> Fraction | int:
        return max(self.cone.level(p) for p in self.boundary_points)


def newton_hull(c: Cone) -> NewtonHull:
    return NewtonHull(c)


RaySet = frozenset  # frozenset of primitive integer ray tuples


class Fan:
    """Finite fan stored as the face-closed set of its cones (as ray sets)."""

    __slots__ = ("ambient", "cones", "_cache")

    def __init__(self, maximal: Iterable[Iterable[Sequence]], ambient: int):
        self.ambient = ambient
        self._cache: dict[RaySet, Cone] = {}
        cones: set[RaySet] = {frozenset()}
        for rays in maximal:
            c = Cone(list(rays), ambient)
            if not c.is_pointed:
                raise PolyhedralError("fan cones must be strictly convex")
            for f in c.faces():
                key = frozenset(f.rays)
                self._cache.setdefault(key, f)
                cones.add(key)
        self.cones = frozenset(cones)

    @classmethod
    def from_cone(cls, c: Cone) -> Fan:
        return cls([c.rays], c.ambient)

    @classmethod
    def _from_sets(cls, sets: Iterable[RaySet], ambient: int, cache: dict[RaySet, Cone]) -> Fan:
        fan = cls.__new__(cls)
        fan.ambient = ambient
        fan._cache = {k: v for k, v in cache.items()}
        fan.cones = frozenset(sets) | {frozenset()}
        return fan

    def cone(self, rays: RaySet) -> Cone:
        c = self._cache.get(rays)
        if c is None:
            c = Cone(list(rays), self.ambient)
            self._cache[rays] = c
        return c

    def all_cones(self) -> list[Cone]:
        return [self.cone(s) for s in sorted(self.cones, key=lambda s: (len(s), sorted(s)))]

    @property
    def rays(self) -> list[IntVec]:
        return sorted({r for s in self.cones for r in s})

    def maximal_cones(self) -> list[Cone]:
        sets = [s for s in self.cones if not any(s < t for t in self.cones)]
        return [self.cone(s) for s in sorted(sets, key=sorted)]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Fan) and self.ambient == other.ambient and self.cones == other.cones

    def __hash__(self) -> int:
        return hash(self.cones)

    def __repr__(self) -> str:
        return f"Fan({[list(map(list, c.rays)) for c in self.maximal_cones()]})"

    def __contains__(self, c: Cone) -> bool:
        return c.is_pointed and frozenset(c.rays) in self.cones

    def cone_containing(self, x: Sequence) -> Cone | None:
        """The cone whose relative interior contains ``x``."""
        for s in sorted(self.cones, key=len):
            c = self.cone(s)
            if c.relint_contains(x):
                return c
        return None

    def is_smooth(self) -> bool:
        return all(self.cone(s).is_smooth for s in self.cones)

    def is_simplicial(self) -> bool:
        return all(self.cone(s).is_simplicial for s in self.cones)

    def restrict(self, c: Cone) -> Fan:
        """Subfan of cones contained in ``c``."""
        keep = [s for s in self.cones if c.contains_cone(self.cone(s))]
        return Fan._from_sets(keep, self.ambient, self._cache)

    def star(self, v: Sequence) -> Fan:
        """Star subdivision at the primitive vector through ``v``.

        Cones containing ``v`` are replaced by the joins of ``v`` with their
        faces not containing ``v``.  On a simplicial fan a star at an
        existing ray changes nothing.
        """
        v = primitive(v)
        hit = [s for s in self.cones if self.cone(s).contains(v)]
        if not hit:
            raise PolyhedralError(f"{v} is outside the support of the fan")
        hit_set = set(hit)
        new = {s for s in self.cones if s not in hit_set}
        for s in hit:
            for f in self.cones:
                if f <= s and f not in hit_set:
                    new.add(f | {v})
        return Fan._from_sets(new, self.ambient, self._cache)

    def validate(self) -> None:
        """Check that cones meet along common faces."""
        cones = sorted(self.cones, key=len)
        for a, b in combinations(cones, 2):
            ca, cb = self.cone(a), self.cone(b)
            inter = ca & cb
            common = self.cone(a & b)
            if inter != common:
                raise PolyhedralError(f"cones {sorted(a)} and {sorted(b)} overlap badly")
        for s in self.cones:
            for f in self.cone(s).faces():
                if frozenset(f.rays) not in self.cones:
                    raise PolyhedralError("fan is not closed under faces")


def star_subdivision(fan: Fan, v: Sequence) -> Fan:
    return fan.star(v)


def cone_points_in_box(c: Cone, bound: int) -> list[IntVec]:
    """Lattice points of ``c`` with all coordinates in ``[-bound, bound]``."""
    n = c.ambient
    return box_points([-bound] * n, [bound] * n, list(c.facets), [0] * len(c.facets), c.equations)


__all__ = [
    "Cone",
    "Fan",
    "LatticeError",
    "NewtonHull",
    "PolyhedralError",
    "Polyhedron",
    "box_points",
    "cone_points_in_box",
    "dual_cone",
    "face_of",
    "hilbert_basis",
    "is_smooth",
    "lattice_points",
    "minkowski_sum",
    "newton_hull",
    "polyhedron_meets_cone",
    "relint_contains",
    "star_subdivision",
]
