from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cxone.lattice import primitive
from cxone.polyhedra import Cone, Fan, NewtonHull, PolyhedralError, Polyhedron

import oracles

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
SIGMA = Cone([(1, 0), (0, 1)], 2)
SKEW_CY0 = Cone([E1, E2, E3, (2, -1, 1)], 3)


def test_dual_examples():
    assert SIGMA.dual() == SIGMA
    assert set(Cone([(1, 0), (1, 2)], 2).dual().rays) == {(0, 1), (2, -1)}
    plane = Cone([(1, 0), (-1, 0), (0, 1), (0, -1)], 2)
    assert plane.dual() == Cone.zero(2)


def test_dual_matches_elimination_oracle():
    c = Cone([(1, 0), (1, 2)], 2)
    assert set(c.dual().rays) == oracles.facets(c.rays, 2)


def test_face_of_and_relint():
    assert SIGMA.face_containing((1, 1)) == SIGMA
    assert SKEW_CY0.face_containing((1, 0, 1)) == SKEW_CY0
    assert Cone([(1, 0), (5, 3)], 2).relint_contains((2, 1))
    assert not SIGMA.relint_contains((1, 0))


def test_smoothness_examples():
    assert Cone([(1, 0)], 2).is_smooth
    assert not Cone([(1, 0), (1, 2)], 2).is_smooth
    assert not Cone([E1, E2, (1, 1, 2)], 3).is_smooth
    assert not oracles.is_smooth([E1, E2, (1, 1, 2)])


def test_recession_cones():
    half_line = Polyhedron([(Q(5, 3),)], Cone([(1,)], 1))
    assert half_line.tail == Cone([(1,)], 1)
    assert Polyhedron([(0, 0), (1, 1)]).tail == Cone.zero(2)
    seg = Polyhedron([(0, 0), (1, Q(-1, 2))], SIGMA)
    assert seg.tail == SIGMA


def test_minkowski_sums():
    p = Polyhedron([(0, 0), (1, Q(-1, 2))], SIGMA)
    q = Polyhedron([(Q(1, 2), Q(1, 2))], SIGMA)
    assert p + Polyhedron([(0, 0)], SIGMA) == p
    assert p + q == Polyhedron([(Q(1, 2), Q(1, 2)), (Q(3, 2), 0)], SIGMA)
    empty = Polyhedron.empty_set(2, SIGMA)
    assert (empty + p).empty and (p + empty).empty


def test_polyhedron_meets_cone():
    deg = Polyhedron([(Q(1, 2), Q(1, 2)), (Q(3, 2), 0)], SIGMA)
    assert deg.meets_cone(Cone([(1, 0)], 2))
    assert not deg.meets_cone(Cone([(0, 1)], 2))
    assert deg.meets_cone(SIGMA)


def test_polytope_lattice_points():
    assert sorted(Polyhedron([(0, 0), (2, 0)]).lattice_points()) == [(0, 0), (1, 0), (2, 0)]
    assert len(Polyhedron([(0, 0), (1, 0), (0, 1)]).lattice_points()) == 3
    tri = Polyhedron([E1, E2, (1, 1, 2)])
    brute = {p for p in oracles.box(3, 0, 2) if oracles.in_cone((*p, 1), [(*v, 1) for v in [E1, E2, (1, 1, 2)]])}
    assert set(tri.lattice_points()) == brute == {E1, E2, (1, 1, 2)}


def test_hilbert_basis_examples():
    assert set(SIGMA.hilbert_basis()) == {(1, 0), (0, 1)}
    c = Cone([(1, 0), (1, 2)], 2)
    assert set(c.hilbert_basis()) == {(1, 0), (1, 1), (1, 2)} == oracles.hilbert_basis(c.rays, 2)
    c71 = Cone([(1, 0), (5, 3)], 2)
    hb = set(c71.hilbert_basis())
    assert {(1, 0), (5, 3), (2, 1)} <= hb
    assert hb == oracles.hilbert_basis(c71.rays, 2)


def test_newton_boundary_examples():
    assert NewtonHull(SIGMA).boundary_points == [(0, 1), (1, 0)]
    c = Cone([(1, 0), (1, 2)], 2)
    assert set(NewtonHull(c).boundary_points) == {(1, 0), (1, 1), (1, 2)}
    assert set(NewtonHull(c).boundary_points) == oracles.newton_boundary(c.rays, 2, 4)


def test_newton_boundary_of_index_two_simplex():
    # brute force gives only the three rays; see the decisions ledger
    c = Cone([E1, E2, (1, 1, 2)], 3)
    brute = oracles.newton_boundary(c.rays, 3, 3, grid=6)
    assert brute == {E1, E2, (1, 1, 2)}
    assert set(NewtonHull(c).boundary_points) == brute


def test_star_examples():
    fan = Fan.from_cone(Cone([(1, 0), (1, 2)], 2))
    starred = fan.star((1, 1))
    assert {frozenset(c.rays) for c in starred.maximal_cones()} == {
        frozenset({(1, 0), (1, 1)}),
        frozenset({(1, 1), (1, 2)}),
    }
    assert starred.is_smooth()
    assert starred.star((1, 1)) == starred


def test_star_of_the_skew_cone():
    fan = Fan.from_cone(SKEW_CY0).star(E3)
    assert {frozenset(c.rays) for c in fan.maximal_cones()} == {
        frozenset({E1, E3, (2, -1, 1)}),
        frozenset({E1, E2, E3}),
    }
    fan.validate()


def test_star_outside_support_raises():
    with pytest.raises(PolyhedralError):
        Fan.from_cone(SIGMA).star((-1, 0))


# --- property suites ------------------------------------------------------

vectors3 = st.lists(st.integers(-3, 3), min_size=3, max_size=3).map(tuple)


def pointed_cone(gens, n):
    gens = [g for g in gens if any(g)]
    if not gens:
        return None
    c = Cone(gens, n)
    return c if c.is_pointed else None


@settings(max_examples=60, deadline=None)
@given(st.lists(vectors3, min_size=1, max_size=5))
def test_dual_involution(gens):
    c = Cone([g for g in gens if any(g)] or [(0, 0, 0)], 3)
    assert c.dual().dual() == c


@settings(max_examples=60, deadline=None)
@given(st.lists(vectors3, min_size=3, max_size=5))
def test_facets_match_hyperplane_oracle(gens):
    c = pointed_cone(gens, 3)
    if c is None or c.dim != 3:
        return
    assert set(c.facets) == oracles.facets(c.rays, 3)


small2 = st.lists(st.integers(-3, 4), min_size=2, max_size=2).map(tuple)
small3 = st.lists(st.integers(-1, 2), min_size=3, max_size=3).map(tuple)


@settings(max_examples=50, deadline=None)
@given(st.one_of(st.lists(small2, min_size=1, max_size=3), st.lists(small3, min_size=1, max_size=3)))
def test_hilbert_basis_matches_brute_force(gens):
    n = len(gens[0])
    c = pointed_cone(gens, n)
    if c is None:
        return
    assert set(c.hilbert_basis()) == oracles.hilbert_basis(c.rays, n)


@settings(max_examples=40, deadline=None)
@given(st.lists(small2, min_size=1, max_size=3), st.integers(0, 4))
def test_lattice_points_by_level(gens, level):
    c = pointed_cone(gens, 2)
    if c is None:
        return
    got = set(c.lattice_points(level))
    reach = 4 * level + 4
    brute = {p for p in oracles.cone_lattice_points(c.rays, 2, reach) if c.level(p) <= level}
    assert got == brute


@settings(max_examples=40, deadline=None)
@given(st.lists(small3, min_size=2, max_size=4), small3)
def test_face_containing_matches_oracle(gens, x):
    c = pointed_cone(gens, 3)
    if c is None or c.dim != 3 or not c.contains(x):
        return
    assert set(c.face_containing(x).rays) == set(oracles.face_rays(x, c.rays, 3))


@settings(max_examples=40, deadline=None)
@given(st.lists(small3, min_size=1, max_size=4))
def test_smoothness_matches_minor_oracle(gens):
    c = pointed_cone(gens, 3)
    if c is None:
        return
    expected = len(c.rays) == c.dim and oracles.is_smooth(c.rays)
    assert c.is_smooth == expected


@settings(max_examples=30, deadline=None)
@given(st.lists(small3, min_size=3, max_size=4), st.data())
def test_star_subdivision_is_a_fan_refinement(gens, data):
    c = pointed_cone(gens, 3)
    if c is None or c.dim != 3:
        return
    pts = sorted(set(c.hilbert_basis()) | {p for p in c.lattice_points(2) if any(p)})
    v = data.draw(st.sampled_from(pts))
    fan = Fan.from_cone(c).star(v)
    fan.validate()
    for m in fan.maximal_cones():
        assert c.contains_cone(m)
    assert primitive(v) in fan.rays
