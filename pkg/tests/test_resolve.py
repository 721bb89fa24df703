from fractions import Fraction as Q

import pytest

from cxone.examples import brieskorn_345, half_point_family, torsion_surface
from cxone.hyperorder import min_singular_set
from cxone.pdivisor import GENERIC, SPINE, HypPoint
from cxone.polyhedra import Cone, Fan, Polyhedron
from cxone.resolve import (
    ResolutionError,
    assemble_divisorial_fan,
    avoid_valuation_refinement,
    big_upgrade,
    certify_non_essential,
    exceptional_classification,
    extend_to_all_pages,
    smooth_economical_refinement,
    witness_pages,
)

import oracles

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def maximal_sets(fan: Fan) -> set[frozenset]:
    return {frozenset(c.rays) for c in fan.maximal_cones()}


def test_smooth_cone_needs_no_centers():
    c = Cone([(1, 0), (0, 1)], 2)
    t = smooth_economical_refinement(c)
    assert t.centers == [] and t.result == Fan.from_cone(c)


def test_smoothing_a_plane_cone():
    t = smooth_economical_refinement(Cone([(1, 0), (1, 2)], 2))
    assert t.centers == [(1, 1)]
    assert maximal_sets(t.result) == {frozenset({(1, 0), (1, 1)}), frozenset({(1, 1), (1, 2)})}
    assert all(oracles.is_smooth(c.rays) for c in t.result.maximal_cones())


def test_smoothing_the_elliptic_cayley_cone():
    c = torsion_surface().cayley_cone("y0")
    t = smooth_economical_refinement(c)
    assert t.centers == [E3]
    assert maximal_sets(t.result) == {frozenset({E1, E3, (2, -1, 2)}), frozenset({E1, E2, E3})}


def test_big_upgrade_of_a_big_fan_is_the_identity():
    fan = Fan.from_cone(Cone([E1, E2, E3], 3))
    t = big_upgrade(fan, Cone([E1, E2, E3], 3))
    assert t.centers == [] and t.result == fan


def test_big_upgrade_stars_a_diagonal_once():
    square = Cone([(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)], 3)
    fan = Fan([[(0, 0, 1), (1, 0, 1), (1, 1, 1)], [(0, 0, 1), (1, 1, 1), (0, 1, 1)]], 3)
    assert fan.is_smooth()
    t = big_upgrade(fan, square)
    assert t.centers == [(1, 1, 2)]
    assert frozenset({(0, 0, 1), (1, 1, 1)}) not in t.result.cones
    assert t.result.is_smooth()


def test_avoidance_on_the_elliptic_page():
    d = torsion_surface()
    c = d.cayley_cone("y0")
    poly = Polyhedron([(Q(1, 2), Q(1, 2), 0), (Q(3, 2), 0, 0)], d.spine_cone())
    nu = (1, 0, 1)
    t = avoid_valuation_refinement(c, poly, nu)
    assert t.branch == "minimal-singular"
    assert t.result == Fan.from_cone(c).star(E3)
    carrier = t.result.cone_containing(nu)
    assert set(carrier.rays) == {E1, E3} and carrier.dim == 2
    assert poly.meets_cone(carrier)


def test_avoidance_in_a_singular_plane_cone():
    c = Cone([(1, 0), (1, 3)], 2)
    t = avoid_valuation_refinement(c, None, (2, 3))
    assert t.branch == "singular"
    carrier = t.result.cone_containing((2, 3))
    assert carrier.dim == 2 and t.result.is_smooth()
    assert not c.is_face(carrier)


def test_avoidance_on_a_smooth_face_over_the_polyhedron():
    c = Cone([E1, E2, E3], 3)
    poly = Polyhedron([(1, 1, 0)], Cone([E1, E2], 3))
    t = avoid_valuation_refinement(c, poly, (2, 1, 0))
    assert t.branch == "regular"
    assert t.centers[0] == (1, 1, 0)
    carrier = t.result.cone_containing((2, 1, 0))
    assert set(carrier.rays) == {E1, (1, 1, 0)}


def test_avoidance_rejects_minimal_points():
    c = Cone([(1, 0), (1, 3)], 2)
    with pytest.raises(ResolutionError):
        avoid_valuation_refinement(c, None, (1, 1))
    with pytest.raises(ResolutionError):
        avoid_valuation_refinement(c, None, (1, 0))


def test_extension_without_spine_centers():
    d = half_point_family(2)
    d2, pages, _ = witness_pages(d, "y0")
    c = d2.cayley_cone("y0")
    t = smooth_economical_refinement(c)
    assert all(x[-1] != 0 for x in t.centers)
    fans = extend_to_all_pages(t, d2, pages, "y0")
    for y in pages:
        if y != "y0":
            assert fans[y] == smooth_economical_refinement(d2.cayley_cone(y)).result


def test_three_page_witness_shares_its_tail_fan():
    d = brieskorn_345()
    w = certify_non_essential(HypPoint("0", (3,), 1), d)
    assert len(w.pages) == 3
    spines = {frozenset(s for s in f.cones if all(r[-1] == 0 for r in s)) for f in w.fans.values()}
    assert len(spines) == 1
    assert exceptional_classification(HypPoint("0", (3,), 1), w).label == "NotExceptional"


def test_identity_fans_give_the_toroidification():
    d = torsion_surface()
    fans = {y: Fan.from_cone(d.cayley_cone(y)) for y in ("y0", "y1")}
    efan = assemble_divisorial_fan(d, fans)
    restricted = {d.restrict([y]) for y in ("y0", "y1")}
    assert restricted <= set(efan.divisors)


def test_elliptic_witness():
    d = torsion_surface()
    nu = HypPoint("y0", (1, 0), 1)
    w = certify_non_essential(nu, d)
    assert w.fans["y0"] == Fan.from_cone(d.cayley_cone("y0")).star(E3)
    assert w.fans["y1"] == Fan.from_cone(d.cayley_cone("y1")).star((1, 1, 1))
    for member in w.fan.divisors:
        for y in w.pages:
            if member.in_locus(y):
                assert member.cayley_cone(y).is_smooth
    cls = exceptional_classification(nu, w)
    assert cls.exc_over_toroidification and not cls.exc_over_x
    spine = exceptional_classification(HypPoint.spine((1, 0)), w)
    assert spine.exc_over_x
    plain = exceptional_classification(HypPoint.spine((0, 1)), w)
    assert plain.label == "NotExceptional"


def test_certify_refuses_nash_valuations():
    d = torsion_surface()
    for nu in min_singular_set(d).elements:
        with pytest.raises(ResolutionError):
            certify_non_essential(nu, d)


def test_certify_refuses_non_singular_points():
    with pytest.raises(ResolutionError):
        certify_non_essential(HypPoint.spine((0, 1)), torsion_surface())


def test_single_page_locus_gets_a_fresh_point():
    d = half_point_family(2)
    d2, pages, extra = witness_pages(d, None)
    assert extra == "z0" and pages == ["y0", "z0"]
    assert "z0" in d2.curve.points


def test_generic_page_valuations_get_a_fresh_point():
    d = torsion_surface()
    nu = HypPoint(GENERIC, (1, 1), 2)
    assert d.singular_center(nu)
    w = certify_non_essential(nu, d)
    assert w.extra_point == "z0" and "z0" in w.pages
    assert w.divisor.coefficient("z0") == Polyhedron([(0, 0)], d.tail)
    assert not exceptional_classification(nu, w, w.divisor).exc_over_x
