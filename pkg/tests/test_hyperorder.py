from itertools import product
from math import floor

import pytest

from cxone.examples import brieskorn_345, half_point_family, johnson_kollar, torsion_surface
from cxone.hyperorder import (
    UNKNOWN,
    ilten_manon_cone,
    is_minimal_singular,
    leq_hyper,
    leq_pointwise_P1,
    leq_pointwise_sound,
    leq_sigma,
    min_singular_set,
)
from cxone.pdivisor import SPINE, Curve, DivisorError, HypPoint, PolyDivisor
from cxone.polyhedra import Cone, Polyhedron

SIGMA = Cone([(1, 0), (1, 2)], 2)


def P(page, a, b):
    return HypPoint(page, tuple(a) if isinstance(a, (tuple, list)) else (a,), b)


EX71_MIN = [P(SPINE, 1, 0), P("0", 2, 1), P("1", -1, 1), P("inf", -1, 3), P("inf", 0, 1)]


def test_leq_sigma_examples():
    assert leq_sigma((1, 1), (1, 1), SIGMA)
    v = leq_sigma((1, 1), (2, 1), SIGMA)
    assert v.relation is True and v.certificate == (1, 0)
    assert leq_sigma((1, 1), (1, 2), SIGMA).relation is False


def test_leq_hyper_examples():
    d = torsion_surface()
    v = leq_hyper(P(SPINE, (1, 0), 0), P("y0", (1, 0), 1), d)
    assert v.relation is True and v.certificate == ("y0", (0, 0, 1))
    assert leq_hyper(P("y0", (1, 0), 1), P("y1", (1, 1), 1), d).relation is False
    d71 = brieskorn_345()
    # (1,1) fails the facet 3x - 5y >= 0 of C_0 = <(1,0),(5,3)>
    assert leq_hyper(P(SPINE, 1, 0), P("0", 2, 1), d71).relation is False
    assert d71.cayley_cone("0") == Cone([(1, 0), (5, 3)], 2)


def test_minimality_examples():
    d = torsion_surface()
    assert is_minimal_singular(d.restrict(["y0", "y1"]), P("y0", (1, 0), 1))
    assert not is_minimal_singular(d, P("y0", (1, 0), 1))
    assert is_minimal_singular(brieskorn_345(), P("0", 2, 1))


def test_min_singular_set_of_the_brieskorn_surface():
    res = min_singular_set(brieskorn_345())
    assert set(res.elements) == set(EX71_MIN)
    assert res.complete


def test_min_singular_set_of_the_johnson_kollar_threefold():
    res = min_singular_set(johnson_kollar())
    assert len(res.elements) == 17
    assert res.complete


def test_min_singular_set_of_a_smooth_toroidal_divisor():
    sigma = Cone([(1, 0), (0, 1)], 2)
    d = PolyDivisor(sigma, Curve(1, ("y0",)), {"y0": Polyhedron([(0, 0)], sigma)}, "affine")
    assert min_singular_set(d).elements == ()


def test_bounded_scan_reports_incompleteness():
    res = min_singular_set(johnson_kollar(), level_bound=2)
    assert not res.complete
    assert set(res.elements) <= set(min_singular_set(johnson_kollar()).elements)


def test_ilten_manon_single_point_is_toric():
    sigma = Cone([(1,)], 1)
    d = PolyDivisor(sigma, Curve(0, ("a",)), {"a": Polyhedron([(1,)], sigma)})
    im = ilten_manon_cone(d)
    assert im.s == 0
    assert im.cone == Cone([(1,)], 1)


def test_ilten_manon_embedding_of_the_brieskorn_surface():
    im = ilten_manon_cone(brieskorn_345())
    assert im.cone.ambient == 3
    assert im.embed(P(SPINE, 1, 0)) == (0, 0, 1)
    assert im.embed(P(SPINE, 4, 0)) == (0, 0, 4)
    with pytest.raises(DivisorError):
        ilten_manon_cone(torsion_surface())


def test_pointwise_examples_over_the_projective_line():
    d = brieskorn_345()
    assert leq_pointwise_P1(P("inf", -1, 3), P("0", 2, 1), d)
    assert leq_pointwise_P1(P("0", 2, 1), P("0", 2, 1), d)
    assert not leq_pointwise_P1(P("0", 2, 1), P("inf", -1, 3), d)


def pointwise_counterexample(d: PolyDivisor, nu: HypPoint, nu2: HypPoint, mmax: int, slack: int):
    """A regular semi-invariant function with nu(f) > nu2(f), by exhaustive search.

    Over the projective line f chi^m is regular iff its order profile o
    satisfies o_y >= -floor(D_y(m)) at listed points and sum o <= 0 there
    (the remaining zeros sit at unlisted points).
    """
    labels = list(d.curve.points)
    dual = d.tail.dual()
    for m in product(range(-mmax, mmax + 1), repeat=d.rank):
        if not dual.contains(m):
            continue
        lows = [-floor(min(sum(a * b for a, b in zip(m, v)) for v in d.coefficient(y).vertices)) for y in labels]
        for o in product(*[range(lo, lo + slack + 1) for lo in lows]):
            if sum(o) > 0:
                continue
            prof = dict(zip(labels, o))

            def val(n):
                base = sum(a * b for a, b in zip(m, n.a))
                return base if n.on_spine else base + n.b * prof.get(n.page, 0)

            if val(nu) > val(nu2):
                return m, prof
    return None


def test_pointwise_order_matches_function_oracle():
    d = brieskorn_345()
    pts = EX71_MIN + [P("0", 3, 1), P("inf", -1, 4), P(SPINE, 2, 0), P("1", 0, 1)]
    for nu in pts:
        for nu2 in pts:
            verdict = leq_pointwise_P1(nu, nu2, d).relation
            witness = pointwise_counterexample(d, nu, nu2, mmax=80, slack=3)
            assert verdict == (witness is None), (nu, nu2, witness)


def test_oracle_finds_the_far_counterexample():
    # [1,-1,1] <= [inf,-1,3] first fails at m = 60 with o = (-99, 75, 24)
    d = brieskorn_345()
    m, prof = pointwise_counterexample(d, P("1", -1, 1), P("inf", -1, 3), mmax=80, slack=3)
    assert m[0] >= 13 and prof["1"] > 3 * prof["inf"]


def test_pointwise_minimum_of_the_brieskorn_surface():
    d = brieskorn_345()
    minimal = [nu for nu in EX71_MIN if not any(mu != nu and leq_pointwise_P1(mu, nu, d) for mu in EX71_MIN)]
    assert minimal == [P("inf", -1, 3)]


def test_sound_order_on_the_half_point_family():
    d = half_point_family(2)
    nu0, nu1 = P(SPINE, (1, 1), 0), P("y0", (1, 1), 1)
    v = leq_pointwise_sound(nu1, nu0, d)
    assert v.relation is True
    assert v.certificate[0] == "section-profile"
    assert leq_pointwise_sound(nu0, nu1, d).relation is not True
    assert leq_hyper(nu0, nu1, d).relation is False


def test_sound_order_extends_the_hypercombinatorial_order():
    d = torsion_surface()
    pts = [P(SPINE, (1, 0), 0), P(SPINE, (1, 1), 0), P("y0", (1, 0), 1), P("y0", (2, 0), 1), P("y1", (1, 1), 1), P("y1", (1, 1), 2)]
    for nu in pts:
        for nu2 in pts:
            if leq_hyper(nu, nu2, d).relation is True:
                assert leq_pointwise_sound(nu, nu2, d).relation is True


def test_sound_order_false_needs_a_failing_restriction():
    d = torsion_surface()
    v = leq_pointwise_sound(P(SPINE, (0, 1), 0), P(SPINE, (1, 0), 0), d)
    assert v.relation is False
    assert leq_pointwise_sound(P("y0", (1, 0), 1), P("y1", (1, 1), 1), d).relation in (True, UNKNOWN)


def test_sound_order_rejects_the_projective_line():
    with pytest.raises(DivisorError):
        leq_pointwise_sound(P(SPINE, 1, 0), P(SPINE, 1, 0), brieskorn_345())
