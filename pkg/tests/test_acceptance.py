"""Acceptance criteria, one PASS/FAIL line each.

Every criterion collects its clauses, prints a single summary line and then
asserts that all clauses hold.  A failing clause is reported by name.
"""
from fractions import Fraction as Q

import pytest

from cxone.documents import check_witness_document, witness_to_json
from cxone.examples import brieskorn_345, half_point_family, johnson_kollar, orthant_family, torsion_surface
from cxone.hyperorder import is_minimal_singular, leq_pointwise_sound, min_singular_set
from cxone.lattice import content
from cxone.pdivisor import SPINE, HypPoint
from cxone.polyhedra import Cone, Fan, Polyhedron
from cxone.resolve import certify_non_essential, exceptional_classification
from cxone.valsets import TrinomialData, minimal_valuations, nash_set, terminal_set, trinomial_nash_criterion

import oracles

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, clauses: dict[str, bool]) -> None:
        failed = [name for name, ok in clauses.items() if not ok]
        line = f"{'FAIL' if failed else 'PASS'} criterion {number}: {title}"
        if failed:
            line += " (failed: " + "; ".join(failed) + ")"
        with capsys.disabled():
            print("\n" + line)
        assert not failed, line

    return emit


def P(page, a, b):
    return HypPoint(page, tuple(a) if isinstance(a, tuple) else (a,), b)


def test_criterion_1_johnson_kollar(report):
    d = johnson_kollar()
    res = min_singular_set(d)
    report(
        1,
        "Johnson-Kollar degree and 17 minimal singular valuations",
        {
            "degree": d.degree() == Polyhedron([(Q(1, 10), 0), (Q(1, 10), 1)], d.tail),
            "17 elements": len(res.elements) == 17,
            "complete": res.complete,
        },
    )


def test_criterion_2_brieskorn_surface(report):
    d = brieskorn_345()
    res = min_singular_set(d)
    confirmed, candidates = minimal_valuations(d)
    expected = {P(SPINE, 1, 0), P("0", 2, 1), P("1", -1, 1), P("inf", -1, 3), P("inf", 0, 1)}
    report(
        2,
        "x^3+y^4+z^5 minimal singular set and pointwise minimum",
        {
            "min_singular_set": set(res.elements) == expected and res.complete,
            "pointwise minimal": set(confirmed.elements) == {P("inf", -1, 3)} and not candidates.elements,
        },
    )


def test_criterion_3_elliptic_example(report):
    d = torsion_surface()
    toroidal = d.restrict(["y0", "y1"])
    skew = Cone([E1, E2, E3, (2, -1, 1)], 3)
    starred = Fan.from_cone(skew).star(E3)
    nu = P("y0", (1, 0), 1)
    w = certify_non_essential(nu, d)
    cls = exceptional_classification(nu, w)
    report(
        3,
        "elliptic example Nash sets, star at (0,0,1) and classification",
        {
            "nash_set(toroidal) = {[y0,(1,0),1]}": set(nash_set(toroidal).elements) == {nu},
            "nash_set(full) = {[•,(1,0),0]}": set(nash_set(d).elements) == {P(SPINE, (1, 0), 0)},
            "star at (0,0,1)": {frozenset(c.rays) for c in starred.maximal_cones()}
            == {frozenset({E1, E3, (2, -1, 1)}), frozenset({E1, E2, E3})},
            "classification": cls.exc_over_toroidification and not cls.exc_over_x,
        },
    )


def test_criterion_4_orthant_family(report):
    clauses = {}
    for dim, r in [(2, 1), (2, 2), (3, 1), (3, 2)]:
        d = orthant_family(dim, r)
        nash = nash_set(d)
        clauses[f"d={dim} r={r} nash_set"] = nash.elements == (P(SPINE, (1,) * dim, 0),) and nash.complete
        clauses[f"d={dim} r={r} terminal_set empty"] = terminal_set(d).elements == ()
    report(4, "orthant family Nash and terminal sets", clauses)


def test_criterion_5_half_point_family(report):
    clauses = {}
    for dim in (2, 3):
        d = half_point_family(dim)
        nu0, nu1 = P(SPINE, (1,) * dim, 0), P("y0", (1,) * dim, 1)
        nash = nash_set(d)
        confirmed, candidates = minimal_valuations(d)
        certificate = leq_pointwise_sound(nu1, nu0, d)
        clauses[f"d={dim} nash_set"] = set(nash.elements) == {nu0, nu1} and nash.complete
        clauses[f"d={dim} brute force"] = oracles.brute_min_singular(d, 4) == {nu0, nu1}
        clauses[f"d={dim} terminal_set empty"] = terminal_set(d).elements == ()
        clauses[f"d={dim} minimal confirmed"] = confirmed.elements == (nu1,) and nu0 not in candidates
        clauses[f"d={dim} section-order certificate"] = (
            certificate.relation is True and certificate.certificate[0] == "section-profile"
        )
    report(5, "half-point family: a Nash valuation neither terminal nor minimal", clauses)


def test_criterion_6_trinomial_criterion(report):
    from itertools import permutations

    jk = trinomial_nash_criterion(TrinomialData(((1, 1), (2,), (5,))))
    e8 = trinomial_nash_criterion(TrinomialData(((6,), (10,), (15,))))
    symmetric = all(
        trinomial_nash_criterion(TrinomialData(tuple(p))).value == v.value
        for blocks, v in ((((1, 1), (2,), (5,)), jk), (((6,), (10,), (15,)), e8))
        for p in permutations(blocks)
    )
    report(
        6,
        "trinomial criterion values and block symmetry",
        {
            "(1,1;2;5) = -2 fails": jk.value == -2 and not jk.holds,
            "(6;10;15) = 20 holds": e8.value == 20 and e8.holds,
            "symmetric": symmetric,
        },
    )


def test_criterion_7_property_suites(report):
    import test_polyhedra
    import test_properties as props

    def passes(fn, *args) -> bool:
        fn(*args)
        return True

    report(
        7,
        "property suites",
        {
            "dual involution": passes(test_polyhedra.test_dual_involution),
            "Hilbert basis vs brute force": passes(test_polyhedra.test_hilbert_basis_matches_brute_force),
            "cone order axioms": passes(props.test_cone_order_is_a_partial_order),
            "hypercombinatorial order axioms": passes(props.test_hypercombinatorial_order_is_a_partial_order),
            "restriction to Cayley cones": passes(props.test_hyper_order_restricts_to_the_page_cone),
            "restriction to pages": passes(props.test_hyper_order_survives_restriction_to_the_pages_involved),
            "soundness chain": passes(props.test_hyper_order_implies_pointwise_order),
            "terminal within Nash": passes(props.test_terminal_set_lies_in_the_nash_set),
            "min_singular_set vs brute force": passes(props.test_min_singular_set_matches_brute_force),
            "100 avoiding refinements": all(
                passes(props.test_avoiding_refinement_on_random_cones, seed) for seed in range(100)
            ),
        },
    )


CERTIFY_LEVEL = 4
CERTIFY_EXAMPLES = {
    "orthant d=2 r=1": orthant_family(2, 1),
    "orthant d=2 r=2": orthant_family(2, 2),
    "orthant d=3 r=1": orthant_family(3, 1),
    "orthant d=3 r=2": orthant_family(3, 2),
    "elliptic": torsion_surface(),
    "half-point d=2": half_point_family(2),
    "half-point d=3": half_point_family(3),
    "x^3+y^4+z^5": brieskorn_345(),
}


def non_minimal_singular(d, level: int) -> list[HypPoint]:
    found = {}
    for page in d.pages():
        for x in d.cayley_cone(page).lattice_points(level):
            if any(x) and content(x) == 1:
                nu = HypPoint(page if x[-1] else SPINE, x[:-1], x[-1])
                if d.singular_center(nu) and not is_minimal_singular(d, nu):
                    found[nu] = None
    return list(found)


def witness_is_verified(nu: HypPoint, d) -> bool:
    w = certify_non_essential(nu, d)
    check_witness_document(witness_to_json(w))
    smooth = all(oracles.is_smooth(c.rays) for f in w.fans.values() for c in f.maximal_cones())
    return smooth and not exceptional_classification(nu, w).exc_over_x


def test_criterion_8_non_minimal_valuations_are_avoided(report):
    clauses = {}
    for name, d in CERTIFY_EXAMPLES.items():
        points = non_minimal_singular(d, CERTIFY_LEVEL)
        clauses[f"{name}: {len(points)} certified"] = bool(points) and all(witness_is_verified(nu, d) for nu in points)
    report(8, f"certify_non_essential up to level {CERTIFY_LEVEL}", clauses)
