"""Reference p-divisors used in the documentation and the test-suite."""
from __future__ import annotations

from fractions import Fraction as Q

from .pdivisor import Curve, PolyDivisor
from .polyhedra import Cone, Polyhedron


def _orthant(d: int) -> Cone:
    return Cone([tuple(int(i == j) for j in range(d)) for i in range(d)], d)


def orthant_family(d: int, r: int, genus: int = 1) -> PolyDivisor:
    """Tail the positive orthant, coefficients ``(1,...,1) + sigma`` at ``r`` points."""
    sigma = _orthant(d)
    labels = tuple(f"y{i}" for i in range(r))
    coeffs = {y: Polyhedron([(1,) * d], sigma) for y in labels}
    return PolyDivisor(sigma, Curve(genus, labels), coeffs)


def torsion_surface() -> PolyDivisor:
    """Quadrant tail, a segment at ``y0`` and a half-integral point at ``y1``."""
    sigma = _orthant(2)
    coeffs = {
        "y0": Polyhedron([(0, 0), (1, Q(-1, 2))], sigma),
        "y1": Polyhedron([(Q(1, 2), Q(1, 2))], sigma),
    }
    return PolyDivisor(sigma, Curve(1, ("y0", "y1")), coeffs)


def half_point_family(d: int, genus: int = 1) -> PolyDivisor:
    """Orthant tail with the single coefficient ``(1/2,...,1/2) + sigma`` at ``y0``."""
    sigma = _orthant(d)
    coeffs = {"y0": Polyhedron([(Q(1, 2),) * d], sigma)}
    return PolyDivisor(sigma, Curve(genus, ("y0", "y1")), coeffs)


def brieskorn_345() -> PolyDivisor:
    """The surface ``x0^3 + x1^4 + x2^5 = 0`` with its one-dimensional torus."""
    sigma = Cone([(1,)], 1)
    coeffs = {
        "0": Polyhedron([(Q(5, 3),)], sigma),
        "1": Polyhedron([(Q(-5, 4),)], sigma),
        "inf": Polyhedron([(Q(-2, 5),)], sigma),
    }
    return PolyDivisor(sigma, Curve(0, ("0", "1", "inf")), coeffs)


def johnson_kollar() -> PolyDivisor:
    """The threefold ``x0 x1 = x2^2 + x3^5`` with a two-dimensional torus."""
    sigma = Cone([(1, 0), (1, 10)], 2)
    coeffs = {
        "0": Polyhedron([(1, 0), (1, 1)], sigma),
        "1": Polyhedron([(Q(-2, 5), 0)], sigma),
        "inf": Polyhedron([(Q(-1, 2), 0)], sigma),
    }
    return PolyDivisor(sigma, Curve(0, ("0", "1", "inf")), coeffs)
