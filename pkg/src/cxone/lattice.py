"""Exact rational vectors and integer lattice primitives.

Everything here works over ``fractions.Fraction`` and Python integers, so no
floating point rounding can leak into the geometry built on top of it.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

RatVec = tuple[Fraction, ...]
IntVec = tuple[int, ...]


class LatticeError(ValueError):
    """Raised for ill-posed lattice input (zero vectors, bad encodings)."""


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an integer into a reduced Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise LatticeError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise LatticeError(f"not a rational: {text!r}")
    s = text.strip()
    if s.count("/") > 1 or not s:
        raise LatticeError(f"malformed rational {text!r}")
    try:
        num, _, den = s.partition("/")
        if den == "":
            return Fraction(int(num))
        d = int(den)
        if d == 0:
            raise LatticeError(f"zero denominator in {text!r}")
        return Fraction(int(num), d)
    except ValueError as exc:
        raise LatticeError(f"malformed rational {text!r}") from exc


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def vec(values: Iterable[Fraction | int | str]) -> RatVec:
    return tuple(parse_rational(v) if isinstance(v, str) else Fraction(v) for v in values)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


def add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> tuple:
    return tuple(c * a for a in v)


def is_zero(v: Sequence) -> bool:
    return all(a == 0 for a in v)


def is_integral(v: Sequence) -> bool:
    return all(Fraction(a).denominator == 1 for a in v)


def as_int(v: Sequence) -> IntVec:
    if not is_integral(v):
        raise LatticeError(f"vector {v} is not integral")
    return tuple(int(Fraction(a)) for a in v)


def content(v: Sequence[int]) -> int:
    return reduce(gcd, (abs(int(a)) for a in v), 0)


def primitive(v: Sequence) -> IntVec:
    """Primitive lattice vector on the ray through ``v``."""
    if is_zero(v):
        raise LatticeError("zero has no primitive representative")
    if all(type(a) is int for a in v):
        g = content(v)
        return tuple(a // g for a in v)
    den = lcm(*(Fraction(a).denominator for a in v))
    w = [int(Fraction(a) * den) for a in v]
    g = content(w)
    return tuple(a // g for a in w)


def multiplicity(v: Sequence) -> tuple[int, IntVec]:
    """Least ``d >= 1`` with ``d*v`` integral, together with ``d*v``."""
    d = lcm(1, *(Fraction(a).denominator for a in v))
    return d, tuple(int(Fraction(a) * d) for a in v)


# --- exact linear algebra -------------------------------------------------


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncol = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncol):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _integer_rank(rows: Sequence[Sequence[int]]) -> int:
    # fraction-free elimination; rows are divided by their content to keep entries small
    m = [list(r) for r in rows if any(r)]
    r = 0
    for c in range(len(m[0]) if m else 0):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        for i in range(r + 1, len(m)):
            if m[i][c]:
                a, b = m[r][c], m[i][c]
                row = [a * x - b * y for x, y in zip(m[i], m[r])]
                g = content(row)
                m[i] = [x // g for x in row] if g else row
        r += 1
    return r


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    if all(type(a) is int for row in rows for a in row):
        return _integer_rank(rows)
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[IntVec]:
    """Integer basis (primitive vectors) of ``{x : rows . x = 0}``."""
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    red, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, piv):
            x[p] = -row[f]
        basis.append(primitive(x))
    return basis


def solve(columns: Sequence[Sequence], target: Sequence) -> list[Fraction] | None:
    """Solve ``sum x_i * columns[i] = target`` exactly, or None if inconsistent.

    The columns are assumed linearly independent.
    """
    n = len(target)
    k = len(columns)
    aug = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    red, piv = rref(aug)
    if k in piv:
        return None
    x = [Fraction(0)] * k
    for row, p in zip(red, piv):
        x[p] = row[k]
    return x


# --- Smith normal form ----------------------------------------------------


def smith_normal_form(
    matrix: Sequence[Sequence[int]],
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return ``(S, U, V)`` with ``U * A * V = S`` and ``S`` diagonal.

    ``U`` and ``V`` are unimodular; diagonal entries are nonnegative and
    each divides the next.
    """
    a = [[int(x) for x in row] for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, f: int) -> None:
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst: int, src: int, f: int) -> None:
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            swap_rows(t, pi)
            swap_cols(t, pj)
            done = True
            for i in range(t + 1, m):
                q = a[i][t] // a[t][t]
                add_row(i, t, -q)
                if a[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = a[t][j] // a[t][t]
                add_col(j, t, -q)
                if a[t][j]:
                    done = False
            if not done:
                continue
            # enforce divisibility of the remaining block
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < m and t < n and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return a, u, v


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    s, _, _ = smith_normal_form(matrix)
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]


def is_basis_extendable(vectors: Sequence[Sequence]) -> bool:
    """True iff the integer vectors extend to a basis of the ambient lattice."""
    if not vectors:
        return True
    rows = [as_int(v) for v in vectors]
    diag = smith_diagonal(rows)
    return len(diag) == len(rows) and all(d == 1 for d in diag)


def lattice_index(vectors: Sequence[Sequence]) -> int:
    """Index of the sublattice spanned by ``vectors`` in its saturation.

    Zero when the vectors are linearly dependent.
    """
    rows = [as_int(v) for v in vectors]
    if not rows:
        return 1
    diag = smith_diagonal(rows)
    if len(diag) < len(rows) or any(d == 0 for d in diag):
        return 0
    return reduce(lambda x, y: x * y, diag, 1)


def parallelepiped_points(generators: Sequence[Sequence[int]]) -> list[IntVec]:
    """Lattice points ``sum l_i g_i`` with ``0 <= l_i < 1``.

    The generators must be linearly independent integer vectors; lattice
    points are taken in the saturation of their span.  Uses the Smith form
    of the generator matrix to walk the finite quotient group directly.
    """
    gens = [as_int(g) for g in generators]
    k = len(gens)
    if k == 0:
        return [()]
    n = len(gens[0])
    # columns are generators: A is n x k
    a = [[gens[j][i] for j in range(k)] for i in range(n)]
    s, _, v = smith_normal_form(a)
    diag = [s[i][i] for i in range(k)]
    if any(d == 0 for d in diag):
        raise LatticeError("generators are linearly dependent")
    points = []

    def rec(i: int, mu: list[Fraction]) -> None:
        if i == k:
            lam = [sum((v[r][c] * mu[c] for c in range(k)), Fraction(0)) for r in range(k)]
            lam = [x - (x.numerator // x.denominator) for x in lam]
            pt = tuple(sum((lam[j] * gens[j][r] for j in range(k)), Fraction(0)) for r in range(n))
            points.append(as_int(pt))
            return
        for j in range(diag[i]):
            rec(i + 1, mu + [Fraction(j, diag[i])])

    rec(0, [])
    return sorted(set(points))
