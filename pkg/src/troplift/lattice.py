"""Exact vector arithmetic over the integers and rationals.

Vectors are plain tuples of ``int`` or ``Fraction``.  Everything here is
exact; no floats ever enter.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import InvariantError


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, u):
    return tuple(c * a for a in u)


def vec_neg(u):
    return tuple(-a for a in u)


def vec_dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def is_zero_vec(u):
    return all(a == 0 for a in u)


def content(u):
    """gcd of the absolute values of an integer vector (0 for the zero vector)."""
    g = 0
    for a in u:
        g = gcd(g, abs(int(a)))
    return g


def is_primitive(u) -> bool:
    return all(isinstance(a, int) or (isinstance(a, Fraction) and a.denominator == 1) for a in u) \
        and content(u) == 1


def make_primitive(u):
    """Scale a nonzero rational vector to its primitive integer representative.

    The result points in the same direction as ``u``.
    """
    if is_zero_vec(u):
        raise InvariantError("cannot take the primitive vector of the zero vector")
    fracs = [Fraction(a) for a in u]
    denom_lcm = 1
    for f in fracs:
        denom_lcm = denom_lcm * f.denominator // gcd(denom_lcm, f.denominator)
    ints = [int(f * denom_lcm) for f in fracs]
    g = content(ints)
    return tuple(a // g for a in ints)


def sign_normalize(u):
    """Flip the sign so the first nonzero entry is positive."""
    for a in u:
        if a != 0:
            return u if a > 0 else vec_neg(u)
    return u


def integer_kernel(rows):
    """Basis of the saturated lattice {x in Z^n : r . x = 0 for every row r}.

    ``rows`` is a list of integer vectors of common length n.  Column
    reduction by unimodular operations; the returned basis spans the full
    integer kernel, and each basis vector is primitive.
    """
    if not rows:
        raise InvariantError("integer_kernel needs at least one row to fix the dimension")
    n = len(rows[0])
    a = [list(r) for r in rows]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    free = list(range(n))

    def col_combine(j, i, q):
        # col_j -= q * col_i
        for r in a:
            r[j] -= q * r[i]
        for r in u:
            r[j] -= q * r[i]

    for row in range(len(a)):
        while True:
            nz = [j for j in free if a[row][j] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda j: abs(a[row][j]))
            i, j = nz[0], nz[1]
            q = a[row][j] // a[row][i]
            col_combine(j, i, q)
        nz = [j for j in free if a[row][j] != 0]
        if nz:
            free.remove(nz[0])

    basis = []
    for j in free:
        vec = tuple(u[i][j] for i in range(n))
        basis.append(sign_normalize(vec))
    return basis


def rref(matrix):
    """Row-reduce a matrix of Fractions in place; returns pivot column indices."""
    if not matrix:
        return []
    rows, cols = len(matrix), len(matrix[0])
    pivots = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if matrix[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        matrix[r], matrix[pivot_row] = matrix[pivot_row], matrix[r]
        pv = matrix[r][c]
        matrix[r] = [x / pv for x in matrix[r]]
        for i in range(rows):
            if i != r and matrix[i][c] != 0:
                f = matrix[i][c]
                matrix[i] = [x - f * y for x, y in zip(matrix[i], matrix[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots


def nullspace(matrix, ncols):
    """Basis of the rational nullspace of ``matrix`` (list of Fraction rows)."""
    work = [list(row) for row in matrix]
    pivots = rref(work)
    pivot_set = set(pivots)
    basis = []
    for free_col in range(ncols):
        if free_col in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free_col] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -work[r][free_col]
        basis.append(tuple(vec))
    return basis


def parse_rational(text):
    """Parse "p/q" or "p" into a Fraction."""
    return Fraction(str(text))


def format_rational(value) -> str:
    return str(Fraction(value))
