# src/utils/linalg.py
"""Exact matrix arithmetic over a BaseRing.

Matrices are tuples of row tuples and vectors are row tuples; a matrix acts
on the right of a row vector (v -> v·M).
"""
import itertools

from sympy.combinatorics import Permutation

from src.errors import SizeCapError


def identity(ring, m):
    zero, one = ring.zero(), ring.one()
    return tuple(tuple(one if i == j else zero for j in range(m)) for i in range(m))


def zeros(ring, m, n=None):
    return tuple((ring.zero(),) * (m if n is None else n) for _ in range(m))


def unit_vector(ring, m, i):
    return tuple(ring.one() if j == i else ring.zero() for j in range(m))


def freeze(rows):
    return tuple(tuple(row) for row in rows)


def map_entries(fn, a):
    return tuple(tuple(fn(x) for x in row) for row in a)


def vec_add(ring, v, w):
    return tuple(ring.add(x, y) for x, y in zip(v, w))


def vec_scale(ring, v, c):
    return tuple(ring.mul(x, c) for x in v)


def is_zero_vector(ring, v):
    return all(ring.is_zero(x) for x in v)


def vec_mat(ring, v, a):
    cols = len(a[0]) if a else 0
    out = []
    for j in range(cols):
        acc = ring.zero()
        for i, x in enumerate(v):
            acc = ring.add(acc, ring.mul(x, a[i][j]))
        out.append(acc)
    return tuple(out)


def mat_mul(ring, a, b):
    return tuple(vec_mat(ring, row, b) for row in a)


def mat_add(ring, a, b):
    return tuple(vec_add(ring, r, s) for r, s in zip(a, b))


def mat_scale(ring, c, a):
    return tuple(vec_scale(ring, row, c) for row in a)


def is_square(a, m=None):
    m = len(a) if m is None else m
    return len(a) == m and all(len(row) == m for row in a)


def determinant(ring, a):
    """Leibniz expansion; exact over any commutative ring."""
    m = len(a)
    if m == 0:
        return ring.one()
    total = ring.zero()
    for perm in itertools.permutations(range(m)):
        term = ring.one()
        for i, j in enumerate(perm):
            term = ring.mul(term, a[i][j])
            if ring.is_zero(term):
                break
        else:
            if Permutation(list(perm)).signature() < 0:
                term = ring.neg(term)
            total = ring.add(total, term)
    return total


def _minor(a, i, j):
    return tuple(tuple(x for c, x in enumerate(row) if c != j) for r, row in enumerate(a) if r != i)


def inverse(ring, a):
    """adj(a) / det(a), or None when det(a) is not a unit."""
    m = len(a)
    det_inv = ring.try_invert(determinant(ring, a))
    if det_inv is None:
        return None
    if m == 1:
        return ((det_inv,),)
    adj = []
    for i in range(m):
        row = []
        for j in range(m):
            cof = determinant(ring, _minor(a, j, i))
            row.append(ring.mul(cof if (i + j) % 2 == 0 else ring.neg(cof), det_inv))
        adj.append(tuple(row))
    return tuple(adj)


def row_basis(ring, vectors):
    """Reduced row echelon basis of the span of ``vectors`` over a field, with pivot columns."""
    rows = [list(v) for v in vectors]
    width = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(width):
        pivot = next((i for i in range(r, len(rows)) if not ring.is_zero(rows[i][c])), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = ring.try_invert(rows[r][c])
        rows[r] = [ring.mul(x, inv) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not ring.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in rows[:r]), tuple(pivots)


def span(ring, vectors, width, cap):
    """Every R-linear combination of ``vectors`` (finite rings only)."""
    elements = ring.elements()
    if len(elements) ** len(vectors) > cap:
        raise SizeCapError(f"Span of {len(vectors)} vectors over {ring} exceeds the cap of {cap}")
    out = set()
    zero = tuple(ring.zero() for _ in range(width))
    for coefficients in itertools.product(elements, repeat=len(vectors)):
        v = zero
        for c, w in zip(coefficients, vectors):
            v = vec_add(ring, v, vec_scale(ring, w, c))
        out.add(v)
    return out
