"""Fraction-free (Bareiss) elimination and exact kernel vectors."""
from __future__ import annotations

from math import lcm
from typing import Callable, Optional, Sequence

from gmpy2 import mpq, mpz

from .scalars import ONE, ZERO, CyclotomicScalar


def bareiss_echelon(rows: Sequence[Sequence], div: Callable, zero, one):
    """Row echelon form by one-step Bareiss elimination.

    Each update (p * a_ij - a_ic * a_rj) / prev divides exactly, since every
    entry stays a minor of the input.  Columns without a pivot are skipped.
    Returns (matrix, pivot_columns).
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    prev = one
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != zero), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        prow = m[r]
        for i in range(r + 1, nrows):
            row = m[i]
            lead = row[c]
            for j in range(c + 1, ncols):
                row[j] = div(piv * row[j] - lead * prow[j], prev)
            row[c] = zero
        prev = piv
        pivots.append(c)
        r += 1
    return m, pivots


def _exact_int_div(a, b):
    q, rem = divmod(a, b)
    assert rem == 0, "Bareiss division was not exact"
    return q


def first_kernel_vector(matrix: Sequence[Sequence[CyclotomicScalar]]) -> Optional[list]:
    """Kernel vector supported on the smallest possible column prefix.

    The vector belongs to the first non-pivot column j: it is 1 at j, zero past j,
    and solved by back substitution on the pivot rows to the left.  Ordering the
    columns by increasing monomial makes this the kernel element with the least
    leading monomial.  Returns None when the columns are independent.
    """
    if not matrix:
        return None
    ncols = len(matrix[0])
    rational = all(x.conductor == 1 for row in matrix for x in row)
    if rational:
        int_rows = []
        for row in matrix:
            qs = [x.coords[0] for x in row]
            den = lcm(*[int(q.denominator) for q in qs]) if qs else 1
            int_rows.append([mpz(q * den) for q in qs])
        ech, pivots = bareiss_echelon(int_rows, _exact_int_div, mpz(0), mpz(1))
        to_field = mpq
        fzero, fone = mpq(0), mpq(1)
    else:
        ech, pivots = bareiss_echelon(matrix, lambda a, b: a / b, ZERO, ONE)
        to_field = lambda x: x  # noqa: E731
        fzero, fone = ZERO, ONE

    free = next((c for c in range(ncols) if c not in set(pivots)), None)
    if free is None:
        return None
    x = [fzero] * ncols
    x[free] = fone
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        if c > free:
            continue
        row = ech[r]
        s = fzero
        for j in range(c + 1, free + 1):
            if row[j] != 0 and x[j] != 0:
                s = s + to_field(row[j]) * x[j]
        x[c] = -s / to_field(row[c])
    if rational:
        return [CyclotomicScalar(1, (q,)) for q in x]
    return x


def rank(matrix) -> int:
    if not matrix:
        return 0
    _, pivots = bareiss_echelon(matrix, lambda a, b: a / b, ZERO, ONE)
    return len(pivots)
