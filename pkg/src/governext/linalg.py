"""Dense linear algebra over F_p on lists of ints.

Matrices here are tiny (a handful of rows and columns) and are evaluated
hundreds of thousands of times, so plain lists beat numpy.
"""

from __future__ import annotations


def row_echelon(M, p, ncols=None):
    """Reduced row-echelon form of M over F_p.

    Returns ``(R, pivots)`` where ``pivots`` lists pivot columns in order.
    """
    if ncols is None:
        ncols = len(M[0]) if M else 0
    R = [[x % p for x in row] for row in M]
    pivots = []
    r = 0
    nrows = len(R)
    for col in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if R[i][col]:
                piv = i
                break
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = pow(R[r][col], -1, p)
        if inv != 1:
            R[r] = [x * inv % p for x in R[r]]
        pivot_row = R[r]
        for i in range(nrows):
            if i != r and R[i][col]:
                f = R[i][col]
                R[i] = [(x - f * y) % p for x, y in zip(R[i], pivot_row)]
        pivots.append(col)
        r += 1
    return R, pivots


def rank_mod_p(M, p, ncols=None):
    return len(row_echelon(M, p, ncols)[1])


def column_rank(columns, p):
    """Rank over F_p of the matrix whose columns are ``columns``."""
    if not columns:
        return 0
    # rank(M) = rank(M^T): eliminate on the columns as rows
    return rank_mod_p([list(c) for c in columns], p, len(columns[0]))


def rank_and_kernel(M, p, ncols=None):
    """Rank of M over F_p and a basis of its right kernel.

    ``M`` is a list of rows; ``ncols`` must be given when M has no rows.
    """
    if ncols is None:
        if not M:
            raise ValueError("ncols is required for a matrix with no rows")
        ncols = len(M[0])
    R, pivots = row_echelon(M, p, ncols)
    pivset = set(pivots)
    kernel = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [0] * ncols
        v[free] = 1
        for row_idx, col in enumerate(pivots):
            v[col] = -R[row_idx][free] % p
        kernel.append(v)
    for v in kernel:
        for row in M:
            if sum(x * y for x, y in zip(row, v)) % p:
                raise ArithmeticError("kernel vector does not annihilate the matrix")
    return len(pivots), kernel


def mat_vec(M, v, p):
    return [sum(x * y for x, y in zip(row, v)) % p for row in M]
