"""Integer Smith normal form and lattice helpers for finite abelian groups."""

from __future__ import annotations


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M):
    """Return ``(D, U, V)`` with ``U @ M @ V == D`` diagonal, U and V unimodular.

    ``M`` is a list of rows of ints.  Diagonal entries are nonnegative and each
    divides the next.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    A = [list(map(int, row)) for row in M]
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        if k:
            A[dst] = [x + k * y for x, y in zip(A[dst], A[src])]
            U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        if k:
            for row in A:
                row[dst] += k * row[src]
            for row in V:
                row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = A[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        done = False
            if done:
                # divisibility of the rest of the block by the pivot
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
                continue
            # move the smallest remaining entry of row/column t into the pivot
            best = (abs(A[t][t]), t, t)
            for i in range(t + 1, m):
                if A[i][t] and abs(A[i][t]) < best[0]:
                    best = (abs(A[i][t]), i, t)
            for j in range(t + 1, n):
                if A[t][j] and abs(A[t][j]) < best[0]:
                    best = (abs(A[t][j]), t, j)
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return A, U, V


def invariant_factors(M, ncols=None):
    """Invariant factors (> 1 and 0 for free parts) of Z^ncols / rowspace(M)."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if not M:
        return [0] * ncols
    D, _, _ = smith_normal_form(M)
    diag = [D[i][i] for i in range(min(len(D), ncols))]
    diag += [0] * (ncols - len(diag))
    return [x for x in diag if x != 1]


def hnf_add_relation(basis, rel):
    """Fold relation vector ``rel`` into a row-echelon lattice basis (in place).

    ``basis`` maps pivot column -> row with positive leading entry; returns it.
    """
    rel = list(rel)
    n = len(rel)
    for col in range(n):
        if rel[col] == 0:
            continue
        if col not in basis:
            if rel[col] < 0:
                rel = [-x for x in rel]
            basis[col] = rel
            return basis
        row = basis[col]
        # Euclid between row and rel on this column
        a, b = row, rel
        while b[col]:
            q = a[col] // b[col]
            a, b = b, [x - q * y for x, y in zip(a, b)]
        if a[col] < 0:
            a = [-x for x in a]
        basis[col] = a
        rel = b
    return basis


def lattice_rows(basis, n):
    return [basis[c] for c in sorted(basis)]
