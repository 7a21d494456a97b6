"""Small exact integer helpers: extended gcd and Smith normal form with transforms."""
from __future__ import annotations

__all__ = ["xgcd", "smith_normal_form", "identity_matrix", "matmul", "inverse_unimodular"]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``g = s*a + t*b = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def identity_matrix(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols)] for i in range(len(a))]


def smith_normal_form(mat: list[list[int]], ncols: int | None = None):
    """Smith normal form ``U @ mat @ V = D`` of an integer matrix.

    Returns ``(D, U, V)``; ``D`` is diagonal with nonnegative entries, each
    dividing the next (zeros last). ``U`` and ``V`` are unimodular.
    """
    rows = len(mat)
    cols = ncols if ncols is not None else (len(mat[0]) if mat else 0)
    A = [list(r) for r in mat]
    U = identity_matrix(rows)
    V = identity_matrix(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def combine_rows(i, j, a, b, c, d):
        # row_i, row_j <- a*row_i + b*row_j, c*row_i + d*row_j
        for M in (A, U):
            ri, rj = M[i], M[j]
            M[i] = [a * x + b * y for x, y in zip(ri, rj)]
            M[j] = [c * x + d * y for x, y in zip(ri, rj)]

    def combine_cols(i, j, a, b, c, d):
        for M in (A, V):
            for r in M:
                x, y = r[i], r[j]
                r[i] = a * x + b * y
                r[j] = c * x + d * y

    t = 0
    while t < min(rows, cols):
        # choose a nonzero pivot of minimal absolute value in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        done = False
        while not done:
            done = True
            for i in range(t + 1, rows):
                if A[i][t] and A[i][t] % A[t][t] == 0:
                    combine_rows(t, i, 1, 0, -(A[i][t] // A[t][t]), 1)
                elif A[i][t]:
                    g, s, u = xgcd(A[t][t], A[i][t])
                    a, b = A[t][t] // g, A[i][t] // g
                    combine_rows(t, i, s, u, -b, a)
            for j in range(t + 1, cols):
                if A[t][j] and A[t][j] % A[t][t] == 0:
                    combine_cols(t, j, 1, 0, -(A[t][j] // A[t][t]), 1)
                elif A[t][j]:
                    g, s, u = xgcd(A[t][t], A[t][j])
                    a, b = A[t][t] // g, A[t][j] // g
                    combine_cols(t, j, s, u, -b, a)
                    done = False
            if any(A[i][t] for i in range(t + 1, rows)):
                done = False
                continue
            if done:
                # divisibility: fold any offending entry into the pivot row
                p = A[t][t]
                for i in range(t + 1, rows):
                    if any(A[i][j] % p for j in range(t + 1, cols)):
                        combine_rows(t, i, 1, 1, 0, 1)
                        done = False
                        break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return A, U, V


def inverse_unimodular(M: list[list[int]]) -> list[list[int]]:
    """Exact inverse of a unimodular integer matrix (Gauss-Jordan over Q)."""
    from fractions import Fraction

    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    out = []
    for row in A:
        vals = row[n:]
        if any(v.denominator != 1 for v in vals):
            raise ValueError("matrix is not unimodular")
        out.append([int(v) for v in vals])
    return out
