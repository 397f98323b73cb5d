"""Exact integer and rational linear algebra.

Matrices are plain lists of lists (ints or Fractions).  Everything here is
small and exact: Smith/Hermite forms with transform tracking, kernels,
rational solves, determinants, and unimodular completions of primitive
vectors.  These are the workhorses behind lattice computations.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                row = out[i]
                for j in range(m):
                    row[j] += a * Bt[j]
    return out


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


def vec_gcd(v):
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def primitive(v):
    """v divided by the gcd of its entries (0 stays 0)."""
    g = vec_gcd(v)
    return tuple(v) if g in (0, 1) else tuple(x // g for x in v)


def hermite_normal_form(A):
    """Row-style HNF: returns (H, U) with U unimodular and U*A = H.

    H is upper-echelon with positive pivots and entries above a pivot
    reduced modulo it.
    """
    H = [list(map(int, row)) for row in A]
    n = len(H)
    m = len(H[0]) if n else 0
    U = identity(n)
    r = 0
    for c in range(m):
        piv = None
        for i in range(r, n):
            if H[i][c]:
                piv = i
                break
        if piv is None:
            continue
        H[r], H[piv] = H[piv], H[r]
        U[r], U[piv] = U[piv], U[r]
        # clear below by gcd steps
        while True:
            nz = [i for i in range(r + 1, n) if H[i][c]]
            if not nz:
                break
            for i in nz:
                q = H[i][c] // H[r][c]
                for j in range(m):
                    H[i][j] -= q * H[r][j]
                for j in range(n):
                    U[i][j] -= q * U[r][j]
                if H[i][c]:
                    H[r], H[i] = H[i], H[r]
                    U[r], U[i] = U[i], U[r]
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                for j in range(m):
                    H[i][j] -= q * H[r][j]
                for j in range(n):
                    U[i][j] -= q * U[r][j]
        r += 1
    return H, U


def smith_normal_form(A):
    """Returns (D, U, V) with U*A*V = D diagonal, U, V unimodular.

    Divisibility d1 | d2 | ... is enforced.
    """
    D = [list(map(int, row)) for row in A]
    n = len(D)
    m = len(D[0]) if n else 0
    U, V = identity(n), identity(m)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, q):
        for j in range(m):
            D[dst][j] += q * D[src][j]
        for j in range(n):
            U[dst][j] += q * U[src][j]

    def addmul_col(dst, src, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(n, m):
        # find a nonzero pivot
        piv = None
        for i in range(t, n):
            for j in range(t, m):
                if D[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            moved = False
            for i in range(t + 1, n):
                if D[i][t]:
                    q = -(D[i][t] // D[t][t])
                    addmul_row(i, t, q)
                    if D[i][t]:
                        swap_rows(t, i)
                    moved = True
            for j in range(t + 1, m):
                if D[t][j]:
                    q = -(D[t][j] // D[t][t])
                    addmul_col(j, t, q)
                    if D[t][j]:
                        swap_cols(t, j)
                    moved = True
            if not moved:
                break
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    # enforce divisibility chain
    k = 0
    while k < min(n, m) - 1:
        a, b = D[k][k], D[k + 1][k + 1]
        if a and b % a != 0:
            addmul_col(k, k + 1, 1)
            # re-clear the 2x2 block
            while D[k + 1][k]:
                q = -(D[k + 1][k] // D[k][k])
                addmul_row(k + 1, k, q)
                if D[k + 1][k]:
                    swap_rows(k, k + 1)
            while D[k][k + 1]:
                q = -(D[k][k + 1] // D[k][k])
                addmul_col(k + 1, k, q)
                if D[k][k + 1]:
                    swap_cols(k, k + 1)
            if D[k][k] < 0:
                D[k] = [-x for x in D[k]]
                U[k] = [-x for x in U[k]]
            if D[k + 1][k + 1] < 0:
                D[k + 1] = [-x for x in D[k + 1]]
                U[k + 1] = [-x for x in U[k + 1]]
            k = max(k - 1, 0)
        else:
            k += 1
    return D, U, V


def rat_rref(A):
    """Reduced row echelon form over Q; returns (R, pivots)."""
    R = [[Fraction(x) for x in row] for row in A]
    n = len(R)
    m = len(R[0]) if n else 0
    pivots = []
    r = 0
    for c in range(m):
        piv = None
        for i in range(r, n):
            if R[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        p = R[r][c]
        R[r] = [x / p for x in R[r]]
        for i in range(n):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return R, pivots


def rat_rank(A):
    if not A:
        return 0
    return len(rat_rref(A)[1])


def rat_solve(A, b):
    """One rational solution x of A x = b, or None if inconsistent."""
    n = len(A)
    m = len(A[0]) if n else 0
    aug = [list(A[i]) + [b[i]] for i in range(n)]
    R, pivots = rat_rref(aug)
    for row in R:
        if all(x == 0 for x in row[:m]) and row[m] != 0:
            return None
    x = [Fraction(0)] * m
    for r, c in enumerate(pivots):
        if c == m:
            return None
        x[c] = R[r][m]
    return x

def rat_nullspace(A):
    """Basis of the rational kernel of A (list of Fraction vectors)."""
    n = len(A)
    m = len(A[0]) if n else 0
    if n == 0:
        return [[Fraction(1) if i == j else Fraction(0) for j in range(m)] for i in range(m)]
    R, pivots = rat_rref(A)
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * m
        v[fc] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -R[r][fc]
        basis.append(v)
    return basis


def int_kernel(A):
    """Basis of the integer kernel lattice {x in Z^m : A x = 0}."""
    n = len(A)
    m = len(A[0]) if n else 0
    if n == 0:
        return [tuple(1 if i == j else 0 for j in range(m)) for i in range(m)]
    D, _U, V = smith_normal_form(A)
    r = sum(1 for i in range(min(n, m)) if D[i][i] != 0)
    cols = transpose(V)
    return [tuple(cols[j]) for j in range(r, m)]


def det(A):
    """Exact determinant over Q."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    d = Fraction(1)
    for c in range(n):
        piv = None
        for i in range(c, n):
            if M[i][c] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d *= M[c][c]
        inv = 1 / M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return d


def rat_inverse(A):
    n = len(A)
    aug = [[Fraction(x) for x in A[i]] + [Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
    R, pivots = rat_rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R[:n]]


def lattice_basis(vectors):
    """Basis (rows) of the sublattice of Z^m generated by the given vectors."""
    vecs = [list(v) for v in vectors if any(v)]
    if not vecs:
        return []
    H, _ = hermite_normal_form(vecs)
    return [tuple(row) for row in H if any(row)]


def complete_to_basis(v):
    """A unimodular integer matrix whose first column is the primitive v."""
    v = list(v)
    n = len(v)
    D, U, V = smith_normal_form([v])
    if abs(D[0][0]) != 1:
        raise ValueError("vector is not primitive")
    # u * v * V = (1, 0, ..., 0) with u = +-1, so +-v is the first row of V^{-1}
    Vinv = [[int(x) for x in row] for row in rat_inverse(V)]
    if list(Vinv[0]) != v:
        Vinv[0] = [-x for x in Vinv[0]]
        if list(Vinv[0]) != v:
            raise ValueError("completion failed")
    return transpose(Vinv)


def solve_int(A, b):
    """One integer solution of A x = b, or None."""
    D, U, V = smith_normal_form(A)
    n, m = len(A), len(A[0])
    c = mat_vec(U, b)
    y = [0] * m
    for i in range(min(n, m)):
        if D[i][i]:
            if c[i] % D[i][i] != 0:
                return None
            y[i] = c[i] // D[i][i]
        elif c[i] != 0:
            return None
    for i in range(min(n, m), n):
        if c[i] != 0:
            return None
    return tuple(mat_vec(V, y))


def in_sublattice(basis_rows, v):
    """Is v an integer combination of the given (row) lattice basis?"""
    if not basis_rows:
        return not any(v)
    A = transpose([list(b) for b in basis_rows])
    return solve_int(A, list(v)) is not None
