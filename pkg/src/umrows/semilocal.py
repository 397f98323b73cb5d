"""Row reduction over finite-dimensional commutative algebras.

A finite-dimensional commutative algebra over an exact field splits into a
product of local algebras through idempotents found by factoring minimal
polynomials.  Over each local factor a unimodular row must contain a unit
entry, and the reduction is plain linear algebra.  The factor words are
recombined with the orthogonal idempotents, giving a single verified word.

Univariate factorization over Q / F_p is delegated to sympy; everything else
is exact linear algebra over the package's `Field` protocol.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidInput, NotFiniteDimensional, NotUnimodular, UnsupportedInput
from .fieldarith import GF, QQ, Field


def poly_trim(p):
    while p and all(False for _ in ()) is False and p and p[-1] == 0:
        p.pop()
    return p


def _trimF(F, p):
    p = list(p)
    while p and F.is_zero(p[-1]):
        p.pop()
    return p


def poly_divmod_f(F: Field, a, b):
    a = _trimF(F, a)
    b = _trimF(F, b)
    if not b:
        raise ZeroDivisionError
    q = [F.zero] * max(1, len(a) - len(b) + 1)
    while a and len(a) >= len(b):
        c = F.div(a[-1], b[-1])
        k = len(a) - len(b)
        q[k] = F.add(q[k], c)
        for i in range(len(b)):
            a[i + k] = F.sub(a[i + k], F.mul(c, b[i]))
        a = _trimF(F, a)
    return _trimF(F, q), a


def poly_mul_f(F: Field, a, b):
    if not a or not b:
        return []
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not F.is_zero(x):
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _trimF(F, out)


def poly_xgcd_f(F: Field, a, b):
    """(g, u, v) with u a + v b = g, g monic."""
    r0, r1 = _trimF(F, a), _trimF(F, b)
    s0, s1 = [F.one], []
    t0, t1 = [], [F.one]
    while r1:
        q, r = poly_divmod_f(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _sub_f(F, s0, poly_mul_f(F, q, s1))
        t0, t1 = t1, _sub_f(F, t0, poly_mul_f(F, q, t1))
    if not r0:
        return [], [], []
    lc = r0[-1]
    inv = F.inv(lc)
    return ([F.mul(inv, c) for c in r0], [F.mul(inv, c) for c in s0],
            [F.mul(inv, c) for c in t0])


def _sub_f(F, a, b):
    n = max(len(a), len(b))
    out = [F.zero] * n
    for i, c in enumerate(a):
        out[i] = F.add(out[i], c)
    for i, c in enumerate(b):
        out[i] = F.sub(out[i], c)
    return _trimF(F, out)


def factor_univariate(F: Field, coeffs):
    """Irreducible factorization over Q or F_p via sympy: [(coeffs, mult)]."""
    import sympy

    x = sympy.Symbol("x")
    if F is QQ or isinstance(F, type(QQ)):
        expr = sum(sympy.Rational(c.numerator, c.denominator) * x**i
                   for i, c in enumerate(coeffs))
        poly = sympy.Poly(expr, x, domain="QQ")
    elif isinstance(F, GF):
        expr = sum(int(c) * x**i for i, c in enumerate(coeffs))
        poly = sympy.Poly(expr, x, domain=sympy.GF(F.p))
    else:
        raise UnsupportedInput("factorization only over Q and prime fields")
    _, factors = poly.factor_list()
    out = []
    for fac, mult in factors:
        cs = list(reversed(fac.all_coeffs()))
        out.append(([F.of(Fraction(str(c))) if not isinstance(F, GF) else F.of(int(c))
                     for c in cs], mult))
    return out


class FiniteAlgebra:
    """Commutative algebra with a finite basis and exact structure constants.

    Elements are coefficient tuples over the basis.  `labels` ties basis
    vectors back to whatever the caller is quotienting (e.g. monomials), so
    words computed here can be lifted.
    """

    def __init__(self, field: Field, labels, table, one_coords):
        self.field = field
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.table = table  # (i, j) -> dict {k: coeff}
        self.one = tuple(one_coords)

    # -- element ops

    def zero_elem(self):
        return (self.field.zero,) * self.dim

    def add(self, a, b):
        F = self.field
        return tuple(F.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        F = self.field
        return tuple(F.neg(x) for x in a)

    def scale(self, c, a):
        F = self.field
        return tuple(F.mul(c, x) for x in a)

    def mul(self, a, b):
        F = self.field
        out = [F.zero] * self.dim
        for i, x in enumerate(a):
            if F.is_zero(x):
                continue
            for j, y in enumerate(b):
                if F.is_zero(y):
                    continue
                c = F.mul(x, y)
                for k, t in self.table[(i, j)].items():
                    out[k] = F.add(out[k], F.mul(c, t))
        return tuple(out)

    def is_zero_elem(self, a):
        return all(self.field.is_zero(x) for x in a)

    def mult_matrix(self, a):
        cols = []
        for j in range(self.dim):
            e = [self.field.zero] * self.dim
            e[j] = self.field.one
            cols.append(self.mul(a, tuple(e)))
        # columns are images of basis vectors
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def inverse(self, a):
        """a^{-1} or None."""
        M = self.mult_matrix(a)
        return _solve_field(self.field, M, list(self.one))

    def power(self, a, k):
        out = self.one
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def minimal_polynomial(self, a):
        F = self.field
        rows = [list(self.one)]
        cur = self.one
        while True:
            cur = self.mul(cur, a)
            rows.append(list(cur))
            dep = _dependency(F, rows)
            if dep is not None:
                return _trimF(F, dep)

    # -- splitting

    def split_idempotent(self, e):
        """Sub-algebras e*A and (1-e)*A with embedding data.

        Returns [(idempotent, basis rows of the summand, sub-algebra)]."""
        F = self.field
        out = []
        for idem in (e, self.add(self.one, self.neg(e))):
            vecs = []
            for j in range(self.dim):
                b = [F.zero] * self.dim
                b[j] = F.one
                vecs.append(list(self.mul(idem, tuple(b))))
            basis = _row_basis(F, vecs)
            if not basis:
                continue
            sub = self._restrict(basis, idem)
            out.append((idem, basis, sub))
        return out

    def _restrict(self, basis, idem):
        F = self.field
        dim = len(basis)
        table = {}
        for i in range(dim):
            for j in range(dim):
                prod = self.mul(tuple(basis[i]), tuple(basis[j]))
                coords = _coords_in(F, basis, list(prod))
                table[(i, j)] = {k: c for k, c in enumerate(coords) if not F.is_zero(c)}
        one_coords = _coords_in(F, basis, list(idem))
        labels = [("sub", i) for i in range(dim)]
        sub = FiniteAlgebra(F, labels, table, one_coords)
        sub.embed_basis = basis  # rows as elements of the parent algebra
        return sub

    def find_splitting(self, rng=None):
        """A nontrivial idempotent, or None if (apparently) local."""
        import random

        F = self.field
        rng = rng or random.Random(3)
        candidates = []
        for j in range(self.dim):
            e = [F.zero] * self.dim
            e[j] = F.one
            candidates.append(tuple(e))
        for _ in range(6):
            candidates.append(tuple(F.of(rng.randint(-3, 3)) for _ in range(self.dim)))
        for a in candidates:
            mp = self.minimal_polynomial(a)
            facs = factor_univariate(F, mp)
            if len(facs) < 2:
                continue
            g, mult = facs[0]
            gpow = [F.one]
            for _ in range(mult):
                gpow = poly_mul_f(F, gpow, g)
            h, _ = poly_divmod_f(F, mp, gpow)
            d, u, v = poly_xgcd_f(F, gpow, h)
            if len(d) != 1:
                continue
            vh = poly_mul_f(F, v, h)
            e = self.eval_poly(vh, a)
            if self.is_zero_elem(e) or e == self.one:
                continue
            if self.mul(e, e) == e:
                return e
        return None

    def eval_poly(self, coeffs, a):
        out = self.zero_elem()
        p = self.one
        for c in coeffs:
            out = self.add(out, self.scale(c, p))
            p = self.mul(p, a)
        return out

    def local_factors(self):
        """[(embed rows, sub-algebra)] for the complete local splitting."""
        e = self.find_splitting()
        if e is None:
            ident = [[self.field.one if i == j else self.field.zero
                      for j in range(self.dim)] for i in range(self.dim)]
            return [(ident, self)]
        out = []
        for idem, basis, sub in self.split_idempotent(e):
            for emb, leaf in sub.local_factors():
                # compose embeddings: leaf basis rows in self-coordinates
                rows = []
                for r in emb:
                    acc = [self.field.zero] * self.dim
                    for c, brow in zip(r, basis):
                        for t in range(self.dim):
                            acc[t] = self.field.add(acc[t], self.field.mul(c, brow[t]))
                    rows.append(acc)
                out.append((rows, leaf))
        return out


def _solve_field(F: Field, M, b):
    n = len(M)
    aug = [list(M[i]) + [b[i]] for i in range(n)]
    r = 0
    cols = len(aug[0])
    piv_cols = []
    for c in range(cols - 1):
        piv = None
        for i in range(r, n):
            if not F.is_zero(aug[i][c]):
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = F.inv(aug[r][c])
        aug[r] = [F.mul(inv, x) for x in aug[r]]
        for i in range(n):
            if i != r and not F.is_zero(aug[i][c]):
                f = aug[i][c]
                aug[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, n):
        if not F.is_zero(aug[i][-1]):
            return None
    x = [F.zero] * (cols - 1)
    for i, c in enumerate(piv_cols):
        x[c] = aug[i][-1]
    return tuple(x)


def _dependency(F: Field, rows):
    """If the last row depends on the previous ones, return the coefficients
    p_0..p_{k-1} with row_k = sum p_i row_i rewritten as a monic polynomial
    relation x^k - sum p_i x^i = 0 ... returned as minimal-poly coefficients."""
    k = len(rows) - 1
    A = [[rows[i][t] for i in range(k)] for t in range(len(rows[0]))]
    sol = _solve_field(F, A, [rows[k][t] for t in range(len(rows[0]))])
    if sol is None:
        return None
    coeffs = [F.neg(c) for c in sol] + [F.one]
    return coeffs


def _row_basis(F: Field, vecs):
    basis = []
    red = []
    for v in vecs:
        v = list(v)
        for b in red:
            piv = next(i for i, x in enumerate(b) if not F.is_zero(x))
            if not F.is_zero(v[piv]):
                f = F.div(v[piv], b[piv])
                v = [F.sub(x, F.mul(f, y)) for x, y in zip(v, b)]
        if any(not F.is_zero(x) for x in v):
            red.append(v)
            basis.append(list(v))
    return basis


def _coords_in(F: Field, basis, v):
    A = [[basis[j][t] for j in range(len(basis))] for t in range(len(basis[0]))]
    sol = _solve_field(F, A, v)
    if sol is None:
        raise InvalidInput("vector outside the summand")
    return list(sol)


# ---------------------------------------------------------------------------
# semilocal row reduction

def reduce_semilocal_row(alg: FiniteAlgebra, row, n=None):
    """Word of (i, j, multiplier) over the algebra reducing `row` to e.

    The row must be unimodular over the algebra (a unit entry must exist in
    every local factor).  Multipliers are algebra elements.
    """
    n = n or len(row)
    F = alg.field
    moves = []
    for emb, leaf in alg.local_factors():
        # project the current row into the factor: coordinates w.r.t. emb
        def project(x):
            # leaf-coordinates of idem * x
            idem = leaf_one_in_parent = None
            # compute idem from emb: leaf.one in parent coords
            acc = [F.zero] * alg.dim
            for c, r in zip(leaf.one, emb):
                for t in range(alg.dim):
                    acc[t] = F.add(acc[t], F.mul(c, r[t]))
            ex = alg.mul(tuple(acc), x)
            return tuple(_coords_in(F, emb, list(ex)))

        def unproject(y):
            acc = [F.zero] * alg.dim
            for c, r in zip(y, emb):
                for t in range(alg.dim):
                    acc[t] = F.add(acc[t], F.mul(c, r[t]))
            return tuple(acc)

        cur_local = [project(x) for x in row]
        # apply previously accumulated moves inside this factor
        for (i, j, a) in moves:
            al = project(a)
            cur_local[j] = leaf.add(cur_local[j], leaf.mul(al, cur_local[i]))
        unit_slot = None
        inv = None
        for s, x in enumerate(cur_local):
            inv = leaf.inverse(x)
            if inv is not None:
                unit_slot = s
                break
        if unit_slot is None:
            raise NotUnimodular("no unit entry in a local factor")
        local_moves = []
        if unit_slot != 0:
            m = leaf.mul(inv, leaf.add(leaf.one, leaf.neg(cur_local[0])))
            local_moves.append((unit_slot, 0, m))
            cur_local[0] = leaf.add(cur_local[0], leaf.mul(m, cur_local[unit_slot]))
        else:
            # normalize slot 0 to the factor identity via slot 1
            m1 = leaf.mul(inv, leaf.add(leaf.one, leaf.neg(cur_local[1])))
            local_moves.append((0, 1, m1))
            cur_local[1] = leaf.add(cur_local[1], leaf.mul(m1, cur_local[0]))
            m2 = leaf.add(leaf.one, leaf.neg(cur_local[0]))
            local_moves.append((1, 0, m2))
            cur_local[0] = leaf.add(cur_local[0], leaf.mul(m2, cur_local[1]))
        for j in range(1, len(row)):
            if not leaf.is_zero_elem(cur_local[j]):
                local_moves.append((0, j, leaf.neg(cur_local[j])))
                cur_local[j] = leaf.zero_elem()
        moves.extend((i, j, unproject(a)) for i, j, a in local_moves)
    # final verification over the full algebra
    cur = list(row)
    for (i, j, a) in moves:
        cur[j] = alg.add(cur[j], alg.mul(a, cur[i]))
    if not (cur[0] == alg.one and all(alg.is_zero_elem(x) for x in cur[1:])):
        raise NotUnimodular("semilocal reduction failed verification")
    return moves


def quotient_algebra(F: Field, gens, nvars, budgets=None, max_dim=400):
    """field[x_1..x_n]/(gens) as a FiniteAlgebra (standard monomial basis).

    Raises NotFiniteDimensional if the quotient has infinitely many standard
    monomials.
    """
    from .groebner import buchberger, divides, leading, reduce_poly

    gb = buchberger(F, gens, nvars, order="grevlex", budgets=budgets)
    key = gb.key
    leads = [leading(b, key)[0] for b in gb.basis if b]
    # finiteness: every variable must appear alone in some leading monomial
    for v in range(nvars):
        if not any(all(m[t] == 0 for t in range(nvars) if t != v) and m[v] > 0
                   for m in leads):
            raise NotFiniteDimensional(f"variable {v} is free in the quotient")
    # enumerate standard monomials
    basis = []
    frontier = [(0,) * nvars]
    seen = set(frontier)
    while frontier:
        m = frontier.pop()
        if any(divides(l, m) for l in leads):
            continue
        basis.append(m)
        if len(basis) > max_dim:
            raise NotFiniteDimensional("quotient dimension exceeds the cap")
        for v in range(nvars):
            m2 = m[:v] + (m[v] + 1,) + m[v + 1:]
            if m2 not in seen:
                seen.add(m2)
                frontier.append(m2)
    basis.sort()
    index = {m: i for i, m in enumerate(basis)}
    table = {}
    for i, mi in enumerate(basis):
        for j, mj in enumerate(basis):
            if j < i:
                table[(i, j)] = table[(j, i)]
                continue
            prod = tuple(a + b for a, b in zip(mi, mj))
            nf, _ = reduce_poly(F, {prod: F.one}, gb.basis, key, track=False)
            table[(i, j)] = {index[m]: c for m, c in nf.items()}
    one = [F.zero] * len(basis)
    one[index[(0,) * nvars]] = F.one
    alg = FiniteAlgebra(F, basis, table, one)
    alg.gb = gb
    alg.index = index
    return alg


def algebra_project(alg: FiniteAlgebra, poly):
    """Coordinates of a dict-poly modulo the algebra's Groebner basis."""
    from .groebner import reduce_poly

    F = alg.field
    nf, _ = reduce_poly(F, poly, alg.gb.basis, alg.gb.key, track=False)
    out = [F.zero] * alg.dim
    for m, c in nf.items():
        out[alg.index[m]] = F.add(out[alg.index[m]], c)
    return tuple(out)


def algebra_lift(alg: FiniteAlgebra, coords):
    """Dict-poly lift of algebra coordinates along the standard-monomial basis."""
    F = alg.field
    out = {}
    for m, c in zip(alg.labels, coords):
        if not F.is_zero(c):
            out[m] = c
    return out
