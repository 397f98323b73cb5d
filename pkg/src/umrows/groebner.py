"""Buchberger engine with cofactor tracking, plus toric ideals.

Polynomials here are plain dicts {exponent tuple: scalar} over a `Field`.
Every Groebner basis element carries its expression in the input generators,
so `ideal_membership` can hand back exact cofactors: sum(cofactor_i * gen_i)
+ remainder = f, replayable term by term.

Budgets abort with BudgetExceeded rather than returning a wrong answer.
"""

from __future__ import annotations

from .config import Budgets, default_budgets
from .errors import BudgetExceeded
from .fieldarith import Field

# ---------------------------------------------------------------------------
# dict-poly arithmetic


def padd(F: Field, a, b):
    out = dict(a)
    for m, c in b.items():
        acc = F.add(out.get(m, F.zero), c)
        if F.is_zero(acc):
            out.pop(m, None)
        else:
            out[m] = acc
    return out


def pneg(F: Field, a):
    return {m: F.neg(c) for m, c in a.items()}


def pscale(F: Field, a, c):
    if F.is_zero(c):
        return {}
    return {m: F.mul(c, x) for m, x in a.items()}


def pmul(F: Field, a, b):
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            acc = F.add(out.get(m, F.zero), F.mul(c1, c2))
            if F.is_zero(acc):
                out.pop(m, None)
            else:
                out[m] = acc
    return out


def pmul_term(F: Field, a, mono, c):
    return {tuple(x + y for x, y in zip(m, mono)): F.mul(c, cc) for m, cc in a.items()}


# ---------------------------------------------------------------------------
# monomial orders (max-key style)


def order_key(order: str, nvars: int, block: int = 0):
    if order == "lex":
        return lambda m: m
    if order == "grevlex":
        return lambda m: (sum(m), tuple(-m[i] for i in range(nvars - 1, -1, -1)))
    if order == "elim":
        # first `block` variables dominate (grevlex within each block)
        k = block

        def key(m):
            return (sum(m[:k]), tuple(-m[i] for i in range(k - 1, -1, -1)),
                    sum(m[k:]), tuple(-m[i] for i in range(nvars - 1, k - 1, -1)))

        return key
    raise ValueError(f"unknown order {order}")


def leading(poly, key):
    m = max(poly, key=key)
    return m, poly[m]


def divides(m1, m2):
    return all(a <= b for a, b in zip(m1, m2))


def mono_lcm(m1, m2):
    return tuple(max(a, b) for a, b in zip(m1, m2))


def mono_sub(m1, m2):
    return tuple(a - b for a, b in zip(m1, m2))


# ---------------------------------------------------------------------------
# division with cofactors


def reduce_poly(F: Field, f, basis, key, track=True):
    """Full reduction of f by the basis polys.

    Returns (normal form, cofactors) with f = sum cof_i b_i + nf exactly.
    """
    nf = {}
    rem = dict(f)
    cofs = [{} for _ in basis] if track else None
    lead_cache = [leading(b, key) if b else None for b in basis]
    while rem:
        m, c = leading(rem, key)
        hit = None
        for i, lead_i in enumerate(lead_cache):
            if lead_i is not None and divides(lead_i[0], m):
                hit = i
                break
        if hit is None:
            nf[m] = c
            del rem[m]
            continue
        lm, lc = lead_cache[hit]
        q = F.div(c, lc)
        shift = mono_sub(m, lm)
        rem = padd(F, rem, pneg(F, pmul_term(F, basis[hit], shift, q)))
        if track:
            acc = F.add(cofs[hit].get(shift, F.zero), q)
            if F.is_zero(acc):
                cofs[hit].pop(shift, None)
            else:
                cofs[hit][shift] = acc
    return nf, cofs


class GBasis:
    """Reduced Groebner basis with cofactor matrix over the input generators."""

    def __init__(self, gens, basis, cof_matrix, order, nvars, block=0):
        self.gens = gens
        self.basis = basis
        self.cof_matrix = cof_matrix  # basis[i] = sum_j cof_matrix[i][j] * gens[j]
        self.order = order
        self.block = block
        self.nvars = nvars
        self.key = order_key(order, nvars, block)

    def normal_form(self, f, track=False):
        nf, cofs = reduce_poly(self.gens_field(), f, self.basis, self.key, track=track)
        return (nf, cofs) if track else nf

    def gens_field(self):
        return self.field

    def membership(self, f):
        """(is_member, cofactors over the original generators, normal form)."""
        F = self.field
        nf, cofs = reduce_poly(F, f, self.basis, self.key, track=True)
        gen_cofs = [{} for _ in self.gens]
        for i, c in enumerate(cofs):
            if not c:
                continue
            for j, gc in enumerate(self.cof_matrix[i]):
                if gc:
                    gen_cofs[j] = padd(F, gen_cofs[j], pmul(F, c, gc))
        return (not nf), gen_cofs, nf


def buchberger(F: Field, gens, nvars, order="grevlex", block=0,
               budgets: Budgets | None = None) -> GBasis:
    budgets = budgets or default_budgets()
    key = order_key(order, nvars, block)
    basis = []
    cofm = []
    for j, g in enumerate(gens):
        if g:
            basis.append(dict(g))
            row = [{} for _ in gens]
            row[j] = {(0,) * nvars: F.one}
            cofm.append(row)
    pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    seen_pairs = 0
    while pairs:
        pairs.sort(key=lambda ij: key(mono_lcm(leading(basis[ij[0]], key)[0],
                                               leading(basis[ij[1]], key)[0])), reverse=True)
        i, j = pairs.pop()
        seen_pairs += 1
        if seen_pairs > budgets.gb_max_pairs:
            raise BudgetExceeded("Groebner pair budget exhausted")
        lmi, lci = leading(basis[i], key)
        lmj, lcj = leading(basis[j], key)
        lcm = mono_lcm(lmi, lmj)
        if sum(lcm) > budgets.gb_max_degree:
            raise BudgetExceeded("Groebner degree budget exhausted")
        if all(a + b == c for a, b, c in zip(lmi, lmj, lcm)):
            continue  # coprime leading monomials
        s = padd(F,
                 pmul_term(F, basis[i], mono_sub(lcm, lmi), F.inv(lci)),
                 pneg(F, pmul_term(F, basis[j], mono_sub(lcm, lmj), F.inv(lcj))))
        scof = [padd(F,
                     pmul_term(F, cofm[i][t], mono_sub(lcm, lmi), F.inv(lci)),
                     pneg(F, pmul_term(F, cofm[j][t], mono_sub(lcm, lmj), F.inv(lcj))))
                for t in range(len(gens))]
        nf, red_cofs = reduce_poly(F, s, basis, key, track=True)
        if nf:
            for t in range(len(basis)):
                if red_cofs[t]:
                    for g in range(len(gens)):
                        if cofm[t][g]:
                            scof[g] = padd(F, scof[g],
                                           pneg(F, pmul(F, red_cofs[t], cofm[t][g])))
            basis.append(nf)
            cofm.append(scof)
            if len(basis) > budgets.gb_max_basis:
                raise BudgetExceeded("Groebner basis budget exhausted")
            new = len(basis) - 1
            pairs.extend((t, new) for t in range(new))
    gb = GBasis(gens, basis, cofm, order, nvars, block)
    gb.field = F
    _autoreduce(F, gb)
    return gb


def _autoreduce(F: Field, gb: GBasis):
    """Inter-reduce the basis, keeping the cofactor matrix consistent."""
    key = gb.key
    changed = True
    while changed:
        changed = False
        for i in range(len(gb.basis)):
            others = gb.basis[:i] + gb.basis[i + 1:]
            if not others or not gb.basis[i]:
                continue
            nf, cofs = reduce_poly(F, gb.basis[i], others, key, track=True)
            if nf != gb.basis[i]:
                changed = True
                rows = gb.cof_matrix[:i] + gb.cof_matrix[i + 1:]
                newrow = [dict(c) for c in gb.cof_matrix[i]]
                for t, c in enumerate(cofs):
                    if c:
                        for g in range(len(gb.gens)):
                            if rows[t][g]:
                                newrow[g] = padd(F, newrow[g], pneg(F, pmul(F, c, rows[t][g])))
                gb.basis[i] = nf
                gb.cof_matrix[i] = newrow
        # drop zeros
        keep = [t for t, b in enumerate(gb.basis) if b]
        gb.basis = [gb.basis[t] for t in keep]
        gb.cof_matrix = [gb.cof_matrix[t] for t in keep]
    # normalize leading coefficients to 1
    for t, b in enumerate(gb.basis):
        _, lc = leading(b, key)
        inv = F.inv(lc)
        gb.basis[t] = pscale(F, b, inv)
        gb.cof_matrix[t] = [pscale(F, c, inv) for c in gb.cof_matrix[t]]
    gb.basis, order_idx = _sorted_basis(gb.basis, key)
    gb.cof_matrix = [gb.cof_matrix[t] for t in order_idx]


def _sorted_basis(basis, key):
    idx = sorted(range(len(basis)), key=lambda t: key(leading(basis[t], key)[0]))
    return [basis[t] for t in idx], idx


# ---------------------------------------------------------------------------
# membership and verification helpers


def ideal_membership(F: Field, f, gens, nvars, order="grevlex",
                     budgets: Budgets | None = None):
    """(member?, cofactors, normal form) for f against the ideal (gens)."""
    gb = buchberger(F, gens, nvars, order=order, budgets=budgets)
    return gb.membership(f)


def verify_cofactors(F: Field, f, gens, cofs, nf):
    acc = dict(nf)
    for c, g in zip(cofs, gens):
        acc = padd(F, acc, pmul(F, c, g))
    return acc == f


# ---------------------------------------------------------------------------
# toric ideals


def lattice_kernel_binomials(F: Field, vectors, torsion_orders=()):
    """Binomial generators x^{u+} - x^{u-} of the lattice ideal of the map
    Z^s -> Z^r x prod Z_n, e_i -> vectors[i]."""
    from . import intlinalg as la

    s = len(vectors)
    r = len(vectors[0]) - len(torsion_orders)
    p = len(torsion_orders)
    rows = []
    for i in range(r):
        rows.append([v[i] for v in vectors] + [0] * p)
    for j in range(p):
        row = [v[r + j] for v in vectors] + [0] * p
        row[s + j] = torsion_orders[j]
        rows.append(row)
    kern = la.int_kernel(rows) if rows else []
    out = []
    for u in kern:
        x = u[:s]
        if not any(x):
            continue
        up = tuple(max(v, 0) for v in x)
        um = tuple(max(-v, 0) for v in x)
        b = {up: F.one}
        acc = F.add(b.get(um, F.zero), F.neg(F.one))
        if F.is_zero(acc):
            b.pop(um, None)
        else:
            b[um] = acc
        if b:
            out.append(b)
    return out


def toric_ideal(F: Field, vectors, torsion_orders=(), budgets: Budgets | None = None):
    """Generators of the toric ideal of the monoid map e_i -> vectors[i].

    Computed as the saturation of the lattice-kernel binomials with respect
    to the product of the variables (one extra variable, elimination order).
    """
    budgets = budgets or default_budgets()
    s = len(vectors)
    base = lattice_kernel_binomials(F, vectors, torsion_orders)
    if not base:
        return []
    # saturate: eliminate w from (base, w*x1*...*xs - 1)
    gens = []
    for b in base:
        gens.append({(0,) + m: c for m, c in b.items()})
    top = {(1,) + (1,) * s: F.one, (0,) * (s + 1): F.neg(F.one)}
    gens.append(top)
    gb = buchberger(F, gens, s + 1, order="elim", block=1, budgets=budgets)
    out = []
    for b in gb.basis:
        if all(m[0] == 0 for m in b):
            out.append({m[1:]: c for m, c in b.items()})
    return out


def leading_coefficient_ideal(F: Field, gens, nvars, var_index=0,
                              budgets: Budgets | None = None):
    """Generators of the ideal of leading coefficients (in one variable) of an
    ideal of polynomials: leading t-coefficients of a basis computed with the
    chosen variable dominant."""
    budgets = budgets or default_budgets()
    # move var_index to the front and use the elimination order on it
    perm = [var_index] + [i for i in range(nvars) if i != var_index]
    inv = [perm.index(i) for i in range(nvars)]

    def shuffle(p):
        return {tuple(m[perm[i]] for i in range(nvars)): c for m, c in p.items()}

    def unshuffle_m(m):
        return tuple(m[inv[i]] for i in range(nvars))

    g2 = [shuffle(g) for g in gens]
    gb = buchberger(F, g2, nvars, order="elim", block=1, budgets=budgets)
    out = []
    for b in gb.basis:
        d = max(m[0] for m in b)
        lead = {unshuffle_m((0,) + m[1:]): c for m, c in b.items() if m[0] == d}
        out.append(lead)
    return out
