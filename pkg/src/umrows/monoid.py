"""Affine and torsion-augmented commutative cancellative monoids.

Element convention: a monoid element is a tuple of ints of length
`free_rank + len(torsion_orders)`; the trailing torsion coordinates are kept
reduced modulo their orders.  Torsion-free monoids have no trailing part.

Monoids that are not finitely generated (interior submonoids, polytopal
submonoids, seminormalizations) are represented intensionally by
`MembershipMonoid`: a cone together with a per-face record saying which
lattice points over the relative interior of each face belong, and with
which torsion cosets.  That table is exactly what additive closure needs:
relint(F1) + relint(F2) lands in relint(F1 v F2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from . import intlinalg as la
from .config import Budgets, default_budgets
from .errors import BudgetExceeded, InvalidInput, NotPointed, NotPositive, UnsupportedInput
from .geometry import (AffineHyperplane, Cone, RationalPolytope, cross_section,
                       phi, positive_functional, qvec, scale_to_integer)

Elem = tuple


def _reduce_torsion(vec, free_rank, orders):
    head = tuple(int(x) for x in vec[:free_rank])
    tail = tuple(int(x) % n for x, n in zip(vec[free_rank:], orders))
    return head + tail


# ---------------------------------------------------------------------------
# Hilbert bases

def _parallelepiped_points(cols):
    """Lattice points of {R t : 0 <= t_i < 1} for the column matrix R (full rank).

    Enumerated by residue classes of Z^d / R Z^d; exactly |det R| points.
    """
    d = len(cols[0])
    R = [[cols[j][i] for j in range(len(cols))] for i in range(d)]
    D, U, V = la.smith_normal_form(R)
    diag = [D[i][i] for i in range(d)]
    if any(x == 0 for x in diag):
        raise ValueError("parallelepiped of singular matrix")
    Uinv = la.rat_inverse(U)
    Rinv = la.rat_inverse(R)
    pts = []
    for combo in product(*[range(abs(x)) for x in diag]):
        x = [sum(Uinv[i][k] * combo[k] for k in range(d)) for i in range(d)]
        # push x into the fundamental domain: x -= R * floor(Rinv x)
        t = [sum(Rinv[i][k] * x[k] for k in range(d)) for i in range(d)]
        fl = [Fraction(int(ti // 1)) if ti == int(ti // 1) else Fraction(ti.__floor__()) for ti in t]
        fl = [Fraction(ti.numerator // ti.denominator) for ti in t]
        y = [x[i] - sum(Fraction(R[i][k]) * fl[k] for k in range(d)) for i in range(d)]
        pt = tuple(int(v) for v in y)
        pts.append(pt)
    return sorted(set(pts))


def hilbert_basis_lattice(C: Cone, budgets: Budgets | None = None):
    """Hilbert basis of C cap Z^d for a pointed full-sized lattice.

    Normaliz-style: candidates are the extreme rays plus the lattice points of
    the fundamental parallelepipeds of all full-rank extreme-ray subsets
    (these cover the cone), then irreducibles are filtered out exactly.
    """
    if C.is_zero:
        return []
    C.check_pointed()
    d = C.dim()
    amb = C.ambient_rank
    if d < amb:
        raise ValueError("hilbert_basis_lattice needs a full-dimensional cone in its span coordinates")
    rays = [la.primitive(r) for r in C.extreme_rays()]
    lam = positive_functional(rays, amb)
    cands = set(rays)
    for sub in combinations(rays, d):
        cols = [list(v) for v in sub]
        M = [[cols[j][i] for j in range(d)] for i in range(d)]
        if la.det(M) == 0:
            continue
        for p in _parallelepiped_points(cols):
            if any(p) and C.contains(p):
                cands.add(p)
    def deg(x):
        return sum(a * b for a, b in zip(lam, x))
    ordered = sorted(cands, key=lambda x: (deg(x), x))
    irr = []
    for x in ordered:
        reducible = False
        for y in irr:
            if deg(y) >= deg(x):
                break
            diff = tuple(a - b for a, b in zip(x, y))
            if any(diff) and C.contains(diff):
                reducible = True
                break
            if not any(diff):
                reducible = True
                break
        if not reducible:
            irr.append(x)
    return sorted(irr)


def hilbert_basis(C: Cone, lattice_rows=None, budgets: Budgets | None = None):
    """Hilbert basis of C intersected with the given lattice (rows; default Z^r).

    Returns ambient-coordinate elements.  The cone must be pointed.
    """
    if C.is_zero:
        return []
    C.check_pointed()
    if lattice_rows is None:
        lattice_rows = la.identity(C.ambient_rank)
    # coordinates on the lattice: z = sum c_i b_i
    B = [list(b) for b in lattice_rows]
    Bt = la.transpose(B)
    gens_c = []
    for g in C.generators:
        sol = la.rat_solve(Bt, list(g))
        if sol is None:
            # generator not in the rational span of the lattice: intersect first
            raise InvalidInput("cone generators must lie in the span of the lattice")
        gens_c.append(scale_to_integer(sol))
    Cc = Cone(gens_c, len(B))
    # the coordinate cone may be lower-dimensional inside the lattice; restrict again
    if Cc.dim() < len(B):
        sub = la.lattice_basis([list(g) for g in gens_c])
        # solve in the sub-basis
        inner = hilbert_basis(Cc, sub, budgets)
        return sorted(tuple(la.mat_vec(Bt, list(h))) for h in inner)
    hb = hilbert_basis_lattice(Cc, budgets)
    return sorted(tuple(la.mat_vec(Bt, list(h))) for h in hb)


# ---------------------------------------------------------------------------
# affine monoids

class AffineMonoid:
    """Finitely generated torsion-free monoid, embedded in Z^r."""

    def __init__(self, generators, ambient_rank=None):
        gens = [tuple(int(x) for x in g) for g in generators]
        gens = [g for g in gens if any(g)]
        if ambient_rank is None:
            if not gens:
                raise InvalidInput("need an ambient rank for the trivial monoid")
            ambient_rank = len(gens[0])
        self.ambient_rank = ambient_rank
        self.generators = tuple(sorted(set(gens)))
        self.free_rank = ambient_rank
        self.torsion_orders = ()
        self._cache = {}

    @property
    def zero(self) -> Elem:
        return (0,) * self.ambient_rank

    def add(self, a: Elem, b: Elem) -> Elem:
        return tuple(x + y for x, y in zip(a, b))

    def cone(self) -> Cone:
        if "cone" not in self._cache:
            self._cache["cone"] = Cone(self.generators, self.ambient_rank)
        return self._cache["cone"]

    def gp_basis(self):
        """Rows forming a basis of the group of differences inside Z^r."""
        if "gp" not in self._cache:
            self._cache["gp"] = la.lattice_basis([list(g) for g in self.generators])
        return self._cache["gp"]

    def rank(self) -> int:
        return len(self.gp_basis())

    def is_positive(self) -> bool:
        return self.cone().is_pointed()

    def check_positive(self):
        if not self.is_positive():
            raise NotPositive(f"monoid on {self.generators} has nontrivial units")

    def units(self):
        """The unit group: trivial for positive monoids (a basis of it otherwise)."""
        if self.is_positive():
            return []
        C = self.cone()
        line_dirs = []
        for g in self.generators:
            if C.contains(tuple(-x for x in g)):
                line_dirs.append(g)
        return la.lattice_basis([list(g) for g in line_dirs])

    def degree_functional(self):
        if "lam" not in self._cache:
            lam = positive_functional(self.generators, self.ambient_rank)
            if lam is None:
                raise NotPointed("no grading: monoid is not positive")
            self._cache["lam"] = lam
        return self._cache["lam"]

    def deg(self, x) -> int:
        return sum(a * b for a, b in zip(self.degree_functional(), x))

    def contains(self, z) -> bool:
        """Exact membership z in Z_+ <generators> (bounded search with pruning)."""
        z = tuple(int(x) for x in z)
        if z == self.zero:
            return True
        memo = self._cache.setdefault("member", {})
        C = self.cone()
        lam = self.degree_functional()

        def rec(v):
            if not any(v):
                return True
            if v in memo:
                return memo[v]
            ok = False
            if C.contains(v):
                for g in self.generators:
                    w = tuple(a - b for a, b in zip(v, g))
                    if sum(a * b for a, b in zip(lam, w)) < 0:
                        continue
                    if rec(w):
                        ok = True
                        break
            memo[v] = ok
            return ok

        return rec(z)

    def hilbert_basis(self, budgets=None):
        """Minimal generating set (the monoid must be positive).

        For non-normal monoids this filters the given generators down to the
        irreducible ones; for normal monoids it agrees with the cone's
        Hilbert basis in gp(M).
        """
        if "hilb" not in self._cache:
            self.check_positive()
            gens = sorted(self.generators, key=lambda g: (self.deg(g), g))
            irr = []
            for i, g in enumerate(gens):
                others = [h for h in gens if h != g]
                sub = AffineMonoid(others, self.ambient_rank) if others else None
                if sub is None or not sub.contains(g):
                    irr.append(g)
            self._cache["hilb"] = tuple(irr)
        return self._cache["hilb"]

    def enumerate(self, max_deg, budgets=None):
        """All monoid elements with lambda-degree <= max_deg."""
        budgets = budgets or default_budgets()
        lam = self.degree_functional()
        out = {self.zero}
        frontier = {self.zero}
        while frontier:
            nxt = set()
            for v in frontier:
                for g in self.generators:
                    w = self.add(v, g)
                    if sum(a * b for a, b in zip(lam, w)) <= max_deg and w not in out:
                        out.add(w)
                        nxt.add(w)
                        if len(out) > budgets.enumeration_cap:
                            raise BudgetExceeded("monoid enumeration too large")
            frontier = nxt
        return sorted(out, key=lambda v: (self.deg(v), v))

    def key(self):
        return ("affine", self.ambient_rank, self.generators)

    def __repr__(self):
        return f"AffineMonoid{self.generators}"


def normalization(M: AffineMonoid, budgets=None) -> AffineMonoid:
    """n(M): elements of gp(M) with a positive multiple in M."""
    M.check_positive()
    hb = hilbert_basis(M.cone(), M.gp_basis(), budgets)
    return AffineMonoid(hb, M.ambient_rank)


def is_normal(M: AffineMonoid, budgets=None) -> bool:
    return all(M.contains(h) for h in normalization(M, budgets).generators)


def conductor_element(M: AffineMonoid, budgets=None) -> Elem:
    """Smallest-degree m in M with m + n(M) inside M, brute-forced to the
    configured degree bound (ties broken lexicographically)."""
    budgets = budgets or default_budgets()
    n = normalization(M, budgets)
    if all(M.contains(h) for h in n.generators):
        return M.zero
    bound = budgets.degree_bound
    targets = n.enumerate(bound, budgets)
    for m in M.enumerate(bound, budgets):
        ok = True
        for x in targets:
            if M.deg(x) + M.deg(m) > bound:
                continue
            if not M.contains(M.add(m, x)):
                ok = False
                break
        if ok and any(m):
            return m
    raise BudgetExceeded("no conductor element found within the degree bound")


def free_cover_basis(M: AffineMonoid, budgets=None):
    """A lattice basis (rows) of gp(M) whose nonnegative span contains M."""
    budgets = budgets or default_budgets()
    M.check_positive()
    gp = M.gp_basis()
    rho = len(gp)
    if rho == 0:
        return []
    # work in gp coordinates
    Bt = la.transpose([list(b) for b in gp])
    gens_c = [tuple(int(x) for x in la.rat_solve(Bt, list(g))) for g in M.generators]
    # dual cone of the coordinate cone, generated by its Hilbert basis
    dualC = _dual_cone(gens_c, rho)
    dual_hb = hilbert_basis(dualC)
    # pick rho functionals with determinant +-1, all >= 0 on the generators
    pool = list(dual_hb)
    for extra in range(budgets.escalation_cap):
        for sub in combinations(pool, rho):
            Mm = [list(v) for v in sub]
            if abs(la.det(Mm)) == 1:
                dual_rows = list(sub)
                basis_c = la.transpose(la.rat_inverse([list(r) for r in dual_rows]))
                basis_c = [tuple(int(x) for x in row) for row in basis_c]
                out = [tuple(la.mat_vec(Bt, list(b))) for b in basis_c]
                return out
        # enlarge the pool with pairwise sums
        pool = sorted(set(pool) | {tuple(a + b for a, b in zip(u, v))
                                   for u in pool for v in dual_hb})[:200]
    raise BudgetExceeded("no unimodular dual subset found")


def _dual_cone(gens, rank):
    """Dual cone {lam : lam . g >= 0 for all g} as a Cone (full-dim if pointed)."""
    # facets of the dual = generators; rays of the dual from (rank-1)-subsets
    rays = []
    pool = [tuple(g) for g in gens]
    if rank == 1:
        s = 1 if all(g[0] >= 0 for g in pool) else -1
        return Cone([(s,)], 1)
    for sub in combinations(pool, rank - 1):
        if la.rat_rank([list(v) for v in sub]) != rank - 1:
            continue
        for n0 in la.rat_nullspace([list(v) for v in sub]):
            lam = scale_to_integer(n0)
            vals = [sum(a * b for a, b in zip(lam, g)) for g in pool]
            if all(v >= 0 for v in vals):
                rays.append(lam)
            elif all(v <= 0 for v in vals):
                rays.append(tuple(-x for x in lam))
    if not rays:
        raise NotPointed("dual cone has no rays (cone not full-dimensional?)")
    return Cone(rays, rank)


def interior_lattice_basis(M: AffineMonoid, budgets=None):
    """A lattice basis of gp(M) lying strictly inside the cone of M.

    Built from a deep point plus a unimodular completion pushed into the
    interior; the determinant condition makes the spanned cone smooth, so its
    lattice points are exactly the nonnegative combinations of the basis.
    """
    M.check_positive()
    gp = M.gp_basis()
    rho = len(gp)
    Bt = la.transpose([list(b) for b in gp])
    gens_c = [tuple(int(x) for x in la.rat_solve(Bt, list(g))) for g in M.generators]
    C = Cone(gens_c, rho)
    if rho == 1:
        z = la.primitive(gens_c[0])
        return [tuple(la.mat_vec(Bt, list(z)))]
    deep = la.primitive(tuple(sum(col) for col in zip(*C.extreme_rays())))
    U = la.complete_to_basis(deep)  # columns; first column = deep
    cols = la.transpose(U)
    basis = [tuple(deep)]
    for c in cols[1:]:
        v = tuple(c)
        k = 1
        while not C.in_relative_interior(v):
            v = tuple(a + k * b for a, b in zip(v, deep))
            k *= 2
        basis.append(v)
    assert abs(la.det([list(b) for b in basis])) == 1
    return [tuple(la.mat_vec(Bt, list(b))) for b in basis]


def extremal_generators(M: AffineMonoid, budgets=None):
    """One primitive monoid element per vertex of the cross-section polytope.

    M must be positive and normal so that ray generators belong to M.
    """
    M.check_positive()
    gp = M.gp_basis()
    out = []
    for r in M.cone().extreme_rays():
        # primitive on the ray with respect to gp(M)
        g = tuple(r)
        k = 1
        while not la.in_sublattice(gp, g):
            k += 1
            g = tuple(k * x for x in r)
        out.append(g)
    return sorted(out)


# ---------------------------------------------------------------------------
# torsion monoids

class TorsionMonoid:
    """Finitely generated cancellative monoid with torsion, inside Z^r x T."""

    def __init__(self, free_rank, torsion_orders, generators):
        self.free_rank = free_rank
        self.torsion_orders = tuple(int(n) for n in torsion_orders)
        if any(n < 2 for n in self.torsion_orders):
            raise InvalidInput("torsion orders must be >= 2")
        gens = [_reduce_torsion(tuple(g), free_rank, self.torsion_orders) for g in generators]
        gens = [g for g in gens if any(g)]
        self.generators = tuple(sorted(set(gens)))
        self.ambient_rank = free_rank + len(self.torsion_orders)
        self._cache = {}

    @property
    def zero(self) -> Elem:
        return (0,) * self.ambient_rank

    def add(self, a, b):
        return _reduce_torsion(tuple(x + y for x, y in zip(a, b)),
                               self.free_rank, self.torsion_orders)

    def bar_generators(self):
        return [g[: self.free_rank] for g in self.generators]

    def contains(self, z) -> bool:
        z = _reduce_torsion(tuple(z), self.free_rank, self.torsion_orders)
        if z == self.zero:
            return True
        bar = AffineMonoid(self.bar_generators(), self.free_rank)
        memo = self._cache.setdefault("member", {})
        lam = bar.degree_functional() if bar.generators else None

        def rec(v):
            if not any(v):
                return True
            if v in memo:
                return memo[v]
            ok = False
            for g in self.generators:
                w = tuple(a - b for a, b in zip(v[: self.free_rank], g[: self.free_rank]))
                if lam is not None and sum(a * b for a, b in zip(lam, w)) < 0:
                    continue
                t = tuple((a - b) % n for a, b, n in
                          zip(v[self.free_rank:], g[self.free_rank:], self.torsion_orders))
                if rec(w + t):
                    ok = True
                    break
            memo[v] = ok
            return ok

        return rec(z)

    def key(self):
        return ("torsion", self.free_rank, self.torsion_orders, self.generators)

    def __repr__(self):
        return f"TorsionMonoid(r={self.free_rank}, orders={self.torsion_orders}, gens={self.generators})"


def bar_and_torsion(L):
    """(bar L, torsion invariants): the torsion-free quotient monoid and t(L).

    t(L) is computed as the subgroup of gp(L) with vanishing free part; its
    invariant factors come from the Smith form of the relations.
    """
    if isinstance(L, AffineMonoid):
        return L, ()
    r, orders = L.free_rank, L.torsion_orders
    bar = AffineMonoid(L.bar_generators(), r) if any(any(g[:r]) for g in L.generators) \
        else AffineMonoid([], r) if False else None
    if bar is None:
        bar = AffineMonoid([g[:r] for g in L.generators if any(g[:r])] or [], r) \
            if any(any(g[:r]) for g in L.generators) else _trivial_monoid(r)
    tors = torsion_subgroup(L, L.generators)
    return bar, tors


def _trivial_monoid(r):
    m = AffineMonoid.__new__(AffineMonoid)
    m.ambient_rank = r
    m.generators = ()
    m.free_rank = r
    m.torsion_orders = ()
    m._cache = {}
    return m


def torsion_subgroup(L: TorsionMonoid, gens):
    """Invariant factors (d1 | d2 | ...) of the torsion part of the subgroup of
    gp(L) generated by `gens` (elements of L)."""
    r, orders = L.free_rank, L.torsion_orders
    p = len(orders)
    if p == 0 or not gens:
        return ()
    # subgroup of Z^r x prod Z_{n_i} generated by gens: lift to Z^{r+p} with
    # order relations; torsion part = combinations with zero free part.
    rows = [list(g) for g in gens]
    for i, n in enumerate(orders):
        rel = [0] * (r + p)
        rel[r + i] = n
        rows.append(rel)
    # kernel of the free-part projection restricted to the row lattice
    A = [row[:r] for row in rows]
    ker = la.int_kernel(la.transpose(A)) if A and r else None
    if r == 0:
        combos = la.identity(len(rows))
        combos = [tuple(c) for c in combos]
    else:
        combos = la.int_kernel(la.transpose(A))
    tor_elems = []
    for c in combos:
        t = [0] * p
        for ci, row in zip(c, rows):
            for j in range(p):
                t[j] += ci * row[r + j]
        tor_elems.append([t[j] % orders[j] for j in range(p)])
    # invariant factors of the finite group generated by tor_elems in prod Z_n
    rows2 = tor_elems + [[orders[j] if k == j else 0 for k in range(p)] for j in range(p)]
    D, _, _ = la.smith_normal_form(rows2)
    invs = []
    for i in range(min(len(D), p)):
        d = abs(D[i][i])
        if d:
            q = orders[i]  # not meaningful; recompute below
    # order of the subgroup: prod orders / prod diag  -- compute directly instead
    # subgroup H of A = prod Z_{n_j}: invariant factors via Smith form of the
    # matrix whose rows are generators of the kernel of Z^k -> A/H... simpler:
    # H = lattice generated by tor_elems + order lattice, invariants of
    # (order lattice basis expressed in H basis).
    Hbasis = la.lattice_basis(rows2)
    if not Hbasis:
        return ()
    order_rows = [[orders[j] if k == j else 0 for k in range(p)] for j in range(p)]
    # express order lattice in terms of Hbasis: solve X * Hbasis = order_rows
    Ht = la.transpose([list(h) for h in Hbasis])
    X = []
    for row in order_rows:
        sol = la.rat_solve(Ht, row)
        X.append([int(x) for x in sol])
    D2, _, _ = la.smith_normal_form(X)
    invs = [abs(D2[i][i]) for i in range(min(len(X), len(X[0]) if X else 0)) if abs(D2[i][i]) > 1]
    return tuple(sorted(invs))


def semidirect_union(L1, L2_orders=None, L2=None):
    """L1 |x L2 = L1 x L2 minus the nonzero elements over 0 in L1.

    For a finite torsion group L2 (given by its cyclic orders) the result is a
    finitely generated TorsionMonoid.  For an affine L2 the result is not
    finitely generated in general and is returned as a MembershipMonoid.
    """
    if L2_orders is not None:
        orders = tuple(int(n) for n in L2_orders)
        if not isinstance(L1, AffineMonoid):
            raise UnsupportedInput("first factor must be affine")
        L1.check_positive()
        r = L1.ambient_rank
        gens = []
        torsion_elems = list(product(*[range(n) for n in orders]))
        for g in L1.hilbert_basis():
            for t in torsion_elems:
                gens.append(tuple(g) + tuple(t))
        return TorsionMonoid(r, orders, gens)
    raise UnsupportedInput("general second factors are represented intensionally")


# ---------------------------------------------------------------------------
# membership monoids

@dataclass(frozen=True)
class FaceRecord:
    """What lives over the relative interior of one cone face.

    mode 'all'  -> every point of the face lattice over relint(F) belongs
    mode 'none' -> nothing over relint(F) belongs (apart from 0 when F = 0)
    lattice     -> rows of the allowed sublattice (None = ambient Z^r)
    torsion     -> generators of the allowed torsion subgroup (tuples)
    """

    mode: str
    lattice: tuple | None = None
    torsion: tuple = ()


class MembershipMonoid:
    """Intensional monoid: cone + per-face records + optional base monoid."""

    def __init__(self, free_rank, torsion_orders, cone: Cone, face_records,
                 base=None, label=""):
        self.free_rank = free_rank
        self.torsion_orders = tuple(torsion_orders)
        self.ambient_rank = free_rank + len(self.torsion_orders)
        self.cone_ = cone
        self.records = dict(face_records)  # face key -> FaceRecord
        self.base = base
        self.label = label
        self._cache = {}

    @property
    def zero(self):
        return (0,) * self.ambient_rank

    def add(self, a, b):
        return _reduce_torsion(tuple(x + y for x, y in zip(a, b)),
                               self.free_rank, self.torsion_orders)

    def cone(self):
        return self.cone_

    def _record_for(self, v):
        F = self.cone_.smallest_face_containing(v)
        return self.records.get(F.key())

    def contains(self, z) -> bool:
        z = _reduce_torsion(tuple(z), self.free_rank, self.torsion_orders)
        v, t = z[: self.free_rank], z[self.free_rank:]
        if not any(v):
            return not any(t)
        if not self.cone_.contains(v):
            return False
        rec = self._record_for(v)
        if rec is None or rec.mode == "none":
            return False
        if rec.lattice is not None and not la.in_sublattice(rec.lattice, v):
            return False
        if t and not _in_torsion_subgroup(t, rec.torsion, self.torsion_orders):
            return False
        if self.base is not None and not self.base.contains(z):
            return False
        return True

    def degree_functional(self):
        if "lam" not in self._cache:
            lam = positive_functional(self.cone_.generators, self.free_rank)
            if lam is None:
                raise NotPointed("membership monoid needs a pointed cone")
            self._cache["lam"] = lam
        return self._cache["lam"]

    def deg(self, z):
        return sum(a * b for a, b in zip(self.degree_functional(), z[: self.free_rank]))

    def enumerate(self, max_deg, budgets=None):
        """All elements with free-part lambda-degree <= max_deg."""
        budgets = budgets or default_budgets()
        lam = self.degree_functional()
        r = self.free_rank
        pts = _cone_points_up_to(self.cone_, lam, max_deg, budgets)
        tor = list(product(*[range(n) for n in self.torsion_orders]))
        out = []
        for v in pts:
            for t in tor:
                z = tuple(v) + tuple(t)
                if self.contains(z):
                    out.append(z)
        return sorted(out, key=lambda z: (self.deg(z), z))

    def key(self):
        recs = tuple(sorted((k, v.mode, v.lattice, v.torsion) for k, v in self.records.items()))
        return ("membership", self.free_rank, self.torsion_orders,
                self.cone_.key(), recs, self.base.key() if self.base else None)

    def __repr__(self):
        return f"MembershipMonoid({self.label or self.cone_})"


def _in_torsion_subgroup(t, gens, orders):
    p = len(orders)
    if not any(t):
        return True
    if not gens:
        return False
    # brute force over the subgroup generated (orders are tiny)
    seen = {(0,) * p}
    frontier = [(0,) * p]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % n for a, b, n in zip(x, g, orders))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(t) in seen


def _cone_points_up_to(C: Cone, lam, max_deg, budgets):
    """Lattice points z of C with 0 <= lam . z <= max_deg (ambient lattice)."""
    if C.is_zero:
        return [(0,) * C.ambient_rank]
    r = C.ambient_rank
    # bounding box from the vertices of the truncated cone
    vmax = [Fraction(0)] * r
    vmin = [Fraction(0)] * r
    for g in C.extreme_rays():
        d = sum(a * b for a, b in zip(lam, g))
        scale = Fraction(max_deg, d)
        for i in range(r):
            c = Fraction(g[i]) * scale
            vmax[i] = max(vmax[i], c)
            vmin[i] = min(vmin[i], c)
    lo = [int(x.__ceil__()) for x in vmin]
    hi = [int(x.__floor__()) for x in vmax]
    total = 1
    for a, b in zip(lo, hi):
        total *= max(0, b - a + 1)
    if total > budgets.enumeration_cap:
        raise BudgetExceeded(f"lattice sweep of size {total}")
    out = []
    facets = C.facet_functionals()
    eqs = C.span_equations()
    for pt in product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        d = sum(a * b for a, b in zip(lam, pt))
        if d < 0 or d > max_deg:
            continue
        if any(sum(a * b for a, b in zip(eq, pt)) != 0 for eq in eqs):
            continue
        if all(sum(a * b for a, b in zip(F, pt)) >= 0 for F in facets):
            if C.dim() >= 1 and not any(pt):
                out.append(pt)
            elif C.contains(pt):
                out.append(pt)
    return sorted(out)


def closed_monoid_of_cone(C: Cone, free_rank, lattice=None, label="") -> MembershipMonoid:
    """All lattice points of C as a MembershipMonoid (every face closed)."""
    recs = {}
    for F in C.faces():
        recs[F.key()] = FaceRecord("all", lattice if lattice is None else tuple(map(tuple, lattice)))
    return MembershipMonoid(free_rank, (), C, recs, label=label)


def monoid_of_polytope(ambient, P: RationalPolytope, mode="lattice") -> MembershipMonoid:
    """M(P): nonzero elements whose radial projection lies in P, plus 0.

    mode 'lattice' uses every ambient lattice point over P (the normal-ambient
    reading); mode 'monoid' additionally intersects with the ambient monoid.
    """
    gens = [scale_to_integer(v) for v in P.vertices]
    C = Cone(gens, len(P.vertices[0]))
    base = None
    if mode == "monoid":
        base = ambient
    M = closed_monoid_of_cone(C, C.ambient_rank, label=f"M({P})")
    M.base = base
    return M


def interior_submonoid(M) -> MembershipMonoid:
    """M_* = 0 plus the part of M over the relative interior of its section.

    For rank-1 monoids this is M itself (the section is a point).
    """
    if isinstance(M, AffineMonoid):
        C = M.cone()
        base = None if is_normal_cached(M) else M
        rank = M.ambient_rank
    else:
        C = M.cone()
        base = M.base
        rank = M.free_rank
    recs = {}
    faces = C.faces()
    top = max(faces, key=lambda F: F.dim())
    for F in faces:
        if F.dim() == 0:
            recs[F.key()] = FaceRecord("all")
        elif F.key() == top.key():
            recs[F.key()] = FaceRecord("all", _face_lattice_rows(M, F))
        else:
            recs[F.key()] = FaceRecord("none")
    if C.dim() == 1:
        # rank-1 convention: the interior submonoid is the monoid itself
        for F in faces:
            recs[F.key()] = FaceRecord("all", _face_lattice_rows(M, F))
    out = MembershipMonoid(rank, getattr(M, "torsion_orders", ()), C, recs,
                           base=base, label="interior")
    return out


def _face_lattice_rows(M, F: Cone):
    if isinstance(M, AffineMonoid):
        gp = M.gp_basis()
        if len(gp) == M.ambient_rank:
            return None
        return tuple(map(tuple, gp))
    return None


def is_normal_cached(M: AffineMonoid) -> bool:
    if "normal" not in M._cache:
        M._cache["normal"] = is_normal(M)
    return M._cache["normal"]


def face_submonoid(M: AffineMonoid, F: Cone) -> AffineMonoid:
    """M(F): elements of M lying on the face F of its cone (generated by the
    generators on F)."""
    gens = [g for g in M.generators if F.contains(g)]
    return AffineMonoid(gens, M.ambient_rank) if gens else _trivial_monoid(M.ambient_rank)


def is_seminormal(M: AffineMonoid, budgets=None) -> bool:
    """Face test: the interior of every face submonoid must agree with the
    interior of its normalization (checked to the degree bound)."""
    budgets = budgets or default_budgets()
    C = M.cone()
    for F in C.faces():
        if F.is_zero:
            continue
        MF = face_submonoid(M, F)
        if not MF.generators:
            continue
        NF = normalization(MF, budgets)
        for x in NF.enumerate(budgets.degree_bound, budgets):
            if not any(x):
                continue
            if F.in_relative_interior(x) and not MF.contains(x):
                return False
    return True


def seminormalization(L, budgets=None) -> MembershipMonoid:
    """sn(L): per cone face, the interior of the normalized bar part times the
    torsion subgroup reachable over that face."""
    budgets = budgets or default_budgets()
    if isinstance(L, AffineMonoid):
        bar, orders, tor_gens_fn = L, (), None
        free_rank = L.ambient_rank
        Lgens = [(g, ()) for g in L.generators]
    else:
        bar_m, _ = bar_and_torsion(L)
        bar = bar_m
        orders = L.torsion_orders
        free_rank = L.free_rank
        Lgens = [(g[:free_rank], g[free_rank:]) for g in L.generators]
    C = Cone([v for v, _ in Lgens if any(v)], free_rank)
    recs = {}
    for F in C.faces():
        on_face = [(v, t) for v, t in Lgens if any(v) and F.contains(v)]
        if F.is_zero:
            recs[F.key()] = FaceRecord("all")
            continue
        if not on_face:
            recs[F.key()] = FaceRecord("none")
            continue
        MF = AffineMonoid([v for v, _ in on_face], free_rank)
        lattice = MF.gp_basis()
        lat = None if len(lattice) == free_rank and abs(la.det([list(r) for r in lattice])) == 1 \
            else tuple(map(tuple, lattice))
        tor = ()
        if orders:
            LF = TorsionMonoid(free_rank, orders, [v + t for v, t in on_face])
            tor = _torsion_subgroup_gens(LF)
        recs[F.key()] = FaceRecord("all", lat, tor)
    return MembershipMonoid(free_rank, orders, C, recs, label="sn")


def _torsion_subgroup_gens(LF: TorsionMonoid):
    """Generators of the torsion subgroup of gp(LF) inside the ambient torsion."""
    r, orders = LF.free_rank, LF.torsion_orders
    p = len(orders)
    rows = [list(g) for g in LF.generators]
    for i, n in enumerate(orders):
        rel = [0] * (r + p)
        rel[r + i] = n
        rows.append(rel)
    if r:
        A = [row[:r] for row in rows]
        combos = la.int_kernel(la.transpose(A))
    else:
        combos = [tuple(1 if i == j else 0 for j in range(len(rows))) for i in range(len(rows))]
    gens = set()
    for c in combos:
        t = [0] * p
        for ci, row in zip(c, rows):
            for j in range(p):
                t[j] += ci * row[r + j]
        t = tuple(t[j] % orders[j] for j in range(p))
        if any(t):
            gens.add(t)
    return tuple(sorted(gens))


def split_at_extremal(M: AffineMonoid, m, budgets=None):
    """Z m + M = Z m x M0 for an extremal generator m: returns (M0, sigma)
    with sigma an integer functional on Z^r, sigma(m) = 1, and
    M0 = { x - sigma(x) m : x in M }."""
    budgets = budgets or default_budgets()
    m = tuple(int(x) for x in m)
    gp = M.gp_basis()
    # sigma with sigma(m) = 1, preferring sigma >= 0 on M with M0 inside M
    candidates = []
    r = M.ambient_rank
    sol = la.solve_int([list(m)], [1])
    if sol is None:
        raise InvalidInput("extremal generator is not primitive in the ambient lattice")
    base_sigma = tuple(sol)
    ker = la.int_kernel([list(m)])
    # search small adjustments for a sigma nonnegative on the generators
    best = None
    rng = range(-3, 4)
    for coeffs in product(rng, repeat=len(ker)):
        sigma = tuple(base_sigma[i] + sum(c * k[i] for c, k in zip(coeffs, ker))
                      for i in range(r))
        vals = [sum(a * b for a, b in zip(sigma, g)) for g in M.generators]
        if all(v >= 0 for v in vals):
            inside = all(M.contains(tuple(x - v * y for x, y in zip(g, m)))
                         for g, v in zip(M.generators, vals))
            score = (0 if inside else 1, sum(vals))
            if best is None or score < best[0]:
                best = (score, sigma)
    sigma = best[1] if best else base_sigma
    gens0 = []
    for g in M.generators:
        v = sum(a * b for a, b in zip(sigma, g))
        gens0.append(tuple(x - v * y for x, y in zip(g, m)))
    M0 = AffineMonoid([g for g in gens0 if any(g)] or [], M.ambient_rank) \
        if any(any(g) for g in gens0) else _trivial_monoid(M.ambient_rank)
    return M0, sigma


def complexity(M: AffineMonoid, budgets=None) -> int:
    """Smallest k with M isomorphic to Z_+^{r-k} x M0 (exhaustive over subsets
    of the Hilbert basis, certified by explicit splitting functionals)."""
    budgets = budgets or default_budgets()
    M.check_positive()
    hb = list(M.hilbert_basis())
    if len(hb) > budgets.complexity_hilb_cap:
        raise BudgetExceeded(f"|Hilb| = {len(hb)} exceeds the complexity budget")
    r = M.rank()
    best_j = 0
    for j in range(r, 0, -1):
        found = False
        for S in combinations(hb, j):
            sigmas = _split_functionals(M, S, budgets)
            if sigmas is not None:
                found = True
                break
        if found:
            best_j = j
            break
    return r - best_j


def _split_functionals(M: AffineMonoid, S, budgets):
    """Integer functionals sigma_i with sigma_i(S_j) = delta_ij, nonnegative on
    the Hilbert basis, and g - sum sigma_i(g) S_i in M for all generators g."""
    r = M.ambient_rank
    hb = M.hilbert_basis()
    out = []
    for i, h in enumerate(S):
        A = [list(s) for s in S]
        b = [1 if k == i else 0 for k in range(len(S))]
        sol = la.solve_int(A, b)
        if sol is None:
            return None
        ker = la.int_kernel([list(s) for s in S])
        found = None
        rng = range(-2, 3)
        for coeffs in product(rng, repeat=len(ker)):
            sigma = tuple(sol[t] + sum(c * kv[t] for c, kv in zip(coeffs, ker))
                          for t in range(r))
            if all(sum(a * b for a, b in zip(sigma, g)) >= 0 for g in hb):
                found = sigma
                break
        if found is None:
            return None
        out.append(found)
    # the residue of every generator must stay in M
    for g in hb:
        res = list(g)
        for sigma, h in zip(out, S):
            v = sum(a * b for a, b in zip(sigma, g))
            res = [x - v * y for x, y in zip(res, h)]
        if not M.contains(tuple(res)):
            return None
    return out
