"""Exact polyhedral geometry: pointed rational cones, cross-section polytopes,
pyramids, tangency, and face lattices.

Conventions
-----------
* A cone is pointed, rational, and finitely generated in Z^r; it may be
  lower-dimensional.  The zero cone is a first-class value.
* A cross-section hyperplane is H = {x : lam . x = 1} for a primitive
  integer covector lam that is positive on the cone's nonzero points.
* Polytopes are given by irredundant rational vertex lists.
* By convention the relative interior of a point is the point itself.

Everything is exact rational arithmetic; no floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd

from . import intlinalg as la
from .errors import NotAVertex, NotPointed, NotPositive, ZeroCone

Vec = tuple  # tuple of ints
QVec = tuple  # tuple of Fractions


def qvec(v) -> QVec:
    return tuple(Fraction(x) for x in v)


def ivec(v) -> Vec:
    out = []
    for x in v:
        f = Fraction(x)
        if f.denominator != 1:
            raise ValueError(f"not integral: {v}")
        out.append(f.numerator)
    return tuple(out)


def scale_to_integer(v) -> Vec:
    """Smallest positive multiple of a rational vector that is integral and primitive."""
    v = qvec(v)
    mult = 1
    for x in v:
        mult = mult * x.denominator // gcd(mult, x.denominator)
    w = tuple(int(x * mult) for x in v)
    return la.primitive(w)


# ---------------------------------------------------------------------------
# exact linear-inequality feasibility (Fourier-Motzkin)

def fm_feasible(constraints, nvars):
    """One rational solution of {c . x >= rhs} constraints, or None.

    `constraints` is a list of (coeff tuple, rhs).  Small systems only:
    Fourier-Motzkin doubles constraints per eliminated variable.
    """
    cons = [(qvec(c), Fraction(r)) for c, r in constraints]
    stack = []
    for var in range(nvars - 1, -1, -1):
        pos, neg, rest = [], [], []
        for c, r in cons:
            if c[var] > 0:
                pos.append((c, r))
            elif c[var] < 0:
                neg.append((c, r))
            else:
                rest.append((c, r))
        stack.append((var, pos, neg))
        new = list(rest)
        for cp, rp in pos:
            for cn, rn in neg:
                a, b = cp[var], -cn[var]
                comb = tuple(b * cp[j] + a * cn[j] for j in range(nvars))
                new.append((comb, b * rp + a * rn))
        # drop duplicates to keep growth in check
        seen = {}
        cons = []
        for c, r in new:
            key = c
            if key in seen:
                if r > seen[key][1]:
                    seen[key] = (c, r)
            else:
                seen[key] = (c, r)
        cons = list(seen.values())
    for c, r in cons:
        if r > 0:
            return None
    # back-substitute
    x = [Fraction(0)] * nvars
    for var, pos, neg in reversed(stack):
        lo, hi = None, None
        for c, r in pos:
            bound = (r - sum(c[j] * x[j] for j in range(nvars) if j != var)) / c[var]
            lo = bound if lo is None or bound > lo else lo
        for c, r in neg:
            bound = (r - sum(c[j] * x[j] for j in range(nvars) if j != var)) / c[var]
            hi = bound if hi is None or bound < hi else hi
        if lo is None and hi is None:
            x[var] = Fraction(0)
        elif lo is None:
            x[var] = hi - 1
        elif hi is None:
            x[var] = lo + 1
        else:
            if lo > hi:
                return None
            x[var] = (lo + hi) / 2
    return tuple(x)


def in_cone_hull(point, generators):
    """Is `point` a nonnegative rational combination of `generators`?"""
    point = qvec(point)
    gens = [qvec(g) for g in generators]
    if all(x == 0 for x in point):
        return True
    if not gens:
        return False
    # solve sum l_i g_i = point, l_i >= 0 via FM on the l-space
    n = len(gens)
    cons = []
    r = len(point)
    for j in range(r):
        row = tuple(g[j] for g in gens)
        cons.append((row, point[j]))
        cons.append((tuple(-x for x in row), -point[j]))
    for i in range(n):
        e = tuple(Fraction(1 if k == i else 0) for k in range(n))
        cons.append((e, Fraction(0)))
    return fm_feasible(cons, n) is not None


def in_convex_hull(point, points):
    """Is `point` in the convex hull of `points`?"""
    point = qvec(point)
    pts = [qvec(p) for p in points]
    if not pts:
        return False
    n = len(pts)
    cons = []
    r = len(point)
    for j in range(r):
        row = tuple(p[j] for p in pts)
        cons.append((row, point[j]))
        cons.append((tuple(-x for x in row), -point[j]))
    ones = tuple(Fraction(1) for _ in range(n))
    cons.append((ones, Fraction(1)))
    cons.append((tuple(-x for x in ones), Fraction(-1)))
    for i in range(n):
        e = tuple(Fraction(1 if k == i else 0) for k in range(n))
        cons.append((e, Fraction(0)))
    return fm_feasible(cons, n) is not None


# ---------------------------------------------------------------------------
# affine hulls

def affine_hull(points):
    """(base point, direction basis) of the affine hull of rational points."""
    pts = [qvec(p) for p in points]
    if not pts:
        return None, []
    base = pts[0]
    dirs = [[x - b for x, b in zip(p, base)] for p in pts[1:]]
    if not dirs:
        return base, []
    R, pivots = la.rat_rref(dirs)
    return base, [tuple(R[i]) for i in range(len(pivots))]


def in_affine_hull(point, points):
    base, dirs = affine_hull(points)
    if base is None:
        return False
    diff = [Fraction(x) - b for x, b in zip(point, base)]
    if not dirs:
        return all(d == 0 for d in diff)
    A = la.transpose([list(d) for d in dirs])
    return la.rat_solve(A, diff) is not None


# ---------------------------------------------------------------------------
# hyperplanes

@dataclass(frozen=True)
class AffineHyperplane:
    """H = {x : functional . x = 1}; the functional is primitive integral."""

    functional: Vec

    def __post_init__(self):
        f = la.primitive(ivec(self.functional))
        object.__setattr__(self, "functional", f)

    def eval(self, x) -> Fraction:
        return sum(Fraction(a) * Fraction(b) for a, b in zip(self.functional, x))

    def to_json(self):
        return list(self.functional)


def positive_functional(generators, rank):
    """A primitive integer covector with value >= 1 on every generator, or None."""
    gens = [ivec(g) for g in generators if any(g)]
    if not gens:
        return None
    cons = [(g, Fraction(1)) for g in gens]
    sol = fm_feasible(cons, rank)
    if sol is None:
        return None
    lam = scale_to_integer(sol)
    if all(sum(a * b for a, b in zip(lam, g)) > 0 for g in gens):
        return lam
    return None


# ---------------------------------------------------------------------------
# cones

class Cone:
    """Rational finitely generated cone in Z^r (pointedness checked on demand)."""

    def __init__(self, generators, ambient_rank=None):
        gens = [ivec(g) for g in generators]
        if ambient_rank is None:
            if not gens:
                raise ZeroCone("zero cone needs an explicit ambient rank")
            ambient_rank = len(gens[0])
        self.ambient_rank = ambient_rank
        seen = set()
        prim = []
        for g in gens:
            if len(g) != ambient_rank:
                raise ValueError("generator rank mismatch")
            if not any(g):
                continue
            p = la.primitive(g)
            if p not in seen:
                seen.add(p)
                prim.append(p)
        self.generators = tuple(prim)
        self._cache = {}

    # -- basic structure

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def dim(self) -> int:
        if self.is_zero:
            return 0
        return la.rat_rank([list(g) for g in self.generators])

    def span_equations(self):
        """Integer covectors cutting out the rational span of the cone."""
        if "span_eq" not in self._cache:
            if self.is_zero:
                eqs = [tuple(1 if i == j else 0 for j in range(self.ambient_rank))
                       for i in range(self.ambient_rank)]
            else:
                eqs = [la.primitive(ivec(scale_to_integer(v)))
                       for v in la.rat_nullspace([list(g) for g in self.generators])]
            self._cache["span_eq"] = eqs
        return self._cache["span_eq"]

    def _coords(self):
        """Rational coordinates on the span: returns (proj matrix rows, lifted gens)."""
        if "coords" not in self._cache:
            d = self.dim()
            # choose d coordinates forming a basis of the row space
            R, pivots = la.rat_rref([list(g) for g in self.generators])
            basis = [qvec(R[i]) for i in range(d)]
            # coordinates of x: solve x = sum c_i basis_i  (x must be in span)
            A = la.transpose([list(b) for b in basis])
            self._cache["coords"] = (basis, A)
        return self._cache["coords"]

    def coords_of(self, x):
        """Coordinates of span point x in the internal span basis, or None."""
        if self.is_zero:
            return () if not any(Fraction(v) for v in x) else None
        basis, A = self._coords()
        sol = la.rat_solve(A, [Fraction(v) for v in x])
        return tuple(sol) if sol is not None else None

    def contains(self, x) -> bool:
        if self.is_zero:
            return all(Fraction(v) == 0 for v in x)
        for eq in self.span_equations():
            if sum(Fraction(a) * Fraction(b) for a, b in zip(eq, x)) != 0:
                return False
        return all(self._facet_eval(F, x) >= 0 for F in self.facet_functionals())

    def is_pointed(self) -> bool:
        if self.is_zero:
            return True
        return positive_functional(self.generators, self.ambient_rank) is not None

    def check_pointed(self):
        if not self.is_pointed():
            raise NotPointed(f"cone on {self.generators} contains a line")

    # -- facets (ambient integer covectors, valid together with span equations)

    def facet_functionals(self):
        if "facets" in self._cache:
            return self._cache["facets"]
        d = self.dim()
        facets = []
        if d == 0:
            pass
        elif d == 1:
            pass  # single ray: no facets besides the apex; handled by span eqs
        else:
            rays = self.extreme_rays()
            seen = set()
            for sub in combinations(rays, d - 1):
                if la.rat_rank([list(v) for v in sub]) != d - 1:
                    continue
                # normal inside the span, vanishing on sub
                eqs = [list(v) for v in sub] + [
                    [Fraction(x) for x in e] for e in self.span_equations()]
                for n0 in la.rat_nullspace(eqs):
                    lam = scale_to_integer(n0)
                    vals = [sum(a * b for a, b in zip(lam, g)) for g in rays]
                    if all(v >= 0 for v in vals) and any(v > 0 for v in vals):
                        pass
                    elif all(v <= 0 for v in vals) and any(v < 0 for v in vals):
                        lam = tuple(-a for a in lam)
                        vals = [-v for v in vals]
                    else:
                        continue
                    if lam not in seen:
                        seen.add(lam)
                        facets.append(lam)
        self._cache["facets"] = facets
        return facets

    @staticmethod
    def _facet_eval(F, x):
        return sum(Fraction(a) * Fraction(b) for a, b in zip(F, x))

    def in_relative_interior(self, x) -> bool:
        """x in relint(C); for the zero cone that means x = 0, for a ray x on it nonzero."""
        if self.is_zero:
            return all(Fraction(v) == 0 for v in x)
        if not self.contains(x):
            return False
        if self.dim() == 1:
            return any(Fraction(v) != 0 for v in x)
        return all(self._facet_eval(F, x) > 0 for F in self.facet_functionals())

    def extreme_rays(self):
        """Primitive generators of the extreme rays."""
        if "rays" in self._cache:
            return self._cache["rays"]
        gens = list(self.generators)
        rays = []
        for i, g in enumerate(gens):
            others = gens[:i] + gens[i + 1:]
            if not in_cone_hull(g, others):
                rays.append(g)
        if not rays and gens:
            rays = [gens[0]]  # all generators on one ray
        self._cache["rays"] = rays
        return rays

    # -- faces

    def faces(self):
        """All faces as Cone values, including the zero face and the cone itself."""
        if "faces" in self._cache:
            return self._cache["faces"]
        out = {}
        rays = self.extreme_rays()
        facets = self.facet_functionals()
        if self.is_zero:
            out[frozenset()] = Cone([], self.ambient_rank)
        else:
            subsets = [()]
            for k in range(1, len(facets) + 1):
                subsets.extend(combinations(range(len(facets)), k))
            for sub in subsets:
                sel = [g for g in rays
                       if all(self._facet_eval(facets[i], g) == 0 for i in sub)]
                key = frozenset(sel)
                if key not in out:
                    out[key] = Cone(sel, self.ambient_rank) if sel else Cone([], self.ambient_rank)
            out.setdefault(frozenset(), Cone([], self.ambient_rank))
        faces = sorted(out.values(), key=lambda c: (c.dim(), sorted(c.generators)))
        self._cache["faces"] = faces
        return faces

    def smallest_face_containing(self, x):
        """The smallest face whose relative interior meets the ray of x (x in C)."""
        if all(Fraction(v) == 0 for v in x):
            return Cone([], self.ambient_rank)
        facets = self.facet_functionals()
        active = [F for F in facets if self._facet_eval(F, x) == 0]
        sel = [g for g in self.extreme_rays()
               if all(self._facet_eval(F, g) == 0 for F in active)]
        return Cone(sel, self.ambient_rank)

    def __repr__(self):
        return f"Cone{self.generators}"

    def key(self):
        return (self.ambient_rank, tuple(sorted(self.generators)))


# ---------------------------------------------------------------------------
# polytopes

class RationalPolytope:
    """Convex polytope given by an irredundant rational vertex list."""

    def __init__(self, vertices, hyperplane: AffineHyperplane | None = None, *, trusted=False):
        pts = [qvec(p) for p in vertices]
        if not pts:
            raise ValueError("empty polytope")
        if trusted:
            verts = pts
        else:
            verts = _irredundant(pts)
        self.vertices = tuple(sorted(set(verts)))
        self.hyperplane = hyperplane
        self._cache = {}

    def dim(self) -> int:
        _, dirs = affine_hull(self.vertices)
        return len(dirs)

    def is_point(self) -> bool:
        return len(self.vertices) == 1

    def contains(self, x) -> bool:
        return in_convex_hull(x, self.vertices)

    def facets(self):
        """List of (covector, offset, frozenset of vertex indices) with
        covector . v >= offset on P and equality exactly on the facet."""
        if "facets" in self._cache:
            return self._cache["facets"]
        d = self.dim()
        verts = self.vertices
        out = []
        seen = set()
        if d == 0:
            self._cache["facets"] = []
            return []
        base, dirs = affine_hull(verts)
        # work with candidate hyperplanes spanned by d affinely independent vertices
        for sub in combinations(range(len(verts)), d):
            pts = [verts[i] for i in sub]
            _, sub_dirs = affine_hull(pts)
            if len(sub_dirs) != d - 1:
                continue
            # normal: vanishes on sub_dirs, lies in the direction space of P
            eqs = [list(v) for v in sub_dirs]
            cands = []
            for n0 in la.rat_nullspace(eqs) if eqs else [list(v) for v in dirs]:
                # keep only normals with nonzero pairing against P's directions
                if any(sum(Fraction(a) * Fraction(b) for a, b in zip(n0, dvec)) != 0
                       for dvec in dirs):
                    cands.append(n0)
            for n0 in cands:
                lam = scale_to_integer(n0)
                vals = [sum(Fraction(a) * Fraction(b) for a, b in zip(lam, v)) for v in verts]
                v0 = sum(Fraction(a) * Fraction(b) for a, b in zip(lam, pts[0]))
                if all(v >= v0 for v in vals):
                    pass
                elif all(v <= v0 for v in vals):
                    lam = tuple(-a for a in lam)
                    vals = [-v for v in vals]
                    v0 = -v0
                else:
                    continue
                idx = frozenset(i for i, v in enumerate(vals) if v == v0)
                key = (lam, v0)
                if key not in seen and len(idx) >= d:
                    seen.add(key)
                    out.append((lam, v0, idx))
        self._cache["facets"] = out
        return out

    def faces(self):
        """All nonempty faces as frozensets of vertex indices (including P itself)."""
        if "faces" in self._cache:
            return self._cache["faces"]
        facets = self.facets()
        all_idx = frozenset(range(len(self.vertices)))
        found = {all_idx}
        frontier = {all_idx}
        while frontier:
            nxt = set()
            for face in frontier:
                for lam, off, idx in facets:
                    inter = face & idx
                    if inter and inter != face and inter not in found:
                        # a face of a face is a face; intersecting with facet sets
                        found.add(inter)
                        nxt.add(inter)
            frontier = nxt
        # keep only genuine faces: vertex sets closed under the facet description
        faces = set()
        for cand in found:
            pts = [self.vertices[i] for i in cand]
            close = frozenset(i for i, v in enumerate(self.vertices) if in_affine_hull(v, pts) and in_convex_hull(v, pts))
            faces.add(close)
        self._cache["faces"] = sorted(faces, key=lambda s: (len(s), sorted(s)))
        return self._cache["faces"]

    def vertex_index(self, v):
        v = qvec(v)
        for i, w in enumerate(self.vertices):
            if w == v:
                return i
        return None

    def in_relative_interior(self, x) -> bool:
        """Relative interior membership; int(P) = P when P is a point."""
        if self.is_point():
            return qvec(x) == self.vertices[0]
        if not in_affine_hull(x, self.vertices):
            return False
        for lam, off, _ in self.facets():
            if sum(Fraction(a) * Fraction(b) for a, b in zip(lam, x)) <= off:
                return False
        return True

    def to_json(self):
        return [[_fr_str(c) for c in v] for v in self.vertices]

    def __repr__(self):
        return f"Polytope{self.vertices}"


def _fr_str(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _irredundant(pts):
    verts = []
    uniq = sorted(set(pts))
    for i, p in enumerate(uniq):
        others = uniq[:i] + uniq[i + 1:]
        if not in_convex_hull(p, others):
            verts.append(p)
    return verts or uniq[:1]


def convex_hull(points, hyperplane=None) -> RationalPolytope:
    return RationalPolytope(points, hyperplane)


# ---------------------------------------------------------------------------
# named operations

def cross_section(C: Cone):
    """(H, P): a hyperplane H with C = R_+(C cap H) and the section polytope P.

    The vertices of P are the Phi-images of the extreme rays.
    """
    if C.is_zero:
        raise ZeroCone("the zero cone has no cross-section")
    C.check_pointed()
    lam = positive_functional(C.generators, C.ambient_rank)
    if lam is None:
        raise NotPointed("no positive functional exists")
    H = AffineHyperplane(lam)
    verts = []
    for g in C.extreme_rays():
        v = H.eval(g)
        verts.append(tuple(Fraction(x) / v for x in g))
    P = RationalPolytope(verts, H, trusted=True)
    return H, P


def phi(m, H: AffineHyperplane):
    """Radial projection of m onto H: m / lam(m).  Requires lam(m) > 0."""
    v = H.eval(m)
    if v <= 0:
        raise NotPositive(f"functional is {v} on {m}")
    return tuple(Fraction(x) / v for x in m)


def is_pyramid(P: RationalPolytope, v) -> bool:
    """Is P a pyramid with apex v?  True iff exactly one facet misses v and
    v is off the affine hull of that base facet."""
    v = qvec(v)
    iv = P.vertex_index(v)
    if iv is None:
        raise NotAVertex(f"{v} is not a vertex of {P}")
    if P.is_point():
        return False
    facets = P.facets()
    missing = [idx for lam, off, idx in facets if iv not in idx]
    if len(missing) != 1:
        return False
    base = [P.vertices[i] for i in missing[0]]
    return not in_affine_hull(v, base)


def corner_cone(P: RationalPolytope, v):
    """Cone spanned by P - v (integer-scaled generators)."""
    v = qvec(v)
    gens = []
    for w in P.vertices:
        d = tuple(a - b for a, b in zip(w, v))
        if any(d):
            gens.append(scale_to_integer(d))
    return Cone(gens, len(v)) if gens else Cone([], len(v))


def is_tangent(P: RationalPolytope, Q: RationalPolytope, v) -> bool:
    """Do P and Q span the same corner cone at the shared vertex v (and agree
    in dimension)?"""
    v = qvec(v)
    if P.vertex_index(v) is None or Q.vertex_index(v) is None:
        raise NotAVertex(f"{v} must be a vertex of both polytopes")
    if P.dim() != Q.dim():
        return False
    cp, cq = corner_cone(P, v), corner_cone(Q, v)
    return (all(cq.contains(g) for g in cp.generators)
            and all(cp.contains(g) for g in cq.generators))


def in_relative_interior(x, P: RationalPolytope) -> bool:
    return P.in_relative_interior(x)
