"""Exact monoid-ring arithmetic over a field.

A ring element is a finitely supported map from monoid elements (exponent
tuples) to field scalars.  Multiplication is convolution through the
context's `elem_add`, which may return None in quotient contexts (the
product monomial is killed by the monomial ideal).  All arithmetic is exact;
elements are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInput, ZeroElement
from .fieldarith import Field, QQ


class RingContext:
    """Common interface: a field plus a monomial model."""

    field: Field
    nvars: int

    def elem_add(self, a, b):
        raise NotImplementedError

    def elem_ok(self, a) -> bool:
        raise NotImplementedError

    @property
    def zero_elem(self):
        return (0,) * self.nvars

    def key(self):
        raise NotImplementedError

    # -- element constructors

    def zero(self) -> "RElt":
        return RElt(self, {})

    def one(self) -> "RElt":
        return RElt(self, {self.zero_elem: self.field.one})

    def monomial(self, expo, coeff=None) -> "RElt":
        expo = tuple(int(x) for x in expo)
        c = self.field.one if coeff is None else coeff
        if self.field.is_zero(c):
            return self.zero()
        return RElt(self, {expo: c})

    def const(self, c) -> "RElt":
        c = self.field.of(c) if isinstance(c, (int, Fraction)) else c
        if self.field.is_zero(c):
            return self.zero()
        return RElt(self, {self.zero_elem: c})

    def from_terms(self, terms) -> "RElt":
        out = {}
        F = self.field
        for expo, c in terms:
            expo = tuple(int(x) for x in expo)
            acc = out.get(expo, F.zero)
            acc = F.add(acc, c)
            if F.is_zero(acc):
                out.pop(expo, None)
            else:
                out[expo] = acc
        return RElt(self, out)


class PolyContext(RingContext):
    """Free monoid Z_+^n: the polynomial ring field[t_1..t_n]."""

    def __init__(self, field: Field, nvars: int, names=None):
        self.field = field
        self.nvars = nvars
        self.names = tuple(names) if names else tuple(f"t{i+1}" for i in range(nvars))

    def elem_add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def elem_ok(self, a):
        return len(a) == self.nvars and all(x >= 0 for x in a)

    def var(self, i) -> "RElt":
        e = [0] * self.nvars
        e[i] = 1
        return self.monomial(tuple(e))

    def key(self):
        return ("poly", self.field.name, self.nvars)

    def __repr__(self):
        return f"{self.field.name}[{','.join(self.names)}]"


class MonoidRingContext(RingContext):
    """field[M] for a monoid object exposing add/contains/zero/ambient_rank."""

    def __init__(self, field: Field, monoid):
        self.field = field
        self.monoid = monoid
        self.nvars = monoid.ambient_rank

    def elem_add(self, a, b):
        return self.monoid.add(a, b)

    def elem_ok(self, a):
        return self.monoid.contains(a)

    def key(self):
        return ("monoid", self.field.name, self.monoid.key())

    def __repr__(self):
        return f"{self.field.name}[{self.monoid!r}]"


class QuotientMonomialContext(RingContext):
    """field[M] / (monomial ideal): kept monomials satisfy `alive`.

    `alive` must be the complement of a monoid ideal so that truncated
    convolution stays associative.
    """

    def __init__(self, field: Field, monoid, alive, label=""):
        self.field = field
        self.monoid = monoid
        self.alive = alive
        self.nvars = monoid.ambient_rank
        self.label = label

    def elem_add(self, a, b):
        s = self.monoid.add(a, b)
        return s if self.alive(s) else None

    def elem_ok(self, a):
        return self.monoid.contains(a) and self.alive(a)

    def key(self):
        return ("quotient", self.field.name, self.monoid.key(), self.label)

    def __repr__(self):
        return f"{self.field.name}[{self.monoid!r}]/({self.label})"


class RElt:
    """Immutable finitely supported monoid-element -> scalar map."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: RingContext, terms: dict):
        self.ctx = ctx
        self.terms = terms

    # -- predicates

    def is_zero(self) -> bool:
        return not self.terms

    def support_ok(self) -> bool:
        return all(self.ctx.elem_ok(m) for m in self.terms)

    def constant_term(self):
        return self.terms.get(self.ctx.zero_elem, self.ctx.field.zero)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ctx.zero_elem in self.terms)

    # -- arithmetic

    def __add__(self, other):
        F = self.ctx.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            acc = F.add(out.get(m, F.zero), c)
            if F.is_zero(acc):
                out.pop(m, None)
            else:
                out[m] = acc
        return RElt(self.ctx, out)

    def __neg__(self):
        F = self.ctx.field
        return RElt(self.ctx, {m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, RElt):
            return self.scale(self.ctx.field.of(other))
        F = self.ctx.field
        out = {}
        add = self.ctx.elem_add
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = add(m1, m2)
                if m is None:
                    continue
                acc = F.add(out.get(m, F.zero), F.mul(c1, c2))
                if F.is_zero(acc):
                    out.pop(m, None)
                else:
                    out[m] = acc
        return RElt(self.ctx, out)

    __rmul__ = __mul__

    def scale(self, c):
        F = self.ctx.field
        if F.is_zero(c):
            return self.ctx.zero()
        return RElt(self.ctx, {m: F.mul(c, x) for m, x in self.terms.items()})

    def __pow__(self, n):
        out = self.ctx.one()
        base = self
        n = int(n)
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, RElt) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- views

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: t[0])

    def to_json(self):
        F = self.ctx.field
        return [[F.to_str(c), list(m)] for m, c in self.sorted_terms()]

    def map_support(self, fn, new_ctx):
        """Push the element through a monomial map m -> fn(m)."""
        out = {}
        F = new_ctx.field
        for m, c in self.terms.items():
            mm = fn(m)
            acc = F.add(out.get(mm, F.zero), c)
            if F.is_zero(acc):
                out.pop(mm, None)
            else:
                out[mm] = acc
        return RElt(new_ctx, out)

    def __repr__(self):
        if not self.terms:
            return "0"
        F = self.ctx.field
        bits = []
        for m, c in self.sorted_terms():
            if any(m):
                mono = "*".join(f"x{i}^{e}" for i, e in enumerate(m) if e)
                bits.append(f"{F.to_str(c)}*{mono}")
            else:
                bits.append(F.to_str(c))
        return " + ".join(bits)


def elt_from_json(ctx: RingContext, data) -> RElt:
    F = ctx.field
    return ctx.from_terms((tuple(m), F.from_str(cs)) for cs, m in data)


# ---------------------------------------------------------------------------
# leading terms, monic predicates, substitutions

def lex_key(m):
    return tuple(m)


def lex_leading_term(f: RElt):
    """Leading (coeff, monomial) in the lexicographic order t1 > t2 > ... ."""
    if f.is_zero():
        raise ZeroElement("zero element has no leading term")
    m = max(f.terms, key=lex_key)
    return f.terms[m], m


def is_quasi_monic(f: RElt) -> bool:
    """Over a field every nonzero leading coefficient is a unit, so this is
    simply f != 0 (the simplification is itself exercised by the tests)."""
    return not f.is_zero()


def is_monic_wrt(f: RElt, deg_functional, vertex) -> bool:
    """Is the unique deg-maximal term of f a unit multiple of a power of the
    decomposition vertex, with strictly larger deg than every other term?

    A tie in the maximal degree means f is not monic: returns False.
    """
    if f.is_zero():
        return False
    r = len(vertex)

    def deg(m):
        return sum(a * b for a, b in zip(deg_functional, m[:r]))

    degs = [(deg(m), m) for m in f.terms]
    top = max(d for d, _ in degs)
    tops = [m for d, m in degs if d == top]
    if len(tops) != 1:
        return False
    m = tops[0]
    if not any(vertex):
        return False
    # m must be c * vertex for a positive integer c
    ratios = set()
    for a, b in zip(m[:r], vertex):
        if b == 0:
            if a != 0:
                return False
        else:
            if a % b != 0:
                return False
            ratios.add(a // b)
    if len(ratios) != 1 or next(iter(ratios)) < 1:
        return False
    if any(m[r:]):
        return False
    return top > max((d for d, mm in degs if mm != m), default=top - 1)


@dataclass(frozen=True)
class TauEndo:
    """The endomorphism t_j -> t_j + t1^{c_j} of a free-monoid context."""

    weights: tuple

    def __post_init__(self):
        if any(c < 1 for c in self.weights):
            raise InvalidInput("tau weights must be >= 1")

    def apply(self, f: RElt) -> RElt:
        ctx = f.ctx
        if not isinstance(ctx, PolyContext):
            raise InvalidInput("tau acts on free-monoid contexts only")
        r = ctx.nvars
        if len(self.weights) != r:
            raise InvalidInput("weight length mismatch")
        images = []
        for j in range(r):
            e = [0] * r
            e[j] = 1
            tj = ctx.monomial(tuple(e))
            e1 = [0] * r
            e1[0] = self.weights[j]
            images.append(tj + ctx.monomial(tuple(e1)))
        out = ctx.zero()
        pow_cache = [dict() for _ in range(r)]

        def img_pow(j, n):
            if n == 0:
                return ctx.one()
            if n not in pow_cache[j]:
                pow_cache[j][n] = img_pow(j, n - 1) * images[j]
            return pow_cache[j][n]

        for m, c in f.terms.items():
            term = ctx.const(c)
            for j, e in enumerate(m):
                if e:
                    term = term * img_pow(j, e)
            out = out + term
        return out


def apply_endo(tau: TauEndo, f: RElt) -> RElt:
    return tau.apply(f)


def substitute_zero(f: RElt, var_index: int) -> RElt:
    """Image after substituting 0 for the given variable."""
    keep = {m: c for m, c in f.terms.items() if m[var_index] == 0}
    return RElt(f.ctx, dict(keep))


def augmentation(f: RElt):
    """Scalar image under the grading augmentation (kill nonzero monomials)."""
    return f.constant_term()


# ---------------------------------------------------------------------------
# localized fractions

class FracContext:
    """Localization of a domain monoid-ring context at a multiplicative set.

    `den_ok` validates denominators (e.g. nonzero constant term with support
    in a prescribed submonoid).  Only what the descent needs: +, *, exact
    equality by cross-multiplication, and divisibility bookkeeping.
    """

    def __init__(self, base: RingContext, den_ok=None, label="loc"):
        self.base = base
        self.field = base.field
        self.den_ok = den_ok or (lambda d: not d.is_zero())
        self.label = label

    def zero(self):
        return LocalFraction(self.base.zero(), self.base.one(), self)

    def one(self):
        return LocalFraction(self.base.one(), self.base.one(), self)

    def of(self, num: RElt, den: RElt | None = None):
        den = den if den is not None else self.base.one()
        return LocalFraction(num, den, self)

    def key(self):
        return ("frac", self.base.key(), self.label)

    def __repr__(self):
        return f"({self.base!r})_{self.label}"


class LocalFraction:
    """num/den with den in the context's multiplicative set."""

    __slots__ = ("num", "den", "ctx")

    def __init__(self, num: RElt, den: RElt, ctx: FracContext):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den
        self.ctx = ctx

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, other):
        other = self._coerce(other)
        if self.den == other.den:
            return LocalFraction(self.num + other.num, self.den, self.ctx)
        return LocalFraction(self.num * other.den + other.num * self.den,
                             self.den * other.den, self.ctx)

    def __neg__(self):
        return LocalFraction(-self.num, self.den, self.ctx)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        return LocalFraction(self.num * other.num, self.den * other.den, self.ctx)

    def _coerce(self, other):
        if isinstance(other, LocalFraction):
            return other
        if isinstance(other, RElt):
            return LocalFraction(other, self.ctx.base.one(), self.ctx)
        raise TypeError(f"cannot coerce {other!r}")

    def __eq__(self, other):
        if isinstance(other, RElt):
            other = self._coerce(other)
        return (self.num * other.den) == (other.num * self.den)

    def is_integral(self):
        """Does the fraction visibly reduce to its numerator (den constant)?"""
        return self.den.is_constant()

    def as_integral(self) -> RElt:
        if not self.den.is_constant():
            raise InvalidInput("fraction has a nonconstant denominator")
        c = self.den.constant_term()
        return self.num.scale(self.ctx.field.inv(c))

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    def __repr__(self):
        return f"({self.num!r})/({self.den!r})"


# ---------------------------------------------------------------------------
# gradings

def grade_of(ctx, m, functional=None):
    if functional is None and hasattr(ctx, "monoid"):
        functional = ctx.monoid.degree_functional()
    if functional is None:
        return sum(m)
    return sum(a * b for a, b in zip(functional, m[: len(functional)]))


def is_homogeneous(f: RElt, functional=None) -> bool:
    if f.is_zero():
        return True
    degs = {grade_of(f.ctx, m, functional) for m in f.terms}
    return len(degs) == 1
