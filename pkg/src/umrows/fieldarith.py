"""Exact scalar fields: Q, prime fields F_p, and rational number fields.

All coefficient arithmetic in the package routes through a `Field` object so
that the row-reduction machinery is generic over the scalar field.  Elements
are plain immutable Python values:

* `QQ`      -- `fractions.Fraction`
* `GF(p)`   -- `int` in `[0, p)`
* `NumberField(minpoly)` -- tuple of `Fraction` coefficients modulo a monic
  irreducible polynomial over Q (used to split cyclotomic group algebras)

No floating point anywhere; equality is exact.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidInput


class Field:
    """Abstract exact field."""

    name = "field"

    def of(self, n):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        return self.is_zero(self.sub(a, b))

    def to_str(self, a) -> str:
        raise NotImplementedError

    def from_str(self, s: str):
        raise NotImplementedError

    @property
    def zero(self):
        return self.of(0)

    @property
    def one(self):
        return self.of(1)

    def characteristic(self) -> int:
        return 0

    def __repr__(self):
        return self.name


class _Rationals(Field):
    name = "Q"

    def of(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    def is_zero(self, a):
        return a == 0

    def to_str(self, a):
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def from_str(self, s):
        return Fraction(s)


QQ = _Rationals()


class GF(Field):
    """Prime field F_p, p an odd-or-2 prime below 2**31."""

    def __init__(self, p: int):
        if p < 2 or p >= 2**31:
            raise InvalidInput(f"bad prime {p}")
        for d in range(2, min(p, 1 << 16)):
            if d * d > p:
                break
            if p % d == 0:
                raise InvalidInput(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"

    def of(self, n):
        if isinstance(n, Fraction):
            return self.div(n.numerator % self.p, n.denominator % self.p)
        return int(n) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def to_str(self, a):
        return str(a % self.p)

    def from_str(self, s):
        return self.of(Fraction(s))

    def characteristic(self):
        return self.p

    def __eq__(self, other):
        return isinstance(other, GF) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


class NumberField(Field):
    """Q[x]/(m(x)) for a monic irreducible m; elements are coefficient tuples.

    The minimal polynomial is given by its non-leading coefficients
    (c0, ..., c_{d-1}) with m = x^d + c_{d-1} x^{d-1} + ... + c0.
    """

    def __init__(self, lower_coeffs, name="K"):
        self.m = tuple(Fraction(c) for c in lower_coeffs)
        self.deg = len(self.m)
        if self.deg == 0:
            raise InvalidInput("degree-0 number field")
        self.name = name

    def of(self, n):
        v = [Fraction(0)] * self.deg
        v[0] = Fraction(n)
        return tuple(v)

    def embed_poly(self, coeffs):
        """Image of sum coeffs[i] x^i under Q[x] -> Q[x]/(m)."""
        acc = self.zero
        xp = self.of(1)
        for c in coeffs:
            acc = self.add(acc, self.scale(xp, Fraction(c)))
            xp = self.mul_by_x(xp)
        return acc

    def scale(self, a, c):
        return tuple(ai * c for ai in a)

    def mul_by_x(self, a):
        # x * a, reducing x^d = -m(x)
        carry = a[-1]
        shifted = (Fraction(0),) + a[:-1]
        return tuple(s - carry * m for s, m in zip(shifted, self.m))

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        acc = self.zero
        xp = a
        for bi in b:
            if bi:
                acc = self.add(acc, self.scale(xp, bi))
            xp = self.mul_by_x(xp)
        return acc

    def inv(self, a):
        # extended Euclid in Q[x] against the minimal polynomial
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of 0")
        m = list(self.m) + [Fraction(1)]
        r0, r1 = m, list(a)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        r1 = _trim(r1)
        while _deg(r1) > 0 or (len(r1) == 1 and False):
            q, r = _polydivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _polysub(s0, _polymul(q, s1))
            r1 = _trim(r1)
            if not r1:
                raise ZeroDivisionError("element not invertible (reducible modulus?)")
        c = r1[0]
        s1 = [x / c for x in s1]
        return self.embed_poly(s1)

    def is_zero(self, a):
        return all(x == 0 for x in a)

    def to_str(self, a):
        return "[" + ",".join(QQ.to_str(x) for x in a) + "]"

    def from_str(self, s):
        body = s.strip()[1:-1]
        parts = [p for p in body.split(",") if p]
        v = [Fraction(p) for p in parts]
        v += [Fraction(0)] * (self.deg - len(v))
        return tuple(v[: self.deg])

    def __eq__(self, other):
        return isinstance(other, NumberField) and other.m == self.m

    def __hash__(self):
        return hash(("NF", self.m))


def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _deg(p):
    return len(p) - 1


def _polysub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _trim(out)


def _polymul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1 or 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _polydivmod(a, b):
    a = list(a)
    b = _trim(list(b))
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while _trim(a) and len(_trim(a)) >= len(b):
        a = _trim(a)
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] += c
        for i, bi in enumerate(b):
            a[i + k] -= c * bi
    return _trim(q), _trim(a)


def field_from_descriptor(desc: str) -> Field:
    """Parse a CLI field descriptor: 'Q' or 'Fp:<p>'."""
    if desc == "Q":
        return QQ
    if desc.startswith("Fp:"):
        return GF(int(desc.split(":", 1)[1]))
    raise InvalidInput(f"unknown field descriptor {desc!r}")


def cyclotomic_factors(m: int):
    """Coefficient lists of the cyclotomic polynomials Phi_d for d | m.

    x^m - 1 = prod of these; each factor has integer coefficients.
    """
    cache: dict[int, list[Fraction]] = {}

    def phi(d):
        if d in cache:
            return cache[d]
        num = [Fraction(0)] * (d + 1)
        num[0], num[d] = Fraction(-1), Fraction(1)
        den = [Fraction(1)]
        for e in range(1, d):
            if d % e == 0:
                den = _polymul(den, phi(e))
        q, r = _polydivmod(num, den)
        assert not r
        cache[d] = q
        return q

    return [(d, phi(d)) for d in range(1, m + 1) if m % d == 0]
