"""Unimodular rows, elementary moves, transcripts, and completions.

A move (i, j, a) is right multiplication by I + a E_{ij}: it adds the
a-multiple of component i to component j.  A transcript is an ordered list
of moves grouped into stages, each stage tagged with the ring its
multipliers live in.  Replay is the universal verifier: every claim made by
the reduction machinery is checked by exact replay, and transcripts carry a
hash chain so a tampered certificate fails with the first divergent step.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .config import Budgets, default_budgets
from .errors import InvalidInput, NotUnimodular, VerificationFailure
from .groebner import ideal_membership, toric_ideal, verify_cofactors
from .monoid_ring import (FracContext, LocalFraction, MonoidRingContext,
                          PolyContext, QuotientMonomialContext, RElt)


@dataclass(frozen=True)
class ElementaryMove:
    i: int
    j: int
    a: object  # RElt or LocalFraction

    def __post_init__(self):
        if self.i == self.j:
            raise InvalidInput("elementary moves need i != j")

    def inverse(self):
        return ElementaryMove(self.i, self.j, -self.a)


def apply_move(row, mv: ElementaryMove):
    out = list(row)
    out[mv.j] = out[mv.j] + mv.a * out[mv.i]
    return tuple(out)


def apply_word(row, moves):
    for mv in moves:
        row = apply_move(row, mv)
    return row


def inverse_word(moves):
    return [mv.inverse() for mv in reversed(moves)]


def transport_certificate(cert, moves):
    """Push a cofactor column through a word: if row' = row * E and
    sum cert_i row_i = 1, then cert' = E^{-1} cert keeps the identity.

    For a single move (i, j, a): cert'_i = cert_i - a * cert_j."""
    cert = list(cert)
    for mv in moves:
        cert[mv.i] = cert[mv.i] - mv.a * cert[mv.j]
    return cert


# ---------------------------------------------------------------------------
# transcripts

def _row_hash(row):
    blob = json.dumps([e.to_json() if isinstance(e, RElt) else e.to_json()
                       for e in row], sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class TranscriptStage:
    ring_tag: str
    ctx: object
    moves: list


class Transcript:
    """Ordered elementary moves with per-stage rings and a hash chain."""

    def __init__(self, stages, kind="full"):
        self.stages = stages
        self.kind = kind
        self.checkpoints = []  # filled on sealing

    @staticmethod
    def full(ctx, moves, ring_tag="ring"):
        return Transcript([TranscriptStage(ring_tag, ctx, list(moves))], kind="full")

    def all_moves(self):
        out = []
        for st in self.stages:
            out.extend(st.moves)
        return out

    def seal(self, row):
        """Record the hash chain of the replay from `row`."""
        self.checkpoints = [_row_hash(row)]
        cur = row
        for st in self.stages:
            for mv in st.moves:
                cur = apply_move(cur, mv)
                self.checkpoints.append(_row_hash(cur))
        return cur

    def __len__(self):
        return sum(len(st.moves) for st in self.stages)


def unit_row(ctx, n):
    e = [ctx.zero()] * n
    e[0] = ctx.one()
    return tuple(e)


def is_unit_row(row):
    first = row[0]
    one = first.ctx.one() if isinstance(first, RElt) else first.ctx.one()
    if not (first == one):
        return False
    return all(e.is_zero() for e in row[1:])


def apply_transcript(row, T: Transcript):
    for st in T.stages:
        for mv in st.moves:
            row = apply_move(row, mv)
    return row


def verify_reduction(row, T: Transcript) -> bool:
    return is_unit_row(apply_transcript(row, T))


def verify_reduction_report(row, T: Transcript):
    """(ok, first_divergent_step): replays against the sealed hash chain.

    Step k is the state after k moves; step 0 is the input row."""
    cur = row
    if T.checkpoints:
        if _row_hash(cur) != T.checkpoints[0]:
            return False, 0
        k = 0
        for st in T.stages:
            for mv in st.moves:
                cur = apply_move(cur, mv)
                k += 1
                if _row_hash(cur) != T.checkpoints[k]:
                    return False, k
        return is_unit_row(cur), (None if is_unit_row(cur) else k)
    cur = apply_transcript(row, T)
    ok = is_unit_row(cur)
    return ok, (None if ok else len(T))


# ---------------------------------------------------------------------------
# matrices over a ring context

def mat_identity(ctx, n):
    return [[ctx.one() if i == j else ctx.zero() for j in range(n)] for i in range(n)]


def rmat_mul(A, B):
    n = len(A)
    m = len(B[0])
    k = len(B)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for t in range(k):
                term = A[i][t] * B[t][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def elementary_matrix(ctx, n, mv: ElementaryMove):
    M = mat_identity(ctx, n)
    M[mv.i][mv.j] = M[mv.i][mv.j] + mv.a
    return M


def word_to_matrix(ctx, n, moves):
    M = mat_identity(ctx, n)
    for mv in moves:
        M = rmat_mul(M, elementary_matrix(ctx, n, mv))
    return M


def rmat_det(A):
    n = len(A)
    if n == 1:
        return A[0][0]
    acc = None
    for j in range(n):
        if A[0][j].is_zero():
            continue
        minor = [[A[i][t] for t in range(n) if t != j] for i in range(1, n)]
        term = A[0][j] * rmat_det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        ctx = A[0][0].ctx
        return ctx.zero() if isinstance(A[0][0], RElt) else ctx.zero()
    return acc


def row_times_matrix(row, M):
    n = len(M)
    out = []
    for j in range(len(M[0])):
        acc = None
        for i in range(n):
            term = row[i] * M[i][j]
            acc = term if acc is None else acc + term
        out.append(acc)
    return tuple(out)


@dataclass
class CompletionMatrix:
    matrix: list
    word: list  # the elementary word whose ordered product equals the matrix


def completion(row, T: Transcript) -> CompletionMatrix:
    """A matrix in E_n with first row `row`, from a transcript reducing it to e.

    If row * prod(E) = e then row is the first row of prod(E)^{-1}, which is
    the ordered product of the inverted moves in reverse order.
    """
    ctx = row[0].ctx
    n = len(row)
    word = inverse_word(T.all_moves())
    M = word_to_matrix(ctx, n, word)
    if tuple(M[0]) != tuple(row):
        raise VerificationFailure("completion's first row does not match the input row")
    d = rmat_det(M)
    if not (d == ctx.one()):
        raise VerificationFailure("completion has determinant != 1")
    return CompletionMatrix(M, word)


# ---------------------------------------------------------------------------
# unimodularity

class UnimodularRow:
    """A row with (once computed) a cofactor certificate sum b_i f_i = 1."""

    def __init__(self, entries, cert=None):
        self.entries = tuple(entries)
        if len(self.entries) < 2:
            raise InvalidInput("rows must have length >= 2")
        self.cert = list(cert) if cert is not None else None

    @property
    def ctx(self):
        return self.entries[0].ctx

    def __len__(self):
        return len(self.entries)

    def check_certificate(self) -> bool:
        if self.cert is None:
            return False
        acc = None
        for b, f in zip(self.cert, self.entries):
            term = b * f
            acc = term if acc is None else acc + term
        one = self.ctx.one()
        return acc == one


def _monomial_section(monoid, gens, memo, elem):
    """Factor a monoid element over the generators; returns exponent tuple."""
    if elem in memo:
        return memo[elem]
    zero = monoid.zero
    stack = [(elem, ())]
    # BFS by degree descent
    lam = monoid.degree_functional() if hasattr(monoid, "degree_functional") else None

    def rec(v, seen):
        if v == zero:
            return (0,) * len(gens)
        if v in memo:
            return memo[v]
        if v in seen:
            return None
        seen.add(v)
        for idx, g in enumerate(gens):
            w = tuple(a - b for a, b in zip(v, g))
            if hasattr(monoid, "torsion_orders") and monoid.torsion_orders:
                r = monoid.free_rank
                w = w[:r] + tuple(x % n for x, n in zip(w[r:], monoid.torsion_orders))
            if lam is not None:
                d = sum(a * b for a, b in zip(lam, w[: len(lam)]))
                if d < 0:
                    continue
            if monoid.contains(w):
                sub = rec(w, seen)
                if sub is not None:
                    out = list(sub)
                    out[idx] += 1
                    memo[v] = tuple(out)
                    return memo[v]
        return None

    res = rec(elem, set())
    if res is None:
        raise InvalidInput(f"element {elem} does not factor over the generators")
    return res


def presentation_data(ctx, budgets=None):
    """(generators, toric ideal polys, section fn) for a monoid-ring context."""
    budgets = budgets or default_budgets()
    if isinstance(ctx, PolyContext):
        return None
    monoid = ctx.monoid
    if hasattr(monoid, "hilbert_basis"):
        gens = list(monoid.hilbert_basis())
    else:
        gens = list(monoid.generators)
    tor = getattr(monoid, "torsion_orders", ())
    ideal = toric_ideal(ctx.field, gens, tor, budgets)
    memo = {}

    def section(elem):
        return _monomial_section(monoid, gens, memo, elem)

    return gens, ideal, section


def is_unimodular(row, budgets=None):
    """Certificate cofactors b with sum b_i f_i = 1, or None.

    Over k[M] the membership is computed in the toric presentation and the
    returned cofactors are monoid-ring elements verified by exact expansion.
    """
    budgets = budgets or default_budgets()
    entries = list(row.entries if isinstance(row, UnimodularRow) else row)
    ctx = entries[0].ctx
    F = ctx.field
    if isinstance(ctx, PolyContext):
        gens = [dict(e.terms) for e in entries]
        ok, cofs, nf = ideal_membership(F, {ctx.zero_elem: F.one}, gens, ctx.nvars,
                                        budgets=budgets)
        if not ok:
            return None
        cert = [RElt(ctx, c) for c in cofs]
    else:
        data = presentation_data(ctx, budgets)
        gens, ideal, section = data
        s = len(gens)
        pr = PolyContext(F, s)

        def to_pr(e):
            out = {}
            for m, c in e.terms.items():
                em = section(m)
                acc = F.add(out.get(em, F.zero), c)
                if F.is_zero(acc):
                    out.pop(em, None)
                else:
                    out[em] = acc
            return out

        sys_gens = [to_pr(e) for e in entries] + list(ideal)
        ok, cofs, nf = ideal_membership(F, {(0,) * s: F.one}, sys_gens, s,
                                        budgets=budgets)
        if not ok:
            return None

        def back(p):
            terms = []
            for m, c in p.items():
                elem = ctx.monoid.zero
                for e, g in zip(m, gens):
                    for _ in range(e):
                        elem = ctx.monoid.add(elem, g)
                terms.append((elem, c))
            return ctx.from_terms(terms)

        cert = [back(c) for c in cofs[: len(entries)]]
    # exact verification
    acc = None
    for b, f in zip(cert, entries):
        term = b * f
        acc = term if acc is None else acc + term
    if not (acc == ctx.one()):
        raise VerificationFailure("certificate failed exact expansion")
    return cert


def require_unimodular(row, budgets=None):
    cert = is_unimodular(row, budgets)
    if cert is None:
        raise NotUnimodular("row does not generate the unit ideal")
    return cert
