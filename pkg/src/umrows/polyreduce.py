"""Elementary reduction of unimodular rows over field polynomial rings.

`reduce_polyrow` returns a verified word of elementary moves carrying a row
to (1, 0, ..., 0), for n >= 3 over field[t_1..t_r].  It runs a portfolio of
strategies, every one of which only ever emits moves (so soundness is by
replay); failure of a strategy falls through to the next:

* unit endgame     -- some entry is a nonzero constant
* subrow assembly  -- 1 lies in the ideal of a coordinate subrow; its
                      cofactors assemble a 1 into the spare slot
* prefix search    -- short move prefixes that make the assembly fire
* cancel beam      -- greedy/beam support-shrinking (inverts word-built rows)
* univariate Euclid-- complete for r = 1 (leading coefficients are units)
* monic pivot      -- a degree-preserving linear substitution makes a pivot
                      monic in one variable; a grid of combinations then looks
                      for a partner with constant resultant, giving an exact
                      two-element Bezout certificate and a spare-slot assembly

The returned word is always replay-verified before being handed back.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from .config import Budgets, default_budgets
from .errors import BudgetExceeded, InvalidInput, NotUnimodular, VerificationFailure
from .groebner import buchberger, ideal_membership
from .monoid_ring import PolyContext, RElt
from .umrow import ElementaryMove, apply_move, apply_word, is_unit_row, unit_row


def _entry_size(e: RElt):
    return (len(e.terms), sum(sum(m) for m in e.terms))


def _row_size(row):
    t = d = 0
    for e in row:
        a, b = _entry_size(e)
        t += a
        d += b
    return (t, d)


# ---------------------------------------------------------------------------
# endgames

def finish_with_unit(row, slot):
    """Moves finishing a row whose `slot` entry is a nonzero constant."""
    ctx = row[0].ctx
    F = ctx.field
    n = len(row)
    moves = []
    u = row[slot].constant_term()
    if slot != 0:
        m = (ctx.one() - row[0]).scale(F.inv(u))
        mv = ElementaryMove(slot, 0, m)
        moves.append(mv)
        row = apply_move(row, mv)
    else:
        if not F.eq(u, F.one):
            # bounce through slot 1 to normalize the leading unit
            m1 = (ctx.one() - row[1]).scale(F.inv(u))
            mv = ElementaryMove(0, 1, m1)
            moves.append(mv)
            row = apply_move(row, mv)
            mv = ElementaryMove(1, 0, ctx.one() - row[0])
            moves.append(mv)
            row = apply_move(row, mv)
    for j in range(1, n):
        if not row[j].is_zero():
            mv = ElementaryMove(0, j, -row[j])
            moves.append(mv)
            row = apply_move(row, mv)
    if not is_unit_row(row):
        raise VerificationFailure("unit endgame failed")
    return moves


def constant_slot(row):
    for s, e in enumerate(row):
        if not e.is_zero() and e.is_constant():
            return s
    return None


# ---------------------------------------------------------------------------
# strategy: subrow assembly

def try_subrow_assembly(row, budgets, skip_gb_cap=None):
    """If 1 lies in the ideal of the entries outside some slot s, assemble it
    into s: v_s += (1 - v_s) * sum(cofactors).  Returns moves or None."""
    ctx = row[0].ctx
    F = ctx.field
    n = len(row)
    for s in range(n):
        gens = [dict(row[i].terms) for i in range(n) if i != s]
        idx = [i for i in range(n) if i != s]
        if all(not g for g in gens):
            continue
        try:
            ok, cofs, _ = ideal_membership(F, {ctx.zero_elem: F.one}, gens,
                                           ctx.nvars, budgets=budgets)
        except BudgetExceeded:
            continue
        if not ok:
            continue
        scalefac = ctx.one() - row[s]
        moves = []
        cur = row
        for i, c in zip(idx, cofs):
            if not c:
                continue
            mv = ElementaryMove(i, s, scalefac * RElt(ctx, c))
            moves.append(mv)
            cur = apply_move(cur, mv)
        if not (cur[s] == ctx.one()):
            return None
        return moves + finish_with_unit(cur, s)
    return None


def _candidate_multipliers(row, cap=24):
    """Cancellation candidates: term ratios v_j-term / v_i-term."""
    ctx = row[0].ctx
    F = ctx.field
    n = len(row)
    cands = []
    for i in range(n):
        if row[i].is_zero():
            continue
        for j in range(n):
            if i == j or row[j].is_zero():
                continue
            seen = set()
            for mj, cj in row[j].terms.items():
                for mi, ci in row[i].terms.items():
                    if all(a >= b for a, b in zip(mj, mi)):
                        diff = tuple(a - b for a, b in zip(mj, mi))
                        c = F.neg(F.div(cj, ci))
                        key = (diff, F.to_str(c))
                        if key not in seen:
                            seen.add(key)
                            cands.append((i, j, ctx.monomial(diff, c)))
    return cands[: cap * len(row) * len(row)]


def try_beam(row, budgets, rng):
    """Beam search on support size; succeeds when a constant entry appears."""
    width = budgets.reduce_beam_width
    depth_cap = 3 * budgets.reduce_beam_depth + 2 * sum(len(e.terms) for e in row)
    start = (tuple(row), ())
    beam = [start]
    seen = {tuple((tuple(sorted(e.terms.items(), key=lambda kv: kv[0]))) for e in row)}
    for depth in range(depth_cap):
        nxt = []
        for cur, path in beam:
            s = constant_slot(cur)
            if s is not None:
                return list(path) + finish_with_unit(cur, s)
            for i, j, a in _candidate_multipliers(cur):
                new = apply_move(cur, ElementaryMove(i, j, a))
                key = tuple(tuple(sorted(e.terms.items(), key=lambda kv: kv[0])) for e in new)
                if key in seen:
                    continue
                seen.add(key)
                nxt.append((new, path + (ElementaryMove(i, j, a),)))
        if not nxt:
            return None
        nxt.sort(key=lambda st: _row_size(st[0]))
        beam = nxt[:width]
        s = constant_slot(beam[0][0])
        if s is not None:
            cur, path = beam[0]
            return list(path) + finish_with_unit(cur, s)
    return None


def try_prefixed_assembly(row, budgets, rng):
    """Single-move prefixes (units and variables) before subrow assembly."""
    ctx = row[0].ctx
    n = len(row)
    small = [ctx.one(), -ctx.one()]
    for v in range(min(ctx.nvars, 3)):
        small.append(ctx.var(v))
        small.append(-ctx.var(v))
    tries = 0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for a in small:
                tries += 1
                if tries > 6 * n * n:
                    return None
                mv = ElementaryMove(i, j, a)
                new = apply_move(row, mv)
                rest = try_subrow_assembly(new, budgets)
                if rest is not None:
                    return [mv] + rest
    return None


# ---------------------------------------------------------------------------
# strategy: univariate Euclid (complete for r = 1)

def reduce_univariate(row):
    ctx = row[0].ctx
    F = ctx.field
    n = len(row)
    moves = []
    cur = row

    def deg(e):
        return max(m[0] for m in e.terms) if not e.is_zero() else -1

    while constant_slot(cur) is None:
        nz = [(deg(cur[i]), i) for i in range(n) if not cur[i].is_zero()]
        if len(nz) < 2:
            raise NotUnimodular("univariate row with a single non-unit entry")
        nz.sort()
        (d_lo, i_lo), (d_hi, i_hi) = nz[0], nz[1]
        # reduce the higher-degree entry by the lower one (leading coeffs are units)
        lo, hi = cur[i_lo], cur[i_hi]
        lc_lo = lo.terms[(d_lo,)]
        lc_hi = hi.terms[(d_hi,)]
        a = ctx.monomial((d_hi - d_lo,), F.neg(F.div(lc_hi, lc_lo)))
        mv = ElementaryMove(i_lo, i_hi, a)
        moves.append(mv)
        cur = apply_move(cur, mv)
    return moves + finish_with_unit(cur, constant_slot(cur))


# ---------------------------------------------------------------------------
# strategy: monic pivot + constant resultant

def _t_degree(e, tv):
    return max((m[tv] for m in e.terms), default=-1)


def _is_monic_in(e, tv):
    d = _t_degree(e, tv)
    if d < 0:
        return False
    tops = [m for m in e.terms if m[tv] == d]
    return len(tops) == 1 and all(x == 0 for k, x in enumerate(tops[0]) if k != tv)


def _linear_substitution(ctx, tv, coeffs):
    """x_k -> x_k + c_k * t (k != tv) as a pair of mutually inverse maps."""

    def fwd(e):
        return _subst(ctx, e, tv, coeffs)

    def bwd(e):
        return _subst(ctx, e, tv, [ctx.field.neg(c) for c in coeffs])

    return fwd, bwd


def _subst(ctx, e, tv, coeffs):
    F = ctx.field
    out = ctx.zero()
    imgs = []
    for k in range(ctx.nvars):
        if k == tv or F.is_zero(coeffs[k]):
            imgs.append(ctx.var(k))
        else:
            imgs.append(ctx.var(k) + ctx.var(tv).scale(coeffs[k]))
    pow_cache = [dict() for _ in range(ctx.nvars)]

    def ipow(k, m):
        if m == 0:
            return ctx.one()
        if m not in pow_cache[k]:
            pow_cache[k][m] = ipow(k, m - 1) * imgs[k]
        return pow_cache[k][m]

    for m, c in e.terms.items():
        term = ctx.const(c)
        for k, ek in enumerate(m):
            if ek:
                term = term * ipow(k, ek)
        out = out + term
    return out


def try_monic_pivot(row, budgets, rng):
    ctx = row[0].ctx
    F = ctx.field
    n = len(row)
    r = ctx.nvars
    for tv in range(r):
        for pslot in sorted(range(n), key=lambda s: _entry_size(row[s])):
            if row[pslot].is_zero():
                continue
            for attempt in range(4):
                if attempt == 0:
                    coeffs = [F.zero] * r
                else:
                    coeffs = [F.of(rng.randint(1, 3 * attempt)) for _ in range(r)]
                    coeffs[tv] = F.zero
                fwd, bwd = _linear_substitution(ctx, tv, coeffs)
                piv = fwd(row[pslot])
                if not _is_monic_in(piv, tv):
                    continue
                sub = try_monic_core([fwd(e) for e in row], pslot, tv, budgets, rng)
                if sub is not None:
                    return [ElementaryMove(mv.i, mv.j, bwd(mv.a)) for mv in sub]
    return None


def try_monic_core(row, pslot, tv, budgets, rng):
    """Row with row[pslot] monic in variable tv: division + Bezout finish."""
    ctx = row[0].ctx
    F = ctx.field
    n = len(row)
    moves = []
    cur = list(row)
    q = cur[pslot]
    D = _t_degree(q, tv)
    lc = [m for m in q.terms if m[tv] == D]
    qlc = q.terms[lc[0]]
    # normalize division: reduce every other entry below degree D in tv
    for j in range(n):
        if j == pslot:
            continue
        while _t_degree(cur[j], tv) >= D and not cur[j].is_zero():
            d = _t_degree(cur[j], tv)
            tops = [(m, c) for m, c in cur[j].terms.items() if m[tv] == d]
            m, c = tops[0]
            shift = list(m)
            shift[tv] -= D
            a = ctx.monomial(tuple(shift), F.neg(F.div(c, qlc)))
            mv = ElementaryMove(pslot, j, a)
            moves.append(mv)
            cur = list(apply_move(cur, mv))
    s0 = constant_slot(cur)
    if s0 is not None:
        return moves + finish_with_unit(tuple(cur), s0)
    # grid search for a partner with constant Bezout against the pivot
    others = [j for j in range(n) if j != pslot]
    grid = [F.of(k) for k in range(0, D + 2)]
    for target in others:
        sources = [j for j in others if j != target]
        combos = [()] if not sources else list(product(grid, repeat=len(sources)))
        rng.shuffle(combos)
        for combo in combos[: budgets.reduce_retries * 8]:
            u = cur[target]
            for cj, j in zip(combo, sources):
                if not F.is_zero(cj):
                    u = u + cur[j].scale(cj)
            if u.is_zero():
                continue
            res = _constant_bezout(ctx, q, u, budgets)
            if res is None:
                continue
            alpha, beta = res
            pre = []
            for cj, j in zip(combo, sources):
                if not F.is_zero(cj):
                    pre.append(ElementaryMove(j, target, ctx.const(cj)))
            cur2 = apply_word(tuple(cur), pre)
            # spare slot: any index other than pslot and target
            spare = next(s for s in range(n) if s not in (pslot, target))
            scale = ctx.one() - cur2[spare]
            fin = [ElementaryMove(pslot, spare, scale * alpha),
                   ElementaryMove(target, spare, scale * beta)]
            cur3 = apply_word(cur2, fin)
            if cur3[spare] == ctx.one():
                return moves + pre + fin + finish_with_unit(cur3, spare)
    return None


def _constant_bezout(ctx, q, u, budgets):
    """(alpha, beta) with alpha q + beta u = 1 exactly, if (q, u) is the unit
    ideal; None otherwise."""
    F = ctx.field
    try:
        ok, cofs, _ = ideal_membership(F, {ctx.zero_elem: F.one},
                                       [dict(q.terms), dict(u.terms)],
                                       ctx.nvars, budgets=budgets)
    except BudgetExceeded:
        return None
    if not ok:
        return None
    return RElt(ctx, cofs[0]), RElt(ctx, cofs[1])


# ---------------------------------------------------------------------------
# driver

def reduce_polyrow(row, budgets: Budgets | None = None, rng=None, _depth=0):
    """A verified word of elementary moves reducing `row` to (1, 0, ..., 0).

    The row must be unimodular over a field polynomial ring with n >= 3
    components (n = 2 works when an entry is already constant or r <= 1).
    """
    budgets = budgets or default_budgets()
    rng = rng or random.Random(7)
    row = tuple(row)
    ctx = row[0].ctx
    if not isinstance(ctx, PolyContext):
        raise InvalidInput("reduce_polyrow expects a polynomial-ring context")

    def attempt(r0):
        if is_unit_row(r0):
            return []
        s = constant_slot(r0)
        if s is not None:
            return finish_with_unit(r0, s)
        if ctx.nvars == 0:
            raise NotUnimodular("zero row over the field")
        if ctx.nvars == 1:
            return reduce_univariate(r0)
        out = try_subrow_assembly(r0, budgets)
        if out is not None:
            return out
        out = try_beam(r0, budgets, rng)
        if out is not None:
            return out
        out = try_prefixed_assembly(r0, budgets, rng)
        if out is not None:
            return out
        out = try_monic_pivot(r0, budgets, rng)
        if out is not None:
            return out
        return None

    moves = attempt(row)
    if moves is None and _depth < budgets.reduce_retries:
        # randomized restarts: scramble with a short random word and recurse
        for k in range(budgets.reduce_retries - _depth):
            pre = []
            cur = row
            for _ in range(1 + (k % 2)):
                i = rng.randrange(len(row))
                j = (i + 1 + rng.randrange(len(row) - 1)) % len(row)
                a = ctx.monomial(tuple(rng.randint(0, 1) for _ in range(ctx.nvars)),
                                 ctx.field.of(rng.choice([1, -1])))
                mv = ElementaryMove(i, j, a)
                pre.append(mv)
                cur = apply_move(cur, mv)
            rest = attempt(cur)
            if rest is not None:
                moves = pre + rest
                break
    if moves is None:
        raise BudgetExceeded("polynomial reducer exhausted its strategies")
    if not is_unit_row(apply_word(row, moves)):
        raise VerificationFailure("reducer produced an unverified word")
    return moves
