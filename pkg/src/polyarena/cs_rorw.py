"""Constant-space algorithms in the ro/rw permission model.

Inputs are read-only; the output region doubles as workspace, shrinking as
results are produced.  Each reduction recomputes its block threshold from
the kit's declared scratch factor c, so nothing here hard-codes c = 2.

Tail recursions are written as loops (no call-stack growth); an operation
enters the call ledger once at its public boundary, so the tail-recursive
reductions report pointer depth 1.

Declared scalar budgets (Python locals per arithmetic statement): at most
four per loop below, except the small-size interpolation fallback which
holds one block of at most twelve coefficients.
"""

from __future__ import annotations

from .coeff_ring import Zq
from .dense_ref import MulKit
from .errors import (
    BadScratch,
    DuplicatePoint,
    NonUnitConstant,
    NonUnitLeading,
    PreconditionLowNonzero,
    PreconditionTopNonzero,
    ScratchTooSmall,
    SizeContract,
    ZeroPointWithShift,
)
from .reg_arena import PolyView, vadd, vcopy, vneg, vzero

_KIT = MulKit()


def _ring(view: PolyView) -> Zq:
    return view.arena.ring


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------


def semi_cumulative_product(f: PolyView, g: PolyView, h: PolyView, kit: MulKit = _KIT):
    """h += f * g where the top n coefficients of h start out zero.

    The known-zero top of h is the workspace; the tail call shrinks all
    three windows to the top halves.
    """
    n = len(f)
    if len(g) != n or len(h) != 2 * n - 1:
        raise SizeContract("need sizes (n, n, 2n-1)")
    for i in range(n - 1, 2 * n - 1):
        if h.get(i):
            raise PreconditionTopNonzero(f"h[{i}] != 0")
    with h.arena.call():
        while True:
            c = kit.c
            k = (n + 1) // (c + 3)
            if k == 0:
                kit._schoolbook_acc(h, f, g, 2 * n - 1, 1)
                return
            ws = h.sub(n + k - 1, 2 * n - 1)
            fb = f.sub(0, k)
            gb = g.sub(0, k)
            p = ws.sub(0, 2 * k - 1)
            rest = ws.sub(2 * k - 1, len(ws))
            nb = (n + k - 1) // k
            for j in range(nb):
                gj = g.sub(j * k, min((j + 1) * k, n)).padded(k)
                kit.full_into(p, fb, gj, rest)
                vadd(h.sub(j * k, min(j * k + 2 * k - 1, n + k - 1)), p)
            nb = (n - k + k - 1) // k
            for j in range(nb):
                fj = f.sub(k + j * k, min(k + (j + 1) * k, n)).padded(k)
                kit.full_into(p, fj, gb, rest)
                vadd(h.sub(k + j * k, min(k + j * k + 2 * k - 1, n + k - 1)), p)
            vzero(ws)
            f = f.sub(k, n)
            g = g.sub(k, n)
            h = h.sub(2 * k, len(h))
            n -= k


def lower_product_cs(f: PolyView, g: PolyView, h: PolyView, kit: MulKit = _KIT, reversed_mode: bool = False):
    """h = f * g mod x^n; with reversed_mode, h (n-1 slots) = (f*g) quo x^n.

    The upper product is the lower product of the reversed tails, read and
    written through reversal views.
    """
    n = len(f)
    if len(g) != n:
        raise SizeContract("need equal input sizes")
    if reversed_mode:
        if len(h) != n - 1:
            raise SizeContract("upper product output has n-1 slots")
        if n <= 1:
            return
        lower_product_cs(f.sub(1, n).rev(), g.sub(1, n).rev(), h.rev(), kit)
        return
    if len(h) != n:
        raise SizeContract("lower product output has n slots")
    with h.arena.call():
        while True:
            c = kit.c
            k = n // (c + 3)
            if k == 0:
                kit._schoolbook_into(h, f.sub(0, n), g.sub(0, n), n)
                return
            top = h.sub(n - k, n)
            vzero(top)
            ws = h.sub(0, n - k)
            kit.slice_acc(top, f.sub(0, n), g.sub(0, n), n - k, ws)
            f = f.sub(0, n - k)
            g = g.sub(0, n - k)
            h = ws
            n -= k


def semi_cumulative_lower(f: PolyView, g: PolyView, h: PolyView, s: int, kit: MulKit = _KIT, sign: int = 1):
    """h += sign * (f * g mod x^n) given h mod x^s = 0.

    The zero prefix of h is the only workspace: the part above s is filled
    in chunks whose kit scratch fits below s, and the prefix itself is one
    self-contained lower product at the end.
    """
    n = len(h)
    if not 1 <= s <= n:
        raise BadScratch(f"s = {s} outside [1, {n}]")
    for i in range(min(s, n)):
        if h.get(i):
            raise PreconditionLowNonzero(f"h[{i}] != 0")
    with h.arena.call():
        b = max(1, s // (kit.c + 1))
        ws = h.sub(0, s)
        u = s
        while u < n:
            chunk = h.sub(u, min(u + b, n))
            kit.slice_acc(chunk, f, g, u, ws, sign)
            u += b
        ns = min(s, n)
        low = h.sub(0, ns)
        fv = f.sub(0, min(len(f), ns)).padded(ns)
        gv = g.sub(0, min(len(g), ns)).padded(ns)
        lower_product_cs(fv, gv, low, kit)
        if sign < 0:
            vneg(low)


def middle_product_cs(f: PolyView, g: PolyView, h: PolyView, kit: MulKit = _KIT):
    """h = central slice [f * g]_{n-1}^{m+n-1} for sizes (m+n-1, n, m)."""
    n = len(g)
    m = len(h)
    if len(f) != m + n - 1:
        raise SizeContract("need len(f) = len(h) + len(g) - 1")
    with h.arena.call():
        while True:
            c = kit.c
            k = m // (c + 2)
            if k == 0:
                for d in range(m):
                    acc = 0
                    for j in range(g.rlo, g.rhi):
                        acc += f.get(n - 1 + d - j) * g.get(j)
                    h.set(d, acc)
                h.arena.metrics.base_products += m * max(0, g.rhi - g.rlo)
                return
            dst = h.sub(0, k)
            vzero(dst)
            ws = h.sub(k, m)
            kit.mid_unbalanced_acc(dst, f.sub(0, n - 1 + k), g, ws)
            f = f.sub(k, len(f))
            h = h.sub(k, m)
            m -= k


# ---------------------------------------------------------------------------
# power series inversion and division
# ---------------------------------------------------------------------------


def series_inv_cs(f: PolyView, g: PolyView, kit: MulKit = _KIT, ladder=None):
    """g = f^{-1} mod x^n by a space-throttled Newton iteration.

    Each round computes ell new coefficients with a middle and a lower
    product whose workspace lives in the not-yet-written part of g; ell
    shrinks as g fills up.  `ladder` is called with the precision reached
    after every round (used by the loop-invariant tests).
    """
    n = len(f)
    if len(g) != n:
        raise SizeContract("output must match input precision")
    ring = _ring(f)
    f0 = f.get(0)
    if f0 == 0:
        raise NonUnitConstant("series has no inverse")
    with g.arena.call():
        g.set(0, ring.inv(f0))
        if ladder:
            ladder(1)
        if n == 1:
            return
        c = kit.c
        if n < c + 3:
            f0inv = ring.inv(f0)
            for j in range(1, n):
                acc = 0
                for i in range(1, j + 1):
                    acc += f.get(i) * g.get(j - i)
                g.set(j, -acc * f0inv)
            if ladder:
                ladder(n)
            return
        k, ell = 1, 1
        while ell > 0:
            dst = g.sub(n - ell, n)
            vzero(dst)
            kit.mid_unbalanced_acc(dst, f.sub(1, k + ell), g.sub(0, k), g.sub(k, n - ell))
            out = g.sub(k, k + ell)
            vzero(out)
            free_lo = min(k + ell, n - ell)
            kit.low_acc(out, g.sub(0, ell), dst, g.sub(free_lo, n - ell), -1)
            k += ell
            if ladder:
                ladder(k)
            ell = min(k, (n - k) // (c + 2))
        if k < n:
            # constant-size tail via the inverse recurrence, which only
            # reads already-final coefficients of g
            f0inv = ring.inv(f0)
            for j in range(k, n):
                acc = 0
                for i in range(1, j + 1):
                    acc += f.get(i) * g.get(j - i)
                g.set(j, -acc * f0inv)
            if ladder:
                ladder(n)


def series_div_cs(f: PolyView, g: PolyView, h: PolyView, kit: MulKit = _KIT, ladder=None):
    """h = f / g mod x^n with g(0) a unit.

    The inverse of g at the initial precision is parked in reversed order
    at the top of h and consumed as the output grows toward it.
    """
    n = len(f)
    if len(g) != n or len(h) != n:
        raise SizeContract("need three size-n operands")
    ring = _ring(f)
    if g.get(0) == 0:
        raise NonUnitConstant("divisor constant term is zero")
    with h.arena.call():
        c = kit.c
        k = n // (c + 2)
        if k == 0:
            _series_div_naive(ring, f, g, h, 0, n)
            if ladder:
                ladder(n)
            return
        inv_rev = h.sub(n - k, n).rev()
        series_inv_cs(g.sub(0, k), inv_rev, kit)
        dst = h.sub(0, k)
        vzero(dst)
        kit.low_acc(dst, f.sub(0, k), inv_rev, h.sub(k, n - k))
        if ladder:
            ladder(k)
        ell = (n - k) // (c + 3)
        while ell > 0:
            stage = h.sub(n - 2 * ell, n - ell)
            vzero(stage)
            kit.mid_unbalanced_acc(stage, g.sub(1, k + ell), h.sub(0, k), h.sub(k, n - 2 * ell), -1)
            vadd(stage, f.sub(k, k + ell))
            out = h.sub(k, k + ell)
            vzero(out)
            kit.low_acc(out, stage, h.sub(n - ell, n).rev(), h.sub(k + ell, n - 2 * ell))
            k += ell
            if ladder:
                ladder(k)
            ell = (n - k) // (c + 3)
        if k < n:
            # the parked inverse is partly overwritten by now; finish with
            # the quotient recurrence, which needs no inverse at all
            _series_div_naive(ring, f, g, h, k, n)
            if ladder:
                ladder(n)


def _series_div_naive(ring: Zq, f: PolyView, g: PolyView, h: PolyView, lo: int, hi: int):
    """h[lo, hi) from the division recurrence, reading h below lo."""
    g0inv = ring.inv(g.get(0))
    for j in range(lo, hi):
        acc = f.get(j)
        for i in range(1, min(j, len(g) - 1) + 1):
            acc -= g.get(i) * h.get(j - i)
        h.set(j, acc * g0inv)


def inplace_div_smallspace(f: PolyView, g: PolyView, t: PolyView, kit: MulKit = _KIT):
    """Replace f by f / g mod x^n using only the scratch block t of size s.

    Computes the inverse of g at precision s // (c+3) once into t, then
    emits that many new quotient coefficients per round, overwriting the
    dividend block just consumed.
    """
    n = len(f)
    if len(g) != n:
        raise SizeContract("dividend and divisor must share precision")
    s = len(t)
    if g.get(0) == 0:
        raise NonUnitConstant("divisor constant term is zero")
    if s < kit.c + 3:
        raise ScratchTooSmall(f"need scratch >= {kit.c + 3}, got {s}")
    with f.arena.call():
        step = min(s // (kit.c + 3), n)
        inv = t.sub(0, step)
        series_inv_cs(g.sub(0, step), inv, kit)
        stage = t.sub(step, 2 * step)
        vzero(stage)
        kit.low_acc(stage, f.sub(0, step), inv, t.sub(2 * step, s))
        vcopy(f.sub(0, step), stage, step)
        k = step
        while k < n:
            ell = min(step, n - k)
            stage = t.sub(step, step + ell)
            vzero(stage)
            kit.mid_unbalanced_acc(stage, g.sub(1, k + ell), f.sub(0, k), t.sub(step + ell, s), -1)
            vadd(stage, f.sub(k, k + ell))
            out = f.sub(k, k + ell)
            vzero(out)
            kit.low_acc(out, stage, inv.sub(0, ell), t.sub(step + ell, s))
            k += ell


def _revdiv_inplace(u: PolyView, div_rev: PolyView, scratch: PolyView, kit: MulKit = _KIT):
    """u <- u / div_rev mod x^len(u), in place; naive when scratch is tiny."""
    b = len(u)
    if b == 0:
        return
    ring = _ring(u)
    if len(scratch) >= kit.c + 3 and b > kit.c + 3:
        inplace_div_smallspace(u, div_rev, scratch, kit)
        return
    d0 = div_rev.get(0)
    if d0 == 0:
        raise NonUnitConstant("divisor constant term is zero")
    d0inv = ring.inv(d0)
    for i in range(b):
        acc = u.get(i)
        for a in range(1, min(i, len(div_rev) - 1) + 1):
            acc -= div_rev.get(a) * u.get(i - a)
        u.set(i, acc * d0inv)


# ---------------------------------------------------------------------------
# Euclidean division
# ---------------------------------------------------------------------------


def divrem_cs(f: PolyView, g: PolyView, q_out: PolyView, r_out: PolyView, kit: MulKit = _KIT):
    """Quotient and remainder of f by g, computed block by block from the
    top; the remainder slots serve as division scratch until the very end."""
    n = len(g)
    m = len(f) - n + 1
    if m < 0:
        raise SizeContract(f"dividend too short: m = {m}")
    if len(q_out) != m or len(r_out) != n - 1:
        raise SizeContract("output sizes must be (m, n-1)")
    if n == 0 or g.get(n - 1) == 0:
        raise NonUnitLeading("divisor leading coefficient is zero")
    ring = _ring(f)
    with q_out.arena.call():
        if n == 1:
            lead = ring.inv(g.get(0))
            for i in range(m):
                q_out.set(i, f.get(i) * lead)
            return
        if m == 0:
            vcopy(r_out, f, n - 1)
            return
        if n - 1 < kit.c + 3:
            _divrem_naive(ring, f, g, q_out, r_out)
            return
        nblocks = (m + n - 1) // n
        top = m - (nblocks - 1) * n
        j = nblocks - 1
        blk = q_out.sub(j * n, j * n + top)
        vcopy(blk, f.sub(n - 1 + j * n, n - 1 + j * n + top), top)
        _revdiv_inplace(blk.rev(), g.sub(n - top, n).rev(), r_out, kit)
        while j > 0:
            above = blk
            j -= 1
            blk = q_out.sub(j * n, (j + 1) * n)
            vcopy(blk, f.sub(n - 1 + j * n, n - 1 + (j + 1) * n), n)
            _chunked_slice_sub(blk.sub(1, n), g.sub(0, n - 1), above.sub(0, min(len(above), n - 1)), r_out, kit)
            _revdiv_inplace(blk.rev(), g.rev(), r_out, kit)
        q0 = q_out.sub(0, min(m, n - 1)).padded(n - 1)
        lower_product_cs(g.sub(0, n - 1), q0, r_out, kit)
        vneg(r_out)
        vadd(r_out, f.sub(0, n - 1))


def _chunked_slice_sub(dst: PolyView, u: PolyView, v: PolyView, ws: PolyView, kit: MulKit):
    """dst -= (u * v) mod x^len(dst), in chunks small enough for ws."""
    t = len(dst)
    cc = max(1, min(t, len(ws) // (kit.c + 1)))
    lo = 0
    while lo < t:
        chunk = dst.sub(lo, min(lo + cc, t))
        kit.slice_acc(chunk, u, v, lo, ws, -1)
        lo += cc


def _divrem_naive(ring: Zq, f: PolyView, g: PolyView, q_out: PolyView, r_out: PolyView):
    n = len(g)
    m = len(q_out)
    lead = ring.inv(g.get(n - 1))
    for i in range(m - 1, -1, -1):
        acc = f.get(i + n - 1)
        for j in range(1, min(n - 1, m - 1 - i) + 1):
            acc -= g.get(n - 1 - j) * q_out.get(i + j)
        q_out.set(i, acc * lead)
    for d in range(n - 1):
        acc = f.get(d)
        for j in range(max(0, d - m + 1), min(d, n - 1) + 1):
            acc -= g.get(j) * q_out.get(d - j)
        r_out.set(d, acc)


def remainder_smallspace(f: PolyView, g: PolyView, r_out: PolyView, t: PolyView, kit: MulKit = _KIT):
    """r = f mod g with an extra block t of size s <= n-1; the quotient is
    produced one size-s block at a time inside t and immediately folded
    into the sliding correction window r."""
    n = len(g)
    m = len(f) - n + 1
    s = len(t)
    if len(r_out) != n - 1:
        raise SizeContract("remainder has n-1 slots")
    if g.get(n - 1) == 0:
        raise NonUnitLeading("divisor leading coefficient is zero")
    if n > 1 and not 1 <= s <= n - 1:
        raise BadScratch(f"need 1 <= s <= {n - 1}, got {s}")
    if m < 0:
        vcopy(r_out, f.padded(len(f) + (n - 1 - len(f))), n - 1)
        return
    with r_out.arena.call():
        if n == 1:
            return
        blocks = m // s
        head = m - blocks * s
        if head:
            vcopy(t.sub(0, head), f.sub(m + n - 1 - head, m + n - 1), head)
            _revdiv_inplace(t.sub(0, head).rev(), g.sub(n - head, n).rev(), r_out, kit)
            gv = g.sub(0, n - 1).padded(n - 1)
            tv = t.sub(0, head).padded(n - 1)
            lower_product_cs(gv, tv, r_out, kit)
            vneg(r_out)
        else:
            vzero(r_out)
        vcopy(t.sub(0, s), r_out.sub(n - 1 - s, n - 1), s)
        vadd(t.sub(0, s), f.sub(n - 1 + (blocks - 1) * s, n - 1 + blocks * s))
        for j in range(blocks - 1, -1, -1):
            for i in range(n - 2 - s, -1, -1):
                r_out.set(i + s, r_out.get(i))
            _revdiv_inplace(t.sub(0, s).rev(), g.sub(n - s, n).rev(), r_out.sub(0, s), kit)
            vzero(r_out.sub(0, s))
            semi_cumulative_lower(g.sub(0, n - 1), t.sub(0, s), r_out, s, kit, sign=-1)
            vcopy(t.sub(0, s), r_out.sub(n - 1 - s, n - 1), s)
            vadd(t.sub(0, s), f.sub(n - 1 + (j - 1) * s, n - 1 + j * s))
        vcopy(r_out.sub(n - 1 - s, n - 1), t.sub(0, s), s)
        vadd(r_out.sub(0, n - 1 - s), f.sub(0, n - 1 - s))


# ---------------------------------------------------------------------------
# evaluation and interpolation
# ---------------------------------------------------------------------------


def _horner_view(f: PolyView, a: int, q: int) -> int:
    acc = 0
    for i in range(len(f) - 1, -1, -1):
        acc = (acc * a + f.get(i)) % q
    return acc


def mp_eval_cs(f: PolyView, points, out: PolyView, kit: MulKit = _KIT):
    """out[i] = f(points[i]); batches reduce f modulo the batch modulus in
    the free output space, then evaluate the small remainder per point."""
    q = f.arena.q
    pts = [int(a) % q for a in points]
    if len(out) != len(pts):
        raise SizeContract("one output slot per point")
    n = len(f)
    P = len(pts)
    with out.arena.call():
        done = 0
        while done < P:
            rem_slots = P - done
            k = (rem_slots - 1) // 3
            if rem_slots <= 6 or k < 2 or n <= k:
                for i in range(done, P):
                    out.set(i, _horner_view(f, pts[i], q))
                return
            mview = out.sub(done, done + k + 1)
            rview = out.sub(done + k + 1, done + 2 * k + 1)
            tview = out.sub(done + 2 * k + 1, done + 3 * k + 1)
            batch = pts[done : done + k]
            mview.set(0, 1)
            for idx, a in enumerate(batch):
                mview.set(idx + 1, mview.get(idx))
                for d in range(idx, 0, -1):
                    mview.set(d, mview.get(d - 1) - a * mview.get(d))
                mview.set(0, -a * mview.get(0))
            remainder_smallspace(f, mview, rview, tview, kit)
            for i, a in enumerate(batch):
                out.set(done + i, _horner_view(rview, a, q))
            done += k


def partial_interp(g: PolyView, pairs, k: int, out: PolyView, scratch: PolyView, kit: MulKit = _KIT):
    """First k coefficients of h where g + x^s * h interpolates the pairs.

    s = len(g) is the number of already-known low coefficients.  Block
    Lagrange interpolation: the pairs are cut into ceil(len/k) blocks (the
    last may be short), and each block contributes n_i * s_i mod x^k.
    Scratch requirement: 8k + 4 registers.
    """
    ring = _ring(out)
    q = ring.q
    s = len(g)
    pts = [(int(a) % q, int(b) % q) for a, b in pairs]
    npts = len(pts)
    if not 1 <= k <= npts:
        raise SizeContract(f"need 1 <= k <= {npts}")
    if len(out) < k:
        raise SizeContract("output too short")
    if len(set(a for a, _ in pts)) != npts:
        raise DuplicatePoint("interpolation points must be distinct")
    if s > 0 and any(a == 0 for a, _ in pts):
        raise ZeroPointWithShift("zero point is not allowed when a prefix is known")
    if len(scratch) < 8 * k + 4:
        raise BadScratch(f"need scratch >= {8 * k + 4}, got {len(scratch)}")
    with out.arena.call():
        mi = scratch.sub(0, k + 1)
        sk = scratch.sub(k + 1, 2 * k + 1)
        sm = scratch.sub(2 * k + 1, 3 * k + 1)
        mj = scratch.sub(3 * k + 1, 4 * k + 2)
        ni = scratch.sub(4 * k + 2, 5 * k + 2)
        ws = scratch.sub(5 * k + 2, 8 * k + 4)
        out_k = out.sub(0, k)
        vzero(out_k)
        nb = (npts + k - 1) // k
        for bi in range(nb):
            block = pts[bi * k : (bi + 1) * k]
            kb = len(block)
            _build_modulus(mi, [a for a, _ in block])
            vzero(sk)
            sk.set(0, 1)
            vzero(sm)
            sm.set(0, 1)
            for bj in range(nb):
                if bj == bi:
                    continue
                other = pts[bj * k : (bj + 1) * k]
                _build_modulus(mj, [a for a, _ in other])
                _mul_mod_xk_inplace(sk, mj, len(other) + 1, k)
                _mul_mod_mi_inplace(sm, kb, mj, len(other) + 1, mi, ws)
            vzero(ni)
            for a, b in block:
                cj = _horner_view(sm.sub(0, kb), a, q)
                dj = _horner_view(g, a, q) if s else 0
                denom = 1
                for a2, _ in block:
                    if a2 != a:
                        denom = denom * (a - a2) % q
                w = (b - dj) * ring.inv(pow(a, s, q) * cj % q) % q
                w = w * ring.inv(denom) % q
                # synthetic division of mi by (x - a), accumulating w * Q
                qcur = mi.get(kb)
                for d in range(kb - 1, -1, -1):
                    ni.set(d, ni.get(d) + w * qcur)
                    qcur = (mi.get(d) + a * qcur) % q
            kit.low_acc(out_k, ni.sub(0, kb).padded(k), sk, ws)


def _build_modulus(dst: PolyView, roots):
    """dst[0, len(roots)+1) = prod (x - a)."""
    q = dst.arena.q
    dst.set(0, 1)
    for idx, a in enumerate(roots):
        dst.set(idx + 1, dst.get(idx))
        for d in range(idx, 0, -1):
            dst.set(d, dst.get(d - 1) - a * dst.get(d))
        dst.set(0, -a * dst.get(0))


def _mul_mod_xk_inplace(v: PolyView, u: PolyView, ulen: int, t: int):
    """v <- (v * u) mod x^t in place (descending indices)."""
    for d in range(t - 1, -1, -1):
        acc = 0
        for a in range(min(d + 1, ulen)):
            acc += u.get(a) * v.get(d - a)
        v.set(d, acc)


def _mul_mod_mi_inplace(sm: PolyView, kb: int, mj: PolyView, mjlen: int, mi: PolyView, ws: PolyView):
    """sm <- (sm * mj) mod mi where mi is monic of size kb+1."""
    plen = kb + mjlen - 1
    prod = ws.sub(0, plen)
    vzero(prod)
    for i in range(kb):
        c = sm.get(i)
        if c:
            for j in range(mjlen):
                prod.set(i + j, prod.get(i + j) + c * mj.get(j))
    for e in range(plen - 1, kb - 1, -1):
        c = prod.get(e)
        if c:
            for d in range(kb):
                prod.set(e - kb + d, prod.get(e - kb + d) - c * mi.get(d))
    vcopy(sm.sub(0, kb), prod, kb)


def interp_cs(pairs, out: PolyView, kit: MulKit = _KIT):
    """The unique interpolant through the pairs, grown prefix by prefix.

    Points must be pairwise distinct and nonzero (later stages divide by
    a_i ** s).  Small tails fall back to direct Lagrange combination over
    at most a dozen points, held in Python locals (declared budget).
    """
    ring = _ring(out)
    q = ring.q
    pts = [(int(a) % q, int(b) % q) for a, b in pairs]
    P = len(pts)
    if len(out) != P:
        raise SizeContract("output size must equal the number of pairs")
    if len(set(a for a, _ in pts)) != P:
        raise DuplicatePoint("interpolation points must be distinct")
    if any(a == 0 for a, _ in pts):
        raise ZeroPointWithShift("interp_cs requires nonzero points")
    if P == 0:
        return
    with out.arena.call():
        done = 0
        while done < P:
            rem = P - done
            k = (rem - 4) // 9
            if k < 1:
                _interp_small_tail(ring, pts, out, done)
                return
            partial_interp(
                out.sub(0, done),
                pts[done:],
                k,
                out.sub(done, done + k),
                out.sub(done + k, P),
                kit,
            )
            done += k


def _interp_small_tail(ring: Zq, pts, out: PolyView, done: int):
    """Direct Lagrange for the last <= 12 coefficients (local block)."""
    q = ring.q
    rem = len(pts) - done
    tail = pts[done:]
    coeffs = [0] * rem
    for a, b in tail:
        da = _horner_view(out.sub(0, done), a, q) if done else 0
        w = (b - da) * ring.inv(pow(a, done, q)) % q
        basis = [1]
        denom = 1
        for a2, _ in tail:
            if a2 == a:
                continue
            basis = [(-a2 * basis[0]) % q] + [
                (basis[d - 1] - a2 * basis[d]) % q for d in range(1, len(basis))
            ] + [basis[-1]]
            denom = denom * (a - a2) % q
        w = w * ring.inv(denom) % q
        for d in range(rem):
            coeffs[d] = (coeffs[d] + w * basis[d]) % q
    for d in range(rem):
        out.set(done + d, coeffs[d])
