"""Linear-space reference algorithms and the multiplication kit.

The list-based functions here are the correctness oracles: schoolbook
products, long division, subproduct-tree evaluation and interpolation,
Newton series inversion.  They trade space for simplicity and are what the
in-place algorithms are tested against.

MulKit provides the workspace-disciplined building blocks (full, short and
middle products on arena views) that the constant-space reductions call.
Every kit routine receives an explicit scratch view and never uses more
than c * size registers of it, with c = 2 declared; exceeding the budget
raises, so the bound is enforced structurally rather than by trust.
"""

from __future__ import annotations

from .coeff_ring import RootOfUnity, Zq
from .errors import (
    BadLength,
    BadOrder,
    DuplicatePoint,
    NonUnitConstant,
    NonUnitLeading,
    OutOfRange,
    SizeOrder,
)
from .reg_arena import PolyView, _slc, vadd, vcopy, vzero


# ---------------------------------------------------------------------------
# plain-list oracles
# ---------------------------------------------------------------------------


def schoolbook_mul(ring: Zq, f: list[int], g: list[int]) -> list[int]:
    """Full product by direct convolution, O(len(f)*len(g))."""
    if not f or not g:
        return []
    q = ring.q
    out = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                out[i + j] = (out[i + j] + fi * gj) % q
    return out


def horner_eval(ring: Zq, f: list[int], a: int) -> int:
    q = ring.q
    acc = 0
    for c in reversed(f):
        acc = (acc * a + c) % q
    return acc


def bit_reverse(i: int, k: int) -> int:
    if not 0 <= i < (1 << k):
        raise OutOfRange(f"{i} is not a {k}-bit index")
    out = 0
    for _ in range(k):
        out = (out << 1) | (i & 1)
        i >>= 1
    return out


def partial_product(ring: Zq, f: list[int], g: list[int], mode: str) -> list[int]:
    """Low, upper or middle slice of the full product.

    low: (f*g) mod x^len(f); upp: (f*g) quo x^len(f);
    mid: central len(f)-len(g)+1 coefficients, requires len(f) >= len(g).
    """
    m, n = len(f), len(g)
    h = schoolbook_mul(ring, f, g)
    if mode == "low":
        out = h[:m]
        return out + [0] * (m - len(out))
    if mode == "upp":
        out = h[m:]
        return out + [0] * (n - 1 - len(out))
    if mode == "mid":
        if m < n:
            raise SizeOrder(f"middle product needs len(f) >= len(g), got {m} < {n}")
        out = h[n - 1 : m]
        return out + [0] * (m - n + 1 - len(out))
    raise BadLength(f"unknown mode {mode!r}")


def series_inv(ring: Zq, f: list[int], n: int | None = None) -> list[int]:
    """Inverse of f as a power series, truncated at precision n (Newton)."""
    if n is None:
        n = len(f)
    if not f or f[0] % ring.q == 0:
        raise NonUnitConstant("constant coefficient is not invertible")
    q = ring.q
    g = [ring.inv(f[0])]
    k = 1
    while k < n:
        k2 = min(2 * k, n)
        t = schoolbook_mul(ring, f[:k2], g)[:k2]
        t += [0] * (k2 - len(t))
        t = [(-c) % q for c in t]
        t[0] = (t[0] + 2) % q
        g = schoolbook_mul(ring, g, t)[:k2]
        g += [0] * (k2 - len(g))
        k = k2
    return g[:n]


def divrem(ring: Zq, f: list[int], g: list[int]) -> tuple[list[int], list[int]]:
    """Quotient and remainder of f by g; r is zero-padded to len(g)-1."""
    n = len(g)
    if n == 0 or g[-1] % ring.q == 0:
        raise NonUnitLeading("leading coefficient of divisor is not invertible")
    q = ring.q
    m = max(0, len(f) - n + 1)
    quo = [0] * m
    rem = [c % q for c in f]
    lead_inv = ring.inv(g[-1])
    for i in range(m - 1, -1, -1):
        c = rem[i + n - 1] * lead_inv % q
        quo[i] = c
        if c:
            for j in range(n):
                rem[i + j] = (rem[i + j] - c * g[j]) % q
    r = rem[: n - 1]
    return quo, r + [0] * (n - 1 - len(r))


def _prod_tree(ring: Zq, pts: list[int]) -> list[int]:
    if len(pts) == 1:
        return [(-pts[0]) % ring.q, 1]
    mid = len(pts) // 2
    return schoolbook_mul(ring, _prod_tree(ring, pts[:mid]), _prod_tree(ring, pts[mid:]))


def mp_eval_tree(ring: Zq, f: list[int], points: list[int]) -> list[int]:
    """Multipoint evaluation via recursive remaindering."""
    if not points:
        return []
    if len(points) <= 4 or len(f) <= 2:
        return [horner_eval(ring, f, a) for a in points]
    mid = len(points) // 2
    left, right = points[:mid], points[mid:]
    _, rl = divrem(ring, f, _prod_tree(ring, left))
    _, rr = divrem(ring, f, _prod_tree(ring, right))
    return mp_eval_tree(ring, rl or [0], left) + mp_eval_tree(ring, rr or [0], right)


def interp_tree(ring: Zq, points: list[int], values: list[int]) -> list[int]:
    """Unique size-n interpolant through (points[i], values[i])."""
    n = len(points)
    if len(values) != n:
        raise BadLength("points and values differ in length")
    if len(set(p % ring.q for p in points)) != n:
        raise DuplicatePoint("interpolation points must be pairwise distinct")
    if n == 0:
        return []
    q = ring.q
    m = _prod_tree(ring, points)
    md = [m[i] * i % q for i in range(1, len(m))]
    denom = mp_eval_tree(ring, md, points)
    weights = [v * ring.inv(d) % q for v, d in zip(values, denom)]

    def rec(lo: int, hi: int) -> list[int]:
        if hi - lo == 1:
            return [weights[lo]]
        mid = (lo + hi) // 2
        left = rec(lo, mid)
        right = rec(mid, hi)
        ml = _prod_tree(ring, points[lo:mid])
        mr = _prod_tree(ring, points[mid:hi])
        lo_part = schoolbook_mul(ring, left, mr)
        hi_part = schoolbook_mul(ring, right, ml)
        out = [0] * (hi - lo)
        for i, c in enumerate(lo_part):
            out[i] = (out[i] + c) % q
        for i, c in enumerate(hi_part):
            out[i] = (out[i] + c) % q
        return out

    return rec(0, n)


def karatsuba_mul(ring: Zq, f: list[int], g: list[int], kit: "MulKit | None" = None) -> list[int]:
    """Full product through the kit's workspace-disciplined Karatsuba."""
    if not f or not g:
        return []
    from .reg_arena import INOUT, RW_RW, build_arena

    if kit is None:
        kit = MulKit()
    s = max(len(f), len(g))
    out_len = len(f) + len(g) - 1
    arena, (fv, gv, dv, wv) = build_arena(
        ring,
        RW_RW,
        (f, INOUT),
        (g, INOUT),
        ([0] * (2 * s - 1), INOUT),
        ([0] * (kit.c * s + 4), INOUT),
    )
    kit.full_into(dv, fv.padded(s), gv.padded(s), wv)
    return dv.tolist()[:out_len]


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def poly_to_text(q: int, coeffs: list[int]) -> str:
    return f"{q};{','.join(str(c) for c in coeffs)}"


def poly_from_text(text: str) -> tuple[int, list[int]]:
    head, _, body = text.strip().partition(";")
    q = int(head)
    coeffs = [int(t) for t in body.split(",") if t.strip() != ""]
    return q, coeffs


# ---------------------------------------------------------------------------
# in-place NTT on a view (decimation in frequency, bit-reversed order)
# ---------------------------------------------------------------------------


def ntt(view: PolyView, root: RootOfUnity, direction: str = "fwd"):
    """Replace view by its DFT at bit-reversed powers of root, in place.

    No permutation pass: forward output slot j holds f(omega**[j]_k) where
    [j]_k is the k-bit reversal of j.  "inv" undoes "fwd" exactly.
    Scalar budget: 4 locals per butterfly.
    """
    n = len(view)
    if n & (n - 1):
        raise BadLength(f"length {n} is not a power of two")
    if root.order != n:
        raise BadOrder(f"root order {root.order} != length {n}")
    if view.rlo != 0 or view.rhi != n:
        raise BadLength("ntt requires a fully backed view")
    if n <= 1:
        return
    view._writable_or_raise(0, n)
    arena = view.arena
    q = arena.q
    regs = arena.regs
    off, d = view.off, view.dir
    if direction == "fwd":
        w = root.omega
        size = n
        while size > 1:
            half = size >> 1
            wbase = pow(w, n // size, q)
            for start in range(0, n, size):
                wcur = 1
                for i in range(start, start + half):
                    ja = off + d * i
                    jb = off + d * (i + half)
                    a = regs[ja]
                    b = regs[jb]
                    regs[ja] = (a + b) % q
                    regs[jb] = (a - b) * wcur % q
                    wcur = wcur * wbase % q
            size = half
    elif direction == "inv":
        winv = pow(root.omega, q - 2, q)
        size = 2
        while size <= n:
            half = size >> 1
            wbase = pow(winv, n // size, q)
            for start in range(0, n, size):
                wcur = 1
                for i in range(start, start + half):
                    ja = off + d * i
                    jb = off + d * (i + half)
                    a = regs[ja]
                    b = regs[jb] * wcur % q
                    regs[ja] = (a + b) % q
                    regs[jb] = (a - b) % q
                    wcur = wcur * wbase % q
            size <<= 1
        # the halving from each stage is deferred to one final pass
        ninv = pow(n, q - 2, q)
        s = _slc(off, d, 0, n)
        regs[s] = [x * ninv % q for x in regs[s]]
    else:
        raise BadLength(f"unknown direction {direction!r}")


# ---------------------------------------------------------------------------
# multiplication kit on views
# ---------------------------------------------------------------------------


class MulKit:
    """Workspace-disciplined products on views.

    c is the declared scratch factor: every routine works within c * size
    scratch registers (size = logical operand size).  mstar_flag records
    that Karatsuba is not quasi-linear, so M*(n) = O(M(n)).
    """

    c = 2
    base = 32
    mstar_flag = False

    # -- full product --------------------------------------------------------

    def full_into(self, dst: PolyView, f: PolyView, g: PolyView, ws: PolyView):
        """dst[0, 2s-1) = f * g for equal logical sizes s; overwrites dst."""
        s = len(f)
        if len(g) != s:
            raise BadLength("full_into needs equal logical sizes")
        if len(dst) < 2 * s - 1:
            raise BadLength("full_into destination too short")
        if s <= self.base:
            self._schoolbook_into(dst, f, g, 2 * s - 1)
            return
        m = (s + 1) // 2
        f0, f1 = f.sub(0, m), f.sub(m, s)
        g0, g1 = g.sub(0, m), g.sub(m, s)
        tmp_f = ws.sub(0, m)
        tmp_g = ws.sub(m, 2 * m)
        vcopy(tmp_f, f0, m)
        vadd(tmp_f, f1)
        vcopy(tmp_g, g0, m)
        vadd(tmp_g, g1)
        # middle product block first, then fix up with f0*g0 and f1*g1
        self.full_into(dst.sub(m, 3 * m - 1), tmp_f, tmp_g, ws.sub(2 * m, len(ws)))
        p = ws.sub(0, 2 * m - 1)
        self.full_into(p, f0, g0, ws.sub(2 * m - 1, len(ws)))
        vcopy(dst.sub(0, m), p, m)
        vadd(dst.sub(m, 2 * m - 1), p.sub(m, 2 * m - 1))
        vadd(dst.sub(m, 3 * m - 1), p, -1)
        t = s - m
        p2 = ws.sub(0, 2 * t - 1)
        self.full_into(p2, f1, g1, ws.sub(2 * t - 1, len(ws)))
        vadd(dst.sub(m, 3 * m - 1), p2, -1)
        vadd(dst.sub(2 * m, min(3 * m - 1, 2 * s - 1)), p2)
        if 3 * m - 1 < 2 * s - 1:
            vcopy(dst.sub(3 * m - 1, 2 * s - 1), p2.sub(m - 1, 2 * t - 1))

    def _schoolbook_into(self, dst: PolyView, f: PolyView, g: PolyView, out_len: int):
        vzero(dst, out_len)
        self._schoolbook_acc(dst, f, g, out_len, 1)

    def _schoolbook_acc(self, dst: PolyView, f: PolyView, g: PolyView, out_len: int, sign: int):
        arena = dst.arena
        q = arena.q
        dst._writable_or_raise(0, min(out_len, dst.rhi))
        dregs = arena.regs
        doff, dd = dst.off, dst.dir
        fregs, foff, fd = f.arena.regs, f.off, f.dir
        gregs, goff, gd = g.arena.regs, g.off, g.dir
        prods = 0
        ja = g.rlo
        for i in range(f.rlo, f.rhi):
            fi = fregs[foff + fd * i]
            if not fi:
                continue
            if sign < 0:
                fi = q - fi
            jb = min(g.rhi, out_len - i)
            if jb <= ja:
                continue
            ds = _slc(doff, dd, i + ja, i + jb)
            ss = _slc(goff, gd, ja, jb)
            dregs[ds] = [(x + fi * y) % q for x, y in zip(dregs[ds], gregs[ss])]
            prods += jb - ja
        arena.metrics.base_products += prods

    # -- short (lower) product -----------------------------------------------

    def low_acc(self, dst: PolyView, f: PolyView, g: PolyView, ws: PolyView, sign: int = 1):
        """dst += sign * (f * g mod x^len(dst))."""
        t = len(dst)
        if t == 0:
            return
        f = f.sub(0, min(len(f), t))
        g = g.sub(0, min(len(g), t))
        if f.rhi <= f.rlo or g.rhi <= g.rlo:
            return
        if t <= self.base or min(f.rhi - f.rlo, g.rhi - g.rlo) <= 2:
            self._schoolbook_acc(dst, f, g, t, sign)
            return
        m = (t + 1) // 2
        p = ws.sub(0, 2 * m - 1)
        self.full_into(
            p,
            f.sub(0, min(m, len(f))).padded(m),
            g.sub(0, min(m, len(g))).padded(m),
            ws.sub(2 * m - 1, len(ws)),
        )
        vadd(dst, p, sign, length=min(t, 2 * m - 1))
        if len(f) > m:
            self.low_acc(dst.sub(m, t), f.sub(m, len(f)), g, ws, sign)
        if len(g) > m:
            self.low_acc(dst.sub(m, t), f.sub(0, min(m, len(f))), g.sub(m, len(g)), ws, sign)

    # -- balanced middle product ----------------------------------------------

    def mid_acc(self, dst: PolyView, fwin: PolyView, g: PolyView, ws: PolyView, sign: int = 1):
        """dst += sign * Mid(fwin, g): fwin has 2r-1 slots, g and dst have r.

        Karatsuba-style three half-size middle products; inputs are only
        read, so padded windows are fine.
        """
        r = len(dst)
        if r == 0:
            return
        if len(fwin) != 2 * r - 1 or len(g) != r:
            raise BadLength("mid_acc expects sizes (2r-1, r, r)")
        if fwin.rhi <= fwin.rlo or g.rhi <= g.rlo:
            return
        if r <= self.base:
            self._mid_naive(dst, fwin, g, sign)
            return
        if r % 2:
            # last output row and the g[r-1] rank-one row, then an even core
            self._mid_row(dst, fwin, g, r - 1, sign)
            top = g.get(r - 1)
            if top:
                self._axpy_row(dst, fwin, top, r - 1, sign)
            self.mid_acc(dst.sub(0, r - 1), fwin.sub(1, 2 * r - 2), g.sub(0, r - 1), ws, sign)
            return
        h = r // 2
        a1 = fwin.sub(h, 3 * h - 1)
        tmp_b = ws.sub(0, h)
        vcopy(tmp_b, g.sub(0, h), h)
        vadd(tmp_b, g.sub(h, 2 * h))
        dst0, dst1 = dst.sub(0, h), dst.sub(h, r)
        vadd(dst1, dst0, -1)
        self.mid_acc(dst0, a1, tmp_b, ws.sub(h, len(ws)), sign)
        vadd(dst1, dst0)
        tmp_a = ws.sub(0, 2 * h - 1)
        vcopy(tmp_a, fwin.sub(0, 2 * h - 1), 2 * h - 1)
        vadd(tmp_a, a1, -1)
        self.mid_acc(dst0, tmp_a, g.sub(h, 2 * h), ws.sub(2 * h - 1, len(ws)), sign)
        vcopy(tmp_a, fwin.sub(2 * h, 4 * h - 1), 2 * h - 1)
        vadd(tmp_a, a1, -1)
        self.mid_acc(dst1, tmp_a, g.sub(0, h), ws.sub(2 * h - 1, len(ws)), sign)

    def _mid_naive(self, dst: PolyView, fwin: PolyView, g: PolyView, sign: int):
        r = len(dst)
        arena = dst.arena
        q = arena.q
        dst._writable_or_raise(0, r)
        dregs = arena.regs
        doff, dd = dst.off, dst.dir
        fregs, foff, fd = fwin.arena.regs, fwin.off, fwin.dir
        flo, fhi = fwin.rlo, fwin.rhi
        gregs, goff, gd = g.arena.regs, g.off, g.dir
        prods = 0
        for j in range(g.rlo, g.rhi):
            gj = gregs[goff + gd * j]
            if not gj:
                continue
            if sign < 0:
                gj = q - gj
            # i = r-1+d-j must land in fwin's real zone
            dlo = max(0, flo + j - (r - 1))
            dhi = min(r, fhi + j - (r - 1))
            if dhi <= dlo:
                continue
            ds = _slc(doff, dd, dlo, dhi)
            fs = _slc(foff + fd * (r - 1 - j), fd, dlo, dhi)
            dregs[ds] = [(x + gj * y) % q for x, y in zip(dregs[ds], fregs[fs])]
            prods += dhi - dlo
        arena.metrics.base_products += prods

    def _mid_row(self, dst: PolyView, fwin: PolyView, g: PolyView, d: int, sign: int):
        """dst[d] += sign * sum_j fwin[r-1+d-j] * g[j] (single output row)."""
        r = len(dst)
        acc = 0
        for j in range(g.rlo, g.rhi):
            acc += fwin.get(r - 1 + d - j) * g.get(j)
        dst.arena.metrics.base_products += max(0, g.rhi - g.rlo)
        dst.set(d, dst.get(d) + (acc if sign > 0 else -acc))

    def _axpy_row(self, dst: PolyView, fwin: PolyView, scalar: int, count: int, sign: int):
        """dst[d] += sign * scalar * fwin[d] for d < count."""
        q = dst.arena.q
        if sign < 0:
            scalar = (q - scalar) % q
        lo = max(0, fwin.rlo)
        hi = min(count, fwin.rhi)
        if lo >= hi:
            return
        dst._writable_or_raise(lo, hi)
        dregs = dst.arena.regs
        doff, dd = dst.off, dst.dir
        fregs, foff, fd = fwin.arena.regs, fwin.off, fwin.dir
        for d in range(lo, hi):
            k = doff + dd * d
            dregs[k] = (dregs[k] + scalar * fregs[foff + fd * d]) % q
        dst.arena.metrics.base_products += hi - lo

    # -- derived: unbalanced middle and product slices -------------------------

    def mid_unbalanced_acc(self, dst: PolyView, fchunk: PolyView, gpref: PolyView, ws: PolyView, sign: int = 1):
        """dst += sign * [fchunk * gpref]_{k-1}^{k+l-1}, sizes (k+l-1, k) -> l."""
        ell = len(dst)
        k = len(gpref)
        if ell == 0 or k == 0:
            return
        if len(fchunk) != k + ell - 1:
            raise BadLength("mid_unbalanced_acc expects len(fchunk) = k + l - 1")
        j = 0
        while j * ell < k:
            gj = gpref.sub(j * ell, min((j + 1) * ell, k)).padded(ell)
            u = k - 1 - j * ell
            win = fchunk.window(u - ell + 1, u + ell)
            self.mid_acc(dst, win, gj, ws, sign)
            j += 1

    def slice_acc(self, dst: PolyView, f: PolyView, g: PolyView, s: int, ws: PolyView, sign: int = 1):
        """dst += sign * [f * g]_s^{s+len(dst)} in blocks of g."""
        r = len(dst)
        if r == 0 or len(f) == 0 or len(g) == 0:
            return
        nb = (len(g) + r - 1) // r
        for j in range(nb):
            gj = g.sub(j * r, min((j + 1) * r, len(g))).padded(r)
            if gj.rhi <= gj.rlo:
                continue
            u = s - j * r
            win = f.window(u - r + 1, u + r)
            if win.rhi <= win.rlo:
                continue
            self.mid_acc(dst, win, gj, ws, sign)
