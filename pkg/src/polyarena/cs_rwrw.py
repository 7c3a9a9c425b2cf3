"""Cumulative and in-place algorithms in the rw/rw permission model.

Operands may be scrawled on while an operation runs, but every view other
than the designated accumulator is restored bit-exactly before it returns.
The workhorse is the pre/post-addition trick: to distribute one product to
two places, pre-subtract the first target from the second, accumulate into
the first, then post-add it to the second.

All mutating recursions operate on fully backed (never fake-padded) views;
product slices are decomposed by a clipping quadtree into full products of
real subwindows, so the restore reasoning stays local.

Declared scalar budgets: plain statements hold at most four locals; in
addition two fixed-size kernels run on Python locals, a balanced product
kernel of width <= _KERNEL coefficients and twiddle blocks of width _TW.
Neither grows with the input and neither touches arena registers.
"""

from __future__ import annotations

from .coeff_ring import RootOfUnity, Zq
from .dense_ref import ntt
from .errors import (
    BadParams,
    BadSlice,
    LambdaZero,
    NonMonicModulus,
    NonUnit,
    NonUnitLeading,
    SizeContract,
)
from .reg_arena import PolyView, _slc, vadd, vcopy, vneg, vscale, vzero

_BASE = 16
_KERNEL = 32  # balanced products at or below this size run on Python locals


def _ring(view: PolyView) -> Zq:
    return view.arena.ring


# ---------------------------------------------------------------------------
# cumulative full products
# ---------------------------------------------------------------------------


def cumulative_karatsuba(f: PolyView, g: PolyView, h: PolyView, sign: int = 1):
    """h += sign * f * g; f and g are touched but restored."""
    if len(h) != len(f) + len(g) - 1:
        raise SizeContract("need len(h) = len(f) + len(g) - 1")
    with h.arena.call():
        _cum_full(f, g, h, sign)


def _cum_full(f: PolyView, g: PolyView, h: PolyView, sign: int):
    """h[0, a+b-1) += sign * f * g for arbitrary real views; iterative on
    the ragged tail so only balanced recursions grow the stack."""
    while True:
        a, b = len(f), len(g)
        if a == 0 or b == 0:
            return
        if a < b:
            f, g = g, f
            a, b = b, a
        if a == b:
            _cum_kara(f, g, h, sign)
            return
        full = a // b
        for j in range(full):
            _cum_kara(f.sub(j * b, (j + 1) * b), g, h.sub(j * b, (j + 1) * b + b - 1), sign)
        rest = a - full * b
        if rest == 0:
            return
        f = f.sub(full * b, a)
        h = h.sub(full * b, full * b + rest + b - 1)
        # swap happens on the next round; sizes strictly shrink


def _cum_kara(f: PolyView, g: PolyView, h: PolyView, sign: int):
    """Balanced cumulative Karatsuba: three half-size recursive calls, the
    products distributed by pre/post additions on h; f and g restored."""
    n = len(f)
    if n == 0:
        return
    arena = h.arena
    if n == 1:
        v = f.get(0) * g.get(0)
        h.set(0, h.get(0) + (v if sign > 0 else -v))
        arena.metrics.base_products += 1
        return
    if n <= _KERNEL:
        # constant-size kernel on Python locals (bounded by 3 * _KERNEL
        # scalars); the recursion shape and product count are unchanged
        regs = arena.regs
        fs = _slc(f.off, f.dir, 0, n)
        gs = _slc(g.off, g.dir, 0, n)
        vals, cnt = _kara_vals(f.arena.regs[fs], g.arena.regs[gs])
        h._writable_or_raise(0, 2 * n - 1)
        hs = _slc(h.off, h.dir, 0, 2 * n - 1)
        q = arena.q
        if sign > 0:
            regs[hs] = [(x + v) % q for x, v in zip(regs[hs], vals)]
        else:
            regs[hs] = [(x - v) % q for x, v in zip(regs[hs], vals)]
        arena.metrics.base_products += cnt
        return
    m = (n + 1) // 2
    L = 2 * n - 1
    with arena.call():
        vadd(h.sub(m, 2 * m), h.sub(0, m), -1)
        vadd(h.sub(2 * m, min(3 * m, L)), h.sub(m, 2 * m), -1)
        if 3 * m < L:
            vadd(h.sub(3 * m, L), h.sub(2 * m, L - m), -1)
        _cum_kara(f.sub(0, m), g.sub(0, m), h.sub(0, 2 * m - 1), sign)
        t = n - m
        _cum_kara(f.sub(m, n), g.sub(m, n), h.sub(m, m + 2 * t - 1), sign)
        if 3 * m < L:
            vadd(h.sub(3 * m, L), h.sub(2 * m, L - m), 1)
        vadd(h.sub(2 * m, min(3 * m, L)), h.sub(m, 2 * m), 1)
        vadd(h.sub(m, 2 * m), h.sub(0, m), 1)
        vadd(f.sub(0, t), f.sub(m, n), -1)
        vadd(g.sub(0, t), g.sub(m, n), -1)
        _cum_kara(f.sub(0, m), g.sub(0, m), h.sub(m, 3 * m - 1), -sign)
        vadd(f.sub(0, t), f.sub(m, n), 1)
        vadd(g.sub(0, t), g.sub(m, n), 1)


def _kara_vals(fa: list[int], gb: list[int]) -> tuple[list[int], int]:
    """Karatsuba on small coefficient lists; returns (product, #mults).

    Same split as the register recursion, so the multiplication count is
    identical whether or not a node is handled by this kernel.  The sizes
    1, 2 and 4 are unrolled.
    """
    n = len(fa)
    if n == 2:
        a0, a1 = fa
        b0, b1 = gb
        p0 = a0 * b0
        p2 = a1 * b1
        return [p0, p0 + p2 - (a0 - a1) * (b0 - b1), p2], 3
    if n == 1:
        return [fa[0] * gb[0]], 1
    if n == 4:
        a0, a1, a2, a3 = fa
        b0, b1, b2, b3 = gb
        p0 = a0 * b0
        p2 = a1 * b1
        l0, l1, l2 = p0, p0 + p2 - (a0 - a1) * (b0 - b1), p2
        r0 = a2 * b2
        r2 = a3 * b3
        h0, h1, h2 = r0, r0 + r2 - (a2 - a3) * (b2 - b3), r2
        c0, c1 = a0 - a2, a1 - a3
        d0, d1 = b0 - b2, b1 - b3
        m0 = c0 * d0
        m2 = c1 * d1
        m1 = m0 + m2 - (c0 - c1) * (d0 - d1)
        return [l0, l1, l2 + l0 - m0 + h0, l1 - m1 + h1, l2 - m2 + h2 + h0, h1, h2], 9
    m = (n + 1) // 2
    t = n - m
    lo, c1 = _kara_vals(fa[:m], gb[:m])
    hi, c2 = _kara_vals(fa[m:], gb[m:])
    fd = [fa[i] - (fa[m + i] if i < t else 0) for i in range(m)]
    gd = [gb[i] - (gb[m + i] if i < t else 0) for i in range(m)]
    mid, c3 = _kara_vals(fd, gd)
    out = [0] * (2 * n - 1)
    for i, v in enumerate(lo):
        out[i] += v
        out[m + i] += v - mid[i]
    for i, v in enumerate(hi):
        out[2 * m + i] += v
        out[m + i] += v
    return out, c1 + c2 + c3


def _naive_slice(f: PolyView, g: PolyView, h: PolyView, s: int, sign: int):
    """h[d] += sign * (f*g)[s+d], direct loops; operands only read."""
    arena = h.arena
    q = arena.q
    r = len(h)
    a = len(f)
    h._writable_or_raise(0, r)
    dregs = arena.regs
    doff, dd = h.off, h.dir
    fregs, foff, fd = f.arena.regs, f.off, f.dir
    gregs, goff, gd = g.arena.regs, g.off, g.dir
    prods = 0
    for j in range(len(g)):
        c = gregs[goff + gd * j]
        if not c:
            continue
        if sign < 0:
            c = q - c
        dlo = max(0, j - s)
        dhi = min(r, j - s + a)
        if dhi <= dlo:
            continue
        ds = _slc(doff, dd, dlo, dhi)
        fs = _slc(foff + fd * (s - j), fd, dlo, dhi)
        dregs[ds] = [(x + c * y) % q for x, y in zip(dregs[ds], fregs[fs])]
        prods += dhi - dlo
    arena.metrics.base_products += prods


# ---------------------------------------------------------------------------
# cumulative slices (quadtree decomposition into full products)
# ---------------------------------------------------------------------------


def cumulative_slice(f: PolyView, g: PolyView, h: PolyView, s: int, sign: int = 1):
    """h += sign * [f * g]_s^{s + len(h)}."""
    m, n, r = len(f), len(g), len(h)
    if not 0 < r < m + n or not 0 <= s < m + n - r:
        raise BadSlice(f"slice [{s},{s + r}) of a size-{m + n - 1} product")
    with h.arena.call():
        _cum_slice(f, g, h, s, sign)


def _cum_slice(f: PolyView, g: PolyView, h: PolyView, s: int, sign: int):
    r = len(h)
    if r <= 0:
        return
    if s < 0:
        cut = min(-s, r)
        h = h.sub(cut, r)
        r -= cut
        s = 0
        if r <= 0:
            return
    a, b = len(f), len(g)
    if a == 0 or b == 0:
        return
    ilo = max(0, s - b + 1)
    ihi = min(a, s + r)
    if ilo >= ihi:
        return
    if ilo or ihi < a:
        f = f.sub(ilo, ihi)
        s -= ilo
        a = ihi - ilo
    jlo = max(0, s - a + 1)
    jhi = min(b, s + r)
    if jlo >= jhi:
        return
    if jlo or jhi < b:
        g = g.sub(jlo, jhi)
        s -= jlo
        b = jhi - jlo
    top = a + b - 1 - s
    if r > top:
        if top <= 0:
            return
        r = top
        h = h.sub(0, r)
    if s == 0 and r == a + b - 1:
        _cum_full(f, g, h, sign)
        return
    if min(a, b) <= 2 * _BASE or r <= 2:
        _naive_slice(f, g, h, s, sign)
        return
    sigma = (min(a, b) + 1) // 2
    ca = min(sigma, a)
    cb = min(sigma, b)
    with h.arena.call():
        _cum_slice(f.sub(0, ca), g.sub(0, cb), h, s, sign)
        if ca < a:
            _cum_slice(f.sub(ca, a), g.sub(0, cb), h, s - ca, sign)
        if cb < b:
            _cum_slice(f.sub(0, ca), g.sub(cb, b), h, s - cb, sign)
        if ca < a and cb < b:
            _cum_slice(f.sub(ca, a), g.sub(cb, b), h, s - ca - cb, sign)


# ---------------------------------------------------------------------------
# cumulative lower product and convolutions
# ---------------------------------------------------------------------------


def cumulative_lower(f: PolyView, g: PolyView, h: PolyView, sign: int = 1):
    """h += sign * (f * g mod x^n), all three of size n; f, g restored.

    One full product per round (on g0 - g1, then f0 * g1 distributed by a
    pre/post pair), then a tail call on the top halves, written as a loop.
    """
    if not len(f) == len(g) == len(h):
        raise SizeContract("need three size-n operands")
    with h.arena.call():
        f0, g0, h0 = f, g, h
        while True:
            n = len(f0)
            if n == 0:
                return
            if n == 1:
                v = f0.get(0) * g0.get(0)
                h0.set(0, h0.get(0) + (v if sign > 0 else -v))
                h0.arena.metrics.base_products += 1
                return
            m = (n + 1) // 2
            t = n - m
            vadd(g0.sub(0, t), g0.sub(m, n), -1)
            _cum_full(f0.sub(0, m), g0.sub(0, m), h0.sub(0, 2 * m - 1), sign)
            vadd(g0.sub(0, t), g0.sub(m, n), 1)
            vadd(h0.sub(m, n), h0.sub(0, t), -1)
            _cum_full(f0.sub(0, m), g0.sub(m, n), h0.sub(0, n - 1), sign)
            vadd(h0.sub(m, n), h0.sub(0, t), 1)
            f0 = f0.sub(m, n)
            g0 = g0.sub(0, t)
            h0 = h0.sub(m, n)


def cumulative_convolution(f: PolyView, g: PolyView, h: PolyView, lam: int):
    """h += f * g mod (x^n - lam); lam must be invertible."""
    n = len(h)
    if not len(f) == len(g) == n:
        raise SizeContract("need three size-n operands")
    ring = _ring(h)
    lam %= ring.q
    if lam == 0:
        raise LambdaZero("use the lower product for lambda = 0")
    if n == 0:
        return
    with h.arena.call():
        m = (n + 1) // 2
        s = n % 2
        lam_inv = ring.inv(lam)
        f0, f1 = f.sub(0, m), f.sub(m, n)
        g0, g1 = g.sub(0, m), g.sub(m, n)
        _cum_full(f0, g0, h.sub(0, 2 * m - 1), 1)
        vscale(h, lam_inv)
        if n - m:
            _cum_full(f1, g1, h.sub(s, s + 2 * (n - m) - 1), 1)
        vscale(h.sub(m, n), lam)
        for u, v in ((f0, g1), (f1, g0)):
            if len(u) and len(v):
                _cum_slice(u, v, h.sub(m, n), 0, 1)
                if m >= 2:
                    _cum_slice(u, v, h.sub(0, m - 1), n - m, 1)
        vscale(h.sub(0, m), lam)


# ---------------------------------------------------------------------------
# partial Fourier transforms and the cumulative FFT product
# ---------------------------------------------------------------------------


def _bitrev(i: int, k: int) -> int:
    out = 0
    for _ in range(k):
        out = (out << 1) | (i & 1)
        i >>= 1
    return out


def partial_ft(f: PolyView, k: int, ell: int, root: RootOfUnity, direction: str = "fwd"):
    """Replace the first 2^ell slots of f by f(omega^{[k*2^ell + i]_p}).

    Twist the prefix by powers of omega^{[k*2^ell]_p}, fold the twisted
    tail onto it modulo x^{2^ell} - 1, then run a size-2^ell in-place FFT.
    "inv" undoes the three steps in reverse order.
    """
    n = len(f)
    q = f.arena.q
    w = root.omega
    order = root.order
    p = order.bit_length() - 1
    if (1 << p) != order:
        raise BadParams("root order must be a power of two")
    size = 1 << ell
    if size > n or (k + 1) * size > order:
        raise BadParams(f"need 2^ell <= {n} and (k+1)*2^ell <= {order}")
    theta = pow(w, _bitrev(k, p - ell), q)
    sub = f.sub(0, size)
    subroot = RootOfUnity(pow(w, 1 << (p - ell), q), size)
    f._writable_or_raise(0, min(size, n))
    regs = f.arena.regs
    off, d = f.off, f.dir
    # Only the output prefix is rewritten: the prefix is twisted in place
    # while coefficients beyond it contribute theta^i * f_i on the fly, so
    # the inverse recomputes and subtracts the same products.
    if direction == "fwd":
        if theta != 1:
            _twist_prefix(regs, off, d, min(size, n), theta, q)
        _fold_fused(f, size, n, theta, q, 1)
        ntt(sub, subroot, "fwd")
    elif direction == "inv":
        ntt(sub, subroot, "inv")
        _fold_fused(f, size, n, theta, q, -1)
        if theta != 1:
            _twist_prefix(regs, off, d, min(size, n), pow(theta, q - 2, q), q)
    else:
        raise BadParams(f"unknown direction {direction!r}")


_TW = 128  # fixed block-kernel width for twiddle tables (scalar budget)


def _twist_prefix(regs, off, d, n, theta, q):
    """regs[i] *= theta^i for i < n, in blocks of _TW."""
    table = [1] * min(_TW, n)
    for j in range(1, len(table)):
        table[j] = table[j - 1] * theta % q
    step = table[-1] * theta % q
    cur = 1
    i = 0
    while i < n:
        b = min(_TW, n - i)
        s = _slc(off, d, i, i + b)
        if cur == 1:
            regs[s] = [x * c % q for x, c in zip(regs[s], table)]
        else:
            factors = [cur * c % q for c in table[:b]]
            regs[s] = [x * c % q for x, c in zip(regs[s], factors)]
        cur = cur * step % q if b == _TW else cur
        i += b


def _fold_fused(f: PolyView, size: int, n: int, theta: int, q: int, sign: int):
    """prefix[i mod size] += sign * theta^i * f[i] for i in [size, n).

    Upper coefficients are read untouched; contributions are independent,
    so blocks can go in any order.  Small prefixes are folded through a
    local accumulator of at most _TW scalars.
    """
    if n <= size:
        return
    regs = f.arena.regs
    off, d = f.off, f.dir
    if size <= _TW:
        # accumulate wraps locally, then fold once into the prefix
        acc = [0] * size
        blk = 4 * _TW
        table = [1] * min(blk, n - size)
        for j in range(1, len(table)):
            table[j] = table[j - 1] * theta % q
        cur = pow(theta, size, q)
        step = pow(theta, len(table), q)
        i = size
        while i < n:
            b = min(blk, n - i)
            ss = _slc(off, d, i, i + b)
            if theta == 1:
                prods = regs[ss]
            elif cur == 1:
                prods = [y * c % q for y, c in zip(regs[ss], table)]
            else:
                prods = [y * cur * c % q for y, c in zip(regs[ss], table)]
            base = i % size
            for j0 in range(min(size, b)):
                k0 = (base + j0) % size
                acc[k0] = (acc[k0] + sum(prods[j0::size])) % q
            cur = cur * step % q
            i += b
        ds = _slc(off, d, 0, size)
        if sign > 0:
            regs[ds] = [(x + y) % q for x, y in zip(regs[ds], acc)]
        else:
            regs[ds] = [(x - y) % q for x, y in zip(regs[ds], acc)]
        return
    table = [1] * _TW
    for j in range(1, _TW):
        table[j] = table[j - 1] * theta % q
    i = size
    cur = pow(theta, size, q)
    while i < n:
        b = min(_TW, n - i, size - (i % size))
        i0 = i % size
        ds = _slc(off, d, i0, i0 + b)
        ss = _slc(off, d, i, i + b)
        if theta == 1:
            if sign > 0:
                regs[ds] = [(x + y) % q for x, y in zip(regs[ds], regs[ss])]
            else:
                regs[ds] = [(x - y) % q for x, y in zip(regs[ds], regs[ss])]
        else:
            factors = [cur * c % q for c in table[:b]]
            if sign > 0:
                regs[ds] = [(x + y * c) % q for x, y, c in zip(regs[ds], regs[ss], factors)]
            else:
                regs[ds] = [(x - y * c) % q for x, y, c in zip(regs[ds], regs[ss], factors)]
        cur = cur * pow(theta, b, q) % q
        i += b


def _fft_span(view: PolyView, w: int, inverse: bool):
    """In-place size-2^k FFT on a fully backed view with root w (an int)."""
    n = len(view)
    if n <= 1:
        return
    ntt(view, RootOfUnity(w, n), "inv" if inverse else "fwd")


def _tft(view: PolyView, root: RootOfUnity, inverse: bool):
    """Bit-reversed truncated Fourier transform of any length, in place.

    Forward: slot j becomes f(omega^{[j]_p}) for j < N.  The top part is an
    output-truncated half-size FFT whose missing inputs are recomputed from
    the untouched low slots; the low part is then a plain full FFT.
    """
    N = len(view)
    q = view.arena.q
    w = root.omega
    p = root.order.bit_length() - 1
    while p > 0 and N <= (1 << (p - 1)):
        w = w * w % q
        p -= 1
    if N > (1 << p):
        raise BadParams(f"transform length {N} exceeds root order {1 << p}")
    if N == (1 << p):
        _fft_span(view, w, inverse)
        return
    h = 1 << (p - 1)
    M = N - h
    inv2 = (q + 1) >> 1
    regs = view.arena.regs
    off, d = view.off, view.dir
    view._writable_or_raise(0, N)

    def leaf_virt(i):
        # b_i for the untouched zone: x_i * w^i
        return regs[off + d * i] * pow(w, i, q) % q

    with view.arena.call():
        if not inverse:
            cur = 1
            for i in range(M):
                ja = off + d * i
                jb = off + d * (i + h)
                x, y = regs[ja], regs[jb]
                regs[ja] = (x + y) % q
                regs[jb] = (x - y) * cur % q
                cur = cur * w % q
            _otfft(view.sub(h, N), leaf_virt, h, w * w % q, False)
            _fft_span(view.sub(0, h), w * w % q, False)
        else:
            _fft_span(view.sub(0, h), w * w % q, True)
            _otfft(view.sub(h, N), leaf_virt, h, w * w % q, True)
            winv = pow(w, q - 2, q)
            cur = 1
            for i in range(M):
                ja = off + d * i
                jb = off + d * (i + h)
                x = regs[ja]
                y = regs[jb] * cur % q
                regs[ja] = (x + y) * inv2 % q
                regs[jb] = (x - y) * inv2 % q
                cur = cur * winv % q


def _otfft(buf: PolyView, virt, h: int, ww: int, inverse: bool):
    """First len(buf) bit-reversed outputs of an h-point FFT whose inputs
    are buf extended by the virtual tail virt(i), i in [len(buf), h)."""
    M = len(buf)
    q = buf.arena.q
    if h == 1 or M == 0:
        return
    if M == h:
        _fft_span(buf, ww, inverse)
        return
    h2 = h >> 1
    regs = buf.arena.regs
    off, d = buf.off, buf.dir
    with buf.arena.call():
        if M <= h2:
            if not inverse:
                for i in range(M):
                    j = off + d * i
                    regs[j] = (regs[j] + virt(i + h2)) % q

                def virt2(i):
                    return (virt(i) + virt(i + h2)) % q

                _otfft(buf, virt2, h2, ww * ww % q, False)
            else:

                def virt2(i):
                    return (virt(i) + virt(i + h2)) % q

                _otfft(buf, virt2, h2, ww * ww % q, True)
                for i in range(M):
                    j = off + d * i
                    regs[j] = (regs[j] - virt(i + h2)) % q
            return
        # M > h2: dense butterflies for the stored pairs, virtual adds for
        # the rest; the high half's missing inputs are recomputed from the
        # low half, which stays put until the high recursion is done.
        t = M - h2

        def virt_b(i):
            return (regs[off + d * i] - 2 * virt(i + h2)) * pow(ww, i, q) % q

        if not inverse:
            cur = 1
            for i in range(t):
                ja = off + d * i
                jb = off + d * (i + h2)
                x, y = regs[ja], regs[jb]
                regs[ja] = (x + y) % q
                regs[jb] = (x - y) * cur % q
                cur = cur * ww % q
            for i in range(t, h2):
                j = off + d * i
                regs[j] = (regs[j] + virt(i + h2)) % q
            _otfft(buf.sub(h2, M), virt_b, h2, ww * ww % q, False)
            _fft_span(buf.sub(0, h2), ww * ww % q, False)
        else:
            inv2 = (q + 1) >> 1
            _fft_span(buf.sub(0, h2), ww * ww % q, True)
            _otfft(buf.sub(h2, M), virt_b, h2, ww * ww % q, True)
            for i in range(t, h2):
                j = off + d * i
                regs[j] = (regs[j] - virt(i + h2)) % q
            winv = pow(ww, q - 2, q)
            cur = 1
            for i in range(t):
                ja = off + d * i
                jb = off + d * (i + h2)
                x = regs[ja]
                y = regs[jb] * cur % q
                regs[ja] = (x + y) * inv2 % q
                regs[jb] = (x - y) * inv2 % q
                cur = cur * winv % q


def cumulative_fft_mul(f: PolyView, g: PolyView, h: PolyView):
    """h += f * g by transforming h once and streaming partial transforms
    of f and g over it; everything happens inside the three operands."""
    m, n = len(f), len(g)
    if len(h) != m + n - 1:
        raise SizeContract("need len(h) = len(f) + len(g) - 1")
    if m > n:
        f, g = g, f
        m, n = n, m
    if m == 0:
        return
    ring = _ring(h)
    q = ring.q
    N = m + n - 1
    p = max(0, (N - 1).bit_length())
    root = ring.find_principal_root(1 << p)
    with h.arena.call():
        _tft(h, root, False)
        r = N
        while r > 0:
            ell = min(r, m).bit_length() - 1
            t = min(r, n).bit_length() - 1 - ell
            off = N - r
            kg = off >> (ell + t)
            partial_ft(g, kg, ell + t, root, "fwd")
            for s in range(1 << t):
                kf = (off >> ell) + s
                partial_ft(f, kf, ell, root, "fwd")
                base = off + (s << ell)
                cnt = 1 << ell
                h._writable_or_raise(base, base + cnt)
                hs = _slc(h.off, h.dir, base, base + cnt)
                fs = _slc(f.off, f.dir, 0, cnt)
                gs = _slc(g.off, g.dir, s << ell, (s + 1) << ell)
                hregs = h.arena.regs
                hregs[hs] = [
                    (x + a * b) % q for x, a, b in zip(hregs[hs], f.arena.regs[fs], g.arena.regs[gs])
                ]
                h.arena.metrics.base_products += cnt
                partial_ft(f, kf, ell, root, "inv")
            partial_ft(g, kg, ell + t, root, "inv")
            r -= 1 << (ell + t)
        _tft(h, root, True)


# ---------------------------------------------------------------------------
# in-place power series computations
# ---------------------------------------------------------------------------


def inplace_lower(f: PolyView, g: PolyView):
    """f = f * g mod x^n; g restored."""
    if len(f) != len(g):
        raise SizeContract("need equal sizes")
    with f.arena.call():
        _ipl(f, g)


def _ipl(f: PolyView, g: PolyView):
    n = len(f)
    if n == 0:
        return
    if n == 1:
        f.set(0, f.get(0) * g.get(0))
        f.arena.metrics.base_products += 1
        return
    k = (n + 1) // 2
    with f.arena.call():
        _ipl(f.sub(k, n), g.sub(0, n - k))
        _cum_slice(f.sub(0, k), g.sub(1, n), f.sub(k, n), k - 1, 1)
        _ipl(f.sub(0, k), g.sub(0, k))


def inplace_series_div(f: PolyView, g: PolyView, reversed_mode: bool = False):
    """f = f / g mod x^n; in reversed mode both series are read backwards
    (the reversed power series division used by Euclidean algorithms)."""
    if len(f) != len(g):
        raise SizeContract("need equal sizes")
    fv, gv = (f.rev(), g.rev()) if reversed_mode else (f, g)
    if len(gv) == 0 or gv.get(0) == 0:
        raise NonUnit("divisor constant term (of the view) is zero")
    with f.arena.call():
        _ipd(fv, gv)


def _ipd(f: PolyView, g: PolyView):
    n = len(f)
    if n == 0:
        return
    ring = _ring(f)
    if n == 1:
        f.set(0, f.get(0) * ring.inv(g.get(0)))
        f.arena.metrics.base_products += 1
        return
    k = (n + 1) // 2
    with f.arena.call():
        _ipd(f.sub(0, k), g.sub(0, k))
        _cum_slice(f.sub(0, k), g.sub(1, n), f.sub(k, n), k - 1, -1)
        _ipd(f.sub(k, n), g.sub(0, n - k))


# ---------------------------------------------------------------------------
# remainders
# ---------------------------------------------------------------------------


def remainder_rwrw(f: PolyView, g: PolyView, r_out: PolyView):
    """r = f mod g; the quotient is produced block by block inside r and
    immediately multiplied away in place."""
    n = len(g)
    m = len(f) - n + 1
    if len(r_out) != n - 1:
        raise SizeContract("remainder has n-1 slots")
    if n == 0 or g.get(n - 1) == 0:
        raise NonUnitLeading("divisor leading coefficient is zero")
    with r_out.arena.call():
        if n == 1:
            return
        if m <= 0:
            vzero(r_out)
            vadd(r_out, f)
            return
        stride = n - 1
        blocks = (m + stride - 1) // stride
        b0 = m - (blocks - 1) * stride
        vzero(r_out)
        vcopy(r_out.sub(0, b0), f.sub(m + n - 1 - b0, m + n - 1), b0)
        _ipd(r_out.sub(0, b0).rev(), g.sub(n - b0, n).rev())
        pos = m + n - 1 - b0
        for blk in range(blocks):
            _ipl(r_out, g.sub(0, n - 1))
            vneg(r_out)
            pos -= stride
            vadd(r_out, f.sub(pos, pos + stride))
            if blk < blocks - 1:
                _ipd(r_out.rev(), g.sub(1, n).rev())


def inplace_divrem(f: PolyView, g: PolyView, direction: str = "apply"):
    """Replace f by [r | q] (apply), or restore f from [r | q] (undo).

    The layout is the remainder in f[0, n-1) and the quotient in
    f[n-1, m+n-1).  Every step is a reversible in-place division or a
    cumulative product, so undo simply replays them backwards.
    """
    n = len(g)
    m = len(f) - n + 1
    if m < 0:
        raise SizeContract("dividend shorter than divisor allows")
    if n == 0 or g.get(n - 1) == 0:
        raise NonUnitLeading("divisor leading coefficient is zero")
    ring = _ring(f)
    with f.arena.call():
        if n == 1:
            c = ring.inv(g.get(0))
            if direction == "apply":
                vscale(f, c)
            elif direction == "undo":
                vscale(f, g.get(0))
            else:
                raise BadParams(f"unknown direction {direction!r}")
            return
        if m == 0:
            return
        stride = n - 1
        blocks = (m + stride - 1) // stride
        b0 = m - (blocks - 1) * stride
        if direction == "apply":
            for i in range(blocks - 1, -1, -1):
                base = stride + i * stride
                size = b0 if i == blocks - 1 else stride
                blk = f.sub(base, base + size)
                _ipd(blk.rev(), g.sub(n - size, n).rev())
                _cum_slice(g.sub(0, n - 1), blk, f.sub(base - stride, base), 0, -1)
        elif direction == "undo":
            for i in range(blocks):
                base = stride + i * stride
                size = b0 if i == blocks - 1 else stride
                blk = f.sub(base, base + size)
                _cum_slice(g.sub(0, n - 1), blk, f.sub(base - stride, base), 0, 1)
                _ipl(blk.rev(), g.sub(n - size, n).rev())
        else:
            raise BadParams(f"unknown direction {direction!r}")


def cumulative_remainder(f: PolyView, g: PolyView, r_out: PolyView):
    """r += f mod g via apply / accumulate / undo of the in-place division."""
    n = len(g)
    if len(r_out) != n - 1:
        raise SizeContract("remainder has n-1 slots")
    with r_out.arena.call():
        inplace_divrem(f, g, "apply")
        vadd(r_out, f.sub(0, min(len(f), n - 1)))
        inplace_divrem(f, g, "undo")


# ---------------------------------------------------------------------------
# modular products
# ---------------------------------------------------------------------------


def _top_nonzero(v: PolyView) -> int:
    for i in range(len(v) - 1, -1, -1):
        if v.get(i):
            return i
    return -1


def modular_mul(f: PolyView, g: PolyView, r_out: PolyView, p: PolyView):
    """r += f * g mod p for a monic modulus p of size n+1."""
    n = len(r_out)
    if len(p) != n + 1:
        raise SizeContract("modulus must have n+1 coefficients")
    if p.get(n) != 1:
        raise NonMonicModulus("modulus must be monic")
    if len(f) > n or len(g) > n:
        raise SizeContract("operands must have size <= n (reduce first)")
    with r_out.arena.call():
        _modmul_core(f, g, r_out, p)


def _modmul_core(f: PolyView, g: PolyView, r_out: PolyView, p: PolyView):
    """Core cumulative modular product for real operand views of size <= n.

    The overflow part h1 = (f*g) quo x^n is materialized reversibly inside
    f's top coefficient window (whose edges are genuinely nonzero), turned
    into the quotient by a reversed division by the top of p, used, and
    then unwound.
    """
    n = len(r_out)
    q = r_out.arena.q
    if len(f) == 0 or len(g) == 0:
        return
    _cum_slice(f, g, r_out, 0, 1)
    tf = _top_nonzero(f)
    tg = _top_nonzero(g)
    if tf < 0 or tg < 0 or tf + tg < n:
        return
    w = tf + tg + 1 - n
    fwin = f.sub(n - tg, tf + 1)
    gwin = g.sub(n - tf, tg + 1)
    u = fwin.rev()
    _ipl(u, gwin.rev())
    _ipd(u, p.sub(n + 1 - w, n + 1).rev())
    _cum_slice(p.sub(0, n), fwin, r_out, 0, -1)
    _ipl(u, p.sub(n + 1 - w, n + 1).rev())
    _ipd(u, gwin.rev())


def modular_mul_any(f: PolyView, g: PolyView, r_out: PolyView, p: PolyView):
    """r += f * g mod p for operands of any sizes; f and g are reduced in
    place by the reversible Euclidean division and restored afterwards."""
    n = len(r_out)
    if len(p) != n + 1:
        raise SizeContract("modulus must have n+1 coefficients")
    if p.get(n) != 1:
        raise NonMonicModulus("modulus must be monic")
    ell, m = len(f), len(g)
    with r_out.arena.call():
        if ell > n:
            inplace_divrem(f, p, "apply")
        if m > n:
            inplace_divrem(g, p, "apply")
        _modmul_core(f.sub(0, min(ell, n)), g.sub(0, min(m, n)), r_out, p)
        if m > n:
            inplace_divrem(g, p, "undo")
        if ell > n:
            inplace_divrem(f, p, "undo")
