"""Instrumented register file with permission enforcement and space metrics.

An Arena is a flat file of field elements.  Every register carries a fixed
permission tag; under the ro/rw model writes to input-only registers fail.
Metrics track the number of distinct scratch registers ever written (the
extra algebraic space high-water) and the deepest simulated call nesting
(the pointer-stack high-water).

Algorithms address the arena through PolyView windows: contiguous slices,
reversed slices, or fake-padded slices whose out-of-range reads yield zero
and whose out-of-range writes fail.  Views compose (subview of a reversed
padded view, etc.), which the in-place algorithms rely on heavily.

Scalar temporaries held in Python locals inside a single arithmetic
statement are not arena registers; each algorithm declares its constant
budget of such temporaries next to its definition.
"""

from __future__ import annotations

from .coeff_ring import Zq
from .errors import (
    BadRange,
    LengthMismatch,
    OutOfRange,
    PaddingWrite,
    PermissionDenied,
    UnderflowExit,
)

# permission tags
INPUT_ONLY = 0
OUTPUT_ONLY = 1
INOUT = 2
SCRATCH = 3

PERM_NAMES = {INPUT_ONLY: "in", OUTPUT_ONLY: "out", INOUT: "inout", SCRATCH: "scratch"}

# permission models
RO_RW = "ro/rw"
RW_RW = "rw/rw"


class SpaceMetrics:
    __slots__ = ("scratch_touched", "pointer_depth_highwater", "base_products", "depth")

    def __init__(self):
        self.scratch_touched = set()
        self.pointer_depth_highwater = 0
        self.base_products = 0
        self.depth = 0

    @property
    def extra_algebraic_highwater(self) -> int:
        return len(self.scratch_touched)

    def reset(self):
        self.scratch_touched.clear()
        self.pointer_depth_highwater = 0
        self.base_products = 0
        self.depth = 0

    def summary(self) -> str:
        return (
            f"extra_algebraic={self.extra_algebraic_highwater} "
            f"pointer_depth={self.pointer_depth_highwater} "
            f"base_products={self.base_products}"
        )


class Arena:
    __slots__ = (
        "ring",
        "q",
        "regs",
        "perms",
        "model",
        "metrics",
        "has_scratch",
        "_input_ranges",
        "_scratch_ranges",
    )

    def __init__(self, ring: Zq, values, perms, model: str = RW_RW):
        if len(values) != len(perms):
            raise LengthMismatch(f"{len(values)} values vs {len(perms)} perms")
        self.ring = ring
        self.q = ring.q
        self.regs = [v % ring.q for v in values]
        self.perms = list(perms)
        self.model = model
        self.metrics = SpaceMetrics()
        self.has_scratch = SCRATCH in self.perms
        self._input_ranges = self._runs_of(INPUT_ONLY)
        self._scratch_ranges = self._runs_of(SCRATCH)

    def _runs_of(self, tag: int) -> list[tuple[int, int]]:
        runs = []
        start = None
        for i, p in enumerate(self.perms):
            if p == tag and start is None:
                start = i
            elif p != tag and start is not None:
                runs.append((start, i))
                start = None
        if start is not None:
            runs.append((start, len(self.perms)))
        return runs

    def __len__(self):
        return len(self.regs)

    # -- scalar access ----------------------------------------------------

    def read(self, i: int) -> int:
        if not 0 <= i < len(self.regs):
            raise OutOfRange(f"register {i}")
        return self.regs[i]

    def write(self, i: int, v: int):
        if not 0 <= i < len(self.regs):
            raise OutOfRange(f"register {i}")
        p = self.perms[i]
        if p == INPUT_ONLY and self.model == RO_RW:
            raise PermissionDenied(f"write to input-only register {i}")
        if p == SCRATCH:
            self.metrics.scratch_touched.add(i)
        self.regs[i] = v % self.q

    # -- call stack accounting --------------------------------------------

    def enter_call(self):
        m = self.metrics
        m.depth += 1
        if m.depth > m.pointer_depth_highwater:
            m.pointer_depth_highwater = m.depth

    def exit_call(self):
        m = self.metrics
        if m.depth == 0:
            raise UnderflowExit("exit_call without matching enter_call")
        m.depth -= 1

    def call(self):
        return _CallScope(self)

    # -- views -------------------------------------------------------------

    def view(self, lo: int, hi: int) -> "PolyView":
        if not 0 <= lo <= hi <= len(self.regs):
            raise BadRange(f"[{lo},{hi}) in arena of length {len(self.regs)}")
        return PolyView(self, lo, 1, hi - lo, 0, hi - lo)

    def dump(self) -> str:
        lines = []
        for i, (p, v) in enumerate(zip(self.perms, self.regs)):
            lines.append(f"{i}\t{PERM_NAMES[p]}\t{v}")
        return "\n".join(lines)


class _CallScope:
    __slots__ = ("arena",)

    def __init__(self, arena):
        self.arena = arena

    def __enter__(self):
        self.arena.enter_call()
        return self.arena

    def __exit__(self, *exc):
        self.arena.exit_call()
        return False


def make_view(arena: Arena, lo: int, hi: int, kind: str = "plain", logical_len: int | None = None) -> "PolyView":
    """View constructor: kind is "plain", "reversed" or "padded"."""
    v = arena.view(lo, hi)
    if kind == "plain":
        return v
    if kind == "reversed":
        return v.rev()
    if kind == "padded":
        if logical_len is None or logical_len < hi - lo:
            raise BadRange("padded view needs logical_len >= hi-lo")
        return v.padded(logical_len)
    raise BadRange(f"unknown view kind {kind!r}")


class PolyView:
    """Window into an arena: logical index i maps to off + dir*i.

    Indices in [rlo, rhi) are backed by registers; other indices inside the
    logical length read as zero and reject writes (fake padding).
    """

    __slots__ = ("arena", "off", "dir", "L", "rlo", "rhi")

    def __init__(self, arena, off, dir, L, rlo, rhi):
        self.arena = arena
        self.off = off
        self.dir = dir
        self.L = L
        self.rlo = max(0, rlo)
        self.rhi = min(L, rhi)
        if self.rhi < self.rlo:
            self.rhi = self.rlo

    def __len__(self):
        return self.L

    def __repr__(self):
        return f"PolyView(off={self.off}, dir={self.dir}, L={self.L}, real=[{self.rlo},{self.rhi}))"

    # -- scalars ------------------------------------------------------------

    def get(self, i: int) -> int:
        if not 0 <= i < self.L:
            raise OutOfRange(f"view index {i} of {self.L}")
        if i < self.rlo or i >= self.rhi:
            return 0
        return self.arena.regs[self.off + self.dir * i]

    def set(self, i: int, v: int):
        if not 0 <= i < self.L:
            raise OutOfRange(f"view index {i} of {self.L}")
        if i < self.rlo or i >= self.rhi:
            raise PaddingWrite(f"write to padded index {i}")
        self.arena.write(self.off + self.dir * i, v)

    # -- derived views -------------------------------------------------------

    def sub(self, a: int, b: int) -> "PolyView":
        if not 0 <= a <= b <= self.L:
            raise BadRange(f"sub [{a},{b}) of view length {self.L}")
        return PolyView(self.arena, self.off + self.dir * a, self.dir, b - a, self.rlo - a, self.rhi - a)

    def window(self, a: int, b: int) -> "PolyView":
        """Like sub but a may run below 0 and b beyond the length; the
        out-of-range part becomes padding."""
        if a > b:
            raise BadRange(f"window [{a},{b})")
        return PolyView(self.arena, self.off + self.dir * a, self.dir, b - a, self.rlo - a, self.rhi - a)

    def rev(self) -> "PolyView":
        L = self.L
        return PolyView(self.arena, self.off + self.dir * (L - 1), -self.dir, L, L - self.rhi, L - self.rlo)

    def padded(self, logical_len: int) -> "PolyView":
        if logical_len < self.L:
            raise BadRange("padded length below view length")
        return PolyView(self.arena, self.off, self.dir, logical_len, self.rlo, self.rhi)

    def trimmed(self) -> "PolyView":
        """Drop trailing padding (keep leading padding intact)."""
        return self.sub(0, self.rhi) if self.rhi < self.L else self

    # -- bulk helpers ----------------------------------------------------------

    def tolist(self) -> list[int]:
        return [self.get(i) for i in range(self.L)]

    def setlist(self, values):
        for i, v in enumerate(values):
            self.set(i, v)

    def real_span(self) -> tuple[int, int]:
        return self.rlo, self.rhi

    def _writable_or_raise(self, a: int, b: int):
        """Single permission check for a bulk write over logical [a, b).

        Permission tags come in contiguous runs, so the check intersects
        the physical write span with the precomputed run intervals.
        """
        if a >= b:
            return
        if a < self.rlo or b > self.rhi:
            raise PaddingWrite(f"bulk write [{a},{b}) outside real zone [{self.rlo},{self.rhi})")
        arena = self.arena
        off, d = self.off, self.dir
        if d == 1:
            plo, phi = off + a, off + b
        else:
            plo, phi = off - b + 1, off - a + 1
        if arena.model == RO_RW:
            for lo, hi in arena._input_ranges:
                if lo < phi and plo < hi:
                    raise PermissionDenied(f"bulk write hits input-only registers [{max(lo, plo)},{min(hi, phi)})")
        if arena.has_scratch:
            touched = arena.metrics.scratch_touched
            for lo, hi in arena._scratch_ranges:
                o_lo, o_hi = max(lo, plo), min(hi, phi)
                if o_lo < o_hi:
                    touched.update(range(o_lo, o_hi))


# ---------------------------------------------------------------------------
# region operations
#
# All respect fake padding: reads outside the real zone are zeros, and a
# write is attempted only where it could change a register, so adding a
# padded (zero) source over a padded destination is legal.  The bulk forms
# go through list slices (reads happen before writes, so aliasing regions
# see a consistent snapshot).
# ---------------------------------------------------------------------------


def _slc(off: int, d: int, a: int, b: int) -> slice:
    if d == 1:
        return slice(off + a, off + b)
    stop = off - b
    return slice(off - a, stop if stop >= 0 else None, -1)


def vadd(dst: PolyView, src: PolyView, sign: int = 1, length: int | None = None):
    """dst[i] += sign * src[i] over the overlap (trimmed to src's real zone)."""
    n = min(dst.L, src.L)
    if length is not None:
        n = min(n, length)
    a = max(0, src.rlo)
    b = min(n, src.rhi)
    if a >= b:
        return
    dst._writable_or_raise(a, b)
    q = dst.arena.q
    dregs = dst.arena.regs
    sregs = src.arena.regs
    ds = _slc(dst.off, dst.dir, a, b)
    ss = _slc(src.off, src.dir, a, b)
    if sign >= 0:
        dregs[ds] = [(x + y) % q for x, y in zip(dregs[ds], sregs[ss])]
    else:
        dregs[ds] = [(x - y) % q for x, y in zip(dregs[ds], sregs[ss])]


def vcopy(dst: PolyView, src: PolyView, length: int | None = None):
    """dst[i] = src[i] for i < length (default min length); pads copy as zero."""
    n = min(dst.L, src.L) if length is None else length
    if n > dst.L:
        raise OutOfRange("copy longer than destination")
    dst._writable_or_raise(0, n)
    dregs = dst.arena.regs
    a = max(0, min(src.rlo, n))
    b = max(a, min(n, src.rhi, src.L))
    if a:
        dregs[_slc(dst.off, dst.dir, 0, a)] = [0] * a
    if b > a:
        sregs = src.arena.regs
        dregs[_slc(dst.off, dst.dir, a, b)] = sregs[_slc(src.off, src.dir, a, b)]
    if n > b:
        dregs[_slc(dst.off, dst.dir, b, n)] = [0] * (n - b)


def vzero(dst: PolyView, length: int | None = None):
    n = dst.L if length is None else min(length, dst.L)
    if n <= 0:
        return
    dst._writable_or_raise(0, n)
    dst.arena.regs[_slc(dst.off, dst.dir, 0, n)] = [0] * n


def vscale(dst: PolyView, c: int):
    """dst *= c over the real zone."""
    a, b = dst.rlo, dst.rhi
    if a >= b:
        return
    dst._writable_or_raise(a, b)
    q = dst.arena.q
    c %= q
    dregs = dst.arena.regs
    ds = _slc(dst.off, dst.dir, a, b)
    dregs[ds] = [x * c % q for x in dregs[ds]]


def vneg(dst: PolyView):
    a, b = dst.rlo, dst.rhi
    if a >= b:
        return
    dst._writable_or_raise(a, b)
    q = dst.arena.q
    dregs = dst.arena.regs
    ds = _slc(dst.off, dst.dir, a, b)
    dregs[ds] = [-x % q for x in dregs[ds]]


def build_arena(ring: Zq, model: str, *segments) -> tuple[Arena, list[PolyView]]:
    """Assemble an arena from (values, perm) segments; returns plain views."""
    values: list[int] = []
    perms: list[int] = []
    bounds = []
    for vals, perm in segments:
        bounds.append((len(values), len(values) + len(vals)))
        values.extend(vals)
        perms.extend([perm] * len(vals))
    arena = Arena(ring, values, perms, model)
    return arena, [arena.view(lo, hi) for lo, hi in bounds]
