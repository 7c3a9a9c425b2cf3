import pytest

from polyarena import INOUT, INPUT_ONLY, OUTPUT_ONLY, RO_RW, RW_RW, SCRATCH, Arena, Zq, make_view
from polyarena.errors import (
    BadRange,
    LengthMismatch,
    OutOfRange,
    PaddingWrite,
    PermissionDenied,
    UnderflowExit,
)
from polyarena.reg_arena import build_arena, vadd, vcopy, vneg, vscale, vzero

RING = Zq(97)


def test_new_arena_examples():
    arena = Arena(RING, [], [], RW_RW)
    assert len(arena) == 0

    arena = Arena(RING, [1, 2, 3], [INPUT_ONLY, INPUT_ONLY, OUTPUT_ONLY], RO_RW)
    with pytest.raises(PermissionDenied):
        arena.write(0, 5)
    with pytest.raises(PermissionDenied):
        arena.write(1, 5)
    arena.write(2, 5)

    arena = Arena(RING, [0] * 5, [INOUT, INOUT, INOUT, SCRATCH, SCRATCH], RW_RW)
    assert arena.metrics.extra_algebraic_highwater == 0


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        Arena(RING, [1, 2], [INOUT])


def test_access_and_scratch_metric():
    arena = Arena(RING, [0, 0, 0], [INOUT, SCRATCH, SCRATCH], RW_RW)
    arena.write(1, 7)
    assert arena.metrics.extra_algebraic_highwater == 1
    arena.write(1, 8)  # same register, no new high water
    assert arena.metrics.extra_algebraic_highwater == 1
    arena.write(2, 1)
    assert arena.metrics.extra_algebraic_highwater == 2
    with pytest.raises(OutOfRange):
        arena.read(3)
    with pytest.raises(OutOfRange):
        arena.write(-1, 0)


def test_rwrw_allows_input_writes():
    arena = Arena(RING, [1], [INPUT_ONLY], RW_RW)
    arena.write(0, 5)
    assert arena.read(0) == 5


def test_views_plain_reversed_padded():
    arena = Arena(RING, [3, 5, 2], [INOUT] * 3, RW_RW)
    v = make_view(arena, 0, 3)
    assert v.tolist() == [3, 5, 2]
    assert make_view(arena, 0, 3, "reversed").tolist() == [2, 5, 3]
    pv = make_view(arena, 0, 3, "padded", logical_len=5)
    assert pv.tolist() == [3, 5, 2, 0, 0]
    with pytest.raises(PaddingWrite):
        pv.set(4, 1)
    with pytest.raises(BadRange):
        make_view(arena, 2, 1)
    with pytest.raises(BadRange):
        make_view(arena, 0, 3, "padded", logical_len=2)


def test_view_composition():
    arena = Arena(RING, [1, 2, 3, 4, 5], [INOUT] * 5, RW_RW)
    v = arena.view(0, 5)
    assert v.sub(1, 4).rev().tolist() == [4, 3, 2]
    assert v.rev().sub(1, 4).tolist() == [4, 3, 2]
    padded = v.sub(0, 3).padded(6)
    assert padded.rev().tolist() == [0, 0, 0, 3, 2, 1]
    w = v.window(-2, 3)
    assert w.tolist() == [0, 0, 1, 2, 3]


def test_call_stack_metrics():
    arena = Arena(RING, [0], [INOUT], RW_RW)
    arena.enter_call()
    arena.enter_call()
    arena.exit_call()
    assert arena.metrics.pointer_depth_highwater == 2
    arena.exit_call()
    with pytest.raises(UnderflowExit):
        arena.exit_call()

    arena2 = Arena(RING, [0], [INOUT], RW_RW)
    assert arena2.metrics.pointer_depth_highwater == 0
    for _ in range(5):
        arena2.enter_call()
    assert arena2.metrics.pointer_depth_highwater == 5


def test_region_ops_and_trimming():
    arena, (a, b) = build_arena(RING, RW_RW, ([1, 2, 3], INOUT), ([10, 20, 30], INOUT))
    vadd(a, b)
    assert a.tolist() == [11, 22, 33]
    vadd(a, b.sub(0, 2), -1)
    assert a.tolist() == [1, 2, 33]
    vcopy(a, b.sub(0, 2).padded(3))
    assert a.tolist() == [10, 20, 0]
    vscale(a, 2)
    assert a.tolist() == [20, 40, 0]
    vneg(a)
    assert a.tolist() == [77, 57, 0]
    vzero(a)
    assert a.tolist() == [0, 0, 0]


def test_bulk_write_permission_denied():
    arena, (a, b) = build_arena(RING, RO_RW, ([1, 2, 3], INPUT_ONLY), ([0, 0, 0], INOUT))
    with pytest.raises(PermissionDenied):
        vzero(a)
    vadd(b, a)
    assert b.tolist() == [1, 2, 3]


def test_padding_write_through_region_ops():
    arena, (a,) = build_arena(RING, RW_RW, ([1, 2], INOUT))
    padded = a.padded(4)
    with pytest.raises(PaddingWrite):
        vzero(padded)
    # adding a zero-padded source into a real region is fine
    arena2, (dst, src) = build_arena(RING, RW_RW, ([5, 5, 5], INOUT), ([1], INOUT))
    vadd(dst, src.padded(3))
    assert dst.tolist() == [6, 5, 5]


def test_dump_format():
    arena = Arena(RING, [7, 0], [INPUT_ONLY, SCRATCH], RO_RW)
    lines = arena.dump().splitlines()
    assert lines[0] == "0\tin\t7"
    assert lines[1] == "1\tscratch\t0"
