"""Atomic memory operations on numpy array slots, usable inside nogil kernels.

Numba has no CPU atomics, so these lower directly to LLVM ``atomicrmw``,
``cmpxchg`` and atomic load/store instructions. Every operation addresses
``arr[idx]`` of a 1-d contiguous array.
"""
from llvmlite import ir
from numba import types
from numba.core import cgutils
from numba.extending import intrinsic


def _slot_pointer(context, builder, aryty, arr, idx):
    ary = context.make_array(aryty)(context, builder, arr)
    return cgutils.get_item_pointer(context, builder, aryty, ary, [idx])


@intrinsic
def atomic_add(typingctx, arr, idx, val):
    """Fetch-and-add on an integer slot; returns the previous value."""
    if not isinstance(arr, types.Array) or not isinstance(arr.dtype, types.Integer):
        return None
    sig = arr.dtype(arr, idx, val)

    def codegen(context, builder, signature, args):
        aryty, _, valty = signature.args
        ptr = _slot_pointer(context, builder, aryty, args[0], args[1])
        v = context.cast(builder, args[2], valty, aryty.dtype)
        return builder.atomic_rmw("add", ptr, v, "seq_cst")

    return sig, codegen


@intrinsic
def atomic_cas(typingctx, arr, idx, expected, desired):
    """Compare-and-swap on an integer slot; returns the value seen before the swap."""
    if not isinstance(arr, types.Array) or not isinstance(arr.dtype, types.Integer):
        return None
    sig = arr.dtype(arr, idx, expected, desired)

    def codegen(context, builder, signature, args):
        aryty = signature.args[0]
        ptr = _slot_pointer(context, builder, aryty, args[0], args[1])
        exp = context.cast(builder, args[2], signature.args[2], aryty.dtype)
        des = context.cast(builder, args[3], signature.args[3], aryty.dtype)
        res = builder.cmpxchg(ptr, exp, des, "seq_cst", "seq_cst")
        return builder.extract_value(res, 0)

    return sig, codegen


@intrinsic
def atomic_cas_f64(typingctx, arr, idx, expected, desired):
    """Bitwise compare-and-swap on a float64 slot; returns the previous value."""
    if not isinstance(arr, types.Array) or arr.dtype != types.float64:
        return None
    sig = types.float64(arr, idx, types.float64, types.float64)

    def codegen(context, builder, signature, args):
        aryty = signature.args[0]
        ptr = _slot_pointer(context, builder, aryty, args[0], args[1])
        i64 = ir.IntType(64)
        iptr = builder.bitcast(ptr, i64.as_pointer())
        exp = builder.bitcast(args[2], i64)
        des = builder.bitcast(args[3], i64)
        res = builder.cmpxchg(iptr, exp, des, "seq_cst", "seq_cst")
        return builder.bitcast(builder.extract_value(res, 0), ir.DoubleType())

    return sig, codegen


@intrinsic
def atomic_load(typingctx, arr, idx):
    """Acquire load; keeps LLVM from hoisting reads of shared slots out of loops."""
    if not isinstance(arr, types.Array):
        return None
    sig = arr.dtype(arr, idx)

    def codegen(context, builder, signature, args):
        aryty = signature.args[0]
        ptr = _slot_pointer(context, builder, aryty, args[0], args[1])
        return builder.load_atomic(ptr, "acquire", 8)

    return sig, codegen


@intrinsic
def atomic_store(typingctx, arr, idx, val):
    """Release store of ``val`` into ``arr[idx]``."""
    if not isinstance(arr, types.Array):
        return None
    sig = types.void(arr, idx, val)

    def codegen(context, builder, signature, args):
        aryty, _, valty = signature.args
        ptr = _slot_pointer(context, builder, aryty, args[0], args[1])
        v = context.cast(builder, args[2], valty, aryty.dtype)
        builder.store_atomic(v, ptr, "release", 8)
        return context.get_dummy_value()

    return sig, codegen
