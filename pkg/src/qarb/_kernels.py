"""JIT-compiled in-place gate kernels for the real statevector engine.

Both gates act on a float64 amplitude vector indexed with qubit 0 as the
least significant bit.  The kernels stream the state once per gate with no
temporaries, which is what makes 25-qubit circuits practical in RAM.
"""
from __future__ import annotations

from numba import njit, prange


@njit(parallel=True, fastmath=True, cache=True)
def apply_ry(state, qubit, c, s):
    """Rotate amplitude pairs (bit=0, bit=1) by [[c, -s], [s, c]]."""
    half = state.size >> 1
    step = 1 << qubit
    for p in prange(half):
        block = p >> qubit
        offset = p & (step - 1)
        i0 = (block << (qubit + 1)) | offset
        i1 = i0 | step
        a0 = state[i0]
        a1 = state[i1]
        state[i0] = c * a0 - s * a1
        state[i1] = s * a0 + c * a1


@njit(parallel=True, fastmath=True, cache=True)
def apply_cx(state, control, target):
    """Swap target-bit amplitude pairs wherever the control bit is set."""
    quarter = state.size >> 2
    cbit = 1 << control
    tbit = 1 << target
    lo = control if control < target else target
    hi = target if control < target else control
    for p in prange(quarter):
        off_lo = p & ((1 << lo) - 1)
        mid = (p >> lo) & ((1 << (hi - lo - 1)) - 1)
        top = p >> (hi - 1)
        base = (top << (hi + 1)) | (mid << (lo + 1)) | off_lo
        i0 = base | cbit
        i1 = base | cbit | tbit
        tmp = state[i0]
        state[i0] = state[i1]
        state[i1] = tmp
