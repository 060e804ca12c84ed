"""Counter-based random numbers keyed on integer tuples.

Every draw is a pure function of ``(seed, *keys)``, so results do not depend
on evaluation order, chunking or thread count.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)


def _mix(x: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer
    x = (x ^ (x >> _S30)) * _M1
    x = (x ^ (x >> _S27)) * _M2
    return x ^ (x >> _S31)


def hash64(seed: int, *keys) -> np.ndarray:
    """64-bit hash of ``seed`` and broadcastable integer key arrays."""
    with np.errstate(over="ignore"):
        h = _mix(np.asarray(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + _GOLDEN, dtype=np.uint64))
        for k in keys:
            k = np.asarray(k).astype(np.uint64)
            h = _mix(h ^ (k * _GOLDEN + _GOLDEN))
    return h


def uniform(seed: int, *keys) -> np.ndarray:
    """Uniform doubles in [0, 1), one per broadcast key position."""
    h = hash64(seed, *keys)
    return (h >> _S11).astype(np.float64) * (1.0 / 9007199254740992.0)
