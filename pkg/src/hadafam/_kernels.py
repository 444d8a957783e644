"""Hot numeric kernels: group-ring convolution and packed-row Gram checks.

Each kernel has a numba-jitted implementation and a pure-numpy fallback.
Set ``HADAFAM_NO_NUMBA=1`` to force the numpy path (or leave numba
uninstalled); ``USING_NUMBA`` reports which path is active.  Both paths are
exercised by ``bench/bench_kernels.py`` and produce identical results.
"""

import os

import numpy as np

_FLAG = os.environ.get("HADAFAM_NO_NUMBA", "")
NUMBA_DISABLED = _FLAG not in ("", "0")

try:
    if NUMBA_DISABLED:
        raise ImportError("disabled via HADAFAM_NO_NUMBA")
    from numba import njit

    USING_NUMBA = True
except ImportError:
    njit = None
    USING_NUMBA = False

# popcount lookup for 16-bit chunks; shared by both paths
_POP16 = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.int64)

_M16 = np.uint64(0xFFFF)
_S16 = np.uint64(16)
_S32 = np.uint64(32)
_S48 = np.uint64(48)


def convolve_numpy(a, b, res, factors, strides):
    """c[z] = sum over x+y=z of a[x]*b[y], indices in mixed radix."""
    out = np.zeros_like(b)
    for x in np.nonzero(a)[0]:
        idx = ((res + res[x]) % factors) @ strides
        out[idx] += a[x] * b
    return out


def gram_defect_numpy(packed, n):
    """First row pair (i, j), i<j, whose +-1 dot product is nonzero.

    ``packed`` holds one bit per entry (1 encodes -1); the dot product of two
    rows is n - 2*popcount(xor).  Returns (-1, -1) when all pairs are
    orthogonal.
    """
    rows = packed.shape[0]
    for i in range(rows - 1):
        x = packed[i + 1 :] ^ packed[i]
        counts = np.bitwise_count(x).sum(axis=1, dtype=np.int64)
        bad = np.nonzero(2 * counts != n)[0]
        if bad.size:
            return i, i + 1 + int(bad[0])
    return -1, -1


if USING_NUMBA:

    @njit(cache=True)
    def _convolve_jit(a, b, res, factors, strides):
        v = b.shape[0]
        r = factors.shape[0]
        out = np.zeros(v, np.int64)
        for x in range(v):
            ax = a[x]
            if ax == 0:
                continue
            for y in range(v):
                by = b[y]
                if by == 0:
                    continue
                z = 0
                for j in range(r):
                    t = res[x, j] + res[y, j]
                    if t >= factors[j]:
                        t -= factors[j]
                    z += t * strides[j]
                out[z] += ax * by
        return out

    @njit(cache=True)
    def _gram_defect_jit(packed, n, pop16):
        rows, words = packed.shape
        for i in range(rows):
            for j in range(i + 1, rows):
                acc = 0
                for k in range(words):
                    x = packed[i, k] ^ packed[j, k]
                    acc += (
                        pop16[np.int64(x & _M16)]
                        + pop16[np.int64((x >> _S16) & _M16)]
                        + pop16[np.int64((x >> _S32) & _M16)]
                        + pop16[np.int64(x >> _S48)]
                    )
                if 2 * acc != n:
                    return i, j
        return -1, -1

    def convolve_numba(a, b, res, factors, strides):
        return _convolve_jit(a, b, res, factors, strides)

    def gram_defect_numba(packed, n):
        i, j = _gram_defect_jit(packed, n, _POP16)
        return int(i), int(j)

    convolve = convolve_numba
    gram_defect = gram_defect_numba
else:
    convolve_numba = None
    gram_defect_numba = None
    convolve = convolve_numpy
    gram_defect = gram_defect_numpy
