"""Row-reduction kernels over F_p.

Two interchangeable implementations are provided: a numba-compiled one and
a pure numpy one.  Set ``LEKAC_DISABLE_NUMBA=1`` to force the numpy path
(useful for debugging and for the benchmark in ``benchmarks/``).
"""

import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("LEKAC_DISABLE_NUMBA", "0") in ("", "0")


def _rref_numpy(a, p):
    """Reduced row echelon form of ``a`` mod ``p``, in place.

    Returns the number of pivots; ``piv`` receives the pivot columns.
    """
    rows, cols = a.shape
    piv = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        piv[r] = c
        r += 1
    return piv[:r]


if NUMBA_AVAILABLE:

    @njit(cache=True)
    def _rref_numba(a, p):
        rows, cols = a.shape
        piv = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            k = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != r:
                for j in range(cols):
                    t = a[r, j]
                    a[r, j] = a[k, j]
                    a[k, j] = t
            # Fermat inverse; p is tiny so the loop is cheap
            inv = 1
            base = a[r, c]
            e = p - 2
            while e > 0:
                if e & 1:
                    inv = (inv * base) % p
                base = (base * base) % p
                e >>= 1
            for j in range(c, cols):
                a[r, j] = (a[r, j] * inv) % p
            for i in range(rows):
                if i != r:
                    f = a[i, c]
                    if f != 0:
                        for j in range(c, cols):
                            a[i, j] = (a[i, j] - f * a[r, j]) % p
            piv[r] = c
            r += 1
        return piv[:r]


def rref_inplace(a, p):
    """Row-reduce the int64 array ``a`` mod ``p`` in place; return pivot columns."""
    if USE_NUMBA and a.size:
        return _rref_numba(a, p)
    return _rref_numpy(a, p)
