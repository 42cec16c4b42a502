"""Pure-numpy orthant counting, the fallback when the compiled extension
is unavailable. Centers are processed in chunks to bound peak memory."""

from __future__ import annotations

import numpy as np

_CHUNK = 256


def orthant_counts(pts: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """counts[m, code] = number of pts whose orthant code at centers[m]
    is `code`, where bit k of the code is set iff pts[i, k] >= centers[m, k].

    pts: (n, d) float64, centers: (m, d) float64 -> (m, 2**d) int64.
    """
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    centers = np.ascontiguousarray(centers, dtype=np.float64)
    n, d = pts.shape
    m = centers.shape[0]
    if centers.shape[1] != d:
        raise ValueError("pts and centers dimension mismatch")
    if d > 20:
        raise ValueError("orthant codes limited to 20 dims")
    ncodes = 1 << d
    out = np.zeros((m, ncodes), dtype=np.int64)
    for start in range(0, m, _CHUNK):
        cz = centers[start:start + _CHUNK]
        codes = np.zeros((cz.shape[0], n), dtype=np.int64)
        for k in range(d):
            codes |= (pts[None, :, k] >= cz[:, k, None]).astype(np.int64) << k
        offset = np.arange(cz.shape[0], dtype=np.int64)[:, None] * ncodes
        flat = np.bincount((codes + offset).ravel(), minlength=cz.shape[0] * ncodes)
        out[start:start + _CHUNK] = flat.reshape(cz.shape[0], ncodes)
    return out
