# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled orthant counting: the hot kernel of CCD scoring.

Must produce exactly the same int64 counts as _orthants_py.orthant_counts.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def orthant_counts(pts, centers):
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    centers = np.ascontiguousarray(centers, dtype=np.float64)
    if pts.ndim != 2 or centers.ndim != 2 or pts.shape[1] != centers.shape[1]:
        raise ValueError("pts and centers dimension mismatch")
    if pts.shape[1] > 20:
        raise ValueError("orthant codes limited to 20 dims")
    # const views: design matrices arrive with the writeable flag cleared
    cdef const double[:, ::1] p = pts
    cdef const double[:, ::1] c = centers
    cdef Py_ssize_t n = p.shape[0]
    cdef Py_ssize_t d = p.shape[1]
    cdef Py_ssize_t m = c.shape[0]
    out = np.zeros((m, 1 << d), dtype=np.int64)
    cdef long long[:, ::1] o = out
    cdef Py_ssize_t i, j, k
    cdef long long code
    with nogil:
        for j in range(m):
            for i in range(n):
                code = 0
                for k in range(d):
                    if p[i, k] >= c[j, k]:
                        code |= <long long>1 << k
                o[j, code] += 1
    return out
