# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled best-match similarity kernel over ragged embedding bags.

Same contract as the numpy fallback: float32 rows, float64 dot
accumulation, float32 result. Streams over bag pairs without
materializing the full row-pair matrix.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "compiled"


def query_kernel(
    cnp.float32_t[:, ::1] q_data,
    cnp.int64_t[::1] q_offsets,
    cnp.float32_t[:, ::1] u_data,
    cnp.int64_t[::1] u_offsets,
):
    cdef Py_ssize_t nq = q_offsets.shape[0] - 1
    cdef Py_ssize_t nu = u_offsets.shape[0] - 1
    cdef Py_ssize_t dim = q_data.shape[1]
    out_arr = np.empty((nq, nu), dtype=np.float32)
    cdef cnp.float32_t[:, ::1] out = out_arr

    cdef Py_ssize_t qi, ui, t, p, d
    cdef Py_ssize_t q_lo, q_hi, u_lo, u_hi
    cdef double acc, best

    for qi in range(nq):
        q_lo = q_offsets[qi]
        q_hi = q_offsets[qi + 1]
        for ui in range(nu):
            u_lo = u_offsets[ui]
            u_hi = u_offsets[ui + 1]
            best = -2.0
            for t in range(q_lo, q_hi):
                for p in range(u_lo, u_hi):
                    acc = 0.0
                    for d in range(dim):
                        acc += <double> q_data[t, d] * <double> u_data[p, d]
                    if acc > best:
                        best = acc
            out[qi, ui] = <cnp.float32_t> best
    return out_arr
