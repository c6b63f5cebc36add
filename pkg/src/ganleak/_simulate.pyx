# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernels; bit-identical twin of ``_simulate_np``.

Same uniform consumption, same comparisons, same clamps: outputs never
depend on which backend is active.
"""
import numpy as np

BACKEND = "cython"


cdef inline Py_ssize_t _bisect_right(const double[::1] cdf, double x) noexcept nogil:
    # smallest i with x < cdf[i]; mirrors np.searchsorted(cdf, x, side="right")
    cdef Py_ssize_t lo = 0, hi = cdf.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if x < cdf[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


def sample_source_codes(object u_in, double rho, object member_ids_in,
                        object member_cdf_in, long long novel_size):
    cdef const double[:, ::1] u = np.ascontiguousarray(u_in, dtype=np.float64)
    cdef const long long[::1] member_ids = np.ascontiguousarray(member_ids_in, dtype=np.int64)
    cdef const double[::1] member_cdf = np.ascontiguousarray(member_cdf_in, dtype=np.float64)
    cdef Py_ssize_t n = u.shape[0], m = member_ids.shape[0], i, idx
    out_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef long long j
    with nogil:
        for i in range(n):
            if u[i, 0] < rho:
                idx = _bisect_right(member_cdf, u[i, 1])
                if idx > m - 1:
                    idx = m - 1
                out[i] = member_ids[idx]
            else:
                j = <long long>(u[i, 1] * novel_size)
                if j > novel_size - 1:
                    j = novel_size - 1
                out[i] = -(j + 1)
    return out_arr


def classify_codes(object codes_in, object u_in, double accuracy,
                   long long yf_size, bint novel_uniform):
    cdef const long long[::1] codes = np.ascontiguousarray(codes_in, dtype=np.int64)
    cdef const double[:, ::1] u = np.ascontiguousarray(u_in, dtype=np.float64)
    cdef Py_ssize_t n = codes.shape[0], i
    out_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef long long y, e, p
    with nogil:
        for i in range(n):
            y = codes[i]
            if y >= 0:
                if yf_size == 1:
                    out[i] = 0
                elif u[i, 0] < accuracy:
                    out[i] = y
                else:
                    e = <long long>(u[i, 1] * (yf_size - 1))
                    if e > yf_size - 2:
                        e = yf_size - 2
                    if e >= y:
                        e = e + 1
                    out[i] = e
            else:
                if novel_uniform:
                    p = <long long>(u[i, 1] * yf_size)
                    if p > yf_size - 1:
                        p = yf_size - 1
                    out[i] = p
                else:
                    out[i] = y
    return out_arr
