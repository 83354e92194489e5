# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled sparse Fock kernels.

Same contracts as :mod:`bogofock.fock._pykernels`: occupation bitmasks in
uint64 keys, unmerged outputs.
"""

import numpy as np

from libc.stdint cimport int64_t, uint64_t


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_clzll(unsigned long long) nogil


cdef inline double _sign_below(uint64_t state, int p) noexcept nogil:
    cdef uint64_t mask = ((<uint64_t>1) << p) - 1
    return -1.0 if (__builtin_popcountll(state & mask) & 1) else 1.0


def one_body(const uint64_t[::1] keys, const double complex[::1] amps,
             const int64_t[::1] modes, const double complex[::1] coefs, bint create):
    cdef Py_ssize_t n = keys.shape[0]
    cdef Py_ssize_t m = modes.shape[0]
    out_k = np.empty(n * m, dtype=np.uint64)
    out_a = np.empty(n * m, dtype=np.complex128)
    cdef uint64_t[::1] ok = out_k
    cdef double complex[::1] oa = out_a
    cdef Py_ssize_t i, j, c = 0
    cdef uint64_t s, bit
    cdef int p
    cdef bint occ
    with nogil:
        for j in range(m):
            p = <int>modes[j]
            bit = (<uint64_t>1) << p
            for i in range(n):
                s = keys[i]
                occ = (s & bit) != 0
                if occ == create:
                    continue
                ok[c] = s ^ bit
                oa[c] = coefs[j] * _sign_below(s, p) * amps[i]
                c += 1
    return out_k[:c], out_a[:c]


def pair(const uint64_t[::1] keys, const double complex[::1] amps,
         const int64_t[::1] ps, const int64_t[::1] qs,
         const double complex[::1] coefs, bint create):
    cdef Py_ssize_t n = keys.shape[0]
    cdef Py_ssize_t m = ps.shape[0]
    out_k = np.empty(n * m, dtype=np.uint64)
    out_a = np.empty(n * m, dtype=np.complex128)
    cdef uint64_t[::1] ok = out_k
    cdef double complex[::1] oa = out_a
    cdef Py_ssize_t i, j, c = 0
    cdef uint64_t s, mid, bp, bq, both
    cdef int p, q
    with nogil:
        for j in range(m):
            p = <int>ps[j]
            q = <int>qs[j]
            if p == q:
                continue
            bp = (<uint64_t>1) << p
            bq = (<uint64_t>1) << q
            both = bp | bq
            for i in range(n):
                s = keys[i]
                if create:
                    if (s & both) != 0:
                        continue
                else:
                    if (s & both) != both:
                        continue
                mid = s ^ bq
                ok[c] = mid ^ bp
                oa[c] = coefs[j] * _sign_below(s, q) * _sign_below(mid, p) * amps[i]
                c += 1
    return out_k[:c], out_a[:c]


def lift_step(const uint64_t[::1] rem, const uint64_t[::1] out,
              const double complex[::1] amps, const int64_t[::1] colptr,
              const int64_t[::1] rowind, const double complex[::1] vals):
    cdef Py_ssize_t n = rem.shape[0]
    cdef Py_ssize_t i, k, c = 0, total = 0
    cdef int s, p
    cdef uint64_t r, o, bit
    # upper bound on the output size
    with nogil:
        for i in range(n):
            if rem[i] == 0:
                total += 1
            else:
                s = 63 - __builtin_clzll(rem[i])
                total += colptr[s + 1] - colptr[s]
    res_r = np.empty(total, dtype=np.uint64)
    res_o = np.empty(total, dtype=np.uint64)
    res_a = np.empty(total, dtype=np.complex128)
    cdef uint64_t[::1] rr = res_r
    cdef uint64_t[::1] ro = res_o
    cdef double complex[::1] ra = res_a
    with nogil:
        for i in range(n):
            r = rem[i]
            o = out[i]
            if r == 0:
                rr[c] = r
                ro[c] = o
                ra[c] = amps[i]
                c += 1
                continue
            s = 63 - __builtin_clzll(r)
            r = r ^ ((<uint64_t>1) << s)
            for k in range(colptr[s], colptr[s + 1]):
                p = <int>rowind[k]
                bit = (<uint64_t>1) << p
                if (o & bit) != 0:
                    continue
                rr[c] = r
                ro[c] = o | bit
                ra[c] = vals[k] * _sign_below(o, p) * amps[i]
                c += 1
    return res_r[:c], res_o[:c], res_a[:c]
