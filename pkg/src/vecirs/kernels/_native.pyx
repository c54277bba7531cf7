# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Cython twin of the fallback allocation scan.

Exploits the V shape of max(phi*A, (1-phi)*B) on the split grid to stop each
per-vehicle scan at the crossing, which is what makes the exhaustive oracle
cheap. Results match the numpy fallback exactly (same grid, same tie rules).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY


def best_allocation_scan(local_full, tx_full, edge_full, phi_lo, phi_hi, phi_grid,
                         use_max_objective=False):
    cdef double[::1] a = np.ascontiguousarray(local_full, dtype=np.float64)
    cdef double[:, ::1] tx = np.ascontiguousarray(tx_full, dtype=np.float64)
    cdef double[:, ::1] ed = np.ascontiguousarray(edge_full, dtype=np.float64)
    cdef double[:, ::1] lo = np.ascontiguousarray(phi_lo, dtype=np.float64)
    cdef double[:, ::1] hi = np.ascontiguousarray(phi_hi, dtype=np.float64)
    cdef double[::1] phi = np.ascontiguousarray(phi_grid, dtype=np.float64)
    cdef Py_ssize_t mb = tx.shape[0], n = tx.shape[1]
    cdef Py_ssize_t me = ed.shape[0], p = phi.shape[0]
    cdef bint use_max = bool(use_max_objective)

    cdef cnp.ndarray[cnp.int64_t, ndim=1] ilo_arr = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cur_idx_arr = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] best_idx_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] ilo = ilo_arr
    cdef cnp.int64_t[::1] ihi = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] cur_idx = cur_idx_arr
    cdef cnp.int64_t[::1] best_idx = best_idx_arr

    cdef double best_obj = INFINITY
    cdef Py_ssize_t best_ib = -1, best_ie = -1
    cdef Py_ssize_t ib, ie, i, j, k
    cdef double b_full, rest, t, tmin, obj, lob, hib
    cdef bint feasible_row

    for ib in range(mb):
        # feasible index window of the split grid per vehicle
        feasible_row = True
        for i in range(n):
            lob = lo[ib, i] - 1e-15
            hib = hi[ib, i] + 1e-15
            if lo[ib, i] > hi[ib, i]:
                ilo[i] = 1
                ihi[i] = 0
                feasible_row = False
                continue
            j = 0
            while j < p and phi[j] < lob:
                j += 1
            ilo[i] = j
            k = p - 1
            while k >= j and phi[k] > hib:
                k -= 1
            ihi[i] = k
            if j > k:
                feasible_row = False
        if not feasible_row:
            continue
        for ie in range(me):
            obj = 0.0
            for i in range(n):
                b_full = tx[ib, i] + ed[ie, i]
                tmin = INFINITY
                for j in range(ilo[i], ihi[i] + 1):
                    rest = 1.0 - phi[j]
                    if rest > 0.0:
                        t = rest * b_full
                    else:
                        t = 0.0
                    if phi[j] * a[i] > t:
                        t = phi[j] * a[i]
                    if t < tmin:
                        tmin = t
                        cur_idx[i] = j
                    elif t > tmin:
                        break  # past the V crossing, only worse from here
                if use_max:
                    if tmin > obj:
                        obj = tmin
                else:
                    obj = obj + tmin
            if obj < best_obj:
                best_obj = obj
                best_ib = ib
                best_ie = ie
                best_idx[:] = cur_idx
    if best_ib < 0:
        return float("inf"), -1, -1, None
    out_phi = np.empty(n, dtype=np.float64)
    for i in range(n):
        out_phi[i] = phi[best_idx[i]]
    return float(best_obj), int(best_ib), int(best_ie), out_phi
