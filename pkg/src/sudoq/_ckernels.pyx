# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``.

Complex arithmetic is spelled out on real and imaginary parts so the loops
compile to plain C without relying on the C99 complex ABI.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef Py_ssize_t _find(Py_ssize_t[::1] parent, Py_ssize_t a) noexcept nogil:
    cdef Py_ssize_t root = a, nxt
    while parent[root] != root:
        root = parent[root]
    while parent[a] != root:
        nxt = parent[a]
        parent[a] = root
        a = nxt
    return root


def phase_clusters(vs, double threshold):
    cdef const double[:, ::1] w = np.ascontiguousarray(vs, dtype=np.complex128).view(np.float64)
    cdef Py_ssize_t n = w.shape[0], d2 = w.shape[1]
    cdef Py_ssize_t a, b, i, ra, rb
    cdef double re, im, thr2 = threshold * threshold
    parent_arr = np.arange(n, dtype=np.intp)
    cdef Py_ssize_t[::1] parent = parent_arr
    with nogil:
        for a in range(n):
            for b in range(a + 1, n):
                ra = _find(parent, a)
                rb = _find(parent, b)
                if ra == rb:
                    continue
                re = 0.0
                im = 0.0
                for i in range(0, d2, 2):
                    re += w[a, i] * w[b, i] + w[a, i + 1] * w[b, i + 1]
                    im += w[a, i] * w[b, i + 1] - w[a, i + 1] * w[b, i]
                if re * re + im * im >= thr2:
                    if ra < rb:
                        parent[rb] = ra
                    else:
                        parent[ra] = rb
    labels_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] labels = labels_arr
    remap_arr = np.full(n, -1, dtype=np.int64)
    cdef long long[::1] remap = remap_arr
    cdef long long nxt = 0
    for a in range(n):
        ra = _find(parent, a)
        if remap[ra] < 0:
            remap[ra] = nxt
            nxt += 1
        labels[a] = remap[ra]
    return labels_arr


def overlap_power_sums(vs, int tmax):
    cdef const double[:, ::1] w = np.ascontiguousarray(vs, dtype=np.complex128).view(np.float64)
    cdef Py_ssize_t n = w.shape[0], d2 = w.shape[1]
    cdef Py_ssize_t a, b, i
    cdef int t
    cdef double re, im, x, p
    out_arr = np.zeros(tmax + 1)
    cdef double[::1] out = out_arr
    # per-row accumulators keep the reduction order fixed and close to a
    # blocked sum, which limits round-off growth for large sets
    row_arr = np.zeros(tmax + 1)
    cdef double[::1] row = row_arr
    with nogil:
        for a in range(n):
            for t in range(tmax + 1):
                row[t] = 0.0
            for b in range(n):
                re = 0.0
                im = 0.0
                for i in range(0, d2, 2):
                    re += w[a, i] * w[b, i] + w[a, i + 1] * w[b, i + 1]
                    im += w[a, i] * w[b, i + 1] - w[a, i + 1] * w[b, i]
                x = re * re + im * im
                p = 1.0
                for t in range(tmax + 1):
                    row[t] += p
                    p *= x
            for t in range(tmax + 1):
                out[t] += row[t]
    return out_arr


def violation_grad(z, groups, ref, free, double target, double weight):
    cdef const double[:, ::1] zw = np.ascontiguousarray(z, dtype=np.complex128).view(np.float64)
    cdef const double[:, ::1] rw = np.ascontiguousarray(ref, dtype=np.complex128).view(np.float64)
    cdef const long long[:, ::1] g = np.ascontiguousarray(groups, dtype=np.int64)
    cdef const cnp.uint8_t[::1] fr = np.ascontiguousarray(free, dtype=np.uint8)
    cdef Py_ssize_t ncell = zw.shape[0], d2 = zw.shape[1]
    cdef Py_ssize_t ng = g.shape[0], m = g.shape[1]
    cdef Py_ssize_t q, a, b, ca, cb, i
    cdef double re, im, f = 0.0, dist = 0.0, h, pr, pi, nz
    grad_arr = np.zeros((ncell, d2 // 2), dtype=np.complex128)
    cdef double[:, ::1] gw = grad_arr.view(np.float64)
    with nogil:
        for q in range(ng):
            for a in range(m):
                ca = g[q, a]
                for b in range(m):
                    cb = g[q, b]
                    # r = <c_b|c_a> - delta_ab
                    re = 0.0
                    im = 0.0
                    for i in range(0, d2, 2):
                        re += zw[cb, i] * zw[ca, i] + zw[cb, i + 1] * zw[ca, i + 1]
                        im += zw[cb, i] * zw[ca, i + 1] - zw[cb, i + 1] * zw[ca, i]
                    if a == b:
                        re -= 1.0
                    f += re * re + im * im
                    # grad[c_a] += 4 r c_b
                    for i in range(0, d2, 2):
                        gw[ca, i] += 4.0 * (re * zw[cb, i] - im * zw[cb, i + 1])
                        gw[ca, i + 1] += 4.0 * (re * zw[cb, i + 1] + im * zw[cb, i])

        if weight > 0.0:
            for a in range(ncell):
                if fr[a]:
                    pr = 0.0
                    pi = 0.0
                    nz = 0.0
                    for i in range(0, d2, 2):
                        pr += rw[a, i] * zw[a, i] + rw[a, i + 1] * zw[a, i + 1]
                        pi += rw[a, i] * zw[a, i + 1] - rw[a, i + 1] * zw[a, i]
                        nz += zw[a, i] * zw[a, i] + zw[a, i + 1] * zw[a, i + 1]
                    dist += nz - (pr * pr + pi * pi)
            h = target - dist
            if h > 0.0:
                f += weight * h * h
                for a in range(ncell):
                    if fr[a]:
                        pr = 0.0
                        pi = 0.0
                        for i in range(0, d2, 2):
                            pr += rw[a, i] * zw[a, i] + rw[a, i + 1] * zw[a, i + 1]
                            pi += rw[a, i] * zw[a, i + 1] - rw[a, i + 1] * zw[a, i]
                        for i in range(0, d2, 2):
                            gw[a, i] -= 4.0 * weight * h * (
                                zw[a, i] - (rw[a, i] * pr - rw[a, i + 1] * pi))
                            gw[a, i + 1] -= 4.0 * weight * h * (
                                zw[a, i + 1] - (rw[a, i] * pi + rw[a, i + 1] * pr))

        for a in range(ncell):
            if not fr[a]:
                for i in range(d2):
                    gw[a, i] = 0.0
    return f, grad_arr
