# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled boolean-semiring kernels for matrices with at most 64 columns."""

from libc.stdint cimport uint64_t


def closure(rows, over):
    cdef Py_ssize_t n = len(rows)
    if n > 64:
        raise OverflowError("compiled kernels support at most 64 nodes")
    cdef uint64_t buf[64]
    cdef uint64_t ov = over
    cdef uint64_t bit, rv
    cdef Py_ssize_t i, v
    for i in range(n):
        buf[i] = rows[i]
    for v in range(n):
        bit = (<uint64_t>1) << v
        if not (ov & bit):
            continue
        rv = buf[v]
        for i in range(n):
            if buf[i] & bit:
                buf[i] |= rv
    return [buf[i] for i in range(n)]


def matmul(x, y):
    cdef Py_ssize_t nx = len(x), ny = len(y)
    if ny > 64:
        raise OverflowError("compiled kernels support at most 64 nodes")
    cdef uint64_t ybuf[64]
    cdef uint64_t xi, acc
    cdef Py_ssize_t i, j
    for j in range(ny):
        ybuf[j] = y[j]
    out = []
    for i in range(nx):
        xi = x[i]
        acc = 0
        j = 0
        while xi:
            if xi & 1:
                acc |= ybuf[j]
            xi >>= 1
            j += 1
        out.append(acc)
    return out


def transpose(rows, Py_ssize_t ncols):
    cdef Py_ssize_t n = len(rows)
    if ncols > 64 or n > 64:
        raise OverflowError("compiled kernels support at most 64 nodes")
    cdef uint64_t out[64]
    cdef uint64_t r
    cdef Py_ssize_t i, k
    for k in range(ncols):
        out[k] = 0
    for i in range(n):
        r = rows[i]
        k = 0
        while r:
            if r & 1:
                out[k] |= (<uint64_t>1) << i
            r >>= 1
            k += 1
    return [out[k] for k in range(ncols)]


def submatrix(rows, ridx, cidx):
    cdef Py_ssize_t pos, nc = len(cidx)
    cdef uint64_t r, acc
    cdef long long[64] cols
    if nc > 64:
        raise OverflowError("compiled kernels support at most 64 nodes")
    for pos in range(nc):
        cols[pos] = cidx[pos]
    out = []
    for i in ridx:
        r = rows[i]
        acc = 0
        for pos in range(nc):
            if (r >> cols[pos]) & 1:
                acc |= (<uint64_t>1) << pos
        out.append(acc)
    return out


cdef inline uint64_t _mul_row(uint64_t xi, uint64_t* y):
    cdef uint64_t acc = 0
    cdef Py_ssize_t j = 0
    while xi:
        if xi & 1:
            acc |= y[j]
        xi >>= 1
        j += 1
    return acc


cdef void _closure(uint64_t* buf, Py_ssize_t n, uint64_t ov):
    cdef Py_ssize_t i, v
    cdef uint64_t bit, rv
    for v in range(n):
        bit = (<uint64_t>1) << v
        if not (ov & bit):
            continue
        rv = buf[v]
        for i in range(n):
            if buf[i] & bit:
                buf[i] |= rv


def induced_rows(rows, row_idx, amask, bmask):
    cdef Py_ssize_t n = len(rows)
    if n > 64:
        raise OverflowError("compiled kernels support at most 64 nodes")
    cdef uint64_t a = amask, b = bmask
    cdef uint64_t z[64]
    cdef uint64_t zba_t[64]
    cdef uint64_t k[64]
    cdef uint64_t r, bit
    cdef Py_ssize_t i, j, x
    for i in range(n):
        z[i] = rows[i]
    _closure(z, n, a)
    for j in range(n):
        zba_t[j] = 0
    # zba_t[j] = column j of Z restricted to rows in b, for j in a
    for i in range(n):
        if not ((b >> i) & 1):
            continue
        r = z[i] & a
        j = 0
        while r:
            if r & 1:
                zba_t[j] |= (<uint64_t>1) << i
            r >>= 1
            j += 1
    for x in range(n):
        if (b >> x) & 1:
            k[x] = _mul_row(z[x] & a, zba_t) | ((<uint64_t>1) << x)
        else:
            k[x] = 0
    _closure(k, n, b)
    out = []
    for i in row_idx:
        # full rows of z in the last product, masked to b afterwards
        r = _mul_row(_mul_row(_mul_row(z[i] & a, zba_t), k), z) & b
        out.append((z[i] & b) | r)
    return out
