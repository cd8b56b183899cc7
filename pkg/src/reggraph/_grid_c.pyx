# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan of binary DAG tables over a parameter grid."""

from libc.math cimport fabs


cdef inline double _det(double a, double b, double c, double d) nogil:
    return fabs(a * d - b * c)


def binary_grid_scan(grid, order, double tol):
    """Scan one topological order; see ``_grid_py.binary_grid_scan``."""
    cdef Py_ssize_t n = len(grid)
    cdef double g[64]
    cdef double h[64]
    cdef Py_ssize_t ia, ib0, ib1, j00, j01, j10, j11, x
    cdef int ip = order.index("i"), kp = order.index("k"), sp = order.index("s")
    cdef int role[8]
    cdef double q[8]
    cdef double w[4]      # P(first, second) for the four (x1, x2) cells
    cdef double a, b0, b1, m, c, dis, dks, worst
    cdef double nearest = 1e300
    cdef long long tables = 0, qualifying = 0, violations = 0
    if n > 64:
        raise ValueError("grid too fine")
    for x in range(n):
        g[x] = grid[x]
        h[x] = 1.0 - g[x]
    for x in range(8):
        bits = ((x >> 2) & 1, (x >> 1) & 1, x & 1)
        role[x] = bits[ip] * 4 + bits[kp] * 2 + bits[sp]
    with nogil:
        for ia in range(n):
            a = g[ia]
            for ib0 in range(n):
                b0 = g[ib0]
                w[0] = (1 - a) * (1 - b0)
                w[1] = (1 - a) * b0
                for ib1 in range(n):
                    b1 = g[ib1]
                    w[2] = a * (1 - b1)
                    w[3] = a * b1
                    for j00 in range(n):
                        q[role[0]] = w[0] * h[j00]
                        q[role[1]] = w[0] * g[j00]
                        for j01 in range(n):
                            q[role[2]] = w[1] * h[j01]
                            q[role[3]] = w[1] * g[j01]
                            for j10 in range(n):
                                q[role[4]] = w[2] * h[j10]
                                q[role[5]] = w[2] * g[j10]
                                for j11 in range(n):
                                    q[role[6]] = w[3] * h[j11]
                                    q[role[7]] = w[3] * g[j11]
                                    tables += 1
                                    # role index is 4*i + 2*k + s
                                    dis = _det(q[0] + q[2], q[1] + q[3], q[4] + q[6], q[5] + q[7])
                                    dks = _det(q[0] + q[4], q[1] + q[5], q[2] + q[6], q[3] + q[7])
                                    if dis < tol or dks < tol:
                                        continue
                                    qualifying += 1
                                    m = _det(q[0] + q[1], q[2] + q[3], q[4] + q[5], q[6] + q[7])
                                    c = _det(q[0], q[2], q[4], q[6])
                                    worst = _det(q[1], q[3], q[5], q[7])
                                    if c > worst:
                                        worst = c
                                    if m > worst:
                                        worst = m
                                    if worst < tol:
                                        violations += 1
                                    if worst < nearest:
                                        nearest = worst
    return tables, qualifying, violations, nearest
