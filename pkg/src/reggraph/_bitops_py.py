"""Pure-Python boolean-semiring kernels on bitset rows.

A square 0/1 matrix is a list of Python ints; bit ``k`` of ``rows[i]`` is
entry ``(i, k)``. Python ints are unbounded, so these work for any size.
"""


def closure(rows, over):
    """Warshall closure restricted to pivots whose bit is set in ``over``."""
    rows = list(rows)
    n = len(rows)
    v = 0
    while over:
        if over & 1:
            bit = 1 << v
            rv = rows[v]
            for i in range(n):
                if rows[i] & bit:
                    rows[i] |= rv
        over >>= 1
        v += 1
    return rows


def matmul(x, y):
    """Boolean product: ``out[i] = OR of y[j] for every bit j of x[i]``."""
    out = []
    for xi in x:
        acc = 0
        j = 0
        while xi:
            if xi & 1:
                acc |= y[j]
            xi >>= 1
            j += 1
        out.append(acc)
    return out


def transpose(rows, ncols):
    out = [0] * ncols
    for i, r in enumerate(rows):
        bit = 1 << i
        k = 0
        while r:
            if r & 1:
                out[k] |= bit
            r >>= 1
            k += 1
    return out


def submatrix(rows, ridx, cidx):
    """Select rows ``ridx`` and columns ``cidx`` (columns are re-packed densely)."""
    out = []
    for i in ridx:
        r = rows[i]
        acc = 0
        for pos, k in enumerate(cidx):
            if (r >> k) & 1:
                acc |= 1 << pos
        out.append(acc)
    return out


def induced_rows(rows, row_idx, amask, bmask):
    """Rows ``row_idx`` of ``In[Z_ab + Z_aa Z_ba' K Z_bb]`` over the full index space.

    ``Z`` is the closure of ``rows`` over ``amask`` and ``K`` the closure of
    ``I + Z_ba Z_ba'`` over ``bmask``.
    """
    n = len(rows)
    z = closure(rows, amask)
    zt = transpose(z, n)
    zba_t = [zt[j] & bmask if (amask >> j) & 1 else 0 for j in range(n)]
    za = [r & amask for r in z]
    s = matmul([za[x] if (bmask >> x) & 1 else 0 for x in range(n)], zba_t)
    s = [(s[x] | (1 << x)) if (bmask >> x) & 1 else 0 for x in range(n)]
    k = closure(s, bmask)
    zb = [r & bmask for r in z]
    first = matmul([za[i] for i in row_idx], zba_t)
    second = matmul(matmul(first, k), zb)
    return [zb[i] | second[p] for p, i in enumerate(row_idx)]
