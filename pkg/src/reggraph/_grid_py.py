"""Vectorized scan of binary DAG tables over a parameter grid (numpy fallback)."""

from __future__ import annotations

import itertools

import numpy as np


def _det(m00, m01, m10, m11):
    return np.abs(m00 * m11 - m01 * m10)


def binary_grid_scan(grid, order, tol):
    """Scan the complete three-node DAG with topological ``order``.

    ``order`` lists the roles ``"i"``, ``"k"`` (the pair) and ``"s"`` (the
    inner node) from first to last. Returns ``(tables, qualifying,
    violations, nearest)``.
    """
    grid = np.asarray(grid, dtype=float)
    n = len(grid)
    shape = (n,) * 5
    pos = [order.index(r) for r in ("i", "k", "s")]

    def axis(j):
        s = [1] * 5
        s[j] = n
        return grid.reshape(s)

    b1 = axis(0)
    c = {(0, 0): axis(1), (0, 1): axis(2), (1, 0): axis(3), (1, 1): axis(4)}
    tables = qualifying = violations = 0
    nearest = np.inf
    for a in grid:
        for b0 in grid:
            b = {0: b0, 1: b1}
            q = [None] * 8  # index 4*i + 2*k + s
            for x in itertools.product((0, 1), repeat=3):
                pa = a if x[0] else 1 - a
                pb = b[x[0]] if x[1] else 1 - b[x[0]]
                pc = c[x[0], x[1]] if x[2] else 1 - c[x[0], x[1]]
                q[4 * x[pos[0]] + 2 * x[pos[1]] + x[pos[2]]] = np.broadcast_to(pa * pb * pc, shape)
            dis = _det(q[0] + q[2], q[1] + q[3], q[4] + q[6], q[5] + q[7])
            dks = _det(q[0] + q[4], q[1] + q[5], q[2] + q[6], q[3] + q[7])
            ok = (dis >= tol) & (dks >= tol)
            worst = np.maximum.reduce([
                _det(q[0] + q[1], q[2] + q[3], q[4] + q[5], q[6] + q[7]),
                _det(q[0], q[2], q[4], q[6]),
                _det(q[1], q[3], q[5], q[7]),
            ])[ok]
            tables += ok.size
            qualifying += int(ok.sum())
            violations += int((worst < tol).sum())
            if worst.size:
                nearest = min(nearest, float(worst.min()))
    return tables, qualifying, violations, nearest
