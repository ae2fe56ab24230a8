"""Gaussian elimination over any exact backend."""
from __future__ import annotations

from .scalars import Backend


def row_echelon(rows, backend: Backend):
    """Reduced row echelon form and pivot columns of a list-of-lists matrix."""
    backend.require_exact("row reduction")
    m = [[backend.coerce(x) for x in row] for row in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if not backend.is_zero(m[i][c])), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = backend.one / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not backend.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows, backend: Backend) -> int:
    return len(row_echelon(rows, backend)[1])


def determinant(rows, backend: Backend):
    backend.require_exact("determinant")
    m = [[backend.coerce(x) for x in row] for row in rows]
    n = len(m)
    det = backend.one
    for c in range(n):
        p = next((i for i in range(c, n) if not backend.is_zero(m[i][c])), None)
        if p is None:
            return backend.zero
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det = det * m[c][c]
        inv = backend.one / m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] * inv
            if not backend.is_zero(f):
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def leading_minors(rows, backend: Backend) -> list:
    return [determinant([row[:k] for row in rows[:k]], backend) for k in range(1, len(rows) + 1)]
