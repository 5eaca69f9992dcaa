"""Dense exact linear algebra over the scalar fields used by the package.

Matrices are lists of row lists whose entries are ``Fraction`` or ``QSqrt2``
scalars (anything ``exactnum.as_scalar`` accepts).  Everything here is plain
Gaussian elimination with free pivot choice, which is valid over any field
and keeps results exact end to end.
"""

from __future__ import annotations

from typing import List, Sequence

from .exactnum import as_scalar

Matrix = List[List[object]]


def mat_copy(mat: Sequence[Sequence[object]]) -> Matrix:
    return [[as_scalar(x) for x in row] for row in mat]


def exact_det(mat: Sequence[Sequence[object]]) -> object:
    """Determinant of a square matrix over an exact field."""
    a = mat_copy(mat)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    zero, det = as_scalar(0), as_scalar(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != zero), None)
        if piv is None:
            return zero
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det = det * a[k][k]
        inv = as_scalar(1) / a[k][k]
        for i in range(k + 1, n):
            if a[i][k] == zero:
                continue
            fac = a[i][k] * inv
            for j in range(k, n):
                a[i][j] = a[i][j] - fac * a[k][j]
    return det


def exact_solve(mat: Sequence[Sequence[object]],
                rhs: Sequence[Sequence[object]]) -> Matrix:
    """Solve ``mat @ x = rhs`` exactly; ``rhs`` holds stacked column rows.

    Args:
        mat: Square invertible matrix.
        rhs: Right-hand sides as a matrix of the same row count (each column
            is one system).

    Returns:
        The solution matrix, same shape as ``rhs``.

    Raises:
        ZeroDivisionError: If the matrix is singular.
    """
    a = mat_copy(mat)
    b = mat_copy(rhs)
    n = len(a)
    if len(b) != n:
        raise ValueError("right-hand side row count mismatch")
    zero = as_scalar(0)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != zero), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            b[k], b[piv] = b[piv], b[k]
        inv = as_scalar(1) / a[k][k]
        a[k] = [x * inv for x in a[k]]
        b[k] = [x * inv for x in b[k]]
        for i in range(n):
            if i == k or a[i][k] == zero:
                continue
            fac = a[i][k]
            a[i] = [x - fac * y for x, y in zip(a[i], a[k])]
            b[i] = [x - fac * y for x, y in zip(b[i], b[k])]
    return b


def exact_inverse(mat: Sequence[Sequence[object]]) -> Matrix:
    """Inverse of a square invertible matrix over an exact field."""
    n = len(mat)
    one, zero = as_scalar(1), as_scalar(0)
    ident = [[one if i == j else zero for j in range(n)] for i in range(n)]
    return exact_solve(mat, ident)


def mat_mul(a: Sequence[Sequence[object]],
            b: Sequence[Sequence[object]]) -> Matrix:
    """Exact matrix product."""
    if a and b and len(a[0]) != len(b):
        raise ValueError("inner dimensions differ")
    zero = as_scalar(0)
    bt = list(zip(*b)) if b else []
    out: Matrix = []
    for row in a:
        orow = []
        for col in bt:
            s = zero
            for x, y in zip(row, col):
                s = s + as_scalar(x) * as_scalar(y)
            orow.append(s)
        out.append(orow)
    return out
