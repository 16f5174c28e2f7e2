"""Exact determinants of polynomial and numeric matrices."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .field import PrimeField
from .poly import Poly, PolyError


def _check_square(m):
    n = len(m)
    if any(len(row) != n for row in m):
        raise PolyError("matrix is not square")
    return n


def det_fraction_free(m: Sequence[Sequence[Poly]], vars=None, field=None) -> Poly:
    """Determinant of a square matrix of polynomials by Bareiss elimination.

    Every division is exact. Pivots are chosen among the nonzero entries of
    the current column with the fewest terms, which keeps intermediate
    minors small when the matrix is mostly numeric. ``vars``/``field`` are
    only needed for the empty matrix.
    """
    n = _check_square(m)
    if n == 0:
        if vars is None or field is None:
            from .field import QQ
            return Poly.constant(1, vars or (), field or QQ)
        return Poly.constant(1, vars, field)
    ring = (m[0][0].vars, m[0][0].field)
    for row in m:
        for x in row:
            if (x.vars, x.field) != ring:
                raise PolyError("incompatible rings")
    a = [list(row) for row in m]
    sign = 1
    prev = None
    for k in range(n - 1):
        best = None
        for i in range(k, n):
            x = a[i][k]
            if x and (best is None or len(x) < len(a[best][k])):
                best = i
        if best is None:
            return Poly(ring[0], {}, ring[1])
        if best != k:
            a[k], a[best] = a[best], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                v = piv * row_i[j]
                if aik and row_k[j]:
                    v = v - aik * row_k[j]
                if prev is not None and v:
                    v = v.divexact(prev)
                row_i[j] = v
            row_i[k] = Poly(ring[0], {}, ring[1])
        prev = piv
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def det_cofactor(m: Sequence[Sequence]) -> object:
    """Laplace expansion along the first row; works for Poly or scalars."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = None
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * det_cofactor(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return m[0][0] * 0
    return total


def det_numeric(m: Sequence[Sequence], field) -> object:
    """Determinant of a matrix of field elements.

    Over GF(p) this is plain Gaussian elimination; over Q each row is scaled
    to integers and the integer determinant is taken with Bareiss.
    """
    n = len(m)
    if n == 0:
        return field.one
    if isinstance(field, PrimeField):
        return _det_mod(m, field.p)
    scale = Fraction(1)
    rows = []
    for row in m:
        den = 1
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = math.lcm(den, x.denominator)
        if den != 1:
            scale /= den
        rows.append([int(x * den) for x in row])
    return Fraction(_det_int(rows)) * scale


def _det_int(a: list) -> int:
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            if aik:
                for j in range(k + 1, n):
                    row_i[j] = (piv * row_i[j] - aik * row_k[j]) // prev
            elif piv != prev:
                for j in range(k + 1, n):
                    row_i[j] = piv * row_i[j] // prev
        prev = piv
    return sign * a[n - 1][n - 1]


def _det_mod(m, p: int) -> int:
    a = [[x % p for x in row] for row in m]
    n = len(a)
    det = 1
    for k in range(n):
        piv_row = next((i for i in range(k, n) if a[i][k]), None)
        if piv_row is None:
            return 0
        if piv_row != k:
            a[k], a[piv_row] = a[piv_row], a[k]
            det = -det
        piv = a[k][k]
        det = det * piv % p
        inv = pow(piv, -1, p)
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            f = row_i[k] * inv % p
            if f:
                for j in range(k + 1, n):
                    if row_k[j]:
                        row_i[j] = (row_i[j] - f * row_k[j]) % p
    return det % p
