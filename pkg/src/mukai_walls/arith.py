"""Integer helpers: extended gcd, integer kernels, primality, rational parsing."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from sympy import isprime as _isprime
from sympy.core.intfunc import igcdex
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

__all__ = [
    "egcd",
    "gcd_all",
    "integer_kernel",
    "is_prime",
    "smith_invariants",
    "to_fraction",
    "unimodular_inverse",
]


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(x, y, g)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x, y, g = igcdex(a, b)
    return int(x), int(y), int(g)


def gcd_all(values: Sequence[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g


def is_prime(n: int) -> bool:
    return bool(_isprime(n))


def to_fraction(value) -> Fraction:
    """Coerce an int, Fraction, ``"p/q"`` string or ``[p, q]`` pair to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, (tuple, list)) and len(value) == 2:
        num, den = value
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return Fraction(int(num), int(den))
    raise TypeError(f"cannot interpret {value!r} as a rational")


def integer_kernel(row: Sequence[int]) -> list[list[int]]:
    """Basis of ``{x in Z^n : row . x = 0}``.

    Column operations reduce ``row`` to ``(g, 0, ..., 0)`` while tracking a
    unimodular matrix ``U``; the last ``n - 1`` columns of ``U`` then span the
    kernel, which is automatically saturated.  A zero row yields the standard
    basis.
    """
    n = len(row)
    a = [int(x) for x in row]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    if not any(a):
        return [[U[i][j] for i in range(n)] for j in range(n)]

    def add_col(dst: int, src: int, q: int) -> None:
        # column dst -= q * column src
        a[dst] -= q * a[src]
        for i in range(n):
            U[i][dst] -= q * U[i][src]

    def swap_col(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        for r in range(n):
            U[r][i], U[r][j] = U[r][j], U[r][i]

    for j in range(1, n):
        while a[j] != 0:
            q = a[0] // a[j]
            add_col(0, j, q)
            swap_col(0, j)
    return [[U[i][j] for i in range(n)] for j in range(1, n)]


def smith_invariants(rows: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form of an integer matrix (absolute values)."""
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    k = min(snf.shape)
    return [abs(int(snf[i, i])) for i in range(k)]


def unimodular_inverse(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Exact inverse of an integer matrix with determinant +-1."""
    M = Matrix(rows)
    det = M.det()
    if det not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det={det})")
    inv = M.adjugate() * det
    return [[int(inv[i, j]) for j in range(inv.cols)] for i in range(inv.rows)]
