"""Exact integer and rational linear algebra for small dense systems."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


def integer_kernel_basis(rows: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Z-basis of ``{y in Z^n : row . y = 0 for every row}``.

    Column-style extended Euclid: find unimodular ``U`` with ``M U`` in
    column echelon form; the columns of ``U`` past the rank span the kernel
    lattice, which is saturated by construction.
    """
    m = [list(map(int, row)) for row in rows]
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_op(dst: int, src: int, k: int):
        # column dst -= k * column src
        for row in m:
            row[dst] -= k * row[src]
        for row in u:
            row[dst] -= k * row[src]

    def swap(a: int, b: int):
        for row in m:
            row[a], row[b] = row[b], row[a]
        for row in u:
            row[a], row[b] = row[b], row[a]

    pivot = 0
    for row in m:
        if pivot >= n:
            break
        while True:
            nz = [j for j in range(pivot, n) if row[j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(row[j]))
            if jmin != pivot:
                swap(pivot, jmin)
            done = True
            for j in range(pivot + 1, n):
                if row[j] != 0:
                    col_op(j, pivot, row[j] // row[pivot])
                    if row[j] != 0:
                        done = False
            if done:
                break
        if any(row[j] != 0 for j in range(pivot, n)):
            pivot += 1
    return [tuple(u[i][j] for i in range(n)) for j in range(pivot, n)]


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, abs(int(x)))
    return g == 1


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    return len(rows[0]) - len(integer_kernel_basis(rows, len(rows[0]))) if rows else 0


@dataclass
class LinearSolution:
    """Outcome of an exact square solve.

    ``status`` is ``"unique"``, ``"inconsistent"`` or ``"underdetermined"``.
    """

    status: str
    det: int
    x: tuple[Fraction, ...] | None = None


def solve_integer_system(a: Sequence[Sequence[int]], b: Sequence[Fraction]) -> LinearSolution:
    """Solve the square system ``a x = b`` exactly.

    ``a`` has integer entries; ``b`` is rational.  Uses fraction-free
    (Bareiss) elimination on the augmented matrix, so ``det`` is exact.
    """
    n = len(a)
    if any(len(row) != n for row in a) or len(b) != n:
        raise ValueError("system must be square")
    b = [Fraction(x) for x in b]
    scale = 1
    for x in b:
        scale = lcm(scale, x.denominator)
    m = [list(map(int, a[i])) + [int(b[i] * scale)] for i in range(n)]
    sign = 1
    prev = 1
    row = 0
    pivots = []
    for col in range(n):
        p = next((i for i in range(row, n) if m[i][col] != 0), None)
        if p is None:
            continue
        if p != row:
            m[row], m[p] = m[p], m[row]
            sign = -sign
        piv = m[row][col]
        for i in range(row + 1, n):
            mi = m[i]
            f = mi[col]
            for j in range(col + 1, n + 1):
                mi[j] = (piv * mi[j] - f * m[row][j]) // prev
            mi[col] = 0
        # rows above the pivot row keep their entries; only rows below change
        prev = piv
        pivots.append(col)
        row += 1
    rank = row
    if rank < n:
        consistent = all(m[i][n] == 0 for i in range(rank, n))
        return LinearSolution("underdetermined" if consistent else "inconsistent", 0)
    det = sign * m[n - 1][n - 1]
    # back substitution on the fraction-free upper triangle
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(m[i][n])
        for j in range(i + 1, n):
            s -= m[i][j] * x[j]
        x[i] = s / m[i][i]
    return LinearSolution("unique", det, tuple(v / scale for v in x))


def affine_solutions(
    a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]
) -> tuple[tuple[Fraction, ...], list[tuple[Fraction, ...]]] | None:
    """Particular solution and kernel basis of ``a x = b``, or None if inconsistent."""
    rows = len(a)
    n = len(a[0]) if rows else 0
    m = [[Fraction(v) for v in a[i]] + [Fraction(b[i])] for i in range(rows)]
    pivots: list[int] = []
    row = 0
    for col in range(n):
        p = next((i for i in range(row, rows) if m[i][col] != 0), None)
        if p is None:
            continue
        m[row], m[p] = m[p], m[row]
        piv = m[row][col]
        m[row] = [v / piv for v in m[row]]
        for i in range(rows):
            if i != row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
    if any(m[i][n] != 0 for i in range(row, rows)):
        return None
    x0 = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x0[col] = m[i][n]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * n
        v[fcol] = Fraction(1)
        for i, col in enumerate(pivots):
            v[col] = -m[i][fcol]
        basis.append(tuple(v))
    return tuple(x0), basis


def inequalities_feasible(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> bool:
    """Whether ``{y : row . y >= rhs_i for all i}`` is nonempty (Fourier-Motzkin)."""
    system = [([Fraction(v) for v in row], Fraction(c)) for row, c in zip(rows, rhs)]
    dim = len(system[0][0]) if system else 0
    for k in range(dim):
        pos, neg, rest = [], [], []
        for row, c in system:
            (pos if row[k] > 0 else neg if row[k] < 0 else rest).append((row, c))
        combined = list(rest)
        for rp, cp in pos:
            for rn, cn in neg:
                fp, fn = -rn[k], rp[k]
                combined.append(([fp * x + fn * y for x, y in zip(rp, rn)], fp * cp + fn * cn))
        # drop duplicates to keep the blow-up in check
        seen = {}
        for row, c in combined:
            key = tuple(row)
            if key not in seen or seen[key] < c:
                seen[key] = c
        system = [(list(key), c) for key, c in seen.items()]
    return all(c <= 0 for _, c in system)
