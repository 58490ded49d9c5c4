"""Integer lattice utilities: kernels, Hermite reduction, box enumeration."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterator

import numpy as np

IntVec = tuple[int, ...]


def vec_add(a: IntVec, b: IntVec) -> IntVec:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: IntVec, b: IntVec) -> IntVec:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(k: int, a: IntVec) -> IntVec:
    return tuple(k * x for x in a)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def int_kernel(rows: list[list[int]]) -> list[IntVec]:
    """Z-basis of {z in Z^m : A z = 0} for an integer matrix A (list of rows).

    The kernel of an integer matrix is a saturated (pure) sublattice, so the
    returned basis generates every integer solution.
    """
    if not rows:
        raise ValueError("empty constraint matrix")
    m = len(rows[0])
    r = len(rows)
    # Work on B = A^T (m x r) with a unimodular transform U (m x m).
    B = [[rows[i][j] for i in range(r)] for j in range(m)]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    row = 0
    for col in range(r):
        for i in range(row + 1, m):
            if B[i][col] == 0:
                continue
            a, b = B[row][col], B[i][col]
            if a == 0:
                B[row], B[i] = B[i], B[row]
                U[row], U[i] = U[i], U[row]
                continue
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            B[row], B[i] = (
                [x * u + y * v for u, v in zip(B[row], B[i])],
                [-q * u + p * v for u, v in zip(B[row], B[i])],
            )
            U[row], U[i] = (
                [x * u + y * v for u, v in zip(U[row], U[i])],
                [-q * u + p * v for u, v in zip(U[row], U[i])],
            )
        if B[row][col] != 0:
            row += 1
            if row == m:
                break
    return [tuple(U[i]) for i in range(row, m)]


def hermite_form(basis: list[IntVec]) -> list[list[int]]:
    """Row-style Hermite echelon of the given generators (zero rows dropped)."""
    if not basis:
        return []
    m = len(basis[0])
    work = [list(b) for b in basis]
    out: list[list[int]] = []
    row = 0
    for col in range(m):
        for i in range(row + 1, len(work)):
            if work[i][col] == 0:
                continue
            a, b = work[row][col], work[i][col]
            if a == 0:
                work[row], work[i] = work[i], work[row]
                continue
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            work[row], work[i] = (
                [x * u + y * v for u, v in zip(work[row], work[i])],
                [-q * u + p * v for u, v in zip(work[row], work[i])],
            )
        if row < len(work) and work[row][col] != 0:
            if work[row][col] < 0:
                work[row] = [-v for v in work[row]]
            out.append(work[row])
            row += 1
            if row == len(work):
                break
    return out


def in_lattice(basis: list[IntVec], v: IntVec) -> bool:
    """Membership of v in the integer row span of basis."""
    h = hermite_form(basis)
    rest = list(v)
    for row in h:
        col = next(j for j, x in enumerate(row) if x)
        if rest[col] % row[col] != 0:
            return False
        f = rest[col] // row[col]
        rest = [a - f * b for a, b in zip(rest, row)]
    return all(x == 0 for x in rest)


def same_lattice(a: list[IntVec], b: list[IntVec]) -> bool:
    return all(in_lattice(b, v) for v in a) and all(in_lattice(a, v) for v in b)


def solve_coordinates(basis: list[IntVec], v: IntVec) -> IntVec | None:
    """Integer w with w . basis = v, or None if v is outside the row span."""
    if not basis:
        return None
    m = len(basis[0])
    r = len(basis)
    # Solve over Q by elimination on the augmented transpose, then check Z.
    aug = [[Fraction(basis[i][j]) for i in range(r)] + [Fraction(v[j])] for j in range(m)]
    piv_cols: list[tuple[int, int]] = []
    row = 0
    for col in range(r):
        piv = next((i for i in range(row, m) if aug[i][col]), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        prow = aug[row]
        for i in range(m):
            if i != row and aug[i][col]:
                f = aug[i][col] / prow[col]
                aug[i] = [a - f * b for a, b in zip(aug[i], prow)]
        piv_cols.append((row, col))
        row += 1
    w = [Fraction(0)] * r
    for prow, col in piv_cols:
        w[col] = aug[prow][-1] / aug[prow][col]
    for i in range(row, m):
        if aug[i][-1]:
            return None
    if any(q.denominator != 1 for q in w):
        return None
    wi = tuple(int(q) for q in w)
    if tuple(sum(wi[i] * basis[i][j] for i in range(r)) for j in range(m)) != v:
        return None
    return wi


# -- canonical box enumeration ----------------------------------------------


def iter_box(m: int, bound: int) -> Iterator[IntVec]:
    """Points of [-bound, bound]^m ordered by (max-norm, lexicographic)."""
    for s in range(bound + 1):
        yield from _iter_shell(m, s)


def _iter_shell(m: int, s: int) -> Iterator[IntVec]:
    if s == 0:
        yield (0,) * m
        return
    if m == 1:
        yield (-s,)
        yield (s,)
        return
    for a in range(-s, s + 1):
        if abs(a) == s:
            for rest in _iter_full_box(m - 1, s):
                yield (a,) + rest
        else:
            for rest in _iter_shell(m - 1, s):
                yield (a,) + rest


def _iter_full_box(m: int, s: int) -> Iterator[IntVec]:
    if m == 0:
        yield ()
        return
    for a in range(-s, s + 1):
        for rest in _iter_full_box(m - 1, s):
            yield (a,) + rest


def full_box_array(m: int, s: int) -> np.ndarray:
    """All points of [-s, s]^m as an array in lexicographic row order."""
    axes = [np.arange(-s, s + 1)] * m
    grid = np.meshgrid(*axes, indexing="ij")
    return np.stack(grid, axis=-1).reshape(-1, m)


_BLOCK_ROW_LIMIT = 2_000_000


def _prepend(a: int, rest: np.ndarray) -> np.ndarray:
    return np.concatenate(
        [np.full((rest.shape[0], 1), a, dtype=np.int64), rest], axis=1
    )


def _full_box_blocks(m: int, s: int) -> Iterator[np.ndarray]:
    """[-s, s]^m in lexicographic order, chunked to bounded-size arrays."""
    if (2 * s + 1) ** m <= _BLOCK_ROW_LIMIT:
        yield full_box_array(m, s)
        return
    for a in range(-s, s + 1):
        for sub in _full_box_blocks(m - 1, s):
            yield _prepend(a, sub)


def shell_blocks(m: int, s: int) -> Iterator[np.ndarray]:
    """The max-norm-s shell in lexicographic order, yielded in array blocks."""
    if s == 0:
        yield np.zeros((1, m), dtype=np.int64)
        return
    if m == 1:
        yield np.array([[-s]], dtype=np.int64)
        yield np.array([[s]], dtype=np.int64)
        return
    if (2 * s + 1) ** (m - 1) <= _BLOCK_ROW_LIMIT:
        rest = full_box_array(m - 1, s)
        on_shell = rest[np.abs(rest).max(axis=1) == s]
        for a in range(-s, s + 1):
            yield _prepend(a, rest if abs(a) == s else on_shell)
        return
    for a in range(-s, s + 1):
        if abs(a) == s:
            for sub in _full_box_blocks(m - 1, s):
                yield _prepend(a, sub)
        else:
            for sub in shell_blocks(m - 1, s):
                yield _prepend(a, sub)
