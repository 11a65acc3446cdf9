"""Exact integer and rational linear algebra on small sparse matrices.

Matrices are sequences of integer rows. ``smith_invariants`` works on a
sparse dict-of-rows copy with pivot selection by smallest magnitude, which
keeps fill-in low on the near-permutation matrices that show up here.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

Matrix = Sequence[Sequence[int]]


def _sparse(rows: Matrix) -> dict[int, dict[int, int]]:
    return {r: {c: v for c, v in enumerate(row) if v} for r, row in enumerate(rows)}


def _pick_pivot(rows: dict[int, dict[int, int]]):
    best = None
    for r, row in rows.items():
        for c, v in row.items():
            key = (abs(v), len(row))
            if best is None or key < best[0]:
                best = (key, r, c)
                if key == (1, 1):
                    return r, c
    return None if best is None else (best[1], best[2])


def _normalize_diagonal(diag: list[int]) -> list[int]:
    """Turn any diagonal into invariant factors d_1 | d_2 | ..."""
    diag = [abs(x) for x in diag]
    n = len(diag)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = diag[i], diag[j]
            g = gcd(a, b)
            if g == 0:
                continue
            diag[i], diag[j] = g, a // g * b
    nonzero = sorted(x for x in diag if x)
    return nonzero + [0] * (n - len(nonzero))


def smith_invariants(rows: Matrix, ncols: int | None = None) -> list[int]:
    """Invariant factors of an integer matrix (zeros for the rank deficit)."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    work = _sparse(rows)
    work = {r: row for r, row in work.items() if row}
    diag: list[int] = []
    while True:
        pick = _pick_pivot(work)
        if pick is None:
            break
        r, c = pick
        while True:
            v = work[r][c]
            redo = False
            # clear column c with row operations
            for s in list(work):
                if s == r:
                    continue
                x = work[s].get(c)
                if not x:
                    continue
                q = x // v
                row_s = work[s]
                for t, y in work[r].items():
                    nv = row_s.get(t, 0) - q * y
                    if nv:
                        row_s[t] = nv
                    else:
                        row_s.pop(t, None)
                if row_s.get(c):
                    redo = True
            # clear row r with column operations
            row_r = work[r]
            for t in [t for t in row_r if t != c]:
                q = row_r[t] // v
                if not q:
                    redo = True
                    continue
                for s, row_s in work.items():
                    x = row_s.get(c)
                    if x:
                        nv = row_s.get(t, 0) - q * x
                        if nv:
                            row_s[t] = nv
                        else:
                            row_s.pop(t, None)
                if row_r.get(t):
                    redo = True
            if not redo:
                break
            # a remainder survived: move the pivot to the smallest entry in
            # the pivot row or column and go again
            best = (abs(v), r, c)
            for t, y in work[r].items():
                if abs(y) < best[0]:
                    best = (abs(y), r, t)
            for s, row_s in work.items():
                y = row_s.get(c)
                if y and abs(y) < best[0]:
                    best = (abs(y), s, c)
            _, r, c = best
        diag.append(work[r][c])
        del work[r]
        for row_s in work.values():
            row_s.pop(c, None)
        work = {s: row for s, row in work.items() if row}
    rank = len(diag)
    size = min(len(rows), ncols)
    return _normalize_diagonal(diag + [0] * (size - rank))


def lattice_index(rows: Matrix) -> int:
    """Index of the row lattice in Z^n; 0 if it has lower rank."""
    inv = smith_invariants(rows)
    if len(rows) != len(rows[0]) or 0 in inv:
        return 0
    out = 1
    for x in inv:
        out *= x
    return out


def hermite_form(rows: Matrix) -> list[list[int]]:
    """Row-style Hermite normal form: upper echelon, positive pivots,
    entries above each pivot reduced into [0, pivot)."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if mat else 0
    pr = 0
    pivots = []
    for c in range(ncols):
        if pr >= nrows:
            break
        # gcd-combine column c into row pr
        for s in range(pr + 1, nrows):
            if mat[s][c] == 0:
                continue
            a, b = mat[pr][c], mat[s][c]
            g, x, y = _xgcd(a, b)
            u, w = a // g, b // g
            top = [x * p_ + y * q_ for p_, q_ in zip(mat[pr], mat[s])]
            bot = [u * q_ - w * p_ for p_, q_ in zip(mat[pr], mat[s])]
            mat[pr], mat[s] = top, bot
        if mat[pr][c] == 0:
            continue
        if mat[pr][c] < 0:
            mat[pr] = [-x for x in mat[pr]]
        piv = mat[pr][c]
        for s in range(pr):
            q = mat[s][c] // piv
            if q:
                mat[s] = [x - q * y for x, y in zip(mat[s], mat[pr])]
        pivots.append(c)
        pr += 1
    return [row for row in mat if any(row)]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def in_row_span(hnf: list[list[int]], vec: Sequence[int]) -> bool:
    """Membership of an integer vector in the Z-span of HNF rows."""
    v = list(vec)
    for row in hnf:
        c = next(i for i, x in enumerate(row) if x)
        if v[c] % row[c]:
            return False
        q = v[c] // row[c]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return not any(v)


@lru_cache(maxsize=512)
def _inverse(rows: tuple[tuple[int, ...], ...]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(rows)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(rows)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return tuple(tuple(row[n:]) for row in aug)


def solve_left(rows: Matrix, vec: Sequence[int]) -> list[Fraction]:
    """The unique rational s with sum_i s_i * rows[i] = vec (rows square, invertible)."""
    inv = _inverse(tuple(tuple(r) for r in rows))
    n = len(inv)
    return [sum((vec[j] * inv[j][i] for j in range(n) if vec[j]), Fraction(0)) for i in range(n)]
