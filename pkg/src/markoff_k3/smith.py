"""Smith normal form over the integers and the lattice operations built on it.

Every kernel, image and quotient computation in the package goes through
:func:`smith_normal_form`, so there is a single exact integer engine.
Matrices are plain lists of rows of Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def as_matrix(a: Sequence[Sequence[int]]) -> Matrix:
    return [[int(v) for v in row] for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


@dataclass(frozen=True)
class SmithForm:
    """``left @ A @ right == diag(diagonal)`` with unimodular ``left`` and ``right``."""

    diagonal: tuple[int, ...]
    left: Matrix
    right: Matrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _swap_rows(a: Matrix, i: int, j: int) -> None:
    a[i], a[j] = a[j], a[i]


def _swap_cols(a: Matrix, i: int, j: int) -> None:
    for row in a:
        row[i], row[j] = row[j], row[i]


def _add_row(a: Matrix, dst: int, src: int, q: int) -> None:
    # row[dst] += q * row[src]
    rs, rd = a[src], a[dst]
    for c, v in enumerate(rs):
        if v:
            rd[c] += q * v


def _add_col(a: Matrix, dst: int, src: int, q: int) -> None:
    for row in a:
        v = row[src]
        if v:
            row[dst] += q * v


def smith_normal_form(a: Sequence[Sequence[int]]) -> SmithForm:
    """Diagonalize ``a`` by unimodular row and column operations.

    The diagonal is nonnegative and forms a divisibility chain.
    """
    mat = as_matrix(a)
    m = len(mat)
    n = len(mat[0]) if m else 0
    left = identity(m)
    right = identity(n)
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = mat[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        if i != t:
            _swap_rows(mat, t, i)
            _swap_rows(left, t, i)
        if j != t:
            _swap_cols(mat, t, j)
            _swap_cols(right, t, j)
        while True:
            piv = mat[t][t]
            clean = True
            for i in range(t + 1, m):
                if mat[i][t]:
                    q = mat[i][t] // piv
                    _add_row(mat, i, t, -q)
                    _add_row(left, i, t, -q)
                    if mat[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if mat[t][j]:
                    q = mat[t][j] // piv
                    _add_col(mat, j, t, -q)
                    _add_col(right, j, t, -q)
                    if mat[t][j]:
                        clean = False
            if not clean:
                # move the smallest leftover in row t / column t onto the pivot
                cand = [(abs(mat[i][t]), i, t) for i in range(t + 1, m) if mat[i][t]]
                cand += [(abs(mat[t][j]), t, j) for j in range(t + 1, n) if mat[t][j]]
                _, i, j = min(cand)
                if i != t:
                    _swap_rows(mat, t, i)
                    _swap_rows(left, t, i)
                if j != t:
                    _swap_cols(mat, t, j)
                    _swap_cols(right, t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(mat[i][j] % piv for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            _add_row(mat, t, bad, 1)
            _add_row(left, t, bad, 1)
        if mat[t][t] < 0:
            mat[t] = [-v for v in mat[t]]
            left[t] = [-v for v in left[t]]
        t += 1
    diag = tuple(mat[i][i] for i in range(min(m, n)))
    return SmithForm(diag, left, right)


def invariant_factors(a: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Nonzero diagonal entries of the Smith form."""
    return tuple(d for d in smith_normal_form(a).diagonal if d)


def kernel_basis(a: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Columns spanning the integer kernel of ``a`` (returned as an n x r matrix)."""
    mat = as_matrix(a)
    n = len(mat[0]) if mat else (ncols or 0)
    if not mat:
        return identity(n)
    snf = smith_normal_form(mat)
    r = snf.rank
    return [row[r:] for row in snf.right]


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group: torsion factors (> 1) and free rank."""

    torsion: tuple[int, ...]
    free_rank: int

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out


def cokernel(a: Sequence[Sequence[int]], nrows: int | None = None) -> AbelianGroup:
    """Structure of Z^m / (column span of ``a``)."""
    mat = as_matrix(a)
    m = len(mat) if mat else (nrows or 0)
    if not mat or not mat[0]:
        return AbelianGroup((), m)
    diag = smith_normal_form(mat).diagonal
    nonzero = [d for d in diag if d]
    return AbelianGroup(tuple(d for d in nonzero if d > 1), m - len(nonzero))


def solve(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    """Integer solution X of ``a @ X == b``; raises ValueError when none exists."""
    mat = as_matrix(a)
    rhs = as_matrix(b)
    snf = smith_normal_form(mat)
    ub = matmul(snf.left, rhs)
    n = len(mat[0])
    ncols = len(rhs[0]) if rhs else 0
    y = [[0] * ncols for _ in range(n)]
    for i, row in enumerate(ub):
        d = snf.diagonal[i] if i < len(snf.diagonal) else 0
        for c, v in enumerate(row):
            if d == 0:
                if v:
                    raise ValueError("system has no solution")
            else:
                if v % d:
                    raise ValueError("system has no integer solution")
                y[i][c] = v // d
    return matmul(snf.right, y)


def quotient(sub_generators: Matrix, lattice_basis: Matrix) -> AbelianGroup:
    """Structure of L / S where L is spanned by the columns of ``lattice_basis``
    (independent) and S by the columns of ``sub_generators`` (inside L)."""
    if not lattice_basis or not lattice_basis[0]:
        return AbelianGroup((), 0)
    if not sub_generators or not sub_generators[0]:
        return AbelianGroup((), len(lattice_basis[0]))
    coords = solve(lattice_basis, sub_generators)
    return cokernel(coords)


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    mat = as_matrix(a)
    n = len(mat)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if mat[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if mat[i][k]), None)
            if swap is None:
                return 0
            mat[k], mat[swap] = mat[swap], mat[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) // prev
        prev = mat[k][k]
    return sign * mat[n - 1][n - 1] if n else 1
