"""Smith normal form and exact integer/rational linear algebra.

All arithmetic is arbitrary-precision (Python ints / Fractions); numpy is
used only as a container with dtype=object.  Pivoting picks the nonzero
entry of minimal absolute value, ties broken by lowest (row, col) index,
which bounds coefficient growth and makes every decomposition
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


def as_int_matrix(A) -> np.ndarray:
    """Coerce a matrix-like into a 2-d object array of Python ints."""
    M = np.array(A, dtype=object)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got ndim={M.ndim}")
    out = np.empty(M.shape, dtype=object)
    for i in range(M.shape[0]):
        for j in range(M.shape[1]):
            v = M[i, j]
            if isinstance(v, float):
                if v != int(v):
                    raise ValueError(f"non-integer entry {v!r} at ({i},{j})")
                v = int(v)
            out[i, j] = int(v)
    return out


def identity_matrix(n: int) -> np.ndarray:
    M = np.zeros((n, n), dtype=object)
    for i in range(n):
        M[i, i] = 1
    return M


def zero_matrix(m: int, n: int) -> np.ndarray:
    return np.zeros((m, n), dtype=object)


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ A @ V == S with U, V unimodular and S diagonal, d_1 | d_2 | ..."""

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray

    @property
    def shape(self):
        return self.S.shape

    def diagonal(self) -> list[int]:
        m, n = self.S.shape
        return [int(self.S[i, i]) for i in range(min(m, n))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal() if d != 0)

    def invariant_factors(self) -> list[int]:
        """Nonzero diagonal entries (the invariant factors of the image)."""
        return [d for d in self.diagonal() if d != 0]

    def nontrivial_factors(self) -> list[int]:
        """Invariant factors exceeding 1 (torsion coefficients)."""
        return [d for d in self.diagonal() if d > 1]


def _min_abs_pivot(S, t, m, n):
    best = None
    for i in range(t, m):
        row = S[i]
        for j in range(t, n):
            v = row[j]
            if v != 0:
                a = -v if v < 0 else v
                if best is None or a < best[0]:
                    best = (a, i, j)
    return best


def smith_normal_form(A) -> SmithDecomposition:
    """Diagonalize an integer matrix by unimodular row/column operations.

    Returns U, S, V with U @ A @ V == S, |det U| = |det V| = 1, S diagonal
    with nonnegative entries satisfying d_1 | d_2 | ... .  The zero and
    empty matrices are handled (S is then zero/empty).
    """
    A = as_int_matrix(A)
    m, n = A.shape
    S = [[int(A[i, j]) for j in range(n)] for i in range(m)]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        S[i], S[k] = S[k], S[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in S:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        Sd, Ss = S[dst], S[src]
        for j in range(n):
            Sd[j] += q * Ss[j]
        Ud, Us = U[dst], U[src]
        for j in range(m):
            Ud[j] += q * Us[j]

    def add_col(dst, src, q):
        for row in S:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    def negate_row(i):
        S[i] = [-v for v in S[i]]
        U[i] = [-v for v in U[i]]

    t = 0
    while t < min(m, n):
        piv = _min_abs_pivot(S, t, m, n)
        if piv is None:
            break
        _, pi, pj = piv
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)

        while True:
            # Clear column t below the pivot, then row t right of it.
            for i in range(t + 1, m):
                if S[i][t] != 0:
                    add_row(i, t, -(S[i][t] // S[t][t]))
            for j in range(t + 1, n):
                if S[t][j] != 0:
                    add_col(j, t, -(S[t][j] // S[t][t]))
            if all(S[i][t] == 0 for i in range(t + 1, m)) and all(
                S[t][j] == 0 for j in range(t + 1, n)
            ):
                # Divisibility sweep: pivot must divide the trailing block.
                offender = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if S[i][j] % S[t][t] != 0:
                            offender = i
                            break
                    if offender is not None:
                        break
                if offender is None:
                    break
                add_row(t, offender, 1)
                continue
            piv = _min_abs_pivot(S, t, m, n)
            _, pi, pj = piv
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)

        if S[t][t] < 0:
            negate_row(t)
        t += 1

    Um = np.array(U, dtype=object) if m else zero_matrix(0, 0)
    Vm = np.array(V, dtype=object) if n else zero_matrix(0, 0)
    Sm = np.array(S, dtype=object) if (m and n) else zero_matrix(m, n)
    return SmithDecomposition(U=Um, S=Sm, V=Vm)


def matrix_rank(A) -> int:
    """Rank over Z (= rank over Q) of an integer matrix."""
    A = as_int_matrix(A)
    if 0 in A.shape:
        return 0
    return smith_normal_form(A).rank


def rank_rational(A) -> int:
    """Rank by exact fraction-free Gaussian elimination (independent of SNF)."""
    A = as_int_matrix(A)
    m, n = A.shape
    if m == 0 or n == 0:
        return 0
    M = [[Fraction(int(A[i, j])) for j in range(n)] for i in range(m)]
    rank = 0
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, m) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = 1 / M[row][col]
        M[row] = [v * inv for v in M[row]]
        for r in range(m):
            if r != row and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[row])]
        rank += 1
        row += 1
        if row == m:
            break
    return rank


def solve_integer(A, b):
    """Solve A @ w == b over the integers via Smith normal form.

    Returns (w, None) on success, or (None, obstruction) where the
    obstruction records the first coordinate at which the diagonal system
    S y = U b has no integer solution.
    """
    A = as_int_matrix(A)
    m, n = A.shape
    b = [int(v) for v in np.array(b, dtype=object).reshape(-1)]
    if len(b) != m:
        raise ValueError(f"rhs length {len(b)} != {m} rows")
    if n == 0:
        if any(v != 0 for v in b):
            i = next(i for i, v in enumerate(b) if v != 0)
            return None, {"row": i, "residue": b[i], "invariant_factor": 0}
        return [], None
    dec = smith_normal_form(A)
    c = [sum(int(dec.U[i, j]) * b[j] for j in range(m)) for i in range(m)]
    diag = dec.diagonal()
    y = [0] * n
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if c[i] != 0:
                return None, {"row": i, "residue": c[i], "invariant_factor": 0}
        else:
            q, r = divmod(c[i], d)
            if r != 0:
                return None, {"row": i, "residue": r, "invariant_factor": d}
            if i < n:
                y[i] = q
    w = [sum(int(dec.V[i, j]) * y[j] for j in range(n)) for i in range(n)]
    return w, None
