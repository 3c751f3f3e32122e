"""Incremental row reduction over F_p.

Rows are fed in blocks; the reduced basis never exceeds the number of
columns, so systems with far more equations than unknowns stay cheap.
Pivoting is deterministic (leftmost column, first row in feed order), which
makes rank profiles and particular solutions reproducible.
"""
from __future__ import annotations

import numpy as np

_FLOAT_EXACT = 2**52


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """(A @ B) mod p for residues in [0, p); uses float BLAS when it is exact."""
    inner = A.shape[-1]
    if inner == 0:
        return np.zeros(A.shape[:-1] + B.shape[-1:], dtype=np.int64)
    if inner * (p - 1) ** 2 < _FLOAT_EXACT:
        out = np.matmul(A.astype(np.float64), B.astype(np.float64))
        return np.fmod(out, p).astype(np.int64)
    return np.matmul(A.astype(object), B.astype(object)).astype(np.int64) % p


def _inverses(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


def rref(M: np.ndarray, p: int, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of M over F_p; pivots searched in the first ncols columns."""
    M = np.array(M, dtype=np.int64) % p
    rows, cols = M.shape
    ncols = cols if ncols is None else ncols
    inv = _inverses(p)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        M[r] = (M[r] * inv[M[r, c]]) % p
        col = M[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if len(nzr):
            M[nzr] = (M[nzr] - np.outer(col[nzr], M[r])) % p
        pivots.append(c)
        r += 1
    return M[:r], pivots


class EchelonBasis:
    """A row space over F_p kept in reduced echelon form."""

    def __init__(self, ncols: int, p: int):
        self.p = p
        self.ncols = ncols
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.pivots: list[int] = []
        self.rows_seen = 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, R: np.ndarray) -> np.ndarray:
        """Remainder of the rows of R modulo the current basis."""
        R = np.asarray(R, dtype=np.int64) % self.p
        if self.rank == 0 or R.shape[0] == 0:
            return R
        coeff = R[:, self.pivots]
        return (R - matmul_mod(coeff, self.rows, self.p)) % self.p

    def add_rows(self, R: np.ndarray) -> None:
        R = np.asarray(R, dtype=np.int64)
        self.rows_seen += R.shape[0]
        rem = self.reduce(R)
        rem = rem[np.any(rem != 0, axis=1)]
        if rem.shape[0] == 0:
            return
        new_rows, new_piv = rref(rem, self.p)
        if not new_piv:
            return
        if self.rank:
            # clear the new pivot columns from the old rows
            coeff = self.rows[:, new_piv]
            self.rows = (self.rows - matmul_mod(coeff, new_rows, self.p)) % self.p
        rows = np.concatenate([self.rows, new_rows])
        piv = self.pivots + new_piv
        order = np.argsort(piv, kind="stable")
        self.rows = rows[order]
        self.pivots = [piv[i] for i in order]

    def contains(self, v: np.ndarray) -> bool:
        return not np.any(self.reduce(np.atleast_2d(v)))


def rank_mod_p(M: np.ndarray, p: int, block: int = 4096) -> int:
    basis = EchelonBasis(M.shape[1], p)
    for start in range(0, M.shape[0], block):
        basis.add_rows(M[start : start + block])
    return basis.rank


def nullspace_mod_p(M: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {x : M x = 0} over F_p."""
    M = np.asarray(M, dtype=np.int64)
    ncols = M.shape[1]
    basis = EchelonBasis(ncols, p)
    for start in range(0, M.shape[0], 4096):
        basis.add_rows(M[start : start + 4096])
    free = [c for c in range(ncols) if c not in set(basis.pivots)]
    out = np.zeros((len(free), ncols), dtype=np.int64)
    for i, f in enumerate(free):
        out[i, f] = 1
        for r, pc in enumerate(basis.pivots):
            out[i, pc] = (-basis.rows[r, f]) % p
    return out


def solve_mod_p(A: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """A particular solution of A x = b over F_p (free variables zero), or None."""
    A = np.asarray(A, dtype=np.int64)
    aug = np.concatenate([A, np.asarray(b, dtype=np.int64).reshape(-1, 1)], axis=1)
    basis = EchelonBasis(aug.shape[1], p)
    for start in range(0, aug.shape[0], 4096):
        basis.add_rows(aug[start : start + 4096])
    return particular_solution(basis)


def particular_solution(basis: EchelonBasis) -> np.ndarray | None:
    """Read a solution off an echelon basis of an augmented system [A | b]."""
    n = basis.ncols - 1
    if basis.pivots and basis.pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for r, pc in enumerate(basis.pivots):
        x[pc] = basis.rows[r, n]
    return x
