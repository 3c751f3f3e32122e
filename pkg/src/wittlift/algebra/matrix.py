"""Square matrices over the rings of this package.

Entries are stored as integer element codes in a read-only numpy array; the
ring object supplies vectorised ``add``/``mul``.  ``batch_matmul`` works on
stacks of matrices of shape (..., n, n) and is what the cohomology code uses
in its hot loops.
"""
from __future__ import annotations

import re

import numpy as np

from .fields import GF, field, field_of_order
from .rings import QuotientRing64, ZMod, quotient_ring_64, zmod
from .witt import WittRing, witt_ring


class NotInvertible(ArithmeticError):
    pass


class NoOrderWithinBound(ArithmeticError):
    pass


def ring_from_tag(tag: str):
    """Parse 'GF(4)', 'F_4', 'Z/9', 'W2(GF(4))' or the 64-element quotient ring tag."""
    tag = tag.strip()
    if tag in ("Q64", QuotientRing64.tag):
        return quotient_ring_64()
    m = re.fullmatch(r"W2\((.+)\)", tag)
    if m:
        k = ring_from_tag(m.group(1))
        if not isinstance(k, GF):
            raise ValueError(f"W2 needs a finite field, got {m.group(1)}")
        return witt_ring(k)
    m = re.fullmatch(r"(?:GF\((\d+)\)|F_?(\d+))", tag)
    if m:
        return field_of_order(int(m.group(1) or m.group(2)))
    m = re.fullmatch(r"Z/(\d+)", tag)
    if m:
        n = int(m.group(1))
        from .fields import prime_power

        p, k = prime_power(n)
        return zmod(p, k)
    raise ValueError(f"unknown ring tag {tag!r}")


def is_field(ring) -> bool:
    return isinstance(ring, GF)


def _fast_int_ring(ring):
    """Modulus when the ring's codes multiply as plain integers, else None."""
    if isinstance(ring, ZMod):
        return ring.modulus
    if isinstance(ring, GF) and ring.m == 1:
        return ring.p
    return None


def batch_matmul(ring, A, B):
    """Product of stacks of square matrices over ``ring`` (broadcasting)."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    mod = _fast_int_ring(ring)
    if mod is not None:
        return np.matmul(A, B) % mod
    n = A.shape[-1]
    acc = ring.mul(A[..., :, 0:1], B[..., 0:1, :])
    for k in range(1, n):
        acc = ring.add(acc, ring.mul(A[..., :, k : k + 1], B[..., k : k + 1, :]))
    return acc


def batch_identity(ring, n: int, shape=()) -> np.ndarray:
    eye = np.full((n, n), ring.zero, dtype=np.int64)
    np.fill_diagonal(eye, ring.one)
    return np.broadcast_to(eye, tuple(shape) + (n, n)).copy()


def batch_power(ring, A, e: int):
    A = np.asarray(A, dtype=np.int64)
    result = batch_identity(ring, A.shape[-1], A.shape[:-2])
    while e:
        if e & 1:
            result = batch_matmul(ring, result, A)
        A = batch_matmul(ring, A, A)
        e >>= 1
    return result


def inverse_entries(ring, A: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse over a field or a finite local ring (unit pivots)."""
    A = np.array(A, dtype=np.int64)
    n = A.shape[0]
    M = np.concatenate([A, batch_identity(ring, n)], axis=1)
    for col in range(n):
        units = np.nonzero(np.asarray(ring.is_unit(M[col:, col])))[0]
        if len(units) == 0:
            raise NotInvertible("matrix is not invertible")
        piv = col + int(units[0])
        if piv != col:
            M[[col, piv]] = M[[piv, col]]
        inv = ring.inv(int(M[col, col]))
        M[col] = ring.mul(M[col], inv)
        for r in range(n):
            if r != col and M[r, col] != ring.zero:
                M[r] = ring.sub(M[r], ring.mul(M[col], int(M[r, col])))
    return M[:, n:]


class RingMatrix:
    """An immutable n x n matrix over a ring (field, Z/p^k, W_2(k) or Q64)."""

    __slots__ = ("ring", "entries", "_hash")

    def __init__(self, ring, entries):
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ValueError(f"expected a non-empty square matrix, got shape {arr.shape}")
        if arr.min() < 0 or arr.max() >= ring.size:
            raise ValueError(f"entries out of range for {ring.tag}")
        arr.setflags(write=False)
        self.ring = ring
        self.entries = arr
        self._hash = None

    @classmethod
    def identity(cls, ring, n: int) -> "RingMatrix":
        return cls(ring, batch_identity(ring, n))

    @classmethod
    def zero(cls, ring, n: int) -> "RingMatrix":
        return cls(ring, np.full((n, n), ring.zero, dtype=np.int64))

    @classmethod
    def from_ints(cls, ring, rows) -> "RingMatrix":
        """Matrix whose entries are images of the given integers."""
        return cls(ring, [[ring.from_int(x) for x in row] for row in rows])

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def _same(self, other: "RingMatrix") -> None:
        if other.ring is not self.ring:
            raise ValueError(f"ring mismatch: {self.ring.tag} vs {other.ring.tag}")
        if other.n != self.n:
            raise ValueError("dimension mismatch")

    def __matmul__(self, other: "RingMatrix") -> "RingMatrix":
        self._same(other)
        return RingMatrix(self.ring, batch_matmul(self.ring, self.entries, other.entries))

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        self._same(other)
        return RingMatrix(self.ring, self.ring.add(self.entries, other.entries))

    def __sub__(self, other: "RingMatrix") -> "RingMatrix":
        self._same(other)
        return RingMatrix(self.ring, self.ring.sub(self.entries, other.entries))

    def __neg__(self) -> "RingMatrix":
        return RingMatrix(self.ring, self.ring.neg(self.entries))

    def scale(self, c: int) -> "RingMatrix":
        return RingMatrix(self.ring, self.ring.mul(self.entries, int(c)))

    def __pow__(self, e: int) -> "RingMatrix":
        if e < 0:
            return self.inverse() ** (-e)
        return RingMatrix(self.ring, batch_power(self.ring, self.entries, e))

    def inverse(self) -> "RingMatrix":
        return RingMatrix(self.ring, inverse_entries(self.ring, self.entries))

    def is_invertible(self) -> bool:
        try:
            inverse_entries(self.ring, self.entries)
        except NotInvertible:
            return False
        return True

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.entries, batch_identity(self.ring, self.n)))

    def map(self, ring, fn) -> "RingMatrix":
        return RingMatrix(ring, fn(self.entries))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return other.ring is self.ring and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring.tag, self.entries.tobytes()))
        return self._hash

    def to_json(self) -> dict:
        return {
            "ring": self.ring.tag,
            "n": self.n,
            "entries": [self.ring.element_to_json(int(x)) for x in self.entries.ravel()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RingMatrix":
        ring = ring_from_tag(obj["ring"])
        n = int(obj["n"])
        entries = obj["entries"]
        if len(entries) != n * n:
            raise ValueError(f"expected {n * n} entries, got {len(entries)}")
        codes = [ring.element_from_json(e) for e in entries]
        return cls(ring, np.array(codes, dtype=np.int64).reshape(n, n))

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()

    def __repr__(self) -> str:
        rows = "; ".join(" ".join(str(x) for x in row) for row in self.entries.tolist())
        return f"RingMatrix[{self.ring.tag}]({rows})"


def matrix_order(M: RingMatrix, bound: int) -> int:
    """Least e <= bound with M^e = I; raises NoOrderWithinBound otherwise."""
    if not M.is_invertible():
        raise NotInvertible("matrix_order needs an invertible matrix")
    ring = M.ring
    eye = batch_identity(ring, M.n)
    acc = M.entries
    for e in range(1, bound + 1):
        if np.array_equal(acc, eye):
            return e
        acc = batch_matmul(ring, acc, M.entries)
    raise NoOrderWithinBound(f"no order <= {bound}")


def reduce_mod_p(M: RingMatrix) -> RingMatrix:
    """Entrywise reduction W_2(k) -> k, Z/p^k -> F_p, Q64 -> F_4."""
    ring = M.ring
    if isinstance(ring, (WittRing, ZMod, QuotientRing64)):
        return RingMatrix(ring.residue_field, ring.reduce(M.entries))
    raise ValueError(f"{ring.tag} is not a thickening of a residue field")


def teichmuller_matrix(M: RingMatrix) -> RingMatrix:
    """Entrywise Teichmuller lift of a matrix over k to W_2(k)."""
    if not isinstance(M.ring, GF):
        raise ValueError("Teichmuller lift needs a matrix over a finite field")
    W = witt_ring(M.ring)
    return RingMatrix(W, W.teichmuller(M.entries))


def witt_to_zmod_matrix(M: RingMatrix) -> RingMatrix:
    """The isomorphism W_2(F_p) -> Z/p^2 applied entrywise."""
    W = M.ring
    if not isinstance(W, WittRing) or W.k.m != 1:
        raise ValueError("expected a matrix over W_2(F_p)")
    p = W.p
    a0, a1 = W.split(M.entries)
    teich = np.vectorize(lambda x: pow(int(x), p, p * p), otypes=[np.int64])(a0)
    return RingMatrix(zmod(p, 2), (teich + p * a1) % (p * p))


def zmod_to_witt_matrix(M: RingMatrix) -> RingMatrix:
    Z = M.ring
    if not isinstance(Z, ZMod) or Z.k != 2:
        raise ValueError("expected a matrix over Z/p^2")
    W = witt_ring(field(Z.p))
    return RingMatrix(W, np.vectorize(W.from_int, otypes=[np.int64])(M.entries))
