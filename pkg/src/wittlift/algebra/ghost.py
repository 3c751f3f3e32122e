"""Ghost-component oracle for W_2(F_q).

The second ghost component w1 = a0^p + p*a1, evaluated on coordinate lifts
in Z/p^2[x]/(lifted modulus), is a ring isomorphism from W_2(F_q) onto that
unramified quotient.  This module implements the target ring with plain
integer polynomial arithmetic so it shares no code path with ``witt.py``.
"""
from __future__ import annotations

from .fields import GF


class GhostRing:
    def __init__(self, k: GF):
        self.k = k
        self.p, self.m = k.p, k.m
        self.mod = self.p**2
        self.modulus = [int(c) for c in k.modulus] + [1]
        self._lift_cache: dict[tuple[int, ...], int] | None = None

    def normalize(self, v) -> tuple[int, ...]:
        v = [int(c) % self.mod for c in v]
        return tuple(v + [0] * (self.m - len(v)))

    def add(self, a, b) -> tuple[int, ...]:
        return tuple((x + y) % self.mod for x, y in zip(a, b))

    def mul(self, a, b) -> tuple[int, ...]:
        m = self.m
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] += x * y
        for deg in range(2 * m - 2, m - 1, -1):
            c = prod[deg] % self.mod
            if c:
                for i, f in enumerate(self.modulus):
                    prod[deg - m + i] -= c * f
        return self.normalize(prod[:m])

    def power(self, a, e: int) -> tuple[int, ...]:
        result = self.normalize([1])
        for _ in range(e):
            result = self.mul(result, a)
        return result

    def to_ghost(self, a0: int, a1: int) -> tuple[int, ...]:
        """(a0, a1) -> lift(a0)^p + p*lift(a1)."""
        x0 = self.normalize(self.k.coords(a0))
        x1 = self.normalize(self.k.coords(a1))
        w = self.power(x0, self.p)
        return self.add(w, tuple((self.p * c) % self.mod for c in x1))

    def from_ghost(self, z) -> tuple[int, int]:
        """Inverse of :meth:`to_ghost`, by search over the first coordinate."""
        if self._lift_cache is None:
            self._lift_cache = {}
            for a0 in range(self.k.q):
                w = self.power(self.normalize(self.k.coords(a0)), self.p)
                self._lift_cache[tuple(c % self.p for c in w)] = a0
        z = self.normalize(z)
        a0 = self._lift_cache[tuple(c % self.p for c in z)]
        w = self.power(self.normalize(self.k.coords(a0)), self.p)
        diff = [(zc - wc) % self.mod for zc, wc in zip(z, w)]
        assert all(d % self.p == 0 for d in diff)
        a1 = self.k.from_coords([d // self.p for d in diff])
        return a0, a1
