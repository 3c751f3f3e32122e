"""Length-two Witt vectors W_2(F_q).

Elements are pairs (a0, a1) of field codes, encoded as ``a0 + q*a1`` when
stored in matrices.  Addition uses the universal Witt polynomial

    s1 = x1 + y1 - sum_{i=1}^{p-1} (C(p, i)/p) x0^i y0^(p-i)

whose integer coefficients are precomputed per prime.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from math import comb

import numpy as np

from .fields import GF, FieldMismatch, FqElement, field

MAX_WITT_PRIME = 31


@functools.lru_cache(maxsize=None)
def carry_coefficients(p: int) -> tuple[int, ...]:
    """(C(p,i)/p mod p) for i = 1..p-1."""
    if p > MAX_WITT_PRIME:
        raise ValueError(f"Witt arithmetic supports p <= {MAX_WITT_PRIME}")
    return tuple((comb(p, i) // p) % p for i in range(1, p))


class WittRing:
    """W_2(k) for a finite field k, vectorised over arrays of element codes."""

    def __init__(self, k: GF):
        self.k = k
        self.p, self.q = k.p, k.q
        self.tag = f"W2({k.tag})"
        self.size = k.q**2
        self.zero, self.one = 0, 1
        self._carry = carry_coefficients(k.p)
        self.residue_field = k

    # -- code packing ---------------------------------------------------------
    def split(self, a):
        a = np.asarray(a, dtype=np.int64)
        return a % self.q, a // self.q

    def pack(self, a0, a1):
        return np.asarray(a0, dtype=np.int64) + self.q * np.asarray(a1, dtype=np.int64)

    # -- arithmetic -------------------------------------------------------------
    def _carry_term(self, x0, y0):
        k, p = self.k, self.p
        x0 = np.asarray(x0, dtype=np.int64)
        y0 = np.asarray(y0, dtype=np.int64)
        xp = [np.ones_like(x0)]
        yp = [np.ones_like(y0)]
        for _ in range(p - 1):
            xp.append(k.mul(xp[-1], x0))
            yp.append(k.mul(yp[-1], y0))
        total = np.zeros(np.broadcast(x0, y0).shape, dtype=np.int64)
        for i, c in enumerate(self._carry, start=1):
            if c:
                term = k.mul(k.mul(xp[i], k.mul(yp[p - i - 1], y0)), c % p)
                total = k.add(total, term)
        return total

    def add(self, a, b):
        k = self.k
        x0, x1 = self.split(a)
        y0, y1 = self.split(b)
        s0 = k.add(x0, y0)
        s1 = k.sub(k.add(x1, y1), self._carry_term(x0, y0))
        return self.pack(s0, s1)

    def neg(self, a):
        k = self.k
        x0, x1 = self.split(a)
        if self.p == 2:
            return self.pack(x0, k.add(x1, k.mul(x0, x0)))
        return self.pack(k.neg(x0), k.neg(x1))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        k = self.k
        x0, x1 = self.split(a)
        y0, y1 = self.split(b)
        s0 = k.mul(x0, y0)
        s1 = k.add(k.mul(k.frobenius(x0), y1), k.mul(x1, k.frobenius(y0)))
        return self.pack(s0, s1)

    def is_unit(self, a):
        return self.split(a)[0] != 0

    def inv(self, a):
        k = self.k
        x0, x1 = self.split(a)
        b0 = k.inv(x0)
        b1 = k.neg(k.mul(x1, k.frobenius(k.mul(b0, b0))))
        return self.pack(b0, b1)

    def power(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e < 0:
            a, e = self.inv(a), -e
        result = np.ones_like(a)
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    # -- structure maps -----------------------------------------------------------
    def teichmuller(self, a):
        """Multiplicative section k -> W_2(k): a -> (a, 0)."""
        return self.pack(a, 0)

    def reduce(self, a):
        """Reduction W_2(k) -> k (first Witt coordinate)."""
        return self.split(a)[0]

    def p_times_teichmuller(self, a):
        """The kernel identification k -> p W_2(k), a -> p [a] = (0, a^p)."""
        return self.pack(0, self.k.frobenius(a))

    def p_digit(self, a):
        """Inverse of :meth:`p_times_teichmuller` on p W_2(k)."""
        x0, x1 = self.split(a)
        if np.any(x0 != 0):
            raise ValueError("element is not divisible by p")
        return self.k.frobenius_inverse(x1)

    def from_int(self, n: int) -> int:
        p, q = self.p, self.q
        n = int(n) % (p * p)
        n0 = n % p
        teich = pow(n0, p, p * p)
        return n0 + q * (((n - teich) // p) % p)

    def element(self, a0, a1=0) -> "WittElement":
        k = self.k
        return WittElement(k.element(a0), k.element(a1))

    def code(self, x: "WittElement") -> int:
        if x.field is not self.k:
            raise FieldMismatch(f"{x.field} is not {self.k}")
        return int(self.pack(x.a0.value, x.a1.value))

    def from_code(self, c) -> "WittElement":
        a0, a1 = self.split(c)
        return self.element(int(a0), int(a1))

    def element_to_json(self, a) -> dict:
        a0, a1 = self.split(a)
        return {"a0": self.k.element_to_json(int(a0)), "a1": self.k.element_to_json(int(a1))}

    def element_from_json(self, obj) -> int:
        if isinstance(obj, dict):
            return int(self.pack(self.k.element_from_json(obj["a0"]), self.k.element_from_json(obj["a1"])))
        if isinstance(obj, list) and len(obj) == 2:
            return int(self.pack(self.k.element_from_json(obj[0]), self.k.element_from_json(obj[1])))
        return int(obj)

    def to_json(self) -> dict:
        return {"witt_length": 2, "field": self.k.to_json()}

    def __repr__(self) -> str:
        return self.tag

    def __reduce__(self):
        return (witt_ring, (self.k,))


@functools.lru_cache(maxsize=None)
def witt_ring(k: GF) -> WittRing:
    return WittRing(k)


@dataclass(frozen=True)
class WittElement:
    """A length-two Witt vector (a0, a1) over a finite field."""

    a0: FqElement
    a1: FqElement

    def __post_init__(self):
        if self.a0.field is not self.a1.field:
            raise FieldMismatch("Witt components must lie in the same field")

    @property
    def field(self) -> GF:
        return self.a0.field

    @property
    def ring(self) -> WittRing:
        return witt_ring(self.field)

    def _other(self, other) -> "WittElement":
        if isinstance(other, int):
            return self.ring.from_code(self.ring.from_int(other))
        if not isinstance(other, WittElement):
            raise TypeError(other)
        if other.field is not self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    def _code(self) -> int:
        return self.ring.code(self)

    def __add__(self, other):
        return witt_add(self, self._other(other))

    __radd__ = __add__

    def __neg__(self):
        R = self.ring
        return R.from_code(R.neg(self._code()))

    def __sub__(self, other):
        return self + (-self._other(other))

    def __mul__(self, other):
        return witt_mul(self, self._other(other))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        R = self.ring
        return R.from_code(R.power(self._code(), e))

    def inverse(self) -> "WittElement":
        R = self.ring
        return R.from_code(R.inv(self._code()))

    def reduce(self) -> FqElement:
        return self.a0

    def to_json(self) -> dict:
        return {"a0": self.a0.to_json(), "a1": self.a1.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "WittElement":
        return WittElement(FqElement.from_json(obj["a0"]), FqElement.from_json(obj["a1"]))

    def __repr__(self) -> str:
        return f"({self.a0!r}, {self.a1!r})"


def witt_add(x: WittElement, y: WittElement) -> WittElement:
    if x.field is not y.field:
        raise FieldMismatch(f"{x.field} vs {y.field}")
    R = x.ring
    return R.from_code(R.add(R.code(x), R.code(y)))


def witt_mul(x: WittElement, y: WittElement) -> WittElement:
    if x.field is not y.field:
        raise FieldMismatch(f"{x.field} vs {y.field}")
    R = x.ring
    return R.from_code(R.mul(R.code(x), R.code(y)))


def teichmuller(a: FqElement) -> WittElement:
    return WittElement(a, a.field.element(0))


def witt_to_zmod(x: WittElement) -> int:
    """W_2(F_p) -> Z/p^2 via (a0, a1) -> [a0] + p*a1."""
    if x.field.m != 1:
        raise ValueError("only W_2(F_p) is isomorphic to Z/p^2")
    p = x.field.p
    return (pow(x.a0.value, p, p * p) + p * x.a1.value) % (p * p)


def zmod_to_witt(n: int, p: int) -> WittElement:
    R = witt_ring(field(p))
    return R.from_code(R.from_int(n))
