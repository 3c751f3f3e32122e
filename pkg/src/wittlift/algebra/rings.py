"""Residue rings Z/p^k and the 64-element ring W_2(F_4)[t]/(t^2 - 2, 2t)."""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .fields import FieldMismatch, FqElement, field, is_prime
from .witt import WittElement, witt_ring


class ZMod:
    """Z/p^k on plain residues (fast path; W_2(F_p) is isomorphic to Z/p^2)."""

    def __init__(self, p: int, k: int):
        if not is_prime(p) or k < 1:
            raise ValueError(f"Z/{p}^{k} is not a prime-power residue ring")
        self.p, self.k = p, k
        self.modulus = p**k
        self.tag = f"Z/{self.modulus}"
        self.size = self.modulus
        self.zero, self.one = 0, 1
        self.residue_field = field(p)

    def add(self, a, b):
        return (np.asarray(a, dtype=np.int64) + b) % self.modulus

    def neg(self, a):
        return (-np.asarray(a, dtype=np.int64)) % self.modulus

    def sub(self, a, b):
        return (np.asarray(a, dtype=np.int64) - b) % self.modulus

    def mul(self, a, b):
        return (np.asarray(a, dtype=np.int64) * b) % self.modulus

    def is_unit(self, a):
        return np.asarray(a) % self.p != 0

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        out = np.vectorize(lambda x: pow(int(x), -1, self.modulus), otypes=[np.int64])(a)
        return out if out.shape else int(out)

    def power(self, a, e: int):
        return np.vectorize(lambda x: pow(int(x), e, self.modulus), otypes=[np.int64])(np.asarray(a))

    def reduce(self, a):
        return np.asarray(a, dtype=np.int64) % self.p

    def from_int(self, n: int) -> int:
        return int(n) % self.modulus

    def element_to_json(self, a) -> int:
        return int(a)

    def element_from_json(self, obj) -> int:
        return int(obj) % self.modulus

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k}

    def __repr__(self) -> str:
        return self.tag

    def __reduce__(self):
        return (zmod, (self.p, self.k))


@functools.lru_cache(maxsize=None)
def zmod(p: int, k: int) -> ZMod:
    return ZMod(p, k)


class QuotientRing64:
    """W_2(F_4)[t]/(t^2 - 2, 2t): elements a + b t, a in W_2(F_4), b in F_4.

    Codes are ``a + 16*b`` with ``a`` a Witt code.  The structure constants
    are t*t = 2 = (0, 1), 2*t = 0; tables are built once from them.
    """

    tag = "W2(GF(4))[t]/(t^2-2,2t)"
    size = 64
    zero, one = 0, 1
    p = 2

    def __init__(self):
        W = witt_ring(field(2, 2))
        self.witt = W
        self.residue_field = W.k
        F = W.k
        two = W.from_int(2)
        a = np.arange(64) % 16
        b = np.arange(64) // 16
        A1, A2 = a[:, None], a[None, :]
        B1, B2 = b[:, None], b[None, :]
        self.add_t = W.add(A1, A2) + 16 * F.add(B1, B2)
        base = W.add(W.mul(A1, A2), W.mul(W.teichmuller(F.mul(B1, B2)), two))
        tpart = F.add(F.mul(W.reduce(A1), B2), F.mul(B1, W.reduce(A2)))
        self.mul_t = base + 16 * tpart
        self.neg_t = np.array([int(np.nonzero(self.add_t[x] == 0)[0][0]) for x in range(64)])
        self.inv_t = np.full(64, -1)
        for x in range(64):
            hits = np.nonzero(self.mul_t[x] == 1)[0]
            if len(hits):
                self.inv_t[x] = hits[0]
        self.t = 16

    def add(self, a, b):
        return self.add_t[a, b]

    def neg(self, a):
        return self.neg_t[a]

    def sub(self, a, b):
        return self.add_t[a, self.neg_t[b]]

    def mul(self, a, b):
        return self.mul_t[a, b]

    def is_unit(self, a):
        return self.inv_t[a] >= 0

    def inv(self, a):
        out = self.inv_t[a]
        if np.any(out < 0):
            raise ZeroDivisionError("not a unit")
        return out

    def reduce(self, a):
        """Residue map to F_4 (quotient by the radical (t))."""
        return self.witt.reduce(np.asarray(a) % 16)

    def from_witt(self, a):
        return np.asarray(a, dtype=np.int64)

    def from_int(self, n: int) -> int:
        return self.witt.from_int(n)

    def elements(self):
        return list(range(64))

    def split(self, x):
        x = np.asarray(x)
        return x % 16, x // 16

    def element_to_json(self, x) -> dict:
        a, b = self.split(int(x))
        return {"base": self.witt.element_to_json(int(a)), "t_coeff": self.residue_field.element_to_json(int(b))}

    def element_from_json(self, obj) -> int:
        if isinstance(obj, dict):
            return self.witt.element_from_json(obj["base"]) + 16 * self.residue_field.element_from_json(obj["t_coeff"])
        return int(obj)

    def to_json(self) -> dict:
        return {"quotient": "W2(GF(4))[t]/(t^2-2,2t)"}

    def __repr__(self) -> str:
        return "Q64"

    def __reduce__(self):
        return (quotient_ring_64, ())


@functools.lru_cache(maxsize=None)
def quotient_ring_64() -> QuotientRing64:
    return QuotientRing64()


@dataclass(frozen=True)
class QuotientRingElement:
    """a + b t in W_2(F_4)[t]/(t^2 - 2, 2t), with a in W_2(F_4) and b in F_4."""

    base: WittElement
    t_coeff: FqElement

    def __post_init__(self):
        k = quotient_ring_64().residue_field
        if self.base.field is not k or self.t_coeff.field is not k:
            raise FieldMismatch("both components must lie over GF(4)")

    @property
    def ring(self) -> QuotientRing64:
        return quotient_ring_64()

    def code(self) -> int:
        return int(self.ring.witt.code(self.base)) + 16 * self.t_coeff.value

    @classmethod
    def from_code(cls, x: int) -> "QuotientRingElement":
        R = quotient_ring_64()
        a, b = R.split(int(x))
        return cls(R.witt.from_code(int(a)), FqElement(R.residue_field, int(b)))

    @classmethod
    def t(cls) -> "QuotientRingElement":
        return cls.from_code(quotient_ring_64().t)

    def _other(self, other) -> int:
        if isinstance(other, int):
            return int(self.ring.from_int(other))
        if not isinstance(other, QuotientRingElement):
            raise TypeError(other)
        return other.code()

    def __add__(self, other):
        return QuotientRingElement.from_code(self.ring.add(self.code(), self._other(other)))

    __radd__ = __add__

    def __neg__(self):
        return QuotientRingElement.from_code(self.ring.neg(self.code()))

    def __sub__(self, other):
        return QuotientRingElement.from_code(self.ring.sub(self.code(), self._other(other)))

    def __mul__(self, other):
        return QuotientRingElement.from_code(self.ring.mul(self.code(), self._other(other)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = QuotientRingElement.from_code(1)
        for _ in range(e):
            out = out * self
        return out

    def is_unit(self) -> bool:
        return bool(self.ring.is_unit(self.code()))

    def inverse(self) -> "QuotientRingElement":
        return QuotientRingElement.from_code(self.ring.inv(self.code()))

    def reduce(self) -> FqElement:
        return self.base.reduce()

    def to_json(self) -> dict:
        return self.ring.element_to_json(self.code())
