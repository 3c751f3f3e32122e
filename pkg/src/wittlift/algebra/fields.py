"""Finite fields F_{p^m} with table-driven, numpy-vectorised arithmetic.

An element is encoded as an integer ``0 <= v < q`` whose base-p digits are
its coordinates with respect to the power basis ``1, a, a^2, ...`` of the
modulus root ``a``.  All arithmetic tables are built once per field and
shared read-only.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

# Conway polynomials, coefficients low -> high (monic, leading 1 omitted).
# Only degree >= 2 entries; prime fields use x - g with g the least primitive root.
CONWAY: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1),
    (2, 3): (1, 1, 0),
    (2, 4): (1, 1, 0, 0),
    (2, 5): (1, 0, 1, 0, 0),
    (2, 6): (1, 1, 0, 1, 1, 0),
    (3, 2): (2, 2),
    (3, 3): (1, 2, 0),
    (3, 4): (2, 0, 0, 2),
    (5, 2): (2, 4),
    (5, 3): (3, 3, 0),
    (7, 2): (3, 6),
    (11, 2): (2, 7),
    (13, 2): (2, 12),
}

MAX_TABLE_ORDER = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, m) with q = p^m, or raise ValueError."""
    for p in range(2, q + 1):
        if q % p == 0:
            m, r = 0, q
            while r % p == 0:
                r //= p
                m += 1
            if r != 1 or not is_prime(p):
                break
            return p, m
    raise ValueError(f"{q} is not a prime power")


def _poly_mod(a: list[int], f: list[int], p: int) -> list[int]:
    # f monic, coefficients low -> high
    a = [c % p for c in a]
    df = len(f) - 1
    while len(a) - 1 >= df and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < df:
            break
        c = a[-1]
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    """Brute-force irreducibility of the monic polynomial x^m + sum coeffs[i] x^i."""
    f = list(coeffs) + [1]
    m = len(coeffs)
    if m == 1:
        return True
    for d in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(f, list(low) + [1], p):
                return False
    return True


def primitive_root(p: int) -> int:
    for g in range(1, p):
        if len({pow(g, e, p) for e in range(1, p)}) == p - 1:
            return g
    raise ValueError(p)


def default_modulus(p: int, m: int) -> tuple[int, ...]:
    if m == 1:
        return ((-primitive_root(p)) % p,)
    if (p, m) in CONWAY:
        return CONWAY[(p, m)]
    # first irreducible, lexicographic on (c_{m-1}, ..., c_0)
    for high_first in itertools.product(range(p), repeat=m):
        coeffs = tuple(reversed(high_first))
        if coeffs[0] != 0 and is_irreducible(coeffs, p):
            return coeffs
    raise ValueError(f"no irreducible polynomial of degree {m} over F_{p}")


class FieldMismatch(ValueError):
    pass


class GF:
    """The finite field with ``q = p**m`` elements.

    Use :func:`field` to obtain the shared instance for ``(p, m)``.
    """

    def __init__(self, p: int, m: int = 1, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if m < 1:
            raise ValueError("degree must be positive")
        q = p**m
        if q > MAX_TABLE_ORDER:
            raise ValueError(f"fields larger than {MAX_TABLE_ORDER} elements are not supported")
        self.p, self.m, self.q = p, m, q
        self.modulus = tuple(c % p for c in (modulus or default_modulus(p, m)))
        if len(self.modulus) != m or not is_irreducible(self.modulus, p):
            raise ValueError(f"modulus {self.modulus} is not irreducible of degree {m}")
        self.tag = f"GF({q})"
        self.size = q
        self.zero, self.one = 0, 1
        self._digits = np.array([[(v // p**i) % p for i in range(m)] for v in range(q)], dtype=np.int64)
        self._weights = p ** np.arange(m, dtype=np.int64)
        self._build_tables()

    # -- construction -------------------------------------------------
    def _build_tables(self) -> None:
        p, m, q = self.p, self.m, self.q
        D = self._digits
        add = (D[:, None, :] + D[None, :, :]) % p
        self.add_t = (add @ self._weights).astype(np.int64)
        self.neg_t = ((-D) % p) @ self._weights
        # multiplication via the x^k reduction table
        red = []
        for k in range(2 * m - 1):
            red.append(_poly_mod([0] * k + [1], list(self.modulus) + [1], p) + [0] * m)
        red = np.array([r[:m] for r in red], dtype=np.int64)  # (2m-1, m)
        conv = np.zeros((q, q, 2 * m - 1), dtype=np.int64)
        for i in range(m):
            for j in range(m):
                conv[:, :, i + j] += D[:, None, i] * D[None, :, j]
        prod = (conv % p) @ red % p
        self.mul_t = prod @ self._weights
        self.inv_t = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv_t[a] = int(np.nonzero(self.mul_t[a] == 1)[0][0])
        # Frobenius x -> x^p and its inverse
        frob = np.arange(q, dtype=np.int64)
        acc = np.ones(q, dtype=np.int64)
        for _ in range(p):
            acc = self.mul_t[acc, frob]
        self.frob_t = acc
        self.frob_inv_t = np.empty(q, dtype=np.int64)
        self.frob_inv_t[self.frob_t] = np.arange(q, dtype=np.int64)

    # -- vectorised arithmetic on codes ------------------------------------
    def add(self, a, b):
        if self.m == 1:
            return (np.asarray(a) + b) % self.p
        return self.add_t[a, b]

    def neg(self, a):
        if self.m == 1:
            return (-np.asarray(a)) % self.p
        return self.neg_t[a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.m == 1:
            return (np.asarray(a) * b) % self.p
        return self.mul_t[a, b]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("0 has no inverse")
        return self.inv_t[a]

    def is_unit(self, a):
        return np.asarray(a) != 0

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

    def frobenius(self, a):
        return self.frob_t[a]

    def frobenius_inverse(self, a):
        return self.frob_inv_t[a]

    # -- coordinates -------------------------------------------------------
    def coords(self, a: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self._digits[int(a)])

    def from_coords(self, coords) -> int:
        coords = list(coords)
        if len(coords) != self.m:
            raise ValueError(f"expected {self.m} coordinates, got {len(coords)}")
        return int(sum((int(c) % self.p) * self.p**i for i, c in enumerate(coords)))

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_q."""
        return int(n) % self.p

    def digit_vectors(self, a) -> np.ndarray:
        """Coordinates of an array of codes, shape a.shape + (m,)."""
        return self._digits[np.asarray(a)]

    def from_digit_vectors(self, v) -> np.ndarray:
        return (np.asarray(v) % self.p) @ self._weights

    def mul_matrix(self, a: int) -> np.ndarray:
        """Matrix over F_p of x -> a*x in coordinates (acting on column vectors)."""
        basis = self._weights  # codes of 1, alpha, alpha^2, ...
        cols = self._digits[self.mul(int(a), basis)]  # (m, m), row i = a*alpha^i
        return cols.T.copy()

    def element(self, value) -> "FqElement":
        if isinstance(value, (list, tuple)):
            value = self.from_coords(value)
        return FqElement(self, int(value) % self.q if self.m == 1 else int(value))

    def elements(self):
        return [FqElement(self, v) for v in range(self.q)]

    def generator(self) -> int:
        """Least code generating the multiplicative group."""
        for g in range(1, self.q):
            seen, x = set(), 1
            for _ in range(self.q - 1):
                x = int(self.mul(x, g))
                seen.add(x)
            if len(seen) == self.q - 1:
                return g
        raise AssertionError("no primitive element")

    def element_of_order(self, order: int) -> int:
        if (self.q - 1) % order:
            raise ValueError(f"F_{self.q}^x has no element of order {order}")
        return int(self.power(self.generator(), (self.q - 1) // order))

    # -- misc ----------------------------------------------------------------
    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    def element_to_json(self, a) -> dict:
        return {"p": self.p, "m": self.m, "coords": list(self.coords(a))}

    def element_from_json(self, obj) -> int:
        if isinstance(obj, dict):
            if obj.get("p") != self.p or obj.get("m") != self.m:
                raise FieldMismatch(f"element {obj} does not belong to {self.tag}")
            return self.from_coords(obj["coords"])
        if isinstance(obj, list):
            return self.from_coords(obj)
        return int(obj) % self.q if self.m == 1 else self._checked_code(obj)

    def _checked_code(self, v) -> int:
        v = int(v)
        if not 0 <= v < self.q:
            raise ValueError(f"code {v} out of range for {self.tag}")
        return v

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (field, (self.p, self.m))


def field(p: int, m: int = 1) -> GF:
    """Shared field instance; fields are identified by (p, m) and the default modulus."""
    return _field(int(p), int(m))


@functools.lru_cache(maxsize=None)
def _field(p: int, m: int) -> GF:
    return GF(p, m)


def field_of_order(q: int) -> GF:
    return field(*prime_power(q))


@dataclass(frozen=True)
class FqElement:
    field: GF
    value: int

    def _check(self, other) -> "FqElement":
        if isinstance(other, int):
            return FqElement(self.field, self.field.from_int(other))
        if not isinstance(other, FqElement):
            return NotImplemented
        if other.field is not self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def m(self) -> int:
        return self.field.m

    @property
    def coords(self) -> tuple[int, ...]:
        return self.field.coords(self.value)

    def __add__(self, other):
        other = self._check(other)
        return FqElement(self.field, int(self.field.add(self.value, other.value)))

    __radd__ = __add__

    def __neg__(self):
        return FqElement(self.field, int(self.field.neg(self.value)))

    def __sub__(self, other):
        other = self._check(other)
        return FqElement(self.field, int(self.field.sub(self.value, other.value)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        return FqElement(self.field, int(self.field.mul(self.value, other.value)))

    __rmul__ = __mul__

    def inverse(self) -> "FqElement":
        return FqElement(self.field, int(self.field.inv(self.value)))

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inverse()

    def __pow__(self, e: int):
        return FqElement(self.field, int(self.field.power(self.value, e)))

    def __bool__(self) -> bool:
        return self.value != 0

    def to_json(self) -> dict:
        return self.field.element_to_json(self.value)

    @classmethod
    def from_json(cls, obj: dict) -> "FqElement":
        F = field(obj["p"], obj["m"])
        return FqElement(F, F.from_coords(obj["coords"]))

    def __repr__(self) -> str:
        if self.field.m == 1:
            return f"{self.value}"
        return f"F{self.field.q}{list(self.coords)}"
