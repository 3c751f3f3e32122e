"""Finite models of the mod p and mod p^2 Galois cohomology of a local field.

The p-adic model: H^1(mu_(p^k)) is (Z/p^k)^d with the cup product x^T J y
into H^2 = Z/p^k, J block-diagonal with blocks [[0, 1], [-1, 0]].  i is
multiplication by p from level 1 to level 2 and pi is reduction mod p.  The
model Galois group is the one-relator pro-p group on g_1..g_d with relation
r = g_1^(p^s) [g_1, g_2] ... [g_(d-1), g_d]; its commutator pairing is J.

The tame model: a local field with residue field F_q, q = 1 mod p and
q != 1 mod p^2.  Elements are (valuation, unit) with the unit a nonzero
residue; classes in H^1(mu_p) have (valuation, unit) coordinates mod p.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra.fields import field_of_order, is_prime


class LevelMismatch(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


class NotOrthogonal(ValueError):
    pass


class CupObstruction(ValueError):
    pass


# ---------------------------------------------------------------------------
# p-adic model
# ---------------------------------------------------------------------------


class LocalModel:
    def __init__(self, p: int, d: int, s: int = 2):
        if not is_prime(p) or p == 2:
            raise ValueError("the local model needs an odd prime p")
        if d < 2 or d % 2:
            raise ValueError("rank d must be even and at least 2")
        if s < 2:
            raise ValueError("s must be at least 2")
        self.p, self.d, self.s = p, d, s
        J = np.zeros((d, d), dtype=np.int64)
        for i in range(0, d, 2):
            J[i, i + 1] = 1
            J[i + 1, i] = -1
        J.setflags(write=False)
        self.J = J
        if np.any(J + J.T) or np.any(np.diag(J)):
            raise AssertionError("Gram matrix is not alternating")

    def modulus(self, level: int) -> int:
        if level not in (1, 2):
            raise ValueError("levels are 1 and 2")
        return self.p**level

    def element(self, coords, level: int) -> "KummerClass":
        return KummerClass(self, level, tuple(int(c) % self.modulus(level) for c in coords))

    def zero(self, level: int) -> "KummerClass":
        return self.element([0] * self.d, level)

    def basis(self, i: int, level: int = 1) -> "KummerClass":
        """e_i: the class taking value 1 on g_i and 0 on the other generators."""
        v = [0] * self.d
        v[i] = 1
        return self.element(v, level)

    def random_class(self, rng: np.random.Generator, level: int) -> "KummerClass":
        return self.element(rng.integers(0, self.modulus(level), size=self.d), level)

    def all_classes(self, level: int):
        import itertools

        for v in itertools.product(range(self.modulus(level)), repeat=self.d):
            yield self.element(v, level)

    def __eq__(self, other) -> bool:
        return isinstance(other, LocalModel) and (self.p, self.d, self.s) == (other.p, other.d, other.s)

    def __hash__(self) -> int:
        return hash((self.p, self.d, self.s))

    def to_json(self) -> dict:
        return {"p": self.p, "d": self.d, "s": self.s, "gram": self.J.tolist(), "coordinates": "MODEL"}


@dataclass(frozen=True)
class KummerClass:
    model: LocalModel
    level: int
    coords: tuple[int, ...]

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)

    def _same(self, other: "KummerClass") -> None:
        if other.model != self.model:
            raise ValueError("classes from different models")
        if other.level != self.level:
            raise LevelMismatch(f"level {self.level} vs level {other.level}")

    def __add__(self, other: "KummerClass") -> "KummerClass":
        self._same(other)
        return self.model.element(self.vector + other.vector, self.level)

    def __sub__(self, other: "KummerClass") -> "KummerClass":
        self._same(other)
        return self.model.element(self.vector - other.vector, self.level)

    def __neg__(self) -> "KummerClass":
        return self.model.element(-self.vector, self.level)

    def scale(self, c: int) -> "KummerClass":
        return self.model.element(c * self.vector, self.level)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_json(self) -> list[int]:
        return list(self.coords)


@dataclass(frozen=True)
class H2Class:
    model: LocalModel
    level: int
    value: int

    def is_zero(self) -> bool:
        return self.value == 0

    def __add__(self, other: "H2Class") -> "H2Class":
        if other.level != self.level:
            raise LevelMismatch("H^2 classes at different levels")
        return H2Class(self.model, self.level, (self.value + other.value) % self.model.modulus(self.level))

    def to_json(self) -> int:
        return self.value


def cup(x: KummerClass, y: KummerClass) -> H2Class:
    x._same(y)
    n = x.model.modulus(x.level)
    return H2Class(x.model, x.level, int(x.vector @ x.model.J @ y.vector) % n)


def bockstein_i(c):
    """Level 1 -> level 2, multiplication by p (on H^1 or H^2 classes)."""
    if c.level != 1:
        raise LevelMismatch("i starts at level 1")
    p = c.model.p
    if isinstance(c, H2Class):
        return H2Class(c.model, 2, (p * c.value) % p**2)
    return c.model.element(p * c.vector, 2)


def bockstein_pi(c):
    """Level 2 -> level 1, reduction mod p."""
    if c.level != 2:
        raise LevelMismatch("pi starts at level 2")
    p = c.model.p
    if isinstance(c, H2Class):
        return H2Class(c.model, 1, c.value % p)
    return c.model.element(c.vector % p, 1)


def digit_lift(x: KummerClass) -> KummerClass:
    """The level-2 class with the same digits as a level-1 class."""
    if x.level != 1:
        raise LevelMismatch("digit lift starts at level 1")
    return x.model.element(x.vector, 2)


def _solve_pairing(x: KummerClass, t: int) -> KummerClass:
    """Some z with x cup z = t at level 1 (x nonzero): supported on the first usable coordinate."""
    p = x.model.p
    row = (x.vector @ x.model.J) % p
    j = int(np.nonzero(row)[0][0])
    z = [0] * x.model.d
    z[j] = t * pow(int(row[j]), -1, p) % p
    return x.model.element(z, 1)


def solve_property_d(y1: KummerClass, y2: KummerClass) -> tuple[KummerClass, KummerClass]:
    """Level-1 classes z1, z2 with i(pi(y1) cup z1 + pi(y2) cup z2) = y1 cup y2."""
    if y1.level != 2 or y2.level != 2:
        raise LevelMismatch("property D takes level-2 classes")
    x1, x2 = bockstein_pi(y1), bockstein_pi(y2)
    if not cup(x1, x2).is_zero():
        raise PreconditionViolated("pi(y1) cup pi(y2) is not zero")
    if x1.is_zero() and x2.is_zero():
        raise PreconditionViolated("both pi(y1) and pi(y2) vanish")
    model = y1.model
    t = cup(y1, y2).value // model.p
    zero = model.zero(1)
    if not x1.is_zero():
        return _solve_pairing(x1, t), zero
    return zero, _solve_pairing(x2, t)


def property_d_holds(y1: KummerClass, y2: KummerClass, z1: KummerClass, z2: KummerClass) -> bool:
    lhs = bockstein_i(cup(bockstein_pi(y1), z1) + cup(bockstein_pi(y2), z2))
    return lhs == cup(y1, y2)


def lift_orthogonal_pair(x1: KummerClass, x2: KummerClass) -> tuple[KummerClass, KummerClass]:
    """Level-2 lifts of an orthogonal level-1 pair that are still orthogonal."""
    if x1.level != 1 or x2.level != 1:
        raise LevelMismatch("lift_orthogonal_pair takes level-1 classes")
    if not cup(x1, x2).is_zero():
        raise NotOrthogonal("x1 cup x2 is not zero")
    if x1.is_zero() and x2.is_zero():
        return x1.model.zero(2), x1.model.zero(2)
    y1, y2 = digit_lift(x1), digit_lift(x2)
    z1, z2 = solve_property_d(y1, y2)
    return y1 + bockstein_i(z2), y2 - bockstein_i(z1)


def projection_identity(y: KummerClass, z: KummerClass) -> bool:
    """y cup i(z) = i(pi(y) cup z)."""
    return cup(y, bockstein_i(z)) == bockstein_i(cup(bockstein_pi(y), z))


def p_squared_identity(z1: KummerClass, z2: KummerClass) -> bool:
    """i(z1) cup i(z2) = 0."""
    return cup(bockstein_i(z1), bockstein_i(z2)).is_zero()


def pairing_rank(model: LocalModel) -> int:
    """Rank over F_p of x -> (x cup -); equal to d exactly when the level-1 pairing is perfect."""
    from .algebra.linalg import rank_mod_p

    return rank_mod_p(model.J % model.p, model.p)


# ---------------------------------------------------------------------------
# Heisenberg representations
# ---------------------------------------------------------------------------


def _unitri(a: int, b: int, c: int, n: int) -> np.ndarray:
    return np.array([[1, a % n, c % n], [0, 1, b % n], [0, 0, 1]], dtype=np.int64)


def _inv_unitri(M: np.ndarray, n: int) -> np.ndarray:
    a, b, c = M[0, 1], M[1, 2], M[0, 2]
    return _unitri(-a, -b, a * b - c, n)


def relation_word(model: LocalModel) -> list[tuple[int, int]]:
    """r = g_1^(p^s) [g_1, g_2] ... [g_(d-1), g_d] as (generator, exponent) letters."""
    word = [(0, model.p**model.s)]
    for i in range(0, model.d, 2):
        word += [(i, 1), (i + 1, 1), (i, -1), (i + 1, -1)]
    return word


def _matrix_power_mod(M: np.ndarray, e: int, n: int) -> np.ndarray:
    out = np.eye(M.shape[0], dtype=np.int64)
    base = M % n
    while e:
        if e & 1:
            out = (out @ base) % n
        base = (base @ base) % n
        e >>= 1
    return out


@dataclass(frozen=True)
class HeisenbergRep:
    """Images of g_1..g_d as unitriangular 3x3 matrices over Z/p^level."""

    model: LocalModel
    level: int
    images: tuple[np.ndarray, ...]

    def __post_init__(self):
        for M in self.images:
            M.setflags(write=False)

    @property
    def modulus(self) -> int:
        return self.model.modulus(self.level)

    @cached_property
    def x1(self) -> KummerClass:
        return self.model.element([M[0, 1] for M in self.images], self.level)

    @cached_property
    def x2(self) -> KummerClass:
        return self.model.element([M[1, 2] for M in self.images], self.level)

    @cached_property
    def phi(self) -> KummerClass:
        return self.model.element([M[0, 2] for M in self.images], self.level)

    def is_unitriangular(self) -> bool:
        return all(
            M.shape == (3, 3) and np.all(np.diag(M) == 1) and not np.any(np.tril(M, -1)) for M in self.images
        )

    def relation_image(self) -> np.ndarray:
        n = self.modulus
        acc = np.eye(3, dtype=np.int64)
        for g, e in relation_word(self.model):
            M = self.images[g] if e > 0 else _inv_unitri(self.images[g], n)
            acc = (acc @ _matrix_power_mod(M, abs(e), n)) % n
        return acc

    def relation_holds(self) -> bool:
        return bool(np.array_equal(self.relation_image(), np.eye(3, dtype=np.int64)))

    def reduce(self) -> "HeisenbergRep":
        if self.level != 2:
            raise LevelMismatch("reduction starts at level 2")
        return HeisenbergRep(self.model, 1, tuple(M % self.model.p for M in self.images))

    def strictly_equal(self, other: "HeisenbergRep") -> bool:
        """Equality up to conjugation by the centre, which acts trivially: identical images."""
        return self.level == other.level and all(np.array_equal(a, b) for a, b in zip(self.images, other.images))

    def to_json(self) -> dict:
        return {
            "model": self.model.to_json(),
            "level": self.level,
            "images": [M.tolist() for M in self.images],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "HeisenbergRep":
        m = obj["model"]
        model = LocalModel(m["p"], m["d"], m.get("s", 2))
        imgs = tuple(np.array(M, dtype=np.int64) % model.modulus(obj["level"]) for M in obj["images"])
        if len(imgs) != model.d:
            raise ValueError(f"expected {model.d} generator images")
        rep = cls(model, obj["level"], imgs)
        if not rep.is_unitriangular():
            raise ValueError("images are not unitriangular")
        return rep


def _exponent_sums(model: LocalModel) -> np.ndarray:
    sums = np.zeros(model.d, dtype=np.int64)
    for g, e in relation_word(model):
        sums[g] += e
    return sums


def _build(model: LocalModel, level: int, x1: KummerClass, x2: KummerClass, phi: KummerClass) -> HeisenbergRep:
    """Images with characters x1, x2 and corners phi, adjusted so that the relation holds.

    The corner of the relation's image is cup(x1, x2) + sum_j e_j phi_j, e_j the
    exponent sum of g_j in r.  When that is nonzero a corner is corrected along
    a generator whose exponent sum is a unit; when none is, the cup product is
    the obstruction.
    """
    n = model.modulus(level)
    corners = list(phi.coords)
    rep = HeisenbergRep(model, level, tuple(_unitri(a, b, c, n) for a, b, c in zip(x1.coords, x2.coords, corners)))
    defect = int(rep.relation_image()[0, 2])
    if defect:
        sums = _exponent_sums(model) % n
        units = [j for j in range(model.d) if sums[j] % model.p]
        if not units:
            raise CupObstruction(f"x1 cup x2 = {cup(x1, x2).value} is not zero")
        j = units[0]
        corners[j] = (corners[j] - defect * pow(int(sums[j]), -1, n)) % n
        rep = HeisenbergRep(model, level, tuple(_unitri(a, b, c, n) for a, b, c in zip(x1.coords, x2.coords, corners)))
    assert rep.relation_holds()
    return rep


def heisenberg_build(model: LocalModel, x1: KummerClass, x2: KummerClass, twist: KummerClass) -> HeisenbergRep:
    for x in (x1, x2, twist):
        if x.level != 1:
            raise LevelMismatch("heisenberg_build takes level-1 classes")
    if not cup(x1, x2).is_zero():
        raise CupObstruction(f"x1 cup x2 = {cup(x1, x2).value} is not zero")
    return _build(model, 1, x1, x2, twist)


def heisenberg_lift(rhobar: HeisenbergRep) -> HeisenbergRep:
    """A level-2 Heisenberg representation reducing exactly to ``rhobar``."""
    if rhobar.level != 1:
        raise LevelMismatch("heisenberg_lift takes a level-1 representation")
    if not (rhobar.is_unitriangular() and rhobar.relation_holds()):
        raise ValueError("input is not a valid Heisenberg representation")
    model = rhobar.model
    X1, X2 = lift_orthogonal_pair(rhobar.x1, rhobar.x2)
    lifted = _build(model, 2, X1, X2, digit_lift(rhobar.phi))
    red = lifted.reduce()
    if not red.strictly_equal(rhobar):
        # move the corner back by the digit lift of the difference
        diff = rhobar.phi - red.phi
        lifted = _build(model, 2, X1, X2, lifted.phi + digit_lift(diff))
    return lifted


def heisenberg_checks(lift: HeisenbergRep, rhobar: HeisenbergRep) -> dict[str, bool]:
    return {
        "unitriangular": lift.is_unitriangular(),
        "relation": lift.relation_holds(),
        "reduction": lift.reduce().strictly_equal(rhobar),
    }


def lift_unipotent2(model: LocalModel, x: KummerClass) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """The 2x2 unitriangular representation with character x and a level-2 lift of it."""
    if x.level != 1:
        raise LevelMismatch("lift_unipotent2 takes a level-1 class")
    X = digit_lift(x)
    low = [np.array([[1, a], [0, 1]], dtype=np.int64) for a in x.coords]
    high = [np.array([[1, a], [0, 1]], dtype=np.int64) for a in X.coords]
    for imgs, n in ((low, model.p), (high, model.p**2)):
        if not np.array_equal(_relation_2x2(model, imgs, n), np.eye(2, dtype=np.int64)):
            raise AssertionError("relation fails for a 2x2 unitriangular representation")
    if any(not np.array_equal(h % model.p, l) for h, l in zip(high, low)):
        raise AssertionError("lift does not reduce to the input")
    return low, high


def _relation_2x2(model: LocalModel, images, n: int) -> np.ndarray:
    acc = np.eye(2, dtype=np.int64)
    for g, e in relation_word(model):
        M = images[g] if e > 0 else np.array([[1, -images[g][0, 1] % n], [0, 1]], dtype=np.int64)
        acc = (acc @ _matrix_power_mod(M, abs(e), n)) % n
    return acc


# ---------------------------------------------------------------------------
# tame model
# ---------------------------------------------------------------------------


class TameModel:
    def __init__(self, p: int, q: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if (q - 1) % p or (q - 1) % (p * p) == 0:
            raise ValueError("need p | q - 1 and p^2 not dividing q - 1")
        self.p, self.q = p, q
        self.k = field_of_order(q)
        self.g = self.k.generator()
        self.zeta = int(self.k.power(self.g, (q - 1) // p))
        self._dlog_zeta = {int(self.k.power(self.zeta, e)): e for e in range(p)}
        self._dlog = {int(self.k.power(self.g, e)): e for e in range(q - 1)}

    def units(self) -> list[int]:
        return list(range(1, self.q))

    def mul(self, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
        return a[0] + b[0], int(self.k.mul(a[1], b[1]))

    def neg(self, a: tuple[int, int]) -> tuple[int, int]:
        return a[0], int(self.k.neg(a[1]))

    def dlog(self, u: int) -> int:
        return self._dlog[int(u)]

    def kummer_class(self, a: tuple[int, int]) -> tuple[int, int]:
        """Coordinates (valuation, unit) mod p of the class of a in H^1(mu_p)."""
        return a[0] % self.p, self.dlog(a[1]) % self.p

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "generator": self.g, "zeta": self.zeta, "d_normalization": 1}


def tame_symbol(model: TameModel, a: tuple[int, int], b: tuple[int, int]) -> int:
    """Exponent of ((-1)^(va vb) b^va a^-vb)^((q-1)/p) in zeta = g^((q-1)/p)."""
    k = model.k
    (va, ua), (vb, ub) = a, b
    if ua == 0 or ub == 0:
        raise ValueError("units must be nonzero")
    sign = k.neg(1) if (va * vb) % 2 else 1
    val = k.mul(sign, k.mul(k.power(ub, va % (model.q - 1)), k.power(k.inv(ua), vb % (model.q - 1))))
    return model._dlog_zeta[int(k.power(val, (model.q - 1) // model.p))]


def tame_d_map(model: TameModel, x: tuple[int, int]) -> int:
    """d on H^1 classes in (valuation, unit) coordinates: the valuation coordinate."""
    return x[0] % model.p
