"""Finite groups stored as Cayley tables, with optional presentations.

Elements are indices ``0..N-1``.  Words in the generators are tuples of
``(generator_position, exponent)`` pairs; :func:`parse_word` reads the
``"a^2 b^-1 a"`` notation used in JSON files.
"""
from __future__ import annotations

import functools
import itertools
import random
import re
from collections import deque
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

Word = tuple[tuple[int, int], ...]

FULL_CHECK_ORDER = 64
MAX_ORDER = 256


class GroupError(ValueError):
    pass


class NotASubgroup(GroupError):
    pass


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse 'a^2 b^-1 a' (spaces or '*' between letters) into a Word."""
    out = []
    for token in re.split(r"[\s*]+", text.strip()):
        if not token or token == "1":
            continue
        m = re.fullmatch(r"([A-Za-z_]\w*?)(?:\^(-?\d+))?", token)
        if not m or m.group(1) not in names:
            raise GroupError(f"cannot parse {token!r} with generators {list(names)}")
        out.append((list(names).index(m.group(1)), int(m.group(2) or 1)))
    return tuple(out)


def format_word(word: Word, names: Sequence[str]) -> str:
    if not word:
        return "1"
    return " ".join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in word)


def commutator(a: int, b: int) -> Word:
    """[a, b] = a b a^-1 b^-1 as a word in generator positions a, b."""
    return ((a, 1), (b, 1), (a, -1), (b, -1))


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[g, h]`` is the index of ``g*h``.  ``relators`` are words in the
    generators that evaluate to the identity; when ``presentation_complete``
    is true they define the group.
    """

    def __init__(
        self,
        table,
        generators: Sequence[int],
        identity: int = 0,
        relators: Iterable[Word] = (),
        name: str | None = None,
        generator_names: Sequence[str] | None = None,
        labels: Sequence[Hashable] | None = None,
        embedding: Sequence[int] | None = None,
        presentation_complete: bool = False,
        validate: bool = True,
    ):
        table = np.array(table, dtype=np.int64)
        table.setflags(write=False)
        self.table = table
        self.order = table.shape[0]
        self.identity = int(identity)
        self.generators = tuple(int(g) for g in generators)
        self.generator_names = tuple(generator_names or "abcdefghijklmnopqrstuvwxyz"[: len(self.generators)])
        self.relators = tuple(tuple((int(g), int(e)) for g, e in w) for w in relators)
        self.name = name or f"G{self.order}"
        self.labels = tuple(labels) if labels is not None else None
        self.embedding = tuple(embedding) if embedding is not None else None
        self.presentation_complete = presentation_complete
        inv = np.empty(self.order, dtype=np.int64)
        rows, cols = np.nonzero(table == self.identity)
        inv[rows] = cols
        self.inverses = inv
        if validate:
            self.validate()

    # -- construction ---------------------------------------------------------
    @classmethod
    def from_generators(
        cls,
        gens: Sequence,
        mul: Callable,
        identity,
        key: Callable = lambda x: x,
        **kw,
    ) -> "FiniteGroup":
        """Close ``gens`` under ``mul``; elements are numbered in BFS order from the identity."""
        elems = [identity]
        index = {key(identity): 0}
        queue = deque([identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = mul(x, g)
                k = key(y)
                if k not in index:
                    index[k] = len(elems)
                    elems.append(y)
                    queue.append(y)
                    if len(elems) > 100_000:
                        raise GroupError("group too large")
        N = len(elems)
        table = np.empty((N, N), dtype=np.int64)
        for i, x in enumerate(elems):
            for j, y in enumerate(elems):
                table[i, j] = index[key(mul(x, y))]
        kw.setdefault("labels", [key(e) for e in elems])
        return cls(table, [index[key(g)] for g in gens], 0, **kw)

    # -- basic operations ---------------------------------------------------------
    def mul(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def inv(self, g: int) -> int:
        return int(self.inverses[g])

    def power(self, g: int, e: int) -> int:
        if e < 0:
            g, e = self.inv(g), -e
        x = self.identity
        for _ in range(e):
            x = self.mul(x, g)
        return x

    def element_order(self, g: int) -> int:
        x, k = g, 1
        while x != self.identity:
            x = self.mul(x, g)
            k += 1
        return k

    def evaluate(self, word: Word) -> int:
        x = self.identity
        for gpos, e in word:
            x = self.mul(x, self.power(self.generators[gpos], e))
        return x

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def exponent(self) -> int:
        import math

        return functools.reduce(math.lcm, (self.element_order(g) for g in range(self.order)), 1)

    @functools.cached_property
    def spanning_tree(self) -> list[tuple[int, int, int]]:
        """BFS edges (parent, generator position, child) with child = parent * generator."""
        seen = {self.identity}
        edges = []
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for pos, s in enumerate(self.generators):
                y = self.mul(x, s)
                if y not in seen:
                    seen.add(y)
                    edges.append((x, pos, y))
                    queue.append(y)
        if len(seen) != self.order:
            raise GroupError(f"generators of {self.name} do not generate the group")
        return edges

    def closure(self, elements: Iterable[int]) -> list[int]:
        elems = {self.identity}
        frontier = list(set(elements))
        gens = list(frontier)
        elems.update(frontier)
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in elems:
                        elems.add(y)
                        new.append(y)
            frontier = new
        return sorted(elems)

    # -- validation -----------------------------------------------------------------
    def validate(self) -> None:
        N, T = self.order, self.table
        if N > MAX_ORDER:
            raise GroupError(f"groups of order > {MAX_ORDER} are not supported")
        if T.min() < 0 or T.max() >= N:
            raise GroupError("table entries out of range")
        ar = np.arange(N)
        if not (np.array_equal(T[self.identity], ar) and np.array_equal(T[:, self.identity], ar)):
            raise GroupError("identity row/column is wrong")
        for row in T:
            if len(set(row.tolist())) != N:
                raise GroupError("table is not a Latin square")
        if N <= FULL_CHECK_ORDER:
            lhs = T[T[:, :, None], ar[None, None, :]]  # (gh)l
            rhs = T[ar[:, None, None], T[None, :, :]]  # g(hl)
            if not np.array_equal(lhs, rhs):
                raise GroupError("table is not associative")
        else:
            rng = np.random.default_rng(0)
            g, h, l = rng.integers(0, N, size=(3, 20000))
            if not np.array_equal(T[T[g, h], l], T[g, T[h, l]]):
                raise GroupError("table is not associative")
        _ = self.spanning_tree
        for w in self.relators:
            if self.evaluate(w) != self.identity:
                raise GroupError(f"relator {format_word(w, self.generator_names)} is not trivial in {self.name}")

    # -- subgroups ------------------------------------------------------------------------
    def is_subgroup(self, elements: Iterable[int]) -> bool:
        S = set(int(x) for x in elements)
        if self.identity not in S:
            return False
        return all(self.mul(a, b) in S for a in S for b in S)

    def subgroup(self, elements: Iterable[int], name: str | None = None) -> "FiniteGroup":
        """The subgroup on the given element indices; element i is ``embedding[i]``."""
        elems = sorted(set(int(x) for x in elements))
        if not self.is_subgroup(elems):
            raise NotASubgroup("element list is not closed under the group law")
        pos = {g: i for i, g in enumerate(elems)}
        table = [[pos[self.mul(a, b)] for b in elems] for a in elems]
        gens: list[int] = []
        span = {self.identity}
        for g in elems:
            if g not in span:
                gens.append(g)
                span = set(self.closure(gens))
        return FiniteGroup(
            table,
            [pos[g] for g in gens],
            identity=pos[self.identity],
            name=name or f"{self.name}>{len(elems)}",
            embedding=elems,
            labels=[self.labels[g] for g in elems] if self.labels else None,
        )

    def cyclic_subgroup(self, g: int) -> list[int]:
        return self.closure([g])

    def sylow_subgroup(self, p: int) -> list[int]:
        """A Sylow p-subgroup, grown greedily from elements of p-power order (least index first)."""
        N = self.order
        target = 1
        while N % (target * p) == 0:
            target *= p
        current = [self.identity]

        def is_p_power(n: int) -> bool:
            while n % p == 0:
                n //= p
            return n == 1

        candidates = [g for g in range(N) if is_p_power(self.element_order(g))]
        while len(current) < target:
            for g in candidates:
                if g in current:
                    continue
                H = self.closure(current[1:] + [g] if len(current) > 1 else [g])
                if is_p_power(len(H)) and len(H) > len(current):
                    current = H
                    break
            else:
                raise GroupError("Sylow search failed")
        return current

    def left_cosets(self, H: Sequence[int]) -> list[list[int]]:
        """Left cosets gH; the coset of H comes first, the others are ordered by least element."""
        Hs = sorted(set(H))
        seen: set[int] = set()
        cosets = [Hs]
        seen.update(Hs)
        for g in range(self.order):
            if g not in seen:
                c = sorted(self.mul(g, h) for h in Hs)
                cosets.append(c)
                seen.update(c)
        return cosets

    # -- serialisation --------------------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "table": self.table.tolist(),
            "identity": self.identity,
            "generators": list(self.generators),
            "generator_names": list(self.generator_names),
            "relators": [format_word(w, self.generator_names) for w in self.relators],
            "presentation_complete": self.presentation_complete,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteGroup":
        names = obj.get("generator_names") or list("abcdefghijklmnopqrstuvwxyz"[: len(obj["generators"])])
        rels = []
        for r in obj.get("relators", []):
            rels.append(parse_word(r, names) if isinstance(r, str) else tuple(tuple(x) for x in r))
        G = cls(
            obj["table"],
            obj["generators"],
            identity=obj.get("identity", 0),
            relators=rels,
            name=obj.get("name"),
            generator_names=names,
            presentation_complete=obj.get("presentation_complete", False),
        )
        if "order" in obj and obj["order"] != G.order:
            raise GroupError("declared order does not match the table")
        return G

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------


def cyclic_product(orders: Sequence[int], name: str | None = None) -> FiniteGroup:
    """Z/n1 x ... x Z/nk with the standard generators and commutator relators."""
    orders = tuple(int(n) for n in orders)
    k = len(orders)
    gens = []
    for i in range(k):
        v = [0] * k
        v[i] = 1 % orders[i]
        gens.append(tuple(v))

    def mul(x, y):
        return tuple((a + b) % n for a, b, n in zip(x, y, orders))

    rels = [((i, orders[i]),) for i in range(k)]
    rels += [commutator(i, j) for i, j in itertools.combinations(range(k), 2)]
    names = list("abcdefgh"[:k])
    return FiniteGroup.from_generators(
        gens,
        mul,
        tuple([0] * k),
        relators=rels,
        name=name or "x".join(f"Z/{n}" for n in orders),
        generator_names=names,
        presentation_complete=True,
    )


def cyclic(n: int) -> FiniteGroup:
    return cyclic_product((n,))


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def abelian_invariants(order: int) -> list[tuple[int, ...]]:
    """Invariant-factor decompositions (d1 | d2 | ...) listed largest factor first."""
    factors: dict[int, int] = {}
    n, p = order, 2
    while n > 1:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += 1
    per_prime = [[(q, part) for part in _partitions(e)] for q, e in sorted(factors.items())]
    out = []
    for combo in itertools.product(*per_prime):
        length = max((len(part) for _, part in combo), default=0)
        inv = [1] * length
        for q, part in combo:
            for i, e in enumerate(part):
                inv[i] *= q**e
        out.append(tuple(inv) if inv else (1,))
    return sorted(out, key=lambda t: (len(t), [-x for x in t]))


def _perm_mul(x, y):
    # apply y first, then x? we use composition (x*y)(i) = x(y(i))
    return tuple(x[i] for i in y)


def symmetric3() -> FiniteGroup:
    a = (1, 2, 0)
    b = (1, 0, 2)
    return FiniteGroup.from_generators(
        [a, b],
        _perm_mul,
        (0, 1, 2),
        relators=[((0, 3),), ((1, 2),), ((0, 1), (1, 1), (0, 1), (1, 1))],
        name="S3",
        presentation_complete=True,
    )


def dihedral8() -> FiniteGroup:
    r = (1, 2, 3, 0)
    s = (0, 3, 2, 1)
    return FiniteGroup.from_generators(
        [r, s],
        _perm_mul,
        (0, 1, 2, 3),
        relators=[((0, 4),), ((1, 2),), ((1, 1), (0, 1), (1, 1), (0, 1))],
        name="D4",
        generator_names=["r", "s"],
        presentation_complete=True,
    )


def _quat_mul(x, y):
    a1, b1, c1, d1 = x
    a2, b2, c2, d2 = y
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def quaternion8() -> FiniteGroup:
    return FiniteGroup.from_generators(
        [(0, 1, 0, 0), (0, 0, 1, 0)],
        _quat_mul,
        (1, 0, 0, 0),
        relators=[((0, 4),), ((0, 2), (1, -2)), ((1, 1), (0, 1), (1, -1), (0, 1))],
        name="Q8",
        presentation_complete=True,
    )


def heisenberg_group(p: int = 3) -> FiniteGroup:
    """Unitriangular 3x3 matrices over F_p, stored as (a, b, c) = (x12, x23, x13)."""

    def mul(x, y):
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + x[0] * y[1]) % p)

    z = ((0, 1), (1, 1), (0, -1), (1, -1))
    return FiniteGroup.from_generators(
        [(1, 0, 0), (0, 1, 0)],
        mul,
        (0, 0, 0),
        relators=[((0, p),), ((1, p),), ((0, 1),) + z + ((0, -1),) + tuple((g, -e) for g, e in reversed(z)),
                  ((1, 1),) + z + ((1, -1),) + tuple((g, -e) for g, e in reversed(z))],
        name=f"H{p**3}",
        generator_names=["x", "y"],
        presentation_complete=True,
    )


def _mat2_mul(p):
    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)

    return mul


def special_linear2(p: int) -> FiniteGroup:
    """SL_2(F_p) for p in {3, 5}, generated by s, t with s^3 = t^r = (st)^2 = -I.

    For p = 3 this is the binary tetrahedral presentation (r = 3), for p = 5 the
    binary icosahedral one (r = 5).  Matrices are stored row-major as (a, b, c, d).
    """
    if p not in (3, 5):
        raise ValueError("only SL_2(F_3) and SL_2(F_5) are catalogued")
    r = 3 if p == 3 else 5
    mul = _mat2_mul(p)
    ident = (1, 0, 0, 1)
    minus = (p - 1, 0, 0, p - 1)
    elems = [(a, b, c, d) for a, b, c, d in itertools.product(range(p), repeat=4) if (a * d - b * c) % p == 1]

    def pw(x, e):
        y = ident
        for _ in range(e):
            y = mul(y, x)
        return y

    def generated(gs):
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gs:
                    y = mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return len(seen)

    for s in elems:
        if pw(s, 3) != minus:
            continue
        for t in elems:
            if pw(t, r) == minus and pw(mul(s, t), 2) == minus and generated([s, t]) == len(elems):
                rels = [((0, 3), (1, -r)), ((0, 3), (1, -1), (0, -1), (1, -1), (0, -1))]
                return FiniteGroup.from_generators(
                    [s, t],
                    mul,
                    ident,
                    relators=rels,
                    name=f"SL2(F{p})",
                    generator_names=["s", "t"],
                    presentation_complete=True,
                )
    raise AssertionError("no generating pair found")


NAMED_GROUPS: dict[str, Callable[[], FiniteGroup]] = {
    "S3": symmetric3,
    "D4": dihedral8,
    "Q8": quaternion8,
    "H27": lambda: heisenberg_group(3),
    "SL2(F3)": lambda: special_linear2(3),
    "SL2(F5)": lambda: special_linear2(5),
}


@functools.lru_cache(maxsize=None)
def named_group(name: str) -> FiniteGroup:
    if name in NAMED_GROUPS:
        return NAMED_GROUPS[name]()
    m = re.fullmatch(r"Z/(\d+)((?:xZ/\d+)*)", name)
    if m:
        return cyclic_product([int(x) for x in re.findall(r"\d+", name)])
    raise KeyError(name)


def group_catalog(max_order: int) -> list[FiniteGroup]:
    """All abelian groups of order <= max_order plus the named non-abelian groups that fit.

    SL2(F5) (order 120) is included whenever max_order >= 120.
    """
    out = []
    for n in range(1, max_order + 1):
        for inv in abelian_invariants(n):
            out.append(named_group("x".join(f"Z/{d}" for d in inv)))
    for name, ctor in NAMED_GROUPS.items():
        G = named_group(name)
        if G.order <= max_order:
            out.append(G)
    out.sort(key=lambda G: (G.order, G.name))
    return out


def random_subgroup(G: FiniteGroup, rng: random.Random) -> list[int]:
    k = rng.randint(1, 2)
    return G.closure(rng.sample(range(G.order), k))
