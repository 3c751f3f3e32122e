"""Matrix representations of finite groups and the standard constructions on them."""
from __future__ import annotations

import threading

import numpy as np

from .algebra.fields import GF, field
from .algebra.matrix import (
    NotInvertible,
    RingMatrix,
    batch_identity,
    batch_matmul,
    inverse_entries,
    is_field,
    ring_from_tag,
)
from .groups import FULL_CHECK_ORDER, FiniteGroup, format_word


SEARCH_LIMIT = 4096


class RelatorViolation(ValueError):
    pass


class NotAHomomorphism(ValueError):
    pass


class Representation:
    """A group together with one invertible matrix per generator.

    The images of all group elements are expanded lazily along the group's
    spanning tree and cached; the cache is filled under a lock.
    """

    def __init__(
        self,
        group: FiniteGroup,
        ring,
        generator_images,
        name: str | None = None,
        check: bool = True,
        dim: int | None = None,
    ):
        imgs = []
        for M in generator_images:
            M = M if isinstance(M, RingMatrix) else RingMatrix(ring, M)
            if M.ring is not ring:
                raise ValueError(f"generator image over {M.ring.tag}, expected {ring.tag}")
            imgs.append(M)
        if len(imgs) != len(group.generators):
            raise ValueError(f"{group.name} has {len(group.generators)} generators, got {len(imgs)} images")
        dims = {M.n for M in imgs}
        if len(dims) > 1:
            raise ValueError("generator images have different sizes")
        self.group = group
        self.ring = ring
        self.n = dims.pop() if dims else (dim or 1)
        self.generator_images = tuple(imgs)
        self.name = name
        self._images = None
        self._inverses = None
        self._lock = threading.Lock()
        if check:
            for M in imgs:
                if not M.is_invertible():
                    raise NotInvertible("generator image is not invertible")
            self.check_relators()
            if group.order <= FULL_CHECK_ORDER:
                self.verify_homomorphism()

    # -- expansion ------------------------------------------------------------
    @property
    def images(self) -> np.ndarray:
        """Array of shape (N, n, n): the image of every group element."""
        if self._images is None:
            with self._lock:
                if self._images is None:
                    G = self.group
                    out = np.empty((G.order, self.n, self.n), dtype=np.int64)
                    out[G.identity] = batch_identity(self.ring, self.n)
                    gens = [M.entries for M in self.generator_images]
                    for parent, pos, child in G.spanning_tree:
                        out[child] = batch_matmul(self.ring, out[parent], gens[pos])
                    out.setflags(write=False)
                    self._images = out
        return self._images

    @property
    def inverse_images(self) -> np.ndarray:
        if self._inverses is None:
            inv = self.images[self.group.inverses]
            inv.setflags(write=False)
            self._inverses = inv
        return self._inverses

    def image(self, g: int) -> RingMatrix:
        return RingMatrix(self.ring, self.images[g])

    def evaluate_word(self, word) -> np.ndarray:
        acc = batch_identity(self.ring, self.n)
        for pos, e in word:
            M = self.generator_images[pos] ** e
            acc = batch_matmul(self.ring, acc, M.entries)
        return acc

    # -- checks ---------------------------------------------------------------------
    def check_relators(self) -> None:
        eye = batch_identity(self.ring, self.n)
        for w in self.group.relators:
            if not np.array_equal(self.evaluate_word(w), eye):
                raise RelatorViolation(
                    f"relator {format_word(w, self.group.generator_names)} does not map to I"
                )

    def verify_homomorphism(self, sample: int | None = None) -> None:
        """Check f(gh) = f(g)f(h) on all pairs, or on ``sample`` random pairs."""
        G, imgs = self.group, self.images
        if sample is None:
            for g in range(G.order):
                prod = batch_matmul(self.ring, imgs[g][None], imgs)
                if not np.array_equal(prod, imgs[G.table[g]]):
                    raise NotAHomomorphism(f"f(gh) != f(g)f(h) for g = {g}")
        else:
            rng = np.random.default_rng(0)
            g, h = rng.integers(0, G.order, size=(2, sample))
            if not np.array_equal(batch_matmul(self.ring, imgs[g], imgs[h]), imgs[G.table[g, h]]):
                raise NotAHomomorphism("f(gh) != f(g)f(h) on a sampled pair")

    def is_homomorphism(self) -> bool:
        try:
            self.check_relators()
            self.verify_homomorphism()
        except (RelatorViolation, NotAHomomorphism):
            return False
        return True

    # -- derived representations -------------------------------------------------
    def restrict(self, H: FiniteGroup) -> "Representation":
        """Restriction to a subgroup produced by ``FiniteGroup.subgroup``."""
        if H.embedding is None:
            raise ValueError("subgroup has no embedding into the ambient group")
        gens = [RingMatrix(self.ring, self.images[H.embedding[h]]) for h in H.generators]
        return Representation(H, self.ring, gens, name=f"res {self.name}" if self.name else None, check=False)

    def map_ring(self, ring, fn) -> "Representation":
        return Representation(self.group, ring, [M.map(ring, fn) for M in self.generator_images], check=False)

    def reduce(self) -> "Representation":
        from .algebra.matrix import reduce_mod_p

        red = [reduce_mod_p(M) for M in self.generator_images]
        return Representation(self.group, red[0].ring, red, check=False)

    # -- equality -------------------------------------------------------------------
    def strict_equal(self, other: "Representation") -> bool:
        return (
            other.group is self.group
            and other.ring is self.ring
            and other.n == self.n
            and all(a == b for a, b in zip(self.generator_images, other.generator_images))
        )

    def is_conjugate(self, other: "Representation") -> bool:
        """Whether some invertible P has P f(s) = f'(s) P for every generator (fields only).

        The intertwiner space is computed exactly.  When it has more than
        ``SEARCH_LIMIT`` elements only a seeded sample is tried, so a False
        answer there means no invertible intertwiner was found.
        """
        if not is_field(self.ring) or other.ring is not self.ring:
            raise ValueError("conjugacy test needs two representations over the same field")
        if other.n != self.n or other.group is not self.group:
            return False
        if self.strict_equal(other):
            return True
        k: GF = self.ring
        n = self.n
        # Solve P A_s - B_s P = 0 over F_p, P in M_n(k) flattened by F_p coordinates.
        from .algebra.linalg import nullspace_mod_p

        basis = _matrix_basis(k, n)
        rows = []
        for A, B in zip(self.generator_images, other.generator_images):
            left = batch_matmul(k, basis, A.entries)
            right = batch_matmul(k, B.entries, basis)
            diff = k.sub(left, right)
            rows.append(_matrices_to_fp(k, diff).T)
        system = np.concatenate(rows, axis=0)
        null = nullspace_mod_p(system, k.p)
        if null.shape[0] == 0:
            return False
        # Look for an invertible intertwiner: exhaustively when the space has at
        # most SEARCH_LIMIT elements, otherwise among SEARCH_LIMIT seeded draws.
        rng = np.random.default_rng(0)
        dim = null.shape[0]
        exhaustive = k.p**dim <= SEARCH_LIMIT
        for t in range(k.p**dim if exhaustive else SEARCH_LIMIT):
            if exhaustive:
                coeff = np.array([(t // k.p**i) % k.p for i in range(dim)])
            else:
                coeff = rng.integers(0, k.p, size=dim)
            P = _fp_to_matrix(k, n, (coeff @ null) % k.p)
            try:
                inverse_entries(k, P)
                return True
            except NotInvertible:
                continue
        return False

    def __eq__(self, other) -> bool:
        if not isinstance(other, Representation):
            return NotImplemented
        if is_field(self.ring) and other.ring is self.ring:
            return self.is_conjugate(other)
        return self.strict_equal(other)

    __hash__ = None  # conjugacy equality has no compatible hash

    # -- serialisation ------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "ring": self.ring.tag,
            "n": self.n,
            "generator_images": [M.to_json() for M in self.generator_images],
        }

    @classmethod
    def from_json(cls, obj: dict, group: FiniteGroup | None = None) -> "Representation":
        G = group or FiniteGroup.from_json(obj["group"])
        ring = ring_from_tag(obj["ring"])
        mats = [RingMatrix.from_json(m) for m in obj["generator_images"]]
        for M in mats:
            if M.ring is not ring:
                raise ValueError("generator image ring does not match the declared ring")
            if M.n != int(obj["n"]):
                raise ValueError("generator image size does not match n")
        return cls(G, ring, mats)

    def __repr__(self) -> str:
        return f"Representation({self.name or '?'}: {self.group.name} -> GL_{self.n}({self.ring.tag}))"


def _matrix_basis(k: GF, n: int) -> np.ndarray:
    """Stack of the n*n*m matrices alpha^c E_ij, ordered by (i, j, c)."""
    out = np.zeros((n * n * k.m, n, n), dtype=np.int64)
    idx = 0
    for i in range(n):
        for j in range(n):
            for c in range(k.m):
                out[idx, i, j] = k.p**c
                idx += 1
    return out


def _matrices_to_fp(k: GF, mats: np.ndarray) -> np.ndarray:
    """(..., n, n) codes -> (..., n*n*m) F_p coordinates."""
    mats = np.asarray(mats, dtype=np.int64)
    digits = k.digit_vectors(mats)  # (..., n, n, m)
    return digits.reshape(mats.shape[:-2] + (-1,))


def _fp_to_matrix(k: GF, n: int, vec: np.ndarray) -> np.ndarray:
    vec = np.asarray(vec, dtype=np.int64).reshape(vec.shape[:-1] + (n, n, k.m))
    return k.from_digit_vectors(vec)


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


def trivial_rep(G: FiniteGroup, ring, n: int = 1) -> Representation:
    eye = RingMatrix.identity(ring, n)
    return Representation(G, ring, [eye] * len(G.generators), name="trivial")


def permutation_matrix(ring, perm) -> RingMatrix:
    n = len(perm)
    M = np.full((n, n), ring.zero, dtype=np.int64)
    for j, i in enumerate(perm):
        M[i, j] = ring.one
    return RingMatrix(ring, M)


def induce_rep(G: FiniteGroup, H_elements, rho: Representation) -> Representation:
    """Induce ``rho`` from the subgroup on ``H_elements`` to G.

    Cosets are ordered with H first and then by least element; the
    representative of each coset other than H is its least element, and the
    representative of H is the identity.  Block (i, j) of the image of g is
    rho(t_i^-1 g t_j) when that element lies in H.
    """
    H_elements = sorted(set(int(x) for x in H_elements))
    H = rho.group
    if not G.is_subgroup(H_elements):
        from .groups import NotASubgroup

        raise NotASubgroup("H is not closed under the group law")
    if H.embedding is not None and list(H.embedding) != H_elements:
        raise ValueError("rho's group is not the designated subgroup")
    if H.embedding is None and H.order != len(H_elements):
        raise ValueError("rho's group has the wrong order for the designated subgroup")
    pos_in_H = {g: i for i, g in enumerate(H_elements)}
    cosets = G.left_cosets(H_elements)
    reps = [G.identity] + [c[0] for c in cosets[1:]]
    r, n, ring = len(reps), rho.n, rho.ring
    himgs = rho.images
    gens = []
    for s in G.generators:
        M = np.full((r * n, r * n), ring.zero, dtype=np.int64)
        for j, tj in enumerate(reps):
            x = G.mul(s, tj)
            for i, ti in enumerate(reps):
                h = G.mul(G.inv(ti), x)
                if h in pos_in_H:
                    M[i * n : (i + 1) * n, j * n : (j + 1) * n] = himgs[pos_in_H[h]]
                    break
        gens.append(RingMatrix(ring, M))
    name = f"Ind_{H.name}^{G.name}({rho.name or 'rho'})"
    return Representation(G, ring, gens, name=name)


def mackey_summand_check(induced: Representation, H: FiniteGroup, rho: Representation) -> bool:
    """Verify that rho is a direct summand of the restriction of ``induced`` to H.

    The projection e onto the first coset block commutes with the restricted
    images and e * res(g) * e equals rho(g) on that block.
    """
    n, N = rho.n, induced.n
    ring = induced.ring
    e = np.full((N, N), ring.zero, dtype=np.int64)
    for i in range(n):
        e[i, i] = ring.one
    res = induced.restrict(H)
    imgs = res.images
    for h in range(H.order):
        A = imgs[h]
        if not np.array_equal(batch_matmul(ring, e, A), batch_matmul(ring, A, e)):
            return False
        if not np.array_equal(A[:n, :n], rho.images[h]):
            return False
    return True


def jordan_block(ring, size: int) -> RingMatrix:
    """I + N with N the nilpotent shift having ones on the superdiagonal."""
    M = batch_identity(ring, size)
    for i in range(size - 1):
        M[i, i + 1] = ring.one
    return RingMatrix(ring, M)


def nilpotent_shift(ring, size: int) -> RingMatrix:
    M = np.full((size, size), ring.zero, dtype=np.int64)
    for i in range(size - 1):
        M[i, i + 1] = ring.one
    return RingMatrix(ring, M)


def jordan_block_rep(p: int, n: int, k: GF | None = None, size: int | None = None) -> Representation:
    """Z/p^n acting by a unipotent Jordan block of size p^(n-1) + 1 (or ``size``)."""
    from .groups import cyclic

    k = k or field(p)
    if k.p != p:
        raise ValueError(f"field {k.tag} does not have characteristic {p}")
    size = size or p ** (n - 1) + 1
    return Representation(cyclic(p**n), k, [jordan_block(k, size)], name=f"J{size}")


def two_powers_rep(m: int, n: int) -> Representation:
    """Z/2^m x Z/2^n over F_4 with generators I + x and I + w x^(2^(m-n)), x the shift of size 2^m."""
    from .groups import cyclic_product

    if not (m >= n >= 1):
        raise ValueError("need m >= n >= 1")
    k = field(2, 2)
    size = 2**m
    x = nilpotent_shift(k, size)
    eye = RingMatrix.identity(k, size)
    y = (x ** (2 ** (m - n))).scale(k.generator())
    G = cyclic_product((2**m, 2**n))
    return Representation(G, k, [eye + x, eye + y], name=f"two_powers({m},{n})")


def natural_rep(G: FiniteGroup) -> Representation:
    """The defining matrix representation of a catalogued matrix or permutation group."""
    labels = G.labels
    if G.name.startswith("SL2(F"):
        p = int(G.name[5:-1])
        k = field(p)
        gens = [RingMatrix(k, np.array(labels[g]).reshape(2, 2)) for g in G.generators]
        return Representation(G, k, gens, name="natural")
    if G.name == "S3":
        # S3 = GL_2(F_2) acting on F_2^2 through its action on the three nonzero vectors
        k = field(2)
        vecs = [(1, 0), (0, 1), (1, 1)]
        gens = []
        for g in G.generators:
            perm = labels[g]
            images = [vecs[perm[0]], vecs[perm[1]]]
            gens.append(RingMatrix(k, np.array(images).T))
        return Representation(G, k, gens, name="natural")
    raise ValueError(f"no natural representation recorded for {G.name}")
