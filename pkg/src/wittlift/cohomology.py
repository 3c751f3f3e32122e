"""Obstruction classes for lifting to W_2(k), coboundary solves and H^1.

Modules are F_p-vector spaces with the group acting by matrices on column
vectors; a k-vector space of dimension d becomes F_p^(d*m) by restriction of
scalars, and dimensions are reported over k by dividing by m.  Matrices in
M_n(k) are flattened in (row, column, coordinate) order.

Sign convention: c(g, h) is defined by  g~(g) g~(h) = (I + p c(g, h)) g~(gh)
and the coboundary of a 1-cochain is  (d b)(g, h) = g.b(h) - b(gh) + b(g).
If d b = c then  g -> (I - p b(g)) g~(g)  is a homomorphism.
"""
from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebra.fields import GF
from .algebra.linalg import EchelonBasis, matmul_mod, particular_solution, rank_mod_p, solve_mod_p
from .algebra.matrix import RingMatrix, batch_identity, batch_matmul, inverse_entries
from .algebra.witt import WittRing, witt_ring
from .groups import FiniteGroup, format_word
from .parallel import parallel_map
from .reps import NotAHomomorphism, RelatorViolation, Representation, _fp_to_matrix, _matrices_to_fp, _matrix_basis

MAX_COCYCLE_ORDER = 128
FULL_COCYCLE_CHECK_ORDER = 24
ROW_BLOCK = 256


class GroupTooLarge(ValueError):
    pass


class SearchBudgetExceeded(RuntimeError):
    pass


class Verdict(str, enum.Enum):
    LIFTS = "LIFTS"
    OBSTRUCTED = "OBSTRUCTED"


# ---------------------------------------------------------------------------
# modules
# ---------------------------------------------------------------------------


class FiniteModule:
    """A finite-dimensional F_p[G]-module given by one action matrix per element.

    ``degree`` is [k : F_p] when the module is a k-vector space viewed over
    F_p; it only affects the reported dimensions.
    """

    def __init__(self, group: FiniteGroup, p: int, action, degree: int = 1, name: str | None = None, validate=True):
        action = np.asarray(action, dtype=np.int64) % p
        if action.ndim != 3 or action.shape[0] != group.order or action.shape[1] != action.shape[2]:
            raise ValueError("action must have shape (|G|, D, D)")
        action.setflags(write=False)
        self.group, self.p, self.action, self.degree = group, p, action, degree
        self.dim = action.shape[1]
        self.name = name
        if validate:
            self.validate()

    @classmethod
    def from_generators(cls, group: FiniteGroup, p: int, mats, degree: int = 1, name: str | None = None):
        mats = [np.asarray(M, dtype=np.int64) % p for M in mats]
        D = mats[0].shape[0] if mats else 1
        action = np.empty((group.order, D, D), dtype=np.int64)
        action[group.identity] = np.eye(D, dtype=np.int64)
        for parent, pos, child in group.spanning_tree:
            action[child] = matmul_mod(action[parent], mats[pos], p)
        return cls(group, p, action, degree, name)

    @classmethod
    def trivial(cls, group: FiniteGroup, p: int, dim: int = 1, degree: int = 1):
        action = np.broadcast_to(np.eye(dim, dtype=np.int64), (group.order, dim, dim))
        return cls(group, p, action, degree, name="trivial")

    @classmethod
    def from_representation(cls, f: Representation, name: str | None = None):
        """The underlying F_p-module of a representation over a field."""
        k = f.ring
        if not isinstance(k, GF):
            raise ValueError("module of a representation needs a field")
        basis_vecs = _fp_vector_basis(k, f.n)  # (D, n) codes
        imgs = batch_matmul(k, f.images[:, None, :, :], basis_vecs[None, :, :, None])[..., 0]  # (N, D, n)
        action = np.swapaxes(k.digit_vectors(imgs).reshape(f.group.order, len(basis_vecs), -1), 1, 2)
        return cls(f.group, k.p, action, k.m, name=name or f"V({f.name})")

    @property
    def k_dim(self) -> int:
        return self.dim // self.degree

    def validate(self) -> None:
        G, A, p = self.group, self.action, self.p
        if not np.array_equal(A[G.identity], np.eye(self.dim, dtype=np.int64)):
            raise ValueError("identity does not act trivially")
        for g in range(G.order):
            if not np.array_equal(matmul_mod(A[g][None], A, p), A[G.table[g]]):
                raise ValueError(f"action is not a homomorphism at g = {g}")

    def fixed_dimension(self) -> int:
        G = self.group
        stacked = np.concatenate([(self.action[s] - np.eye(self.dim, dtype=np.int64)) % self.p for s in G.generators] or [np.zeros((0, self.dim), dtype=np.int64)])
        return (self.dim - rank_mod_p(stacked, self.p)) // self.degree

    def restrict(self, H: FiniteGroup) -> "FiniteModule":
        return FiniteModule(H, self.p, self.action[list(H.embedding)], self.degree, self.name, validate=False)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "p": self.p,
            "degree": self.degree,
            "dim": self.dim,
            "generator_action": [self.action[s].tolist() for s in self.group.generators],
        }


def _fp_vector_basis(k: GF, n: int) -> np.ndarray:
    out = np.zeros((n * k.m, n), dtype=np.int64)
    for i in range(n):
        for c in range(k.m):
            out[i * k.m + c, i] = k.p**c
    return out


class AdjointModule(FiniteModule):
    """M_n(k) with g acting by M -> f(g) M f(g)^-1."""

    def __init__(self, f: Representation):
        k = f.ring
        if not isinstance(k, GF):
            raise ValueError("the adjoint module needs a representation over a finite field")
        self.rep = f
        self.field = k
        n = f.n
        basis = _matrix_basis(k, n)  # (D, n, n)
        F, Finv = f.images, f.inverse_images
        conj = batch_matmul(k, batch_matmul(k, F[:, None], basis[None]), Finv[:, None])  # (N, D, n, n)
        vecs = _matrices_to_fp(k, conj)  # (N, D, D): [g, u] = coords of g.B_u
        action = np.swapaxes(vecs, 1, 2)
        super().__init__(f.group, k.p, action, k.m, name=f"Ad({f.name or 'f'})", validate=False)

    def to_vectors(self, mats) -> np.ndarray:
        return _matrices_to_fp(self.field, mats)

    def from_vectors(self, vecs) -> np.ndarray:
        return _fp_to_matrix(self.field, self.rep.n, np.asarray(vecs))


# ---------------------------------------------------------------------------
# cocycles
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TwoCocycle:
    """A normalized 2-cochain G x G -> module, stored as an (N, N, D) array over F_p."""

    module: FiniteModule
    values: np.ndarray

    @property
    def group(self) -> FiniteGroup:
        return self.module.group

    def is_normalized(self) -> bool:
        e = self.group.identity
        return not (np.any(self.values[e]) or np.any(self.values[:, e]))

    def identity_defect(self, g: int) -> np.ndarray:
        """g.c(h,l) - c(gh,l) + c(g,hl) - c(g,h) for all (h, l), shape (N, N, D)."""
        G, c, p = self.group, self.values, self.module.p
        A = self.module.action[g]
        acted = matmul_mod(c.reshape(-1, c.shape[-1]), A.T, p).reshape(c.shape)
        return (acted - c[G.table[g]] + c[g][G.table] - c[g][:, None, :]) % p

    def verify(self, full: bool | None = None, samples: int = 4096) -> bool:
        """Check the cocycle identity on all triples (|G| <= 24 by default) or on random ones."""
        G = self.group
        if not self.is_normalized():
            return False
        full = G.order <= FULL_COCYCLE_CHECK_ORDER if full is None else full
        if full:
            return all(not np.any(self.identity_defect(g)) for g in range(G.order))
        rng = np.random.default_rng(0)
        g, h, l = rng.integers(0, G.order, size=(3, samples))
        c, A, T, p = self.values, self.module.action, G.table, self.module.p
        acted = np.einsum("sij,sj->si", A[g], c[h, l]) % p
        defect = (acted - c[T[g, h], l] + c[g, T[h, l]] - c[g, h]) % p
        return not np.any(defect)

    def hash(self) -> str:
        h = hashlib.sha256()
        h.update(np.asarray(self.values.shape, dtype=np.int64).tobytes())
        h.update(np.ascontiguousarray(self.values, dtype=np.int64).tobytes())
        return h.hexdigest()

    def restrict(self, H: FiniteGroup) -> "TwoCocycle":
        emb = np.array(H.embedding)
        return TwoCocycle(self.module.restrict(H), self.values[emb][:, emb])

    def __sub__(self, other: "TwoCocycle") -> "TwoCocycle":
        return TwoCocycle(self.module, (self.values - other.values) % self.module.p)

    def to_json(self, full: bool = False) -> dict:
        out = {"group": self.group.name, "module": self.module.name, "dim": self.module.dim, "hash": self.hash()}
        if full:
            out["values"] = self.values.tolist()
        return out


def witt_inverse(W: WittRing, X: np.ndarray, red_inv: np.ndarray) -> np.ndarray:
    """Inverse of stacked matrices X over W_2(k), given the inverses of their reductions.

    With Y0 the Teichmuller lift of the reduced inverse, X Y0 = I + pE and
    X^-1 = Y0 (2I - X Y0).
    """
    n = X.shape[-1]
    Y0 = W.teichmuller(red_inv)
    two = W.from_int(2)
    eye2 = np.where(batch_identity(W, n) == W.one, two, W.zero)
    return batch_matmul(W, Y0, W.sub(eye2, batch_matmul(W, X, Y0)))


def obstruction_class(f: Representation, section: np.ndarray | None = None) -> TwoCocycle:
    """The obstruction cocycle of f computed from a set-theoretic lift.

    ``section`` (shape (N, n, n) over W_2(k), reducing to f and equal to I at
    the identity) defaults to the entrywise Teichmuller lift.
    """
    k = f.ring
    if not isinstance(k, GF):
        raise ValueError("obstruction classes need a representation over a finite field")
    G = f.group
    if G.order > MAX_COCYCLE_ORDER:
        raise GroupTooLarge(f"|G| = {G.order} exceeds {MAX_COCYCLE_ORDER}")
    W = witt_ring(k)
    module = AdjointModule(f)
    T = W.teichmuller(f.images) if section is None else np.asarray(section, dtype=np.int64)
    if not np.array_equal(W.reduce(T), f.images):
        raise ValueError("section does not reduce to the representation")
    Tinv = witt_inverse(W, T, f.inverse_images)
    eye = batch_identity(W, f.n)

    def rows(g: int) -> np.ndarray:
        prod = batch_matmul(W, T[g][None], T)  # g~(g) g~(h), all h
        u = batch_matmul(W, prod, Tinv[G.table[g]])  # = I + p c(g, h)
        return module.to_vectors(W.p_digit(W.sub(u, eye)))

    values = np.stack(parallel_map(rows, range(G.order)))
    return TwoCocycle(module, values)


# ---------------------------------------------------------------------------
# coboundary systems
# ---------------------------------------------------------------------------


def _column_block(G: FiniteGroup, h: int) -> int | None:
    if h == G.identity:
        return None
    return h if h < G.identity else h - 1


def coboundary_blocks(module: FiniteModule, pairs_for_g, g: int) -> np.ndarray:
    """Rows of d^1 for the pairs (g, h), h in ``pairs_for_g``; columns are b(x), x != e."""
    G, D, p = module.group, module.dim, module.p
    ncols = (G.order - 1) * D
    eye = np.eye(D, dtype=np.int64)
    out = np.zeros((len(pairs_for_g) * D, ncols), dtype=np.int64)
    for r, h in enumerate(pairs_for_g):
        rows = slice(r * D, (r + 1) * D)
        for x, coeff in ((h, module.action[g]), (G.mul(g, h), -eye), (g, eye)):
            col = _column_block(G, x)
            if col is not None:
                out[rows, col * D : (col + 1) * D] += coeff
    return out % p


def _system_row_blocks(cocycle: TwoCocycle, mode: str):
    G = cocycle.group
    if mode == "generators":
        hs = sorted(set(G.generators))
    elif mode == "full":
        hs = [h for h in range(G.order) if h != G.identity]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for g in range(G.order):
        A = coboundary_blocks(cocycle.module, hs, g)
        rhs = cocycle.values[g, hs].reshape(-1, 1)
        yield np.concatenate([A, rhs], axis=1)


@dataclass
class ObstructionCertificate:
    verdict: Verdict
    rep: Representation
    cocycle: TwoCocycle
    rank_data: dict
    lift: Representation | None = None
    cochain: np.ndarray | None = None
    exhaustive: dict | None = None
    kernel_identification: str = "p*[a] <-> a (Teichmuller digit)"
    dual_witness: dict | None = None
    notes: list[str] = dc_field(default_factory=list)

    def verify(self) -> bool:
        """Re-check the certificate from its stored data."""
        if self.verdict is Verdict.LIFTS:
            return lift_is_valid(self.rep, self.lift)
        if self.dual_witness is not None:
            return check_dual_witness(self.cocycle, self.dual_witness)
        again = solve_coboundary(self.cocycle, self.rank_data["mode"])
        return again[0] is None and again[1] == self.rank_data

    def to_json(self, emit_cocycle: bool = False) -> dict:
        return {
            "verdict": self.verdict.value,
            "group": self.rep.group.name,
            "rep": self.rep.to_json(),
            "cocycle_hash": self.cocycle.hash(),
            "lift": None if self.lift is None else [M.to_json() for M in self.lift.generator_images],
            "cochain": None if self.cochain is None else self.cochain.tolist(),
            "rank_data": self.rank_data,
            "exhaustive": self.exhaustive,
            "kernel_identification": self.kernel_identification,
            "dual_witness": self.dual_witness,
            "cocycle": self.cocycle.to_json(full=True) if emit_cocycle else None,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ObstructionCertificate":
        """Rebuild a certificate; the cocycle is recomputed from the representation and must match its hash."""
        f = Representation.from_json(obj["rep"])
        c = obstruction_class(f)
        if c.hash() != obj["cocycle_hash"]:
            raise ValueError("stored cocycle hash does not match the representation")
        lift = None
        if obj.get("lift") is not None:
            W = witt_ring(f.ring)
            lift = Representation(f.group, W, [RingMatrix.from_json(m) for m in obj["lift"]], check=False)
        cochain = None if obj.get("cochain") is None else np.asarray(obj["cochain"], dtype=np.int64)
        return cls(
            Verdict(obj["verdict"]),
            f,
            c,
            obj["rank_data"],
            lift=lift,
            cochain=cochain,
            exhaustive=obj.get("exhaustive"),
            dual_witness=obj.get("dual_witness"),
        )


def solve_coboundary(cocycle: TwoCocycle, mode: str = "generators") -> tuple[np.ndarray | None, dict]:
    """Solve d b = c over F_p. Returns (b as an (N, D) array or None, rank data).

    ``mode="generators"`` keeps only the equations at pairs (g, s) with s a
    generator; for a cocycle these already force d b = c everywhere.
    ``mode="full"`` uses every pair.
    """
    G, D, p = cocycle.group, cocycle.module.dim, cocycle.module.p
    ncols = (G.order - 1) * D
    basis = EchelonBasis(ncols + 1, p)
    for block in _system_row_blocks(cocycle, mode):
        for start in range(0, block.shape[0], ROW_BLOCK):
            basis.add_rows(block[start : start + ROW_BLOCK])
    x = particular_solution(basis)
    consistent = x is not None
    rank_aug = basis.rank
    rank_data = {
        "mode": mode,
        "p": p,
        "rows": basis.rows_seen,
        "cols": ncols,
        "rank_coefficients": rank_aug - (0 if consistent else 1),
        "rank_augmented": rank_aug,
        "consistent": consistent,
    }
    if not consistent:
        return None, rank_data
    b = np.zeros((G.order, D), dtype=np.int64)
    for h in range(G.order):
        col = _column_block(G, h)
        if col is not None:
            b[h] = x[col * D : (col + 1) * D]
    return b, rank_data


def _dense_system(cocycle: TwoCocycle) -> np.ndarray:
    return np.concatenate(list(_system_row_blocks(cocycle, "generators")), axis=0)


def dual_witness(cocycle: TwoCocycle) -> dict | None:
    """A row combination y with y A = 0 and y c = 1 for the generator system [A | c].

    Such a y proves d b = c has no solution and is checked by one
    matrix-vector product.  None when the system is consistent.
    """
    M = _dense_system(cocycle)
    p = cocycle.module.p
    e = np.zeros(M.shape[1], dtype=np.int64)
    e[-1] = 1
    y = solve_mod_p(M.T, e, p)
    if y is None:
        return None
    nz = np.nonzero(y)[0]
    return {"p": p, "rows": M.shape[0], "support": nz.tolist(), "values": y[nz].tolist()}


def check_dual_witness(cocycle: TwoCocycle, witness: dict) -> bool:
    M = _dense_system(cocycle)
    p = cocycle.module.p
    if witness["p"] != p or witness["rows"] != M.shape[0]:
        return False
    idx = np.asarray(witness["support"], dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= M.shape[0]):
        return False
    vals = np.asarray(witness["values"], dtype=np.int64) % p
    combo = (vals @ (M[idx] % p)) % p if idx.size else np.zeros(M.shape[1], dtype=np.int64)
    return bool(not combo[:-1].any() and combo[-1] == 1)


def coboundary(module: FiniteModule, b: np.ndarray) -> np.ndarray:
    """(d b)(g, h) for all pairs, shape (N, N, D)."""
    G, p = module.group, module.p
    acted = np.einsum("gij,hj->ghi", module.action, b) % p
    return (acted - b[G.table] + b[:, None, :]) % p


def lift_from_cochain(f: Representation, b: np.ndarray, section: np.ndarray | None = None) -> Representation:
    """The lift s -> (I - p b(s)) g~(s) over W_2(k) (generator images only)."""
    k = f.ring
    W = witt_ring(k)
    module_shape = _fp_to_matrix(k, f.n, b)  # (N, n, n) over k
    T = W.teichmuller(f.images) if section is None else section
    eye = batch_identity(W, f.n)
    gens = []
    for s in f.group.generators:
        corr = W.sub(eye, W.p_times_teichmuller(module_shape[s]))
        gens.append(RingMatrix(W, batch_matmul(W, corr, T[s])))
    return Representation(f.group, W, gens, name=f"lift({f.name or 'f'})", check=False)


def lift_is_valid(f: Representation, lift: Representation | None) -> bool:
    """Full check: lift is a homomorphism over W_2(k) and reduces to f."""
    if lift is None or not isinstance(lift.ring, WittRing) or lift.ring.k is not f.ring:
        return False
    try:
        lift.check_relators()
        lift.verify_homomorphism()
    except (RelatorViolation, NotAHomomorphism):
        return False
    W = lift.ring
    return all(np.array_equal(W.reduce(L.entries), M.entries) for L, M in zip(lift.generator_images, f.generator_images))


def is_coboundary(c: TwoCocycle, mode: str = "generators") -> ObstructionCertificate:
    """Decide whether an obstruction cocycle is a coboundary; on success build and check the lift."""
    module = c.module
    if not isinstance(module, AdjointModule):
        raise ValueError("certificates need the adjoint module of a representation")
    f = module.rep
    b, rank_data = solve_coboundary(c, mode)
    if b is None:
        return ObstructionCertificate(Verdict.OBSTRUCTED, f, c, rank_data, dual_witness=dual_witness(c))
    lift = lift_from_cochain(f, b)
    if not lift_is_valid(f, lift):
        raise AssertionError("solved cochain did not produce a homomorphism")
    return ObstructionCertificate(Verdict.LIFTS, f, c, rank_data, lift=lift, cochain=b)


def decide_lift(f: Representation, mode: str = "generators") -> ObstructionCertificate:
    return is_coboundary(obstruction_class(f), mode)


def coboundary_difference(c1: TwoCocycle, c2: TwoCocycle) -> np.ndarray | None:
    """A 1-cochain b with d b = c1 - c2, or None when the classes differ."""
    b, _ = solve_coboundary(c1 - c2, "generators")
    if b is not None and np.array_equal(coboundary(c1.module, b), (c1 - c2).values):
        return b
    return None


def random_section(f: Representation, rng: np.random.Generator) -> np.ndarray:
    """A random set-theoretic lift of f to W_2(k), normalized at the identity."""
    k = f.ring
    W = witt_ring(k)
    noise = rng.integers(0, k.q, size=f.images.shape)
    T = W.pack(f.images, noise)
    T[f.group.identity] = batch_identity(W, f.n)
    return T


# ---------------------------------------------------------------------------
# exhaustive lift search
# ---------------------------------------------------------------------------


def _all_matrices(k: GF, n: int) -> np.ndarray:
    count = k.q ** (n * n)
    idx = np.arange(count, dtype=np.int64)
    digits = np.stack([(idx // k.q**i) % k.q for i in range(n * n)], axis=-1)
    return digits.reshape(count, n, n)


def _eval_word(W: WittRing, word, mats, invs, n: int) -> np.ndarray:
    batch = next(iter(mats.values())).shape[:-2] if mats else ()
    acc = batch_identity(W, n, batch)
    for pos, e in word:
        M = mats[pos] if e > 0 else invs[pos]
        for _ in range(abs(e)):
            acc = batch_matmul(W, acc, M)
    return acc


def exhaustive_lift_search(f: Representation, budget: int = 1 << 20, chunk: int = 1 << 14) -> dict:
    """Enumerate every generator lift g~(s) + p M_s and count the tuples satisfying all relators.

    Needs a complete presentation.  Relators in a single generator are used to
    filter that generator's candidates first.
    """
    G = f.group
    if not G.presentation_complete or not G.relators:
        raise ValueError(f"{G.name} has no complete presentation to search against")
    k = f.ring
    W = witt_ring(k)
    n = f.n
    allM = _all_matrices(k, n)
    per_gen = allM.shape[0]
    total = per_gen ** len(G.generators)
    if total > budget:
        raise SearchBudgetExceeded(f"{total} candidate tuples exceed the budget {budget}")
    eye = batch_identity(W, n)
    cands, invs = [], []
    for pos, M in enumerate(f.generator_images):
        X = W.add(W.teichmuller(M.entries)[None], W.p_times_teichmuller(allM))
        red_inv = inverse_entries(k, M.entries)
        Xi = witt_inverse(W, X, red_inv[None])
        keep = np.ones(per_gen, dtype=bool)
        for w in G.relators:
            if {g for g, _ in w} == {pos}:
                val = _eval_word(W, w, {pos: X}, {pos: Xi}, n)
                keep &= np.all(val == eye, axis=(-1, -2))
        cands.append(X[keep])
        invs.append(Xi[keep])
    survivors = [len(c) for c in cands]
    multi = [w for w in G.relators if len({g for g, _ in w}) > 1]
    found = 0
    example = None
    sizes = survivors
    combos = int(np.prod(sizes)) if sizes else 0
    for start in range(0, combos, chunk):
        idx = np.arange(start, min(combos, start + chunk))
        sel = np.unravel_index(idx, sizes)
        mats = {i: cands[i][sel[i]] for i in range(len(sizes))}
        ims = {i: invs[i][sel[i]] for i in range(len(sizes))}
        ok = np.ones(len(idx), dtype=bool)
        for w in multi:
            val = _eval_word(W, w, mats, ims, n)
            ok &= np.all(val == eye, axis=(-1, -2))
        hits = np.nonzero(ok)[0]
        found += len(hits)
        if example is None and len(hits):
            example = [mats[i][hits[0]].tolist() for i in range(len(sizes))]
    return {
        "ring": W.tag,
        "candidates_per_generator": per_gen,
        "total_candidates": total,
        "single_generator_survivors": survivors,
        "relators": [format_word(w, G.generator_names) for w in G.relators],
        "lifts_found": found,
        "example_lift": example,
    }


# ---------------------------------------------------------------------------
# H^1
# ---------------------------------------------------------------------------


def _selector(S: int, D: int, pos: int) -> np.ndarray:
    E = np.zeros((D, S * D), dtype=np.int64)
    E[:, pos * D : (pos + 1) * D] = np.eye(D, dtype=np.int64)
    return E


def _principal_rank(module: FiniteModule, elements) -> int:
    D, p = module.dim, module.p
    eye = np.eye(D, dtype=np.int64)
    stacked = np.concatenate([(module.action[g] - eye) % p for g in elements] or [np.zeros((0, D), dtype=np.int64)])
    return rank_mod_p(stacked, p)


def _z1_derivations(module: FiniteModule) -> int:
    """dim Z^1 from derivation values on generators, extended along a spanning tree."""
    G, D, p = module.group, module.dim, module.p
    S = len(G.generators)
    A = module.action
    L = np.zeros((G.order, D, S * D), dtype=np.int64)
    for parent, pos, child in G.spanning_tree:
        L[child] = (L[parent] + matmul_mod(A[parent], _selector(S, D, pos), p)) % p
    basis = EchelonBasis(S * D, p)
    for g in range(G.order):
        for pos, s in enumerate(G.generators):
            row = (L[G.mul(g, s)] - L[g] - matmul_mod(A[g], _selector(S, D, pos), p)) % p
            basis.add_rows(row)
    return S * D - basis.rank


def fox_rows(module: FiniteModule, word) -> np.ndarray:
    """The linear map (b(s))_s -> b(word) of a derivation, as a (D, S*D) matrix."""
    G, D, p = module.group, module.dim, module.p
    S = len(G.generators)
    A = module.action
    acc = np.zeros((D, S * D), dtype=np.int64)
    prefix = G.identity
    for pos, e in word:
        s = G.generators[pos]
        for _ in range(abs(e)):
            if e > 0:
                acc = (acc + matmul_mod(A[prefix], _selector(S, D, pos), p)) % p
                prefix = G.mul(prefix, s)
            else:
                prefix = G.mul(prefix, G.inv(s))
                acc = (acc - matmul_mod(A[prefix], _selector(S, D, pos), p)) % p
    return acc


def _z1_relators(module: FiniteModule) -> int:
    G, D, p = module.group, module.dim, module.p
    if not G.presentation_complete:
        raise ValueError(f"{G.name} has no complete presentation")
    S = len(G.generators)
    rows = [fox_rows(module, w) for w in G.relators]
    M = np.concatenate(rows) if rows else np.zeros((0, S * D), dtype=np.int64)
    return S * D - rank_mod_p(M, p)


def _h1_bar(module: FiniteModule) -> int:
    G, D, p = module.group, module.dim, module.p
    ncols = (G.order - 1) * D
    basis = EchelonBasis(ncols, p)
    hs = [h for h in range(G.order) if h != G.identity]
    for g in hs:
        block = coboundary_blocks(module, hs, g)
        for start in range(0, block.shape[0], ROW_BLOCK):
            basis.add_rows(block[start : start + ROW_BLOCK])
    z1 = ncols - basis.rank
    b1 = _principal_rank(module, hs)
    return z1 - b1


def h1_dimension(G: FiniteGroup, module: FiniteModule, method: str = "derivations") -> int:
    """dim_k H^1(G, module).

    ``derivations`` uses the multiplication table, ``relators`` Fox calculus on
    a complete presentation, and ``bar`` the normalized bar complex.
    """
    if module.group is not G:
        raise ValueError("module belongs to a different group")
    if method == "bar":
        dim_fp = _h1_bar(module)
    else:
        z1 = _z1_derivations(module) if method == "derivations" else _z1_relators(module)
        dim_fp = z1 - _principal_rank(module, G.generators)
    if dim_fp % module.degree:
        raise AssertionError("F_p-dimension is not a multiple of [k:F_p]")
    return dim_fp // module.degree


# ---------------------------------------------------------------------------
# rigidity
# ---------------------------------------------------------------------------


@dataclass
class RigidityVerdict:
    strongly_rigid: bool
    obstruction: ObstructionCertificate
    h1: int

    @property
    def label(self) -> str:
        return "STRONGLY_RIGID" if self.strongly_rigid else "NOT_STRONGLY_RIGID"

    def to_json(self) -> dict:
        return {
            "verdict": self.label,
            "obstructed": self.obstruction.verdict is Verdict.OBSTRUCTED,
            "h1_adjoint": self.h1,
            "rank_data": self.obstruction.rank_data,
        }


def is_strongly_rigid(f: Representation) -> RigidityVerdict:
    cert = decide_lift(f)
    h1 = h1_dimension(f.group, cert.cocycle.module)
    return RigidityVerdict(cert.verdict is Verdict.OBSTRUCTED and h1 == 0, cert, h1)


# ---------------------------------------------------------------------------
# the Z/4 x Z/2 lift over W_2(F_4)[t]/(t^2 - 2, 2t)
# ---------------------------------------------------------------------------


def nonrigid_lift_check() -> dict:
    """Lift the two_powers(2, 1) representation of Z/4 x Z/2 over the 64-element ring.

    X is the companion matrix of u^4 - 1 minus I, Y = t X + [w] X^2.  Checks
    (I+X)^4 = I, X mod the radical is a nilpotent Jordan block, (I+Y)^2 = I,
    Y reduces to w x^2 and I+X, I+Y commute.
    """
    from .algebra.matrix import matrix_order
    from .algebra.rings import quotient_ring_64

    R = quotient_ring_64()
    W = R.witt
    k = R.residue_field
    omega = k.generator()
    companion = [[0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]
    eye = RingMatrix.identity(R, 4)
    C = RingMatrix.from_ints(R, companion)
    X = C - eye
    t_eye = RingMatrix(R, np.where(eye.entries == 1, R.t, 0))
    w = int(W.teichmuller(omega))
    Y = t_eye @ X + (X @ X).scale(w)
    IX, IY = eye + X, eye + Y
    x_bar = RingMatrix(k, R.reduce(X.entries))
    x2 = x_bar @ x_bar
    checks = {
        "(I+X)^4 = I": (IX**4).is_identity(),
        "order(I+X) = 4": matrix_order(IX, 16) == 4,
        "X^4 = 2 X^2": X**4 == (X @ X).scale(R.from_int(2)),
        # nilpotency index 4 in dimension 4 means a single Jordan block
        "X mod radical is a single nilpotent block": not np.any((x_bar**4).entries) and bool(np.any((x_bar**3).entries)),
        "Y mod radical = w x^2": bool(np.array_equal(R.reduce(Y.entries), x2.scale(omega).entries)),
        "(I+Y)^2 = I": (IY**2).is_identity(),
        "[I+X, I+Y] = I": (IX @ IY @ IX.inverse() @ IY.inverse()).is_identity(),
    }
    return {
        "ok": all(checks.values()),
        "checks": checks,
        "ring": R.tag,
        "X": X.to_json(),
        "Y": Y.to_json(),
        "(I+X)^2": (IX**2).to_json(),
        "(I+Y)^2": (IY**2).to_json(),
    }
