"""Explicit lifts and non-liftability witnesses, and the abelian verdict table."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Callable

import numpy as np

from .algebra.fields import field, is_prime
from .algebra.matrix import NoOrderWithinBound, NotInvertible, RingMatrix, batch_power, matrix_order, reduce_mod_p
from .algebra.rings import zmod
from .cohomology import FiniteModule, ObstructionCertificate, Verdict, decide_lift
from .groups import FiniteGroup, abelian_invariants, named_group
from .parallel import parallel_map
from .reps import Representation, induce_rep, jordan_block, jordan_block_rep, two_powers_rep

EXHAUSTIVE_STAMP_LIMIT = 10**6


class InvalidParameters(ValueError):
    pass


class RowVerdict(str, enum.Enum):
    LIFTABLE_WITNESSED = "LIFTABLE_WITNESSED"
    NOT_LIFTABLE_WITNESSED = "NOT_LIFTABLE_WITNESSED"
    OPEN = "OPEN"


# ---------------------------------------------------------------------------
# lift witnesses
# ---------------------------------------------------------------------------


def _is_single_nilpotent_block(N: RingMatrix) -> bool:
    """N nilpotent with nilpotency index equal to its size (one Jordan block)."""
    m = N.n
    return not np.any((N**m).entries) and (m == 1 or bool(np.any((N ** (m - 1)).entries)))


def _order_or_none(X: RingMatrix, bound: int) -> int | None:
    try:
        return matrix_order(X, bound)
    except (NotInvertible, NoOrderWithinBound):
        return None


def _jordan_checks(params: dict, mats: dict[str, RingMatrix]) -> list[dict]:
    """Checks shared by every lift witness: order over the lift ring and the reduction."""
    X = mats["lift"]
    order = params["order"]
    size = X.n
    red = reduce_mod_p(X)
    J = jordan_block(red.ring, size)
    observed = _order_or_none(X, 4 * order)
    return [
        {"check": f"order of lift = {order}", "observed": observed, "ok": observed == order},
        {"check": f"reduction is the Jordan block J_{size}", "observed": red.tolist(), "ok": red == J},
    ]


def _power_of_two_checks(params: dict, mats: dict[str, RingMatrix]) -> list[dict]:
    C = mats["companion"]
    order = params["order"]
    redC = reduce_mod_p(C)
    eye = RingMatrix.identity(redC.ring, C.n)
    observed = _order_or_none(C, 4 * order)
    checks = [
        {"check": f"order of companion = {order}", "observed": observed, "ok": observed == order},
        {"check": "companion mod 2 is a single Jordan block", "observed": None, "ok": _is_single_nilpotent_block(redC - eye)},
    ]
    return checks + _jordan_checks(params, mats)


CHECKERS: dict[str, Callable[[dict, dict], list[dict]]] = {
    "cyclic-p-groups": _jordan_checks,
    "power-of-2": _power_of_two_checks,
}


@dataclass
class LiftWitness:
    claim: str
    params: dict
    matrices: dict[str, RingMatrix]
    transcript: list[dict]

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.transcript)

    def recheck(self) -> bool:
        """Recompute every check from the stored matrices alone."""
        fresh = CHECKERS[self.claim](self.params, self.matrices)
        return all(c["ok"] for c in fresh) and [c["check"] for c in fresh] == [c["check"] for c in self.transcript]

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "params": self.params,
            "matrices": {k: v.to_json() for k, v in self.matrices.items()},
            "transcript": self.transcript,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LiftWitness":
        mats = {k: RingMatrix.from_json(v) for k, v in obj["matrices"].items()}
        return cls(obj["claim"], obj["params"], mats, obj["transcript"])


def _make_witness(claim: str, params: dict, mats: dict[str, RingMatrix]) -> LiftWitness:
    return LiftWitness(claim, params, mats, CHECKERS[claim](params, mats))


def companion_matrix(ring, coeffs) -> RingMatrix:
    """Companion matrix of the monic polynomial with low-to-high ``coeffs`` (leading 1 omitted).

    Column convention: e_i -> e_(i+1) and e_(m-1) -> -sum c_j e_j.
    """
    m = len(coeffs)
    M = np.zeros((m, m), dtype=np.int64)
    for i in range(m - 1):
        M[i + 1, i] = 1
    for j, c in enumerate(coeffs):
        M[j, m - 1] = -c
    return RingMatrix.from_ints(ring, M.tolist())


def conjugate_to_jordan(X: RingMatrix) -> RingMatrix:
    """Conjugate X so that its reduction is exactly the unipotent Jordan block.

    Requires X mod p to be a single unipotent block.  With N = X - I and v a
    standard vector that is cyclic mod p, P = [N^(m-1) v, ..., N v, v] is
    invertible and P^-1 X P reduces to I + (superdiagonal ones).
    """
    ring = X.ring
    m = X.n
    N = X - RingMatrix.identity(ring, m)
    top = reduce_mod_p(N) ** (m - 1)
    j = next(j for j in range(m) if m == 1 or np.any(top.entries[:, j]))
    v = np.full(m, ring.zero, dtype=np.int64)
    v[j] = ring.one
    vecs = [v]
    for _ in range(m - 1):
        vecs.append(_matvec(ring, N.entries, vecs[-1]))
    P = RingMatrix(ring, np.stack(vecs[::-1], axis=1))
    return P.inverse() @ X @ P


def _matvec(ring, A, v):
    out = np.full(A.shape[0], ring.zero, dtype=np.int64)
    for i in range(A.shape[1]):
        out = ring.add(out, ring.mul(A[:, i], v[i]))
    return out


def cyclic_p_witnesses() -> dict:
    """Order-2 and order-3 lifts of unipotent Jordan blocks over Z/4 and Z/9."""
    Z4, Z9 = zmod(2, 2), zmod(3, 2)
    printed = RingMatrix.from_ints(Z9, [[0, 1], [-1, 1]])
    order2 = RingMatrix.from_ints(Z4, [[-1, 1], [0, 1]])
    comp2 = companion_matrix(Z9, [1, 1])  # X^2 + X + 1
    comp3 = companion_matrix(Z9, [-1, 0, 0])  # X^3 - 1
    out = {
        "p=2": _make_witness("cyclic-p-groups", {"p": 2, "order": 2, "size": 2}, {"lift": order2}),
        "p=3,size=2": _make_witness(
            "cyclic-p-groups", {"p": 3, "order": 3, "size": 2, "source": "companion of X^2+X+1"},
            {"lift": conjugate_to_jordan(comp2), "companion": comp2},
        ),
        "p=3,size=3": _make_witness(
            "cyclic-p-groups", {"p": 3, "order": 3, "size": 3, "source": "companion of X^3-1"},
            {"lift": conjugate_to_jordan(comp3), "companion": comp3},
        ),
    }
    cube = printed**3
    out["printed (0 1; -1 1)"] = {
        "matrix": printed.to_json(),
        "cube": cube.to_json(),
        "cube_is_identity": cube.is_identity(),
        "cube_is_minus_identity": cube == RingMatrix.identity(Z9, 2).scale(Z9.from_int(-1)),
        "order": matrix_order(printed, 20),
    }
    return out


def power_of_two_factors(n: int, m: int) -> list[tuple[str, tuple[int, ...]]]:
    """Greedy choice of factors of u^(2^n) - 1 with total degree m, largest degree first.

    Factors are u - 1, u + 1, u^2 + 1, ..., u^(2^(n-1)) + 1; among the two
    linear factors u - 1 is taken first.  Polynomials are low-to-high integer
    coefficient tuples including the leading 1.
    """
    if n < 1 or not (2 ** (n - 1) < m <= 2**n):
        raise InvalidParameters(f"need 2^(n-1) < m <= 2^n, got n={n}, m={m}")
    factors = []
    for e in range(n - 1, 0, -1):
        d = 2**e
        factors.append((f"u^{d}+1", tuple([1] + [0] * (d - 1) + [1])))
    factors.append(("u-1", (-1, 1)))
    factors.append(("u+1", (1, 1)))
    chosen, left = [], m
    for name, poly in factors:
        if len(poly) - 1 <= left:
            chosen.append((name, poly))
            left -= len(poly) - 1
    assert left == 0, "degree sums always reach m in range"
    return chosen


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def lift_power_of_two(n: int, m: int) -> LiftWitness:
    """A lift over Z/4 of the size-m unipotent Jordan block of order 2^n."""
    chosen = power_of_two_factors(n, m)
    P = (1,)
    for _, poly in chosen:
        P = _poly_mul(P, poly)
    Z4 = zmod(2, 2)
    C = companion_matrix(Z4, P[:-1])
    params = {"n": n, "m": m, "order": 2**n, "factors": [name for name, _ in chosen], "P": list(P)}
    return _make_witness("power-of-2", params, {"companion": C, "lift": conjugate_to_jordan(C)})


# ---------------------------------------------------------------------------
# odd-order Jordan blocks
# ---------------------------------------------------------------------------


def odd_power_closed_form(p: int, n: int, N: np.ndarray) -> np.ndarray:
    """I + p * sum_{i=1}^{p-1} (C(p^n, i p^(n-1)) / p) N^(i p^(n-1)) over Z/p^2."""
    q = p * p
    m = N.shape[-1]
    out = np.eye(m, dtype=np.int64)
    R = zmod(p, 2)
    for i in range(1, p):
        e = i * p ** (n - 1)
        c = comb(p**n, e)
        assert c % p == 0
        out = (out + p * (c // p) * batch_power(R, N, e)) % q
    return out


def odd_jordan_stamp(p: int, n: int, limit: int = EXHAUSTIVE_STAMP_LIMIT) -> dict | None:
    """Enumerate all X = I + N + pM over Z/p^2 and count those with X^(p^n) = I."""
    m = p ** (n - 1) + 1
    count = p ** (m * m)
    if count > limit:
        return None
    R = zmod(p, 2)
    base = (np.eye(m, dtype=np.int64) + np.eye(m, k=1, dtype=np.int64))
    idx = np.arange(count)
    digits = np.stack([(idx // p**i) % p for i in range(m * m)], axis=-1).reshape(count, m, m)
    X = (base[None] + p * digits) % (p * p)
    powers = batch_power(R, X, p**n)
    hits = int(np.all(powers == np.eye(m, dtype=np.int64), axis=(-1, -2)).sum())
    return {"ring": R.tag, "size": m, "candidates": count, "solutions_of_X^(p^n)=I": hits}


@dataclass
class VerdictRow:
    group: str
    p: int
    verdict: RowVerdict
    reason: str
    certificate: ObstructionCertificate | None = None
    witnesses: list[LiftWitness] = dc_field(default_factory=list)
    stamp: dict | None = None

    def recheck(self) -> bool:
        if self.verdict is RowVerdict.NOT_LIFTABLE_WITNESSED:
            return (
                self.certificate is not None
                and self.certificate.verdict is Verdict.OBSTRUCTED
                and self.certificate.verify()
                and (self.stamp is None or self.stamp.get("solutions_of_X^(p^n)=I", 0) == 0)
            )
        if self.verdict is RowVerdict.LIFTABLE_WITNESSED:
            return bool(self.witnesses) and all(w.recheck() for w in self.witnesses)
        return True

    @classmethod
    def from_json(cls, obj: dict) -> "VerdictRow":
        cert = obj.get("certificate")
        return cls(
            obj["group"],
            obj["p"],
            RowVerdict(obj["verdict"]),
            obj["reason"],
            None if cert is None else ObstructionCertificate.from_json(cert),
            [LiftWitness.from_json(w) for w in obj.get("witnesses", [])],
            obj.get("stamp"),
        )

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "p": self.p,
            "verdict": self.verdict.value,
            "reason": self.reason,
            "certificate": None if self.certificate is None else self.certificate.to_json(),
            "witnesses": [w.to_json() for w in self.witnesses],
            "stamp": self.stamp,
        }


def nonlift_odd_jordan(p: int, n: int) -> VerdictRow:
    if not is_prime(p) or p < 3 or n < 1 or (p == 3 and n == 1):
        raise InvalidParameters("need p >= 5, or p = 3 and n >= 2 (Z/3 lifts)")
    f = jordan_block_rep(p, n)
    cert = decide_lift(f)
    stamp = odd_jordan_stamp(p, n)
    verdict = RowVerdict.NOT_LIFTABLE_WITNESSED if cert.verdict is Verdict.OBSTRUCTED else RowVerdict.OPEN
    if stamp is not None and stamp["solutions_of_X^(p^n)=I"]:
        verdict = RowVerdict.OPEN
    cert.exhaustive = stamp
    return VerdictRow(f"Z/{p**n}", p, verdict, f"Jordan block of size {f.n}", cert, stamp=stamp)


# ---------------------------------------------------------------------------
# abelian verdict table
# ---------------------------------------------------------------------------


def _p_part(d: int, p: int) -> int:
    e = 0
    while d % p == 0:
        d //= p
        e += 1
    return e


def sylow_exponents(invariants, p: int) -> list[int]:
    return [_p_part(d, p) for d in invariants]


def predicted_liftable(invariants, p: int) -> bool:
    """Whether the abelian group with these invariant factors is L_p by the classification."""
    exps = [e for e in sylow_exponents(invariants, p) if e]
    if not exps:
        return True
    if len(exps) > 1:
        return False
    return p == 2 or (p == 3 and exps[0] == 1)


def p_times_p_rep(G: FiniteGroup, p: int, positions=(0, 1)) -> Representation:
    """Generators at ``positions`` -> I + e and I + a e over F_(p^2), a outside F_p; others -> I."""
    k = field(p, 2)
    eye = RingMatrix.identity(k, 2)
    e = RingMatrix(k, [[0, 1], [0, 0]])
    gens = [eye] * len(G.generators)
    gens[positions[0]] = eye + e
    gens[positions[1]] = eye + e.scale(k.generator())
    return Representation(G, k, gens, name=f"p_times_p({p})")


def abelian_witness_rep(invariants: tuple[int, ...], p: int) -> Representation:
    """A representation of the group with these invariant factors that should not lift at p.

    Each generator g_i maps to the image of the p-part generator h_i of its
    cyclic factor under a witness for the Sylow p-subgroup.
    """
    G = named_group("x".join(f"Z/{d}" for d in invariants))
    exps = sylow_exponents(invariants, p)
    nz = [i for i, e in enumerate(exps) if e]
    jordan_factors = [i for i in nz if p > 3 or (p == 3 and exps[i] > 1)]
    if len(nz) == 1 or jordan_factors:
        # a cyclic factor whose Jordan block already fails to lift
        i = max(jordan_factors or nz, key=lambda t: exps[t])
        k = field(p)
        size = p ** (exps[i] - 1) + 1
        gens = [RingMatrix.identity(k, size)] * len(G.generators)
        gens[i] = jordan_block(k, size)
        return Representation(G, k, gens, name=f"J{size}@{G.generator_names[i]}")
    if p == 2:
        i, j = sorted(nz, key=lambda t: -exps[t])[:2]
        base = two_powers_rep(exps[i], exps[j])
        gens = [RingMatrix.identity(base.ring, base.n)] * len(G.generators)
        gens[i], gens[j] = base.generator_images
        return Representation(G, base.ring, gens, name=f"two_powers({exps[i]},{exps[j]})")
    return p_times_p_rep(G, p, tuple(nz[:2]))


def _liftable_witnesses(invariants, p: int) -> list[LiftWitness]:
    e = max(sylow_exponents(invariants, p))
    if p == 2:
        out = []
        for n in range(1, e + 1):
            out += [lift_power_of_two(n, m) for m in range(2 ** (n - 1) + 1, 2**n + 1)]
        return out
    cyc = cyclic_p_witnesses()
    return [cyc["p=3,size=2"], cyc["p=3,size=3"]]


def _primes(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if n % p == 0 and is_prime(p)]


def _row(task) -> VerdictRow:
    invariants, p = task
    name = "x".join(f"Z/{d}" for d in invariants)
    if predicted_liftable(invariants, p):
        ws = _liftable_witnesses(invariants, p)
        ok = all(w.ok for w in ws)
        return VerdictRow(
            name,
            p,
            RowVerdict.LIFTABLE_WITNESSED if ok else RowVerdict.OPEN,
            "canonical Jordan witnesses over F_p lift (scope: these witnesses only)",
            witnesses=ws,
        )
    f = abelian_witness_rep(invariants, p)
    cert = decide_lift(f)
    verdict = RowVerdict.NOT_LIFTABLE_WITNESSED if cert.verdict is Verdict.OBSTRUCTED else RowVerdict.OPEN
    return VerdictRow(name, p, verdict, f"witness {f.name}", cert)


def abelian_verdict_table(max_order: int = 16, threads: int | None = None) -> list[VerdictRow]:
    """Verdicts for every abelian group of order <= max_order at every prime dividing it, plus Q8 and D4."""
    tasks = [(inv, p) for n in range(2, max_order + 1) for inv in abelian_invariants(n) for p in _primes(n)]
    rows = parallel_map(_row, tasks, threads)
    if max_order >= 8:
        rows.append(
            VerdictRow("Q8", 2, RowVerdict.OPEN, "every abelian subgroup is cyclic; liftability at 2 is not decided")
        )
        rows.append(dihedral_row())
    rows.sort(key=lambda r: (_order_of(r.group), r.group, r.p))
    return rows


def _order_of(name: str) -> int:
    return named_group(name).order


def dihedral_row() -> VerdictRow:
    """D4 contains Z/2 x Z/2; the induced p-times-p representation is obstructed."""
    D = named_group("D4")
    klein = next(
        H
        for a, b in itertools.combinations(range(1, D.order), 2)
        if len(H := D.closure([a, b])) == 4 and all(D.element_order(x) <= 2 for x in H)
    )
    K = D.subgroup(klein, name="Z/2xZ/2 in D4")
    rho = p_times_p_rep(K, 2)
    f = induce_rep(D, klein, rho)
    cert = decide_lift(f)
    verdict = RowVerdict.NOT_LIFTABLE_WITNESSED if cert.verdict is Verdict.OBSTRUCTED else RowVerdict.OPEN
    return VerdictRow("D4", 2, verdict, "induced from the p-times-p representation of a Klein subgroup", cert)


# ---------------------------------------------------------------------------
# modules with a single Jordan block
# ---------------------------------------------------------------------------


@dataclass
class JordanModule:
    group: FiniteGroup
    generator: int
    block_size: int
    faithful: bool
    module: FiniteModule
    description: str


def permutation_module(G: FiniteGroup, K: list[int], p: int) -> FiniteModule:
    cosets = G.left_cosets(K)
    where = {}
    for i, c in enumerate(cosets):
        for x in c:
            where[x] = i
    r = len(cosets)
    mats = []
    for s in G.generators:
        M = np.zeros((r, r), dtype=np.int64)
        for j, c in enumerate(cosets):
            M[where[G.mul(s, c[0])], j] = 1
        mats.append(M)
    return FiniteModule.from_generators(G, p, mats, name=f"F_{p}[G/K], |K|={len(K)}")


def single_jordan_modules(G: FiniteGroup, p: int) -> list[JordanModule]:
    """Permutation modules F_p[G/K] on which some generator acts as one Jordan block.

    A generator s acts on G/K as a single cycle of length [G:K] when its orbit
    is everything; in characteristic p a p-power cycle is one Jordan block.
    For each generator the largest such index is kept; it equals the order
    of s exactly when s acts faithfully.
    """
    rank = 5 if G.order <= 16 else 3
    subgroups = {tuple(G.closure(S)) for r in range(rank) for S in itertools.combinations(range(G.order), r)}
    out = []
    for pos, s in enumerate(G.generators):
        best = None
        for K in subgroups:
            index = G.order // len(K)
            if index < 2:
                continue
            cosets = G.left_cosets(list(K))
            orbit = {0}
            x = G.identity
            for _ in range(index):
                x = G.mul(s, x)
                orbit.add(next(i for i, c in enumerate(cosets) if x in c))
            if len(orbit) == index and (best is None or index > best[0]):
                best = (index, list(K))
        if best is None:
            continue
        index, K = best
        out.append(
            JordanModule(
                G,
                pos,
                index,
                index == G.element_order(s),
                permutation_module(G, K, p),
                f"{G.name}: {G.generator_names[pos]} cycles the {index} cosets of a subgroup of order {len(K)}",
            )
        )
    return out
