import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wittlift.algebra.fields import field
from wittlift.algebra.linalg import EchelonBasis, nullspace_mod_p, rank_mod_p, rref, solve_mod_p
from wittlift.algebra.matrix import RingMatrix, matrix_order
from wittlift.groups import (
    FiniteGroup,
    GroupError,
    NotASubgroup,
    abelian_invariants,
    cyclic,
    group_catalog,
    named_group,
    parse_word,
    special_linear2,
)
from wittlift.reps import (
    RelatorViolation,
    Representation,
    induce_rep,
    jordan_block,
    jordan_block_rep,
    mackey_summand_check,
    natural_rep,
    trivial_rep,
    two_powers_rep,
)
from wittlift.witnesses import p_times_p_rep


# -- linear algebra over F_p ---------------------------------------------------------


def _image_size(M: np.ndarray, p: int) -> int:
    """Brute-force oracle: |{M x}| over all x, so rank = log_p of it."""
    cols = M.shape[1]
    xs = np.array(list(itertools.product(range(p), repeat=cols)), dtype=np.int64)
    return len({tuple(v) for v in (xs @ M.T) % p})


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 4), st.integers(1, 4), st.data())
def test_rank_matches_brute_force(p, r, c, data):
    entries = data.draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    M = np.array(entries, dtype=np.int64).reshape(r, c)
    assert p ** rank_mod_p(M, p) == _image_size(M, p)
    N = nullspace_mod_p(M, p)
    assert N.shape[0] == c - rank_mod_p(M, p)
    assert not np.any((M @ N.T) % p)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 7]), st.integers(1, 5), st.integers(1, 5), st.data())
def test_solve_consistency(p, r, c, data):
    entries = data.draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    b = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=r, max_size=r)), dtype=np.int64)
    A = np.array(entries, dtype=np.int64).reshape(r, c)
    x = solve_mod_p(A, b, p)
    solvable = rank_mod_p(A, p) == rank_mod_p(np.concatenate([A, b[:, None]], axis=1), p)
    assert (x is not None) == solvable
    if x is not None:
        assert np.array_equal((A @ x) % p, b % p)


def test_echelon_blocks_agree_with_rref():
    rng = np.random.default_rng(3)
    M = rng.integers(0, 5, size=(300, 40))
    M[:, 7] = (2 * M[:, 3] + M[:, 11]) % 5
    basis = EchelonBasis(40, 5)
    for start in range(0, 300, 64):
        basis.add_rows(M[start : start + 64])
    R, piv = rref(M, 5)
    assert basis.rank == len(piv) == rank_mod_p(M, 5)
    assert basis.pivots == piv
    assert basis.rows_seen == 300


# -- groups -------------------------------------------------------------------


def test_catalog_order_8():
    names = {G.name for G in group_catalog(8) if G.order == 8}
    assert {"Z/8", "Z/4xZ/2", "Z/2xZ/2xZ/2", "D4", "Q8"} <= names


def test_catalog_named_groups():
    Q8 = named_group("Q8")
    a, b = Q8.generators
    assert Q8.power(a, 4) == Q8.identity
    assert Q8.power(a, 2) == Q8.power(b, 2)
    assert Q8.mul(Q8.mul(b, a), Q8.inv(b)) == Q8.inv(a)
    H = named_group("H27")
    assert H.order == 27 and not H.is_abelian() and H.exponent() == 3
    assert special_linear2(3).order == 24 and special_linear2(5).order == 120
    assert named_group("S3").order == 6 and named_group("D4").order == 8


def test_relators_hold_and_generate():
    for G in group_catalog(16):
        for r in G.relators:
            assert G.evaluate(r) == G.identity
        assert len(G.closure(list(G.generators))) == G.order


@pytest.mark.parametrize("n,expected", [(8, [(8,), (4, 2), (2, 2, 2)]), (12, [(12,), (6, 2)]), (9, [(9,), (3, 3)])])
def test_abelian_invariants(n, expected):
    assert sorted(abelian_invariants(n)) == sorted(expected)


def test_sylow_and_cosets():
    G = special_linear2(5)
    assert [len(G.sylow_subgroup(p)) for p in (2, 3, 5)] == [8, 3, 5]
    D = named_group("D4")
    H = D.cyclic_subgroup(D.generators[0])
    assert len(H) == 4
    cosets = D.left_cosets(H)
    assert len(cosets) == 2 and sorted(cosets[0]) == sorted(H)
    with pytest.raises(NotASubgroup):
        D.subgroup([0, D.generators[0]])


def test_group_json_round_trip_and_bad_table():
    G = named_group("Q8")
    H = FiniteGroup.from_json(G.to_json())
    assert np.array_equal(H.table, G.table) and H.relators == G.relators
    bad = G.to_json()
    bad["table"][1][1], bad["table"][1][2] = bad["table"][1][2], bad["table"][1][1]
    with pytest.raises(GroupError):
        FiniteGroup.from_json(bad)


def test_parse_word():
    names = ("a", "b")
    assert parse_word("a^3 b^-1", names) == ((0, 3), (1, -1))
    with pytest.raises(ValueError):
        parse_word("c", names)


# -- representations --------------------------------------------------------------------


@pytest.mark.parametrize("p,n,size,order", [(5, 1, 2, 5), (2, 1, 2, 2), (3, 2, 4, 9), (2, 3, 5, 8)])
def test_jordan_block_rep(p, n, size, order):
    f = jordan_block_rep(p, n)
    assert f.n == size
    assert matrix_order(f.generator_images[0], order) == order
    assert f.is_homomorphism()


@pytest.mark.parametrize("m,n", [(m, n) for m in range(1, 5) for n in range(1, m + 1)])
def test_two_powers_rep(m, n):
    f = two_powers_rep(m, n)
    A, B = f.generator_images
    assert f.n == 2**m and f.ring.tag == "GF(4)"
    assert A @ B == B @ A
    assert matrix_order(A, 2**m) == 2**m and matrix_order(B, 2**n) == 2**n


def test_two_powers_small_cases():
    f = two_powers_rep(1, 1)
    k = f.ring
    x = RingMatrix(k, [[0, 1], [0, 0]])
    I = RingMatrix.identity(k, 2)
    assert f.generator_images[0] == I + x
    assert f.generator_images[1] == I + x.scale(k.generator())
    assert two_powers_rep(2, 1).n == 4


def test_induce_trivial_to_regular():
    Z2 = cyclic(2)
    triv = trivial_rep(Z2.subgroup([Z2.identity]), field(2))
    reg = induce_rep(Z2, [Z2.identity], triv)
    assert reg.n == 2
    assert reg.generator_images[0].tolist() == [[0, 1], [1, 0]]


def test_induce_index_one():
    G = named_group("S3")
    f = natural_rep(G)
    g = induce_rep(G, list(range(G.order)), f)
    assert g == f


def test_induce_p_times_p_to_d4():
    D = named_group("D4")
    klein = next(
        H
        for a, b in itertools.combinations(range(1, 8), 2)
        if len(H := D.closure([a, b])) == 4 and all(D.element_order(x) <= 2 for x in H)
    )
    K = D.subgroup(klein)
    rho = p_times_p_rep(K, 2)
    f = induce_rep(D, klein, rho)
    assert f.n == 4 and f.is_homomorphism()
    assert mackey_summand_check(f, K, rho)


def test_relator_violation():
    G = cyclic(4)
    k = field(2)
    with pytest.raises(RelatorViolation):
        Representation(G, k, [jordan_block(k, 5)])


def test_representation_json_and_conjugacy():
    G = named_group("S3")
    f = natural_rep(G)
    g = Representation.from_json(f.to_json(), group=G)
    assert g.strict_equal(f)
    k = f.ring
    P = RingMatrix(k, [[0, 1], [1, 0]])
    h = Representation(G, k, [P @ M @ P.inverse() for M in f.generator_images])
    assert h.is_conjugate(f) and not h.strict_equal(f)
