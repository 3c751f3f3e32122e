import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wittlift.algebra.fields import (
    CONWAY,
    FieldMismatch,
    FqElement,
    field,
    field_of_order,
    is_irreducible,
    prime_power,
)
from wittlift.algebra.ghost import GhostRing
from wittlift.algebra.matrix import (
    NoOrderWithinBound,
    NotInvertible,
    RingMatrix,
    matrix_order,
    reduce_mod_p,
    ring_from_tag,
    teichmuller_matrix,
    witt_to_zmod_matrix,
    zmod_to_witt_matrix,
)
from wittlift.algebra.rings import QuotientRingElement, quotient_ring_64, zmod
from wittlift.algebra.witt import (
    WittElement,
    teichmuller,
    witt_add,
    witt_mul,
    witt_ring,
    witt_to_zmod,
    zmod_to_witt,
)

FIELDS = [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (7, 1), (2, 3)]


# -- fields -------------------------------------------------------------------


@pytest.mark.parametrize("p,m", FIELDS)
def test_field_axioms_exhaustive(p, m):
    k = field(p, m)
    a = np.arange(k.q)
    A, B = a[:, None], a[None, :]
    assert np.array_equal(k.add(A, B), k.add(B, A))
    assert np.array_equal(k.mul(A, B), k.mul(B, A))
    assert np.all(k.add(a, k.neg(a)) == 0)
    units = a[1:]
    assert np.all(k.mul(units, k.inv(units)) == 1)
    assert is_irreducible(tuple(k.modulus), p)


@pytest.mark.parametrize("p,m", FIELDS)
def test_field_associative_distributive(p, m):
    k = field(p, m)
    rng = np.random.default_rng(p * 10 + m)
    x, y, z = rng.integers(0, k.q, size=(3, 2000))
    assert np.array_equal(k.mul(k.mul(x, y), z), k.mul(x, k.mul(y, z)))
    assert np.array_equal(k.mul(x, k.add(y, z)), k.add(k.mul(x, y), k.mul(x, z)))


def test_generator_is_primitive():
    for q in (2, 3, 4, 5, 7, 8, 9, 16, 25):
        k = field_of_order(q)
        g = k.generator()
        assert len({int(k.power(g, e)) for e in range(q - 1)}) == q - 1


def test_conway_moduli_used_and_frobenius():
    k = field(2, 2)
    assert tuple(k.modulus) == CONWAY[(2, 2)]
    for a in range(k.q):
        assert k.frobenius_inverse(k.frobenius(a)) == a
        assert k.frobenius(a) == k.power(a, 2)


def test_prime_power():
    assert prime_power(16) == (2, 4)
    assert prime_power(7) == (7, 1)
    with pytest.raises(ValueError):
        prime_power(12)


def test_fq_element_json_and_mismatch():
    k = field(3, 2)
    x = FqElement(k, 5)
    assert FqElement.from_json(x.to_json()) == x
    assert x.to_json() == {"p": 3, "m": 2, "coords": list(k.coords(5))}
    with pytest.raises(FieldMismatch):
        x + FqElement(field(3), 1)


# -- Witt vectors ---------------------------------------------------------------


def _w(k, a0, a1=0):
    return WittElement(FqElement(k, a0), FqElement(k, a1))


def test_witt_add_examples():
    F2, F3 = field(2), field(3)
    assert witt_add(_w(F2, 1), _w(F2, 1)) == _w(F2, 0, 1)
    one = _w(F3, 1)
    assert one + one + one == _w(F3, 0, 1)
    x = _w(field(2, 2), 3, 2)
    assert x + _w(field(2, 2), 0, 0) == x


def test_witt_mul_examples():
    F2, F4 = field(2), field(2, 2)
    assert witt_mul(_w(F2, 0, 1), _w(F2, 0, 1)) == _w(F2, 0, 0)
    y = _w(F4, 2, 3)
    assert _w(F4, 1) * y == y
    w = F4.generator()
    assert teichmuller(FqElement(F4, w)) * teichmuller(FqElement(F4, F4.mul(w, w))) == _w(F4, 1)


def test_teichmuller_examples():
    F4 = field(2, 2)
    assert teichmuller(FqElement(F4, 0)) == _w(F4, 0)
    assert teichmuller(FqElement(F4, 1)) == _w(F4, 1)
    t = teichmuller(FqElement(F4, F4.generator()))
    assert t**3 == _w(F4, 1)


def test_witt_field_mismatch():
    with pytest.raises(FieldMismatch):
        witt_add(_w(field(2), 1), _w(field(2, 2), 1))


@pytest.mark.parametrize("p,m", FIELDS)
def test_witt_matches_ghost_oracle(p, m):
    """10^4 random triples: the ghost map intertwines +, * and both laws are ring laws."""
    k = field(p, m)
    W, G = witt_ring(k), GhostRing(k)
    rng = np.random.default_rng(1000 + p * 10 + m)
    x, y, z = rng.integers(0, W.size, size=(3, 10_000))

    def ghost(c):
        a0, a1 = W.split(c)
        return G.to_ghost(int(a0), int(a1))

    for i in range(10_000):
        a, b, c = int(x[i]), int(y[i]), int(z[i])
        ga, gb, gc = ghost(a), ghost(b), ghost(c)
        assert ghost(W.add(a, b)) == G.add(ga, gb)
        assert ghost(W.mul(a, b)) == G.mul(ga, gb)
        assert ghost(W.mul(a, W.add(b, c))) == G.mul(ga, G.add(gb, gc))
        if i < 2000:
            assert W.mul(W.mul(a, b), c) == W.mul(a, W.mul(b, c))
            assert W.mul(a, W.add(b, c)) == W.add(W.mul(a, b), W.mul(a, c))
            assert W.add(W.add(a, b), c) == W.add(a, W.add(b, c))
            assert W.mul(a, b) == W.mul(b, a)


@pytest.mark.parametrize("p,m", FIELDS)
def test_witt_ghost_round_trip(p, m):
    k = field(p, m)
    W, G = witt_ring(k), GhostRing(k)
    for c in range(min(W.size, 512)):
        a0, a1 = W.split(c)
        assert G.from_ghost(G.to_ghost(int(a0), int(a1))) == (int(a0), int(a1))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_w2_fp_is_z_mod_p2(p):
    W = witt_ring(field(p))
    seen = set()
    for c in range(p * p):
        x = W.from_code(c)
        n = witt_to_zmod(x)
        seen.add(n)
        assert zmod_to_witt(n, p) == x
    assert seen == set(range(p * p))
    for a, b in itertools.product(range(p * p), repeat=2):
        xa, xb = zmod_to_witt(a, p), zmod_to_witt(b, p)
        assert witt_to_zmod(xa * xb) == a * b % (p * p)
        assert witt_to_zmod(xa + xb) == (a + b) % (p * p)


def test_witt_units_and_inverse():
    W = witt_ring(field(3, 2))
    units = [c for c in range(W.size) if W.is_unit(c)]
    assert len(units) == W.size - W.k.q
    for c in units:
        assert W.mul(c, W.inv(c)) == 1


def test_p_digit_round_trip():
    W = witt_ring(field(2, 2))
    for a in range(4):
        assert W.p_digit(W.p_times_teichmuller(a)) == a
        assert W.reduce(W.p_times_teichmuller(a)) == 0


def test_witt_json():
    x = _w(field(3, 2), 4, 7)
    assert WittElement.from_json(x.to_json()) == x
    assert set(x.to_json()) == {"a0", "a1"}


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 80), st.integers(0, 80), st.integers(0, 80))
def test_witt_ring_axioms_property(a, b, c):
    W = witt_ring(field(3, 2))
    assert W.add(W.add(a, b), c) == W.add(a, W.add(b, c))
    assert W.mul(W.add(a, b), c) == W.add(W.mul(a, c), W.mul(b, c))
    assert W.sub(W.add(a, b), b) == a


# -- the 64-element ring -----------------------------------------------------------


def test_quotient_ring_structure_constants():
    R = quotient_ring_64()
    t = R.t
    two = R.from_int(2)
    assert R.mul(t, t) == two
    assert R.mul(R.mul(t, t), t) == 0
    assert R.mul(two, t) == 0
    assert len(set(R.elements())) == 64


def test_quotient_ring_axioms_exhaustive():
    R = quotient_ring_64()
    a = np.arange(64)
    A, B = a[:, None], a[None, :]
    assert np.array_equal(R.mul(A, B), R.mul(B, A))
    for x in range(64):
        assert np.array_equal(R.mul(R.mul(x, A), B), R.mul(x, R.mul(A, B)))
        assert np.array_equal(R.mul(x, R.add(A, B)), R.add(R.mul(x, A), R.mul(x, B)))
    assert sum(bool(R.is_unit(x)) for x in range(64)) == 64 - 16


def test_quotient_ring_element():
    t = QuotientRingElement.t()
    one = QuotientRingElement.from_code(1)
    assert (t * t).code() == (one * 2).code()
    assert (t * t * t).code() == 0
    assert (t * 2).code() == 0
    assert (one + t).is_unit() and not t.is_unit()
    assert ((one + t) * (one + t).inverse()).code() == 1
    assert {QuotientRingElement.from_code(x).code() for x in range(64)} == set(range(64))
    assert t.to_json()["t_coeff"] == {"p": 2, "m": 2, "coords": [1, 0]}


# -- matrices --------------------------------------------------------------------


def test_matrix_order_examples():
    Z4, Z9 = zmod(2, 2), zmod(3, 2)
    assert matrix_order(RingMatrix.from_ints(Z4, [[-1, 1], [0, 1]]), 8) == 2
    assert matrix_order(RingMatrix.identity(Z9, 3), 5) == 1
    assert matrix_order(RingMatrix.from_ints(Z9, [[0, -1], [1, -1]]), 10) == 3
    with pytest.raises(NoOrderWithinBound):
        matrix_order(RingMatrix.from_ints(Z9, [[1, 1], [0, 1]]), 5)
    with pytest.raises(NotInvertible):
        matrix_order(RingMatrix.from_ints(Z9, [[3, 0], [0, 1]]), 5)


def test_reduce_examples():
    Z4 = zmod(2, 2)
    M = RingMatrix.from_ints(Z4, [[-1, 1], [0, 1]])
    assert reduce_mod_p(M).tolist() == [[1, 1], [0, 1]]
    W = witt_ring(field(2, 2))
    N = RingMatrix(W, [[W.pack(3, 1), W.pack(2, 0)], [W.pack(0, 3), W.pack(1, 1)]])
    assert reduce_mod_p(N).tolist() == [[3, 2], [0, 1]]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 15), min_size=8, max_size=8))
def test_reduce_is_multiplicative(entries):
    W = witt_ring(field(2, 2))
    A = RingMatrix(W, np.array(entries[:4]).reshape(2, 2))
    B = RingMatrix(W, np.array(entries[4:]).reshape(2, 2))
    assert reduce_mod_p(A @ B) == reduce_mod_p(A) @ reduce_mod_p(B)
    assert reduce_mod_p(A + B) == reduce_mod_p(A) + reduce_mod_p(B)


@pytest.mark.parametrize("p,m", [(2, 1), (2, 2), (3, 1)])
def test_reduction_kernel_squares_to_zero(p, m):
    W = witt_ring(field(p, m))
    kernel = [c for c in range(W.size) if W.reduce(c) == 0]
    assert len(kernel) == W.k.q
    assert all(W.mul(a, b) == 0 for a in kernel for b in kernel)
    assert {int(W.reduce(c)) for c in range(W.size)} == set(range(W.k.q))


def test_matrix_inverse_and_json():
    W = witt_ring(field(3))
    M = teichmuller_matrix(RingMatrix(field(3), [[1, 2], [0, 1]]))
    assert (M @ M.inverse()).is_identity()
    assert (M ** -1) == M.inverse()
    assert RingMatrix.from_json(M.to_json()) == M
    assert ring_from_tag(M.ring.tag) is W
    Z = witt_to_zmod_matrix(M)
    assert Z.ring.tag == "Z/9" and zmod_to_witt_matrix(Z) == M


def test_matrix_ring_mismatch():
    with pytest.raises(Exception):
        RingMatrix.identity(zmod(2, 2), 2) @ RingMatrix.identity(zmod(3, 2), 2)
