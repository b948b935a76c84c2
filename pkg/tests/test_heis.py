import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ffgrowth import heis
from ffgrowth.field import make_field
from ffgrowth.heis import HeisCube, HeisElem
from ffgrowth.setalg import FSet, productset, sumset

F5, F7, F101 = make_field(5), make_field(7), make_field(101)


def matrix(p, x, y, z):
    """(n+2)x(n+2) upper unitriangular matrix with first row (1, x, z) and last column (z, y, 1)."""
    n = len(x)
    M = np.eye(n + 2, dtype=np.int64)
    M[0, 1:n + 1] = x
    M[1:n + 1, n + 1] = y
    M[0, n + 1] = z
    return M % p


def oracle_mul(p, g, h):
    P = matrix(p, *g) @ matrix(p, *h) % p
    n = len(g[0])
    return tuple(P[0, 1:n + 1]), tuple(P[1:n + 1, n + 1]), int(P[0, n + 1])


def test_law_example():
    g = HeisElem(F7, (1,), (2,), 3) * HeisElem(F7, (4,), (5,), 6)
    assert (g.x, g.y, g.z) == ((5,), (0,), 0)


def test_identity_and_inverse():
    e = HeisElem.identity(F7, 2)
    g = HeisElem(F7, (1, 5), (2, 6), 3)
    assert g * e == g and e * g == g
    assert g * g.inverse() == e and g.inverse() * g == e


@pytest.mark.parametrize("n", [1, 2])
def test_law_exhaustive_p3(n):
    F3 = make_field(3)
    vecs = list(itertools.product(range(3), repeat=n))
    elems = [(x, y, z) for x in vecs for y in vecs for z in range(3)]
    for g in elems:
        for h in elems:
            prod = HeisElem(F3, *g) * HeisElem(F3, *h)
            assert (prod.x, prod.y, prod.z) == oracle_mul(3, g, h)


coord = st.integers(0, 100)
elem2 = st.tuples(st.tuples(coord, coord), st.tuples(coord, coord), coord)


@settings(max_examples=200, deadline=None)
@given(elem2, elem2, elem2)
def test_group_axioms_p101(g, h, k):
    G, H, K = (HeisElem(F101, *v) for v in (g, h, k))
    assert (G * H) * K == G * (H * K)
    P = G * H
    assert (P.x, P.y, P.z) == oracle_mul(101, g, h)
    assert HeisElem.from_matrix(F101, G.to_matrix()) == G


def test_cube_product_examples():
    one = FSet(F7, (1,))
    K = HeisCube(one, one, None, 1)
    assert heis.cube_product_set(K, K).size == 1
    A = FSet(F7, (1, 2))
    K2 = HeisCube(A, A, None, 2)
    assert len(K2) == 16
    expect = {oracle_mul(7, (g.x, g.y, g.z), (h.x, h.y, h.z)) for g in K2 for h in K2}
    got = heis.cube_product_set(K2, K2)
    assert got.size == len(expect)
    assert {(e.x, e.y, e.z) for e in got} == expect


def test_cube_product_with_identity():
    A = FSet(F7, (1, 3))
    ident = HeisCube(FSet(F7, (0,)), FSet(F7, (0,)), None, 2)
    K = HeisCube(A, A, FSet(F7, (0, 4)), 2)
    got = heis.cube_product_set(ident, K)
    assert {(e.x, e.y, e.z) for e in got} == {(g.x, g.y, g.z) for g in K}


@pytest.mark.parametrize("p,A,C", [(7, (0, 3), (1, 2)), (11, (2, 5, 6), (0, 7)), (5, (1, 2, 4), (0, 1, 3))])
def test_cube_product_with_z_matches_pairs(p, A, C):
    ctx = make_field(p)
    K = HeisCube(FSet(ctx, A), FSet(ctx, A), FSet(ctx, C), 2)
    expect = {oracle_mul(p, (g.x, g.y, g.z), (h.x, h.y, h.z)) for g in K for h in K}
    assert heis.cube_product_set(K, K).size == len(expect)


def n_oracle(p, A):
    els = [((x1, x2), (y1, y2), 0) for x1, x2, y1, y2 in itertools.product(A, repeat=4)]
    cnt = Counter(oracle_mul(p, g, h) for g in els for h in els)
    return sum(v * v for v in cnt.values())


def test_collision_examples():
    assert heis.collision_count_direct(FSet(F101, (1,))).N == 1
    assert heis.collision_count_fiber(FSet(F101, (1,))).N == 1
    N = heis.collision_count_direct(FSet(F101, (1, 2))).N
    assert N >= 2**8 and N == n_oracle(101, (1, 2))


@pytest.mark.parametrize("p,A", [(101, (1, 2)), (5, (0, 1)), (101, (1, 2, 3)), (7, (0, 2, 5))])
def test_collision_methods_agree(p, A):
    S = FSet(make_field(p), A)
    d = heis.collision_count_direct(S).N
    assert d == heis.collision_count_fiber(S).N == n_oracle(p, A)


def test_fiber_singleton():
    A = FSet(F101, (1,))
    assert [s for s in sumset(A, A)] == [2]
    assert heis.fiber_term(A, 2, 2, 2, 2) == 1


def test_fiber_terms_sum_to_N():
    A = FSet(F7, (1, 2, 4))
    sums = list(sumset(A, A))
    total = sum(heis.fiber_term(A, *s) for s in itertools.product(sums, repeat=4))
    assert total == heis.collision_count_direct(A).N


def test_certificates():
    for ctx, A in [(F7, (1,)), (F7, (1, 2)), (F101, (1, 2, 4)), (F101, (1, 2, 3)), (F101, (0, 5, 9))]:
        S = FSet(ctx, A)
        assert heis.cs_certificate_heis(S).ok
        assert heis.bilinear_image_certificate(S).ok
        assert heis.thm4_certificate(S).ok


def test_bilinear_image_is_aa_plus_aa():
    A = FSet(F7, (1, 2))
    c = heis.bilinear_image_certificate(A)
    AA = productset(A, A)
    assert c.rhs == 16 * len(sumset(AA, AA))
    assert c.detail["image_is_AA+AA"]


def test_thm4_singleton():
    c = heis.thm4_certificate(FSet(F7, (1,)))
    assert c.rhs == 1 and c.ok


def test_hh_quantities():
    q = heis.hh_degree1_quantities(FSet(F101, (1,)))
    assert q["size"] == 1
    q = heis.hh_degree1_quantities(FSet(F101, (1, 2, 3)))
    A = (1, 2, 3)
    els = [((x,), (y,), 0) for x in A for y in A]
    assert q["size"] == len({oracle_mul(101, g, h) for g in els for h in els})
    assert q["certificate_ok"]
    H = FSet(F101, (1, 6, 14, 17, 36, 65, 84, 87, 95, 100))
    assert heis.hh_degree1_quantities(H)["certificate_ok"]


def test_direct_budget():
    with pytest.raises(heis.BudgetError):
        heis.collision_count_direct(FSet(F101, tuple(range(1, 11))), budget=10**6)
