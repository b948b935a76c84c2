import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ffgrowth.field import (
    FieldError,
    check_subfield_condition,
    generated_subfield,
    is_irreducible,
    list_subfields,
    make_field,
)
from ffgrowth.setalg import FSet


def poly_roots(coeffs, p):
    return [x for x in range(p) if sum(c * x**i for i, c in enumerate(coeffs)) % p == 0]


def test_prime_field_has_no_modulus():
    F = make_field(7)
    assert (F.p, F.n, F.q, F.modulus) == (7, 1, 7, None)


@pytest.mark.parametrize("p", [4, 2, 1, 9, 15])
def test_rejects_bad_characteristic(p):
    with pytest.raises(FieldError):
        make_field(p)


def test_cap_enforced():
    with pytest.raises(FieldError):
        make_field(3, 13)  # 3^13 > 2^20


def test_f9_modulus_is_x2_plus_1():
    # a monic quadratic over F_3 is irreducible iff it has no root
    irreducible = [(c0, c1, 1) for c0, c1 in itertools.product(range(3), repeat=2)
                   if not poly_roots((c0, c1, 1), 3)]
    assert irreducible[0] == (1, 0, 1)
    assert make_field(3, 2).modulus == (1, 0, 1)
    for c0, c1 in itertools.product(range(3), repeat=2):
        assert is_irreducible([c0, c1, 1], 3) == ((c0, c1, 1) in irreducible)


def test_examples_f7():
    F = make_field(7)
    assert F.inv(3) == 5
    assert all(F.add(0, x) == x for x in range(7))


def test_f9_x_squared():
    F = make_field(3, 2)
    x = F.from_vector([0, 1])
    assert F.vector(F.mul(x, x)) == (2, 0)


def test_inverse_of_zero_raises():
    F = make_field(3, 2)
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_mixed_contexts_raise():
    a = make_field(7).element(3)
    b = make_field(11).element(3)
    with pytest.raises(FieldError):
        a + b


@pytest.mark.parametrize("p,n", [(3, 2), (5, 2), (3, 3), (3, 4), (7, 2)])
def test_mul_matches_polynomial_reduction(p, n):
    F = make_field(p, n)
    for a in range(F.q):
        for b in range(0, F.q, max(1, F.q // 13)):
            assert F.mul(a, b) == F._mul_poly(a, b)


@pytest.mark.parametrize("p,n", [(3, 2), (5, 1), (3, 4), (5, 3)])
def test_every_nonzero_element_inverts(p, n):
    F = make_field(p, n)
    assert all(F.mul(a, F.inv(a)) == 1 for a in range(1, F.q))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 80), st.integers(0, 80), st.integers(0, 80))
def test_field_axioms_f81(a, b, c):
    F = make_field(3, 4)
    assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
    assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.mul(a, b) == F.mul(b, a)


def test_frobenius_is_additive_in_f125():
    F = make_field(5, 3)
    for a in range(0, F.q, 7):
        for b in range(0, F.q, 11):
            assert F.pow(F.add(a, b), 5) == F.add(F.pow(a, 5), F.pow(b, 5))


def test_primitive_element_generates():
    F = make_field(3, 4)
    g = F.primitive_element
    seen, x = set(), 1
    for _ in range(F.q - 1):
        seen.add(x)
        x = F.mul(x, g)
    assert len(seen) == F.q - 1
    assert make_field(101).primitive_element == 2


def test_vectorized_ops_agree():
    import numpy as np
    F = make_field(3, 4)
    a = np.arange(81)
    b = (a * 7 + 3) % 81
    assert list(F.vmul(a, b)) == [F.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert list(F.vadd(a, b)) == [F.add(int(x), int(y)) for x, y in zip(a, b)]
    nz = a[1:]
    assert list(F.vinv(nz)) == [F.inv(int(x)) for x in nz]


# -- subfields ----------------------------------------------------------------

def frobenius_fixed(F, d):
    return {a for a in range(F.q) if F.pow(a, F.p**d) == a}


def test_list_subfields_prime():
    subs = list_subfields(make_field(7))
    assert [s.degree for s in subs] == [1] and subs[0].elements == tuple(range(7))


def test_list_subfields_f9():
    subs = list_subfields(make_field(3, 2))
    assert [s.degree for s in subs] == [1, 2]
    assert subs[0].elements == (0, 1, 2)


@pytest.mark.parametrize("p,n", [(3, 2), (3, 4), (5, 2), (3, 3), (7, 2)])
def test_subfields_match_frobenius_fixed_points(p, n):
    F = make_field(p, n)
    for sub in list_subfields(F):
        els = set(sub.elements)
        assert els == frobenius_fixed(F, sub.degree)
        assert sub.size == p**sub.degree
        nz = els - {0}
        assert all(F.add(a, b) in els and F.mul(a, b) in els for a in els for b in els)
        assert all(F.inv(a) in els for a in nz)


def test_generated_subfield_examples():
    F = make_field(3, 2)
    assert generated_subfield(FSet(F, (1,))).elements == (0, 1, 2)
    assert generated_subfield(FSet(F, (0,))).degree == 1
    x = F.from_vector([0, 1])
    g = generated_subfield(FSet(F, (x,)))
    assert g.size == 9 and g.degree == 2


def test_subfield_condition_prime_field_vacuous():
    assert check_subfield_condition(FSet(make_field(7), (1, 2, 3))).ok


def test_subfield_condition_full_proper_subfield_fails():
    F = make_field(5, 2)
    rep = check_subfield_condition(FSet(F, tuple(range(5))))
    assert not rep.ok and rep.worst_count == 5 and rep.worst_degree == 1


def brute_subfield_condition(A):
    F = A.ctx
    ok = True
    for sub in list_subfields(F)[:-1]:
        for lam in range(1, F.q):
            coset = {F.mul(lam, f) for f in sub.elements}
            c = sum(1 for a in A if a in coset)
            ok &= c * c <= sub.size
    return ok


def test_subfield_condition_matches_scan_f9():
    F = make_field(3, 2)
    outside = [a for a in range(9) if a >= 3]
    for trio in itertools.combinations(outside, 3):
        A = FSet(F, trio)
        assert check_subfield_condition(A).ok == brute_subfield_condition(A)


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(0, 80), min_size=1, max_size=12))
def test_subfield_condition_matches_scan_f81(elems):
    A = FSet(make_field(3, 4), tuple(elems))
    assert check_subfield_condition(A).ok == brute_subfield_condition(A)
