from fractions import Fraction

import numpy as np
import pytest

from trotterbound.jordan_wigner import (
    FermionMonomial,
    FermionOp,
    JWOrdering,
    dense_fermion_ops,
    jw_transform_monomial,
    jw_transform_op,
    jw_transform_sum,
    verify_car,
)
from trotterbound.models import ModelParams
from trotterbound.pauli import Coefficient, PauliString
from trotterbound.spectra import terms_to_dense

T = Coefficient.monomial(1, t=1)
U = Coefficient.monomial(1, u=1)


def as_set(terms):
    return {(h.pauli.label, h.pauli.phase, h.coeff) for h in terms}


def test_number_operator():
    got = jw_transform_op(FermionOp.number(0), JWOrdering.chain(1))
    half = Coefficient.constant(Fraction(1, 2))
    assert as_set(got) == {("I", 0, half), ("Z", 0, half)}


def test_create_first_site_has_no_string():
    got = jw_transform_op(FermionOp.create(0), JWOrdering.chain(3))
    assert {h.pauli.label for h in got} == {"XII", "YII"}
    assert {h.pauli.phase for h in got if h.pauli.label == "YII"} == {1}


def test_create_third_site_matches_dense():
    ordering = JWOrdering.chain(3)
    terms = jw_transform_op(FermionOp.create(2), ordering)
    assert all(h.pauli.label[:2] == "ZZ" for h in terms)
    assert np.allclose(terms_to_dense(terms), dense_fermion_ops(3)[2].T)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_annihilators_match_occupation_basis(n):
    # Z = 2n - 1 on each string qubit, so the Pauli form equals the
    # occupation-basis operator up to the gauge sign (-1)**k
    ordering = JWOrdering.chain(n)
    for k, want in enumerate(dense_fermion_ops(n)):
        got = terms_to_dense(jw_transform_op(FermionOp.annihilate(k), ordering))
        assert np.allclose(got, (-1) ** k * want)


def test_hopping_pair_gives_xy_form():
    ordering = JWOrdering.chain(2)
    mons = [
        FermionMonomial([FermionOp.create(0), FermionOp.annihilate(1)], -T),
        FermionMonomial([FermionOp.create(1), FermionOp.annihilate(0)], -T),
    ]
    got = jw_transform_sum(mons, ordering)
    # occupied is |0>, which flips the sign relative to the (1 - Z)/2 convention
    assert as_set(got) == {("XX", 0, T * Fraction(1, 2)), ("YY", 0, T * Fraction(1, 2))}
    c0, c1 = (np.asarray(m, dtype=complex) * (-1) ** k for k, m in enumerate(dense_fermion_ops(2)))
    want = -(c0.T @ c1 + c1.T @ c0)
    assert np.allclose(terms_to_dense(got, ModelParams(t=1.0)), want)


def test_density_product_expands_to_four_terms():
    ordering = JWOrdering.chain(2)
    got = jw_transform_sum([FermionMonomial([FermionOp.number(0), FermionOp.number(1)], U)], ordering)
    quarter = U * Fraction(1, 4)
    assert as_set(got) == {(lab, 0, quarter) for lab in ("II", "ZI", "IZ", "ZZ")}


def test_non_hermitian_sum_rejected():
    ordering = JWOrdering.chain(2)
    with pytest.raises(ValueError):
        jw_transform_sum([FermionMonomial([FermionOp.create(0), FermionOp.annihilate(1)])], ordering)


def test_hermitian_pair_is_real():
    ordering = JWOrdering(2, 3)
    mons = [
        FermionMonomial([FermionOp.hole(1), FermionOp.create(0), FermionOp.annihilate(4)], T),
        FermionMonomial([FermionOp.create(4), FermionOp.annihilate(0), FermionOp.hole(1)], T),
    ]
    assert all(h.is_hermitian for h in jw_transform_sum(mons, ordering))


def test_vertical_hop_string_segments():
    """Z support of c^dag_(i,j) c_(k,l), i < k: rest of row i, full rows between, start of row k."""
    ordering = JWOrdering(4, 5)
    a, b = ordering.index(0, 2), ordering.index(2, 1)
    mons = [
        FermionMonomial([FermionOp.create(a), FermionOp.annihilate(b)]),
        FermionMonomial([FermionOp.create(b), FermionOp.annihilate(a)]),
    ]
    segment_a = {ordering.index(0, c) for c in range(3, 5)}
    segment_b = {ordering.index(1, c) for c in range(5)}
    segment_c = {ordering.index(2, c) for c in range(0, 1)}
    for h in jw_transform_sum(mons, ordering):
        zs = {q for q, ch in h.pauli.sparse().items() if ch == "Z"}
        assert zs == segment_a | segment_b | segment_c


def test_2d_ordering_equals_linear_chain():
    grid = JWOrdering(3, 4)
    chain = JWOrdering.chain(12)
    for r in range(3):
        for c in range(4):
            k = grid.index(r, c)
            assert grid.coords(k) == (r, c)
            for make in (FermionOp.create, FermionOp.annihilate, FermionOp.number):
                assert as_set(jw_transform_op(make(k), grid)) == as_set(jw_transform_op(make(k), chain))


def test_invalid_site():
    with pytest.raises(ValueError):
        jw_transform_op(FermionOp.create(3), JWOrdering.chain(3))
    with pytest.raises(ValueError):
        JWOrdering(2, 2).index(2, 0)


@pytest.mark.parametrize("ordering", [JWOrdering.chain(2), JWOrdering.chain(4), JWOrdering(2, 2), JWOrdering(2, 3)])
def test_car(ordering):
    assert verify_car(ordering)


def test_car_site_limit():
    with pytest.raises(ValueError):
        verify_car(JWOrdering.chain(7))


def test_monomial_order_matters():
    ordering = JWOrdering.chain(2)
    ab = jw_transform_monomial(FermionMonomial([FermionOp.create(0), FermionOp.annihilate(1)]), ordering)
    ba = jw_transform_monomial(FermionMonomial([FermionOp.annihilate(1), FermionOp.create(0)]), ordering)
    assert np.allclose(terms_to_dense(ab), -terms_to_dense(ba))
