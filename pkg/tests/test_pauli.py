from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import label_matrix, pauli_strings
from trotterbound.pauli import Coefficient, HamTerm, PauliString, commutator_norm, commutes, multiply
from trotterbound.spectra import pauli_to_dense

T = Coefficient.monomial(1, t=1)
U = Coefficient.monomial(1, u=1)


def term(coeff, label):
    return HamTerm(coeff, PauliString.from_label(label))


def test_label_round_trip():
    p = PauliString.from_label("IXYZ")
    assert p.label == "IXYZ"
    assert p.x_mask == 0b0110 and p.z_mask == 0b1100
    assert p.weight == 3
    assert p.sparse() == {1: "X", 2: "Y", 3: "Z"}


def test_bad_label():
    with pytest.raises(ValueError):
        PauliString.from_label("XQ")


def test_involution():
    x = PauliString.from_label("X")
    assert multiply(x, x) == PauliString.identity(1)


def test_x_times_y():
    assert multiply(PauliString.from_label("X"), PauliString.from_label("Y")) == PauliString.from_label("Z", 1)


def test_two_qubit_product_matches_dense():
    p, q = PauliString.from_label("ZX"), PauliString.from_label("XX")
    r = multiply(p, q)
    assert r.unsigned().label == "YI"
    assert np.allclose(label_matrix("ZX") @ label_matrix("XX"), label_matrix(r.label, r.phase))


def test_size_mismatch():
    with pytest.raises(ValueError):
        multiply(PauliString.from_label("X"), PauliString.from_label("XX"))
    with pytest.raises(ValueError):
        commutes(PauliString.from_label("X"), PauliString.from_label("XX"))


@pytest.mark.parametrize("a,b,expected", [("ZX", "XZ", True), ("X", "Y", False), ("ZZ", "YY", True)])
def test_commutes_examples(a, b, expected):
    assert commutes(PauliString.from_label(a), PauliString.from_label(b)) is expected


def test_commutator_norm_examples():
    assert commutator_norm(term(T * Fraction(1, 2), "XZ"), term(T * Fraction(1, 2), "XZ")) == 0
    got = commutator_norm(term(T * Fraction(1, 2), "X"), term(U * Fraction(1, 4), "Z"))
    assert got == Coefficient.monomial(Fraction(1, 4), t=1, u=1)
    assert commutator_norm(term(T * Fraction(1, 2), "XXI"), term(U * Fraction(1, 4), "IIZ")) == 0


@settings(max_examples=200)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(pauli_strings(n_qubits=n), pauli_strings(n_qubits=n))))
def test_product_matches_dense(pair):
    p, q = pair
    r = multiply(p, q)
    assert np.allclose(pauli_to_dense(p) @ pauli_to_dense(q), pauli_to_dense(r))


@settings(max_examples=100)
@given(st.integers(1, 4).flatmap(
    lambda n: st.tuples(pauli_strings(n_qubits=n), pauli_strings(n_qubits=n), pauli_strings(n_qubits=n))))
def test_associative_and_identity(triple):
    p, q, r = triple
    assert multiply(multiply(p, q), r) == multiply(p, multiply(q, r))
    assert multiply(p, PauliString.identity(p.n_qubits)) == p


@settings(max_examples=200)
@given(pauli_strings())
def test_square_is_signed_identity(p):
    sq = multiply(p, p)
    assert sq.is_identity and sq.phase in (0, 2)


@settings(max_examples=200)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(pauli_strings(n_qubits=n), pauli_strings(n_qubits=n))))
def test_commutator_norm_matches_dense(pair):
    p, q = (s.unsigned() for s in pair)
    a = HamTerm(T * Fraction(1, 2), p)
    b = HamTerm(U * Fraction(3, 4), q)
    assert commutes(p, q) == commutes(q, p)
    assert commutator_norm(a, b) == commutator_norm(b, a)
    t, u = 0.7, 1.9
    ma, mb = 0.5 * t * pauli_to_dense(p), 0.75 * u * pauli_to_dense(q)
    want = np.linalg.norm(ma @ mb - mb @ ma, 2)
    got = commutator_norm(a, b).evaluate(t, u)
    assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_coefficient_canonical():
    c = Coefficient({(1, 0, 0): 1, (0, 1, 0): 0})
    assert c.terms == {(1, 0, 0): Fraction(1)}
    assert (T - T) == Coefficient() and not (T - T)
    assert hash(T + U) == hash(U + T)


def test_coefficient_abs_is_monomialwise():
    c = T * Fraction(-1, 8) + U * Fraction(1, 4)
    assert abs(c) == T * Fraction(1, 8) + U * Fraction(1, 4)


def test_coefficient_arithmetic_and_render():
    c = (T * 2 + U) * (T * 2 + U)
    assert c == T * T * 4 + T * U * 4 + U * U
    assert str(T * T * 4 + T * U * 8) == "8*t*U + 4*t^2"
    assert c.degree("t") == 2 and c.degree("J") == 0 and Coefficient().degree("t") == -1
    assert c.evaluate(1, 2) == 16.0


def test_coefficient_json_round_trip():
    c = T * Fraction(-3, 7) + U * U * 5
    assert Coefficient.from_json(c.to_json()) == c


def test_hamterm_folds_minus_sign():
    h = HamTerm(T, PauliString.from_label("X", 2))
    assert h.pauli.phase == 0 and h.coeff == -T and h.is_hermitian
