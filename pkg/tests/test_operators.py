import numpy as np
import pytest

from erdsim.operators import (PAULI, DimensionError, OperatorSum, PauliString, all_pauli_strings,
                              anticommutator, commutator, dense_of, embed, evolve_reduced, expm, is_unitary,
                              ket, max_dim, op_distance, partial_trace_bath, purity)
from scipy.linalg import expm as scipy_expm

from conftest import random_hermitian


def test_pauli_products_and_phases():
    assert PauliString("X") * PauliString("Y") == PauliString("Z", 1)
    assert PauliString("Y") * PauliString("X") == PauliString("Z", 3)
    xy = PauliString("XY") * PauliString("YX")
    assert np.allclose(xy.dense(), PauliString("XY").dense() @ PauliString("YX").dense())
    assert str(-PauliString("ZI")) == "-ZI"


def test_pauli_commutation_matches_dense():
    for a in all_pauli_strings(2):
        for b in all_pauli_strings(2):
            comm = commutator(a.dense(), b.dense())
            assert a.commutes_with(b) == np.allclose(comm, 0)


def test_embed_letters_and_bounds():
    assert PauliString.embed(3, {0: "X", 2: "Z"}).factors == "XIZ"
    with pytest.raises(IndexError):
        PauliString.embed(2, {2: "X"})
    with pytest.raises(ValueError):
        PauliString("XQ")


def test_qubit_zero_is_leftmost_factor():
    z0 = PauliString.embed(2, {0: "Z"}).dense()
    assert np.allclose(z0 @ ket("10"), -ket("10"))
    assert np.allclose(z0 @ ket("01"), ket("01"))


def test_operator_sum_arithmetic_matches_dense(rng):
    b1, b2 = random_hermitian(rng, 3), random_hermitian(rng, 3)
    a = OperatorSum.build([(0.5, "XZ", b1), (1j, "YI", b2)], 2, 3)
    c = OperatorSum.build([(2.0, "ZZ", b2), (-1, "XZ", b1)], 2, 3)
    assert np.allclose((a + c).dense(), a.dense() + c.dense())
    assert np.allclose((a * c).dense(), a.dense() @ c.dense())
    assert np.allclose((3 * a - c / 2).dense(), 3 * a.dense() - c.dense() / 2)
    assert np.allclose(a.adjoint().dense(), a.dense().conj().T)


def test_build_merges_duplicate_terms():
    s = OperatorSum.build([(1, "XX", None), (2, "XX", None), (1, PauliString("ZZ", 2), None)], 2)
    assert len(s) == 2
    assert np.allclose(s.dense(), 3 * PauliString("XX").dense() - PauliString("ZZ").dense())


def test_from_dense_round_trip(rng):
    m = random_hermitian(rng, 8)
    s = OperatorSum.from_dense(m, 2, 2)
    assert np.allclose(s.dense(), m)
    assert s.is_hermitian()


def test_otimes_and_compatibility(rng):
    b = random_hermitian(rng, 2)
    s = OperatorSum.pauli("XY").otimes(b)
    assert np.allclose(s.dense(), np.kron(PauliString("XY").dense(), b))
    with pytest.raises(ValueError):
        s + OperatorSum.pauli("XY")


def test_expm_matches_scipy(rng):
    h = random_hermitian(rng, 6)
    for t in (0.0, 0.3, -2.0):
        assert np.allclose(expm(h, t), scipy_expm(-1j * h * t), atol=1e-12)
    assert is_unitary(expm(h, 1.7))


def test_expm_rejects_non_hermitian():
    with pytest.raises(ValueError):
        expm(np.array([[0, 1], [0, 0]]))


def test_embed_dense_operator():
    cnot = np.eye(4)[[0, 1, 3, 2]]
    full = embed(cnot, [2, 0], 3)
    # control qubit 2, target qubit 0
    assert np.allclose(full @ ket("001"), ket("101"))
    assert np.allclose(full @ ket("010"), ket("010"))


def test_partial_trace_and_reduced_evolution(rng):
    rho_s = np.array([[0.7, 0.2], [0.2, 0.3]], dtype=complex)
    rho_b = np.eye(3) / 3
    assert np.allclose(partial_trace_bath(np.kron(rho_s, rho_b), 2, 3), rho_s)
    u = expm(np.kron(PAULI["Z"], random_hermitian(rng, 3)), 1.3)
    out = evolve_reduced(u, rho_s, rho_b)
    assert np.isclose(np.trace(out), 1)
    assert np.allclose(np.diag(out), np.diag(rho_s))
    assert purity(out) < purity(rho_s)


def test_commutator_identities():
    x, y, z = (PauliString(p) for p in "XYZ")
    assert np.allclose(commutator(x, y), 2j * z.dense())
    assert np.allclose(anticommutator(x, y), 0)
    assert op_distance(x, x) == 0


def test_dimension_cap(monkeypatch):
    monkeypatch.setenv("ERDSIM_MAX_DIM", "8")
    assert max_dim() == 8
    with pytest.raises(DimensionError):
        PauliString("XXXX").dense()
    with pytest.raises(DimensionError):
        dense_of(np.eye(16))
