import math

import numpy as np
import pytest

from erdsim.noise import (BathSpec, collective_dephasing, deph2_split, dephasing_block_split,
                          dephasing_hamiltonian, gaussian_dephase, gaussian_dephase_quadrature,
                          generic_coupling, random_bath, with_bath_hamiltonian)
from erdsim.operators import commutator, op_distance


def test_random_bath_is_reproducible():
    a = random_bath(3, seed=42, names=("B1", "B2"), h_bath=True)
    b = random_bath(3, seed=42, names=("B1", "B2"), h_bath=True)
    for name in ("B1", "B2"):
        assert a[name].tobytes() == b[name].tobytes()
    assert a.h_bath.tobytes() == b.h_bath.tobytes()
    c = random_bath(3, seed=43, names=("B1", "B2"))
    assert not np.allclose(a["B1"], c["B1"])


def test_random_bath_properties():
    bath = random_bath(4, norm_bound=0.5, seed=1, names=("B1", "B2"))
    for op in bath.operators.values():
        assert np.isclose(np.linalg.norm(op, 2), 0.5)
    assert np.linalg.norm(commutator(bath["B1"], bath["B2"])) > 1e-3
    assert np.allclose(bath.initial_state, np.eye(4) / 4)
    diag = random_bath(4, seed=1, names=("B1", "B2"), commuting=True)
    assert np.allclose(commutator(diag["B1"], diag["B2"]), 0)


def test_pure_initial_state():
    bath = random_bath(3, seed=2, initial="pure")
    assert np.isclose(np.trace(bath.initial_state @ bath.initial_state).real, 1)
    with pytest.raises(ValueError):
        random_bath(3, seed=2, initial="thermal")


def test_bath_spec_validation_and_lookup():
    with pytest.raises(ValueError):
        BathSpec(2, {"B": np.array([[0, 1], [0, 0]])}, np.eye(2) / 2)
    bath = random_bath(2, seed=0)
    with pytest.raises(KeyError, match="have"):
        bath["B7"]


def test_bath_config_round_trip():
    bath = random_bath(3, seed=9, names=("B1", "B2"), commuting=True)
    again = BathSpec.from_dict(bath.to_dict())
    assert again["B2"].tobytes() == bath["B2"].tobytes()


def test_deph2_split_reassembles(bath2):
    h = dephasing_hamiltonian(2, bath2)
    col, dif = deph2_split(bath2)
    assert op_distance(col + dif, h) < 1e-14


def test_collective_dephasing_structure():
    bath = random_bath(2, seed=3)
    h = collective_dephasing(3, bath)
    assert len(h) == 3 and h.is_hermitian()


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_block_split_identities(n):
    bath = random_bath(2, seed=n, names=tuple(f"B{q + 1}" for q in range(n)))
    h = dephasing_hamiltonian(n, bath)
    sp = dephasing_block_split(n, bath)
    assert op_distance(sp.pair_sum + sp.pair_diff, h) < 1e-13
    assert op_distance(sp.block_sum + sp.block_diff, sp.pair_sum) < 1e-13


def test_block_split_needs_even_n():
    with pytest.raises(ValueError):
        dephasing_block_split(3, random_bath(2, names=("B1", "B2", "B3")))


def test_with_bath_hamiltonian():
    bath = random_bath(2, seed=4, names=("B1", "B2"), h_bath=True)
    h = dephasing_hamiltonian(2, bath)
    full = with_bath_hamiltonian(h, bath)
    assert np.allclose(full.dense() - h.dense(), np.kron(np.eye(4), bath.h_bath))


def test_generic_coupling_covers_all_paulis():
    h = generic_coupling(2, 2, seed=1)
    assert len(h) == 16 and h.is_hermitian()
    assert len(generic_coupling(2, 2, seed=1, include_identity=False)) == 15


@pytest.mark.parametrize("alpha", [0.0, 0.1, math.log(2), 1.0, 3.0])
def test_gaussian_dephasing_matches_quadrature(alpha):
    a, b = 0.6, 0.8j
    rho = gaussian_dephase(a, b, alpha)
    assert np.max(np.abs(rho - gaussian_dephase_quadrature(a, b, alpha))) < 1e-8
    assert np.isclose(abs(rho[0, 1]), abs(a * np.conj(b)) * math.exp(-alpha))
    assert np.isclose(np.trace(rho), 1)


def test_gaussian_dephasing_input_checks():
    with pytest.raises(ValueError):
        gaussian_dephase(1, 1, 0.5)
    with pytest.raises(ValueError):
        gaussian_dephase(1, 0, -0.1)
