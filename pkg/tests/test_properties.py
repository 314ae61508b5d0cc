"""Randomized invariants over operators, codes, sequences and averaging."""
import numpy as np
from hypothesis import given, settings, strategies as st

from erdsim.decoupling import collective_target, run_sequence, seq_parity_kick
from erdsim.dfs import ErrorClass, class_component, make_dfs
from erdsim.noise import dephasing_hamiltonian, gaussian_dephase, random_bath
from erdsim.offres import average_step
from erdsim.operators import OperatorSum, PauliString, expm, is_density_matrix, op_distance
from erdsim.verification import geometric_grid

paulis = st.text(alphabet="IXYZ", min_size=1, max_size=4)
seeds = st.integers(0, 2**32 - 1)
finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)

SETTINGS = settings(max_examples=40, deadline=None)


@SETTINGS
@given(st.data())
def test_pauli_product_matches_dense(data):
    a = data.draw(paulis)
    b = PauliString(data.draw(st.text(alphabet="IXYZ", min_size=len(a), max_size=len(a))))
    a = PauliString(a, data.draw(st.integers(0, 3)))
    assert np.allclose((a * b).dense(), a.dense() @ b.dense())


@SETTINGS
@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_from_dense_round_trip(seed, n, d):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((2**n * d,) * 2) + 1j * rng.standard_normal((2**n * d,) * 2)
    assert np.allclose(OperatorSum.from_dense(m, n, d).dense(), m)


@SETTINGS
@given(seeds, finite, finite)
def test_expm_is_a_one_parameter_group(seed, a, b):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = x + x.conj().T
    assert op_distance(expm(h, a) @ expm(h, b), expm(h, a + b)) < 1e-9


@SETTINGS
@given(st.integers(1, 10), st.data())
def test_dfs_dimension_is_binomial(k, data):
    lam = data.draw(st.sampled_from(range(-k, k + 1, 2)))
    code = make_dfs(k, lam)
    assert all(b.count("0") - b.count("1") == lam for b in code.basis)
    assert np.allclose(code.isometry.conj().T @ code.isometry, np.eye(code.dim))


@SETTINGS
@given(seeds, st.floats(0.01, 20))
def test_parity_kick_exact_for_any_bath_and_time(seed, tau):
    bath = random_bath(2, seed=seed, names=("B1", "B2"))
    target = collective_target((bath["B1"] + bath["B2"]) / 2, tau)
    assert op_distance(run_sequence(seq_parity_kick(tau), dephasing_hamiltonian(2, bath)), target) < 1e-9


@SETTINGS
@given(seeds)
def test_class_components_are_hermitian_projections(seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    h = OperatorSum.from_dense(x + x.conj().T, 2, 2)
    for tag in ErrorClass:
        part = class_component(h, tag)
        assert part.is_hermitian()
        assert op_distance(class_component(part, tag), part) < 1e-12


@SETTINGS
@given(seeds, st.lists(st.floats(-10, 10, allow_nan=False), min_size=4, max_size=4, unique=True),
       st.sampled_from([(0, 2), (0, 3), (1, 2), (1, 3)]))
def test_averaging_step_invariants(seed, energies, target):
    i, j = target
    if abs(energies[i] - energies[j]) < 1e-3:
        return
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = np.diag(energies) + (x + x.conj().T) / 4
    h[1, 3] = h[3, 1] = 0
    out, _ = average_step(h, energies, target)
    assert np.array_equal(np.diag(out), np.diag(h))
    assert np.allclose(out, out.conj().T, atol=1e-14)
    assert out[i, j] == 0 and out[1, 3] == 0
    assert np.all(np.abs(out) <= np.abs(h) + 1e-15)


@SETTINGS
@given(st.floats(0, 1), st.floats(-np.pi, np.pi), st.floats(0, 50))
def test_dephasing_channel_gives_states(p, phase, alpha):
    a, b = np.sqrt(p), np.sqrt(1 - p) * np.exp(1j * phase)
    rho = gaussian_dephase(a, b, alpha)
    assert is_density_matrix(rho)


@SETTINGS
@given(st.floats(1e-6, 1.0), st.floats(1.5, 1e3), st.integers(1, 16))
def test_geometric_grid_endpoints(start, ratio, per_decade):
    grid = geometric_grid(start, start * ratio, per_decade)
    assert np.isclose(grid[0], start) and np.isclose(grid[-1], start * ratio)
    assert np.all(np.diff(grid) > 0)
