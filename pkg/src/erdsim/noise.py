"""System-bath dephasing Hamiltonians, seeded finite baths and the Gaussian random-phase channel."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate

from .operators import OperatorSum, PauliString, all_pauli_strings, is_density_matrix, is_hermitian


@dataclass(frozen=True, eq=False)
class BathSpec:
    """Finite bath: named Hermitian operators, an initial state and an optional ``H_B``."""

    dim: int
    operators: dict
    initial_state: np.ndarray
    h_bath: Optional[np.ndarray] = None
    seed: Optional[int] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, op in self.operators.items():
            if np.shape(op) != (self.dim, self.dim) or not is_hermitian(op):
                raise ValueError(f"bath operator {name!r} must be a Hermitian {self.dim}x{self.dim} matrix")
        if self.h_bath is not None and not is_hermitian(self.h_bath):
            raise ValueError("H_B must be Hermitian")
        if not is_density_matrix(self.initial_state):
            raise ValueError("initial bath state is not a density matrix")

    def __getitem__(self, name: str) -> np.ndarray:
        try:
            return self.operators[name]
        except KeyError:
            raise KeyError(f"bath has no operator {name!r} (have {sorted(self.operators)})") from None

    def to_dict(self) -> dict:
        """Config form; only seeded baths round-trip."""
        if self.seed is None:
            raise ValueError("only seeded baths are serializable")
        return {"dim": self.dim, "seed": self.seed, **self.params}

    @classmethod
    def from_dict(cls, cfg: dict) -> "BathSpec":
        cfg = dict(cfg)
        return random_bath(cfg.pop("dim", 2), seed=cfg.pop("seed"), **cfg)


def _random_hermitian(rng: np.random.Generator, dim: int, norm_bound: float) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = (a + a.conj().T) / 2
    nrm = np.linalg.norm(h, ord=2)
    return h * (norm_bound / nrm) if nrm > 0 else h


def _random_diagonal(rng: np.random.Generator, dim: int, norm_bound: float) -> np.ndarray:
    d = rng.standard_normal(dim)
    nrm = np.max(np.abs(d))
    return np.diag(d * (norm_bound / nrm) if nrm > 0 else d).astype(complex)


def random_bath(dim: int = 2, norm_bound: float = 1.0, seed: int = 0,
                names=("Bz",), h_bath: bool = False, initial: str = "mixed",
                commuting: bool = False) -> BathSpec:
    """Seeded random bath with operators of spectral norm ``norm_bound``.

    Uses numpy's PCG64 bit generator; identical arguments give bitwise identical
    operators. ``initial`` is ``"mixed"`` (I/d) or ``"pure"`` (a seeded random pure state).
    ``commuting=True`` draws diagonal operators, so all of them (but not ``H_B``) commute.
    """
    if dim < 1:
        raise ValueError("bath dimension must be >= 1")
    if norm_bound < 0:
        raise ValueError("norm bound must be non-negative")
    rng = np.random.Generator(np.random.PCG64(seed))
    draw = _random_diagonal if commuting else _random_hermitian
    ops = {name: draw(rng, dim, norm_bound) for name in names}
    hb = _random_hermitian(rng, dim, norm_bound) if h_bath else None
    if initial == "mixed":
        rho = np.eye(dim, dtype=complex) / dim
    elif initial == "pure":
        psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        psi /= np.linalg.norm(psi)
        rho = np.outer(psi, psi.conj())
    else:
        raise ValueError(f"unknown initial bath state {initial!r}")
    params = {"norm_bound": norm_bound, "names": list(names), "h_bath": h_bath, "initial": initial,
              "commuting": commuting}
    return BathSpec(dim, ops, rho, hb, seed, params)


def _z(n: int, q: int) -> PauliString:
    return PauliString.embed(n, {q: "Z"})


def collective_dephasing(n_qubits: int, bath: BathSpec, name: str = "Bz") -> OperatorSum:
    """``sum_j Z_j (x) B`` with one bath operator shared by all qubits."""
    b = bath[name]
    return OperatorSum.build([(1.0, _z(n_qubits, q), b) for q in range(n_qubits)], n_qubits, bath.dim)


def dephasing_hamiltonian(n_qubits: int, bath: BathSpec, prefix: str = "B") -> OperatorSum:
    """``sum_i Z_i (x) B_i`` with independent bath operators ``B1 .. BN``."""
    return OperatorSum.build([(1.0, _z(n_qubits, q), bath[f"{prefix}{q + 1}"]) for q in range(n_qubits)],
                             n_qubits, bath.dim)


def deph2_split(bath: BathSpec, names=("B1", "B2")) -> tuple[OperatorSum, OperatorSum]:
    """Split ``Z1 B1 + Z2 B2`` into ``(Z1+Z2) B_col`` and ``(Z1-Z2) B_dif``."""
    b1, b2 = bath[names[0]], bath[names[1]]
    col, dif = (b1 + b2) / 2, (b1 - b2) / 2
    collective = OperatorSum.build([(1, "ZI", col), (1, "IZ", col)], 2, bath.dim)
    differential = OperatorSum.build([(1, "ZI", dif), (-1, "IZ", dif)], 2, bath.dim)
    return collective, differential


@dataclass(frozen=True, eq=False)
class BlockSplit:
    """Two-level rewrite of ``sum_i Z_i B_i``.

    ``pair_sum + pair_diff`` is the original Hamiltonian; ``block_sum + block_diff``
    equals ``pair_sum`` (pairs not covered by a 4-block stay in ``block_sum``).
    """

    pair_sum: OperatorSum
    pair_diff: OperatorSum
    block_sum: OperatorSum
    block_diff: OperatorSum
    pair_plus: tuple
    pair_minus: tuple


def dephasing_block_split(n_qubits: int, bath: BathSpec, prefix: str = "B") -> BlockSplit:
    """Nearest-neighbour sums/differences, then sums/differences over blocks of four.

    With 0-based pairs ``(2j, 2j+1)``: ``B+_j = (B_2j+1 + B_2j)/2`` and
    ``B-_j = (B_2j+1 - B_2j)/2`` multiply ``Z_2j+1 + Z_2j`` and ``Z_2j+1 - Z_2j``.
    Pairs ``(2b, 2b+1)`` are then combined into blocks with ``B++ = (B+_2b+1 + B+_2b)/2``
    and ``B+- = (B+_2b+1 - B+_2b)/2``.
    """
    n = n_qubits
    if n % 2 or n < 2:
        raise ValueError("block split needs an even number of qubits")
    bs = [bath[f"{prefix}{q + 1}"] for q in range(n)]
    d = bath.dim
    plus = tuple((bs[2 * j + 1] + bs[2 * j]) / 2 for j in range(n // 2))
    minus = tuple((bs[2 * j + 1] - bs[2 * j]) / 2 for j in range(n // 2))
    pair_sum = OperatorSum.build([(1, _z(n, q), plus[j]) for j in range(n // 2) for q in (2 * j, 2 * j + 1)], n, d)
    pair_diff = OperatorSum.build([(s, _z(n, q), minus[j]) for j in range(n // 2)
                                   for q, s in ((2 * j + 1, 1), (2 * j, -1))], n, d)
    block_sum_terms, block_diff_terms = [], []
    for b in range(n // 4):
        lo, hi = plus[2 * b], plus[2 * b + 1]
        pp, pm = (hi + lo) / 2, (hi - lo) / 2
        qs = range(4 * b, 4 * b + 4)
        block_sum_terms += [(1, _z(n, q), pp) for q in qs]
        # (Z_4b+3 - Z_4b+1) + (Z_4b+2 - Z_4b)
        block_diff_terms += [(s, _z(n, q), pm) for q, s in zip(qs, (-1, -1, 1, 1))]
    if n % 4:
        j = n // 2 - 1
        block_sum_terms += [(1, _z(n, q), plus[j]) for q in (2 * j, 2 * j + 1)]
    return BlockSplit(pair_sum, pair_diff,
                      OperatorSum.build(block_sum_terms, n, d), OperatorSum.build(block_diff_terms, n, d),
                      plus, minus)


def generic_coupling(n_qubits: int, bath_dim: int = 2, seed: int = 0, norm_bound: float = 1.0,
                     include_identity: bool = True) -> OperatorSum:
    """``sum_P P (x) B_P`` over every Pauli string with independent seeded bath operators."""
    paulis = [p for p in all_pauli_strings(n_qubits) if include_identity or set(p.factors) != {"I"}]
    bath = random_bath(bath_dim, norm_bound, seed, names=tuple(p.factors for p in paulis))
    return OperatorSum.build([(1.0, p, bath[p.factors]) for p in paulis], n_qubits, bath_dim)


def with_bath_hamiltonian(h: OperatorSum, bath: BathSpec) -> OperatorSum:
    """Add ``I_S (x) H_B`` when the bath carries one."""
    if bath.h_bath is None:
        return h
    return h + OperatorSum.build([(1, PauliString.identity(h.n_qubits), bath.h_bath)], h.n_qubits, bath.dim)


# ---------------------------------------------------------------- Gaussian phase channel

def _check_qubit_state(a: complex, b: complex) -> None:
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1) > 1e-12:
        raise ValueError("state amplitudes must satisfy |a|^2 + |b|^2 = 1")


def gaussian_dephase(a: complex, b: complex, alpha: float) -> np.ndarray:
    """Average of ``R_z(phi) |psi><psi| R_z(phi)^dag`` over ``phi ~ N(0, 2 alpha)``.

    ``R_z(phi) = diag(1, e^{i phi})``; the coherence decays as ``a b* e^{-alpha}``.
    """
    _check_qubit_state(a, b)
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    damp = np.exp(-alpha)
    return np.array([[abs(a) ** 2, a * np.conj(b) * damp],
                     [np.conj(a) * b * damp, abs(b) ** 2]], dtype=complex)


def gaussian_dephase_quadrature(a: complex, b: complex, alpha: float) -> np.ndarray:
    """Numerical-integration oracle for :func:`gaussian_dephase` (testing only)."""
    _check_qubit_state(a, b)
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    rho0 = np.array([[abs(a) ** 2, a * np.conj(b)], [np.conj(a) * b, abs(b) ** 2]], dtype=complex)
    if alpha == 0:
        return rho0
    width = 6 * np.sqrt(2 * alpha)

    def weight(phi):
        return np.exp(-phi**2 / (4 * alpha)) / np.sqrt(4 * np.pi * alpha)

    # <e^{-i phi}> for the (0,1) entry; the imaginary part vanishes by symmetry but is integrated anyway
    re, _ = integrate.quad(lambda p: weight(p) * np.cos(p), -width, width, epsabs=1e-14, epsrel=1e-12, limit=200)
    im, _ = integrate.quad(lambda p: -weight(p) * np.sin(p), -width, width, epsabs=1e-14, epsrel=1e-12, limit=200)
    mass, _ = integrate.quad(weight, -width, width, epsabs=1e-14, epsrel=1e-12, limit=200)
    c = re + 1j * im
    return np.array([[rho0[0, 0] * mass, rho0[0, 1] * c],
                     [rho0[1, 0] * np.conj(c), rho0[1, 1] * mass]], dtype=complex)
