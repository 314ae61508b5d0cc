"""Phase-controlled two-qubit gates, their DFS restrictions, and exchange-Hamiltonian recoupling."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .dfs import logical_ops, make_dfs, product_code_isometry
from .operators import (OperatorSum, PauliString, commutator, dense_of, expm, op_distance)
from .pulses import Pulse, PulseSequence
from .verification import VerificationReport

LOGICAL = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1.0, -1.0]).astype(complex),
}


def x_phi(phi: float, qubit: int = 0, n_qubits: int = 1) -> OperatorSum:
    """``X cos(phi) + Y sin(phi)`` on one qubit of an n-qubit register."""
    return OperatorSum.build([(np.cos(phi), PauliString.embed(n_qubits, {qubit: "X"}), None),
                              (np.sin(phi), PauliString.embed(n_qubits, {qubit: "Y"}), None)],
                             n_qubits)


def xbar_phi(dphi: float, pair=(0, 1), n_qubits: int | None = None) -> OperatorSum:
    """Encoded ``Xbar cos(dphi) + Ybar sin(dphi)``."""
    ops = logical_ops(pair, n_qubits)
    return np.cos(dphi) * ops.xbar + np.sin(dphi) * ops.ybar


@dataclass(frozen=True)
class PhaseGateSpec:
    theta: float
    phi_i: float
    phi_j: float
    qubits: tuple = (0, 1)

    @property
    def delta_phi(self) -> float:
        return self.phi_i - self.phi_j

    @property
    def sum_phi(self) -> float:
        return self.phi_i + self.phi_j


def gate_generator(spec: PhaseGateSpec, n_qubits: int | None = None) -> OperatorSum:
    i, j = spec.qubits
    n = max(i, j) + 1 if n_qubits is None else n_qubits
    return x_phi(spec.phi_i, i, n) * x_phi(spec.phi_j, j, n)


def u_ij(spec: PhaseGateSpec, n_qubits: int | None = None) -> np.ndarray:
    """Physical gate ``exp(i theta X_phi_i X_phi_j)``."""
    return expm(gate_generator(spec, n_qubits), -spec.theta)


def ubar(theta: float, dphi: float, pair=(0, 1), n_qubits: int | None = None) -> np.ndarray:
    """Encoded gate ``exp(i theta Xbar_dphi)`` as a full-register unitary.

    It coincides with :func:`u_ij` on the code and is the identity on ``{|00>, |11>}``;
    this is the form in which ``exp(i pi Xbar) = Z Z`` holds.
    """
    return expm(xbar_phi(dphi, pair, n_qubits), -theta)


def zbar_rotation(theta: float, pair=(0, 1), n_qubits: int | None = None) -> PulseSequence:
    """Three-gate construction of ``exp(i theta Zbar)`` from X-type encoded gates."""
    return PulseSequence([
        Pulse(ubar(np.pi / 4, np.pi / 2, pair, n_qubits), "Ubar(pi/4,pi/2)"),
        Pulse(ubar(theta, 0.0, pair, n_qubits), f"Ubar({theta:.6g},0)"),
        Pulse(ubar(-np.pi / 4, np.pi / 2, pair, n_qubits), "Ubar(-pi/4,pi/2)"),
    ])


def u4(phis) -> np.ndarray:
    """Four-qubit entangler ``exp(-i pi/4 X_phi1 X_phi2 X_phi3 X_phi4)``."""
    if len(phis) != 4:
        raise ValueError("u4 takes four laser phases")
    gen = reduce(lambda a, b: a * b, (x_phi(p, q, 4) for q, p in enumerate(phis)))
    return expm(gen, np.pi / 4)


def u4_encoded(dphi12: float, dphi34: float) -> np.ndarray:
    """Ideal restriction ``exp(-i pi/4 Xbar_dphi12 (x) Xbar_dphi34)`` on two encoded qubits."""
    a = np.cos(dphi12) * LOGICAL["X"] + np.sin(dphi12) * LOGICAL["Y"]
    b = np.cos(dphi34) * LOGICAL["X"] + np.sin(dphi34) * LOGICAL["Y"]
    return expm(np.kron(a, b), np.pi / 4)


def restrict_to_pairs(op, n_logical: int) -> np.ndarray:
    """Block of ``op`` on the product of pair codes (2 physical qubits per logical qubit)."""
    v = product_code_isometry(n_logical)
    return v.conj().T @ dense_of(op) @ v


def conjugate_by(a, b) -> np.ndarray:
    """``exp(-i a pi/2) b exp(i a pi/2)`` as a dense matrix.

    For an su(2) pair this flips the sign of ``b``:
    ``exp(-i a pi/2) exp(i b) exp(i a pi/2) = exp(-i b)``.
    """
    ea = expm(a, np.pi / 2)
    return ea @ dense_of(b) @ ea.conj().T


def conjugate_by_sum(a: OperatorSum, b: OperatorSum) -> OperatorSum:
    """Same as :func:`conjugate_by`, returned in the Pauli basis."""
    return OperatorSum.from_dense(conjugate_by(a, b), b.n_qubits, b.bath_dim, atol=1e-13)


# ---------------------------------------------------------------- exchange models

_MODELS = ("Heisenberg", "XY", "XXZ")


@dataclass(frozen=True)
class ExchangeHamiltonian:
    """``sum_ij sum_a J^a_ij s^a_i s^a_j + sum_i eps_i Z_i / 2`` on ``n_qubits`` spins.

    ``couplings`` maps a 0-based pair ``(i, j)`` to ``(Jx, Jy, Jz)``.
    """

    model: str
    n_qubits: int
    couplings: dict = field(default_factory=dict)
    eps: tuple = ()

    def __post_init__(self):
        if self.model not in _MODELS:
            raise ValueError(f"unknown exchange model {self.model!r}; expected one of {_MODELS}")
        if self.eps and len(self.eps) != self.n_qubits:
            raise ValueError("need one single-particle energy per qubit")
        for (i, j), (jx, jy, jz) in self.couplings.items():
            if not (0 <= i < j < self.n_qubits):
                raise ValueError(f"bad coupling pair {(i, j)}")
            if self.model == "Heisenberg" and not (jx == jy == jz):
                raise ValueError(f"Heisenberg coupling on {(i, j)} must be isotropic")
            if self.model == "XY" and not (jx == jy and jz == 0):
                raise ValueError(f"XY coupling on {(i, j)} needs Jx = Jy and Jz = 0")
            if self.model == "XXZ" and not (abs(jx) == abs(jy) and jx != jz):
                raise ValueError(f"XXZ coupling on {(i, j)} needs Jx = +-Jy != Jz")

    def free(self) -> OperatorSum:
        n = self.n_qubits
        return OperatorSum.build([(e / 2, PauliString.embed(n, {i: "Z"}), None)
                                  for i, e in enumerate(self.eps)], n)

    def raw(self) -> OperatorSum:
        """Exchange terms written as ``sum_a J^a s^a s^a`` plus the Zeeman part."""
        n = self.n_qubits
        terms = [(J, PauliString.embed(n, {i: a, j: a}), None)
                 for (i, j), js in self.couplings.items() for a, J in zip("XYZ", js)]
        return OperatorSum.build(terms, n) + self.free()

    def decomposed(self) -> OperatorSum:
        """Same Hamiltonian as ``J- R^x + J+ T^x + Jz ZZ`` plus the Zeeman part."""
        n = self.n_qubits
        out = self.free()
        for (i, j), (jx, jy, jz) in self.couplings.items():
            ops = logical_ops((i, j), n)
            out = out + (jx - jy) * ops.xtilde + (jx + jy) * ops.xbar
            out = out + OperatorSum.pauli(PauliString.embed(n, {i: "Z", j: "Z"}), jz)
        return out

    @classmethod
    def xxz_pairs(cls, eps, j_plus, j_z_intra, j_z_inter) -> "ExchangeHamiltonian":
        """Chain of DFS pairs: XXZ intra-pair couplings, Ising-only couplings between pairs."""
        n = len(eps)
        if n % 2:
            raise ValueError("need an even number of spins")
        couplings = {}
        for m in range(n // 2):
            couplings[(2 * m, 2 * m + 1)] = (j_plus[m] / 2, j_plus[m] / 2, j_z_intra[m])
            if m + 1 < n // 2:
                couplings[(2 * m + 1, 2 * m + 2)] = (0.0, 0.0, j_z_inter[m])
        return cls("XXZ", n, couplings, tuple(eps))


def _su2_report(tx, tz, ty) -> float:
    """``||[T^x, T^z] + 2i T^y||``: zero when (x, y, z) close su(2)."""
    return float(np.linalg.norm(commutator(tx, tz) + 2j * dense_of(ty), ord=2))


def xxz_recoupling_demo(h: ExchangeHamiltonian) -> VerificationReport:
    """Certify encoded selective recoupling for a chain of DFS pairs.

    Checks that (a) on the code the physical Hamiltonian equals
    ``sum_m eps-_m T^z_m - Jz T^z_m T^z_m+1 + J+_m T^x_m`` up to a constant, and
    (b) conjugation by ``T^x_1`` flips ``T^z_1`` and ``T^z_1 T^z_2`` while leaving
    ``T^x_1`` alone.
    """
    if h.model != "XXZ":
        raise ValueError(f"recoupling demo needs an XXZ Hamiltonian, got {h.model}")
    n, n_log = h.n_qubits, h.n_qubits // 2
    eps = h.eps or (0.0,) * n
    t = [logical_ops((2 * m, 2 * m + 1), n) for m in range(n_log)]
    eps_minus, j_plus, const = [], [], 0.0
    for m in range(n_log):
        jx, jy, jz = h.couplings.get((2 * m, 2 * m + 1), (0.0, 0.0, 0.0))
        if jx != jy:
            raise ValueError("recoupling demo assumes J- = 0 inside each pair")
        eps_minus.append((eps[2 * m] - eps[2 * m + 1]) / 2)
        j_plus.append(jx + jy)
        const -= jz
    for (i, j), (jx, jy, _) in h.couplings.items():
        if (i // 2 != j // 2) and (jx or jy):
            raise ValueError("couplings between pairs must be Ising-only")

    single = [eps_minus[m] * t[m].zbar for m in range(n_log)]
    hop = [j_plus[m] * t[m].xbar for m in range(n_log)]
    ising = []
    for m in range(n_log - 1):
        jz = h.couplings.get((2 * m + 1, 2 * m + 2), (0.0, 0.0, 0.0))[2]
        ising.append(-jz * (t[m].zbar * t[m + 1].zbar))
    h_enc = reduce(lambda a, b: a + b, single + hop + ising)

    rep = VerificationReport(metadata={"model": h.model, "n_qubits": n})
    on_code = restrict_to_pairs(h.raw(), n_log) - const * np.eye(2**n_log)
    rep.distances["code_form"] = float(np.linalg.norm(on_code - restrict_to_pairs(h_enc, n_log), ord=2))
    rep.distances["decomposition"] = op_distance(h.raw(), h.decomposed())

    tx1 = t[0].xbar
    flips = {"single_T1z": (single[0], -1), "hop_T1x": (hop[0], +1)}
    if ising:
        flips["ising_T1zT2z"] = (ising[0], -1)
    if n_log > 1:
        flips["single_T2z"] = (single[1], +1)
    for name, (term, sign) in flips.items():
        rep.distances["flip_" + name] = op_distance(conjugate_by(tx1, term), sign * dense_of(term))
    rep.distances["su2_T1"] = _su2_report(t[0].xbar, t[0].zbar, t[0].ybar)
    rep.operator_distance = max(rep.distances.values())
    p = product_code_projector(n_log)
    u = expm(tx1, np.pi / 2)
    rep.leakage_norm = float(np.linalg.norm((np.eye(2**n) - p) @ u @ p, ord=2))
    rep.check("max_distance", rep.operator_distance, 1e-10)
    return rep


def xy_universality_demo(theta: float = 0.37) -> VerificationReport:
    """Two-step conjugation chain that produces an encoded ZZ from XY couplings.

    Uses qubits 0, 1, 2 of a 4-qubit register holding encoded qubits (0, 1), (2, 3).
    """
    n = 4
    t01 = logical_ops((0, 1), n).xbar
    t12 = logical_ops((1, 2), n).xbar
    t02 = logical_ops((0, 2), n).xbar
    z = {q: OperatorSum.pauli(PauliString.embed(n, {q: "Z"})) for q in range(n)}

    step1 = conjugate_by(t01, t12)
    claim1 = 1j * dense_of(z[0] * z[1] * t02)
    step2 = conjugate_by(0.5 * t02, step1)
    claim2 = dense_of(z[1] * (z[2] - z[0])) / 2

    rep = VerificationReport(metadata={"theta": theta})
    rep.distances["C_T01(T12) = i Z0 Z1 T02"] = float(np.linalg.norm(step1 - claim1, ord=2))
    rep.distances["C_T02/2(step1) = Z1(Z2 - Z0)/2"] = float(np.linalg.norm(step2 - claim2, ord=2))

    # unitary form of the same chain
    e01, e02 = expm(t01, np.pi / 2), expm(t02, np.pi / 4)
    chain = e02 @ e01 @ expm(t12, -theta) @ e01.conj().T @ e02.conj().T
    rep.distances["unitary_chain"] = float(np.linalg.norm(chain - expm(claim2, -theta), ord=2))

    # on the code: Z0 Z1 -> -1 and Z1 Z2 -> -Zbar (x) Zbar
    zz = np.kron(LOGICAL["Z"], LOGICAL["Z"])
    block = restrict_to_pairs(claim2, 2)
    rep.distances["encoded_ZZ"] = float(np.linalg.norm(block - (np.eye(4) - zz) / 2, ord=2))
    code = make_dfs(2, 0)
    rep.distances["Z0Z1_on_code"] = float(np.linalg.norm(
        code.restrict(PauliString("ZZ")) + np.eye(2), ord=2))
    rep.leakage_norm = float(np.linalg.norm(
        (np.eye(16) - product_code_projector(2)) @ claim2 @ product_code_projector(2), ord=2))
    rep.operator_distance = max(rep.distances.values())
    rep.check("max_distance", rep.operator_distance, 1e-10)
    return rep


def product_code_projector(n_logical: int) -> np.ndarray:
    v = product_code_isometry(n_logical)
    return v @ v.conj().T
