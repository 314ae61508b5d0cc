"""Collective-dephasing DFS codes, encoded logical operators and the two-qubit error classes."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Union

import numpy as np

from .operators import (OperatorSum, PauliString, all_pauli_strings, dense_of, ket)


@dataclass(frozen=True)
class DfsCode:
    """Span of the K-bit strings whose (#0 - #1) equals ``lam``."""

    n_qubits: int
    lam: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def isometry(self) -> np.ndarray:
        """Columns are the code basis vectors, shape ``(2**K, dim)``."""
        return np.column_stack([ket(b) for b in self.basis])

    @cached_property
    def projector(self) -> np.ndarray:
        v = self.isometry
        return v @ v.conj().T

    def restrict(self, op, bath_dim: int = 1) -> np.ndarray:
        """Block ``V^dag op V`` on the code (times the bath, if any)."""
        v = np.kron(self.isometry, np.eye(bath_dim))
        return v.conj().T @ dense_of(op) @ v

    def leakage_norm(self, op, bath_dim: int = 1) -> float:
        """``||(1 - P) op P||_2``: how far ``op`` maps code states out of the code."""
        p = np.kron(self.projector, np.eye(bath_dim))
        m = dense_of(op)
        return float(np.linalg.norm((np.eye(m.shape[0]) - p) @ m @ p, ord=2))

    def encode(self, amplitudes) -> np.ndarray:
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.shape != (self.dim,):
            raise ValueError(f"need {self.dim} amplitudes, got shape {amplitudes.shape}")
        return self.isometry @ amplitudes


def make_dfs(n_qubits: int, lam: int) -> DfsCode:
    """Build DFS_K(lambda); the basis is listed in lexicographic order."""
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    if (n_qubits + lam) % 2 or not 0 <= (n_qubits + lam) // 2 <= n_qubits:
        raise ValueError(f"no {n_qubits}-bit strings with #0 - #1 = {lam}")
    basis = tuple("".join(bits) for bits in itertools.product("01", repeat=n_qubits)
                  if bits.count("0") - bits.count("1") == lam)
    assert len(basis) == comb(n_qubits, (n_qubits + lam) // 2)
    return DfsCode(n_qubits, lam, basis)


def dfs_fidelity(rho: np.ndarray, code: DfsCode) -> float:
    """Population ``Tr(P rho P)`` of the code subspace."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != code.projector.shape:
        raise ValueError(f"state shape {rho.shape} does not match {code.n_qubits}-qubit code")
    return float(np.real(np.trace(code.projector @ rho)))


@dataclass(frozen=True)
class LogicalOps:
    xbar: OperatorSum
    ybar: OperatorSum
    zbar: OperatorSum
    xtilde: OperatorSum
    ytilde: OperatorSum


def _two_body(n: int, i: int, j: int, terms) -> OperatorSum:
    return OperatorSum.build(
        [(c, PauliString.embed(n, {i: a, j: b}), None) for c, a, b in terms], n)


def logical_ops(pair: tuple[int, int] = (0, 1), n_qubits: int | None = None) -> LogicalOps:
    """Encoded X/Y/Z of the pair code {|01>, |10>} and the operators acting on {|00>, |11>}.

    Qubit indices are 0-based; encoded qubit ``m`` lives on ``(2m, 2m+1)``.
    """
    i, j = pair
    n = max(i, j) + 1 if n_qubits is None else n_qubits
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"invalid pair {pair} for {n} qubits")
    return LogicalOps(
        xbar=_two_body(n, i, j, [(0.5, "X", "X"), (0.5, "Y", "Y")]),
        ybar=_two_body(n, i, j, [(0.5, "Y", "X"), (-0.5, "X", "Y")]),
        zbar=OperatorSum.build([(0.5, PauliString.embed(n, {i: "Z"}), None),
                                (-0.5, PauliString.embed(n, {j: "Z"}), None)], n),
        xtilde=_two_body(n, i, j, [(0.5, "X", "X"), (-0.5, "Y", "Y")]),
        ytilde=_two_body(n, i, j, [(0.5, "Y", "X"), (0.5, "X", "Y")]),
    )


class ErrorClass(str, enum.Enum):
    DFS = "DFS"
    LEAK = "Leak"
    LOGI = "Logi"


def _basis_element(pairs) -> OperatorSum:
    return OperatorSum.build([(c, PauliString(label), None) for c, label in pairs], 2)


# the 16 recombined two-qubit operators; mutually orthogonal in the trace inner product
CLASS_BASIS: tuple = (
    ("(ZI+IZ)/2", ErrorClass.DFS, _basis_element([(0.5, "ZI"), (0.5, "IZ")])),
    ("(XY+YX)/2", ErrorClass.DFS, _basis_element([(0.5, "XY"), (0.5, "YX")])),
    ("(XX-YY)/2", ErrorClass.DFS, _basis_element([(0.5, "XX"), (-0.5, "YY")])),
    ("ZZ", ErrorClass.DFS, _basis_element([(1, "ZZ")])),
    ("II", ErrorClass.DFS, _basis_element([(1, "II")])),
    *((lab, ErrorClass.LEAK, _basis_element([(1, lab)]))
      for lab in ("XI", "IX", "YI", "IY", "XZ", "ZX", "YZ", "ZY")),
    ("Xbar", ErrorClass.LOGI, _basis_element([(0.5, "XX"), (0.5, "YY")])),
    ("Ybar", ErrorClass.LOGI, _basis_element([(0.5, "YX"), (-0.5, "XY")])),
    ("Zbar", ErrorClass.LOGI, _basis_element([(0.5, "ZI"), (-0.5, "IZ")])),
)


def _basis_overlaps() -> dict:
    """factors -> list of (basis index, <b, P> / <b, b>)."""
    table = {p.factors: [] for p in all_pauli_strings(2)}
    for k, (_, _, b) in enumerate(CLASS_BASIS):
        norm = sum(abs(c) ** 2 for c, _, _ in b.terms)
        for c, p, _ in b.terms:
            table[p.factors].append((k, np.conj(c) / norm))
    return table


_OVERLAPS = _basis_overlaps()


def class_coefficients(op: Union[PauliString, OperatorSum]) -> list[tuple[str, ErrorClass, np.ndarray]]:
    """Expand a two-qubit operator (possibly with bath factors) in the class basis.

    Returns ``(name, class, bath coefficient)`` for each of the 16 basis elements;
    for system-only operators the coefficient is a 1x1 matrix.
    """
    if isinstance(op, PauliString):
        op = OperatorSum.build([(1, op, None)], op.n_qubits)
    if op.n_qubits != 2:
        raise ValueError("the error classification is defined on two qubits")
    coeffs = [np.zeros((op.bath_dim, op.bath_dim), dtype=complex) for _ in CLASS_BASIS]
    for c, p, b in op.terms:
        for k, w in _OVERLAPS[p.factors]:
            coeffs[k] = coeffs[k] + w * c * b
    return [(name, tag, coeffs[k]) for k, (name, tag, _) in enumerate(CLASS_BASIS)]


def class_norms(op: Union[PauliString, OperatorSum]) -> dict[ErrorClass, float]:
    """Largest Frobenius norm of any basis coefficient within each class."""
    out = {tag: 0.0 for tag in ErrorClass}
    for _, tag, coeff in class_coefficients(op):
        out[tag] = max(out[tag], float(np.linalg.norm(coeff)))
    return out


def class_component(op: Union[PauliString, OperatorSum], tag: ErrorClass) -> OperatorSum:
    """Projection of ``op`` onto one class (as a system (x) bath sum)."""
    if isinstance(op, PauliString):
        op = OperatorSum.build([(1, op, None)], 2)
    terms = []
    for (_, t, coeff), (_, _, b) in zip(class_coefficients(op), CLASS_BASIS):
        if t == tag:
            terms += [(c, p, coeff) for c, p, _ in b.terms]
    return OperatorSum.build(terms, 2, op.bath_dim)


def classify(op: Union[PauliString, OperatorSum], atol: float = 1e-12) -> ErrorClass:
    """Class of a two-qubit operator that lies entirely in one of DFS / Leak / Logi.

    Operators with weight in more than one class (e.g. ``ZI = (ZI+IZ)/2 + (ZI-IZ)/2``)
    raise ``ValueError``; use :func:`class_norms` for those. The zero operator is DFS.
    """
    norms = class_norms(op)
    present = [tag for tag, v in norms.items() if v > atol]
    if not present:
        return ErrorClass.DFS
    if len(present) > 1:
        raise ValueError(f"operator spans several classes: {sorted(t.value for t in present)}")
    return present[0]


def class_members(tag: ErrorClass) -> list[tuple[str, OperatorSum]]:
    return [(name, b) for name, t, b in CLASS_BASIS if t == tag]


def product_code_isometry(n_logical: int) -> np.ndarray:
    """Isometry onto the product of pair codes, logical qubit m on physical (2m, 2m+1).

    Columns follow the logical computational basis, so ``|0_L 1_L>`` maps to ``|0110>``.
    """
    cols = []
    for bits in itertools.product("01", repeat=n_logical):
        cols.append(ket("".join("01" if b == "0" else "10" for b in bits)))
    return np.column_stack(cols)
