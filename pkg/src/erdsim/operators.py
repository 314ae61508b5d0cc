"""Dense operators on system (qubits) x finite bath, plus a small Pauli-string algebra.

Conventions
-----------
* Computational basis ordered lexicographically, ``|0>`` is the +1 eigenvector of Z.
* Qubit 0 is the leftmost (most significant) Kronecker factor.
* The bath factor always sits to the right of the system factor.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence, Union

import numpy as np

DEFAULT_MAX_DIM = 2**10
DEFAULT_ATOL = 1e-10

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# single-qubit products: (a, b) -> (power of i, letter)
_MUL = {}
for _a in "IXYZ":
    _MUL[("I", _a)] = (0, _a)
    _MUL[(_a, "I")] = (0, _a)
    _MUL[(_a, _a)] = (0, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _MUL[(_a, _b)] = (1, _c)
    _MUL[(_b, _a)] = (3, _c)


class DimensionError(ValueError):
    """Raised when a dense realization would exceed the configured dimension cap."""


def max_dim() -> int:
    """Total Hilbert-space dimension cap; override with ``ERDSIM_MAX_DIM``."""
    raw = os.environ.get("ERDSIM_MAX_DIM")
    return int(raw) if raw else DEFAULT_MAX_DIM


def _check_dim(dim: int) -> None:
    cap = max_dim()
    if dim > cap:
        raise DimensionError(f"dense dimension {dim} exceeds cap {cap} (set ERDSIM_MAX_DIM)")


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis with a phase ``i**power``.

    >>> PauliString("X") * PauliString("Y")
    PauliString(factors='Z', power=1)
    """

    factors: str
    power: int = 0

    def __post_init__(self):
        if any(f not in "IXYZ" for f in self.factors):
            raise ValueError(f"invalid Pauli factors {self.factors!r}")
        object.__setattr__(self, "power", self.power % 4)

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls("I" * n_qubits)

    @classmethod
    def embed(cls, n_qubits: int, ops: dict[int, str]) -> "PauliString":
        """Place letters on given (0-based) qubits, identity elsewhere."""
        letters = ["I"] * n_qubits
        for q, letter in ops.items():
            if not 0 <= q < n_qubits:
                raise IndexError(f"qubit {q} out of range for {n_qubits} qubits")
            letters[q] = letter
        return cls("".join(letters))

    @property
    def n_qubits(self) -> int:
        return len(self.factors)

    @property
    def phase(self) -> complex:
        return (1, 1j, -1, -1j)[self.power]

    def __mul__(self, other):
        if isinstance(other, PauliString):
            return pauli_mul(self, other)
        return NotImplemented

    def __neg__(self) -> "PauliString":
        return PauliString(self.factors, self.power + 2)

    def commutes_with(self, other: "PauliString") -> bool:
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit count mismatch")
        anti = sum(a != "I" and b != "I" and a != b for a, b in zip(self.factors, other.factors))
        return anti % 2 == 0

    def dense(self) -> np.ndarray:
        _check_dim(2**self.n_qubits)
        mat = reduce(np.kron, (PAULI[f] for f in self.factors), np.eye(1, dtype=complex))
        return self.phase * mat

    def __str__(self) -> str:
        return ("", "i", "-", "-i")[self.power] + self.factors


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Product ``a * b`` with the accumulated phase."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"length mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    power = a.power + b.power
    letters = []
    for fa, fb in zip(a.factors, b.factors):
        p, c = _MUL[(fa, fb)]
        power += p
        letters.append(c)
    return PauliString("".join(letters), power)


def all_pauli_strings(n_qubits: int) -> list[PauliString]:
    return [PauliString("".join(p)) for p in itertools.product("IXYZ", repeat=n_qubits)]


def _bath_key(bath: np.ndarray) -> bytes:
    return np.ascontiguousarray(bath, dtype=complex).tobytes()


@dataclass(frozen=True, eq=False)
class OperatorSum:
    """Sum of ``coef * (system PauliString) (x) (bath operator)`` terms.

    Terms are canonical: phases are absorbed into coefficients and no two terms
    share the same (Pauli factors, bath matrix) pair. Use :meth:`build` or the
    arithmetic operators rather than the raw constructor.
    """

    terms: tuple
    n_qubits: int
    bath_dim: int = 1

    @classmethod
    def build(cls, terms: Iterable, n_qubits: int, bath_dim: int = 1) -> "OperatorSum":
        merged: dict = {}
        eye = np.eye(bath_dim, dtype=complex)
        for coef, pauli, bath in terms:
            if isinstance(pauli, str):
                pauli = PauliString(pauli)
            if pauli.n_qubits != n_qubits:
                raise ValueError(f"term on {pauli.n_qubits} qubits in a {n_qubits}-qubit sum")
            bath = eye if bath is None else np.asarray(bath, dtype=complex)
            if bath.shape != (bath_dim, bath_dim):
                raise ValueError(f"bath operator shape {bath.shape} != ({bath_dim}, {bath_dim})")
            coef = complex(coef) * pauli.phase
            key = (pauli.factors, _bath_key(bath))
            if key in merged:
                merged[key][0] += coef
            else:
                merged[key] = [coef, PauliString(pauli.factors), bath]
        kept = tuple((c, p, b) for c, p, b in merged.values() if c != 0)
        return cls(kept, n_qubits, bath_dim)

    @classmethod
    def pauli(cls, label: Union[str, PauliString], coef: complex = 1.0, bath=None) -> "OperatorSum":
        p = PauliString(label) if isinstance(label, str) else label
        dim = 1 if bath is None else np.asarray(bath).shape[0]
        return cls.build([(coef, p, bath)], p.n_qubits, dim)

    @classmethod
    def zero(cls, n_qubits: int, bath_dim: int = 1) -> "OperatorSum":
        return cls((), n_qubits, bath_dim)

    @classmethod
    def from_dense(cls, matrix: np.ndarray, n_qubits: int, bath_dim: int = 1,
                   atol: float = 0.0) -> "OperatorSum":
        """Pauli decomposition of a dense system (x) bath operator.

        Each Pauli string ``P`` gets the bath coefficient ``Tr_S[(P (x) I) M] / 2**n``.
        Coefficient matrices with max-abs entry ``<= atol`` are dropped.
        """
        ds = 2**n_qubits
        m = np.asarray(matrix, dtype=complex).reshape(ds, bath_dim, ds, bath_dim)
        terms = []
        for p in all_pauli_strings(n_qubits):
            coeff = np.einsum("ts,sbtc->bc", p.dense(), m) / ds
            if np.max(np.abs(coeff), initial=0.0) > atol:
                terms.append((1.0, p, coeff))
        return cls.build(terms, n_qubits, bath_dim)

    @property
    def system_dim(self) -> int:
        return 2**self.n_qubits

    @property
    def dim(self) -> int:
        return self.system_dim * self.bath_dim

    def _compatible(self, other: "OperatorSum") -> None:
        if (self.n_qubits, self.bath_dim) != (other.n_qubits, other.bath_dim):
            raise ValueError(
                f"incompatible sums: ({self.n_qubits}q, bath {self.bath_dim}) vs "
                f"({other.n_qubits}q, bath {other.bath_dim})")

    def __add__(self, other):
        if not isinstance(other, OperatorSum):
            return NotImplemented
        self._compatible(other)
        return OperatorSum.build(self.terms + other.terms, self.n_qubits, self.bath_dim)

    def __neg__(self):
        return (-1) * self

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, other):
        if isinstance(other, OperatorSum):
            self._compatible(other)
            prods = [(c1 * c2, pauli_mul(p1, p2), b1 @ b2)
                     for c1, p1, b1 in self.terms for c2, p2, b2 in other.terms]
            return OperatorSum.build(prods, self.n_qubits, self.bath_dim)
        if np.isscalar(other):
            return OperatorSum.build([(other * c, p, b) for c, p, b in self.terms],
                                     self.n_qubits, self.bath_dim)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        return self * (1.0 / other)

    def otimes(self, bath: np.ndarray) -> "OperatorSum":
        """Attach a bath operator to a system-only sum."""
        if self.bath_dim != 1:
            raise ValueError("sum already carries a bath factor")
        bath = np.asarray(bath, dtype=complex)
        return OperatorSum.build([(c * b[0, 0], p, bath) for c, p, b in self.terms],
                                 self.n_qubits, bath.shape[0])

    def adjoint(self) -> "OperatorSum":
        return OperatorSum.build([(np.conj(c), p, b.conj().T) for c, p, b in self.terms],
                                 self.n_qubits, self.bath_dim)

    def chop(self, atol: float = 1e-14) -> "OperatorSum":
        kept = [(c, p, b) for c, p, b in self.terms if abs(c) * np.max(np.abs(b), initial=0) > atol]
        return OperatorSum.build(kept, self.n_qubits, self.bath_dim)

    def dense(self) -> np.ndarray:
        _check_dim(self.dim)
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for c, p, b in self.terms:
            out += c * np.kron(p.dense(), b)
        return out

    def is_hermitian(self, atol: float = DEFAULT_ATOL) -> bool:
        return is_hermitian(self.dense(), atol)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        body = " + ".join(f"({c:.4g}){p.factors}" + ("" if self.bath_dim == 1 else "(x)B")
                          for c, p, _ in self.terms[:8])
        more = "" if len(self.terms) <= 8 else f" + ... ({len(self.terms)} terms)"
        return f"OperatorSum[{self.n_qubits}q, bath {self.bath_dim}]({body or '0'}{more})"


OperatorLike = Union[np.ndarray, OperatorSum, PauliString]


def dense_of(op: OperatorLike) -> np.ndarray:
    """Dense matrix of a PauliString, OperatorSum or array."""
    if isinstance(op, (OperatorSum, PauliString)):
        return op.dense()
    arr = np.asarray(op, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    _check_dim(arr.shape[0])
    return arr


def embed(op: np.ndarray, qubits: Sequence[int], n_qubits: int) -> np.ndarray:
    """Embed a dense operator on ``qubits`` (in that order) into an n-qubit register."""
    k = len(qubits)
    op = np.asarray(op, dtype=complex)
    if op.shape != (2**k, 2**k):
        raise ValueError(f"operator shape {op.shape} does not act on {k} qubits")
    if len(set(qubits)) != k or not all(0 <= q < n_qubits for q in qubits):
        raise IndexError(f"bad qubit indices {qubits} for {n_qubits} qubits")
    _check_dim(2**n_qubits)
    rest = [q for q in range(n_qubits) if q not in qubits]
    full = np.kron(op, np.eye(2 ** len(rest), dtype=complex))
    # full acts on ordering (qubits..., rest...); permute to natural order
    order = list(qubits) + rest
    perm = np.argsort(order)
    t = full.reshape([2] * (2 * n_qubits))
    t = t.transpose(list(perm) + [n_qubits + p for p in perm])
    return t.reshape(2**n_qubits, 2**n_qubits)


def is_hermitian(m: np.ndarray, atol: float = DEFAULT_ATOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= atol * max(1.0, np.max(np.abs(m), initial=0.0)))


def is_unitary(u: np.ndarray, atol: float = DEFAULT_ATOL) -> bool:
    u = np.asarray(u)
    return bool(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0])), initial=0.0) <= atol)


def op_distance(a: OperatorLike, b: OperatorLike) -> float:
    """Spectral-norm distance ``||a - b||_2``."""
    return float(np.linalg.norm(dense_of(a) - dense_of(b), ord=2))


def allclose_op(a: OperatorLike, b: OperatorLike, atol: float = DEFAULT_ATOL) -> bool:
    return op_distance(a, b) <= atol


def commutator(a: OperatorLike, b: OperatorLike) -> np.ndarray:
    a, b = dense_of(a), dense_of(b)
    return a @ b - b @ a


def anticommutator(a: OperatorLike, b: OperatorLike) -> np.ndarray:
    a, b = dense_of(a), dense_of(b)
    return a @ b + b @ a


def expm(h: OperatorLike, t: float = 1.0) -> np.ndarray:
    """``exp(-i h t)`` for Hermitian ``h`` via eigendecomposition."""
    m = dense_of(h)
    if not is_hermitian(m):
        raise ValueError("expm requires a Hermitian generator")
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def ket(bits: str) -> np.ndarray:
    """Computational basis state for a bitstring such as ``'01'``."""
    vec = np.zeros(2 ** len(bits), dtype=complex)
    vec[int(bits, 2)] = 1.0
    return vec


def density(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def state_fidelity(psi: np.ndarray, rho: np.ndarray) -> float:
    """``<psi|rho|psi>`` for a pure reference state."""
    psi = np.asarray(psi, dtype=complex)
    return float(np.real(psi.conj() @ rho @ psi))


def is_density_matrix(rho: np.ndarray, atol: float = 1e-10) -> bool:
    rho = np.asarray(rho)
    if not is_hermitian(rho, atol) or abs(np.trace(rho) - 1) > atol:
        return False
    return bool(np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() >= -atol)


def partial_trace_bath(rho: np.ndarray, system_dim: int, bath_dim: int) -> np.ndarray:
    """Trace out the bath (right-hand) factor of a system (x) bath operator."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (system_dim * bath_dim,) * 2:
        raise ValueError(f"shape {rho.shape} does not factor as {system_dim} x {bath_dim}")
    return np.einsum("sbtb->st", rho.reshape(system_dim, bath_dim, system_dim, bath_dim))


def evolve_reduced(u: np.ndarray, rho_s: np.ndarray, rho_b: np.ndarray) -> np.ndarray:
    """``Tr_B[U (rho_S (x) rho_B) U^dag]`` for an initially uncorrelated system and bath."""
    ds, db = rho_s.shape[0], rho_b.shape[0]
    joint = u @ np.kron(rho_s, rho_b) @ u.conj().T
    return partial_trace_bath(joint, ds, db)
