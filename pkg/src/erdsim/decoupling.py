"""Bang-bang decoupling: exact sequence evolution, toggling frames, first-order averaging,
and the encoded pulse-sequence library.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .dfs import logical_ops
from .gates import gate_generator, PhaseGateSpec, ubar
from .operators import OperatorSum, dense_of, expm, is_unitary, op_distance
from .pulses import Free, Pulse, PulseSequence
from .verification import fit_loglog_slope

Hamiltonian = Union[OperatorSum, np.ndarray]


# ---------------------------------------------------------------- the pulse alphabet

def pulse_P(pair=(0, 1), n_qubits=None) -> Pulse:
    """``P = Ubar(-pi/2, 0) = exp(-i pi/2 Xbar)``."""
    return Pulse(ubar(-np.pi / 2, 0.0, pair, n_qubits), "P")


def pulse_Pi(pair=(0, 1), n_qubits=None) -> Pulse:
    """``Pi = exp(i pi Xbar) = Z Z`` (its own inverse)."""
    return Pulse(ubar(np.pi, 0.0, pair, n_qubits), "Π")


def pulse_Q(pair=(0, 1), n_qubits=None) -> Pulse:
    """``Q = Ubar(-pi/2, pi/2) = exp(-i pi/2 Ybar)``."""
    return Pulse(ubar(-np.pi / 2, np.pi / 2, pair, n_qubits), "Q")


def pulse_Lambda(pair=(0, 1), n_qubits=None) -> Pulse:
    """``Lambda = exp(i pi Ybar)`` (equal to ``Z Z`` as well)."""
    return Pulse(ubar(np.pi, np.pi / 2, pair, n_qubits), "Λ")


# ---------------------------------------------------------------- evolution

def _lift(u: np.ndarray, dim: int) -> np.ndarray:
    """Extend a system operator by the identity on the bath."""
    if u.shape[0] == dim:
        return u
    if dim % u.shape[0]:
        raise ValueError(f"operator of size {u.shape[0]} does not divide total dimension {dim}")
    return np.kron(u, np.eye(dim // u.shape[0]))


class _Propagators:
    """Caches eigendecompositions of ``H + drive`` per distinct drive."""

    def __init__(self, h: Hamiltonian):
        self.h = dense_of(h)
        self.dim = self.h.shape[0]
        self._eig: dict = {}

    def __call__(self, free: Free) -> np.ndarray:
        key = id(free.drive)
        if key not in self._eig:
            m = self.h if free.drive is None else self.h + _lift(dense_of(free.drive), self.dim)
            w, v = np.linalg.eigh((m + m.conj().T) / 2)
            self._eig[key] = (w, v, free.drive)
        w, v, _ = self._eig[key]
        return (v * np.exp(-1j * w * free.duration)) @ v.conj().T


def run_sequence(seq: PulseSequence, h: Hamiltonian) -> np.ndarray:
    """Exact propagator of ``seq`` under ``h``: the product of its items in written order."""
    props = _Propagators(h)
    out = np.eye(props.dim, dtype=complex)
    for it in seq:
        if isinstance(it, Free):
            out = out @ props(it)
        else:
            out = out @ _lift(it.unitary, props.dim)
    return out


@dataclass
class SymmetrizationGroup:
    """Set of pulse frames ``V_j`` with ``V_1 = I``; closure is optional (pulses need not form a group)."""

    elements: list
    weights: list = None

    def __post_init__(self):
        self.elements = [dense_of(v) for v in self.elements]
        if not self.elements:
            raise ValueError("need at least one frame")
        dim = self.elements[0].shape[0]
        if any(v.shape != (dim, dim) or not is_unitary(v) for v in self.elements):
            raise ValueError("frames must be unitaries of one size")
        if not np.allclose(self.elements[0], np.eye(dim), atol=1e-12):
            raise ValueError("the first frame must be the identity")
        if self.weights is None:
            self.weights = [1.0] * len(self.elements)
        if len(self.weights) != len(self.elements) or min(self.weights) < 0:
            raise ValueError("need one non-negative weight per frame")

    def __len__(self):
        return len(self.elements)

    def is_group(self, atol: float = 1e-10) -> bool:
        """Closure under products up to a global phase."""
        def in_set(m):
            for v in self.elements:
                overlap = np.vdot(v, m) / m.shape[0]
                if abs(abs(overlap) - 1) < atol and np.linalg.norm(m - overlap * v) < atol * m.shape[0]:
                    return True
            return False
        return all(in_set(a @ b) for a in self.elements for b in self.elements)


def toggled_frames(seq: PulseSequence) -> tuple[list[np.ndarray], list[Free], np.ndarray]:
    """Toggling-frame decomposition of a sequence.

    Returns ``(frames, segments, net)`` such that
    ``run_sequence(seq, H) = net @ prod_k V_k^dag exp(-i (H + drive_k) tau_k) V_k``
    (product in written order), where ``V_k`` is the product of the pulses to the right
    of segment ``k`` and ``net`` the product of all pulses.
    """
    items = list(seq)
    dim = max((p.unitary.shape[0] for p in seq.pulses), default=1)
    frames, segments = [], []
    acc = np.eye(dim, dtype=complex)
    for it in reversed(items):
        if isinstance(it, Pulse):
            acc = it.unitary @ acc
        else:
            frames.append(acc.copy())
            segments.append(it)
    frames.reverse()
    segments.reverse()
    return frames, segments, acc


def first_order_average(frames: Union[SymmetrizationGroup, Sequence[np.ndarray]], h: OperatorSum,
                        atol: float = 1e-13) -> OperatorSum:
    """``(1/|G|) sum_j V_j^dag H V_j`` in the Pauli basis (frames act on the system only)."""
    if isinstance(frames, SymmetrizationGroup):
        elements, weights = frames.elements, frames.weights
    else:
        elements = [dense_of(v) for v in frames]
        weights = [1.0] * len(elements)
    if not elements:
        raise ValueError("need at least one frame")
    m = dense_of(h)
    total = np.zeros_like(m)
    wsum = float(sum(weights))
    for v, w in zip(elements, weights):
        vl = _lift(v, m.shape[0])
        total += w * (vl.conj().T @ m @ vl)
    return OperatorSum.from_dense(total / wsum, h.n_qubits, h.bath_dim, atol=atol)


def average_hamiltonian(seq: PulseSequence, h: OperatorSum, atol: float = 1e-13) -> OperatorSum:
    """First-order (time-weighted) average of ``h`` plus segment drives over the toggling frames."""
    frames, segments, _ = toggled_frames(seq)
    m = dense_of(h)
    dim = m.shape[0]
    total = np.zeros_like(m)
    t_total = sum(s.duration for s in segments)
    if t_total == 0:
        raise ValueError("sequence has no free evolution")
    for v, s in zip(frames, segments):
        seg = m if s.drive is None else m + _lift(dense_of(s.drive), dim)
        vl = _lift(v, dim)
        total += s.duration * (vl.conj().T @ seg @ vl)
    return OperatorSum.from_dense(total / t_total, h.n_qubits, h.bath_dim, atol=atol)


def first_order_target(seq: PulseSequence, h: OperatorSum) -> np.ndarray:
    """``net @ exp(-i T H_avg)``: what the sequence equals to first order in the interval."""
    _, _, net = toggled_frames(seq)
    u = expm(average_hamiltonian(seq, h), seq.total_time)
    return _lift(net, u.shape[0]) @ u


def strip_pulses(seq: PulseSequence) -> PulseSequence:
    """Same free intervals (and drives) with all pulses removed: the no-decoupling baseline."""
    return PulseSequence([it for it in seq if isinstance(it, Free)])


# ---------------------------------------------------------------- sequence library

def seq_parity_kick(tau: float, pair=(0, 1), n_qubits=None) -> PulseSequence:
    """``[tau, P, tau, P^dag]``: turns ``Z1 B1 + Z2 B2`` into collective dephasing."""
    p = pulse_P(pair, n_qubits)
    return PulseSequence([Free(tau), p, Free(tau), p.dagger])


def _pulse_product(pulses, label: str) -> Pulse:
    u = pulses[0]
    for p in pulses[1:]:
        u = u @ p
    return Pulse(u, label)


def seq_block4(tau: float, n_qubits: int = 4) -> PulseSequence:
    """Nested sequence creating collective dephasing on blocks of four qubits.

    Inner: ``[tau, X_nn, tau, X_nn^dag]`` with ``X_nn = prod_j Ubar_(2j,2j+1)(-pi/2, 0)``;
    outer: ``[inner, X_nnn, inner, X_nnn^dag]`` with
    ``X_nnn = prod Ubar_(4b,4b+2)(-pi/2, 0) Ubar_(4b+1,4b+3)(-pi/2, 0)``.
    """
    n = n_qubits
    if n < 4 or n % 4:
        raise ValueError("block-of-4 sequence needs a multiple of 4 qubits")
    xnn = _pulse_product([ubar(-np.pi / 2, 0.0, (2 * j, 2 * j + 1), n) for j in range(n // 2)], "Xnn")
    nnn = []
    for b in range(n // 4):
        nnn += [ubar(-np.pi / 2, 0.0, (4 * b, 4 * b + 2), n), ubar(-np.pi / 2, 0.0, (4 * b + 1, 4 * b + 3), n)]
    xnnn = _pulse_product(nnn, "Xnnn")
    inner = PulseSequence([Free(tau), xnn, Free(tau), xnn.dagger])
    return inner + PulseSequence([xnnn]) + inner + PulseSequence([xnnn.dagger])


def seq_leak4(tau: float, pair=(0, 1), n_qubits=None) -> PulseSequence:
    """``[tau, Pi, tau, P, tau, Pi, tau, P^dag]``: removes leakage, Ybar and Zbar errors."""
    pi, p = pulse_Pi(pair, n_qubits), pulse_P(pair, n_qubits)
    return PulseSequence([Free(tau), pi, Free(tau), p, Free(tau), pi, Free(tau), p.dagger])


def seq_full10(tau: float, pair=(0, 1), n_qubits=None) -> PulseSequence:
    """Ten-pulse sequence ``[leak4, Q^dag, leak4, Q]``; only DFS-class terms survive."""
    q = pulse_Q(pair, n_qubits)
    block = seq_leak4(tau, pair, n_qubits)
    return block + PulseSequence([q.dagger]) + block + PulseSequence([q])


_AXES = {"X": 0.0, "Y": np.pi / 2}


def weak_gate_drive(axis: str, omega: float, pair=(0, 1), n_qubits=None, phi: float = 0.0) -> OperatorSum:
    """``omega X_phi_i X_phi_j`` with ``phi_i - phi_j`` = 0 (X axis) or pi/2 (Y axis).

    On the code this is ``omega Xbar`` or ``omega Ybar``.
    """
    if axis not in _AXES:
        raise ValueError(f"axis must be 'X' or 'Y', got {axis!r}")
    spec = PhaseGateSpec(0.0, phi + _AXES[axis], phi, tuple(pair))
    return omega * gate_generator(spec, n_qubits)


def interleave_weak_gate(axis: str, omega: float, t: float, pair=(0, 1), n_qubits=None,
                         pulses: str | None = None, allow_mismatch: bool = False) -> PulseSequence:
    """Gate drive on during all four intervals of a four-pulse decoupling cycle.

    X gates use ``[U~(t/4), Pi, U~(t/4), P, U~(t/4), Pi, U~(t/4), P^dag]``; Y gates use
    ``Lambda`` and ``Q`` instead. A mismatched ``pulses`` family averages the gate itself
    away and is rejected unless ``allow_mismatch`` is set (negative controls).
    """
    if axis not in _AXES:
        raise ValueError(f"axis must be 'X' or 'Y', got {axis!r}")
    matched = {"X": "P", "Y": "Q"}[axis]
    family = pulses or matched
    if family != matched and not allow_mismatch:
        raise ValueError(f"axis/pulse mismatch: {axis} gate with {family}-family pulses")
    if family == "P":
        big, half = pulse_Pi(pair, n_qubits), pulse_P(pair, n_qubits)
    elif family == "Q":
        big, half = pulse_Lambda(pair, n_qubits), pulse_Q(pair, n_qubits)
    else:
        raise ValueError(f"unknown pulse family {family!r}")
    drive = weak_gate_drive(axis, omega, pair, n_qubits)
    seg = lambda: Free(t / 4, drive, f"U~{axis}")  # noqa: E731
    return PulseSequence([seg(), big, seg(), half, seg(), big, seg(), half.dagger],
                         meta={"axis": axis, "omega": omega, "t": t, "pulses": family})


def euler_rotation(alpha: float, beta: float, gamma: float, omega: float = 1.0,
                   pair=(0, 1), n_qubits=None) -> PulseSequence:
    """Arbitrary encoded rotation ``exp(-i alpha Xbar) exp(-i beta Ybar) exp(-i gamma Xbar)``.

    Each non-zero angle becomes one weak-gate block (8 controls), so at most 24.
    """
    if omega <= 0:
        raise ValueError("drive strength must be positive")
    seq = PulseSequence()
    for axis, angle in (("X", alpha), ("Y", beta), ("X", gamma)):
        if angle == 0:
            continue
        seq = seq + interleave_weak_gate(axis, np.sign(angle) * omega, abs(angle) / omega, pair, n_qubits)
    return PulseSequence(seq.items, meta={"angles": (alpha, beta, gamma), "omega": omega})


def euler_target(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """2x2 logical matrix ``exp(-i alpha X) exp(-i beta Y) exp(-i gamma X)``."""
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]], dtype=complex)
    return expm(x, alpha) @ expm(y, beta) @ expm(x, gamma)


def synchronize_gate(cycle: PulseSequence, gate: Pulse, cycles_before: int = 1,
                     cycles_after: int = 1, atol: float = 1e-10) -> PulseSequence:
    """Place a fast gate between complete decoupling cycles.

    Only the scheduling contract is modelled: the gate sits on a cycle boundary, where
    the accumulated pulse product is the identity up to a phase.
    """
    if cycles_before < 0 or cycles_after < 0:
        raise ValueError("cycle counts must be non-negative")
    net = cycle.net_pulse()
    if net is not None:
        phase = net[0, 0] / abs(net[0, 0]) if abs(net[0, 0]) > 0.5 else None
        if phase is None or not np.allclose(net, phase * np.eye(net.shape[0]), atol=atol):
            raise ValueError("cycle does not close to the identity; no clean boundary for the gate")
    items = [*cycle.items * cycles_after, gate, *cycle.items * cycles_before]
    return PulseSequence(items, meta={"gate": gate.label, "cycles": (cycles_before, cycles_after)})


# ---------------------------------------------------------------- explicit targets

def collective_target(bath_col: np.ndarray, tau: float) -> np.ndarray:
    """``exp(-i (Z1+Z2) (x) B_col 2 tau)``."""
    h = OperatorSum.build([(1, "ZI", bath_col), (1, "IZ", bath_col)], 2, bath_col.shape[0])
    return expm(h, 2 * tau)


def sequence_residual(seq: PulseSequence, h: OperatorSum, target: np.ndarray | None = None) -> float:
    """Spectral distance between the exact sequence propagator and a target.

    The default target is the first-order (average-Hamiltonian) propagator.
    """
    if target is None:
        target = first_order_target(seq, h)
    return op_distance(run_sequence(seq, h), target)


def tau_scan(build: Callable[[float], PulseSequence], h: OperatorSum, taus,
             target: Callable[[float], np.ndarray] | None = None, jobs: int = 1,
             fit: bool = True) -> dict:
    """Residual and no-pulse baseline over a grid of intervals, plus the log-log slope.

    Points are independent; ``jobs > 1`` evaluates them on a thread pool and the
    output is ordered by grid index either way.
    """
    taus = [float(t) for t in taus]

    def point(tau):
        seq = build(tau)
        tgt = first_order_target(seq, h) if target is None else target(tau)
        return (op_distance(run_sequence(seq, h), tgt),
                op_distance(run_sequence(strip_pulses(seq), h), tgt))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(point, taus))
    else:
        results = [point(t) for t in taus]
    residual = np.array([r for r, _ in results])
    baseline = np.array([b for _, b in results])
    return {"tau": np.array(taus), "residual": residual, "baseline": baseline,
            "slope": fit_loglog_slope(taus, residual) if fit else None}


def theta_effective(h_avg: OperatorSum, axis: str, t: float, pair=(0, 1)) -> float:
    """Encoded rotation angle ``t * <axis-bar, H_avg> / <axis-bar, axis-bar>`` carried by ``h_avg``."""
    ops = logical_ops(pair, h_avg.n_qubits)
    gen = dense_of(ops.xbar if axis == "X" else ops.ybar)
    m = dense_of(h_avg)
    gen = _lift(gen, m.shape[0])
    return float(np.real(t * np.trace(gen @ m) / np.trace(gen @ gen)))
