"""Removing leakage couplings of a multi-level system by averaging with free-evolution conjugates.

Levels are 0-based here: the qubit lives on levels 0 and 1, everything from level 2 up is
leakage. Conjugating by ``U0(t) = exp(-i H0 t)`` multiplies entry ``(k, l)`` by
``exp(+i (E_k - E_l) t)``; at ``t = pi / (E_i - E_j)`` the ``(i, j)`` entry flips sign and
averaging with the original removes it. ``U0`` is diagonal, so the pulse itself cannot
drive any transition.

Inverse free evolution ``U0^dag`` is simulated exactly; physically it is only available
when the level spacings are rationally related.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .operators import is_hermitian
from .pulses import Free, Pulse, PulseSequence

QUBIT_LEVELS = (0, 1)


@dataclass(frozen=True, eq=False)
class LevelSystem:
    """``H = diag(E) + H_I`` with the qubit on levels 0 and 1."""

    energies: tuple
    h_int: np.ndarray

    def __post_init__(self):
        e = tuple(float(x) for x in self.energies)
        h = np.asarray(self.h_int, dtype=complex)
        if len(e) < 3:
            raise ValueError("need at least one leakage level (N >= 3)")
        if h.shape != (len(e), len(e)) or not is_hermitian(h):
            raise ValueError(f"H_I must be a Hermitian {len(e)}x{len(e)} matrix")
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "h_int", h)

    @property
    def n_levels(self) -> int:
        return len(self.energies)

    @property
    def h0(self) -> np.ndarray:
        return np.diag(np.asarray(self.energies, dtype=complex))

    @property
    def hamiltonian(self) -> np.ndarray:
        return self.h0 + self.h_int

    def free_evolution(self, t: float) -> np.ndarray:
        """``U0(t) = exp(-i H0 t)``, built directly as a diagonal matrix."""
        return np.diag(np.exp(-1j * np.asarray(self.energies) * t))


def leakage_pairs(n_levels: int) -> list[tuple[int, int]]:
    """Entries ``(q, k)`` coupling a qubit level ``q`` to a leakage level ``k``."""
    return [(q, k) for q in QUBIT_LEVELS for k in range(2, n_levels)]


def leakage_block(h: np.ndarray) -> np.ndarray:
    """Rows 0-1, columns 2.. of ``h`` (the Hermitian partner is implied)."""
    return np.asarray(h)[:2, 2:]


def leakage_norm(h: np.ndarray) -> float:
    return float(np.linalg.norm(leakage_block(h), ord=2)) if np.asarray(h).shape[0] > 2 else 0.0


def conjugate_free(h: np.ndarray, energies, t: float) -> np.ndarray:
    """``U0(t)^dag h U0(t)`` elementwise: ``h_kl exp(+i (E_k - E_l) t)``."""
    e = np.asarray(energies, dtype=float)
    return h * np.exp(1j * np.subtract.outer(e, e) * t)


def _gap(energies, target) -> float:
    i, j = target
    if i == j:
        raise ValueError("target must be an off-diagonal entry")
    gap = energies[i] - energies[j]
    if gap == 0:
        raise ValueError(f"levels {i} and {j} are degenerate; no pulse can separate them")
    return gap


def average_step(h: np.ndarray, energies, target: tuple[int, int]) -> tuple[np.ndarray, float]:
    """One averaging step ``(h + U0^dag h U0) / 2`` at ``t = pi / (E_i - E_j)``.

    Returns the new matrix and the duration ``t`` (negative for ``E_i < E_j``; the sign
    only reorders the pair). Entries whose gap ratio to the target is an odd integer are
    removed along with the target, entries with an even ratio are untouched.
    """
    h = np.asarray(h, dtype=complex)
    i, j = target
    t = np.pi / _gap(energies, target)
    out = (h + conjugate_free(h, energies, t)) / 2
    # the target and its partner vanish identically; clear the rounding
    out[i, j] = out[j, i] = 0.0
    return out, t


def gap_ratio(energies, entry: tuple[int, int], target: tuple[int, int]) -> Fraction:
    """Exact ``(E_k - E_l) / (E_i - E_j)`` from the given (float) energies."""
    k, l = entry
    num = Fraction(energies[k]) - Fraction(energies[l])
    den = Fraction(energies[target[0]]) - Fraction(energies[target[1]])
    if den == 0:
        raise ValueError("degenerate target")
    return num / den


def unaffected_entries(energies, target: tuple[int, int]) -> list[tuple[int, int]]:
    """Off-diagonal entries ``k < l`` left exactly unchanged by a step on ``target``."""
    n = len(energies)
    out = []
    for k in range(n):
        for l in range(k + 1, n):
            r = gap_ratio(energies, (k, l), target)
            if r.denominator == 1 and r.numerator % 2 == 0:
                out.append((k, l))
    return out


def eliminated_entries(energies, target: tuple[int, int]) -> list[tuple[int, int]]:
    """Off-diagonal entries ``k < l`` removed by a step on ``target`` (odd-integer ratios)."""
    n = len(energies)
    out = []
    for k in range(n):
        for l in range(k + 1, n):
            r = gap_ratio(energies, (k, l), target)
            if r.denominator == 1 and r.numerator % 2:
                out.append((k, l))
    return out


def _free_pulse(system: LevelSystem, t: float, inverse: bool) -> Pulse:
    u = system.free_evolution(t)
    return Pulse(u.conj().T, f"U0({t:.6g})†") if inverse else Pulse(u, f"U0({t:.6g})")


def eliminate_all_leakage(system: LevelSystem, threshold: float = 0.0, tol: float = 1e-12,
                          tau: float = 1e-2, max_steps: int | None = None
                          ) -> tuple[np.ndarray, PulseSequence]:
    """Repeat averaging steps until every leakage entry is below ``tol`` (or ``threshold``).

    Targets are picked greedily by decreasing ``|H_ij|``; the qubit entry ``(0, 1)`` is
    never targeted. Entries already below ``threshold`` are left alone.

    The schedule starts from one free interval ``tau`` and nests each step as
    ``[prev, U0^dag, prev, U0]``; to first order in ``tau`` it evolves under the returned
    Hamiltonian. ``meta["steps"]`` lists ``(target, duration)`` in the order applied.
    """
    h = system.hamiltonian
    e = system.energies
    stop = max(threshold, tol)
    steps = []
    seq = PulseSequence([Free(tau)])
    limit = max_steps if max_steps is not None else len(leakage_pairs(system.n_levels))
    while True:
        live = [(abs(h[p]), p) for p in leakage_pairs(system.n_levels) if abs(h[p]) >= stop]
        if not live:
            break
        if len(steps) >= limit:
            raise RuntimeError(f"leakage not removed after {limit} steps")
        _, target = max(live, key=lambda x: (x[0], [-v for v in x[1]]))
        h, t = average_step(h, e, target)
        steps.append((target, t))
        body = seq.items
        seq = PulseSequence([*body, _free_pulse(system, t, True), *body, _free_pulse(system, t, False)])
    return h, PulseSequence(seq.items, meta={"steps": steps, "tau": tau})
