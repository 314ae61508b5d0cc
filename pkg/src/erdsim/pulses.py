"""Pulse-sequence container shared by the gate, decoupling and off-resonance modules.

A sequence is written in operator order: ``[tau, P, tau, P^dag]`` means the
product ``U(tau) P U(tau) P^dag``, so the right-most item acts first in time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .operators import OperatorSum, dense_of, is_unitary


@dataclass(frozen=True, eq=False)
class Free:
    """Evolution for ``duration`` under the ambient Hamiltonian plus an optional system drive."""

    duration: float
    drive: Optional[Union[OperatorSum, np.ndarray]] = None
    label: str = "tau"

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError(f"negative free-evolution time {self.duration}")


@dataclass(frozen=True, eq=False)
class Pulse:
    """Instantaneous unitary acting on the system (or on system (x) bath when full-size)."""

    unitary: np.ndarray
    label: str

    def __post_init__(self):
        u = dense_of(self.unitary)
        if not is_unitary(u, 1e-10):
            raise ValueError(f"pulse {self.label!r} is not unitary")
        object.__setattr__(self, "unitary", u)

    @property
    def dagger(self) -> "Pulse":
        label = self.label[:-1] if self.label.endswith("\u2020") else self.label + "\u2020"
        return Pulse(self.unitary.conj().T, label)


Item = Union[Free, Pulse]


@dataclass(frozen=True, eq=False)
class PulseSequence:
    items: tuple = ()
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        for it in self.items:
            if not isinstance(it, (Free, Pulse)):
                raise TypeError(f"sequence items must be Free or Pulse, got {type(it).__name__}")

    def __add__(self, other: "PulseSequence") -> "PulseSequence":
        if not isinstance(other, PulseSequence):
            return NotImplemented
        return PulseSequence(self.items + other.items)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def pulses(self) -> list[Pulse]:
        return [it for it in self.items if isinstance(it, Pulse)]

    @property
    def pulse_count(self) -> int:
        return len(self.pulses)

    @property
    def control_count(self) -> int:
        """Strong pulses plus driven (gate) intervals."""
        return self.pulse_count + sum(1 for it in self.items if isinstance(it, Free) and it.drive is not None)

    @property
    def total_time(self) -> float:
        return float(sum(it.duration for it in self.items if isinstance(it, Free)))

    @property
    def labels(self) -> list[str]:
        return [it.label for it in self.items]

    def net_pulse(self) -> Optional[np.ndarray]:
        """Product of all pulses in written order (None for a pulse-free sequence)."""
        net = None
        for p in self.pulses:
            net = p.unitary if net is None else net @ p.unitary
        return net

    def listing(self) -> str:
        """Human-readable schedule, one ``label<TAB>duration`` line per item."""
        lines = []
        for it in self.items:
            if isinstance(it, Free):
                tag = it.label + ("*" if it.drive is not None else "")
                lines.append(f"{tag}\t{it.duration:.17g}")
            else:
                lines.append(f"{it.label}\t0")
        return "\n".join(lines)
