"""Encoded qubits under dephasing: DFS codes, bang-bang decoupling and leakage elimination."""
from .decoupling import (SymmetrizationGroup, average_hamiltonian, collective_target, euler_rotation,
                         euler_target, first_order_average, first_order_target, interleave_weak_gate,
                         pulse_Lambda, pulse_P, pulse_Pi, pulse_Q, run_sequence, seq_block4, seq_full10,
                         seq_leak4, seq_parity_kick, sequence_residual, strip_pulses, synchronize_gate,
                         tau_scan, theta_effective, toggled_frames, weak_gate_drive)
from .dfs import (CLASS_BASIS, DfsCode, ErrorClass, LogicalOps, class_coefficients, class_component,
                  class_norms, classify, dfs_fidelity, logical_ops, make_dfs, product_code_isometry)
from .gates import (ExchangeHamiltonian, PhaseGateSpec, gate_generator, u4, u4_encoded, u_ij, ubar,
                    xxz_recoupling_demo, xy_universality_demo, zbar_rotation)
from .noise import (BathSpec, collective_dephasing, deph2_split, dephasing_block_split,
                    dephasing_hamiltonian, gaussian_dephase, gaussian_dephase_quadrature, random_bath)
from .offres import LevelSystem, average_step, eliminate_all_leakage, leakage_norm
from .operators import (DimensionError, OperatorSum, PauliString, commutator, expm, op_distance,
                        partial_trace_bath)
from .pulses import Free, Pulse, PulseSequence
from .verification import VerificationReport, fit_loglog_slope, geometric_grid

__version__ = "0.1.0"

__all__ = [
    "average_hamiltonian",
    "average_step",
    "BathSpec",
    "CLASS_BASIS",
    "class_coefficients",
    "class_component",
    "class_norms",
    "classify",
    "collective_dephasing",
    "collective_target",
    "commutator",
    "deph2_split",
    "dephasing_block_split",
    "dephasing_hamiltonian",
    "dfs_fidelity",
    "DfsCode",
    "DimensionError",
    "eliminate_all_leakage",
    "ErrorClass",
    "euler_rotation",
    "euler_target",
    "ExchangeHamiltonian",
    "expm",
    "first_order_average",
    "first_order_target",
    "fit_loglog_slope",
    "Free",
    "gate_generator",
    "gaussian_dephase",
    "gaussian_dephase_quadrature",
    "geometric_grid",
    "interleave_weak_gate",
    "leakage_norm",
    "LevelSystem",
    "logical_ops",
    "LogicalOps",
    "make_dfs",
    "op_distance",
    "OperatorSum",
    "partial_trace_bath",
    "PauliString",
    "PhaseGateSpec",
    "product_code_isometry",
    "Pulse",
    "pulse_Lambda",
    "pulse_P",
    "pulse_Pi",
    "pulse_Q",
    "PulseSequence",
    "random_bath",
    "run_sequence",
    "seq_block4",
    "seq_full10",
    "seq_leak4",
    "seq_parity_kick",
    "sequence_residual",
    "strip_pulses",
    "SymmetrizationGroup",
    "synchronize_gate",
    "tau_scan",
    "theta_effective",
    "toggled_frames",
    "u4",
    "u4_encoded",
    "u_ij",
    "ubar",
    "VerificationReport",
    "weak_gate_drive",
    "xxz_recoupling_demo",
    "xy_universality_demo",
    "zbar_rotation",
]
