"""
Gates on the encoded qubit
==========================

The pair code {|01>, |10>} carries its own Pauli algebra built from two-body
operators. Exchange-type gates driven with laser phases act on it through the
relative phase only, and three X-type gates make any encoded Z rotation.
"""
import numpy as np

from erdsim import (PhaseGateSpec, logical_ops, make_dfs, u4, u4_encoded, u_ij, ubar,
                    xy_universality_demo, zbar_rotation)
from erdsim.gates import restrict_to_pairs
from erdsim.operators import PauliString, commutator, dense_of, expm, op_distance

ops = logical_ops()
code = make_dfs(2, 0)
xb, yb, zb = (dense_of(o) for o in (ops.xbar, ops.ybar, ops.zbar))

print("Xbar on the code:\n", code.restrict(ops.xbar).real)
print("||[Xbar, Ybar] - 2i Zbar|| =", op_distance(commutator(xb, yb), 2j * zb))
print("Xtilde on the code:", np.linalg.norm(dense_of(ops.xtilde) @ code.isometry))

# A full encoded pi rotation is a parity kick: it flips the sign of every leakage operator.
print("||exp(i pi Xbar) - ZZ|| =", op_distance(ubar(np.pi, 0.0), PauliString("ZZ").dense()))

# Shifting both laser phases together changes nothing on the code.
dphi = 0.4
ref = code.restrict(u_ij(PhaseGateSpec(0.9, dphi, 0.0)))
for common in (0.3, 1.7, -2.2):
    blk = code.restrict(u_ij(PhaseGateSpec(0.9, common + dphi, common)))
    print(f"common phase {common:+.1f}: block change {op_distance(blk, ref):.1e}")

# Z rotations from three X-type gates.
for theta in (0.2, 1.1):
    seq = zbar_rotation(theta)
    print(f"theta={theta}: {' '.join(seq.labels)}  error {op_distance(seq.net_pulse(), expm(zb, -theta)):.1e}")

# The four-body gate entangles two encoded qubits.
phis = [0.3, -0.5, 1.2, 0.1]
print("U4 restriction error:", op_distance(restrict_to_pairs(u4(phis), 2),
                                           u4_encoded(phis[0] - phis[1], phis[2] - phis[3])))

# With XY couplings only, two conjugations turn a neighbour coupling into an encoded ZZ.
rep = xy_universality_demo()
for name, d in rep.distances.items():
    print(f"{name:34s} {d:.1e}")
