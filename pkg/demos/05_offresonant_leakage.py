"""
Removing leakage to higher levels
=================================

A qubit encoded in the two lowest levels of a many-level system leaks through
off-diagonal couplings. Conjugating by free evolution for half a beat period
flips the sign of one coupling; averaging with the original removes it. The
pulse is generated by the diagonal free Hamiltonian, so it cannot excite
anything by itself.
"""
import numpy as np

from erdsim import LevelSystem, average_step, eliminate_all_leakage, leakage_norm
from erdsim.offres import eliminated_entries, unaffected_entries

rng = np.random.Generator(np.random.PCG64(5))
x = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
system = LevelSystem((0.0, 1.0, 3.7, 5.3), 0.1 * (x + x.conj().T))
print("leakage before:", f"{leakage_norm(system.hamiltonian):.3f}")

h, schedule = eliminate_all_leakage(system)
for target, t in schedule.meta["steps"]:
    print(f"  averaged out {target} with t = {t:+.4f}")
print("leakage after:", leakage_norm(h))
print("diagonal unchanged:", np.array_equal(np.diag(h), np.diag(system.hamiltonian)))
print("pulses in schedule:", schedule.pulse_count)

# Degenerate leakage levels go together.
deg = LevelSystem((0.0, 1.0, 4.0, 4.0), system.h_int)
h1, _ = average_step(deg.hamiltonian, deg.energies, (0, 2))
print("degenerate pair after one step:", abs(h1[0, 2]), abs(h1[0, 3]))

# Integer gap ratios: odd ones vanish with the target, even ones survive untouched.
e = (0.0, 1.0, 2.0, 3.0)
print("removed with (0, 1):", eliminated_entries(e, (0, 1)))
print("untouched by (0, 1):", unaffected_entries(e, (0, 1)))
