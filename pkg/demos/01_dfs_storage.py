"""
Storing a qubit in a decoherence-free subspace
==============================================

Collective dephasing couples every qubit to the same bath operator through Z.
States with a fixed excess of zeros over ones only pick up a global phase, so
they keep their coherence; superpositions across different excesses do not.
"""
import math

import numpy as np

from erdsim import collective_dephasing, gaussian_dephase, gaussian_dephase_quadrature, make_dfs, random_bath
from erdsim.operators import evolve_reduced, expm, ket, purity

# A single qubit under random Gaussian phase kicks: the coherence shrinks as exp(-alpha).
a = b = 1 / math.sqrt(2)
for alpha in (0.1, math.log(2), 1.0, 3.0):
    rho = gaussian_dephase(a, b, alpha)
    quad = gaussian_dephase_quadrature(a, b, alpha)
    print(f"alpha={alpha:.3f}  |rho01|={abs(rho[0, 1]):.6f}  quadrature gap={abs(rho[0, 1] - quad[0, 1]):.1e}")

# The codes: bit strings grouped by (#0 - #1).
for k, lam in [(2, 0), (3, 1), (3, -1), (4, 0)]:
    code = make_dfs(k, lam)
    print(f"DFS_{k}({lam:+d}) dim {code.dim}: {', '.join(code.basis)}")

# A random code state and a random two-level bath, evolved for a long time.
bath = random_bath(dim=2, seed=3)
code = make_dfs(3, 1)
rng = np.random.Generator(np.random.PCG64(3))
amps = rng.standard_normal(code.dim) + 1j * rng.standard_normal(code.dim)
psi = code.encode(amps / np.linalg.norm(amps))
h = collective_dephasing(3, bath)
for tau in (0.1, 1.0, 10.0):
    rho = evolve_reduced(expm(h, tau), np.outer(psi, psi.conj()), bath.initial_state)
    print(f"tau={tau:5.1f}  code-state infidelity {abs(1 - np.real(psi.conj() @ rho @ psi)):.1e}")

# Mixing two different codes is not protected.
psi = (ket("01") + ket("00")) / math.sqrt(2)
h = collective_dephasing(2, bath)
for tau in (0.1, 1.0, 10.0):
    rho = evolve_reduced(expm(h, tau), np.outer(psi, psi.conj()), bath.initial_state)
    print(f"tau={tau:5.1f}  cross-code purity {purity(rho):.4f}")
