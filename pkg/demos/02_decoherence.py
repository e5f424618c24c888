"""Imperfect records and the decay of coherence.

With copy angle theta < pi each environment qubit holds only a partial record.
The system's off-diagonal element in the pointer basis shrinks by cos(theta/2)
per record, and the mutual-information curve rises gradually instead of
jumping to a plateau.
"""

import numpy as np

from qdarwin.dynamics import ModelConfig, evolve_branching, pointer_coherence, system_state
from qdarwin.information import mi_curve, redundancy

theta = np.pi / 2
print("pointer coherence |rho_01| after branching, theta = pi/2")
for n in (1, 2, 4, 8):
    gs = evolve_branching(ModelConfig(n_env=n, copy_angle=theta))
    measured = pointer_coherence(system_state(gs))
    print(f"  N={n}: {measured:.6f}   (1/2)cos(theta/2)^N = {0.5 * np.cos(theta / 2) ** n:.6f}")

gs = evolve_branching(ModelConfig(n_env=8, copy_angle=theta))
curve = mi_curve(gs)
print(f"\nN=8, H_S = {curve.h_s:.4f} bits")
for p in curve.points:
    bar = "#" * int(round(20 * p.mean_mi / (2 * curve.h_s)))
    print(f"  m={p.m}  I={p.mean_mi:.4f}  {bar}")
print(redundancy(curve, 0.1))

print("\nredundancy against copy angle (N=8, delta=0.1)")
for theta in np.linspace(np.pi / 4, np.pi, 4):
    r = redundancy(mi_curve(evolve_branching(ModelConfig(n_env=8, copy_angle=theta))), 0.1)
    print(f"  theta={theta:.3f}  m*={r.m_star}  R={r.r_delta:.3g}")
