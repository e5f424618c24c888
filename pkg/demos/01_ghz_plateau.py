"""Perfect records: the classical plateau of a GHZ state.

A system qubit in |+> is copied onto N = 10 environment qubits with perfect
CNOT-like branching. Every fragment, however small, then carries the full
bit of information about the system, so the mutual-information curve jumps
to H_S at one qubit and stays there until the whole environment is held.
"""

import numpy as np

from qdarwin.dynamics import ModelConfig, run_model
from qdarwin.information import mi_curve, redundancy

gs = run_model(ModelConfig(n_env=10, copy_angle=np.pi, system_init="plus"))
curve = mi_curve(gs)

print(f"H_S = {curve.h_s:.6f} bits")
print(" m     f   mean I(S:F)  fragments")
for p in curve.points:
    print(f"{p.m:2d}  {p.f:4.1f}  {p.mean_mi:11.6f}  {p.n_fragments:9d}")

# One qubit out of ten already delivers (1 - delta) H_S, so R = N / 1.
for delta in (0.01, 0.1, 0.3):
    r = redundancy(curve, delta)
    print(f"delta={delta:<5} m*={r.m_star}  f_delta={r.f_delta}  R_delta={r.r_delta}")
