"""Environment qubits that scatter off each other lose the record.

After perfect branching onto N = 8 qubits, random disjoint pairs of
environment qubits are coupled by cos(a/2) I + i sin(a/2) X⊗X. The system is
never touched, so its own state (and H_S) is unchanged, but the information
moves from single qubits into correlations between them: small fragments
stop being informative and the redundancy collapses.

A partial SWAP coupling, by contrast, does nothing here: branching states are
symmetric under exchanging environment qubits.
"""

import numpy as np

from qdarwin.dynamics import ModelConfig, run_model
from qdarwin.information import mi_curve, redundancy

for kind in ("flip", "swap"):
    print(f"scattering kind: {kind}")
    for rounds in (0, 1, 2, 5, 10):
        cfg = ModelConfig(n_env=8, copy_angle=np.pi, scattering_rounds=rounds,
                          scattering_angle=np.pi / 2, scattering_kind=kind, seed=7)
        curve = mi_curve(run_model(cfg))
        r = redundancy(curve, 0.1)
        head = " ".join(f"{v:.3f}" for v in curve.mean_mi[:5])
        print(f"  rounds={rounds:2d}  R_0.1={r.r_delta:4.1f}  I(m=0..4) = {head}")
