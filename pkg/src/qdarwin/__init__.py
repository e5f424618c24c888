"""Numerical quantum Darwinism on dense state vectors.

Submodules:

* :mod:`qdarwin.hilbert` -- states, density operators, partial traces
* :mod:`qdarwin.dynamics` -- branching and environment scattering models
* :mod:`qdarwin.information` -- entropy, fragment mutual information, redundancy
* :mod:`qdarwin.classical_ecc` -- repetition code over a binary symmetric channel
* :mod:`qdarwin.cli` -- ``qdarwin`` command line
"""

__version__ = "0.1.0"
