"""Time-fractional Schroedinger dynamics of a dipole-coupled two-qubit dimer.

Modules
-------
mlfunc
    Mittag-Leffler function for complex arguments.
qlinalg
    Small dense Hermitian linear algebra (Jacobi eigensolver, partial transpose).
dimer_model
    Dimer Hamiltonian, its eigensystem and dipole-dipole rates.
tfse
    Fractional evolution, density matrices and a Caputo integrator oracle.
qmeasures
    Coherence, entanglement and CHSH measures.
sweep_io
    Parameter sweeps, config parsing, CSV and SVG output.
"""

from .dimer_model import DimerParams, GeometryParams, collective_rates, eigensystem
from .estimators import FractionalDimer, ResourceMeasures
from .exceptions import FracDimerError
from .mlfunc import FractionalOrder, ml_eval, mittag_leffler
from .qmeasures import all_measures
from .sweep_io import SweepSpec, parse_config, run_sweep
from .tfse import InitialState, density_matrix, evolve

__version__ = "0.1.0"

__all__ = [
    "DimerParams",
    "GeometryParams",
    "collective_rates",
    "eigensystem",
    "FractionalDimer",
    "ResourceMeasures",
    "FracDimerError",
    "FractionalOrder",
    "ml_eval",
    "mittag_leffler",
    "all_measures",
    "SweepSpec",
    "parse_config",
    "run_sweep",
    "InitialState",
    "density_matrix",
    "evolve",
]
