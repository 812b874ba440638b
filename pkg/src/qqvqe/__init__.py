"""Photonic ququart VQE simulator with noise and readout-style mitigation."""

__version__ = "0.1.0"

from .experiments import VqeConfig, VqeRunResult, run_vqe
from .hamiltonian import MolecularHamiltonian, builtin_table
from .optim import OptimizerConfig

__all__ = [
    "MolecularHamiltonian",
    "OptimizerConfig",
    "VqeConfig",
    "VqeRunResult",
    "builtin_table",
    "run_vqe",
    "__version__",
]
