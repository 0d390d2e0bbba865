"""Two-photon quantum Rabi model simulator for circuit QED."""

from .fock import HilbertSpace, OperatorMatrix
from .models import ModelSpec, analytic_doublet_energies, analytic_shifts, build_hamiltonian
from .liouville import DensityMatrix, LindbladConfig, Liouvillian
from .scattering import DriveConfig, TransmissionPoint

__version__ = "0.1.0"

__all__ = [
    "HilbertSpace",
    "OperatorMatrix",
    "ModelSpec",
    "build_hamiltonian",
    "analytic_shifts",
    "analytic_doublet_energies",
    "LindbladConfig",
    "DensityMatrix",
    "Liouvillian",
    "DriveConfig",
    "TransmissionPoint",
    "__version__",
]
