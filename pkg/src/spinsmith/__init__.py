"""spinsmith: compile electronic-structure Hamiltonians to 2-local spin form."""

from .pauli import PauliSum, PauliTerm

__all__ = ["PauliSum", "PauliTerm"]

__version__ = "0.1.0"
