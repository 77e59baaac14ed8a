"""Kazhdan-Lusztig ideals, pipe dreams, K-polynomials and Schubert multiplicities."""

from .errors import BudgetExceeded, InvariantViolation
from .perm import Permutation

__all__ = ["Permutation", "InvariantViolation", "BudgetExceeded"]
__version__ = "0.1.0"
