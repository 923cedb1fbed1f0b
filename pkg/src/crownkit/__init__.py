"""Executable Lie theory for crown domains of SL(n, R)/SO(n).

Root systems and the crown cell, Iwasawa and Jordan-Chevalley
decompositions, the explicit SL(3, R) tube realization, the nilpotency
criterion for Stein quotients, and the Hermitian/rigid classification tables.
"""

from crownkit.config import DEFAULT_TOLERANCES, Tolerances
from crownkit.errors import CrownError

__all__ = ["CrownError", "Tolerances", "DEFAULT_TOLERANCES"]
__version__ = "0.1.0"
